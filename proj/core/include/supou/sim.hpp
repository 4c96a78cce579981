// Copyright 2026 The supou Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "supou/model.hpp"
#include "supou/rng.hpp"

namespace supou {

/// One atom of the compound-Poisson part of the noise: decay rate xi drawn
/// from the mixing law, position s on the basis-time axis, and jump size z.
struct JumpAtom {
    double rate;
    double pos;
    double size;
};

/// Geometric evaluation grid t_j = t0 * ratio^j, j = 0..count-1. A log-log
/// slope fit needs at least 4 points.
struct TimeGrid {
    double t0 = 1.0;
    double ratio = 2.0;
    int count = 11;

    std::vector<double> times() const;
    double t_max() const;
    void check() const;
};

/// Integrated-process values of one realization on the grid, plus the
/// per-component split when requested. Fully determined by (seed, path_index)
/// and the model configuration.
struct PathSample {
    std::uint64_t seed = 0;
    std::uint32_t path_index = 0;
    std::vector<double> xstar;
    std::optional<std::vector<double>> x1;
    std::optional<std::vector<double>> x2;
    std::optional<std::vector<double>> x3;
};

struct SimOptions {
    double eps_cutoff = 1e-3;   // small-jump truncation level
    int n_ou = 64;              // mixture size for the Gaussian part
    std::optional<double> burn_in;  // basis-time truncation depth; default 50 + ln(n_paths)
    bool keep_components = false;

    double burn_in_or_default(std::uint32_t n_paths) const;
};

/// Contribution of one atom to the integrated process at time t:
///   z * e^s (1 - e^{-xi t}) / xi            for s < 0,
///   z * (1 - e^{-(xi t - s)}) / xi          for 0 <= s < xi t,
///   0                                       for s >= xi t (not yet born).
/// Evaluated in expm1 form, stable for xi t near 0.
double kernel_antiderivative(const JumpAtom& atom, double t);

/// Poisson field of big-jump atoms covering positions in
/// (-burn_in, xi * horizon) per atom, with intensity w+ + w- per unit
/// position. Atoms below -burn_in are truncated away. The expected atom
/// count is (w+ + w-) * (burn_in + horizon * E xi).
std::vector<JumpAtom> gen_big_jump_field(const CharacteristicQuadruple& q,
                                         double horizon, double burn_in,
                                         RandomStream& rng);

/// Same field construction for the size band eps < |z| <= 1 of the
/// small-jump family.
std::vector<JumpAtom> gen_small_jump_field(const CharacteristicQuadruple& q,
                                           double eps, double horizon,
                                           double burn_in, RandomStream& rng);

/// A stationary Ornstein-Uhlenbeck process advanced by exact joint draws of
/// (value, time integral) over arbitrary steps: no discretization bias.
class OrnsteinUhlenbeck {
public:
    /// Starts in the stationary law N(0, stationary_variance).
    OrnsteinUhlenbeck(double rate, double stationary_variance, RandomStream& rng);

    /// Advances time by h > 0 and returns the integral of the process over
    /// the step.
    double step(double h, RandomStream& rng);

    double value() const { return value_; }
    double rate() const { return rate_; }

    /// Stationary variance of the step integral: 2 v (h/xi - (1-e^{-xi h})/xi^2).
    static double integral_variance(double rate, double stationary_variance, double h);

private:
    double rate_;
    double var_;
    double value_;
};

/// Integrated big-jump component on the grid: per-atom closed forms plus the
/// centering drift a * t.
std::vector<double> simulate_x1_star(const CharacteristicQuadruple& q,
                                     const TimeGrid& grid, double burn_in,
                                     RandomStream& rng);

/// Integrated small-jump component: exact atoms for sizes above eps_cutoff,
/// a matched-variance Gaussian surrogate below it, and the deterministic
/// mean correction that keeps the driving noise centered.
std::vector<double> simulate_x2_star(const CharacteristicQuadruple& q,
                                     const TimeGrid& grid, double eps_cutoff,
                                     int n_ou, double burn_in, RandomStream& rng);

/// Integrated Gaussian component: an n_ou-fold mixture of exact OU
/// processes with rates drawn from the mixing law.
std::vector<double> simulate_x3_star(const CharacteristicQuadruple& q,
                                     const TimeGrid& grid, int n_ou,
                                     RandomStream& rng);

/// One full realization; pure function of (seed, path_index) given the
/// configuration, so ensembles can be partitioned freely across workers.
PathSample simulate_path(const CharacteristicQuadruple& q, const TimeGrid& grid,
                         const SimOptions& opts, std::uint64_t seed,
                         std::uint32_t path_index, std::uint32_t n_paths);

/// Streams n_paths independent realizations, in path-index order, into sink.
void simulate_ensemble(const CharacteristicQuadruple& q, const TimeGrid& grid,
                       const SimOptions& opts, std::uint64_t seed,
                       std::uint32_t n_paths,
                       const std::function<void(PathSample&&)>& sink);

}  // namespace supou
