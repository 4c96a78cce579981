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
#include <optional>
#include <vector>

#include "supou/sim.hpp"
#include "supou/theory.hpp"

namespace supou {

/// Ensemble-averaged absolute moments E|X*(t_j)|^{q_i} on the (t, q) grid,
/// with standard errors and a median-of-batches alternative per cell.
/// Cell index is [j * q_count + i].
struct MomentTable {
    std::vector<double> times;
    std::vector<double> q_values;
    std::uint32_t n_paths = 0;
    int batching = 1;
    std::vector<double> mean;
    std::vector<double> se;
    std::vector<double> batch_median;
    /// Per-batch cell means, [b * cells + cell]; kept so that slope errors
    /// can be bootstrapped after streaming accumulation.
    std::vector<double> batch_mean;
    std::vector<std::uint32_t> batch_count;

    std::size_t cells() const { return times.size() * q_values.size(); }
    std::size_t cell(std::size_t j, std::size_t i) const { return j * q_values.size() + i; }

    /// Largest violation of the power-mean ordering
    /// m[j][i1]^{1/q1} <= m[j][i2]^{1/q2} for q1 <= q2, as a relative amount.
    double lyapunov_violation() const;

    /// Most negative discrete second difference of log m in q (0 when log m
    /// is convex on the grid).
    double log_convexity_violation() const;
};

/// Streaming moment accumulator. Paths are assigned to `batching` contiguous
/// index blocks; each block keeps running statistics in path order and the
/// blocks are folded in a fixed order at finalize. The result is therefore
/// byte-identical however the blocks were distributed over workers, as long
/// as each block sees its own paths in increasing index order.
class MomentAccumulator {
public:
    /// q_sup is the supremum of finite moment orders of the model; any
    /// requested q at or above it is rejected.
    MomentAccumulator(std::vector<double> times, std::vector<double> q_values,
                      std::uint32_t n_paths, int batching, double q_sup);

    int batch_of(std::uint32_t path_index) const;
    /// First (inclusive) and last (exclusive) path index of a batch.
    std::pair<std::uint32_t, std::uint32_t> batch_range(int b) const;

    /// Folds one path's values in. Thread-safe across batches: two workers
    /// may add concurrently only if they own disjoint batches.
    void add(std::uint32_t path_index, const std::vector<double>& xstar);

    MomentTable finalize() const;

private:
    std::size_t cellsInternal() const;

    std::vector<double> times_;
    std::vector<double> q_values_;
    std::uint32_t n_paths_;
    int batching_;
    // Welford triples per (batch, cell).
    std::vector<std::uint64_t> count_;
    std::vector<double> mean_;
    std::vector<double> m2_;
};

/// One-pass convenience wrapper over MomentAccumulator for in-memory
/// ensembles (tests, synthetic data). Paths may arrive in any order.
MomentTable accumulate_moments(const std::vector<PathSample>& paths,
                               std::vector<double> times, std::vector<double> q_values,
                               int batching, double q_sup);

enum class MomentEstimator { mean_of_paths, median_of_batches };

struct FitWindow {
    std::size_t j_lo;  // inclusive
    std::size_t j_hi;  // inclusive
};

/// Default window: drop the smallest `drop_frac` of grid times (transient),
/// keep the rest.
FitWindow default_window(std::size_t grid_count, double drop_frac = 0.25);

struct TauEstimate {
    std::vector<double> q_values;
    std::vector<double> tau_hat;
    std::vector<double> stderr_boot;
    FitWindow window{};
    MomentEstimator estimator = MomentEstimator::mean_of_paths;
};

/// Per-q log-log slope of the moment table over the window, with a
/// batch-resampling bootstrap standard error.
TauEstimate fit_tau(const MomentTable& table, FitWindow window,
                    MomentEstimator estimator = MomentEstimator::mean_of_paths,
                    int n_boot = 200);

struct Breakpoint {
    double q_break;
    double slope_lo;
    double slope_hi;
};

/// Best continuous two-segment fit to (q, tau_hat) over hinge positions on
/// the q grid; reported only when it beats the single line by a residual
/// sum-of-squares factor of at least `rss_ratio`.
std::optional<Breakpoint> fit_breakpoint(const TauEstimate& est, double rss_ratio = 2.0);

struct ComparisonRow {
    double q;
    double tau_hat;
    double se;
    double tau_theory;
    bool theory_is_bound;
    double deviation;  // tau_hat - tau_theory
    bool pass;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    double max_abs_deviation = 0.0;  // one-sided excess for bound rows
    bool all_pass = true;
};

/// Per-q deviation of the estimate from the theory curve; rows on bound
/// pieces pass one-sidedly (estimate may sit below the bound).
ComparisonReport compare(const TauEstimate& est, const ScalingFunction& theory,
                         double tolerance);

}  // namespace supou
