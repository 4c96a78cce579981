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

#include <optional>
#include <string>
#include <vector>

#include "supou/stable.hpp"

namespace supou {

/// Jumps of magnitude above 1: a two-sided Pareto family with tail index
/// gamma_idx and tail masses w_plus, w_minus, i.e. the measure of [x, inf)
/// equals w_plus * x^{-gamma_idx} for x >= 1. Governs the heavy tail of the
/// marginal law. Absent when w_plus + w_minus == 0.
struct BigJumpFamily {
    double gamma_idx = 1.5;
    double w_plus = 0.0;
    double w_minus = 0.0;

    bool present() const { return w_plus + w_minus > 0.0; }
    double total_mass() const { return w_plus + w_minus; }
};

/// Jumps of magnitude at most 1: a power family whose measure of [x, 1]
/// equals c_plus * (x^{-beta_idx} - 1) for beta_idx > 0 (density
/// beta c |x|^{-beta-1}), infinite activity. beta_idx == 0 denotes the finite
/// measure uniform on [-1, 1] \ {0} with masses c_plus, c_minus per side.
/// Governs small-scale activity. Absent when c_plus + c_minus == 0.
struct SmallJumpFamily {
    double beta_idx = 0.0;
    double c_plus = 0.0;
    double c_minus = 0.0;

    bool present() const { return c_plus + c_minus > 0.0; }
    double total_scale() const { return c_plus + c_minus; }
};

/// The model: drift a, Gaussian variance b, the two jump families and the
/// Gamma mixing law for the decay rate. Together these fix the law of the
/// stationary process and of its integral.
struct CharacteristicQuadruple {
    double a = 0.0;
    double b = 0.0;
    BigJumpFamily big_jumps;
    SmallJumpFamily small_jumps;
    PiGamma pi{1.0, 1.0};

    bool has_big_jumps() const { return big_jumps.present(); }
    bool has_small_jumps() const { return small_jumps.present(); }
    bool has_gaussian() const { return b != 0.0; }

    /// alpha, the memory exponent (origin exponent of the mixing density).
    double alpha() const { return pi.shape; }
    /// gamma, the marginal tail index; meaningful only with big jumps.
    double gamma() const { return big_jumps.gamma_idx; }
    /// beta, the small-jump activity index.
    double beta() const { return small_jumps.beta_idx; }

    /// Supremum of finite absolute-moment orders of the integrated process:
    /// gamma when big jumps are present, +infinity otherwise.
    double moment_sup() const;

    /// Tail weights (p, q) of the marginal law implied by the big-jump
    /// family, with the slowly varying factor equal to 1.
    TailWeights tail_weights() const;
};

/// Absolute tolerance used when rejecting parameter points that sit on an
/// excluded boundary between regimes.
inline constexpr double kBoundaryTol = 1e-9;

/// Checks every model constraint and returns one message per violation;
/// an empty result means the quadruple is usable by every operation that
/// applies to its present components.
std::vector<std::string> validate(const CharacteristicQuadruple& q);

/// The drift that makes the mean of the driving noise zero when the mean is
/// finite (gamma > 1): a = -gamma (w+ - w-) / (gamma - 1). Returns 0 in the
/// infinite-mean regime gamma < 1 and for the symmetric gamma == 1 case.
double centering_drift(const CharacteristicQuadruple& q);

/// The six regime cases of the moment-scaling classification; the letter
/// matches the panel labels used by the `figure` subcommand.
enum class RegimeCase { A_b0, B_b0, C_b0, D_b0, A_bn0, B_bn0 };

struct RegimeLabel {
    RegimeCase theorem_case;
    bool b_zero;

    /// Panel letter 'a'..'f'.
    char panel() const;
    std::string text() const;
};

/// Determines the unique regime of a validate-clean quadruple with big jumps
/// from (gamma, alpha, beta, b). Throws if the quadruple is invalid, has no
/// big jumps, or sits on an excluded boundary.
RegimeLabel classify(const CharacteristicQuadruple& q);

// Closed-form functionals of the jump families, used by the simulator and
// its oracles.

/// Mass of the small-jump family restricted to eps < |x| <= 1 (the measure
/// of sizes actually sampled at truncation level eps).
double small_jump_band_mass(const SmallJumpFamily& s, double eps);

/// First moment of the small-jump family restricted to eps < |x| <= 1.
double small_jump_band_mean(const SmallJumpFamily& s, double eps);

/// Variance functional v(eps) = integral of x^2 over |x| < eps, the matched
/// variance of the Gaussian surrogate for the sub-eps band.
double small_jump_subband_variance(const SmallJumpFamily& s, double eps);

/// Signed first moment of the big-jump family (finite iff gamma > 1).
double big_jump_mean(const BigJumpFamily& m);

}  // namespace supou
