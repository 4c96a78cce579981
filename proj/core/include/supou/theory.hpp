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
#include <span>
#include <string>
#include <vector>

#include "supou/model.hpp"

namespace supou {

enum class CurveKind { exact, upper_bound };

/// One linear piece tau(q) = slope * q + intercept on (q_lo, q_hi].
/// `bound` marks pieces that are only proven upper bounds.
struct TauSegment {
    double q_lo;
    double q_hi;
    double slope;
    double intercept;
    bool bound = false;

    double at(double q) const { return slope * q + intercept; }
};

/// A moment scaling function: continuous, convex, piecewise linear on
/// (0, domain_hi), vanishing at 0+. Orders at or above domain_hi have
/// infinite moments, so evaluation there yields no value.
class ScalingFunction {
public:
    ScalingFunction() = default;
    ScalingFunction(std::vector<TauSegment> segments, double domain_hi,
                    std::string label);

    /// Value at q; std::nullopt signals an infinite moment (q >= domain_hi).
    std::optional<double> operator()(double q) const;

    const std::vector<TauSegment>& segments() const { return segments_; }
    double domain_hi() const { return domain_hi_; }
    const std::string& label() const { return label_; }

    /// upper_bound if any piece is only a bound.
    CurveKind kind() const;

    /// Whether the piece covering q is only an upper bound.
    bool bound_at(double q) const;

    /// Interior slope-change points.
    std::vector<double> breakpoints() const;

    /// Record form: {case, domain_hi, breakpoints[], slopes[], kind} plus
    /// intercepts and per-segment kinds; domain_hi is null when infinite.
    std::string to_json() const;

private:
    std::vector<TauSegment> segments_;
    double domain_hi_ = 0.0;
    std::string label_;
};

/// Scaling function of the integrated process, by the closed-form regime
/// classification. Requires a validate-clean quadruple with big jumps (the
/// heavy-tail regimes); for models without big jumps compose the component
/// functions with tau_max instead. When only big jumps are present and the
/// regime has a kink, the piece above the kink is flagged as a bound.
ScalingFunction tau_total(const CharacteristicQuadruple& q);

enum class Component { X1, X2, X3 };

/// Scaling function of one component of the driving noise:
///   X1 - big jumps (domain ends at gamma; the piece above 1 + alpha is a
///        proven bound only),
///   X2 - small jumps (all moments finite),
///   X3 - Gaussian part (all moments finite, always linear).
/// Throws when the requested component is absent from the model.
ScalingFunction tau_component(const CharacteristicQuadruple& q, Component which);

/// Pointwise maximum of scaling functions, re-segmented at crossovers; the
/// domain is the intersection. A piece of the result is a bound exactly when
/// every input achieving the maximum there is a bound.
ScalingFunction tau_max(std::span<const ScalingFunction> fs);

/// Stability regime of the normalized big-jump component's limit law.
enum class LimitRegime { short_memory_gamma, long_memory_one_plus_alpha };

/// Parameters of the stable law attracting the normalized big-jump
/// component: index min(gamma, 1 + alpha) with the matching scale and
/// skewness.
struct LimitLawParams {
    double stability;
    double scale;
    double skew;
    LimitRegime regime;
};

LimitLawParams limit_params(const CharacteristicQuadruple& q);

}  // namespace supou
