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

#include <complex>

#include "supou/rng.hpp"

namespace supou {

/// Parameters of a stable law S_gamma(sigma, rho, c): stability index
/// gamma in (0,2), scale sigma > 0, skewness rho in [-1,1], location c.
/// The convention is fixed by stable_cumulant() below. For gamma == 1 only
/// the strictly stable symmetric case rho == 0 is supported.
struct StableParams {
    double gamma_idx;
    double sigma;
    double rho;
    double c = 0.0;
};

/// Right/left tail weights (p, q) of a regularly varying distribution
/// P(X > x) ~ p k x^{-gamma}, P(X <= -x) ~ q k x^{-gamma}, with the slowly
/// varying factor fixed to the constant k_const.
struct TailWeights {
    double p_w;
    double q_w;
    double k_const = 1.0;
};

/// Gamma(shape, rate) mixing law for the decay-rate coordinate. Its density
/// behaves like const * x^{shape-1} at the origin, so `shape` is the memory
/// exponent, and the mean shape/rate is finite.
struct PiGamma {
    double shape;
    double rate;

    double mean() const { return shape / rate; }
};

void validate_params(const StableParams& p);
void validate_params(const PiGamma& pi);

/// Cumulant (log characteristic) function of S_gamma(sigma, rho, c):
///   i c zeta - sigma^gamma |zeta|^gamma (1 - i rho sgn(zeta) chi(zeta, gamma))
/// with chi = tan(pi gamma / 2) for gamma != 1 and (pi/2) log|zeta| for
/// gamma == 1. Returns 0 at zeta == 0.
std::complex<double> stable_cumulant(const StableParams& params, double zeta);

/// Scale and skewness of the stable limit attracting a distribution with the
/// given tail weights:
///   sigma = (Gamma(2-gamma)/(1-gamma) * (p+q) k * cos(pi gamma/2))^{1/gamma}
///   rho   = (p-q)/(p+q)
/// The scale formula is undefined at gamma == 1 and such inputs are rejected.
StableParams sigma_rho_from_tails(double gamma_idx, const TailWeights& tails);

/// One stable variate via the Chambers-Mallows-Stuck transform, matching the
/// stable_cumulant() convention. gamma == 1 uses the Cauchy branch (rho == 0).
double sample_stable(const StableParams& params, RandomStream& rng);

/// Gamma(shape, rate) variate (Marsaglia-Tsang squeeze, with the boost step
/// for shape < 1).
double sample_gamma(double shape, double rate, RandomStream& rng);

/// Decay-rate variate xi ~ pi.
double sample_pi(const PiGamma& pi, RandomStream& rng);

/// Signed Pareto variate with |value| > 1: density gamma * w_sign *
/// |x|^{-gamma-1} normalized over both tails; the sign is positive with
/// probability w_plus / (w_plus + w_minus).
double sample_pareto_jump(double gamma_idx, double w_plus, double w_minus,
                          RandomStream& rng);

}  // namespace supou
