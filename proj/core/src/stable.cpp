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

#include "supou/stable.hpp"

#include <cmath>
#include <stdexcept>

namespace supou {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void validate_params(const StableParams& p)
{
    if (!(p.gamma_idx > 0.0 && p.gamma_idx < 2.0))
        throw std::invalid_argument("stable: gamma must lie in (0, 2)");
    if (!(p.sigma > 0.0))
        throw std::invalid_argument("stable: sigma must be positive");
    if (!(p.rho >= -1.0 && p.rho <= 1.0))
        throw std::invalid_argument("stable: rho must lie in [-1, 1]");
    if (p.gamma_idx == 1.0 && p.rho != 0.0)
        throw std::invalid_argument("stable: gamma == 1 requires rho == 0");
}

void validate_params(const PiGamma& pi)
{
    if (!(pi.shape > 0.0) || !(pi.rate > 0.0))
        throw std::invalid_argument("pi: shape and rate must be positive");
}

std::complex<double> stable_cumulant(const StableParams& params, double zeta)
{
    validate_params(params);
    if (zeta == 0.0) return {0.0, 0.0};
    const double g = params.gamma_idx;
    const double sgn = zeta > 0.0 ? 1.0 : -1.0;
    const double chi = (g != 1.0) ? std::tan(kPi * g / 2.0)
                                  : (kPi / 2.0) * std::log(std::abs(zeta));
    const double amp = std::pow(params.sigma, g) * std::pow(std::abs(zeta), g);
    return std::complex<double>(-amp, params.c * zeta + amp * params.rho * sgn * chi);
}

StableParams sigma_rho_from_tails(double gamma_idx, const TailWeights& tails)
{
    if (!(gamma_idx > 0.0 && gamma_idx < 2.0))
        throw std::invalid_argument("sigma_rho_from_tails: gamma must lie in (0, 2)");
    if (gamma_idx == 1.0)
        throw std::domain_error(
            "sigma_rho_from_tails: the scale formula is undefined at gamma == 1");
    if (!(tails.p_w >= 0.0 && tails.q_w >= 0.0 && tails.p_w + tails.q_w > 0.0))
        throw std::invalid_argument("sigma_rho_from_tails: need p, q >= 0 with p + q > 0");
    if (!(tails.k_const > 0.0))
        throw std::invalid_argument("sigma_rho_from_tails: k must be positive");

    const double mass = (tails.p_w + tails.q_w) * tails.k_const;
    // Gamma(2-g)/(1-g)*cos(pi g/2) is positive on both sides of g = 1.
    const double scale_pow = std::tgamma(2.0 - gamma_idx) / (1.0 - gamma_idx) * mass *
                             std::cos(kPi * gamma_idx / 2.0);
    StableParams out;
    out.gamma_idx = gamma_idx;
    out.sigma = std::pow(scale_pow, 1.0 / gamma_idx);
    out.rho = (tails.p_w - tails.q_w) / (tails.p_w + tails.q_w);
    out.c = 0.0;
    return out;
}

double sample_stable(const StableParams& params, RandomStream& rng)
{
    validate_params(params);
    const double g = params.gamma_idx;
    const double u = kPi * (rng.uniform() - 0.5);  // uniform on (-pi/2, pi/2)

    if (g == 1.0) {
        // Symmetric Cauchy branch.
        return params.sigma * std::tan(u) + params.c;
    }

    const double w = rng.exponential();
    const double tan_phi = params.rho * std::tan(kPi * g / 2.0);
    const double theta0 = std::atan(tan_phi) / g;
    const double pre = std::pow(1.0 + tan_phi * tan_phi, 0.5 / g);
    const double x = pre * std::sin(g * (u + theta0)) /
                     std::pow(std::cos(u), 1.0 / g) *
                     std::pow(std::cos(u - g * (u + theta0)) / w, (1.0 - g) / g);
    return params.sigma * x + params.c;
}

double sample_gamma(double shape, double rate, RandomStream& rng)
{
    if (!(shape > 0.0) || !(rate > 0.0))
        throw std::invalid_argument("sample_gamma: shape and rate must be positive");

    double boost = 1.0;
    if (shape < 1.0) {
        boost = std::pow(rng.uniform(), 1.0 / shape);
        shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return boost * d * v / rate;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return boost * d * v / rate;
    }
}

double sample_pi(const PiGamma& pi, RandomStream& rng)
{
    validate_params(pi);
    return sample_gamma(pi.shape, pi.rate, rng);
}

double sample_pareto_jump(double gamma_idx, double w_plus, double w_minus,
                          RandomStream& rng)
{
    if (!(gamma_idx > 0.0))
        throw std::invalid_argument("sample_pareto_jump: gamma must be positive");
    if (!(w_plus >= 0.0 && w_minus >= 0.0 && w_plus + w_minus > 0.0))
        throw std::invalid_argument("sample_pareto_jump: need w+ , w- >= 0 with w+ + w- > 0");
    const double mag = std::pow(rng.uniform(), -1.0 / gamma_idx);
    const double sign = rng.uniform() * (w_plus + w_minus) < w_plus ? 1.0 : -1.0;
    return sign * mag;
}

}  // namespace supou
