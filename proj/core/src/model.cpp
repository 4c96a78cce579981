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

#include "supou/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace supou {

namespace {

bool near(double x, double y) { return std::abs(x - y) < kBoundaryTol; }

}  // namespace

double CharacteristicQuadruple::moment_sup() const
{
    return has_big_jumps() ? big_jumps.gamma_idx
                           : std::numeric_limits<double>::infinity();
}

TailWeights CharacteristicQuadruple::tail_weights() const
{
    if (!has_big_jumps())
        throw std::logic_error("tail_weights: model has no big-jump component");
    return TailWeights{big_jumps.w_plus / big_jumps.gamma_idx,
                       big_jumps.w_minus / big_jumps.gamma_idx, 1.0};
}

std::vector<std::string> validate(const CharacteristicQuadruple& q)
{
    std::vector<std::string> v;
    const double alpha = q.pi.shape;

    if (!(q.pi.shape > 0.0)) v.push_back("pi shape (alpha) must be > 0");
    if (!(q.pi.rate > 0.0)) v.push_back("pi rate must be > 0");
    if (q.b < 0.0) v.push_back("Gaussian variance b must be >= 0");
    if (q.big_jumps.w_plus < 0.0 || q.big_jumps.w_minus < 0.0)
        v.push_back("big-jump weights w+/w- must be >= 0");
    if (q.small_jumps.c_plus < 0.0 || q.small_jumps.c_minus < 0.0)
        v.push_back("small-jump scales c+/c- must be >= 0");
    if (!q.has_big_jumps() && !q.has_small_jumps() && !q.has_gaussian())
        v.push_back("model is empty: need a jump family or b > 0");

    if (q.has_big_jumps()) {
        const double g = q.big_jumps.gamma_idx;
        if (!(g > 0.0) || !(g < 2.0)) {
            v.push_back("gamma must lie in (0, 2)");
        } else {
            if (q.pi.shape > 0.0 && near(g, 1.0 + alpha))
                v.push_back("gamma = 1 + alpha excluded (regime boundary)");
            if (near(g, 1.0) && q.big_jumps.w_plus != q.big_jumps.w_minus)
                v.push_back("gamma = 1 requires symmetric tails w+ = w-");
            if (q.has_gaussian() && alpha > 0.0 && alpha < 1.0 &&
                near(g, 2.0 / (2.0 - alpha)))
                v.push_back("gamma = 2/(2 - alpha) excluded (regime boundary, b != 0)");
            if (g > 1.0 && !near(g, 1.0)) {
                const double want = centering_drift(q);
                if (std::abs(q.a - want) > 1e-9 * std::max(1.0, std::abs(want)))
                    v.push_back("drift a must center the finite-mean model (a = -gamma (w+ - w-)/(gamma - 1))");
            }
        }
    }

    if (q.has_small_jumps()) {
        const double beta = q.small_jumps.beta_idx;
        if (!(beta >= 0.0) || !(beta < 2.0)) {
            v.push_back("beta must lie in [0, 2)");
        } else if (q.pi.shape > 0.0 && near(beta, 1.0 + alpha)) {
            v.push_back("beta = 1 + alpha excluded (regime boundary)");
        }
    }

    return v;
}

double centering_drift(const CharacteristicQuadruple& q)
{
    if (!q.has_big_jumps()) return 0.0;
    const double g = q.big_jumps.gamma_idx;
    if (near(g, 1.0)) {
        if (q.big_jumps.w_plus != q.big_jumps.w_minus)
            throw std::domain_error("centering_drift: gamma == 1 requires symmetric tails");
        return 0.0;
    }
    if (g < 1.0) return 0.0;  // infinite mean, no centering
    return -big_jump_mean(q.big_jumps);
}

char RegimeLabel::panel() const
{
    switch (theorem_case) {
        case RegimeCase::A_b0: return 'a';
        case RegimeCase::B_b0: return 'b';
        case RegimeCase::C_b0: return 'c';
        case RegimeCase::D_b0: return 'd';
        case RegimeCase::A_bn0: return 'e';
        case RegimeCase::B_bn0: return 'f';
    }
    return '?';
}

std::string RegimeLabel::text() const
{
    const char kCase[] = {'a', 'b', 'c', 'd', 'a', 'b'};
    const int i = static_cast<int>(theorem_case);
    std::string s = b_zero ? "no-Gaussian case (" : "Gaussian case (";
    s += kCase[i];
    s += ')';
    return s;
}

RegimeLabel classify(const CharacteristicQuadruple& q)
{
    const auto violations = validate(q);
    if (!violations.empty())
        throw std::invalid_argument("classify: invalid model: " + violations.front());
    if (!q.has_big_jumps())
        throw std::invalid_argument("classify: regime requires a big-jump component");

    const double g = q.gamma();
    const double alpha = q.alpha();
    // Absent small jumps behave like a zero activity index.
    const double beta = q.has_small_jumps() ? q.beta() : 0.0;

    if (!q.has_gaussian()) {
        if (g < 1.0 + alpha) return {RegimeCase::A_b0, true};
        if (beta < 1.0 + alpha) return {RegimeCase::B_b0, true};
        return beta <= g ? RegimeLabel{RegimeCase::C_b0, true}
                         : RegimeLabel{RegimeCase::D_b0, true};
    }
    if (alpha >= 1.0 || g < 2.0 / (2.0 - alpha)) return {RegimeCase::A_bn0, false};
    return {RegimeCase::B_bn0, false};
}

double small_jump_band_mass(const SmallJumpFamily& s, double eps)
{
    if (!s.present()) return 0.0;
    if (s.beta_idx == 0.0) return s.total_scale();
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("small_jump_band_mass: eps must lie in (0, 1)");
    return s.total_scale() * (std::pow(eps, -s.beta_idx) - 1.0);
}

double small_jump_band_mean(const SmallJumpFamily& s, double eps)
{
    if (!s.present()) return 0.0;
    const double d = s.c_plus - s.c_minus;
    if (d == 0.0) return 0.0;
    if (s.beta_idx == 0.0) return d * 0.5;  // uniform magnitude on (0, 1]
    const double beta = s.beta_idx;
    if (beta == 1.0) return d * std::log(1.0 / eps);
    return d * beta * (1.0 - std::pow(eps, 1.0 - beta)) / (1.0 - beta);
}

double small_jump_subband_variance(const SmallJumpFamily& s, double eps)
{
    if (!s.present() || s.beta_idx == 0.0) return 0.0;
    return s.total_scale() * s.beta_idx * std::pow(eps, 2.0 - s.beta_idx) /
           (2.0 - s.beta_idx);
}

double big_jump_mean(const BigJumpFamily& m)
{
    if (!m.present()) return 0.0;
    const double g = m.gamma_idx;
    if (g <= 1.0)
        throw std::domain_error("big_jump_mean: first moment infinite for gamma <= 1");
    return g * (m.w_plus - m.w_minus) / (g - 1.0);
}

}  // namespace supou
