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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>

#include "supou/model.hpp"
#include "supou/rng.hpp"
#include "support/oracles.hpp"

using namespace supou;

namespace {

CharacteristicQuadruple make(double gamma, double alpha, double beta, double b,
                             double w_plus = 0.5, double w_minus = 0.5,
                             double c_plus = 0.5, double c_minus = 0.5,
                             double pi_rate = 1.0)
{
    CharacteristicQuadruple q;
    q.big_jumps = {gamma, w_plus, w_minus};
    q.small_jumps = {beta, c_plus, c_minus};
    q.b = b;
    q.pi = {alpha, pi_rate};
    q.a = (q.has_big_jumps() && gamma > 1.0) ? centering_drift(q) : 0.0;
    return q;
}

bool mentions(const std::vector<std::string>& v, const std::string& needle)
{
    for (const auto& s : v)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("validate flags boundary and range violations")
{
    CHECK(mentions(validate(make(1.5, 0.5, 2.0, 0.0)), "beta"));
    CHECK(mentions(validate(make(1.5, 0.5, 1.5, 0.0)), "beta = 1 + alpha"));
    CHECK(validate(make(1.5, 0.7, 0.3, 0.0)).empty());

    CHECK(mentions(validate(make(1.0, 0.5, 0.3, 0.0, 1.0, 0.0)), "symmetric"));
    CHECK(validate(make(1.0, 0.5, 0.3, 0.0, 1.0, 1.0)).empty());

    // gamma = 2/(2 - alpha) excluded only when the Gaussian part is present.
    CHECK(mentions(validate(make(4.0 / 3.0, 0.5, 0.3, 1.0)), "2/(2 - alpha)"));
    CHECK(validate(make(4.0 / 3.0, 0.5, 0.3, 0.0)).empty());

    CHECK(mentions(validate(make(2.3, 0.5, 0.3, 0.0)), "gamma"));
    CHECK(validate(make(1.6, 0.5, 1.9, 0.0)).empty());

    CharacteristicQuadruple empty;
    CHECK(mentions(validate(empty), "empty"));

    // Gaussian-only and small-jump-only models are legitimate.
    CharacteristicQuadruple gauss;
    gauss.b = 1.0;
    gauss.pi = {1.5, 1.0};
    CHECK(validate(gauss).empty());
    CharacteristicQuadruple small = make(1.5, 0.5, 0.5, 0.0, 0.0, 0.0);
    CHECK(validate(small).empty());

    // Mis-centered drift is rejected; the auto-centered one passes.
    CharacteristicQuadruple off = make(1.5, 0.7, 0.3, 0.0, 1.0, 0.0);
    off.a += 0.5;
    CHECK(mentions(validate(off), "drift"));
}

TEST_CASE("centering drift closed form and quadrature oracle")
{
    CHECK(centering_drift(make(1.5, 0.5, 0.3, 0.0, 1.0, 1.0)) == 0.0);
    CHECK(centering_drift(make(1.5, 0.5, 0.3, 0.0, 1.0, 0.0)) ==
          doctest::Approx(-3.0).epsilon(1e-14));
    CHECK(centering_drift(make(0.8, 0.5, 0.3, 0.0, 1.0, 0.3)) == 0.0);

    // a + integral of x over the big-jump measure = 0, integral by
    // quadrature after x = e^y.
    for (const auto& [g, wp, wm] : {std::tuple{1.5, 1.0, 0.0}, {1.7, 0.3, 0.9},
                                    {1.2, 2.0, 0.5}}) {
        const auto q = make(g, 0.1, 0.0, 0.0, wp, wm, 0.0, 0.0);
        const double ymax = 60.0 / (g - 1.0);
        const double pos = oracle::integrate(
            [&](double y) { return g * wp * std::exp(-(g - 1.0) * y); }, 0.0, ymax, 1e-13);
        const double neg = oracle::integrate(
            [&](double y) { return g * wm * std::exp(-(g - 1.0) * y); }, 0.0, ymax, 1e-13);
        CHECK(std::abs(q.a + (pos - neg)) < 1e-10);
    }
}

TEST_CASE("regime classification examples")
{
    CHECK(classify(make(1.5, 0.7, 0.3, 0.0)).theorem_case == RegimeCase::A_b0);
    CHECK(classify(make(1.8, 0.4, 0.3, 0.0)).theorem_case == RegimeCase::B_b0);
    CHECK(classify(make(1.8, 0.4, 1.6, 0.0)).theorem_case == RegimeCase::C_b0);
    CHECK(classify(make(1.5, 0.4, 1.8, 0.0)).theorem_case == RegimeCase::D_b0);
    CHECK(classify(make(1.2, 1.5, 0.3, 1.0)).theorem_case == RegimeCase::A_bn0);
    CHECK(classify(make(1.7, 0.5, 0.3, 1.0)).theorem_case == RegimeCase::B_bn0);

    CHECK(classify(make(1.5, 0.7, 0.3, 0.0)).panel() == 'a');
    CHECK(classify(make(1.7, 0.5, 0.3, 1.0)).panel() == 'f');

    CHECK_THROWS(classify(make(1.5, 0.5, 1.5, 0.0)));  // boundary rejected upstream
}

TEST_CASE("classification is total and b-consistent on random interior models")
{
    RandomStream rng(21, 0);
    int checked = 0;
    while (checked < 10000) {
        const double gamma = rng.uniform(0.05, 1.95);
        const double alpha = rng.uniform(0.05, 1.8);
        const double beta = rng.uniform(0.0, 1.99);
        if (std::abs(gamma - 1.0 - alpha) < 1e-6) continue;
        if (std::abs(beta - 1.0 - alpha) < 1e-6) continue;
        if (std::abs(gamma - 1.0) < 1e-6) continue;
        if (alpha < 1.0 && std::abs(gamma - 2.0 / (2.0 - alpha)) < 1e-6) continue;
        const auto q0 = make(gamma, alpha, beta, 0.0, 0.4, 0.6, 0.3, 0.3, 2.0);
        const auto q1 = make(gamma, alpha, beta, 0.7, 0.4, 0.6, 0.3, 0.3, 2.0);
        REQUIRE(validate(q0).empty());
        REQUIRE(validate(q1).empty());
        const auto l0 = classify(q0);
        const auto l1 = classify(q1);
        CHECK(l0.b_zero);
        CHECK(!l1.b_zero);
        CHECK((l0.theorem_case == RegimeCase::A_b0 || l0.theorem_case == RegimeCase::B_b0 ||
               l0.theorem_case == RegimeCase::C_b0 || l0.theorem_case == RegimeCase::D_b0));
        CHECK((l1.theorem_case == RegimeCase::A_bn0 || l1.theorem_case == RegimeCase::B_bn0));
        ++checked;
    }
}

TEST_CASE("small-jump family functionals")
{
    const SmallJumpFamily s{0.5, 0.5, 0.5};
    CHECK(small_jump_band_mass(s, 1e-3) ==
          doctest::Approx(std::pow(10.0, 1.5) - 1.0).epsilon(1e-12));
    CHECK(small_jump_subband_variance(s, 1e-3) ==
          doctest::Approx(0.5 * std::pow(1e-3, 1.5) / 1.5).epsilon(1e-12));

    // Quadrature oracles, with x = v^2 smoothing the endpoint. Per side the
    // density is beta c x^{-beta-1} = 0.25 x^{-1.5}.
    const double mass = oracle::integrate(
        [](double v) { return 2.0 * v * 0.25 * std::pow(v * v, -1.5); },
        std::sqrt(1e-3), 1.0, 1e-12);
    CHECK(small_jump_band_mass(s, 1e-3) == doctest::Approx(2.0 * mass).epsilon(1e-9));
    // x^2 * density * dx pulls back to 0.5 v^2 dv per side.
    const double var = oracle::integrate([](double v) { return 0.5 * v * v; }, 0.0,
                                         std::sqrt(1e-3), 1e-18);
    CHECK(small_jump_subband_variance(s, 1e-3) ==
          doctest::Approx(2.0 * var).epsilon(1e-7));

    // Asymmetric band mean against quadrature.
    const SmallJumpFamily a{0.7, 0.8, 0.2};
    const double mean_pos = oracle::integrate(
        [](double x) { return x * 0.7 * 0.8 * std::pow(x, -1.7); }, 1e-2, 1.0, 1e-13);
    const double mean_neg = oracle::integrate(
        [](double x) { return x * 0.7 * 0.2 * std::pow(x, -1.7); }, 1e-2, 1.0, 1e-13);
    CHECK(small_jump_band_mean(a, 1e-2) ==
          doctest::Approx(mean_pos - mean_neg).epsilon(1e-9));

    // beta = 0: finite uniform family.
    const SmallJumpFamily u{0.0, 0.3, 0.7};
    CHECK(small_jump_band_mass(u, 0.5) == doctest::Approx(1.0));
    CHECK(small_jump_band_mean(u, 0.5) == doctest::Approx(-0.2));
    CHECK(small_jump_subband_variance(u, 0.5) == 0.0);
}

TEST_CASE("moment supremum and tail weights")
{
    CHECK(make(1.5, 0.5, 0.3, 0.0).moment_sup() == doctest::Approx(1.5));
    CHECK(std::isinf(make(1.5, 0.5, 0.3, 1.0, 0.0, 0.0).moment_sup()));
    const auto tw = make(1.6, 0.5, 0.3, 0.0, 1.0, 0.2).tail_weights();
    CHECK(tw.p_w == doctest::Approx(1.0 / 1.6));
    CHECK(tw.q_w == doctest::Approx(0.2 / 1.6));
}
