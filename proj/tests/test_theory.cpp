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
#include <vector>

#include "supou/rng.hpp"
#include "supou/theory.hpp"
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

double at(const ScalingFunction& f, double q)
{
    const auto v = f(q);
    REQUIRE(v.has_value());
    return *v;
}

}  // namespace

TEST_CASE("total scaling function closed forms")
{
    CHECK(at(tau_total(make(1.5, 0.7, 0.3, 0.0)), 0.9) == doctest::Approx(0.6).epsilon(1e-13));

    const auto fb = tau_total(make(1.8, 0.4, 0.3, 0.0));
    CHECK(at(fb, 1.4) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(at(fb, 1.7) == doctest::Approx(1.3).epsilon(1e-13));

    CHECK(at(tau_total(make(1.7, 0.5, 0.3, 1.0)), 1.0) ==
          doctest::Approx(0.75).epsilon(1e-13));

    SUBCASE("domain is open at the tail index")
    {
        const auto f = tau_total(make(1.5, 0.7, 0.3, 0.0));
        CHECK(!f(1.5).has_value());
        CHECK(!f(2.0).has_value());
        CHECK(f(1.499999).has_value());
    }
}

TEST_CASE("component scaling functions")
{
    SUBCASE("big jumps: exact below 1 + alpha, a bound above")
    {
        const auto f = tau_component(make(1.8, 0.4, 0.3, 0.0), Component::X1);
        CHECK(at(f, 1.0) == doctest::Approx(1.0 / 1.4).epsilon(1e-13));
        CHECK(at(f, 1.6) == doctest::Approx(1.2).epsilon(1e-13));
        CHECK(!f.bound_at(1.0));
        CHECK(f.bound_at(1.6));
        CHECK(f.kind() == CurveKind::upper_bound);

        const auto g = tau_component(make(1.2, 0.7, 0.3, 0.0), Component::X1);
        CHECK(at(g, 1.0) == doctest::Approx(1.0 / 1.2).epsilon(1e-13));
        CHECK(g.kind() == CurveKind::exact);
    }

    SUBCASE("small jumps, short memory: even-order kink with a chord bound")
    {
        const auto f = tau_component(make(1.2, 1.5, 0.3, 0.0), Component::X2);
        CHECK(at(f, 2.0) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(at(f, 4.0) == doctest::Approx(2.5).epsilon(1e-13));
        CHECK(at(f, 1.0) == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(at(f, 3.0) == doctest::Approx(1.75).epsilon(1e-13));  // chord midpoint
        CHECK(f.bound_at(3.0));
        CHECK(!f.bound_at(1.0));
        CHECK(!f.bound_at(5.0));
        CHECK(at(f, 10.0) == doctest::Approx(8.5).epsilon(1e-13));
    }

    SUBCASE("small jumps, long memory: continuity at the kink")
    {
        const auto f = tau_component(make(1.2, 0.5, 0.3, 0.0), Component::X2);
        CHECK(at(f, 1.5) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(at(f, 1.5 - 1e-9) == doctest::Approx(at(f, 1.5 + 1e-9)).epsilon(1e-7));
        const auto g = tau_component(make(1.2, 0.5, 1.8, 0.0), Component::X2);
        CHECK(at(g, 1.0) == doctest::Approx(1.0 - 0.5 / 1.8).epsilon(1e-13));
        CHECK(at(g, 2.0) == doctest::Approx(1.5).epsilon(1e-13));
    }

    SUBCASE("gaussian component")
    {
        CHECK(at(tau_component(make(1.7, 0.5, 0.3, 1.0), Component::X3), 2.0) ==
              doctest::Approx(1.5).epsilon(1e-13));
        CHECK(at(tau_component(make(1.2, 1.5, 0.3, 1.0), Component::X3), 2.0) ==
              doctest::Approx(1.0).epsilon(1e-13));
        CHECK_THROWS_WITH_AS(
            (void)tau_component(make(1.7, 0.5, 0.3, 0.0), Component::X3),
            doctest::Contains("component absent"), std::invalid_argument);
    }
}

TEST_CASE("pointwise maximum of scaling functions")
{
    const ScalingFunction half({{0.0, 1e30, 0.5, 0.0, false}}, 1e30, "h");
    // q - 0.4 kept convex through the origin by a flat lead-in piece.
    const ScalingFunction line_minus(
        {{0.0, 0.4, 0.0, 0.0, false}, {0.4, 1e30, 1.0, -0.4, false}}, 1e30, "m");

    SUBCASE("crossing of a half-slope line and q - 0.4")
    {
        std::vector<ScalingFunction> fs{half, line_minus};
        const auto m = tau_max(fs);
        CHECK(at(m, 0.5) == doctest::Approx(0.25).epsilon(1e-13));
        CHECK(at(m, 0.79) == doctest::Approx(0.395).epsilon(1e-12));
        CHECK(at(m, 0.81) == doctest::Approx(0.41).epsilon(1e-12));
        CHECK(at(m, 2.0) == doctest::Approx(1.6).epsilon(1e-13));
        bool has_08 = false;
        for (double b : m.breakpoints()) has_08 = has_08 || std::abs(b - 0.8) < 1e-9;
        CHECK(has_08);
    }

    SUBCASE("identity on singletons")
    {
        std::vector<ScalingFunction> fs{half};
        const auto m = tau_max(fs);
        for (double q : {0.1, 0.7, 3.0}) CHECK(at(m, q) == doctest::Approx(at(half, q)));
    }
}

TEST_CASE("composed component maximum equals the total, randomized")
{
    RandomStream rng(31, 0);
    int done = 0;
    while (done < 1000) {
        const double gamma = rng.uniform(0.05, 1.95);
        const double alpha = rng.uniform(0.05, 1.8);
        const double beta = rng.uniform(0.0, 1.99);
        const bool with_b = rng.uniform() < 0.5;
        if (std::abs(gamma - 1.0 - alpha) < 1e-6) continue;
        if (std::abs(beta - 1.0 - alpha) < 1e-6) continue;
        if (std::abs(gamma - 1.0) < 1e-6) continue;
        if (std::abs(alpha - 1.0) < 1e-6) continue;
        if (alpha < 1.0 && std::abs(gamma - 2.0 / (2.0 - alpha)) < 1e-6) continue;
        const auto q = make(gamma, alpha, beta, with_b ? 0.8 : 0.0, 0.4, 0.6,
                            0.3, 0.3, 2.0);
        const auto total = tau_total(q);
        std::vector<ScalingFunction> comps{tau_component(q, Component::X1),
                                           tau_component(q, Component::X2)};
        if (with_b) comps.push_back(tau_component(q, Component::X3));
        const auto composed = tau_max(comps);
        for (int i = 1; i <= 50; ++i) {
            const double qq = gamma * i / 51.0;
            CHECK(std::abs(at(total, qq) - at(composed, qq)) < 1e-12);
        }
        ++done;
    }
}

TEST_CASE("two-component maximum when small jumps are absent")
{
    const auto q = make(1.8, 0.4, 0.0, 0.0, 0.5, 0.5, 0.0, 0.0);
    const auto total = tau_total(q);
    const auto x1 = tau_component(q, Component::X1);
    for (int i = 1; i <= 30; ++i) {
        const double qq = 1.8 * i / 31.0;
        CHECK(std::abs(at(total, qq) - at(x1, qq)) < 1e-12);
    }
    // Above the kink only the bound is available for a pure big-jump model.
    CHECK(total.bound_at(1.6));
    CHECK(!tau_total(make(1.8, 0.4, 0.3, 0.0)).bound_at(1.6));
}

TEST_CASE("shape invariants of produced scaling functions")
{
    RandomStream rng(32, 0);
    int done = 0;
    while (done < 300) {
        const double gamma = rng.uniform(0.05, 1.95);
        const double alpha = rng.uniform(0.05, 1.8);
        const double beta = rng.uniform(0.0, 1.99);
        const bool with_b = rng.uniform() < 0.5;
        if (std::abs(gamma - 1.0 - alpha) < 1e-6) continue;
        if (std::abs(beta - 1.0 - alpha) < 1e-6) continue;
        if (std::abs(gamma - 1.0) < 1e-6) continue;
        if (alpha < 1.0 && std::abs(gamma - 2.0 / (2.0 - alpha)) < 1e-6) continue;
        const auto q = make(gamma, alpha, beta, with_b ? 1.3 : 0.0);
        const auto f = tau_total(q);
        double prev_slope = -1.0;
        for (const auto& s : f.segments()) {
            CHECK(s.slope > 0.0);
            // Slopes stay within [0, 1] once the mean is finite; in the
            // infinite-mean regime the single slope is 1/gamma > 1.
            if (gamma > 1.0) {
                const bool unit = std::abs(s.slope - 1.0) < 1e-12;
                CHECK((unit || s.slope < 1.0));
                if (unit) CHECK(s.intercept == doctest::Approx(-alpha).epsilon(1e-12));
            }
            CHECK(s.slope >= prev_slope - 1e-12);
            prev_slope = s.slope;
        }
        if (with_b) CHECK(f.breakpoints().empty());  // no kink with a Gaussian part

        // Scale parameters do not move the scaling function.
        auto q2 = q;
        q2.big_jumps.w_plus *= 3.0;
        q2.big_jumps.w_minus *= 3.0;
        q2.small_jumps.c_plus *= 0.2;
        q2.small_jumps.c_minus *= 0.2;
        q2.pi.rate *= 5.0;
        q2.a = gamma > 1.0 ? centering_drift(q2) : 0.0;
        const auto f2 = tau_total(q2);
        for (int i = 1; i <= 20; ++i) {
            const double qq = gamma * i / 21.0;
            CHECK(at(f, qq) == doctest::Approx(at(f2, qq)).epsilon(1e-13));
        }
        ++done;
    }

    // Kinked regimes place their single breakpoint at 1 + alpha and beta.
    const auto fb = tau_total(make(1.8, 0.4, 0.3, 0.0));
    REQUIRE(fb.breakpoints().size() == 1);
    CHECK(fb.breakpoints()[0] == doctest::Approx(1.4).epsilon(1e-13));
    const auto fc = tau_total(make(1.8, 0.4, 1.6, 0.0));
    REQUIRE(fc.breakpoints().size() == 1);
    CHECK(fc.breakpoints()[0] == doctest::Approx(1.6).epsilon(1e-13));
}

TEST_CASE("limit law parameters")
{
    SUBCASE("symmetric tails give zero skew in the long-memory regime")
    {
        const auto p = limit_params(make(1.8, 0.4, 0.3, 0.0, 1.0, 1.0));
        CHECK(p.stability == doctest::Approx(1.4));
        CHECK(p.skew == doctest::Approx(0.0));
        CHECK(p.regime == LimitRegime::long_memory_one_plus_alpha);
    }

    SUBCASE("one-sided tail weight against the quadrature oracle")
    {
        // (alpha/(1+alpha)) int_1^inf y^{1+alpha} gamma w+ y^{-gamma-1} dy,
        // via y = e^u.
        const double alpha = 0.4, gamma = 1.8;
        const double I = oracle::integrate(
            [&](double u) {
                return gamma * std::exp((alpha - gamma + 1.0) * u);
            },
            0.0, 60.0 / (gamma - alpha - 1.0), 1e-13);
        const double c_plus = alpha / (1.0 + alpha) * I;
        CHECK(c_plus == doctest::Approx(1.8 / 1.4).epsilon(1e-10));

        const auto p = limit_params(make(1.8, 0.4, 0.3, 0.0, 1.0, 0.0));
        CHECK(p.skew == doctest::Approx(-1.0));  // all weight on the positive side
        // Scale from the closed form, cross-checked against the quadrature
        // value of the one-sided weight.
        const double want = std::pow(std::tgamma(1.0 - alpha) / alpha * c_plus *
                                         std::sin(3.14159265358979323846 * alpha / 2.0),
                                     1.0 / (1.0 + alpha));
        CHECK(p.scale == doctest::Approx(want).epsilon(1e-10));
    }

    SUBCASE("short-memory regime mixes the decay-rate moment")
    {
        // E[xi^{1-gamma}] for Gamma(0.5, 1) at gamma = 1.2 equals
        // Gamma(0.3)/Gamma(0.5); quadrature via xi = v^8.
        // Integrand exponents folded analytically: the xi = v^8 pullback is
        // 8 v^{8(alpha - gamma) + 7} e^{-v^8} / Gamma(alpha), regular at 0.
        const double alpha = 0.5, gamma = 1.2;
        const double I = oracle::integrate(
            [&](double v) {
                return 8.0 * std::pow(v, 8.0 * (alpha - gamma) + 7.0) *
                       std::exp(-std::pow(v, 8.0)) / std::tgamma(alpha);
            },
            0.0, 3.2, 1e-12);
        CHECK(I == doctest::Approx(std::tgamma(0.3) / std::tgamma(0.5)).epsilon(1e-8));

        const auto q = make(1.2, 0.5, 0.3, 0.0, 1.0, 1.0);
        const auto p = limit_params(q);
        CHECK(p.stability == doctest::Approx(1.2));
        CHECK(p.regime == LimitRegime::short_memory_gamma);
        const double sigma = sigma_rho_from_tails(1.2, q.tail_weights()).sigma;
        CHECK(p.scale == doctest::Approx(sigma * std::pow(1.2 * I, 1.0 / 1.2)).epsilon(1e-8));
    }

    CHECK_THROWS(limit_params(make(1.0, 0.5, 0.3, 0.0, 1.0, 1.0)));
}

TEST_CASE("serialized record carries the segment structure")
{
    const auto f = tau_total(make(1.8, 0.4, 0.3, 0.0));
    const auto j = f.to_json();
    CHECK(j.find("\"case\"") != std::string::npos);
    CHECK(j.find("\"domain_hi\"") != std::string::npos);
    CHECK(j.find("\"breakpoints\"") != std::string::npos);
    CHECK(j.find("\"slopes\"") != std::string::npos);
    CHECK(j.find("\"kind\"") != std::string::npos);
    CHECK(j.find("exact") != std::string::npos);
}
