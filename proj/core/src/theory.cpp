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

#include "supou/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace supou {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

/// Builds a function through the origin: pieces are (slope, upper end,
/// bound); intercepts follow from continuity.
ScalingFunction through_origin(const std::vector<std::tuple<double, double, bool>>& pieces,
                               double domain_hi, std::string label)
{
    std::vector<TauSegment> segs;
    double q_lo = 0.0;
    double value = 0.0;
    for (const auto& [slope, q_hi, bound] : pieces) {
        segs.push_back({q_lo, q_hi, slope, value - slope * q_lo, bound});
        if (std::isfinite(q_hi)) value = segs.back().at(q_hi);
        q_lo = q_hi;
    }
    return ScalingFunction(std::move(segs), domain_hi, std::move(label));
}

}  // namespace

ScalingFunction::ScalingFunction(std::vector<TauSegment> segments, double domain_hi,
                                 std::string label)
    : segments_(std::move(segments)), domain_hi_(domain_hi), label_(std::move(label))
{
    if (segments_.empty())
        throw std::invalid_argument("ScalingFunction: no segments");
    if (!(domain_hi_ > 0.0))
        throw std::invalid_argument("ScalingFunction: domain must be nonempty");
    if (segments_.front().q_lo != 0.0 || std::abs(segments_.front().intercept) > 1e-9)
        throw std::invalid_argument("ScalingFunction: must vanish at 0+");
    if (segments_.back().q_hi < domain_hi_)
        throw std::invalid_argument("ScalingFunction: segments do not cover the domain");
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
        const auto& s = segments_[i];
        const auto& t = segments_[i + 1];
        if (s.q_hi != t.q_lo)
            throw std::invalid_argument("ScalingFunction: segments not contiguous");
        if (std::abs(s.at(s.q_hi) - t.at(s.q_hi)) > 1e-9 * std::max(1.0, std::abs(s.at(s.q_hi))))
            throw std::invalid_argument("ScalingFunction: discontinuous at a breakpoint");
        if (t.slope < s.slope - 1e-9)
            throw std::invalid_argument("ScalingFunction: slopes must be nondecreasing");
    }
}

std::optional<double> ScalingFunction::operator()(double q) const
{
    if (q <= 0.0) return 0.0;
    if (q >= domain_hi_) return std::nullopt;  // infinite moment
    for (const auto& s : segments_)
        if (q <= s.q_hi) return s.at(q);
    return segments_.back().at(q);
}

CurveKind ScalingFunction::kind() const
{
    for (const auto& s : segments_)
        if (s.bound) return CurveKind::upper_bound;
    return CurveKind::exact;
}

bool ScalingFunction::bound_at(double q) const
{
    for (const auto& s : segments_)
        if (q <= s.q_hi) return s.bound;
    return segments_.back().bound;
}

std::vector<double> ScalingFunction::breakpoints() const
{
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i)
        out.push_back(segments_[i].q_hi);
    return out;
}

std::string ScalingFunction::to_json() const
{
    nlohmann::json j;
    j["case"] = label_;
    if (std::isfinite(domain_hi_))
        j["domain_hi"] = domain_hi_;
    else
        j["domain_hi"] = nullptr;
    j["breakpoints"] = breakpoints();
    std::vector<double> slopes, intercepts;
    std::vector<std::string> kinds;
    for (const auto& s : segments_) {
        slopes.push_back(s.slope);
        intercepts.push_back(s.intercept);
        kinds.push_back(s.bound ? "upper_bound" : "exact");
    }
    j["slopes"] = slopes;
    j["intercepts"] = intercepts;
    j["kind"] = kind() == CurveKind::exact ? "exact" : "upper_bound";
    j["segment_kinds"] = kinds;
    return j.dump();
}

ScalingFunction tau_total(const CharacteristicQuadruple& q)
{
    const RegimeLabel label = classify(q);
    const double gamma = q.gamma();
    const double alpha = q.alpha();
    const double beta = q.has_small_jumps() ? q.beta() : 0.0;
    // With neither small jumps nor a Gaussian part, the kinked piece rests
    // on the big-jump component alone, where it is only a proven bound.
    const bool kink_is_bound = !q.has_small_jumps() && !q.has_gaussian();
    const std::string text = label.text();

    switch (label.theorem_case) {
        case RegimeCase::A_b0: {
            // When 2/(2-alpha) < gamma < 1+alpha and the small-jump activity
            // index is large enough (beta > gamma alpha/(gamma-1)), the
            // small-jump component outgrows q/gamma and the composition rule
            // makes its slope the total one.
            double slope = 1.0 / gamma;
            if (alpha < 1.0 && beta > 1.0 + alpha)
                slope = std::max(slope, 1.0 - alpha / beta);
            return through_origin({{slope, gamma, false}}, gamma, text);
        }
        case RegimeCase::A_bn0:
            return through_origin({{1.0 / gamma, gamma, false}}, gamma, text);
        case RegimeCase::B_b0:
            return through_origin({{1.0 / (1.0 + alpha), 1.0 + alpha, false},
                                   {1.0, gamma, kink_is_bound}},
                                  gamma, text);
        case RegimeCase::C_b0:
            return through_origin({{1.0 - alpha / beta, beta, false}, {1.0, gamma, false}},
                                  gamma, text);
        case RegimeCase::D_b0:
            return through_origin({{1.0 - alpha / beta, gamma, false}}, gamma, text);
        case RegimeCase::B_bn0:
            return through_origin({{1.0 - alpha / 2.0, gamma, false}}, gamma, text);
    }
    throw std::logic_error("tau_total: unreachable");
}

ScalingFunction tau_component(const CharacteristicQuadruple& q, Component which)
{
    const auto violations = validate(q);
    if (!violations.empty())
        throw std::invalid_argument("tau_component: invalid model: " + violations.front());
    const double alpha = q.alpha();

    switch (which) {
        case Component::X1: {
            if (!q.has_big_jumps())
                throw std::invalid_argument("tau_component: component absent (no big jumps)");
            const double gamma = q.gamma();
            if (gamma < 1.0 + alpha)
                return through_origin({{1.0 / gamma, gamma, false}}, gamma, "x1 short-memory");
            return through_origin({{1.0 / (1.0 + alpha), 1.0 + alpha, false},
                                   {1.0, gamma, true}},
                                  gamma, "x1 long-memory");
        }
        case Component::X2: {
            if (!q.has_small_jumps())
                throw std::invalid_argument("tau_component: component absent (no small jumps)");
            if (alpha > 1.0) {
                // Kink confined between the even orders bracketing 2 alpha;
                // in the gap only the convex chord is available.
                const double q_star = 2.0 * std::floor(alpha);
                const double q_upper = q_star + 2.0;
                const double chord = (q_upper - alpha - q_star / 2.0) / (q_upper - q_star);
                return through_origin({{0.5, q_star, false},
                                       {chord, q_upper, true},
                                       {1.0, kInf, false}},
                                      kInf, "x2 short-memory");
            }
            const double beta = q.beta();
            if (beta < 1.0 + alpha)
                return through_origin({{1.0 / (1.0 + alpha), 1.0 + alpha, false},
                                       {1.0, kInf, false}},
                                      kInf, "x2 long-memory sparse");
            return through_origin({{1.0 - alpha / beta, beta, false}, {1.0, kInf, false}},
                                  kInf, "x2 long-memory active");
        }
        case Component::X3: {
            if (!q.has_gaussian())
                throw std::invalid_argument("tau_component: component absent (b == 0)");
            const double slope = alpha > 1.0 ? 0.5 : 1.0 - alpha / 2.0;
            return through_origin({{slope, kInf, false}}, kInf, "x3 gaussian");
        }
    }
    throw std::logic_error("tau_component: unreachable");
}

ScalingFunction tau_max(std::span<const ScalingFunction> fs)
{
    if (fs.empty()) throw std::invalid_argument("tau_max: empty input");
    if (fs.size() == 1) return fs.front();

    double domain = kInf;
    for (const auto& f : fs) domain = std::min(domain, f.domain_hi());

    // Finite sweep cap: past it no breakpoint and no crossing of the final
    // lines remains, so the last cell's line holds to infinity.
    double cap = domain;
    if (!std::isfinite(domain)) {
        cap = 1.0;
        for (const auto& f : fs)
            for (const auto& s : f.segments())
                if (std::isfinite(s.q_hi)) cap = std::max(cap, s.q_hi);
        for (std::size_t u = 0; u < fs.size(); ++u) {
            for (std::size_t v = u + 1; v < fs.size(); ++v) {
                const TauSegment& s1 = fs[u].segments().back();
                const TauSegment& s2 = fs[v].segments().back();
                if (std::abs(s1.slope - s2.slope) < 1e-14) continue;
                cap = std::max(cap, (s2.intercept - s1.intercept) / (s1.slope - s2.slope));
            }
        }
        cap += 1.0;
    }

    // Candidate cell edges: every input breakpoint plus every pairwise line
    // crossing, swept left to right.
    std::vector<double> edges{0.0};
    for (const auto& f : fs)
        for (const auto& s : f.segments())
            if (s.q_hi > 0.0 && s.q_hi < std::min(domain, cap)) edges.push_back(s.q_hi);
    edges.push_back(cap);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                edges.end());

    auto line_at = [](const ScalingFunction& f, double q) -> const TauSegment& {
        for (const auto& s : f.segments())
            if (q <= s.q_hi) return s;
        return f.segments().back();
    };

    std::vector<double> refined{edges.front()};
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i];
        const double b = edges[i + 1];
        const double mid = 0.5 * (a + b);
        std::vector<double> cross;
        for (std::size_t u = 0; u < fs.size(); ++u) {
            for (std::size_t v = u + 1; v < fs.size(); ++v) {
                const TauSegment& s1 = line_at(fs[u], mid);
                const TauSegment& s2 = line_at(fs[v], mid);
                if (std::abs(s1.slope - s2.slope) < 1e-14) continue;
                const double x = (s2.intercept - s1.intercept) / (s1.slope - s2.slope);
                if (x > a + 1e-12 && x < b - 1e-12) cross.push_back(x);
            }
        }
        std::sort(cross.begin(), cross.end());
        for (double x : cross)
            if (refined.empty() || x > refined.back() + 1e-12) refined.push_back(x);
        refined.push_back(b);
    }

    std::vector<TauSegment> segs;
    for (std::size_t i = 0; i + 1 < refined.size(); ++i) {
        const double a = refined[i];
        const double b = refined[i + 1];
        const double mid = 0.5 * (a + b);
        double best = -kInf;
        for (const auto& f : fs) best = std::max(best, line_at(f, mid).at(mid));
        // A cell of the maximum is exact as soon as one input achieving it
        // is exact there.
        double slope = 0.0, intercept = 0.0;
        bool bound = true;
        bool found = false;
        for (const auto& f : fs) {
            const TauSegment& s = line_at(f, mid);
            if (s.at(mid) >= best - 1e-12 * std::max(1.0, std::abs(best))) {
                if (!found || (bound && !s.bound)) {
                    slope = s.slope;
                    intercept = s.intercept;
                    found = true;
                }
                bound = bound && s.bound;
            }
        }
        const double hi = (i + 2 == refined.size() && !std::isfinite(domain)) ? kInf : b;
        if (!segs.empty() && std::abs(segs.back().slope - slope) < 1e-12 &&
            std::abs(segs.back().intercept - intercept) < 1e-12 && segs.back().bound == bound) {
            segs.back().q_hi = hi;
        } else {
            segs.push_back({a, hi, slope, intercept, bound});
        }
    }
    return ScalingFunction(std::move(segs), domain, "max");
}

LimitLawParams limit_params(const CharacteristicQuadruple& q)
{
    const auto violations = validate(q);
    if (!violations.empty())
        throw std::invalid_argument("limit_params: invalid model: " + violations.front());
    if (!q.has_big_jumps())
        throw std::invalid_argument("limit_params: requires a big-jump component");

    const double gamma = q.gamma();
    const double alpha = q.alpha();

    if (gamma < 1.0 + alpha) {
        // gamma-stable limit; the mixing law enters through E[xi^{1-gamma}].
        const StableParams marginal = sigma_rho_from_tails(gamma, q.tail_weights());
        const double xi_moment = std::tgamma(alpha + 1.0 - gamma) / std::tgamma(alpha) *
                                 std::pow(q.pi.rate, gamma - 1.0);
        LimitLawParams out;
        out.stability = gamma;
        out.scale = marginal.sigma * std::pow(gamma * xi_moment, 1.0 / gamma);
        out.skew = marginal.rho;
        out.regime = LimitRegime::short_memory_gamma;
        return out;
    }

    // (1+alpha)-stable limit with tail weights from the (1+alpha)-th absolute
    // moments of the big-jump family.
    const double g = q.big_jumps.gamma_idx;
    const double factor = alpha / (1.0 + alpha) * g / (g - 1.0 - alpha);
    const double c_plus = factor * q.big_jumps.w_plus;
    const double c_minus = factor * q.big_jumps.w_minus;
    LimitLawParams out;
    out.stability = 1.0 + alpha;
    out.scale = std::pow(std::tgamma(1.0 - alpha) / alpha * (c_minus + c_plus) *
                             std::sin(kPi * alpha / 2.0),
                         1.0 / (1.0 + alpha));
    out.skew = (c_minus - c_plus) / (c_minus + c_plus);
    out.regime = LimitRegime::long_memory_one_plus_alpha;
    return out;
}

}  // namespace supou
