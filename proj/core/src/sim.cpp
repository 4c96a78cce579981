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

#include "supou/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace supou {

namespace {

// Substream id layout within one path's stream: per-component bases, with
// atom / mixture-member k at base + 1 + k. Draw k of component c is then a
// pure function of (seed, path, c, k).
constexpr std::uint32_t kSubBig = 1u << 28;
constexpr std::uint32_t kSubSmall = 2u << 28;
constexpr std::uint32_t kSubSmallGauss = 3u << 28;
constexpr std::uint32_t kSubGauss = 4u << 28;

// Taylor series of 2(x - 1 + e^{-x}) - (1 - e^{-x})^2, the scaled
// conditional variance of the OU step integral; direct evaluation cancels
// below x ~ 1e-4.
double integral_var_core(double x)
{
    if (x < 1e-4) {
        return (2.0 / 3.0) * x * x * x * (1.0 - 0.75 * x + 0.35 * x * x);
    }
    const double em = -std::expm1(-x);  // 1 - e^{-x}
    return 2.0 * (x - em) - em * em;
}

struct FieldParams {
    double mass;        // jump-measure mass per unit position
    double horizon;
    double burn_in;
    double region;      // (xi, s)-region measure per unit jump mass
};

// Draws atoms on the region {-burn_in < s < xi * horizon} by conditioning:
// an atom lies in the past band with probability burn_in / region, otherwise
// its rate is size-biased (Gamma shape + 1) and its position uniform on
// (0, xi * horizon).
template <typename SizeSampler>
std::vector<JumpAtom> gen_field(const PiGamma& pi, const FieldParams& fp,
                                RandomStream& rng, std::uint32_t sub_base,
                                SizeSampler&& draw_size)
{
    std::vector<JumpAtom> atoms;
    if (fp.mass <= 0.0) return atoms;
    if (fp.mass * fp.region > 2.5e8)
        throw std::invalid_argument("jump field too dense: lower the horizon or raise the cutoff");
    RandomStream count_rng = rng.substream(sub_base);
    const std::uint64_t n = sample_poisson(count_rng, fp.mass * fp.region);
    atoms.reserve(n);
    const double p_past = fp.burn_in / fp.region;
    for (std::uint64_t k = 0; k < n; ++k) {
        RandomStream atom_rng = rng.substream(sub_base + 1 + static_cast<std::uint32_t>(k));
        JumpAtom atom;
        if (atom_rng.uniform() < p_past) {
            atom.rate = sample_gamma(pi.shape, pi.rate, atom_rng);
            atom.pos = atom_rng.uniform(-fp.burn_in, 0.0);
        } else {
            atom.rate = sample_gamma(pi.shape + 1.0, pi.rate, atom_rng);
            atom.pos = atom_rng.uniform(0.0, atom.rate * fp.horizon);
        }
        atom.size = draw_size(atom_rng);
        atoms.push_back(atom);
    }
    return atoms;
}

std::vector<double> integrate_atoms(const std::vector<JumpAtom>& atoms,
                                    const std::vector<double>& times)
{
    std::vector<double> out(times.size(), 0.0);
    for (const auto& atom : atoms)
        for (std::size_t j = 0; j < times.size(); ++j)
            out[j] += kernel_antiderivative(atom, times[j]);
    return out;
}

// Integrated OU mixture with per-member stationary variance `var_total`/1
// ... each member carries the full stationary variance and the sum is scaled
// by n^{-1/2}, so the mixture variance matches var_total at every t.
std::vector<double> integrated_gaussian_mixture(const PiGamma& pi, double var_total,
                                                const std::vector<double>& times,
                                                int n_ou, RandomStream& rng,
                                                std::uint32_t sub_base)
{
    if (n_ou < 1) throw std::invalid_argument("gaussian mixture: n_ou must be >= 1");
    std::vector<double> out(times.size(), 0.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_ou));
    for (int i = 0; i < n_ou; ++i) {
        RandomStream member_rng = rng.substream(sub_base + 1 + static_cast<std::uint32_t>(i));
        const double rate = sample_gamma(pi.shape, pi.rate, member_rng);
        OrnsteinUhlenbeck ou(rate, var_total, member_rng);
        double integral = 0.0;
        double prev = 0.0;
        for (std::size_t j = 0; j < times.size(); ++j) {
            integral += ou.step(times[j] - prev, member_rng);
            prev = times[j];
            out[j] += scale * integral;
        }
    }
    return out;
}

}  // namespace

std::vector<double> TimeGrid::times() const
{
    check();
    std::vector<double> out(static_cast<std::size_t>(count));
    double t = t0;
    for (int j = 0; j < count; ++j) {
        out[static_cast<std::size_t>(j)] = t;
        t *= ratio;
    }
    return out;
}

double TimeGrid::t_max() const { return t0 * std::pow(ratio, count - 1); }

void TimeGrid::check() const
{
    if (!(t0 > 0.0)) throw std::invalid_argument("TimeGrid: t0 must be positive");
    if (!(ratio > 1.0)) throw std::invalid_argument("TimeGrid: ratio must exceed 1");
    if (count < 4) throw std::invalid_argument("TimeGrid: need at least 4 points");
}

double SimOptions::burn_in_or_default(std::uint32_t n_paths) const
{
    if (burn_in) {
        if (!(*burn_in >= 0.0)) throw std::invalid_argument("burn_in must be >= 0");
        return *burn_in;
    }
    return 50.0 + std::log(static_cast<double>(std::max<std::uint32_t>(n_paths, 1)));
}

double kernel_antiderivative(const JumpAtom& atom, double t)
{
    if (!(t > 0.0)) throw std::invalid_argument("kernel_antiderivative: t must be positive");
    const double xi = atom.rate;
    if (atom.pos >= xi * t) return 0.0;
    if (atom.pos < 0.0)
        return -atom.size * std::exp(atom.pos) * std::expm1(-xi * t) / xi;
    return -atom.size * std::expm1(-(xi * t - atom.pos)) / xi;
}

std::vector<JumpAtom> gen_big_jump_field(const CharacteristicQuadruple& q,
                                         double horizon, double burn_in,
                                         RandomStream& rng)
{
    if (!(horizon > 0.0)) throw std::invalid_argument("gen_big_jump_field: horizon must be positive");
    FieldParams fp;
    fp.mass = q.big_jumps.total_mass();
    fp.horizon = horizon;
    fp.burn_in = burn_in;
    fp.region = burn_in + horizon * q.pi.mean();
    const BigJumpFamily fam = q.big_jumps;
    return gen_field(q.pi, fp, rng, kSubBig, [fam](RandomStream& r) {
        return sample_pareto_jump(fam.gamma_idx, fam.w_plus, fam.w_minus, r);
    });
}

std::vector<JumpAtom> gen_small_jump_field(const CharacteristicQuadruple& q,
                                           double eps, double horizon,
                                           double burn_in, RandomStream& rng)
{
    if (!(horizon > 0.0)) throw std::invalid_argument("gen_small_jump_field: horizon must be positive");
    const SmallJumpFamily fam = q.small_jumps;
    FieldParams fp;
    fp.mass = small_jump_band_mass(fam, eps);
    fp.horizon = horizon;
    fp.burn_in = burn_in;
    fp.region = burn_in + horizon * q.pi.mean();
    const double p_plus = fam.c_plus / fam.total_scale();
    if (fam.beta_idx == 0.0) {
        return gen_field(q.pi, fp, rng, kSubSmall, [p_plus](RandomStream& r) {
            const double sign = r.uniform() < p_plus ? 1.0 : -1.0;
            return sign * r.uniform();
        });
    }
    const double beta = fam.beta_idx;
    const double span = std::pow(eps, -beta) - 1.0;
    return gen_field(q.pi, fp, rng, kSubSmall, [p_plus, beta, span](RandomStream& r) {
        const double sign = r.uniform() < p_plus ? 1.0 : -1.0;
        return sign * std::pow(1.0 + r.uniform() * span, -1.0 / beta);
    });
}

OrnsteinUhlenbeck::OrnsteinUhlenbeck(double rate, double stationary_variance,
                                     RandomStream& rng)
    : rate_(rate), var_(stationary_variance)
{
    if (!(rate > 0.0)) throw std::invalid_argument("OrnsteinUhlenbeck: rate must be positive");
    if (!(stationary_variance > 0.0))
        throw std::invalid_argument("OrnsteinUhlenbeck: variance must be positive");
    value_ = std::sqrt(var_) * rng.normal();
}

double OrnsteinUhlenbeck::integral_variance(double rate, double stationary_variance,
                                            double h)
{
    const double em = -std::expm1(-rate * h);
    return 2.0 * stationary_variance * (h / rate - em / (rate * rate));
}

double OrnsteinUhlenbeck::step(double h, RandomStream& rng)
{
    if (!(h > 0.0)) throw std::invalid_argument("OrnsteinUhlenbeck: step must be positive");
    const double x = rate_ * h;
    const double em = -std::expm1(-x);  // 1 - e^{-xi h}
    const double phi = 1.0 - em;

    // Conditional joint law of (value after the step, step integral) given
    // the current value: means phi*u and u*em/xi, covariance below.
    const double var_a = var_ * em * (1.0 + phi);
    const double cov_ab = var_ * em * em / rate_;
    const double var_b = var_ / (rate_ * rate_) * integral_var_core(x);

    const auto [n1, n2] = rng.normal_pair();
    const double a = std::sqrt(var_a) * n1;
    const double resid = std::max(0.0, var_b - cov_ab * cov_ab / var_a);
    const double b = cov_ab / var_a * a + std::sqrt(resid) * n2;

    const double integral = value_ * em / rate_ + b;
    value_ = phi * value_ + a;
    return integral;
}

std::vector<double> simulate_x1_star(const CharacteristicQuadruple& q,
                                     const TimeGrid& grid, double burn_in,
                                     RandomStream& rng)
{
    if (!q.has_big_jumps())
        throw std::invalid_argument("simulate_x1_star: component absent (no big jumps)");
    const std::vector<double> times = grid.times();
    const auto atoms = gen_big_jump_field(q, grid.t_max(), burn_in, rng);
    std::vector<double> out = integrate_atoms(atoms, times);
    if (q.a != 0.0)
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += q.a * times[j];
    return out;
}

std::vector<double> simulate_x2_star(const CharacteristicQuadruple& q,
                                     const TimeGrid& grid, double eps_cutoff,
                                     int n_ou, double burn_in, RandomStream& rng)
{
    if (!q.has_small_jumps())
        throw std::invalid_argument("simulate_x2_star: component absent (no small jumps)");
    const bool finite_activity = q.small_jumps.beta_idx == 0.0;
    if (!finite_activity && !(eps_cutoff > 0.0 && eps_cutoff < 1.0))
        throw std::invalid_argument("simulate_x2_star: eps_cutoff must lie in (0, 1)");

    const std::vector<double> times = grid.times();
    const auto atoms = gen_small_jump_field(q, eps_cutoff, grid.t_max(), burn_in, rng);
    std::vector<double> out = integrate_atoms(atoms, times);

    // Deterministic mean correction: the sampled band is not compensated
    // atom by atom, so its mean rate is removed here.
    const double band_mean = small_jump_band_mean(q.small_jumps, eps_cutoff);
    if (band_mean != 0.0)
        for (std::size_t j = 0; j < out.size(); ++j) out[j] -= band_mean * times[j];

    if (!finite_activity) {
        const double v_eps = small_jump_subband_variance(q.small_jumps, eps_cutoff);
        if (v_eps > 0.0) {
            // Variance of the surrogate field per unit control measure is
            // v(eps); its stationary process variance is half that.
            const auto sub = integrated_gaussian_mixture(q.pi, v_eps / 2.0, times, n_ou,
                                                         rng, kSubSmallGauss);
            for (std::size_t j = 0; j < out.size(); ++j) out[j] += sub[j];
        }
    }
    return out;
}

std::vector<double> simulate_x3_star(const CharacteristicQuadruple& q,
                                     const TimeGrid& grid, int n_ou,
                                     RandomStream& rng)
{
    if (!q.has_gaussian())
        throw std::invalid_argument("simulate_x3_star: component absent (b == 0)");
    return integrated_gaussian_mixture(q.pi, q.b / 2.0, grid.times(), n_ou, rng, kSubGauss);
}

PathSample simulate_path(const CharacteristicQuadruple& q, const TimeGrid& grid,
                         const SimOptions& opts, std::uint64_t seed,
                         std::uint32_t path_index, std::uint32_t n_paths)
{
    const double burn_in = opts.burn_in_or_default(n_paths);
    RandomStream rng(seed, path_index);

    PathSample out;
    out.seed = seed;
    out.path_index = path_index;
    out.xstar.assign(static_cast<std::size_t>(grid.count), 0.0);

    auto add = [&out](const std::vector<double>& comp) {
        for (std::size_t j = 0; j < out.xstar.size(); ++j) out.xstar[j] += comp[j];
    };
    if (q.has_big_jumps()) {
        auto x1 = simulate_x1_star(q, grid, burn_in, rng);
        add(x1);
        if (opts.keep_components) out.x1 = std::move(x1);
    }
    if (q.has_small_jumps()) {
        auto x2 = simulate_x2_star(q, grid, opts.eps_cutoff, opts.n_ou, burn_in, rng);
        add(x2);
        if (opts.keep_components) out.x2 = std::move(x2);
    }
    if (q.has_gaussian()) {
        auto x3 = simulate_x3_star(q, grid, opts.n_ou, rng);
        add(x3);
        if (opts.keep_components) out.x3 = std::move(x3);
    }
    return out;
}

void simulate_ensemble(const CharacteristicQuadruple& q, const TimeGrid& grid,
                       const SimOptions& opts, std::uint64_t seed,
                       std::uint32_t n_paths,
                       const std::function<void(PathSample&&)>& sink)
{
    const auto violations = validate(q);
    if (!violations.empty())
        throw std::invalid_argument("simulate_ensemble: invalid model: " + violations.front());
    grid.check();
    for (std::uint32_t j = 0; j < n_paths; ++j)
        sink(simulate_path(q, grid, opts, seed, j, n_paths));
}

}  // namespace supou
