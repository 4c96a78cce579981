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

#include "supou/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "supou/rng.hpp"

namespace supou {

namespace {

double median_inplace(std::vector<double>& v)
{
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct OlsFit {
    double slope;
    double intercept;
    double rss;
    double slope_se;
};

OlsFit ols(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    OlsFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - f.slope * x[i] - f.intercept;
        f.rss += r * r;
    }
    f.slope_se = n > 2 ? std::sqrt(f.rss / static_cast<double>(n - 2) / sxx)
                       : std::numeric_limits<double>::quiet_NaN();
    return f;
}

// Least squares for y ~ a + b q + d max(q - c, 0); returns RSS and the two
// slopes (b, b + d). Solves the 3x3 normal equations by Gaussian elimination.
bool hinge_fit(const std::vector<double>& q, const std::vector<double>& y, double c,
               double& rss, double& slope_lo, double& slope_hi)
{
    double m[3][4] = {};
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double h = std::max(q[i] - c, 0.0);
        const double row[3] = {1.0, q[i], h};
        for (int r = 0; r < 3; ++r) {
            for (int s = 0; s < 3; ++s) m[r][s] += row[r] * row[s];
            m[r][3] += row[r] * y[i];
        }
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) < 1e-12) return false;
        std::swap(m[piv], m[col]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int s = col; s < 4; ++s) m[r][s] -= f * m[col][s];
        }
    }
    const double a = m[0][3] / m[0][0];
    const double b = m[1][3] / m[1][1];
    const double d = m[2][3] / m[2][2];
    rss = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double r = y[i] - a - b * q[i] - d * std::max(q[i] - c, 0.0);
        rss += r * r;
    }
    slope_lo = b;
    slope_hi = b + d;
    return true;
}

}  // namespace

double MomentTable::lyapunov_violation() const
{
    double worst = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
        for (std::size_t i = 0; i + 1 < q_values.size(); ++i) {
            const double lo = mean[cell(j, i)];
            const double hi = mean[cell(j, i + 1)];
            if (!(lo > 0.0) || !(hi > 0.0)) continue;
            const double a = std::pow(lo, 1.0 / q_values[i]);
            const double b = std::pow(hi, 1.0 / q_values[i + 1]);
            worst = std::max(worst, (a - b) / b);
        }
    }
    return worst;
}

double MomentTable::log_convexity_violation() const
{
    double worst = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
        for (std::size_t i = 0; i + 2 < q_values.size(); ++i) {
            const double y0 = std::log(mean[cell(j, i)]);
            const double y1 = std::log(mean[cell(j, i + 1)]);
            const double y2 = std::log(mean[cell(j, i + 2)]);
            const double h1 = q_values[i + 1] - q_values[i];
            const double h2 = q_values[i + 2] - q_values[i + 1];
            const double dd = 2.0 * ((y2 - y1) / h2 - (y1 - y0) / h1) / (h1 + h2);
            worst = std::min(worst, dd);
        }
    }
    return worst;
}

MomentAccumulator::MomentAccumulator(std::vector<double> times,
                                     std::vector<double> q_values,
                                     std::uint32_t n_paths, int batching, double q_sup)
    : times_(std::move(times)), q_values_(std::move(q_values)), n_paths_(n_paths)
{
    if (times_.empty() || q_values_.empty())
        throw std::invalid_argument("moments: empty grid");
    if (n_paths_ == 0) throw std::invalid_argument("moments: need at least one path");
    for (double q : q_values_) {
        if (!(q > 0.0)) throw std::invalid_argument("moments: orders must be positive");
        if (q >= q_sup) {
            std::ostringstream msg;
            msg << "moments: order q = " << q << " has an infinite moment for this model"
                << " (finite range is q < " << q_sup << ")";
            throw std::invalid_argument(msg.str());
        }
    }
    if (!std::is_sorted(q_values_.begin(), q_values_.end()))
        throw std::invalid_argument("moments: orders must be increasing");
    batching_ = std::max(1, std::min<int>(batching, static_cast<int>(n_paths_)));
    const std::size_t slots = static_cast<std::size_t>(batching_) * cellsInternal();
    count_.assign(slots, 0);
    mean_.assign(slots, 0.0);
    m2_.assign(slots, 0.0);
}

std::size_t MomentAccumulator::cellsInternal() const
{
    return times_.size() * q_values_.size();
}

int MomentAccumulator::batch_of(std::uint32_t path_index) const
{
    return static_cast<int>(static_cast<std::uint64_t>(path_index) *
                            static_cast<std::uint64_t>(batching_) / n_paths_);
}

std::pair<std::uint32_t, std::uint32_t> MomentAccumulator::batch_range(int b) const
{
    auto ceil_div = [](std::uint64_t a, std::uint64_t d) { return (a + d - 1) / d; };
    const auto lo = ceil_div(static_cast<std::uint64_t>(b) * n_paths_,
                             static_cast<std::uint64_t>(batching_));
    const auto hi = ceil_div(static_cast<std::uint64_t>(b + 1) * n_paths_,
                             static_cast<std::uint64_t>(batching_));
    return {static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(hi)};
}

void MomentAccumulator::add(std::uint32_t path_index, const std::vector<double>& xstar)
{
    if (xstar.size() != times_.size())
        throw std::invalid_argument("moments: path length does not match the grid");
    const std::size_t base = static_cast<std::size_t>(batch_of(path_index)) * cellsInternal();
    std::size_t cell = 0;
    for (std::size_t j = 0; j < times_.size(); ++j) {
        const double ax = std::abs(xstar[j]);
        for (std::size_t i = 0; i < q_values_.size(); ++i, ++cell) {
            const double x = std::pow(ax, q_values_[i]);
            const std::size_t s = base + cell;
            count_[s] += 1;
            const double delta = x - mean_[s];
            mean_[s] += delta / static_cast<double>(count_[s]);
            m2_[s] += delta * (x - mean_[s]);
        }
    }
}

MomentTable MomentAccumulator::finalize() const
{
    MomentTable t;
    t.times = times_;
    t.q_values = q_values_;
    t.n_paths = n_paths_;
    t.batching = batching_;
    const std::size_t cells = cellsInternal();
    t.mean.assign(cells, 0.0);
    t.se.assign(cells, 0.0);
    t.batch_median.assign(cells, 0.0);
    t.batch_mean.assign(static_cast<std::size_t>(batching_) * cells, 0.0);
    t.batch_count.assign(static_cast<std::size_t>(batching_), 0);

    for (int b = 0; b < batching_; ++b) {
        const auto [lo, hi] = batch_range(b);
        t.batch_count[static_cast<std::size_t>(b)] = hi - lo;
    }

    for (std::size_t c = 0; c < cells; ++c) {
        // Fixed-order fold of the per-batch running statistics.
        std::uint64_t n = 0;
        double mean = 0.0, m2 = 0.0;
        for (int b = 0; b < batching_; ++b) {
            const std::size_t s = static_cast<std::size_t>(b) * cells + c;
            t.batch_mean[s] = mean_[s];
            if (count_[s] == 0) continue;
            const double delta = mean_[s] - mean;
            const std::uint64_t nb = count_[s];
            const std::uint64_t merged = n + nb;
            m2 += m2_[s] + delta * delta * static_cast<double>(n) *
                               static_cast<double>(nb) / static_cast<double>(merged);
            mean += delta * static_cast<double>(nb) / static_cast<double>(merged);
            n = merged;
        }
        if (n != n_paths_)
            throw std::logic_error("moments: not every path was accumulated");
        t.mean[c] = mean;
        t.se[c] = n > 1 ? std::sqrt(m2 / static_cast<double>(n) / static_cast<double>(n - 1))
                        : 0.0;
        std::vector<double> bm;
        bm.reserve(static_cast<std::size_t>(batching_));
        for (int b = 0; b < batching_; ++b)
            if (count_[static_cast<std::size_t>(b) * cells + c] > 0)
                bm.push_back(mean_[static_cast<std::size_t>(b) * cells + c]);
        t.batch_median[c] = median_inplace(bm);
    }
    return t;
}

MomentTable accumulate_moments(const std::vector<PathSample>& paths,
                               std::vector<double> times, std::vector<double> q_values,
                               int batching, double q_sup)
{
    if (paths.empty()) throw std::invalid_argument("accumulate_moments: no paths");
    MomentAccumulator acc(std::move(times), std::move(q_values),
                          static_cast<std::uint32_t>(paths.size()), batching, q_sup);
    std::vector<const PathSample*> ordered;
    ordered.reserve(paths.size());
    for (const auto& p : paths) ordered.push_back(&p);
    std::sort(ordered.begin(), ordered.end(),
              [](const PathSample* a, const PathSample* b) {
                  return a->path_index < b->path_index;
              });
    for (const PathSample* p : ordered) acc.add(p->path_index, p->xstar);
    return acc.finalize();
}

FitWindow default_window(std::size_t grid_count, double drop_frac)
{
    const auto drop = static_cast<std::size_t>(std::floor(static_cast<double>(grid_count) * drop_frac));
    return {drop, grid_count - 1};
}

TauEstimate fit_tau(const MomentTable& table, FitWindow window,
                    MomentEstimator estimator, int n_boot)
{
    const std::size_t nq = table.q_values.size();
    const std::size_t nt = table.times.size();
    if (window.j_hi >= nt || window.j_lo > window.j_hi)
        throw std::invalid_argument("fit_tau: window outside the grid");
    const std::size_t npts = window.j_hi - window.j_lo + 1;
    if (npts < 4) throw std::invalid_argument("fit_tau: need at least 4 grid points");

    std::vector<double> logt(npts);
    for (std::size_t j = 0; j < npts; ++j) logt[j] = std::log(table.times[window.j_lo + j]);

    auto cell_value = [&](std::size_t j, std::size_t i) {
        return estimator == MomentEstimator::mean_of_paths
                   ? table.mean[table.cell(j, i)]
                   : table.batch_median[table.cell(j, i)];
    };

    TauEstimate est;
    est.q_values = table.q_values;
    est.window = window;
    est.estimator = estimator;
    est.tau_hat.resize(nq);
    est.stderr_boot.assign(nq, std::numeric_limits<double>::quiet_NaN());

    std::vector<double> logm(npts);
    for (std::size_t i = 0; i < nq; ++i) {
        for (std::size_t j = 0; j < npts; ++j) {
            const double v = cell_value(window.j_lo + j, i);
            if (!(v > 0.0))
                throw std::invalid_argument("fit_tau: nonpositive moment cell in the window");
            logm[j] = std::log(v);
        }
        est.tau_hat[i] = ols(logt, logm).slope;
    }

    const int nb = table.batching;
    if (nb >= 2 && n_boot > 0 && !table.batch_mean.empty()) {
        // Batch bootstrap of the slope; the resampling stream is fixed so
        // identical tables always yield identical errors.
        RandomStream rng(0x5eedb007u, 0);
        std::vector<std::vector<double>> slopes(nq);
        std::vector<int> pick(static_cast<std::size_t>(nb));
        for (int r = 0; r < n_boot; ++r) {
            for (auto& p : pick)
                p = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(nb));
            for (std::size_t i = 0; i < nq; ++i) {
                bool ok = true;
                for (std::size_t j = 0; j < npts && ok; ++j) {
                    const std::size_t c = table.cell(window.j_lo + j, i);
                    double value;
                    if (estimator == MomentEstimator::mean_of_paths) {
                        double num = 0.0, den = 0.0;
                        for (int p : pick) {
                            const double w = table.batch_count[static_cast<std::size_t>(p)];
                            num += w * table.batch_mean[static_cast<std::size_t>(p) * table.cells() + c];
                            den += w;
                        }
                        value = num / den;
                    } else {
                        std::vector<double> bm;
                        bm.reserve(pick.size());
                        for (int p : pick)
                            if (table.batch_count[static_cast<std::size_t>(p)] > 0)
                                bm.push_back(table.batch_mean[static_cast<std::size_t>(p) * table.cells() + c]);
                        value = median_inplace(bm);
                    }
                    if (value > 0.0)
                        logm[j] = std::log(value);
                    else
                        ok = false;
                }
                if (ok) slopes[i].push_back(ols(logt, logm).slope);
            }
        }
        for (std::size_t i = 0; i < nq; ++i) {
            if (slopes[i].size() < 2) continue;
            const double m = std::accumulate(slopes[i].begin(), slopes[i].end(), 0.0) /
                             static_cast<double>(slopes[i].size());
            double ss = 0.0;
            for (double s : slopes[i]) ss += (s - m) * (s - m);
            est.stderr_boot[i] = std::sqrt(ss / static_cast<double>(slopes[i].size() - 1));
        }
    } else {
        // Single batch: fall back to the OLS slope error.
        for (std::size_t i = 0; i < nq; ++i) {
            for (std::size_t j = 0; j < npts; ++j)
                logm[j] = std::log(cell_value(window.j_lo + j, i));
            est.stderr_boot[i] = ols(logt, logm).slope_se;
        }
    }
    return est;
}

std::optional<Breakpoint> fit_breakpoint(const TauEstimate& est, double rss_ratio)
{
    const std::size_t n = est.q_values.size();
    if (n < 8) throw std::invalid_argument("fit_breakpoint: need at least 8 orders");

    const OlsFit line = ols(est.q_values, est.tau_hat);
    double scale = 0.0;
    for (double y : est.tau_hat) scale = std::max(scale, y * y);
    if (line.rss <= 1e-16 * std::max(1.0, scale)) return std::nullopt;  // already a line

    double best_rss = std::numeric_limits<double>::infinity();
    Breakpoint best{};
    bool found = false;
    for (std::size_t k = 2; k + 2 < n; ++k) {  // >= 2 points on either side
        const double c = est.q_values[k];
        double rss, lo, hi;
        if (!hinge_fit(est.q_values, est.tau_hat, c, rss, lo, hi)) continue;
        if (rss < best_rss) {
            best_rss = rss;
            best = {c, lo, hi};
            found = true;
        }
    }
    if (!found) return std::nullopt;
    if (best_rss <= 0.0 || line.rss / best_rss >= rss_ratio) return best;
    return std::nullopt;
}

ComparisonReport compare(const TauEstimate& est, const ScalingFunction& theory,
                         double tolerance)
{
    ComparisonReport rep;
    for (std::size_t i = 0; i < est.q_values.size(); ++i) {
        const double q = est.q_values[i];
        const auto tv = theory(q);
        if (!tv) continue;  // outside the finite-moment range of the theory
        ComparisonRow row;
        row.q = q;
        row.tau_hat = est.tau_hat[i];
        row.se = est.stderr_boot[i];
        row.tau_theory = *tv;
        row.theory_is_bound = theory.bound_at(q);
        row.deviation = row.tau_hat - row.tau_theory;
        row.pass = row.theory_is_bound ? row.deviation <= tolerance
                                       : std::abs(row.deviation) <= tolerance;
        rep.max_abs_deviation = std::max(
            rep.max_abs_deviation,
            row.theory_is_bound ? std::max(0.0, row.deviation) : std::abs(row.deviation));
        rep.all_pass = rep.all_pass && row.pass;
        rep.rows.push_back(row);
    }
    if (rep.rows.empty())
        throw std::invalid_argument("compare: no overlap between estimate and theory domains");
    return rep;
}

}  // namespace supou
