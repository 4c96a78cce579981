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

#include "supou/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace supou {

namespace {

namespace fs = std::filesystem;

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void ensure_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory " + dir + ": " + ec.message());
}

std::string components_json(const TheoryBundle& bundle)
{
    nlohmann::json j;
    j["total"] = nlohmann::json::parse(bundle.total.to_json());
    for (const auto& [comp, f] : bundle.components) {
        const char* name = comp == Component::X1 ? "x1" : comp == Component::X2 ? "x2" : "x3";
        j["components"][name] = nlohmann::json::parse(f.to_json());
    }
    return j.dump(2);
}

}  // namespace

TheoryBundle theory_bundle(const CharacteristicQuadruple& q)
{
    const auto violations = validate(q);
    if (!violations.empty())
        throw std::invalid_argument("theory_bundle: invalid model: " + violations.front());

    TheoryBundle out;
    if (q.has_big_jumps())
        out.components.emplace_back(Component::X1, tau_component(q, Component::X1));
    if (q.has_small_jumps())
        out.components.emplace_back(Component::X2, tau_component(q, Component::X2));
    if (q.has_gaussian())
        out.components.emplace_back(Component::X3, tau_component(q, Component::X3));

    if (q.has_big_jumps()) {
        out.total = tau_total(q);
        const RegimeLabel label = classify(q);
        std::ostringstream os;
        os << label.text() << " [panel (" << label.panel() << ")]";
        const auto bps = out.total.breakpoints();
        if (!bps.empty()) os << ", breakpoint q = " << bps.front();
        out.label = os.str();
    } else {
        // No heavy tail: the total is the composition of what is present.
        std::vector<ScalingFunction> fs;
        for (const auto& [comp, f] : out.components) fs.push_back(f);
        out.total = tau_max(fs);
        out.label = "no heavy-tail regime (finite moments of every order)";
    }
    return out;
}

MomentTable run_ensemble(const ExperimentConfig& cfg)
{
    const auto violations = cfg.validate_all();
    if (!violations.empty())
        throw std::invalid_argument("invalid config: " + violations.front());

    const std::vector<double> times = cfg.grid.times();
    const std::vector<double> q = cfg.resolved_q_grid();
    const SimOptions opts = cfg.sim_options();
    MomentAccumulator acc(times, q, cfg.n_paths, cfg.batching, cfg.quadruple.moment_sup());

    const int batches = static_cast<int>(std::min<std::uint32_t>(
        static_cast<std::uint32_t>(std::max(cfg.batching, 1)), cfg.n_paths));
    int workers = cfg.workers > 0 ? cfg.workers
                                  : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, batches));

    auto run_batches = [&](int b_lo, int b_hi) {
        for (int b = b_lo; b < b_hi; ++b) {
            const auto [lo, hi] = acc.batch_range(b);
            for (std::uint32_t p = lo; p < hi; ++p)
                acc.add(p, simulate_path(cfg.quadruple, cfg.grid, opts, cfg.seed, p,
                                         cfg.n_paths)
                               .xstar);
        }
    };

    if (workers == 1) {
        run_batches(0, batches);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            const int b_lo = static_cast<int>(static_cast<std::int64_t>(w) * batches / workers);
            const int b_hi = static_cast<int>(static_cast<std::int64_t>(w + 1) * batches / workers);
            pool.emplace_back(run_batches, b_lo, b_hi);
        }
        for (auto& t : pool) t.join();
    }
    return acc.finalize();
}

void write_moments(const MomentTable& table, const std::string& dir)
{
    ensure_dir(dir);
    std::ostringstream os;
    os << "t\tq\tm\tse\tn\tbatch_median\n";
    for (std::size_t j = 0; j < table.times.size(); ++j) {
        for (std::size_t i = 0; i < table.q_values.size(); ++i) {
            const auto c = table.cell(j, i);
            os << fmt(table.times[j]) << '\t' << fmt(table.q_values[i]) << '\t'
               << fmt(table.mean[c]) << '\t' << fmt(table.se[c]) << '\t' << table.n_paths
               << '\t' << fmt(table.batch_median[c]) << '\n';
        }
    }
    write_file(dir + "/moments.tsv", os.str());

    std::ostringstream ob;
    ob << "t\tq\tbatch\tbatch_n\tbatch_mean\n";
    for (std::size_t j = 0; j < table.times.size(); ++j)
        for (std::size_t i = 0; i < table.q_values.size(); ++i)
            for (int b = 0; b < table.batching; ++b) {
                const auto c = table.cell(j, i);
                ob << fmt(table.times[j]) << '\t' << fmt(table.q_values[i]) << '\t' << b
                   << '\t' << table.batch_count[static_cast<std::size_t>(b)] << '\t'
                   << fmt(table.batch_mean[static_cast<std::size_t>(b) * table.cells() + c])
                   << '\n';
            }
    write_file(dir + "/moments_batches.tsv", ob.str());
}

MomentTable read_moments(const std::string& moments_path)
{
    MomentTable t;
    std::istringstream is(read_file(moments_path));
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty moments file");
    std::vector<double> tcol, qcol, mcol, secol, bmcol;
    std::uint64_t n_paths = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        double tv, qv, mv, sev, bmv;
        std::uint64_t nv;
        if (!(row >> tv >> qv >> mv >> sev >> nv >> bmv))
            throw std::runtime_error("malformed moments row: " + line);
        tcol.push_back(tv);
        qcol.push_back(qv);
        mcol.push_back(mv);
        secol.push_back(sev);
        bmcol.push_back(bmv);
        n_paths = nv;
    }
    if (tcol.empty()) throw std::runtime_error("moments file has no rows");

    for (double tv : tcol)
        if (t.times.empty() || tv != t.times.back()) {
            if (!t.times.empty() && tv < t.times.back())
                throw std::runtime_error("moments file rows out of order");
            t.times.push_back(tv);
        }
    const std::size_t nq = tcol.size() / t.times.size();
    if (t.times.size() * nq != tcol.size())
        throw std::runtime_error("moments file is not a full (t, q) grid");
    t.q_values.assign(qcol.begin(), qcol.begin() + static_cast<std::ptrdiff_t>(nq));
    t.n_paths = static_cast<std::uint32_t>(n_paths);
    t.mean = mcol;
    t.se = secol;
    t.batch_median = bmcol;
    t.batching = 1;

    // Per-batch means live next to the moments file; without them slope
    // errors fall back to plain OLS.
    const fs::path bpath = fs::path(moments_path).parent_path() / "moments_batches.tsv";
    if (fs::exists(bpath)) {
        std::istringstream bs(read_file(bpath.string()));
        std::getline(bs, line);
        std::map<int, std::uint32_t> counts;
        std::vector<std::tuple<int, std::size_t, double>> entries;
        std::size_t rows_seen = 0;
        while (std::getline(bs, line)) {
            if (line.empty()) continue;
            std::istringstream row(line);
            double tv, qv, bmean;
            int b;
            std::uint32_t bn;
            if (!(row >> tv >> qv >> b >> bn >> bmean))
                throw std::runtime_error("malformed batch row: " + line);
            entries.emplace_back(b, rows_seen, bmean);
            counts[b] = bn;
            ++rows_seen;
        }
        const int nb = static_cast<int>(counts.size());
        if (nb > 0 && entries.size() == t.cells() * static_cast<std::size_t>(nb)) {
            t.batching = nb;
            t.batch_mean.assign(t.cells() * static_cast<std::size_t>(nb), 0.0);
            t.batch_count.assign(static_cast<std::size_t>(nb), 0);
            for (const auto& [b, idx, bmean] : entries) {
                const std::size_t cell = idx / static_cast<std::size_t>(nb);
                t.batch_mean[static_cast<std::size_t>(b) * t.cells() + cell] = bmean;
            }
            for (const auto& [b, bn] : counts) t.batch_count[static_cast<std::size_t>(b)] = bn;
        }
    }
    return t;
}

std::string run_tau(const ExperimentConfig& cfg, const std::string& dir)
{
    const TheoryBundle bundle = theory_bundle(cfg.quadruple);
    ensure_dir(dir);

    std::ostringstream os;
    os << "q\ttau\tkind\n";
    for (double q : cfg.resolved_q_grid()) {
        const auto v = bundle.total(q);
        if (!v) continue;
        os << fmt(q) << '\t' << fmt(*v) << '\t'
           << (bundle.total.bound_at(q) ? "upper_bound" : "exact") << '\n';
    }
    write_file(dir + "/tau_theory.tsv", os.str());
    write_file(dir + "/tau_theory.json", components_json(bundle));
    return bundle.label;
}

MomentTable run_simulate(const ExperimentConfig& cfg, const std::string& dir)
{
    ensure_dir(dir);
    const MomentTable table = run_ensemble(cfg);
    write_moments(table, dir);

    nlohmann::json manifest;
    manifest["tool"] = "supou";
    manifest["version"] = kVersion;
    manifest["seed"] = cfg.seed;
    manifest["config"] = nlohmann::json::parse(config_to_json(cfg));
    write_file(dir + "/manifest.json", manifest.dump(2) + "\n");

    if (cfg.dump_paths) {
        // Debug dump; absent components print as zero.
        std::ostringstream od;
        od << "path_index\tt\txstar\tx1\tx2\tx3\n";
        const auto times = cfg.grid.times();
        const SimOptions opts = cfg.sim_options();
        for (std::uint32_t p = 0; p < cfg.n_paths; ++p) {
            const PathSample ps =
                simulate_path(cfg.quadruple, cfg.grid, opts, cfg.seed, p, cfg.n_paths);
            for (std::size_t j = 0; j < times.size(); ++j) {
                auto comp = [&](const std::optional<std::vector<double>>& c) {
                    return c ? (*c)[j] : 0.0;
                };
                od << p << '\t' << fmt(times[j]) << '\t' << fmt(ps.xstar[j]) << '\t'
                   << fmt(comp(ps.x1)) << '\t' << fmt(comp(ps.x2)) << '\t'
                   << fmt(comp(ps.x3)) << '\n';
            }
        }
        write_file(dir + "/paths.tsv", od.str());
    }
    return table;
}

EstimateResult run_estimate(const ExperimentConfig& cfg, const std::string& moments_path,
                            const std::string& dir)
{
    const MomentTable table = read_moments(moments_path);
    const TheoryBundle bundle = theory_bundle(cfg.quadruple);

    EstimateResult res;
    res.estimate = fit_tau(table, default_window(table.times.size(), cfg.window_frac),
                           cfg.estimator);
    res.breakpoint = res.estimate.q_values.size() >= 8
                         ? fit_breakpoint(res.estimate)
                         : std::nullopt;
    res.report = compare(res.estimate, bundle.total, cfg.tolerance);

    ensure_dir(dir);
    std::ostringstream os;
    os << "q\ttau_hat\tse\ttau_theory\ttheory_kind\tpass\n";
    for (const auto& row : res.report.rows) {
        os << fmt(row.q) << '\t' << fmt(row.tau_hat) << '\t' << fmt(row.se) << '\t'
           << fmt(row.tau_theory) << '\t' << (row.theory_is_bound ? "upper_bound" : "exact")
           << '\t' << (row.pass ? 1 : 0) << '\n';
    }
    write_file(dir + "/tau.tsv", os.str());

    std::ostringstream rep;
    rep << "model: " << bundle.label << "\n";
    rep << "estimator: "
        << (cfg.estimator == MomentEstimator::mean_of_paths ? "mean of paths"
                                                            : "median of batches")
        << ", window t in [" << fmt(table.times[res.estimate.window.j_lo]) << ", "
        << fmt(table.times[res.estimate.window.j_hi]) << "], paths: " << table.n_paths
        << "\n";
    if (res.breakpoint) {
        rep << "breakpoint: q = " << fmt(res.breakpoint->q_break) << " with slopes "
            << fmt(res.breakpoint->slope_lo) << " -> " << fmt(res.breakpoint->slope_hi)
            << "\n";
    } else {
        rep << "breakpoint: none detected\n";
    }
    rep << "tolerance: " << fmt(cfg.tolerance)
        << ", max |deviation|: " << fmt(res.report.max_abs_deviation) << ", "
        << (res.report.all_pass ? "all orders pass" : "some orders FAIL") << "\n\n";
    rep << "  q        tau_hat    se         tau_theory  deviation  verdict\n";
    for (const auto& row : res.report.rows) {
        char line[160];
        std::snprintf(line, sizeof line, "  %-8.4g %-10.5g %-10.3g %-11.5g %-10.3g %s%s\n",
                      row.q, row.tau_hat, row.se, row.tau_theory, row.deviation,
                      row.pass ? "pass" : "FAIL",
                      row.theory_is_bound ? " (bound, one-sided)" : "");
        rep << line;
    }
    write_file(dir + "/report.txt", rep.str());
    return res;
}

std::vector<std::string> run_figure(const std::vector<ExperimentConfig>& cfgs,
                                    const std::string& dir)
{
    std::map<char, const ExperimentConfig*> panels;
    for (const auto& cfg : cfgs) {
        const auto violations = cfg.validate_all();
        if (!violations.empty())
            throw std::invalid_argument("invalid config: " + violations.front());
        const char panel = classify(cfg.quadruple).panel();
        if (panels.count(panel))
            throw std::invalid_argument(std::string("two configs map to panel (") + panel + ")");
        panels[panel] = &cfg;
    }
    for (char p : {'a', 'b', 'c', 'd', 'e', 'f'})
        if (!panels.count(p))
            throw std::invalid_argument(std::string("missing config for panel (") + p + ")");

    ensure_dir(dir);
    std::vector<std::string> files;
    nlohmann::json manifest;
    for (const auto& [panel, cfg] : panels) {
        const TheoryBundle bundle = theory_bundle(cfg->quadruple);

        // Empirical columns come from this config's own pipeline output.
        std::map<double, std::pair<double, double>> empirical;
        const fs::path tau_path = fs::path(cfg->output_dir) / "tau.tsv";
        if (fs::exists(tau_path)) {
            std::istringstream is(read_file(tau_path.string()));
            std::string line;
            std::getline(is, line);
            while (std::getline(is, line)) {
                if (line.empty()) continue;
                std::istringstream row(line);
                double q, th, se, tt;
                std::string kind;
                int pass;
                if (row >> q >> th >> se >> tt >> kind >> pass)
                    empirical[q] = {th, se};
            }
        }

        std::ostringstream os;
        os << (empirical.empty() ? "q\ttau_theory\n" : "q\ttau_theory\ttau_hat\tse\n");
        for (double q : cfg->resolved_q_grid()) {
            const auto v = bundle.total(q);
            if (!v) continue;
            os << fmt(q) << '\t' << fmt(*v);
            if (!empirical.empty()) {
                const auto it = empirical.find(q);
                if (it != empirical.end())
                    os << '\t' << fmt(it->second.first) << '\t' << fmt(it->second.second);
                else
                    os << "\tnan\tnan";
            }
            os << '\n';
        }
        const std::string name = std::string("figure_") + panel + ".tsv";
        write_file(dir + "/" + name, os.str());
        files.push_back(name);
        manifest["panels"][std::string(1, panel)] = {
            {"file", name},
            {"case", bundle.label},
            {"empirical", !empirical.empty()},
        };
    }
    write_file(dir + "/figure_manifest.json", manifest.dump(2) + "\n");
    return files;
}

}  // namespace supou
