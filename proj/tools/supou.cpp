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

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "supou/experiment.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct CommonFlags {
    std::vector<std::string> configs;
    std::string out;
    std::string seed;
    int workers = -1;
    long long paths = -1;
    bool dump_paths = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool many_configs)
{
    auto* opt = cmd->add_option("--config", flags.configs,
                                "configuration file (key = value, or a manifest)");
    opt->required();
    if (!many_configs) opt->expected(1);
    cmd->add_option("--out", flags.out, "output directory (overrides output_dir)");
    cmd->add_option("--seed", flags.seed, "random seed (overrides the config)");
    cmd->add_option("--workers", flags.workers, "worker threads (overrides the config)");
    cmd->add_option("--paths", flags.paths, "number of paths (overrides the config)");
    cmd->add_flag("--dump-paths", flags.dump_paths, "also write per-path values");
}

supou::ExperimentConfig load(const CommonFlags& flags, const std::string& path)
{
    supou::ExperimentConfig cfg = supou::load_config(path);
    if (!flags.out.empty()) cfg.output_dir = flags.out;
    if (!flags.seed.empty()) cfg.seed = std::stoull(flags.seed);
    if (flags.workers >= 0) cfg.workers = flags.workers;
    if (flags.paths >= 0) cfg.n_paths = static_cast<std::uint32_t>(flags.paths);
    if (flags.dump_paths) cfg.dump_paths = true;
    return cfg;
}

int check(const supou::ExperimentConfig& cfg)
{
    const auto violations = cfg.validate_all();
    if (violations.empty()) return 0;
    std::fprintf(stderr, "invalid configuration:\n");
    for (const auto& v : violations) std::fprintf(stderr, "  - %s\n", v.c_str());
    return kExitValidation;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"simulation and moment-scaling analysis of integrated supOU processes"};
    app.require_subcommand(1);

    CommonFlags tau_flags, sim_flags, est_flags, fig_flags;
    std::string moments_path;

    auto* tau = app.add_subcommand("tau", "write the theoretical scaling function");
    add_common(tau, tau_flags, false);

    auto* sim = app.add_subcommand("simulate", "run the ensemble and write moments");
    add_common(sim, sim_flags, false);

    auto* est = app.add_subcommand("estimate", "fit the empirical scaling function");
    add_common(est, est_flags, false);
    est->add_option("--moments", moments_path,
                    "moments file (default: <out>/moments.tsv)");

    auto* fig = app.add_subcommand("figure", "emit per-panel plot data (six configs)");
    add_common(fig, fig_flags, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (tau->parsed()) {
            const auto cfg = load(tau_flags, tau_flags.configs.front());
            if (int rc = check(cfg)) return rc;
            const std::string label = supou::run_tau(cfg, cfg.output_dir);
            std::printf("%s\n", label.c_str());
            std::printf("wrote %s/tau_theory.tsv and tau_theory.json\n", cfg.output_dir.c_str());
        } else if (sim->parsed()) {
            const auto cfg = load(sim_flags, sim_flags.configs.front());
            if (int rc = check(cfg)) return rc;
            supou::run_simulate(cfg, cfg.output_dir);
            std::printf("wrote %s/moments.tsv (%u paths)\n", cfg.output_dir.c_str(),
                        cfg.n_paths);
        } else if (est->parsed()) {
            const auto cfg = load(est_flags, est_flags.configs.front());
            if (int rc = check(cfg)) return rc;
            const std::string src =
                moments_path.empty() ? cfg.output_dir + "/moments.tsv" : moments_path;
            const auto res = supou::run_estimate(cfg, src, cfg.output_dir);
            if (res.breakpoint)
                std::printf("breakpoint at q = %.6g (slopes %.4g -> %.4g)\n",
                            res.breakpoint->q_break, res.breakpoint->slope_lo,
                            res.breakpoint->slope_hi);
            else
                std::printf("no breakpoint detected\n");
            std::printf("max |deviation| = %.6g, %s\n", res.report.max_abs_deviation,
                        res.report.all_pass ? "all orders pass" : "some orders FAIL");
            std::printf("wrote %s/tau.tsv and report.txt\n", cfg.output_dir.c_str());
        } else if (fig->parsed()) {
            // --out names the figure directory; each config keeps its own
            // output_dir, which is where empirical results are looked up.
            CommonFlags per_config = fig_flags;
            per_config.out.clear();
            std::vector<supou::ExperimentConfig> cfgs;
            for (const auto& path : fig_flags.configs) cfgs.push_back(load(per_config, path));
            for (const auto& cfg : cfgs)
                if (int rc = check(cfg)) return rc;
            const std::string dir = fig_flags.out.empty() ? "figure" : fig_flags.out;
            const auto files = supou::run_figure(cfgs, dir);
            for (const auto& f : files) std::printf("wrote %s/%s\n", dir.c_str(), f.c_str());
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    }
    return 0;
}
