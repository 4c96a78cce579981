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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "supou/estimate.hpp"
#include "supou/model.hpp"
#include "supou/sim.hpp"

namespace supou {

/// A full experiment: model, evaluation grid, ensemble and estimator
/// settings. Loadable from a flat key = value file (field names below) or
/// from the JSON manifest written next to previous results.
///
/// Keys: a (optional; auto-centered when omitted), b, gamma, w_plus, w_minus,
/// beta, c_plus, c_minus, pi_shape, pi_rate, t0, ratio, count, n_paths,
/// q_grid ("lo:hi:n" or a comma list), eps_cutoff, n_ou, burn_in, seed,
/// workers, output_dir, window_frac, batching, estimator, tolerance.
struct ExperimentConfig {
    CharacteristicQuadruple quadruple;
    TimeGrid grid;
    std::uint32_t n_paths = 1024;
    std::vector<double> q_grid;  // empty means the default grid
    double eps_cutoff = 1e-3;
    int n_ou = 64;
    std::optional<double> burn_in;
    std::uint64_t seed = 1;
    int workers = 0;  // 0 = hardware concurrency
    std::string output_dir = "out";
    double window_frac = 0.25;
    int batching = 32;
    MomentEstimator estimator = MomentEstimator::mean_of_paths;
    double tolerance = 0.15;
    bool dump_paths = false;

    /// Default moment orders: 16 points spanning (0.1, 0.95 gamma), or
    /// (0.1, 3) when every moment is finite.
    std::vector<double> resolved_q_grid() const;
    SimOptions sim_options() const;
    std::vector<std::string> validate_all() const;
};

/// Parses a config from flat key = value text or from a JSON document
/// (a manifest's embedded config is recognized). Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// JSON object echoing every field (the manifest payload).
std::string config_to_json(const ExperimentConfig& cfg);

}  // namespace supou
