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

#include <string>
#include <vector>

#include "supou/config.hpp"
#include "supou/estimate.hpp"
#include "supou/theory.hpp"

namespace supou {

inline constexpr const char* kVersion = "0.1.0";

/// Theory curves for a model: the closed-form total where the heavy-tail
/// classification applies, otherwise the composition of the present
/// component curves; components listed in (X1, X2, X3) order when present.
struct TheoryBundle {
    ScalingFunction total;
    std::vector<std::pair<Component, ScalingFunction>> components;
    std::string label;  // regime text, or a note when no regime applies
};

TheoryBundle theory_bundle(const CharacteristicQuadruple& q);

/// Runs the ensemble across workers with deterministic batch partitioning.
/// The result is byte-reproducible for any worker count.
MomentTable run_ensemble(const ExperimentConfig& cfg);

/// `tau` command body: writes tau_theory.tsv and tau_theory.json under dir,
/// returns the printed regime line.
std::string run_tau(const ExperimentConfig& cfg, const std::string& dir);

/// `simulate` command body: runs the ensemble and writes moments.tsv,
/// moments_batches.tsv, manifest.json and optionally paths.tsv under dir.
MomentTable run_simulate(const ExperimentConfig& cfg, const std::string& dir);

struct EstimateResult {
    TauEstimate estimate;
    std::optional<Breakpoint> breakpoint;
    ComparisonReport report;
};

/// `estimate` command body: loads a moments file, fits the scaling function,
/// compares with theory, writes tau.tsv and report.txt under dir.
EstimateResult run_estimate(const ExperimentConfig& cfg, const std::string& moments_path,
                            const std::string& dir);

/// `figure` command body: panel data emission for six configs, one per
/// regime case (a)-(f). Writes figure_<panel>.tsv per config plus
/// figure_manifest.json; empirical columns are joined from each config's
/// own output directory when a tau.tsv is present there.
std::vector<std::string> run_figure(const std::vector<ExperimentConfig>& cfgs,
                                    const std::string& dir);

// Moment-table persistence (tab-separated, full double precision).
void write_moments(const MomentTable& table, const std::string& dir);
MomentTable read_moments(const std::string& moments_path);

}  // namespace supou
