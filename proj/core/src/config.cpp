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

#include "supou/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace supou {

namespace {

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_q_spec(const std::string& spec)
{
    std::vector<double> out;
    if (spec.empty()) return out;
    if (spec.find(':') != std::string::npos) {
        // lo:hi:n, inclusive endpoints
        double lo, hi;
        int n;
        char c1, c2;
        std::istringstream is(spec);
        if (!(is >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 2)
            throw std::invalid_argument("q_grid: expected lo:hi:n with n >= 2");
        for (int i = 0; i < n; ++i)
            out.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
        return out;
    }
    std::istringstream is(spec);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

std::string q_spec_string(const std::vector<double>& q)
{
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (i) os << ',';
        os << q[i];
    }
    return os.str();
}

ExperimentConfig from_pairs(const std::map<std::string, std::string>& kv)
{
    ExperimentConfig cfg;
    std::optional<double> drift;
    auto get = [&kv](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    static const std::map<std::string, int> known = {
        {"a", 0}, {"b", 0}, {"gamma", 0}, {"w_plus", 0}, {"w_minus", 0},
        {"beta", 0}, {"c_plus", 0}, {"c_minus", 0}, {"pi_shape", 0}, {"pi_rate", 0},
        {"t0", 0}, {"ratio", 0}, {"count", 0}, {"n_paths", 0}, {"q_grid", 0},
        {"eps_cutoff", 0}, {"n_ou", 0}, {"burn_in", 0}, {"seed", 0}, {"workers", 0},
        {"output_dir", 0}, {"window_frac", 0}, {"batching", 0}, {"estimator", 0},
        {"tolerance", 0}, {"dump_paths", 0}};
    for (const auto& [key, value] : kv)
        if (!known.count(key))
            throw std::invalid_argument("config: unknown key '" + key + "'");

    auto num = [&](const std::string& key, double dflt) {
        const auto v = get(key);
        return v ? std::stod(*v) : dflt;
    };

    if (auto v = get("a")) drift = std::stod(*v);
    cfg.quadruple.b = num("b", 0.0);
    cfg.quadruple.big_jumps.gamma_idx = num("gamma", 1.5);
    cfg.quadruple.big_jumps.w_plus = num("w_plus", 0.0);
    cfg.quadruple.big_jumps.w_minus = num("w_minus", 0.0);
    cfg.quadruple.small_jumps.beta_idx = num("beta", 0.0);
    cfg.quadruple.small_jumps.c_plus = num("c_plus", 0.0);
    cfg.quadruple.small_jumps.c_minus = num("c_minus", 0.0);
    cfg.quadruple.pi.shape = num("pi_shape", 1.0);
    cfg.quadruple.pi.rate = num("pi_rate", 1.0);
    cfg.grid.t0 = num("t0", 1.0);
    cfg.grid.ratio = num("ratio", 2.0);
    cfg.grid.count = static_cast<int>(num("count", 11));
    cfg.n_paths = static_cast<std::uint32_t>(num("n_paths", 1024));
    if (auto v = get("q_grid")) cfg.q_grid = parse_q_spec(*v);
    cfg.eps_cutoff = num("eps_cutoff", 1e-3);
    cfg.n_ou = static_cast<int>(num("n_ou", 64));
    if (auto v = get("burn_in")) cfg.burn_in = std::stod(*v);
    if (auto v = get("seed")) cfg.seed = std::stoull(*v);
    cfg.workers = static_cast<int>(num("workers", 0));
    if (auto v = get("output_dir")) cfg.output_dir = *v;
    cfg.window_frac = num("window_frac", 0.25);
    cfg.batching = static_cast<int>(num("batching", 32));
    if (auto v = get("estimator")) {
        if (*v == "mean") cfg.estimator = MomentEstimator::mean_of_paths;
        else if (*v == "median_of_batches") cfg.estimator = MomentEstimator::median_of_batches;
        else throw std::invalid_argument("config: estimator must be mean or median_of_batches");
    }
    cfg.tolerance = num("tolerance", 0.15);
    if (auto v = get("dump_paths")) cfg.dump_paths = (*v == "1" || *v == "true");

    // Finite-mean models are centered automatically unless a drift was given.
    if (drift) {
        cfg.quadruple.a = *drift;
    } else if (cfg.quadruple.has_big_jumps() && cfg.quadruple.gamma() > 1.0) {
        cfg.quadruple.a = centering_drift(cfg.quadruple);
    }
    return cfg;
}

}  // namespace

std::vector<double> ExperimentConfig::resolved_q_grid() const
{
    if (!q_grid.empty()) return q_grid;
    const double sup = quadruple.moment_sup();
    const double hi = std::isfinite(sup) ? 0.95 * sup : 3.0;
    std::vector<double> out;
    for (int i = 0; i < 16; ++i)
        out.push_back(0.1 + (hi - 0.1) * static_cast<double>(i) / 15.0);
    return out;
}

SimOptions ExperimentConfig::sim_options() const
{
    SimOptions o;
    o.eps_cutoff = eps_cutoff;
    o.n_ou = n_ou;
    o.burn_in = burn_in;
    o.keep_components = dump_paths;
    return o;
}

std::vector<std::string> ExperimentConfig::validate_all() const
{
    std::vector<std::string> v = validate(quadruple);
    try {
        grid.check();
    } catch (const std::exception& e) {
        v.push_back(e.what());
    }
    if (n_paths < 1) v.push_back("n_paths must be >= 1");
    if (n_ou < 1) v.push_back("n_ou must be >= 1");
    if (quadruple.has_small_jumps() && quadruple.beta() > 0.0 &&
        !(eps_cutoff > 0.0 && eps_cutoff < 1.0))
        v.push_back("eps_cutoff must lie in (0, 1)");
    if (!(window_frac >= 0.0 && window_frac < 1.0))
        v.push_back("window_frac must lie in [0, 1)");
    if (batching < 1) v.push_back("batching must be >= 1");
    const double sup = quadruple.moment_sup();
    for (double q : resolved_q_grid()) {
        if (!(q > 0.0)) v.push_back("q_grid orders must be positive");
        else if (q >= sup) v.push_back("q_grid includes an order with infinite moments");
    }
    return v;
}

ExperimentConfig parse_config(const std::string& text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        auto j = nlohmann::json::parse(text);
        if (j.contains("config")) j = j["config"];  // manifest round-trip
        std::map<std::string, std::string> kv;
        for (const auto& [key, value] : j.items()) {
            if (value.is_string()) {
                kv[key] = value.get<std::string>();
            } else if (value.is_boolean()) {
                kv[key] = value.get<bool>() ? "1" : "0";
            } else if (value.is_number_unsigned()) {
                kv[key] = std::to_string(value.get<std::uint64_t>());
            } else if (value.is_number_integer()) {
                kv[key] = std::to_string(value.get<std::int64_t>());
            } else if (!value.is_null()) {
                std::ostringstream os;
                os.precision(17);
                os << value.get<double>();
                kv[key] = os.str();
            }
        }
        return from_pairs(kv);
    }

    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value, got '" + line + "'");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return from_pairs(kv);
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& cfg)
{
    nlohmann::json j;
    j["a"] = cfg.quadruple.a;
    j["b"] = cfg.quadruple.b;
    j["gamma"] = cfg.quadruple.big_jumps.gamma_idx;
    j["w_plus"] = cfg.quadruple.big_jumps.w_plus;
    j["w_minus"] = cfg.quadruple.big_jumps.w_minus;
    j["beta"] = cfg.quadruple.small_jumps.beta_idx;
    j["c_plus"] = cfg.quadruple.small_jumps.c_plus;
    j["c_minus"] = cfg.quadruple.small_jumps.c_minus;
    j["pi_shape"] = cfg.quadruple.pi.shape;
    j["pi_rate"] = cfg.quadruple.pi.rate;
    j["t0"] = cfg.grid.t0;
    j["ratio"] = cfg.grid.ratio;
    j["count"] = cfg.grid.count;
    j["n_paths"] = cfg.n_paths;
    j["q_grid"] = q_spec_string(cfg.resolved_q_grid());
    j["eps_cutoff"] = cfg.eps_cutoff;
    j["n_ou"] = cfg.n_ou;
    if (cfg.burn_in) j["burn_in"] = *cfg.burn_in;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    j["output_dir"] = cfg.output_dir;
    j["window_frac"] = cfg.window_frac;
    j["batching"] = cfg.batching;
    j["estimator"] = cfg.estimator == MomentEstimator::mean_of_paths ? "mean"
                                                                     : "median_of_batches";
    j["tolerance"] = cfg.tolerance;
    j["dump_paths"] = cfg.dump_paths;
    return j.dump(2);
}

}  // namespace supou
