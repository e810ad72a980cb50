#include "lipkin/sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace lipkin::sweep {

using nlohmann::json;

std::string to_string(Mode m) {
    switch (m) {
        case Mode::Exact: return "exact";
        case Mode::SimIdeal: return "sim_ideal";
        case Mode::SimNoisy: return "sim_noisy";
    }
    return "exact";
}

Mode mode_from_string(const std::string& s) {
    if (s == "exact") return Mode::Exact;
    if (s == "sim_ideal" || s == "ideal") return Mode::SimIdeal;
    if (s == "sim_noisy" || s == "noisy") return Mode::SimNoisy;
    throw ConfigError("unknown mode: " + s);
}

std::string to_string(LambdaScale s) {
    return s == LambdaScale::None ? "none" : "per_pair";
}

LambdaScale lambda_scale_from_string(const std::string& s) {
    if (s == "none") return LambdaScale::None;
    if (s == "per_pair") return LambdaScale::PerPair;
    throw ConfigError("unknown lambda_scale: " + s);
}

std::vector<double> LambdaGrid::values() const {
    if (!explicit_values.empty()) return explicit_values;
    if (steps < 2) throw ConfigError("lambda_grid: steps must be >= 2");
    std::vector<double> v(steps);
    for (int i = 0; i < steps; ++i)
        v[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
    if (min == -max) {
        // bit-exact +-lambda pairs, so degenerate mirror points pair up
        for (int i = 0; i < steps / 2; ++i) v[steps - 1 - i] = -v[i];
        if (steps % 2 == 1) v[steps / 2] = 0.0;
    }
    return v;
}

sim::NoiseModel NoiseConfig::to_model(int n_qubits) const {
    sim::NoiseModel m;
    m.t1_per_qubit = t1;
    if (m.t1_per_qubit.empty()) m.t1_per_qubit.assign(static_cast<std::size_t>(n_qubits), 100.0);
    if (static_cast<int>(m.t1_per_qubit.size()) == 1)
        m.t1_per_qubit.assign(static_cast<std::size_t>(n_qubits), m.t1_per_qubit[0]);
    for (const auto& [k, v] : gate_durations) m.gate_durations[sim::gate_kind_from_string(k)] = v;
    m.extra_damping_per_gate = per_gate_p;
    return m;
}

void SweepConfig::validate() const {
    if (n_particles < 1) throw ConfigError("n_particles must be >= 1");
    if (epsilon_values.empty() && limit_points.empty()) throw ConfigError("empty epsilon grid");
    if (lambda_grid.explicit_values.empty() && lambda_grid.steps < 2)
        throw ConfigError("lambda grid needs steps >= 2 or explicit values");
    if (mode != Mode::Exact) {
        if (shots < 1) throw ConfigError("sim modes need shots >= 1");
        if (repetitions < 1) throw ConfigError("sim modes need repetitions >= 1");
        if (n_particles != 3 && n_particles != 4)
            throw ConfigError("sim modes support N in {3, 4}");
    }
    if (mode == Mode::SimNoisy && !noise.per_gate_p && noise.t1.empty())
        throw ConfigError("sim_noisy needs noise.t1 or noise.per_gate_p");
}

double SweepConfig::model_lambda(double sweep_lambda) const {
    if (lambda_scale == LambdaScale::None || n_particles <= 1) return sweep_lambda;
    return sweep_lambda / static_cast<double>(n_particles - 1);
}

namespace {

json config_to_json(const SweepConfig& c) {
    json j;
    j["model"]["n_particles"] = c.n_particles;
    j["model"]["epsilon_values"] = c.epsilon_values;
    if (!c.lambda_grid.explicit_values.empty()) {
        j["model"]["lambda_grid"]["values"] = c.lambda_grid.explicit_values;
    } else {
        j["model"]["lambda_grid"]["min"] = c.lambda_grid.min;
        j["model"]["lambda_grid"]["max"] = c.lambda_grid.max;
        j["model"]["lambda_grid"]["steps"] = c.lambda_grid.steps;
    }
    j["model"]["lambda_scale"] = to_string(c.lambda_scale);
    j["model"]["degeneracy_tol"] = c.degeneracy_tol;
    j["model"]["limit_points"] = json::array();
    for (const auto& lp : c.limit_points)
        j["model"]["limit_points"].push_back(
            {{"epsilon", lp.epsilon}, {"lambda", lp.lambda}, {"label", lp.label}});
    j["mode"] = to_string(c.mode);
    j["shots"] = c.shots;
    j["repetitions"] = c.repetitions;
    j["root_seed"] = c.root_seed;
    j["noise"]["t1"] = c.noise.t1;
    j["noise"]["gate_durations"] = c.noise.gate_durations;
    if (c.noise.per_gate_p) j["noise"]["per_gate_p"] = *c.noise.per_gate_p;
    j["hull"]["eps"] = c.hull_eps;
    j["hull"]["angle_tol"] = c.hull_angle_tol;
    j["output"]["directory"] = c.output_directory;
    j["output"]["formats"] = c.formats;
    return j;
}

}  // namespace

std::string SweepConfig::to_canonical_json() const { return config_to_json(*this).dump(2); }

SweepConfig SweepConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    SweepConfig c;
    try {
        const json& m = j.at("model");
        c.n_particles = m.at("n_particles").get<int>();
        if (m.contains("epsilon_values"))
            c.epsilon_values = m.at("epsilon_values").get<std::vector<double>>();
        if (m.contains("lambda_grid")) {
            const json& g = m.at("lambda_grid");
            if (g.contains("values"))
                c.lambda_grid.explicit_values = g.at("values").get<std::vector<double>>();
            else {
                c.lambda_grid.min = g.at("min").get<double>();
                c.lambda_grid.max = g.at("max").get<double>();
                c.lambda_grid.steps = g.at("steps").get<int>();
            }
        }
        if (m.contains("lambda_scale"))
            c.lambda_scale = lambda_scale_from_string(m.at("lambda_scale").get<std::string>());
        c.degeneracy_tol = m.value("degeneracy_tol", 1e-9);
        if (m.contains("limit_points"))
            for (const auto& lp : m.at("limit_points"))
                c.limit_points.push_back({lp.at("epsilon").get<double>(),
                                          lp.at("lambda").get<double>(),
                                          lp.value("label", std::string{})});
        if (j.contains("mode")) c.mode = mode_from_string(j.at("mode").get<std::string>());
        c.shots = j.value("shots", c.shots);
        c.repetitions = j.value("repetitions", c.repetitions);
        c.root_seed = j.value("root_seed", c.root_seed);
        if (j.contains("noise")) {
            const json& njs = j.at("noise");
            if (njs.contains("t1")) c.noise.t1 = njs.at("t1").get<std::vector<double>>();
            if (njs.contains("gate_durations"))
                c.noise.gate_durations =
                    njs.at("gate_durations").get<std::map<std::string, double>>();
            if (njs.contains("per_gate_p")) c.noise.per_gate_p = njs.at("per_gate_p").get<double>();
        }
        if (j.contains("hull")) {
            c.hull_eps = j.at("hull").value("eps", c.hull_eps);
            c.hull_angle_tol = j.at("hull").value("angle_tol", c.hull_angle_tol);
        }
        if (j.contains("output")) {
            c.output_directory = j.at("output").value("directory", c.output_directory);
            if (j.at("output").contains("formats"))
                c.formats = j.at("output").at("formats").get<std::vector<std::string>>();
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    c.validate();
    return c;
}

SweepConfig SweepConfig::from_json_file(const std::string& path) {
    return from_json_text(read_file(path));
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t SweepConfig::hash() const { return fnv1a64(to_canonical_json()); }

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t point, std::uint64_t repetition,
                          std::uint64_t group) {
    auto mix = [](std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    };
    std::uint64_t h = mix(root ^ 0xA5A5A5A5A5A5A5A5ULL);
    h = mix(h ^ (point + 1));
    h = mix(h ^ ((repetition + 1) << 20));
    h = mix(h ^ ((group + 1) << 40));
    return h;
}

std::vector<std::pair<double, double>> grid_of(const SweepConfig& config) {
    std::vector<std::pair<double, double>> grid;
    const auto lambdas = config.lambda_grid.values();
    for (double eps : config.epsilon_values)
        for (double lam : lambdas) grid.emplace_back(eps, lam);
    for (const auto& lp : config.limit_points) grid.emplace_back(lp.epsilon, lp.lambda);
    return grid;
}

namespace {

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int worker_count() {
    if (const char* env = std::getenv("LIPKIN_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Evaluates fn(i) for i in [0, n) on a bounded pool; results land in order.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const int workers = std::min<int>(worker_count(), static_cast<int>(n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::optional<std::string> label_of(const SweepConfig& config, std::size_t index) {
    const std::size_t main_points =
        config.epsilon_values.size() * config.lambda_grid.values().size();
    if (index < main_points) return std::nullopt;
    const std::size_t k = index - main_points;
    if (k < config.limit_points.size() && !config.limit_points[k].label.empty())
        return config.limit_points[k].label;
    return std::nullopt;
}

}  // namespace

SweepResult run_exact_sweep(const SweepConfig& config) {
    config.validate();
    if (config.mode != Mode::Exact) throw ConfigError("run_exact_sweep: mode must be exact");

    SweepResult result;
    result.manifest.tool_version = tool_version();
    result.manifest.config_hash = config.hash();
    result.manifest.config_json = config.to_canonical_json();
    result.manifest.started_at = iso_now();

    const auto grid = grid_of(config);
    result.points.resize(grid.size());
    lmg::GroundStateOptions opts{config.degeneracy_tol};

    parallel_for(grid.size(), [&](std::size_t i) {
        const auto [eps, lam] = grid[i];
        lmg::LmgParams params{eps, config.model_lambda(lam), config.n_particles};
        const auto gs = lmg::ground_state(params, opts);
        SweepPoint pt;
        pt.epsilon = eps;
        pt.lambda = lam;
        pt.rdm = lmg::order_parameters(gs, params);
        pt.energy = gs.energy;
        pt.label = label_of(config, i);
        result.points[i] = std::move(pt);
    });

    result.manifest.finished_at = iso_now();
    return result;
}

namespace {

struct PreparedCircuit {
    sim::Circuit circuit;
    lmg::RdmPoint exact_point;
};

PreparedCircuit prepare_point(const SweepConfig& config, double eps, double lam) {
    lmg::LmgParams params{eps, config.model_lambda(lam), config.n_particles};
    const lmg::GroundStateOptions opts{config.degeneracy_tol};
    const auto target = ansatz::exact_coefficients(params, opts);
    const auto angles = ansatz::solve_angles(target);
    PreparedCircuit out;
    out.circuit = ansatz::build_circuit(config.n_particles, angles, target.flipped);
    out.exact_point = lmg::order_parameters(lmg::ground_state(params, opts), params);
    return out;
}

}  // namespace

SweepResult run_sim_sweep(const SweepConfig& config) {
    config.validate();
    if (config.mode == Mode::Exact) throw ConfigError("run_sim_sweep: mode must be a sim mode");
    const int n = config.n_particles;

    SweepResult result;
    result.manifest.tool_version = tool_version();
    result.manifest.config_hash = config.hash();
    result.manifest.config_json = config.to_canonical_json();
    result.manifest.started_at = iso_now();

    const auto grid = grid_of(config);
    result.points.resize(grid.size());
    std::vector<std::vector<std::string>> jsonl(grid.size());
    std::vector<std::string> failures(grid.size());

    const auto plan = tomo::default_plan(n, config.shots, config.repetitions);
    const std::optional<sim::NoiseModel> noise =
        config.mode == Mode::SimNoisy ? std::optional<sim::NoiseModel>(config.noise.to_model(n))
                                      : std::nullopt;

    parallel_for(grid.size(), [&](std::size_t i) {
        const auto [eps, lam] = grid[i];
        SweepPoint pt;
        pt.epsilon = eps;
        pt.lambda = lam;
        pt.label = label_of(config, i);
        lmg::LmgParams params{eps, config.model_lambda(lam), n};
        try {
            const auto prep = prepare_point(config, eps, lam);
            std::vector<tomo::GroupCounts> counts;
            for (std::size_t g = 0; g < plan.groups.size(); ++g) {
                sim::Circuit circ = prep.circuit;
                for (int q = 0; q < n; ++q)
                    for (const auto& gate : tomo::basis_rotation_gates(plan.groups[g][q], q))
                        circ.ops.push_back(gate);
                const sim::QuantumState st = sim::run_circuit(circ, noise);
                for (int rep = 0; rep < plan.repetitions; ++rep) {
                    tomo::GroupCounts gc;
                    gc.setting = plan.groups[g];
                    gc.shots = plan.shots_per_group;
                    gc.seed = derive_seed(config.root_seed, i, rep, g);
                    gc.counts = sim::sample_counts(st, gc.shots, gc.seed);
                    jsonl[i].push_back(tomo::group_counts_to_jsonl(gc, i, params));
                    counts.push_back(std::move(gc));
                }
            }
            const auto est = tomo::order_parameters_from_counts(
                counts, n, params,
                config.mode == Mode::SimNoisy ? lmg::Source::SimNoisy : lmg::Source::SimIdeal);
            pt.rdm = est.point;
            pt.rdm.seed = derive_seed(config.root_seed, i, 0, 0);
            pt.energy = params.epsilon * pt.rdm.jz + 0.5 * params.lambda * pt.rdm.jpm2;
            pt.jz_err = est.jz_err;
            pt.jz2_err = est.jz2_err;
            pt.jpm2_err = est.jpm2_err;
            pt.sigma_z = est.sigma_z;
        } catch (const ansatz::InfeasibleTargetError& e) {
            pt.failed = true;
            failures[i] = e.what();
        }
        result.points[i] = std::move(pt);
    });

    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (auto& line : jsonl[i]) result.counts_jsonl.push_back(std::move(line));
        if (!failures[i].empty())
            result.manifest.failures.push_back("point " + std::to_string(i) + ": " + failures[i]);
        result.manifest.point_seeds.push_back(derive_seed(config.root_seed, i, 0, 0));
    }
    result.points.erase(std::remove_if(result.points.begin(), result.points.end(),
                                       [](const SweepPoint& p) { return p.failed; }),
                        result.points.end());

    result.manifest.finished_at = iso_now();
    return result;
}

std::vector<SweepPoint> reanalyze_counts(const SweepConfig& config,
                                         const std::vector<std::string>& jsonl_lines) {
    const int n = config.n_particles;
    const auto grid = grid_of(config);
    std::map<std::size_t, std::vector<tomo::GroupCounts>> by_point;
    for (const auto& line : jsonl_lines) {
        std::size_t idx = 0;
        auto gc = tomo::group_counts_from_jsonl(line, &idx);
        by_point[idx].push_back(std::move(gc));
    }
    std::vector<SweepPoint> points;
    for (const auto& [idx, counts] : by_point) {
        if (idx >= grid.size()) throw IoError("reanalyze_counts: point index out of range");
        const auto [eps, lam] = grid[idx];
        lmg::LmgParams params{eps, config.model_lambda(lam), n};
        const auto est = tomo::order_parameters_from_counts(
            counts, n, params,
            config.mode == Mode::SimNoisy ? lmg::Source::SimNoisy : lmg::Source::SimIdeal);
        SweepPoint pt;
        pt.epsilon = eps;
        pt.lambda = lam;
        pt.rdm = est.point;
        pt.rdm.seed = derive_seed(config.root_seed, idx, 0, 0);
        pt.energy = params.epsilon * pt.rdm.jz + 0.5 * params.lambda * pt.rdm.jpm2;
        pt.jz_err = est.jz_err;
        pt.jz2_err = est.jz2_err;
        pt.jpm2_err = est.jpm2_err;
        pt.sigma_z = est.sigma_z;
        pt.label = label_of(config, idx);
        points.push_back(std::move(pt));
    }
    return points;
}

}  // namespace lipkin::sweep
