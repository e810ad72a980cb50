#include "lipkin/circuits.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace lipkin::ansatz {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

int popcount_sz(std::size_t x) { return static_cast<int>(std::popcount(x)); }

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Ansatz support: all configurations whose excitation-number parity matches
// the all-down state (k odd for N=3, k even for N=4).
bool in_canonical_support(std::size_t idx, int n) {
    return (popcount_sz(idx) % 2) == (n % 2);
}

}  // namespace

void AnsatzTarget::validate() const {
    if (n_qubits != 3 && n_qubits != 4)
        throw std::invalid_argument("AnsatzTarget: n_qubits must be 3 or 4");
    if (coefficients.size() != (std::size_t{1} << n_qubits))
        throw std::invalid_argument("AnsatzTarget: coefficient vector has wrong size");
    double norm2 = 0.0;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        norm2 += coefficients[i] * coefficients[i];
        if (!in_canonical_support(i, n_qubits) && std::abs(coefficients[i]) > 1e-12)
            throw std::invalid_argument("AnsatzTarget: support outside the ansatz configurations");
    }
    if (std::abs(norm2 - 1.0) > 1e-12)
        throw std::invalid_argument("AnsatzTarget: coefficients not normalized");
}

int CircuitTemplate::n_slots() const {
    int mx = -1;
    for (const auto& op : ops) mx = std::max(mx, op.angle_slot);
    return mx + 1;
}

int CircuitTemplate::cnot_count() const {
    return static_cast<int>(std::count_if(ops.begin(), ops.end(), [](const TemplateOp& op) {
        return op.kind == sim::GateKind::Cnot;
    }));
}

void CircuitTemplate::validate() const {
    if (n_qubits < 1) throw std::invalid_argument("CircuitTemplate: n_qubits < 1");
    std::set<std::pair<int, int>> allowed;
    for (const auto& e : coupling_map) {
        allowed.emplace(std::min(e[0], e[1]), std::max(e[0], e[1]));
    }
    for (const auto& op : ops) {
        if (op.qubits[0] < 0 || op.qubits[0] >= n_qubits)
            throw std::invalid_argument("CircuitTemplate: qubit out of range");
        if (op.kind == sim::GateKind::Cnot) {
            if (op.qubits[1] < 0 || op.qubits[1] >= n_qubits)
                throw std::invalid_argument("CircuitTemplate: qubit out of range");
            const std::pair<int, int> e{std::min(op.qubits[0], op.qubits[1]),
                                        std::max(op.qubits[0], op.qubits[1])};
            if (!allowed.count(e))
                throw std::invalid_argument("CircuitTemplate: CNOT pair not on coupling map");
        }
        if (op.angle_slot >= 0 && op.kind != sim::GateKind::U && op.kind != sim::GateKind::Rz)
            throw std::invalid_argument("CircuitTemplate: angle slot on a fixed gate");
    }
}

sim::Circuit CircuitTemplate::instantiate(const std::vector<double>& angles, bool flipped) const {
    if (static_cast<int>(angles.size()) != n_slots())
        throw std::invalid_argument("CircuitTemplate: angle count mismatch, expected " +
                                    std::to_string(n_slots()));
    sim::Circuit c;
    c.n_qubits = n_qubits;
    for (const auto& op : ops) {
        sim::Gate g;
        g.kind = op.kind;
        g.qubits = op.qubits;
        g.angle = op.angle_slot >= 0 ? angles[op.angle_slot] : 0.0;
        c.ops.push_back(g);
    }
    if (flipped) {
        for (int q = 0; q < n_qubits; ++q) c.ops.push_back(sim::Gate::x(q));
    }
    for (int q = 0; q < n_qubits; ++q) c.measured_qubits.push_back(q);
    c.validate();
    return c;
}

CircuitTemplate CircuitTemplate::from_json(const std::string& json_text) {
    const json j = json::parse(json_text);
    CircuitTemplate t;
    t.n_qubits = j.at("n_qubits").get<int>();
    for (const auto& jop : j.at("ops")) {
        TemplateOp op;
        op.kind = sim::gate_kind_from_string(jop.at("kind").get<std::string>());
        const auto qs = jop.at("qubits").get<std::vector<int>>();
        if (qs.empty() || qs.size() > 2)
            throw std::invalid_argument("CircuitTemplate: ops need 1 or 2 qubits");
        op.qubits[0] = qs[0];
        op.qubits[1] = qs.size() > 1 ? qs[1] : qs[0];
        op.angle_slot = jop.value("angle_slot", -1);
        t.ops.push_back(op);
    }
    for (const auto& je : j.at("coupling_map")) {
        const auto e = je.get<std::vector<int>>();
        if (e.size() != 2) throw std::invalid_argument("CircuitTemplate: bad coupling edge");
        t.coupling_map.push_back({e[0], e[1]});
    }
    t.validate();
    return t;
}

std::string CircuitTemplate::to_json() const {
    json j;
    j["n_qubits"] = n_qubits;
    j["ops"] = json::array();
    for (const auto& op : ops) {
        json jop;
        jop["kind"] = sim::to_string(op.kind);
        if (op.kind == sim::GateKind::Cnot)
            jop["qubits"] = {op.qubits[0], op.qubits[1]};
        else
            jop["qubits"] = {op.qubits[0]};
        if (op.angle_slot >= 0) jop["angle_slot"] = op.angle_slot;
        j["ops"].push_back(jop);
    }
    j["coupling_map"] = json::array();
    for (const auto& e : coupling_map) j["coupling_map"].push_back({e[0], e[1]});
    return j.dump(2);
}

namespace {

// Both templates prepare an arbitrary real state on the leading qubits and
// then encode its bit parity into the last qubit with a CNOT ladder, so the
// output support is exactly the ansatz support for any angles. All angles
// zero yields the all-down state.
const char* kTemplate3 = R"json({
  "n_qubits": 3,
  "ops": [
    {"kind": "x", "qubits": [0]},
    {"kind": "x", "qubits": [2]},
    {"kind": "u", "qubits": [0], "angle_slot": 0},
    {"kind": "cnot", "qubits": [0, 1]},
    {"kind": "u", "qubits": [0], "angle_slot": 1},
    {"kind": "u", "qubits": [1], "angle_slot": 2},
    {"kind": "cnot", "qubits": [0, 1]},
    {"kind": "cnot", "qubits": [1, 2]},
    {"kind": "cnot", "qubits": [0, 1]}
  ],
  "coupling_map": [[0, 1], [1, 2]]
})json";

const char* kTemplate4 = R"json({
  "n_qubits": 4,
  "ops": [
    {"kind": "x", "qubits": [0]},
    {"kind": "x", "qubits": [1]},
    {"kind": "x", "qubits": [2]},
    {"kind": "u", "qubits": [0], "angle_slot": 0},
    {"kind": "u", "qubits": [1], "angle_slot": 1},
    {"kind": "u", "qubits": [2], "angle_slot": 2},
    {"kind": "cnot", "qubits": [0, 1]},
    {"kind": "cnot", "qubits": [1, 2]},
    {"kind": "u", "qubits": [0], "angle_slot": 3},
    {"kind": "u", "qubits": [1], "angle_slot": 4},
    {"kind": "u", "qubits": [2], "angle_slot": 5},
    {"kind": "cnot", "qubits": [0, 1]},
    {"kind": "u", "qubits": [0], "angle_slot": 6},
    {"kind": "u", "qubits": [1], "angle_slot": 7},
    {"kind": "cnot", "qubits": [0, 1]},
    {"kind": "cnot", "qubits": [1, 2]},
    {"kind": "cnot", "qubits": [2, 3]},
    {"kind": "cnot", "qubits": [1, 2]},
    {"kind": "cnot", "qubits": [0, 1]}
  ],
  "coupling_map": [[0, 1], [1, 2], [2, 3]]
})json";

}  // namespace

const CircuitTemplate& builtin_template(int n_qubits) {
    static const CircuitTemplate t3 = CircuitTemplate::from_json(kTemplate3);
    static const CircuitTemplate t4 = CircuitTemplate::from_json(kTemplate4);
    if (n_qubits == 3) return t3;
    if (n_qubits == 4) return t4;
    throw std::invalid_argument("builtin_template: only 3 and 4 qubits supported");
}

AnsatzTarget exact_coefficients(const lmg::LmgParams& params, const lmg::GroundStateOptions& opts) {
    if (params.n_particles != 3 && params.n_particles != 4)
        throw std::invalid_argument("exact_coefficients: N must be 3 or 4");
    const int n = params.n_particles;
    const auto gs = lmg::ground_state(params, opts);
    if (gs.sector.twice_j != n)
        throw std::runtime_error("exact_coefficients: ground state not in the j=N/2 sector");

    const auto ms = lmg::sector_m_values(gs.sector);
    // excitation number k = N/2 - m; canonical support has k parity == N%2
    AnsatzTarget t;
    t.n_qubits = n;
    t.params = params;
    t.coefficients.assign(std::size_t{1} << n, 0.0);

    // flip when the winning block's excitation parity is not canonical
    const int k0 = static_cast<int>(std::round(0.5 * n - ms[0]));
    t.flipped = (k0 % 2) != (n % 2);

    for (std::size_t i = 0; i < ms.size(); ++i) {
        int k = static_cast<int>(std::round(0.5 * n - ms[i]));
        if (t.flipped) k = n - k;  // canonical form of the mirrored state
        const double amp = gs.amplitudes[static_cast<Eigen::Index>(i)] / std::sqrt(binomial(n, k));
        for (std::size_t idx = 0; idx < t.coefficients.size(); ++idx)
            if (popcount_sz(idx) == k) t.coefficients[idx] = amp;
    }
    t.validate();
    return t;
}

namespace {

Eigen::VectorXd circuit_amplitudes(const CircuitTemplate& tmpl, const std::vector<double>& angles,
                                   bool flipped) {
    const sim::Circuit c = tmpl.instantiate(angles, flipped);
    const sim::QuantumState st = sim::run_circuit(c);
    Eigen::VectorXd v(static_cast<Eigen::Index>(st.dim()));
    for (std::size_t x = 0; x < st.dim(); ++x) {
        const sim::complex a = st.amplitude(x);
        v[static_cast<Eigen::Index>(x)] = a.real();  // real circuit family
    }
    return v;
}

double fidelity_with(const Eigen::VectorXd& psi, const Eigen::VectorXd& target) {
    const double ov = psi.dot(target);
    return ov * ov;
}

// One damped Gauss-Newton descent on the residual psi(theta) - s*target.
double refine(const CircuitTemplate& tmpl, const Eigen::VectorXd& target,
              std::vector<double>& angles, int max_iter) {
    const int na = static_cast<int>(angles.size());
    const double h = 1e-6;
    double mu = 1e-3;
    Eigen::VectorXd psi = circuit_amplitudes(tmpl, angles, false);
    double best = fidelity_with(psi, target);
    for (int it = 0; it < max_iter && best < 1.0 - 1e-14; ++it) {
        const double s = psi.dot(target) >= 0.0 ? 1.0 : -1.0;
        const Eigen::VectorXd r = psi - s * target;
        Eigen::MatrixXd jac(psi.size(), na);
        for (int k = 0; k < na; ++k) {
            auto ap = angles, am = angles;
            ap[k] += h;
            am[k] -= h;
            jac.col(k) =
                (circuit_amplitudes(tmpl, ap, false) - circuit_amplitudes(tmpl, am, false)) /
                (2.0 * h);
        }
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd g = jac.transpose() * r;
        bool stepped = false;
        for (int tries = 0; tries < 12; ++tries) {
            Eigen::MatrixXd a = jtj;
            a.diagonal().array() += mu;
            const Eigen::VectorXd delta = a.ldlt().solve(g);
            auto cand = angles;
            for (int k = 0; k < na; ++k) cand[k] -= delta[k];
            const Eigen::VectorXd psi_c = circuit_amplitudes(tmpl, cand, false);
            const double f = fidelity_with(psi_c, target);
            if (f > best) {
                angles = cand;
                psi = psi_c;
                best = f;
                mu = std::max(mu * 0.3, 1e-12);
                stepped = true;
                break;
            }
            mu *= 10.0;
        }
        if (!stepped) break;
    }
    return best;
}

}  // namespace

std::vector<double> solve_angles(const AnsatzTarget& target, const SolveOptions& opts) {
    target.validate();
    const CircuitTemplate& tmpl = builtin_template(target.n_qubits);
    const int na = tmpl.n_slots();

    Eigen::VectorXd tv(static_cast<Eigen::Index>(target.coefficients.size()));
    for (std::size_t i = 0; i < target.coefficients.size(); ++i)
        tv[static_cast<Eigen::Index>(i)] = target.coefficients[i];

    std::vector<double> best_angles(na, 0.0);
    double best = 0.0;
    for (int attempt = 0; attempt <= opts.restarts; ++attempt) {
        std::vector<double> angles(na, 0.0);
        if (attempt > 0) {
            std::uint64_t s = splitmix64(opts.seed + 0x9E37ULL * attempt);
            for (int k = 0; k < na; ++k) {
                s = splitmix64(s);
                angles[k] = (static_cast<double>(s >> 11) * 0x1.0p-53 * 2.0 - 1.0) * std::numbers::pi;
            }
        }
        const double f = refine(tmpl, tv, angles, opts.max_iterations);
        if (f > best) {
            best = f;
            best_angles = angles;
        }
        if (best >= opts.fidelity_goal && best >= 1.0 - 1e-12) break;
        if (best >= opts.fidelity_goal && attempt >= 1) break;
    }
    if (best < opts.fidelity_goal)
        throw InfeasibleTargetError(best, "solve_angles: best fidelity " + std::to_string(best) +
                                              " below goal");
    return best_angles;
}

sim::Circuit build_circuit(int n_qubits, const std::vector<double>& angles, bool flipped) {
    return builtin_template(n_qubits).instantiate(angles, flipped);
}

}  // namespace lipkin::ansatz
