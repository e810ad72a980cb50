#pragma once

#include "lipkin/lmg_exact.hpp"
#include "lipkin/qubit_sim.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lipkin::ansatz {

/// Ground-state amplitudes over qubit configurations, restricted to the
/// preparation ansatz support. For epsilon < 0 and odd N the physical
/// ground state lives in the spin-flipped configurations; coefficients are
/// then stored in canonical (epsilon > 0) form with `flipped` set, and the
/// circuit appends a final X layer.
struct AnsatzTarget {
    int n_qubits = 3;
    std::vector<double> coefficients;  // size 2^n, canonical support only
    lmg::LmgParams params;
    bool flipped = false;

    void validate() const;
};

/// Circuit template with angle slots, as data. Schema:
/// {n_qubits, ops:[{kind, qubits, angle_slot?}], coupling_map:[[q,q],...]}
struct CircuitTemplate {
    int n_qubits = 0;
    struct TemplateOp {
        sim::GateKind kind;
        std::array<int, 2> qubits{0, 0};
        int angle_slot = -1;  // -1: fixed gate
    };
    std::vector<TemplateOp> ops;
    std::vector<std::array<int, 2>> coupling_map;

    int n_slots() const;
    int cnot_count() const;
    void validate() const;  // indices in range, CNOT pairs on the coupling map

    sim::Circuit instantiate(const std::vector<double>& angles, bool flipped = false) const;

    static CircuitTemplate from_json(const std::string& json_text);
    std::string to_json() const;
};

/// Built-in templates for the 3- and 4-qubit preparations (linear coupling).
const CircuitTemplate& builtin_template(int n_qubits);

/// Maps the exact ground state to symmetric qubit-configuration amplitudes:
/// |j=N/2, m> spreads uniformly over the C(N, N/2-m) bitstrings with that
/// excitation number. N must be 3 or 4.
AnsatzTarget exact_coefficients(const lmg::LmgParams& params,
                                const lmg::GroundStateOptions& opts = {});

struct InfeasibleTargetError : std::runtime_error {
    double best_fidelity;
    InfeasibleTargetError(double f, const std::string& what)
        : std::runtime_error(what), best_fidelity(f) {}
};

struct SolveOptions {
    double fidelity_goal = 1.0 - 1e-8;
    int restarts = 32;
    int max_iterations = 200;
    std::uint64_t seed = 0x5EED;
};

/// Rotation angles such that the template circuit on |0...0> reproduces the
/// target with fidelity >= fidelity_goal (noiseless). Damped Gauss-Newton
/// on the amplitude residual with seeded random restarts; throws
/// InfeasibleTargetError carrying the best fidelity found.
std::vector<double> solve_angles(const AnsatzTarget& target, const SolveOptions& opts = {});

/// Instantiates the built-in template for n_qubits with the given angles.
sim::Circuit build_circuit(int n_qubits, const std::vector<double>& angles, bool flipped = false);

}  // namespace lipkin::ansatz
