#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lipkin::sim {

using complex = std::complex<double>;

// Qubit/spin convention: |0> is spin up (sigma_z = +1), |1> spin down.
// Basis index x encodes qubit q in bit q; bitstrings print qubit 0 first.

enum class GateKind { X, SqrtX, Rz, U, H, Sdg, Cnot };

std::string to_string(GateKind k);
GateKind gate_kind_from_string(const std::string& s);

/// U(theta) is the real rotation [[cos t/2, -sin t/2], [sin t/2, cos t/2]].
struct Gate {
    GateKind kind = GateKind::X;
    std::array<int, 2> qubits{0, 0};  // qubits[1] used by Cnot only (target)
    double angle = 0.0;

    static Gate x(int q) { return {GateKind::X, {q, q}, 0.0}; }
    static Gate sqrt_x(int q) { return {GateKind::SqrtX, {q, q}, 0.0}; }
    static Gate rz(int q, double theta) { return {GateKind::Rz, {q, q}, theta}; }
    static Gate u(int q, double theta) { return {GateKind::U, {q, q}, theta}; }
    static Gate h(int q) { return {GateKind::H, {q, q}, 0.0}; }
    static Gate sdg(int q) { return {GateKind::Sdg, {q, q}, 0.0}; }
    static Gate cnot(int control, int target) { return {GateKind::Cnot, {control, target}, 0.0}; }

    bool is_two_qubit() const { return kind == GateKind::Cnot; }
};

/// 2x2 matrix of a one-qubit gate (throws for Cnot).
std::array<complex, 4> gate_matrix(const Gate& g);

struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> ops;
    std::vector<int> measured_qubits;

    void validate() const;
    int cnot_count() const;
};

/// sqrt(X)/Rz sequence composing (up to global phase) to U(theta), so that
/// conjugation by it equals conjugation by the real rotation for any M.
std::vector<Gate> u_gate_decomposed(double theta);

struct NoiseModel {
    std::vector<double> t1_per_qubit;                 // time units
    std::map<GateKind, double> gate_durations;        // same time units
    std::optional<double> extra_damping_per_gate;     // fixed p override

    double duration_of(GateKind k) const;
    /// p = 1 - exp(-duration/T1) for the given qubit, or the override.
    double damping_probability(GateKind k, int qubit) const;
};

struct UnsupportedModeError : std::logic_error {
    using std::logic_error::logic_error;
};

class QuantumState {
  public:
    enum class Mode { Statevector, DensityMatrix };

    static constexpr int kMaxDensityQubits = 6;

    static QuantumState statevector(int n_qubits);     // |0...0>
    static QuantumState density_matrix(int n_qubits);  // |0...0><0...0|

    Mode mode() const { return mode_; }
    int n_qubits() const { return n_; }
    std::size_t dim() const { return std::size_t{1} << n_; }
    const std::vector<complex>& data() const { return data_; }

    complex amplitude(std::size_t basis_index) const;       // statevector
    complex rho(std::size_t row, std::size_t col) const;    // density matrix

    void apply_gate(const Gate& g);
    void apply_amplitude_damping(int qubit, double p);

    std::vector<double> probabilities() const;
    double sigma_z(int qubit) const;

    /// Trace norm: statevector 2-norm, density-matrix trace.
    double norm() const;
    void check_invariants(double tol = 1e-12) const;

    /// Promote a statevector to the equivalent density matrix.
    QuantumState to_density_matrix() const;

  private:
    QuantumState(Mode m, int n);
    Mode mode_;
    int n_;
    std::vector<complex> data_;
};

QuantumState apply_gate(QuantumState state, const Gate& g);
QuantumState apply_amplitude_damping(QuantumState state, int qubit, double p);

/// Runs all gates in order. Without noise: statevector. With noise: density
/// matrix, applying the per-qubit damping channel after each gate on the
/// qubits it touches.
QuantumState run_circuit(const Circuit& circuit, const std::optional<NoiseModel>& noise = {});

/// |<a|b>|^2 for statevectors.
double fidelity(const QuantumState& a, const QuantumState& b);

std::string bitstring_of_index(std::size_t index, int n_qubits);
std::size_t index_of_bitstring(const std::string& bits);

/// Multinomial sample of the computational-basis distribution,
/// deterministic for a fixed seed.
std::map<std::string, std::int64_t> sample_counts(const QuantumState& state, std::int64_t shots,
                                                  std::uint64_t seed);

}  // namespace lipkin::sim
