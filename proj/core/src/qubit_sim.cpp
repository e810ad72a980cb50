#include "lipkin/qubit_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lipkin::sim {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// xorshift-free uniform in [0,1) from a counter-seeded stream; keeps
// sampling independent of library distribution implementations.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next_u64() {
        state += 0x9E3779B97F4A7C15ULL;
        return splitmix64(state);
    }
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
};

}  // namespace

std::string to_string(GateKind k) {
    switch (k) {
        case GateKind::X: return "x";
        case GateKind::SqrtX: return "sx";
        case GateKind::Rz: return "rz";
        case GateKind::U: return "u";
        case GateKind::H: return "h";
        case GateKind::Sdg: return "sdg";
        case GateKind::Cnot: return "cnot";
    }
    return "x";
}

GateKind gate_kind_from_string(const std::string& s) {
    if (s == "x") return GateKind::X;
    if (s == "sx" || s == "sqrt_x") return GateKind::SqrtX;
    if (s == "rz") return GateKind::Rz;
    if (s == "u") return GateKind::U;
    if (s == "h") return GateKind::H;
    if (s == "sdg") return GateKind::Sdg;
    if (s == "cnot" || s == "cx") return GateKind::Cnot;
    throw std::invalid_argument("unknown gate kind: " + s);
}

std::array<complex, 4> gate_matrix(const Gate& g) {
    using namespace std::complex_literals;
    const double c = std::cos(0.5 * g.angle);
    const double s = std::sin(0.5 * g.angle);
    switch (g.kind) {
        case GateKind::X: return {0.0, 1.0, 1.0, 0.0};
        case GateKind::SqrtX:
            return {0.5 + 0.5i, 0.5 - 0.5i, 0.5 - 0.5i, 0.5 + 0.5i};
        case GateKind::Rz:
            return {std::exp(-0.5i * g.angle), 0.0, 0.0, std::exp(0.5i * g.angle)};
        case GateKind::U: return {c, -s, s, c};
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            return {r, r, r, -r};
        }
        case GateKind::Sdg: return {1.0, 0.0, 0.0, -1.0i};
        case GateKind::Cnot: break;
    }
    throw std::logic_error("gate_matrix: CNOT has no 2x2 matrix");
}

void Circuit::validate() const {
    if (n_qubits < 1) throw std::invalid_argument("Circuit: n_qubits must be >= 1");
    auto check_q = [&](int q) {
        if (q < 0 || q >= n_qubits) throw std::out_of_range("Circuit: qubit index out of range");
    };
    for (const auto& g : ops) {
        check_q(g.qubits[0]);
        if (g.is_two_qubit()) {
            check_q(g.qubits[1]);
            if (g.qubits[0] == g.qubits[1])
                throw std::invalid_argument("Circuit: CNOT control equals target");
        }
    }
    for (int q : measured_qubits) check_q(q);
}

int Circuit::cnot_count() const {
    return static_cast<int>(std::count_if(ops.begin(), ops.end(),
                                          [](const Gate& g) { return g.is_two_qubit(); }));
}

std::vector<Gate> u_gate_decomposed(double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("u_gate_decomposed: theta not finite");
    // Rz(3pi) . SX . Rz(theta+pi) . SX  ==  U(theta) up to global phase
    return {Gate::sqrt_x(0), Gate::rz(0, theta + kPi), Gate::sqrt_x(0), Gate::rz(0, 3.0 * kPi)};
}

double NoiseModel::duration_of(GateKind k) const {
    auto it = gate_durations.find(k);
    return it == gate_durations.end() ? 0.0 : it->second;
}

double NoiseModel::damping_probability(GateKind k, int qubit) const {
    if (extra_damping_per_gate) {
        const double p = *extra_damping_per_gate;
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("NoiseModel: p outside [0,1]");
        return p;
    }
    if (qubit < 0 || static_cast<std::size_t>(qubit) >= t1_per_qubit.size())
        throw std::out_of_range("NoiseModel: no T1 for qubit");
    const double t1 = t1_per_qubit[qubit];
    if (t1 <= 0.0) throw std::invalid_argument("NoiseModel: T1 must be positive");
    return 1.0 - std::exp(-duration_of(k) / t1);
}

QuantumState::QuantumState(Mode m, int n) : mode_(m), n_(n) {
    if (n < 1) throw std::invalid_argument("QuantumState: need at least one qubit");
    if (m == Mode::DensityMatrix && n > kMaxDensityQubits)
        throw std::invalid_argument("QuantumState: density matrix capped at 6 qubits");
    if (m == Mode::Statevector && n > 24)
        throw std::invalid_argument("QuantumState: statevector capped at 24 qubits");
    const std::size_t d = std::size_t{1} << n;
    data_.assign(m == Mode::Statevector ? d : d * d, complex{0.0, 0.0});
    data_[0] = 1.0;
}

QuantumState QuantumState::statevector(int n_qubits) {
    return QuantumState(Mode::Statevector, n_qubits);
}

QuantumState QuantumState::density_matrix(int n_qubits) {
    return QuantumState(Mode::DensityMatrix, n_qubits);
}

complex QuantumState::amplitude(std::size_t i) const {
    if (mode_ != Mode::Statevector) throw UnsupportedModeError("amplitude: not a statevector");
    return data_.at(i);
}

complex QuantumState::rho(std::size_t r, std::size_t c) const {
    if (mode_ != Mode::DensityMatrix) throw UnsupportedModeError("rho: not a density matrix");
    return data_.at(r * dim() + c);
}

namespace {

// y[b'] = sum_b u[b'][b] x[b] over the amplitude pairs split by `qubit`.
void apply_1q_vector(std::vector<complex>& v, int n, int qubit,
                     const std::array<complex, 4>& u) {
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t bit = std::size_t{1} << qubit;
    for (std::size_t x = 0; x < dim; ++x) {
        if (x & bit) continue;
        const complex a0 = v[x];
        const complex a1 = v[x | bit];
        v[x] = u[0] * a0 + u[1] * a1;
        v[x | bit] = u[2] * a0 + u[3] * a1;
    }
}

void apply_cnot_vector(std::vector<complex>& v, int n, int control, int target) {
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t x = 0; x < dim; ++x) {
        if ((x & cbit) && !(x & tbit)) std::swap(v[x], v[x | tbit]);
    }
}

}  // namespace

void QuantumState::apply_gate(const Gate& g) {
    const std::size_t d = dim();
    auto check_q = [&](int q) {
        if (q < 0 || q >= n_) throw std::out_of_range("apply_gate: qubit index out of range");
    };
    check_q(g.qubits[0]);
    if (g.is_two_qubit()) {
        check_q(g.qubits[1]);
        if (g.qubits[0] == g.qubits[1])
            throw std::invalid_argument("apply_gate: CNOT control equals target");
    }

    if (mode_ == Mode::Statevector) {
        if (g.is_two_qubit()) {
            apply_cnot_vector(data_, n_, g.qubits[0], g.qubits[1]);
        } else {
            apply_1q_vector(data_, n_, g.qubits[0], gate_matrix(g));
        }
        return;
    }

    // rho -> U rho U^dagger: transform every column by U, then every row by conj(U)
    if (g.is_two_qubit()) {
        const std::size_t cbit = std::size_t{1} << g.qubits[0];
        const std::size_t tbit = std::size_t{1} << g.qubits[1];
        auto perm = [&](std::size_t x) { return (x & cbit) ? (x ^ tbit) : x; };
        std::vector<complex> next(data_.size());
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) next[perm(r) * d + perm(c)] = data_[r * d + c];
        data_ = std::move(next);
        return;
    }

    const auto u = gate_matrix(g);
    const std::size_t bit = std::size_t{1} << g.qubits[0];
    for (std::size_t c = 0; c < d; ++c) {  // columns: rho(.,c) <- U rho(.,c)
        for (std::size_t r = 0; r < d; ++r) {
            if (r & bit) continue;
            const complex a0 = data_[r * d + c];
            const complex a1 = data_[(r | bit) * d + c];
            data_[r * d + c] = u[0] * a0 + u[1] * a1;
            data_[(r | bit) * d + c] = u[2] * a0 + u[3] * a1;
        }
    }
    for (std::size_t r = 0; r < d; ++r) {  // rows: rho(r,.) <- rho(r,.) U^dagger
        for (std::size_t c = 0; c < d; ++c) {
            if (c & bit) continue;
            const complex a0 = data_[r * d + c];
            const complex a1 = data_[r * d + (c | bit)];
            data_[r * d + c] = std::conj(u[0]) * a0 + std::conj(u[1]) * a1;
            data_[r * d + (c | bit)] = std::conj(u[2]) * a0 + std::conj(u[3]) * a1;
        }
    }
}

void QuantumState::apply_amplitude_damping(int qubit, double p) {
    if (mode_ != Mode::DensityMatrix)
        throw UnsupportedModeError("amplitude damping requires density-matrix mode");
    if (qubit < 0 || qubit >= n_) throw std::out_of_range("apply_amplitude_damping: bad qubit");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("apply_amplitude_damping: p outside [0,1]");

    // K0 = diag(1, sqrt(1-p)), K1 = |0><1| sqrt(p)
    const double k = std::sqrt(1.0 - p);
    const std::size_t d = dim();
    const std::size_t bit = std::size_t{1} << qubit;
    std::vector<complex> next(data_.size(), complex{0.0, 0.0});
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            const bool br = r & bit, bc = c & bit;
            const complex val = data_[r * d + c];
            double f = 1.0;
            if (br) f *= k;
            if (bc) f *= k;
            next[r * d + c] += f * val;
            if (br && bc) next[(r ^ bit) * d + (c ^ bit)] += p * val;
        }
    }
    data_ = std::move(next);
}

std::vector<double> QuantumState::probabilities() const {
    const std::size_t d = dim();
    std::vector<double> p(d);
    if (mode_ == Mode::Statevector) {
        for (std::size_t x = 0; x < d; ++x) p[x] = std::norm(data_[x]);
    } else {
        for (std::size_t x = 0; x < d; ++x) p[x] = data_[x * d + x].real();
    }
    return p;
}

double QuantumState::sigma_z(int qubit) const {
    if (qubit < 0 || qubit >= n_) throw std::out_of_range("sigma_z: bad qubit");
    const auto p = probabilities();
    const std::size_t bit = std::size_t{1} << qubit;
    double z = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) z += (x & bit) ? -p[x] : p[x];
    return z;
}

double QuantumState::norm() const {
    if (mode_ == Mode::Statevector) {
        double s = 0.0;
        for (const auto& a : data_) s += std::norm(a);
        return std::sqrt(s);
    }
    const std::size_t d = dim();
    double tr = 0.0;
    for (std::size_t x = 0; x < d; ++x) tr += data_[x * d + x].real();
    return tr;
}

void QuantumState::check_invariants(double tol) const {
    if (std::abs(norm() - 1.0) > tol)
        throw std::runtime_error("QuantumState: norm/trace deviates from 1");
    if (mode_ == Mode::DensityMatrix) {
        const std::size_t d = dim();
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = r; c < d; ++c) {
                const complex diff = data_[r * d + c] - std::conj(data_[c * d + r]);
                if (std::abs(diff) > tol) throw std::runtime_error("QuantumState: not Hermitian");
            }
    }
}

QuantumState QuantumState::to_density_matrix() const {
    if (mode_ == Mode::DensityMatrix) return *this;
    QuantumState rho(Mode::DensityMatrix, n_);
    const std::size_t d = dim();
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) rho.data_[r * d + c] = data_[r] * std::conj(data_[c]);
    return rho;
}

QuantumState apply_gate(QuantumState state, const Gate& g) {
    state.apply_gate(g);
    return state;
}

QuantumState apply_amplitude_damping(QuantumState state, int qubit, double p) {
    state.apply_amplitude_damping(qubit, p);
    return state;
}

QuantumState run_circuit(const Circuit& circuit, const std::optional<NoiseModel>& noise) {
    circuit.validate();
    QuantumState state = noise ? QuantumState::density_matrix(circuit.n_qubits)
                               : QuantumState::statevector(circuit.n_qubits);
    for (const auto& g : circuit.ops) {
        state.apply_gate(g);
        if (noise) {
            state.apply_amplitude_damping(g.qubits[0],
                                          noise->damping_probability(g.kind, g.qubits[0]));
            if (g.is_two_qubit())
                state.apply_amplitude_damping(g.qubits[1],
                                              noise->damping_probability(g.kind, g.qubits[1]));
        }
    }
    return state;
}

double fidelity(const QuantumState& a, const QuantumState& b) {
    if (a.mode() != QuantumState::Mode::Statevector || b.mode() != QuantumState::Mode::Statevector)
        throw UnsupportedModeError("fidelity: statevectors required");
    if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("fidelity: qubit count mismatch");
    complex ov{0.0, 0.0};
    for (std::size_t x = 0; x < a.dim(); ++x) ov += std::conj(a.data()[x]) * b.data()[x];
    return std::norm(ov);
}

std::string bitstring_of_index(std::size_t index, int n_qubits) {
    std::string s(n_qubits, '0');
    for (int q = 0; q < n_qubits; ++q)
        if (index & (std::size_t{1} << q)) s[q] = '1';
    return s;
}

std::size_t index_of_bitstring(const std::string& bits) {
    std::size_t x = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
        if (bits[q] == '1') x |= std::size_t{1} << q;
        else if (bits[q] != '0') throw std::invalid_argument("index_of_bitstring: bad character");
    }
    return x;
}

std::map<std::string, std::int64_t> sample_counts(const QuantumState& state, std::int64_t shots,
                                                  std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("sample_counts: shots must be >= 1");
    const auto p = state.probabilities();
    std::vector<double> cdf(p.size());
    double acc = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
        acc += std::max(0.0, p[x]);
        cdf[x] = acc;
    }
    const double total = acc;

    Rng rng(seed);
    std::map<std::string, std::int64_t> counts;
    std::vector<std::int64_t> hist(p.size(), 0);
    for (std::int64_t s = 0; s < shots; ++s) {
        const double u = rng.next_double() * total;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t x = static_cast<std::size_t>(std::distance(cdf.begin(), it));
        if (x >= p.size()) x = p.size() - 1;
        ++hist[x];
    }
    for (std::size_t x = 0; x < hist.size(); ++x)
        if (hist[x] > 0) counts[bitstring_of_index(x, state.n_qubits())] = hist[x];
    return counts;
}

}  // namespace lipkin::sim
