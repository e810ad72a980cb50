#include <doctest.h>

#include "lipkin/circuits.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace lipkin;

namespace {

double fidelity_against_target(const ansatz::AnsatzTarget& target, const sim::QuantumState& st) {
    // |<target|psi>|^2 with the flip applied to the stored coefficients
    const std::size_t dim = st.dim();
    sim::complex ov{0.0, 0.0};
    for (std::size_t i = 0; i < dim; ++i) {
        std::size_t idx = i;
        if (target.flipped) idx = (~i) & (dim - 1);
        ov += target.coefficients[i] * st.amplitude(idx);
    }
    return std::norm(ov);
}

}  // namespace

TEST_CASE("exact_coefficients: noninteracting targets are all-down") {
    const auto t3 = ansatz::exact_coefficients({1.0, 0.0, 3});
    CHECK_FALSE(t3.flipped);
    CHECK(t3.coefficients[0b111] == doctest::Approx(1.0));
    const auto t4 = ansatz::exact_coefficients({1.0, 0.0, 4});
    CHECK_FALSE(t4.flipped);
    CHECK(t4.coefficients[0b1111] == doctest::Approx(1.0));
}

TEST_CASE("exact_coefficients: permutation symmetry of same-excitation amplitudes") {
    const auto t = ansatz::exact_coefficients({1.0, 1.0, 3});
    const double a1 = t.coefficients[sim::index_of_bitstring("001")];
    const double a2 = t.coefficients[sim::index_of_bitstring("010")];
    const double a3 = t.coefficients[sim::index_of_bitstring("100")];
    CHECK(std::abs(a1 - a2) < 1e-10);
    CHECK(std::abs(a2 - a3) < 1e-10);
    CHECK(std::abs(a1) > 0.01);

    // against the dense oracle: brute-force ground of the 8x8 Pauli sum
    const auto bf = oracles::brute_force_ground(1.0, 1.0, 3);
    double overlap = 0.0;
    for (int i = 0; i < 8; ++i) overlap += bf.ground(i) * t.coefficients[static_cast<std::size_t>(i)];
    CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("exact_coefficients: epsilon < 0 flips odd-N support") {
    const auto t = ansatz::exact_coefficients({-1.0, 0.5, 3});
    CHECK(t.flipped);
    t.validate();  // canonical support even though the physical state is mirrored
    const auto t4 = ansatz::exact_coefficients({-1.0, 0.5, 4});
    CHECK_FALSE(t4.flipped);  // even N covers both signs natively
}

TEST_CASE("exact_coefficients rejects unsupported N") {
    CHECK_THROWS_AS(ansatz::exact_coefficients({1.0, 0.0, 5}), std::invalid_argument);
}

TEST_CASE("templates: gate budget and coupling maps hold") {
    const auto& t3 = ansatz::builtin_template(3);
    CHECK(t3.cnot_count() <= 4);
    CHECK(t3.n_slots() == 3);
    const auto& t4 = ansatz::builtin_template(4);
    CHECK(t4.cnot_count() <= 8);
    CHECK_NOTHROW(t3.validate());
    CHECK_NOTHROW(t4.validate());

    // JSON round trip preserves the op list
    const auto back = ansatz::CircuitTemplate::from_json(t4.to_json());
    CHECK(back.ops.size() == t4.ops.size());
    CHECK(back.cnot_count() == t4.cnot_count());
}

TEST_CASE("build_circuit: zero angles produce the all-down state") {
    const auto c3 = ansatz::build_circuit(3, {0.0, 0.0, 0.0});
    const auto st3 = sim::run_circuit(c3);
    CHECK(std::abs(st3.amplitude(sim::index_of_bitstring("111"))) ==
          doctest::Approx(1.0).epsilon(1e-12));

    const auto c4 = ansatz::build_circuit(4, std::vector<double>(8, 0.0));
    const auto st4 = sim::run_circuit(c4);
    CHECK(std::abs(st4.amplitude(sim::index_of_bitstring("1111"))) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("build_circuit rejects an angle-count mismatch") {
    CHECK_THROWS_AS(ansatz::build_circuit(3, {0.0}), std::invalid_argument);
}

TEST_CASE("solve_angles: all-down target needs no rotations") {
    const auto target = ansatz::exact_coefficients({1.0, 0.0, 3});
    const auto angles = ansatz::solve_angles(target);
    const auto st = sim::run_circuit(ansatz::build_circuit(3, angles, target.flipped));
    CHECK(fidelity_against_target(target, st) >= 1.0 - 1e-10);
}

TEST_CASE("round trip: solve + build reproduces exact ground states") {
    for (const int n : {3, 4}) {
        for (const double eps : {1.0, -1.0}) {
            for (const double lam : {-25.0, -5.0, -1.0, 0.5, 2.0, 25.0}) {
                lmg::LmgParams params{eps, lam / (n - 1), n};
                const auto target = ansatz::exact_coefficients(params);
                const auto angles = ansatz::solve_angles(target);
                const auto st = sim::run_circuit(ansatz::build_circuit(n, angles, target.flipped));
                CHECK(fidelity_against_target(target, st) >= 1.0 - 1e-8);
            }
        }
    }
}

TEST_CASE("solved circuit reproduces exact order parameters") {
    lmg::LmgParams params{1.0, 5.0 / 2.0, 3};
    const auto target = ansatz::exact_coefficients(params);
    const auto angles = ansatz::solve_angles(target);
    const auto st = sim::run_circuit(ansatz::build_circuit(3, angles, target.flipped));
    const auto exact = lmg::order_parameters(lmg::ground_state(params), params);

    Eigen::VectorXcd psi(8);
    for (int i = 0; i < 8; ++i) psi(i) = st.amplitude(static_cast<std::size_t>(i));
    double jz = 0.0;
    for (int q = 0; q < 3; ++q) {
        std::string op = "III";
        op[static_cast<std::size_t>(q)] = 'Z';
        jz += 0.5 * oracles::pauli_expectation(psi, op);
    }
    CHECK(jz == doctest::Approx(exact.jz).epsilon(1e-6));
}

TEST_CASE("solve_angles reports infeasible targets with the best fidelity") {
    // a state off the reachable family: legal support but an unreachable
    // sign pattern is hard to construct for these templates (they cover the
    // full real sphere), so test the error path via an unnormalized vector
    ansatz::AnsatzTarget bad;
    bad.n_qubits = 3;
    bad.coefficients.assign(8, 0.0);
    bad.coefficients[0b111] = 0.5;
    CHECK_THROWS_AS(ansatz::solve_angles(bad), std::invalid_argument);
}
