#pragma once

// Test-only oracles, independent of the quasi-spin solver: brute-force
// diagonalization of the full 2^N Pauli-sum Hamiltonian, ladder-operator
// matrix elements by repeated application, and dense operator averages.

#include <Eigen/Dense>

#include <complex>

namespace oracles {

/// Full 2^N x 2^N H = eps*Jz + (lambda/2)(J+^2 + J-^2) with Jz = sum sigma_z/2,
/// J+ = sum |0><1|_p (|0> is spin up).
Eigen::MatrixXd full_hamiltonian(double epsilon, double lambda, int n);

Eigen::MatrixXd full_jz(int n);
Eigen::MatrixXd full_jz2(int n);
Eigen::MatrixXd full_jpm2(int n);

struct BruteForceResult {
    double energy;
    double jz, jz2, jpm2;
    double gap;  // E1 - E0
    Eigen::VectorXd ground;
};

BruteForceResult brute_force_ground(double epsilon, double lambda, int n);

/// <j, m+2 | J+^2 | j, m> by applying J+ twice to a unit vector in the
/// (2j+1)-dimensional ladder representation.
double jplus2_element_by_ladder(double j, double m);

/// Pauli expectation <psi| P |psi> for a dense complex vector; op is a
/// string over {I, X, Y, Z} indexed by qubit.
double pauli_expectation(const Eigen::VectorXcd& psi, const std::string& op);

}  // namespace oracles
