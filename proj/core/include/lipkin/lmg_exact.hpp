#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lipkin::lmg {

/// Model parameters of H = epsilon*Jz + (lambda/2)*(J+^2 + J-^2) for N
/// two-level particles in the quasi-spin picture. Energies are in atomic
/// units throughout.
struct LmgParams {
    double epsilon = 1.0;
    double lambda = 0.0;
    int n_particles = 1;

    void validate() const;
};

enum class Parity { Even, Odd };

/// One invariant block of the Hamiltonian: total quasi-spin j (stored as
/// 2j to keep half-integers exact) and the parity of j+m within the block.
struct SpinSector {
    int twice_j = 0;
    Parity parity = Parity::Even;

    double j() const { return 0.5 * static_cast<double>(twice_j); }
};

/// m-values (ascending) of a sector block; empty when the block does not
/// exist (e.g. j=0 odd block).
std::vector<double> sector_m_values(const SpinSector& sector);

/// All sectors of an N-particle system, ordered by (2j ascending, even
/// before odd), empty blocks skipped. j runs over N/2, N/2-1, ..., (N%2)/2.
std::vector<SpinSector> sectors_for(int n_particles);

int block_dimension(const SpinSector& sector);

/// <j, m+2 | J+^2 | j, m> from two ladder applications,
/// J+|j,m> = sqrt((j-m)(j+m+1)) |j,m+1>.
double jplus2_element(double j, double m);

struct GroundStateResult {
    double energy = 0.0;
    SpinSector sector;
    Eigen::VectorXd amplitudes;  // over sector_m_values(sector), unit norm
    bool degenerate = false;
};

enum class Source { Exact, SimIdeal, SimNoisy };

std::string to_string(Source s);
Source source_from_string(const std::string& s);

/// The order-parameter triple that fully determines the LMG 2-RDM, plus
/// provenance. Sampled points carry shot count and seed.
struct RdmPoint {
    double jz = 0.0;
    double jz2 = 0.0;
    double jpm2 = 0.0;
    LmgParams params;
    Source source = Source::Exact;
    std::optional<std::int64_t> shots;
    std::optional<std::uint64_t> seed;
    bool degenerate = false;

    void validate() const;  // |jz| <= N/2, 0 <= jz2 <= N^2/4, jz2 >= jz^2
};

/// Dense symmetric block of H in the |j,m> basis restricted to one parity.
/// Diagonal entries epsilon*m, off-diagonal (lambda/2)*<j,m+2|J+^2|j,m>
/// between m and m+2.
Eigen::MatrixXd build_block_hamiltonian(const LmgParams& params, const SpinSector& sector);

struct GroundStateOptions {
    double degeneracy_tol = 1e-9;
};

/// Global minimum eigenpair over all sectors (both parities, all j).
/// `degenerate` is set when any other block eigenvalue, or the second
/// eigenvalue of the winning block, lies within degeneracy_tol of the
/// minimum. Ties resolve to the first block in sectors_for() order, and
/// the eigenvector sign is fixed so its first nonzero amplitude is
/// positive.
GroundStateResult ground_state(const LmgParams& params, const GroundStateOptions& opts = {});

/// <Jz>, <Jz^2>, <J+^2 + J-^2> of a normalized sector eigenvector.
RdmPoint order_parameters(const GroundStateResult& gs, const LmgParams& params);

struct SweepPointError : std::runtime_error {
    std::size_t grid_index;
    SweepPointError(std::size_t idx, const std::string& what)
        : std::runtime_error("grid point " + std::to_string(idx) + ": " + what), grid_index(idx) {}
};

/// Ground-state order parameters for each grid entry, in input order.
std::vector<RdmPoint> sweep_ground_states(std::span<const LmgParams> grid,
                                          const GroundStateOptions& opts = {});

}  // namespace lipkin::lmg
