#include "lipkin/lmg_exact.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace lipkin::lmg {

void LmgParams::validate() const {
    if (n_particles < 1) throw std::invalid_argument("LmgParams: n_particles must be >= 1");
    if (!std::isfinite(epsilon) || !std::isfinite(lambda))
        throw std::invalid_argument("LmgParams: epsilon and lambda must be finite");
}

std::vector<double> sector_m_values(const SpinSector& sector) {
    std::vector<double> ms;
    const int tj = sector.twice_j;
    for (int tm = -tj; tm <= tj; tm += 2) {
        // parity of j+m; (tj+tm)/2 is always integral
        const int jm = (tj + tm) / 2;
        const bool even = (jm % 2) == 0;
        if (even == (sector.parity == Parity::Even)) ms.push_back(0.5 * tm);
    }
    return ms;
}

std::vector<SpinSector> sectors_for(int n_particles) {
    if (n_particles < 1) throw std::invalid_argument("sectors_for: n_particles must be >= 1");
    std::vector<SpinSector> out;
    for (int tj = n_particles % 2; tj <= n_particles; tj += 2) {
        for (Parity p : {Parity::Even, Parity::Odd}) {
            SpinSector s{tj, p};
            if (!sector_m_values(s).empty()) out.push_back(s);
        }
    }
    return out;
}

int block_dimension(const SpinSector& sector) {
    return static_cast<int>(sector_m_values(sector).size());
}

double jplus2_element(double j, double m) {
    const double a = (j - m) * (j + m + 1.0);
    const double b = (j - m - 1.0) * (j + m + 2.0);
    if (a < 0.0 || b < 0.0) return 0.0;
    return std::sqrt(a) * std::sqrt(b);
}

std::string to_string(Source s) {
    switch (s) {
        case Source::Exact: return "exact";
        case Source::SimIdeal: return "sim_ideal";
        case Source::SimNoisy: return "sim_noisy";
    }
    return "exact";
}

Source source_from_string(const std::string& s) {
    if (s == "exact") return Source::Exact;
    if (s == "sim_ideal") return Source::SimIdeal;
    if (s == "sim_noisy") return Source::SimNoisy;
    throw std::invalid_argument("unknown source: " + s);
}

void RdmPoint::validate() const {
    const double jmax = 0.5 * params.n_particles;
    const double slack = 1e-9 * std::max(1.0, jmax * jmax);
    if (std::abs(jz) > jmax + slack) throw std::domain_error("RdmPoint: |jz| exceeds N/2");
    if (jz2 < -slack || jz2 > jmax * jmax + slack)
        throw std::domain_error("RdmPoint: jz2 outside [0, N^2/4]");
    if (jz2 + slack < jz * jz) throw std::domain_error("RdmPoint: jz2 < jz^2");
}

namespace {

void check_sector(const LmgParams& params, const SpinSector& sector) {
    const int N = params.n_particles;
    if (sector.twice_j < 0 || sector.twice_j > N || (sector.twice_j % 2) != (N % 2))
        throw std::domain_error("SpinSector: j out of range for N");
}

struct TridiagBlock {
    std::vector<double> ms;
    std::vector<double> diag;
    std::vector<double> off;  // size dim-1
};

TridiagBlock assemble_block(const LmgParams& params, const SpinSector& sector) {
    TridiagBlock b;
    b.ms = sector_m_values(sector);
    const double j = sector.j();
    const std::size_t d = b.ms.size();
    b.diag.resize(d);
    b.off.assign(d > 0 ? d - 1 : 0, 0.0);
    for (std::size_t i = 0; i < d; ++i) b.diag[i] = params.epsilon * b.ms[i];
    for (std::size_t i = 0; i + 1 < d; ++i)
        b.off[i] = 0.5 * params.lambda * jplus2_element(j, b.ms[i]);
    return b;
}

// Smallest `want` eigenvalues (and optionally the lowest eigenvector) of a
// symmetric tridiagonal block via LAPACK dstevr.
struct BlockEigs {
    double e0 = std::numeric_limits<double>::infinity();
    double e1 = std::numeric_limits<double>::infinity();
    Eigen::VectorXd v0;
};

BlockEigs block_lowest(const TridiagBlock& b, bool want_vector) {
    BlockEigs out;
    const lapack_int n = static_cast<lapack_int>(b.diag.size());
    if (n == 0) return out;
    if (n == 1) {
        out.e0 = b.diag[0];
        if (want_vector) {
            out.v0.resize(1);
            out.v0[0] = 1.0;
        }
        return out;
    }
    std::vector<double> d(b.diag), e(b.off);
    const lapack_int iu = std::min<lapack_int>(2, n);
    std::vector<double> w(n);
    std::vector<double> z(want_vector ? static_cast<std::size_t>(n) * iu : 1);
    std::vector<lapack_int> isuppz(2 * std::max<lapack_int>(1, iu));
    lapack_int m = 0;
    const lapack_int info = LAPACKE_dstevr(
        LAPACK_COL_MAJOR, want_vector ? 'V' : 'N', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, iu,
        0.0, &m, w.data(), z.data(), n, isuppz.data());
    if (info != 0) throw std::runtime_error("dstevr failed, info=" + std::to_string(info));
    out.e0 = w[0];
    if (m > 1) out.e1 = w[1];
    if (want_vector) {
        out.v0.resize(n);
        for (lapack_int i = 0; i < n; ++i) out.v0[i] = z[i];
    }
    return out;
}

void fix_phase(Eigen::VectorXd& v) {
    const double scale = v.cwiseAbs().maxCoeff();
    if (scale <= 0.0) return;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-12 * scale) {
            if (v[i] < 0.0) v = -v;
            return;
        }
    }
}

}  // namespace

Eigen::MatrixXd build_block_hamiltonian(const LmgParams& params, const SpinSector& sector) {
    params.validate();
    check_sector(params, sector);
    const TridiagBlock b = assemble_block(params, sector);
    const Eigen::Index d = static_cast<Eigen::Index>(b.ms.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) h(i, i) = b.diag[i];
    for (Eigen::Index i = 0; i + 1 < d; ++i) {
        h(i, i + 1) = b.off[i];
        h(i + 1, i) = b.off[i];
    }
    return h;
}

GroundStateResult ground_state(const LmgParams& params, const GroundStateOptions& opts) {
    params.validate();
    const auto sectors = sectors_for(params.n_particles);

    std::vector<BlockEigs> eigs(sectors.size());
    std::size_t winner = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sectors.size(); ++i) {
        eigs[i] = block_lowest(assemble_block(params, sectors[i]), false);
        if (eigs[i].e0 < best) {
            best = eigs[i].e0;
            winner = i;
        }
    }

    bool degenerate = false;
    for (std::size_t i = 0; i < sectors.size(); ++i) {
        if (i != winner && eigs[i].e0 - best <= opts.degeneracy_tol) degenerate = true;
    }
    if (eigs[winner].e1 - best <= opts.degeneracy_tol) degenerate = true;

    BlockEigs win = block_lowest(assemble_block(params, sectors[winner]), true);
    fix_phase(win.v0);

    GroundStateResult gs;
    gs.energy = win.e0;
    gs.sector = sectors[winner];
    gs.amplitudes = std::move(win.v0);
    gs.degenerate = degenerate;
    return gs;
}

RdmPoint order_parameters(const GroundStateResult& gs, const LmgParams& params) {
    const auto ms = sector_m_values(gs.sector);
    if (static_cast<std::size_t>(gs.amplitudes.size()) != ms.size())
        throw std::invalid_argument("order_parameters: amplitude size does not match sector");
    const double norm = gs.amplitudes.norm();
    if (std::abs(norm - 1.0) > 1e-10)
        throw std::invalid_argument("order_parameters: amplitudes not normalized");

    const double j = gs.sector.j();
    // long double accumulation keeps the N=1000 variational margins clean
    long double jz = 0.0L, jz2 = 0.0L, jpm2 = 0.0L;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const long double a2 = static_cast<long double>(gs.amplitudes[i]) * gs.amplitudes[i];
        jz += ms[i] * a2;
        jz2 += ms[i] * ms[i] * a2;
    }
    for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
        jpm2 += 2.0L * static_cast<long double>(gs.amplitudes[i]) * gs.amplitudes[i + 1] *
                jplus2_element(j, ms[i]);
    }

    RdmPoint p;
    p.jz = static_cast<double>(jz);
    p.jz2 = static_cast<double>(jz2);
    p.jpm2 = static_cast<double>(jpm2);
    p.params = params;
    p.source = Source::Exact;
    p.degenerate = gs.degenerate;
    p.validate();
    return p;
}

std::vector<RdmPoint> sweep_ground_states(std::span<const LmgParams> grid,
                                          const GroundStateOptions& opts) {
    if (grid.empty()) throw std::invalid_argument("sweep_ground_states: empty grid");
    std::vector<RdmPoint> out;
    out.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            out.push_back(order_parameters(ground_state(grid[i], opts), grid[i]));
        } catch (const std::exception& e) {
            throw SweepPointError(i, e.what());
        }
    }
    return out;
}

}  // namespace lipkin::lmg
