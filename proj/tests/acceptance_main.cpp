// Acceptance suite: one pass/fail line per criterion, non-zero exit when a
// criterion fails. Heavier sweeps are shared between criteria.

#include "lipkin/circuits.hpp"
#include "lipkin/hull_geometry.hpp"
#include "lipkin/lmg_exact.hpp"
#include "lipkin/qubit_sim.hpp"
#include "lipkin/sweep.hpp"
#include "lipkin/tomography.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace lipkin;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("[%s] criterion %d: %s (%.1fs) %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                seconds, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) { return sweep::format_double(v); }

// ---------------------------------------------------------------- 1
void criterion_oracle_equivalence() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240501);
    std::uniform_real_distribution<double> u(-25.0, 25.0);
    double worst = 0.0;
    int checked = 0, skipped_degenerate = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const double eps = u(rng), lam = u(rng);
        for (int n = 2; n <= 6; ++n) {
            const auto bf = oracles::brute_force_ground(eps, lam, n);
            lmg::LmgParams p{eps, lam, n};
            const auto gs = lmg::ground_state(p);
            const auto pt = lmg::order_parameters(gs, p);
            worst = std::max(worst, std::abs(gs.energy - bf.energy));
            if (bf.gap < 1e-8) {
                ++skipped_degenerate;
                continue;
            }
            worst = std::max(worst, std::abs(pt.jz - bf.jz));
            worst = std::max(worst, std::abs(pt.jz2 - bf.jz2));
            worst = std::max(worst, std::abs(pt.jpm2 - bf.jpm2));
            ++checked;
        }
    }
    const double dt = seconds_since(t0);
    const bool pass = worst < 1e-9 && dt < 10.0;
    report(1, "oracle equivalence (N=2..6, 200 random points)", pass,
           "worst |delta| = " + fmt(worst) + ", order-parameter checks = " +
               std::to_string(checked) + ", degenerate skips = " +
               std::to_string(skipped_degenerate) + ", budget 10s",
           dt);
}

// ---------------------------------------------------------------- 2
void criterion_trivial_limits() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int n : {1, 2, 3, 4, 5, 6, 7, 10, 17, 100, 333, 1000}) {
        lmg::LmgParams p{1.0, 0.0, n};
        const auto gs = lmg::ground_state(p);
        const auto pt = lmg::order_parameters(gs, p);
        worst = std::max(worst, std::abs(gs.energy + 0.5 * n));
        worst = std::max(worst, std::abs(pt.jz + 0.5 * n));
        worst = std::max(worst, std::abs(pt.jpm2));
    }
    report(2, "trivial limits (eps=1, lambda=0)", worst < 1e-12,
           "worst |delta| = " + fmt(worst), seconds_since(t0));
}

// ---------------------------------------------------------------- 3
void criterion_round_trip() {
    const auto t0 = Clock::now();
    double worst_fid_gap = 0.0, worst_rdm = 0.0;
    for (int n : {3, 4}) {
        for (double eps : {1.0, -1.0}) {
            for (int k = 0; k < 20; ++k) {
                const double lam_sweep = -25.0 + 50.0 * k / 19.0;
                lmg::LmgParams params{eps, lam_sweep / (n - 1), n};
                const auto target = ansatz::exact_coefficients(params);
                const auto angles = ansatz::solve_angles(target);
                const auto st =
                    sim::run_circuit(ansatz::build_circuit(n, angles, target.flipped));

                // fidelity against the stored (canonically-ordered) target
                sim::complex ov{0.0, 0.0};
                for (std::size_t i = 0; i < st.dim(); ++i) {
                    std::size_t idx = i;
                    if (target.flipped) idx = (~i) & (st.dim() - 1);
                    ov += target.coefficients[i] * st.amplitude(idx);
                }
                worst_fid_gap = std::max(worst_fid_gap, 1.0 - std::norm(ov));

                const auto est = tomo::order_parameters_from_paulis(
                    tomo::exact_expectations(st), n, params, lmg::Source::SimIdeal);
                const auto exact = lmg::order_parameters(lmg::ground_state(params), params);
                worst_rdm = std::max({worst_rdm, std::abs(est.point.jz - exact.jz),
                                      std::abs(est.point.jz2 - exact.jz2),
                                      std::abs(est.point.jpm2 - exact.jpm2)});
            }
        }
    }
    const bool pass = worst_fid_gap <= 1e-8 && worst_rdm <= 1e-9;
    report(3, "round-trip state preparation + exact tomography", pass,
           "worst infidelity = " + fmt(worst_fid_gap) + ", worst RDM delta = " + fmt(worst_rdm),
           seconds_since(t0));
}

// shared N=1000 sweep (criteria 4 and 5)
struct BigSweep {
    std::vector<sweep::SweepPoint> points;  // eps = +-1 over the 501 lambda grid
    double seconds = 0.0;
};

BigSweep run_big_sweep() {
    const auto t0 = Clock::now();
    sweep::SweepConfig c;
    c.n_particles = 1000;
    c.epsilon_values = {1.0, -1.0};
    c.lambda_grid = {-25.0, 25.0, 501, {}};
    c.lambda_scale = sweep::LambdaScale::PerPair;
    c.mode = sweep::Mode::Exact;
    BigSweep out;
    out.points = sweep::run_exact_sweep(c).points;
    out.seconds = seconds_since(t0);
    return out;
}

// ---------------------------------------------------------------- 4
void criterion_second_order(const BigSweep& big) {
    const auto t0 = Clock::now();

    // N = 4 gradient peak on a 0.05-step grid over [0, 3]
    std::vector<hull::Vec3> pts4;
    std::vector<double> lams4;
    for (int i = 0; i <= 60; ++i) {
        const double lam = 0.05 * i;
        lmg::LmgParams p{1.0, lam / 3.0, 4};
        const auto pt = lmg::order_parameters(lmg::ground_state(p), p);
        pts4.push_back({pt.jz, pt.jz2, pt.jpm2});
        lams4.push_back(lam);
    }
    const auto traj4 = hull::trajectory_analysis(pts4, lams4);
    const bool n4_peak_ok = std::abs(traj4.peak_lambda - 1.0) <= 0.05 + 1e-12;

    // N = 1000 on the +1 branch of the shared 501-point sweep
    std::vector<hull::Vec3> pts1000;
    std::vector<double> lams1000;
    for (const auto& p : big.points) {
        if (p.epsilon != 1.0) continue;
        pts1000.push_back({p.rdm.jz, p.rdm.jz2, p.rdm.jpm2});
        lams1000.push_back(p.lambda);
    }
    const auto traj1000 = hull::trajectory_analysis(pts1000, lams1000);
    double flat_max = 0.0;
    for (std::size_t i = 0; i < lams1000.size(); ++i) {
        if (std::abs(lams1000[i]) <= 0.5)
            flat_max = std::max(flat_max, std::abs(traj1000.djz_dlambda[i]) / 500.0);
    }
    const bool n1000_flat_ok = flat_max < 1e-3;
    const bool n1000_peak_ok = traj1000.peak_lambda >= 0.9 && traj1000.peak_lambda <= 1.1;
    const bool runtime_ok = big.seconds < 60.0;

    const bool pass = n4_peak_ok && n1000_flat_ok && n1000_peak_ok && runtime_ok;
    report(4, "second-order signature", pass,
           "N=4 argmax = " + fmt(traj4.peak_lambda) + " (want 1.0 +- 0.05 -> " +
               (n4_peak_ok ? "ok" : "FAIL") + "), N=1000 per-spin |grad| on |lam|<=0.5 = " +
               fmt(flat_max) + " (" + (n1000_flat_ok ? "ok" : "FAIL") + "), N=1000 argmax = " +
               fmt(traj1000.peak_lambda) + " (" + (n1000_peak_ok ? "ok" : "FAIL") +
               "), sweep time = " + fmt(big.seconds) + "s (" + (runtime_ok ? "ok" : "FAIL") + ")",
           seconds_since(t0) + big.seconds);
}

// ---------------------------------------------------------------- 5
void criterion_hull_structure(const BigSweep& big) {
    const auto t0 = Clock::now();

    // extend the cloud with an epsilon grid at fixed |lambda| = 5
    sweep::SweepConfig ce;
    ce.n_particles = 1000;
    ce.epsilon_values.clear();
    for (int i = 0; i <= 100; ++i) ce.epsilon_values.push_back(-25.0 + 0.5 * i);
    ce.lambda_grid = {0.0, 0.0, 0, {5.0, -5.0}};
    ce.lambda_scale = sweep::LambdaScale::PerPair;
    ce.mode = sweep::Mode::Exact;
    auto points = big.points;
    for (auto& p : sweep::run_exact_sweep(ce).points) points.push_back(std::move(p));

    // supporting-plane (variational) check, relative 1e-9
    double worst_violation = 0.0;
    {
        const std::size_t m = points.size();
        std::vector<double> jz(m), jpm2(m), eps_m(m), lam_m(m), energy(m);
        for (std::size_t i = 0; i < m; ++i) {
            jz[i] = points[i].rdm.jz;
            jpm2[i] = points[i].rdm.jpm2;
            eps_m[i] = points[i].epsilon;
            lam_m[i] = points[i].lambda / 999.0;  // per-pair model coupling
            energy[i] = eps_m[i] * jz[i] + 0.5 * lam_m[i] * jpm2[i];
        }
        for (std::size_t p = 0; p < m; ++p) {
            double fmin = 1e300;
            for (std::size_t q = 0; q < m; ++q)
                fmin = std::min(fmin, eps_m[p] * jz[q] + 0.5 * lam_m[p] * jpm2[q]);
            const double viol = (energy[p] - fmin) / std::max(1.0, std::abs(energy[p]));
            worst_violation = std::max(worst_violation, viol);
        }
    }
    const bool supporting_ok = worst_violation < 1e-9;

    sweep::HullOptionsEx opts;
    opts.eps = 1e-6;  // absolute, for coordinates up to ~5e5
    opts.angle_tol = 1e-7;
    opts.min_ruling_lines = 10;
    const auto an = sweep::analyze_hull(points, opts);
    const bool jz_ok = an.ruled_jz.segments.size() >= 10;
    const bool jpm2_ok = an.ruled_jpm2.segments.size() >= 10;

    const bool pass = supporting_ok && jz_ok && jpm2_ok;
    report(5, "hull structure at N=1000", pass,
           "worst relative supporting-plane violation = " + fmt(worst_violation) +
               ", jz rulings = " + std::to_string(an.ruled_jz.segments.size()) +
               ", jpm2 rulings = " + std::to_string(an.ruled_jpm2.segments.size()) +
               " (both families need >= 10)",
           seconds_since(t0));
}

// ---------------------------------------------------------------- 6
void criterion_first_order_plane() {
    const auto t0 = Clock::now();

    sweep::SweepConfig c3;
    c3.n_particles = 3;
    c3.epsilon_values = {1.0, -1.0};
    c3.lambda_grid = {-25.0, 25.0, 201, {}};
    c3.lambda_scale = sweep::LambdaScale::PerPair;
    c3.degeneracy_tol = 1e-5;  // flags the eps -> 0 limit rows
    c3.limit_points = {{1e-6, 25.0, "eps->0+,lam>0"},
                       {1e-6, -25.0, "eps->0+,lam<0"},
                       {-1e-6, 25.0, "eps->0-,lam>0"},
                       {-1e-6, -25.0, "eps->0-,lam<0"}};
    c3.mode = sweep::Mode::Exact;
    const auto r3 = sweep::run_exact_sweep(c3);

    sweep::HullOptionsEx opts;
    opts.eps = 1e-9;
    opts.angle_tol = 1e-7;
    const auto an3 = sweep::analyze_hull(r3.points, opts);

    sweep::SweepConfig c4 = c3;
    c4.n_particles = 4;
    c4.degeneracy_tol = 1e-9;
    c4.limit_points.clear();
    const auto r4 = sweep::run_exact_sweep(c4);
    const auto an4 = sweep::analyze_hull(r4.points, opts);

    const bool pass = an3.degenerate_planes.size() == 1 && an4.degenerate_planes.empty();
    report(6, "first-order plane parity (3 qubits yes, 4 qubits no)", pass,
           "3q planes with 4 degenerate vertices = " + std::to_string(an3.degenerate_planes.size()) +
               " (raw jz2-normal facets: " + std::to_string(an3.first_order_planes.size()) +
               "), 4q = " + std::to_string(an4.degenerate_planes.size()) +
               " (raw: " + std::to_string(an4.first_order_planes.size()) + ")",
           seconds_since(t0));
}

// ---------------------------------------------------------------- 7
void criterion_noise_contraction() {
    const auto t0 = Clock::now();
    bool all_pass = true;
    std::string detail;

    for (int n : {3, 4}) {
        sweep::SweepConfig base;
        base.n_particles = n;
        base.epsilon_values = {1.0, -1.0};
        base.lambda_grid = {-25.0, 25.0, 21, {}};
        base.lambda_scale = sweep::LambdaScale::PerPair;
        base.shots = n == 3 ? (1 << 14) : (1 << 13);
        base.repetitions = 5;

        auto exact_cfg = base;
        exact_cfg.mode = sweep::Mode::Exact;
        const auto exact_points = sweep::run_exact_sweep(exact_cfg).points;

        int good_seeds = 0;
        double worst_ratio = 0.0, worst_shift = 1e300;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            auto ideal_cfg = base;
            ideal_cfg.mode = sweep::Mode::SimIdeal;
            ideal_cfg.root_seed = seed;
            const auto ideal = sweep::run_sim_sweep(ideal_cfg);

            auto noisy_cfg = base;
            noisy_cfg.mode = sweep::Mode::SimNoisy;
            noisy_cfg.noise.per_gate_p = 0.02;
            noisy_cfg.root_seed = seed;
            const auto noisy = sweep::run_sim_sweep(noisy_cfg);

            // sampling tolerance: 3x the largest standard error seen
            double eps_samp = 0.0;
            for (const auto& p : noisy.points)
                eps_samp = std::max({eps_samp, p.jz_err, p.jz2_err, p.jpm2_err});
            eps_samp *= 3.0;

            sweep::HullOptionsEx opts;
            opts.eps = 1e-9;
            opts.angle_tol = 1e-7;
            opts.containment_tol = eps_samp;
            const auto an = sweep::analyze_hull(exact_points, opts, &noisy.points);
            const bool contained = an.containment.value_or(false);
            const double ratio = an.volume_ratio.value_or(2.0);

            double min_shift = 1e300;
            for (std::size_t i = 0; i < noisy.points.size(); ++i) {
                for (int q = 0; q < n; ++q)
                    min_shift = std::min(min_shift,
                                         noisy.points[i].sigma_z[static_cast<std::size_t>(q)] -
                                             ideal.points[i].sigma_z[static_cast<std::size_t>(q)]);
            }
            // mean per-qubit shift across the sweep must be positive; allow
            // per-point wiggle but track the worst case for the report
            std::vector<double> mean_shift(static_cast<std::size_t>(n), 0.0);
            for (std::size_t i = 0; i < noisy.points.size(); ++i)
                for (int q = 0; q < n; ++q)
                    mean_shift[static_cast<std::size_t>(q)] +=
                        noisy.points[i].sigma_z[static_cast<std::size_t>(q)] -
                        ideal.points[i].sigma_z[static_cast<std::size_t>(q)];
            bool shift_ok = true;
            for (double s : mean_shift)
                if (s / static_cast<double>(noisy.points.size()) <= 0.0) shift_ok = false;

            if (contained && ratio < 1.0 && shift_ok) ++good_seeds;
            worst_ratio = std::max(worst_ratio, ratio);
            worst_shift = std::min(worst_shift, min_shift);
        }
        const bool pass_n = good_seeds == 5;
        all_pass = all_pass && pass_n;
        detail += "N=" + std::to_string(n) + ": seeds " + std::to_string(good_seeds) +
                  "/5, worst volume ratio " + fmt(worst_ratio) + "; ";
    }
    report(7, "noise contraction (p=0.02, 5 seeds)", all_pass, detail, seconds_since(t0));
}

// ---------------------------------------------------------------- 8
void criterion_shot_noise_scaling() {
    const auto t0 = Clock::now();
    lmg::LmgParams params{1.0, 2.5, 3};
    const auto target = ansatz::exact_coefficients(params);
    const auto angles = ansatz::solve_angles(target);
    const auto base = ansatz::build_circuit(3, angles, target.flipped);

    bool pass = true;
    std::string detail;
    const auto plan = tomo::default_plan(3, 1, 1);
    for (const auto& pauli : {tomo::PauliString::z(0), tomo::PauliString::xx(0, 1)}) {
        // rotate into the string's basis once
        tomo::BasisSetting setting(3, tomo::Axis::Z);
        for (const auto& [q, a] : pauli.ops) setting[static_cast<std::size_t>(q)] = a;
        sim::Circuit circ = base;
        for (int q = 0; q < 3; ++q)
            for (const auto& g : tomo::basis_rotation_gates(setting[static_cast<std::size_t>(q)], q))
                circ.ops.push_back(g);
        const auto st = sim::run_circuit(circ);

        std::vector<double> log_shots, log_std;
        for (int e = 9; e <= 15; ++e) {
            const std::int64_t shots = std::int64_t{1} << e;
            std::vector<double> means;
            for (int s = 0; s < 50; ++s) {
                tomo::GroupCounts gc;
                gc.setting = setting;
                gc.shots = shots;
                gc.seed = sweep::derive_seed(321, static_cast<std::uint64_t>(e),
                                             static_cast<std::uint64_t>(s), 0);
                gc.counts = sim::sample_counts(st, shots, gc.seed);
                tomo::TomographyPlan p1 = plan;
                p1.groups = {setting};
                means.push_back(tomo::estimate_pauli({gc}, p1, pauli).mean);
            }
            double m = 0.0;
            for (double v : means) m += v;
            m /= static_cast<double>(means.size());
            double var = 0.0;
            for (double v : means) var += (v - m) * (v - m);
            var /= static_cast<double>(means.size() - 1);
            log_shots.push_back(std::log2(static_cast<double>(shots)));
            log_std.push_back(0.5 * std::log2(var));
        }
        // least-squares slope
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double npts = static_cast<double>(log_shots.size());
        for (std::size_t i = 0; i < log_shots.size(); ++i) {
            sx += log_shots[i];
            sy += log_std[i];
            sxx += log_shots[i] * log_shots[i];
            sxy += log_shots[i] * log_std[i];
        }
        const double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
        const bool ok = slope > -0.55 && slope < -0.45;
        pass = pass && ok;
        detail += pauli.str(3) + " slope " + fmt(slope) + (ok ? " ok; " : " FAIL; ");
    }
    report(8, "shot-noise scaling (slope -0.5 +- 0.05, 50 seeds)", pass, detail,
           seconds_since(t0));
}

// ---------------------------------------------------------------- 9
void criterion_determinism() {
    const auto t0 = Clock::now();

    sweep::SweepConfig ce;
    ce.n_particles = 3;
    ce.epsilon_values = {1.0, -1.0};
    ce.lambda_grid = {-25.0, 25.0, 51, {}};
    ce.mode = sweep::Mode::Exact;
    const auto e1 = sweep::points_to_csv(sweep::run_exact_sweep(ce).points);
    const auto e2 = sweep::points_to_csv(sweep::run_exact_sweep(ce).points);

    sweep::SweepConfig cs;
    cs.n_particles = 4;
    cs.epsilon_values = {1.0};
    cs.lambda_grid = {0.0, 0.0, 0, {-6.0, 0.0, 6.0}};
    cs.mode = sweep::Mode::SimNoisy;
    cs.noise.per_gate_p = 0.02;
    cs.shots = 2048;
    cs.repetitions = 2;
    cs.root_seed = 42;
    const auto s1 = sweep::run_sim_sweep(cs);
    const auto s2 = sweep::run_sim_sweep(cs);
    const bool sim_same = sweep::points_to_csv(s1.points) == sweep::points_to_csv(s2.points) &&
                          s1.counts_jsonl == s2.counts_jsonl;

    const bool pass = (e1 == e2) && sim_same;
    report(9, "determinism (exact reruns, seeded sim reruns)", pass,
           std::string("exact byte-identical: ") + (e1 == e2 ? "yes" : "NO") +
               ", sim byte-identical: " + (sim_same ? "yes" : "NO"),
           seconds_since(t0));
}

}  // namespace

int main() {
    std::printf("acceptance suite: %s\n", sweep::tool_version().c_str());
    criterion_oracle_equivalence();
    criterion_trivial_limits();
    criterion_round_trip();
    const auto big = run_big_sweep();
    criterion_second_order(big);
    criterion_hull_structure(big);
    criterion_first_order_plane();
    criterion_noise_contraction();
    criterion_shot_noise_scaling();
    criterion_determinism();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
