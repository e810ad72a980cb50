#include <doctest.h>

#include "lipkin/sweep.hpp"

#include <cmath>
#include <set>

using namespace lipkin;

namespace {

sweep::SweepConfig small_exact_config() {
    sweep::SweepConfig c;
    c.n_particles = 3;
    c.epsilon_values = {1.0, -1.0};
    c.lambda_grid = {-5.0, 5.0, 11, {}};
    c.mode = sweep::Mode::Exact;
    return c;
}

}  // namespace

TEST_CASE("lambda grid: symmetric grids carry exact mirror pairs") {
    sweep::LambdaGrid g{-25.0, 25.0, 501, {}};
    const auto v = g.values();
    REQUIRE(v.size() == 501);
    CHECK(v[250] == 0.0);
    for (int i = 0; i < 250; ++i) CHECK(v[500 - i] == -v[i]);
    CHECK(v.front() == -25.0);
    CHECK(v.back() == 25.0);
}

TEST_CASE("config JSON round trip and validation") {
    auto c = small_exact_config();
    c.limit_points.push_back({1e-6, 5.0, "eps->0+"});
    const auto text = c.to_canonical_json();
    const auto back = sweep::SweepConfig::from_json_text(text);
    CHECK(back.n_particles == 3);
    CHECK(back.epsilon_values == c.epsilon_values);
    CHECK(back.lambda_grid.steps == 11);
    CHECK(back.limit_points.size() == 1);
    CHECK(back.limit_points[0].label == "eps->0+");
    CHECK(back.hash() == c.hash());

    CHECK_THROWS_AS(sweep::SweepConfig::from_json_text("{not json"), sweep::ConfigError);
    sweep::SweepConfig bad = c;
    bad.n_particles = 0;
    CHECK_THROWS_AS(bad.validate(), sweep::ConfigError);
    sweep::SweepConfig simbad = c;
    simbad.mode = sweep::Mode::SimIdeal;
    simbad.n_particles = 5;
    CHECK_THROWS_AS(simbad.validate(), sweep::ConfigError);
}

TEST_CASE("config hash covers every semantic field") {
    const auto base = small_exact_config();
    const auto h0 = base.hash();
    auto mutate = [&](auto&& fn) {
        auto c = base;
        fn(c);
        return c.hash();
    };
    CHECK(mutate([](auto& c) { c.n_particles = 4; }) != h0);
    CHECK(mutate([](auto& c) { c.epsilon_values = {2.0}; }) != h0);
    CHECK(mutate([](auto& c) { c.lambda_grid.steps = 21; }) != h0);
    CHECK(mutate([](auto& c) { c.lambda_grid.min = -4.0; }) != h0);
    CHECK(mutate([](auto& c) { c.lambda_scale = sweep::LambdaScale::None; }) != h0);
    CHECK(mutate([](auto& c) { c.degeneracy_tol = 1e-6; }) != h0);
    CHECK(mutate([](auto& c) { c.mode = sweep::Mode::SimIdeal; }) != h0);
    CHECK(mutate([](auto& c) { c.shots = 99; }) != h0);
    CHECK(mutate([](auto& c) { c.repetitions = 2; }) != h0);
    CHECK(mutate([](auto& c) { c.root_seed = 2; }) != h0);
    CHECK(mutate([](auto& c) { c.noise.per_gate_p = 0.01; }) != h0);
    CHECK(mutate([](auto& c) { c.noise.t1 = {50.0}; }) != h0);
    CHECK(mutate([](auto& c) { c.hull_eps = 1e-7; }) != h0);
    CHECK(mutate([](auto& c) { c.hull_angle_tol = 1e-3; }) != h0);
    CHECK(mutate([](auto& c) { c.limit_points.push_back({1e-6, 1.0, "x"}); }) != h0);
    CHECK(mutate([](auto& c) { c.output_directory = "elsewhere"; }) != h0);
    CHECK(mutate([](auto& c) { c.formats = {"csv"}; }) != h0);
}

TEST_CASE("seed fan-out is deterministic and collision-averse") {
    const auto s1 = sweep::derive_seed(1, 0, 0, 0);
    CHECK(s1 == sweep::derive_seed(1, 0, 0, 0));
    std::set<std::uint64_t> seen;
    for (std::uint64_t p = 0; p < 50; ++p)
        for (std::uint64_t r = 0; r < 5; ++r)
            for (std::uint64_t g = 0; g < 3; ++g) seen.insert(sweep::derive_seed(1, p, r, g));
    CHECK(seen.size() == 50 * 5 * 3);
}

TEST_CASE("exact sweep: deterministic rows, trivial example, grid order") {
    auto c = small_exact_config();
    const auto r1 = sweep::run_exact_sweep(c);
    const auto r2 = sweep::run_exact_sweep(c);
    const auto csv1 = sweep::points_to_csv(r1.points);
    const auto csv2 = sweep::points_to_csv(r2.points);
    CHECK(csv1 == csv2);
    REQUIRE(r1.points.size() == 22);
    // epsilon-major order over the lambda grid
    CHECK(r1.points[0].epsilon == 1.0);
    CHECK(r1.points[0].lambda == -5.0);
    CHECK(r1.points[11].epsilon == -1.0);

    // the lambda = 0 row is the noninteracting point
    const auto& row = r1.points[5];
    CHECK(row.lambda == 0.0);
    CHECK(row.rdm.jz == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(row.rdm.jpm2 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(row.energy == doctest::Approx(-1.5).epsilon(1e-12));
}

TEST_CASE("points CSV round trips losslessly") {
    auto c = small_exact_config();
    const auto r = sweep::run_exact_sweep(c);
    const auto csv = sweep::points_to_csv(r.points);
    CHECK(csv.rfind("epsilon,lambda,jz,jz2,jpm2,energy,degenerate,source,shots,seed\n", 0) == 0);
    const auto back = sweep::points_from_csv(csv);
    REQUIRE(back.size() == r.points.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].epsilon == r.points[i].epsilon);
        CHECK(back[i].lambda == r.points[i].lambda);
        CHECK(back[i].rdm.jz == r.points[i].rdm.jz);
        CHECK(back[i].rdm.jz2 == r.points[i].rdm.jz2);
        CHECK(back[i].rdm.jpm2 == r.points[i].rdm.jpm2);
        CHECK(back[i].energy == r.points[i].energy);
        CHECK(back[i].rdm.degenerate == r.points[i].rdm.degenerate);
    }
    const auto csv_again = sweep::points_to_csv(back);
    CHECK(csv_again == csv);
}

TEST_CASE("format_double round trips doubles exactly") {
    for (double v : {0.0, -1.5, 1.0 / 3.0, 2.250000000000001, 1e-300, -2.5e17,
                     0.1234567890123456789}) {
        CHECK(std::strtod(sweep::format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("sim sweep: determinism given the root seed, counts reanalysis") {
    sweep::SweepConfig c;
    c.n_particles = 3;
    c.epsilon_values = {1.0};
    c.lambda_grid = {0.0, 0.0, 0, {-4.0, 0.0, 4.0}};
    c.mode = sweep::Mode::SimIdeal;
    c.shots = 512;
    c.repetitions = 2;
    c.root_seed = 5;

    const auto r1 = sweep::run_sim_sweep(c);
    const auto r2 = sweep::run_sim_sweep(c);
    CHECK(sweep::points_to_csv(r1.points) == sweep::points_to_csv(r2.points));
    CHECK(r1.counts_jsonl == r2.counts_jsonl);
    REQUIRE(r1.points.size() == 3);
    CHECK(r1.points[0].rdm.source == lmg::Source::SimIdeal);
    CHECK(r1.points[0].rdm.shots.has_value());

    // reanalysis from persisted counts reproduces the same points
    const auto re = sweep::reanalyze_counts(c, r1.counts_jsonl);
    CHECK(sweep::points_to_csv(re) == sweep::points_to_csv(r1.points));

    // a different seed produces different histograms
    auto c2 = c;
    c2.root_seed = 6;
    const auto r3 = sweep::run_sim_sweep(c2);
    CHECK(sweep::points_to_csv(r3.points) != sweep::points_to_csv(r1.points));
}

TEST_CASE("noisy sim sweep shifts sigma_z toward +1") {
    sweep::SweepConfig c;
    c.n_particles = 3;
    c.epsilon_values = {1.0};
    c.lambda_grid = {0.0, 0.0, 0, {2.0}};
    c.mode = sweep::Mode::SimIdeal;
    c.shots = 4096;
    c.repetitions = 2;
    c.root_seed = 9;
    const auto ideal = sweep::run_sim_sweep(c);
    c.mode = sweep::Mode::SimNoisy;
    c.noise.per_gate_p = 0.02;
    const auto noisy = sweep::run_sim_sweep(c);
    REQUIRE(ideal.points.size() == 1);
    REQUIRE(noisy.points.size() == 1);
    CHECK(noisy.points[0].rdm.source == lmg::Source::SimNoisy);
    for (int q = 0; q < 3; ++q)
        CHECK(noisy.points[0].sigma_z[static_cast<std::size_t>(q)] >
              ideal.points[0].sigma_z[static_cast<std::size_t>(q)] - 0.05);
    CHECK(noisy.points[0].rdm.jz > ideal.points[0].rdm.jz - 0.05);
}

TEST_CASE("errors CSV round trips the sampled uncertainties") {
    sweep::SweepConfig c;
    c.n_particles = 3;
    c.epsilon_values = {1.0};
    c.lambda_grid = {0.0, 0.0, 0, {1.0, 3.0}};
    c.mode = sweep::Mode::SimIdeal;
    c.shots = 256;
    c.repetitions = 1;
    auto r = sweep::run_sim_sweep(c);
    const auto csv = sweep::errors_to_csv(r.points, 3);
    auto copy = r.points;
    for (auto& p : copy) {
        p.jz_err = 0;
        p.jz2_err = 0;
        p.jpm2_err = 0;
        p.sigma_z.clear();
    }
    sweep::errors_from_csv(csv, copy);
    for (std::size_t i = 0; i < copy.size(); ++i) {
        CHECK(copy[i].jz_err == r.points[i].jz_err);
        CHECK(copy[i].sigma_z == r.points[i].sigma_z);
    }
}

TEST_CASE("analyze_hull finds rulings and the degenerate plane on 3-qubit data") {
    sweep::SweepConfig c;
    c.n_particles = 3;
    c.epsilon_values = {1.0, -1.0};
    c.lambda_grid = {-25.0, 25.0, 41, {}};
    c.degeneracy_tol = 1e-5;
    c.limit_points = {{1e-6, 25.0, "eps->0+,lam>0"},
                      {1e-6, -25.0, "eps->0+,lam<0"},
                      {-1e-6, 25.0, "eps->0-,lam>0"},
                      {-1e-6, -25.0, "eps->0-,lam<0"}};
    const auto r = sweep::run_exact_sweep(c);

    sweep::HullOptionsEx opts;
    opts.eps = 1e-9;
    opts.angle_tol = 1e-7;
    const auto an = sweep::analyze_hull(r.points, opts);
    CHECK(an.ruled_jz.segments.size() >= 10);
    CHECK(an.ruled_jpm2.segments.size() >= 10);
    REQUIRE(an.first_order_planes.size() == 1);
    CHECK(an.degenerate_planes.size() == 1);
    const auto& facet = an.hull.facets[static_cast<std::size_t>(an.first_order_planes[0])];
    CHECK(facet.loop.size() == 4);

    const auto report = sweep::hull_report_to_json(an, r.points);
    CHECK(report.find("first_order_planes") != std::string::npos);
    CHECK(report.find("eps->0+") != std::string::npos);
}

TEST_CASE("gradient SVG and CSV are emitted with the band") {
    std::vector<sweep::GradientRow> rows;
    for (int i = 0; i <= 20; ++i)
        rows.push_back({0.1 * i, std::exp(-(i - 10.0) * (i - 10.0) / 8.0), 0.5, 0.05});
    const auto csv = sweep::gradient_to_csv(rows);
    CHECK(csv.rfind("lambda,djz_dlambda,arc_speed,std_error\n", 0) == 0);
    const auto svg = sweep::gradient_to_svg(rows, "test");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("<path") != std::string::npos);  // the std-error band
    CHECK(svg.find("http://www.w3.org/2000/svg") != std::string::npos);
}
