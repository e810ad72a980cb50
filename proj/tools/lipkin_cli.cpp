// Command-line front end: exact/sim parameter sweeps over the two-level
// pairing model, convex-hull analysis of the resulting order-parameter
// sets, and gradient analysis along lambda trajectories.

#include <CLI11.hpp>

#include "lipkin/sweep.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

namespace {

// exit codes: 0 success, 2 config, 3 numerical/degeneracy, 4 I/O
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;
constexpr int kIoError = 4;

using namespace lipkin;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> shots;
    std::optional<std::string> mode;
};

sweep::SweepConfig load_config(const CommonArgs& args) {
    sweep::SweepConfig config = args.config_path.empty()
                                    ? sweep::SweepConfig{}
                                    : sweep::SweepConfig::from_json_file(args.config_path);
    // CLI flags override config fields
    if (!args.out_dir.empty()) config.output_directory = args.out_dir;
    if (args.seed) config.root_seed = *args.seed;
    if (args.shots) config.shots = *args.shots;
    if (args.mode) config.mode = sweep::mode_from_string(*args.mode);
    return config;
}

std::string out_path(const sweep::SweepConfig& config, const std::string& name) {
    return (std::filesystem::path(config.output_directory) / name).string();
}

void emit(sweep::RunManifest& manifest, const std::string& path, const std::string& content) {
    sweep::write_file(path, content);
    manifest.outputs.emplace_back(path, sweep::fnv1a64(content));
}

int run_exact_sweep_cmd(const CommonArgs& args) {
    auto config = load_config(args);
    config.mode = sweep::Mode::Exact;
    auto result = sweep::run_exact_sweep(config);
    emit(result.manifest, out_path(config, "points.csv"), sweep::points_to_csv(result.points));
    sweep::write_file(out_path(config, "manifest.json"), result.manifest.to_json());
    std::cout << "wrote " << out_path(config, "points.csv") << " (" << result.points.size()
              << " points)\n";
    return kOk;
}

int run_sim_sweep_cmd(const CommonArgs& args) {
    auto config = load_config(args);
    if (config.mode == sweep::Mode::Exact) config.mode = sweep::Mode::SimIdeal;
    auto result = sweep::run_sim_sweep(config);
    emit(result.manifest, out_path(config, "points.csv"), sweep::points_to_csv(result.points));
    emit(result.manifest, out_path(config, "errors.csv"),
         sweep::errors_to_csv(result.points, config.n_particles));
    std::string jsonl;
    for (const auto& line : result.counts_jsonl) jsonl += line + "\n";
    emit(result.manifest, out_path(config, "counts.jsonl"), jsonl);
    sweep::write_file(out_path(config, "manifest.json"), result.manifest.to_json());
    std::cout << "wrote " << out_path(config, "points.csv") << " (" << result.points.size()
              << " points, " << result.manifest.failures.size() << " failed)\n";
    return kOk;
}

int run_hull_cmd(const std::vector<std::string>& files, const CommonArgs& args, double eps,
                 double angle_tol, int min_lines) {
    auto config = load_config(args);
    if (files.empty()) throw sweep::ConfigError("hull: need at least one points.csv");
    auto outer = sweep::points_from_csv(sweep::read_file(files[0]));
    std::optional<std::vector<sweep::SweepPoint>> inner;
    if (files.size() > 1) inner = sweep::points_from_csv(sweep::read_file(files[1]));

    sweep::HullOptionsEx opts;
    opts.eps = eps > 0 ? eps : config.hull_eps;
    opts.angle_tol = angle_tol > 0 ? angle_tol : config.hull_angle_tol;
    opts.min_ruling_lines = min_lines;
    opts.containment_tol = opts.eps;
    const auto analysis = sweep::analyze_hull(outer, opts, inner ? &*inner : nullptr);

    sweep::RunManifest manifest;
    emit(manifest, out_path(config, "hull.obj"),
         hull::to_obj(analysis.hull, analysis.ruled_jz.facet_ids, analysis.ruled_jpm2.facet_ids,
                      analysis.first_order_planes));
    emit(manifest, out_path(config, "hull_report.json"),
         sweep::hull_report_to_json(analysis, outer));

    const auto proj = hull::project_to_plane(
        [&] {
            std::vector<hull::Vec3> v;
            for (const auto& p : outer) v.push_back({p.rdm.jz, p.rdm.jz2, p.rdm.jpm2});
            return v;
        }(),
        hull::Coord::Jz2, opts.eps);
    std::string proj_csv = "jz,jpm2,on_outline\n";
    std::vector<char> on_outline(proj.points.size(), 0);
    for (int i : proj.outline) on_outline[static_cast<std::size_t>(i)] = 1;
    for (std::size_t i = 0; i < proj.points.size(); ++i)
        proj_csv += sweep::format_double(proj.points[i][0]) + "," +
                    sweep::format_double(proj.points[i][1]) + "," +
                    (on_outline[i] ? "1" : "0") + "\n";
    emit(manifest, out_path(config, "projection.csv"), proj_csv);

    std::cout << "hull: " << analysis.hull.vertex_ids.size() << " vertices, "
              << analysis.hull.facets.size() << " facets, " << analysis.ruled_jz.segments.size()
              << " jz rulings, " << analysis.ruled_jpm2.segments.size() << " jpm2 rulings, "
              << analysis.first_order_planes.size() << " first-order plane(s)";
    if (analysis.containment)
        std::cout << ", containment=" << (*analysis.containment ? "true" : "false")
                  << ", volume_ratio=" << *analysis.volume_ratio;
    std::cout << "\n";
    return kOk;
}

int run_analyze_cmd(const std::string& file, const CommonArgs& args,
                    std::optional<double> epsilon, const std::string& errors_file,
                    std::optional<double> smoothing) {
    auto config = load_config(args);
    auto points = sweep::points_from_csv(sweep::read_file(file));
    if (!errors_file.empty()) sweep::errors_from_csv(sweep::read_file(errors_file), points);

    if (!epsilon) {
        for (const auto& p : points)
            if (p.epsilon != points[0].epsilon)
                throw sweep::ConfigError("analyze: mixed epsilon values; pass --epsilon");
        epsilon = points[0].epsilon;
    }
    std::vector<sweep::SweepPoint> sel;
    for (const auto& p : points)
        if (p.epsilon == *epsilon) sel.push_back(p);
    if (sel.size() < 3) throw sweep::ConfigError("analyze: fewer than 3 points at this epsilon");
    std::sort(sel.begin(), sel.end(),
              [](const auto& a, const auto& b) { return a.lambda < b.lambda; });

    std::vector<hull::Vec3> pts;
    std::vector<double> lambdas;
    for (const auto& p : sel) {
        pts.push_back({p.rdm.jz, p.rdm.jz2, p.rdm.jpm2});
        lambdas.push_back(p.lambda);
    }
    hull::TrajectoryOptions topts;
    if (smoothing) topts.smoothing_sigma = smoothing;
    const auto traj = hull::trajectory_analysis(pts, lambdas, topts);

    std::vector<sweep::GradientRow> rows(sel.size());
    for (std::size_t i = 0; i < sel.size(); ++i) {
        rows[i].lambda = traj.lambdas[i];
        rows[i].djz_dlambda = traj.djz_dlambda[i];
        rows[i].arc_speed = traj.arc_speed[i];
        // propagated through the central difference
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 >= sel.size() ? sel.size() - 1 : i + 1;
        const double dl = traj.lambdas[hi] - traj.lambdas[lo];
        rows[i].std_error = std::hypot(sel[hi].jz_err, sel[lo].jz_err) / (dl > 0 ? dl : 1.0);
    }
    sweep::RunManifest manifest;
    emit(manifest, out_path(config, "gradient.csv"), sweep::gradient_to_csv(rows));
    emit(manifest, out_path(config, "gradient.svg"),
         sweep::gradient_to_svg(rows, "d<Jz>/dlambda, epsilon=" + sweep::format_double(*epsilon)));
    std::cout << "gradient peak at lambda=" << sweep::format_double(traj.peak_lambda)
              << " (value " << sweep::format_double(traj.peak_value) << ", width "
              << sweep::format_double(traj.peak_width) << ")\n";
    return kOk;
}

int run_compare_cmd(const std::string& ref_file, const std::string& test_file,
                    const CommonArgs& args, double eps) {
    auto config = load_config(args);
    auto ref = sweep::points_from_csv(sweep::read_file(ref_file));
    auto test = sweep::points_from_csv(sweep::read_file(test_file));

    sweep::HullOptionsEx opts;
    opts.eps = eps > 0 ? eps : config.hull_eps;
    opts.angle_tol = config.hull_angle_tol;
    opts.containment_tol = opts.eps;
    const auto analysis = sweep::analyze_hull(ref, opts, &test);

    // mean per-qubit <sigma_z> shift, derived from jz (symmetric states)
    double shift = 0.0;
    std::size_t matched = 0;
    std::map<std::pair<double, double>, const sweep::SweepPoint*> by_key;
    for (const auto& p : ref) by_key[{p.epsilon, p.lambda}] = &p;
    const double n = static_cast<double>(config.n_particles);
    for (const auto& p : test) {
        const auto it = by_key.find({p.epsilon, p.lambda});
        if (it == by_key.end()) continue;
        shift += 2.0 * (p.rdm.jz - it->second->rdm.jz) / n;
        ++matched;
    }
    if (matched) shift /= static_cast<double>(matched);

    std::string out = "{\n";
    out += "  \"containment\": " + std::string(*analysis.containment ? "true" : "false") + ",\n";
    out += "  \"volume_ratio\": " + sweep::format_double(*analysis.volume_ratio) + ",\n";
    out += "  \"matched_points\": " + std::to_string(matched) + ",\n";
    out += "  \"mean_sigma_z_shift\": " + sweep::format_double(shift) + "\n";
    out += "}\n";
    sweep::write_file(out_path(config, "compare.json"), out);
    std::cout << out;
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-level pairing-model sweeps and 2-RDM convex-set analysis"};
    app.require_subcommand(1);

    CommonArgs common;
    std::uint64_t seed_arg = 0;
    std::int64_t shots_arg = 0;
    std::string mode_arg;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", common.config_path, "JSON config path");
        cmd->add_option("--out", common.out_dir, "output directory");
        cmd->add_option("--seed", seed_arg, "root RNG seed")->each([&](const std::string&) {
            common.seed = seed_arg;
        });
        cmd->add_option("--shots", shots_arg, "shots per measurement group")
            ->each([&](const std::string&) { common.shots = shots_arg; });
        cmd->add_option("--mode", mode_arg, "exact|ideal|noisy")->each([&](const std::string&) {
            common.mode = mode_arg;
        });
    };

    auto* exact_cmd = app.add_subcommand("exact-sweep", "exact ground-state sweep to points.csv");
    add_common(exact_cmd);

    auto* sim_cmd = app.add_subcommand("sim-sweep", "circuit + tomography sweep (N = 3 or 4)");
    add_common(sim_cmd);

    auto* hull_cmd = app.add_subcommand("hull", "convex hull + ruled surfaces + planes");
    std::vector<std::string> hull_files;
    double hull_eps = 0.0, hull_angle = 0.0;
    int min_lines = 1;
    hull_cmd->add_option("files", hull_files, "points.csv [inner_points.csv]")->required();
    hull_cmd->add_option("--eps", hull_eps, "coplanarity tolerance");
    hull_cmd->add_option("--angle-tol", hull_angle, "facet merge angle tolerance");
    hull_cmd->add_option("--min-lines", min_lines, "rulings needed to report a surface");
    add_common(hull_cmd);

    auto* analyze_cmd = app.add_subcommand("analyze", "gradient of <Jz> along lambda");
    std::string analyze_file, errors_file;
    double epsilon_arg = 0.0;
    bool has_epsilon = false;
    double smoothing_arg = 0.0;
    bool has_smoothing = false;
    analyze_cmd->add_option("file", analyze_file, "points.csv")->required();
    analyze_cmd->add_option("--epsilon", epsilon_arg, "epsilon branch to analyze")
        ->each([&](const std::string&) { has_epsilon = true; });
    analyze_cmd->add_option("--errors", errors_file, "errors.csv sidecar");
    analyze_cmd->add_option("--smooth", smoothing_arg, "Gaussian sigma in grid units")
        ->each([&](const std::string&) { has_smoothing = true; });
    add_common(analyze_cmd);

    auto* compare_cmd = app.add_subcommand("compare", "containment/volume/shift vs reference");
    std::string ref_file, test_file;
    double compare_eps = 0.0;
    compare_cmd->add_option("reference", ref_file, "exact points.csv")->required();
    compare_cmd->add_option("test", test_file, "noisy/ideal points.csv")->required();
    compare_cmd->add_option("--eps", compare_eps, "containment tolerance");
    add_common(compare_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (exact_cmd->parsed()) return run_exact_sweep_cmd(common);
        if (sim_cmd->parsed()) return run_sim_sweep_cmd(common);
        if (hull_cmd->parsed())
            return run_hull_cmd(hull_files, common, hull_eps, hull_angle, min_lines);
        if (analyze_cmd->parsed())
            return run_analyze_cmd(analyze_file, common,
                                   has_epsilon ? std::optional<double>(epsilon_arg) : std::nullopt,
                                   errors_file,
                                   has_smoothing ? std::optional<double>(smoothing_arg)
                                                 : std::nullopt);
        if (compare_cmd->parsed()) return run_compare_cmd(ref_file, test_file, common, compare_eps);
    } catch (const sweep::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const sweep::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIoError;
    } catch (const hull::DegeneracyError& e) {
        std::cerr << "degenerate geometry (affine rank " << e.affine_rank << "): " << e.what()
                  << "\n";
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericalError;
    }
    return kOk;
}
