#pragma once

#include "lipkin/circuits.hpp"
#include "lipkin/hull_geometry.hpp"
#include "lipkin/lmg_exact.hpp"
#include "lipkin/qubit_sim.hpp"
#include "lipkin/tomography.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lipkin::sweep {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Mode { Exact, SimIdeal, SimNoisy };
std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

/// How the sweep's lambda column maps onto the model coupling:
/// none      - model lambda is the sweep value as-is
/// per_pair  - model lambda = sweep value / (N - 1), which puts the
///             phase transition at sweep lambda ~ 1 independently of N
enum class LambdaScale { None, PerPair };
std::string to_string(LambdaScale s);
LambdaScale lambda_scale_from_string(const std::string& s);

struct LambdaGrid {
    double min = -25.0;
    double max = 25.0;
    int steps = 501;                      // ignored when explicit_values set
    std::vector<double> explicit_values;

    std::vector<double> values() const;
};

/// Extra sweep points (e.g. epsilon -> 0 limits); these carry a label and
/// are evaluated after the main grid.
struct LimitPoint {
    double epsilon = 0.0;
    double lambda = 0.0;
    std::string label;
};

struct NoiseConfig {
    std::vector<double> t1;
    std::map<std::string, double> gate_durations;
    std::optional<double> per_gate_p;

    sim::NoiseModel to_model(int n_qubits) const;
};

struct SweepConfig {
    // model
    int n_particles = 1000;
    std::vector<double> epsilon_values{1.0, -1.0};
    LambdaGrid lambda_grid;
    LambdaScale lambda_scale = LambdaScale::PerPair;
    std::vector<LimitPoint> limit_points;
    double degeneracy_tol = 1e-9;
    // execution
    Mode mode = Mode::Exact;
    std::int64_t shots = 1 << 14;
    int repetitions = 5;
    std::uint64_t root_seed = 1;
    NoiseConfig noise;
    // hull analysis
    double hull_eps = 1e-9;
    double hull_angle_tol = 1e-7;
    // output
    std::string output_directory = ".";
    std::vector<std::string> formats{"csv", "jsonl", "obj", "svg"};

    void validate() const;
    std::string to_canonical_json() const;
    static SweepConfig from_json_text(const std::string& text);
    static SweepConfig from_json_file(const std::string& path);
    /// FNV-1a over the canonical JSON; covers every semantic field.
    std::uint64_t hash() const;

    double model_lambda(double sweep_lambda) const;
};

/// One evaluated sweep point, as written to points.csv.
struct SweepPoint {
    double epsilon = 0.0;  // sweep-level values (see lambda_scale)
    double lambda = 0.0;
    lmg::RdmPoint rdm;
    double energy = 0.0;
    std::optional<std::string> label;  // limit points
    // sampled modes only
    double jz_err = 0.0, jz2_err = 0.0, jpm2_err = 0.0;
    std::vector<double> sigma_z;
    bool failed = false;
};

struct RunManifest {
    std::string tool_version;
    std::uint64_t config_hash = 0;
    std::string config_json;
    std::string started_at;   // ISO-8601 UTC
    std::string finished_at;
    std::vector<std::uint64_t> point_seeds;
    std::vector<std::pair<std::string, std::uint64_t>> outputs;  // (file, content hash)
    std::vector<std::string> failures;

    std::string to_json() const;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<std::string> counts_jsonl;  // raw counts records, sim modes
    RunManifest manifest;
};

/// Deterministic per-(point, repetition, group) seed fan-out.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t point, std::uint64_t repetition,
                          std::uint64_t group);

/// The (epsilon, lambda) grid in output order: epsilon-major over the
/// lambda grid, then limit points.
std::vector<std::pair<double, double>> grid_of(const SweepConfig& config);

SweepResult run_exact_sweep(const SweepConfig& config);
SweepResult run_sim_sweep(const SweepConfig& config);

/// Re-derives sim sweep points from persisted raw-counts records.
std::vector<SweepPoint> reanalyze_counts(const SweepConfig& config,
                                         const std::vector<std::string>& jsonl_lines);

// ---- persistence ----

/// CSV columns: epsilon, lambda, jz, jz2, jpm2, energy, degenerate, source,
/// shots, seed (empty where inapplicable). Bit-stable formatting.
std::string points_to_csv(const std::vector<SweepPoint>& points);
std::vector<SweepPoint> points_from_csv(const std::string& text);

/// Sampled-error sidecar: epsilon, lambda, jz_err, jz2_err, jpm2_err and
/// per-qubit sigma_z columns.
std::string errors_to_csv(const std::vector<SweepPoint>& points, int n_qubits);
void errors_from_csv(const std::string& text, std::vector<SweepPoint>& points);

struct GradientRow {
    double lambda = 0.0;
    double djz_dlambda = 0.0;
    double arc_speed = 0.0;
    double std_error = 0.0;
};
std::string gradient_to_csv(const std::vector<GradientRow>& rows);

/// Self-contained SVG line plot with a +-1 std-error band.
std::string gradient_to_svg(const std::vector<GradientRow>& rows, const std::string& title);

struct HullAnalysis {
    hull::Hull3 hull;
    hull::RuledSurfaceReport ruled_jz;
    hull::RuledSurfaceReport ruled_jpm2;
    std::vector<int> first_order_planes;
    /// planes qualified by >= 4 degenerate/limit vertices
    std::vector<int> degenerate_planes;
    std::optional<bool> containment;      // second point set inside, if given
    std::optional<double> volume_ratio;   // inner/outer
};

struct HullOptionsEx {
    double eps = 1e-9;
    double angle_tol = 1e-7;
    int min_ruling_lines = 1;
    double containment_tol = 0.0;
};

/// Hull + ruled-surface + first-order-plane analysis of a point set, with
/// ruling candidates from degenerate (epsilon, lambda) mirror pairs found
/// in the data. `inner` adds the containment/volume comparison.
HullAnalysis analyze_hull(const std::vector<SweepPoint>& points, const HullOptionsEx& opts,
                          const std::vector<SweepPoint>* inner = nullptr);

std::string hull_report_to_json(const HullAnalysis& analysis,
                                const std::vector<SweepPoint>& points);

// file helpers
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);
std::uint64_t fnv1a64(const std::string& data);
std::string format_double(double v);  // shortest round-trip decimal

std::string tool_version();

}  // namespace lipkin::sweep
