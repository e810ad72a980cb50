#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lipkin::hull {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const;
    Vec3 normalized() const;
};

/// Order-parameter coordinates: x = <Jz>, y = <Jz^2>, z = <J+^2+J-^2>.
enum class Coord { Jz = 0, Jz2 = 1, Jpm2 = 2 };

Vec3 coord_axis(Coord c);

struct DegeneracyError : std::runtime_error {
    int affine_rank;
    DegeneracyError(int rank, const std::string& what)
        : std::runtime_error(what), affine_rank(rank) {}
};

/// Planar facet of the merged polytope: an outward-oriented vertex loop.
struct Facet {
    std::vector<int> loop;  // indices into Hull3::points, counter-clockwise seen from outside
    Vec3 normal;            // unit outward normal
    double offset = 0.0;    // plane: normal . p = offset
};

struct Hull3 {
    std::vector<Vec3> points;                  // the input points
    std::vector<int> vertex_ids;               // input indices that are hull vertices
    std::vector<std::array<int, 3>> triangles; // outward-oriented triangulation
    std::vector<Facet> facets;                 // coplanar-merged faces
    double eps = 1e-9;

    /// Max outward distance of a point from every facet plane (<= tol means
    /// inside or on the hull).
    double signed_distance(const Vec3& p) const;
    bool contains(const Vec3& p, double tol) const;
    double volume() const;

    int edge_count() const;
    /// V - E + F on the merged polytope.
    int euler_characteristic() const;
    void check_invariants() const;
};

struct HullOptions {
    double eps = 1e-9;            // coplanarity / containment tolerance
    double merge_angle_tol = 1e-7;  // radians, facet merging
};

/// 3D convex hull (quickhull) with coplanar facet merging. Deterministic
/// for a fixed input order. Throws DegeneracyError with the detected
/// affine rank when the points are coplanar/collinear within eps.
Hull3 quickhull3(std::span<const Vec3> points, const HullOptions& opts = {});

struct Segment {
    int a = 0, b = 0;  // indices into the hull's input points
};

struct RuledSurfaceReport {
    Coord axis = Coord::Jz;
    std::string interpretation;       // "spin_flip" or "parity"
    std::vector<int> facet_ids;       // merged facets whose plane contains the axis
    std::vector<Segment> segments;    // verified rulings
};

/// Merged facets whose plane contains the axis direction (normal
/// perpendicular to it within angle_tol) together with the candidate
/// degenerate-pair segments verified to be parallel to the axis and to lie
/// in such a facet plane within the hull eps. Candidates come from
/// upstream degeneracy bookkeeping, not from facet guessing.
RuledSurfaceReport detect_ruled_surfaces(const Hull3& hull, Coord axis, double angle_tol,
                                         int min_lines, std::span<const Segment> candidates);

/// Facets whose normal is parallel to normal_axis within angle_tol and
/// which have at least 4 vertices.
std::vector<int> detect_first_order_plane(const Hull3& hull, Coord normal_axis, double angle_tol);

struct Projection {
    std::vector<std::array<double, 2>> points;  // orthogonal projection
    std::vector<int> outline;                   // convex outline, CCW indices
};

/// Orthogonal projection dropping one coordinate (default <Jz^2>), with the
/// 2D convex outline of the projected cloud.
Projection project_to_plane(std::span<const Vec3> points, Coord drop_axis = Coord::Jz2,
                            double eps = 1e-9);

struct TrajectoryOptions {
    double jump_factor = 10.0;       // secant-ratio discontinuity threshold
    std::optional<double> smoothing_sigma;  // grid units; off for exact data
};

struct TrajectoryAnalysis {
    std::vector<double> lambdas;
    std::vector<double> arc_speed;   // ||d point / d lambda||
    std::vector<double> djz_dlambda;
    double peak_lambda = 0.0;        // grid argmax of djz_dlambda
    double peak_value = 0.0;
    double peak_width = 0.0;         // FWHM estimate around the peak
    std::vector<int> discontinuities;
    bool smoothed = false;
    double smoothing_sigma = 0.0;
};

/// Central finite differences along a strictly monotone lambda path.
TrajectoryAnalysis trajectory_analysis(std::span<const Vec3> points,
                                       std::span<const double> lambdas,
                                       const TrajectoryOptions& opts = {});

/// OBJ export with facet groups named ruled_jz, ruled_jpm2,
/// first_order_plane and other.
std::string to_obj(const Hull3& hull, std::span<const int> ruled_jz_facets,
                   std::span<const int> ruled_jpm2_facets, std::span<const int> plane_facets);

}  // namespace lipkin::hull
