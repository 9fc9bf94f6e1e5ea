#pragma once

#include <string>
#include <variant>
#include <vector>

#include "lyaplab/linalg.hpp"

namespace lyaplab {

/// The three model surfaces of constant curvature K in {0, +1, -1}:
/// plane coordinates, the unit sphere in R^3, and the upper hyperboloid
/// sheet <x,x>_M = -1 in Minkowski R^{2,1}.  Geodesics and distances are
/// closed-form in every model.
enum class SurfaceKind { Euclidean, Sphere, Hyperbolic };

int curvature_sign(SurfaceKind kind);
std::string surface_name(SurfaceKind kind);

/// Metric pairing of tangent vectors (ambient dot, Minkowski for K = -1).
double surface_dot(SurfaceKind kind, const Vec3& u, const Vec3& v);

struct GeodesicState {
    Vec3 point;
    Vec3 dir;
};

/// Transport (point, unit direction) along the geodesic for arc length t.
/// Defined for all t; the returned point satisfies the model constraint.
GeodesicState geodesic_step(SurfaceKind kind, const Vec3& p, const Vec3& dir, double t);

double geodesic_distance(SurfaceKind kind, const Vec3& p, const Vec3& q);

/// Rotate a unit tangent by +90 degrees inside the tangent plane at p.
/// For a counterclockwise boundary chart this is the inward normal.
Vec3 surface_rot90(SurfaceKind kind, const Vec3& p, const Vec3& tangent);

/// Complete geodesic through `base` with direction `dir`, represented by a
/// functional whose zero set is the geodesic and whose sign identifies the
/// side of a query point.
struct GeodesicLine {
    SurfaceKind kind;
    Vec3 base;
    Vec3 w;

    double side(const Vec3& q) const;
    /// Directional derivative of side() with respect to the query point.
    double side_derivative(const Vec3& dq) const;
};

GeodesicLine geodesic_line(SurfaceKind kind, const Vec3& p, const Vec3& dir);

// ---------------------------------------------------------------------------
// Convex tables

struct DiskSpec {
    double radius = 0.0; // geodesic radius
};

struct EllipseSpec { // Euclidean only
    double a = 0.0;
    double b = 0.0;
};

/// Radial perturbation rho(phi) = radius * (1 + amplitude * cos(mode * phi))
/// in geodesic polar coordinates about the table center.
struct PerturbedDiskSpec {
    double radius = 0.0;
    double amplitude = 0.0;
    int mode = 2;
};

using TableSpec = std::variant<DiskSpec, EllipseSpec, PerturbedDiskSpec>;

/// Geodesic radius for which the disk boundary has length exactly 1.
double unit_perimeter_disk_radius(SurfaceKind kind);

/// Immutable convex table.  The boundary chart is parametrized by normalized
/// arc length s in [0, 1); curvature() is the true geodesic curvature and
/// length() the true perimeter.  Euclidean tables are rescaled to perimeter 1
/// at construction; on the curved surfaces no homothety exists, so tables
/// keep their intrinsic perimeter.
class Table {
public:
    SurfaceKind surface() const { return kind_; }
    double length() const { return length_; }
    const std::string& label() const { return label_; }

    Vec3 position(double s) const;
    Vec3 tangent(double s) const; // unit in the surface metric
    double curvature(double s) const;

    /// Boundary positions on the fixed 512-point lattice j/512, cached for
    /// the collision solver's coarse sweep.
    const std::vector<Vec3>& coarse_points() const { return coarse_; }

    friend Table build_table(const TableSpec& spec, SurfaceKind kind);

private:
    Table() = default;

    double phi_of_s(double s) const;
    Vec3 generator_point(double phi) const;
    Vec3 generator_velocity(double phi) const; // d/dphi, final units
    double radial(double phi) const;
    double radial_slope(double phi) const;

    enum class Gen { Disk, Ellipse, Perturbed };

    SurfaceKind kind_ = SurfaceKind::Euclidean;
    Gen gen_ = Gen::Disk;
    std::string label_;
    double length_ = 1.0;
    double scale_ = 1.0; // Euclidean homothety applied to the source curve

    // disk
    double disk_radius_ = 0.0;
    double kappa_const_ = 0.0;

    // ellipse (semi-axes in final units)
    double ell_a_ = 0.0;
    double ell_b_ = 0.0;

    // perturbed disk (source units)
    double rho0_ = 0.0;
    double amp_ = 0.0;
    int mode_ = 2;

    // inverse arc-length spline phi(s) on uniform s-knots
    std::vector<double> phi_knots_;
    std::vector<double> dphi_knots_;

    std::vector<Vec3> coarse_;
};

/// Construct and validate a table.  Throws UnsupportedCombination for specs
/// that are not meaningful on the surface and NonConvexSpec when the sampled
/// geodesic curvature is not strictly positive.
Table build_table(const TableSpec& spec, SurfaceKind kind);

} // namespace lyaplab
