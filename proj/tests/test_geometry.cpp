#include <doctest.h>

#include <cmath>

#include "lyaplab/errors.hpp"
#include "lyaplab/geometry.hpp"
#include "lyaplab/rng.hpp"

using namespace lyaplab;

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;

double model_constraint(SurfaceKind kind, const Vec3& p) {
    switch (kind) {
    case SurfaceKind::Euclidean: return p.z;                // stays in the plane
    case SurfaceKind::Sphere: return p.dot(p) - 1.0;        // |p|^2 = 1
    case SurfaceKind::Hyperbolic: return p.mdot(p) + 1.0;   // <p,p>_M = -1
    }
    return 0.0;
}

/// Independent oracle: integrate the geodesic equation x'' = -K <x', x'> x
/// (metric pairing of the surface) with classic RK4.
GeodesicState rk4_geodesic(SurfaceKind kind, Vec3 p, Vec3 v, double t, int steps) {
    const double K = curvature_sign(kind);
    const double h = t / steps;
    auto acc = [&](const Vec3& x, const Vec3& xd) {
        return x * (-K * surface_dot(kind, xd, xd));
    };
    for (int k = 0; k < steps; ++k) {
        const Vec3 k1p = v, k1v = acc(p, v);
        const Vec3 k2p = v + k1v * (h / 2), k2v = acc(p + k1p * (h / 2), v + k1v * (h / 2));
        const Vec3 k3p = v + k2v * (h / 2), k3v = acc(p + k2p * (h / 2), v + k2v * (h / 2));
        const Vec3 k4p = v + k3v * h, k4v = acc(p + k3p * h, v + k3v * h);
        p = p + (k1p + k2p * 2.0 + k3p * 2.0 + k4p) * (h / 6.0);
        v = v + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0);
    }
    return {p, v};
}

/// Finite-difference geodesic curvature of a table chart (test-side oracle,
/// independent of Table::curvature's closed forms).
double fd_curvature(const Table& table, double s) {
    const double h = 1e-4;
    const Vec3 pm2 = table.position(s - 2 * h), pm1 = table.position(s - h);
    const Vec3 p0 = table.position(s);
    const Vec3 pp1 = table.position(s + h), pp2 = table.position(s + 2 * h);
    const Vec3 acc = (pm2 * -1.0 + pm1 * 16.0 + p0 * -30.0 + pp1 * 16.0 + pp2 * -1.0) *
                     (1.0 / (12.0 * h * h));
    const Vec3 n = surface_rot90(table.surface(), p0, table.tangent(s));
    return surface_dot(table.surface(), acc, n) / (table.length() * table.length());
}

double fd_speed(const Table& table, double s) {
    const double h = 1e-6;
    const Vec3 d = (table.position(s + h) - table.position(s - h)) * (1.0 / (2 * h));
    return std::sqrt(std::fabs(surface_dot(table.surface(), d, d))) / table.length();
}

} // namespace

TEST_CASE("euclidean disk normalizes to curvature 2 pi") {
    const Table t = build_table(DiskSpec{1.0 / kTwoPi}, SurfaceKind::Euclidean);
    CHECK(t.length() == doctest::Approx(1.0));
    for (int i = 0; i < 64; ++i)
        CHECK(t.curvature(i / 64.0) == doctest::Approx(kTwoPi).epsilon(1e-12));

    // any radius rescales to the same table
    const Table t2 = build_table(DiskSpec{3.7}, SurfaceKind::Euclidean);
    CHECK(t2.curvature(0.25) == doctest::Approx(kTwoPi).epsilon(1e-12));
}

TEST_CASE("spherical disk curvature cot(rho) against finite differences") {
    const double rho = 0.5;
    const Table t = build_table(DiskSpec{rho}, SurfaceKind::Sphere);
    CHECK(t.length() == doctest::Approx(kTwoPi * std::sin(rho)));
    for (int i = 0; i < 32; ++i) {
        const double s = i / 32.0;
        CHECK(t.curvature(s) == doctest::Approx(1.0 / std::tan(rho)).epsilon(1e-12));
        CHECK(fd_curvature(t, s) == doctest::Approx(1.0 / std::tan(rho)).epsilon(1e-6));
    }
}

TEST_CASE("hyperbolic disk curvature coth(rho) against finite differences") {
    const double rho = 0.4;
    const Table t = build_table(DiskSpec{rho}, SurfaceKind::Hyperbolic);
    CHECK(t.length() == doctest::Approx(kTwoPi * std::sinh(rho)));
    CHECK(fd_curvature(t, 0.3) == doctest::Approx(1.0 / std::tanh(rho)).epsilon(1e-6));
}

TEST_CASE("degenerate ellipse equals an equal-perimeter disk") {
    const Table circle = build_table(EllipseSpec{1.0, 1.0}, SurfaceKind::Euclidean);
    const Table disk = build_table(DiskSpec{1.0}, SurfaceKind::Euclidean);
    CHECK(circle.length() == doctest::Approx(1.0));
    for (int i = 0; i < 32; ++i) {
        const double s = i / 32.0;
        CHECK(circle.curvature(s) == doctest::Approx(disk.curvature(s)).epsilon(1e-9));
    }
}

TEST_CASE("ellipse closed-form curvature matches finite differences") {
    const Table t = build_table(EllipseSpec{1.5, 1.0}, SurfaceKind::Euclidean);
    CHECK(t.length() == doctest::Approx(1.0));
    for (int i = 0; i < 32; ++i) {
        const double s = i / 32.0 + 0.013;
        CHECK(t.curvature(s) == doctest::Approx(fd_curvature(t, s)).epsilon(1e-6));
    }
}

TEST_CASE("tables are arc-length parametrized") {
    const Table tables[] = {
        build_table(DiskSpec{0.5}, SurfaceKind::Sphere),
        build_table(EllipseSpec{1.5, 1.0}, SurfaceKind::Euclidean),
        build_table(PerturbedDiskSpec{1.0, 0.1, 3}, SurfaceKind::Euclidean),
        build_table(PerturbedDiskSpec{0.3, 0.05, 3}, SurfaceKind::Hyperbolic),
    };
    for (const Table& t : tables) {
        double worst = 0.0;
        for (int i = 0; i < 4096; ++i) {
            const double s = i / 4096.0;
            worst = std::max(worst, std::fabs(fd_speed(t, s) - 1.0));
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("convexity and combination validation") {
    // epsilon (1 + m^2) > 1 makes the planar profile locally concave
    CHECK_THROWS_AS(build_table(PerturbedDiskSpec{1.0, 0.2, 3}, SurfaceKind::Euclidean),
                    NonConvexSpec);
    CHECK_THROWS_AS(build_table(EllipseSpec{1.5, 1.0}, SurfaceKind::Sphere),
                    UnsupportedCombination);
    CHECK_THROWS_AS(build_table(DiskSpec{1.6}, SurfaceKind::Sphere), NonConvexSpec);
    CHECK_THROWS_AS(build_table(EllipseSpec{1.0, 1.5}, SurfaceKind::Euclidean),
                    UnsupportedCombination);
    // the marginally convex spec parameters still build
    CHECK_NOTHROW(build_table(PerturbedDiskSpec{1.0, 0.1, 3}, SurfaceKind::Euclidean));
}

TEST_CASE("geodesic_step closed forms") {
    SUBCASE("plane is a straight line") {
        const auto g = geodesic_step(SurfaceKind::Euclidean, {0, 0, 0}, {1, 0, 0}, 2.0);
        CHECK(g.point.x == doctest::Approx(2.0));
        CHECK(g.point.y == doctest::Approx(0.0));
        CHECK(g.dir.x == doctest::Approx(1.0));
    }
    SUBCASE("half great circle reaches the antipode with reversed direction") {
        const Vec3 pole{0, 0, 1};
        const Vec3 dir{1, 0, 0};
        const auto g = geodesic_step(SurfaceKind::Sphere, pole, dir, kPi);
        CHECK(g.point.z == doctest::Approx(-1.0));
        CHECK(g.dir.x == doctest::Approx(-1.0));
    }
    SUBCASE("hyperboloid flow against the RK4 oracle") {
        const Vec3 base{0, 0, 1};
        const Vec3 dir{1, 0, 0};
        const auto g = geodesic_step(SurfaceKind::Hyperbolic, base, dir, 1.0);
        CHECK(g.point.z == doctest::Approx(std::cosh(1.0)).epsilon(1e-12));
        CHECK(g.point.z == doctest::Approx(1.5430806348).epsilon(1e-9));
        const auto oracle = rk4_geodesic(SurfaceKind::Hyperbolic, base, dir, 1.0, 2000);
        CHECK((g.point - oracle.point).norm() < 1e-8);
        CHECK((g.dir - oracle.dir).norm() < 1e-8);
    }
    SUBCASE("sphere flow against the RK4 oracle") {
        const Vec3 p{1, 0, 0};
        const Vec3 v{0, 0.6, 0.8};
        const auto g = geodesic_step(SurfaceKind::Sphere, p, v, 0.9);
        const auto oracle = rk4_geodesic(SurfaceKind::Sphere, p, v, 0.9, 2000);
        CHECK((g.point - oracle.point).norm() < 1e-8);
    }
}

TEST_CASE("geodesic_distance basics") {
    CHECK(geodesic_distance(SurfaceKind::Euclidean, {0, 0, 0}, {3, 4, 0}) ==
          doctest::Approx(5.0));
    CHECK(geodesic_distance(SurfaceKind::Sphere, {0, 0, 1}, {1, 0, 0}) ==
          doctest::Approx(kPi / 2));

    // distance(step(p, v, t), p) = t for sampled t
    const Vec3 base{0, 0, 1};
    const Vec3 dir{0.6, 0.8, 0};
    for (double t = 0.25; t < 3.0; t += 0.5) {
        const auto g = geodesic_step(SurfaceKind::Hyperbolic, base, dir, t);
        CHECK(geodesic_distance(SurfaceKind::Hyperbolic, g.point, base) ==
              doctest::Approx(t).epsilon(1e-12));
    }

    // symmetry and triangle inequality on random sphere triples
    RngStream rng(5);
    for (int k = 0; k < 200; ++k) {
        Vec3 pts[3];
        for (auto& p : pts) {
            const double z = rng.next_symmetric();
            const double phi = kTwoPi * rng.next_double();
            const double r = std::sqrt(1 - z * z);
            p = {r * std::cos(phi), r * std::sin(phi), z};
        }
        const double ab = geodesic_distance(SurfaceKind::Sphere, pts[0], pts[1]);
        const double ba = geodesic_distance(SurfaceKind::Sphere, pts[1], pts[0]);
        const double bc = geodesic_distance(SurfaceKind::Sphere, pts[1], pts[2]);
        const double ac = geodesic_distance(SurfaceKind::Sphere, pts[0], pts[2]);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-14));
        CHECK(ac <= ab + bc + 1e-12);
    }
}

TEST_CASE("model constraints survive many composed steps") {
    // bounded walk: alternate between a random forward step and a step back
    // toward the base point, staying in the working region of a table
    const Vec3 base{0, 0, 1};
    auto direction_toward = [](SurfaceKind kind, const Vec3& p, const Vec3& q) {
        Vec3 w = kind == SurfaceKind::Hyperbolic ? q + p * q.mdot(p) : q - p * q.dot(p);
        const double n = std::sqrt(std::fabs(surface_dot(kind, w, w)));
        return w * (1.0 / n);
    };
    for (const SurfaceKind kind : {SurfaceKind::Sphere, SurfaceKind::Hyperbolic}) {
        Vec3 p = base;
        Vec3 v{1, 0, 0};
        RngStream rng(17);
        for (int k = 0; k < 10000; ++k) {
            const auto g = geodesic_step(kind, p, v, 0.05 + 0.2 * rng.next_double());
            p = g.point;
            v = g.dir;
            if (geodesic_distance(kind, p, base) > 1.5) {
                const double back = geodesic_distance(kind, p, base) - 0.5;
                const auto h = geodesic_step(kind, p, direction_toward(kind, p, base), back);
                p = h.point;
                v = h.dir;
            }
        }
        CHECK(std::fabs(model_constraint(kind, p)) < 1e-10);
        CHECK(std::fabs(surface_dot(kind, v, v) - 1.0) < 1e-10);
    }
}
