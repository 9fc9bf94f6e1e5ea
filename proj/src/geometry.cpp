#include "lyaplab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "lyaplab/errors.hpp"

namespace lyaplab {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;
constexpr int kSplineKnots = 4096;   // inverse arc-length spline resolution
constexpr int kIntegrationGrid = 8192;
constexpr int kConvexityGrid = 4096; // kappa > 0 verified on this grid
constexpr int kCoarseGrid = 512;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

} // namespace

int curvature_sign(SurfaceKind kind) {
    switch (kind) {
    case SurfaceKind::Euclidean: return 0;
    case SurfaceKind::Sphere: return 1;
    case SurfaceKind::Hyperbolic: return -1;
    }
    return 0;
}

std::string surface_name(SurfaceKind kind) {
    switch (kind) {
    case SurfaceKind::Euclidean: return "euclidean";
    case SurfaceKind::Sphere: return "sphere";
    case SurfaceKind::Hyperbolic: return "hyperbolic";
    }
    return "unknown";
}

double surface_dot(SurfaceKind kind, const Vec3& u, const Vec3& v) {
    return kind == SurfaceKind::Hyperbolic ? u.mdot(v) : u.dot(v);
}

GeodesicState geodesic_step(SurfaceKind kind, const Vec3& p, const Vec3& dir, double t) {
    switch (kind) {
    case SurfaceKind::Euclidean:
        return {p + dir * t, dir};
    case SurfaceKind::Sphere: {
        const double c = std::cos(t), s = std::sin(t);
        GeodesicState out{p * c + dir * s, dir * c - p * s};
        // re-project; keeps long compositions on the model
        out.point = out.point * (1.0 / out.point.norm());
        out.dir = out.dir - out.point * out.dir.dot(out.point);
        out.dir = out.dir * (1.0 / out.dir.norm());
        return out;
    }
    case SurfaceKind::Hyperbolic: {
        const double c = std::cosh(t), s = std::sinh(t);
        GeodesicState out{p * c + dir * s, dir * c + p * s};
        // re-project; the flow amplifies off-model rounding exponentially
        out.point = out.point * (1.0 / std::sqrt(-out.point.mdot(out.point)));
        out.dir = out.dir + out.point * out.dir.mdot(out.point);
        out.dir = out.dir * (1.0 / std::sqrt(out.dir.mdot(out.dir)));
        return out;
    }
    }
    return {p, dir};
}

double geodesic_distance(SurfaceKind kind, const Vec3& p, const Vec3& q) {
    switch (kind) {
    case SurfaceKind::Euclidean:
        return (p - q).norm();
    case SurfaceKind::Sphere:
        return std::atan2(p.cross(q).norm(), p.dot(q));
    case SurfaceKind::Hyperbolic: {
        // <p-q, p-q>_M = 4 sinh^2(d/2), stable for nearby points
        const Vec3 u = p - q;
        const double chord2 = std::max(0.0, u.mdot(u));
        return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
    }
    }
    return 0.0;
}

Vec3 surface_rot90(SurfaceKind kind, const Vec3& p, const Vec3& tangent) {
    switch (kind) {
    case SurfaceKind::Euclidean:
        return {-tangent.y, tangent.x, 0.0};
    case SurfaceKind::Sphere:
        return p.cross(tangent);
    case SurfaceKind::Hyperbolic:
        return p.mcross(tangent);
    }
    return {};
}

double GeodesicLine::side(const Vec3& q) const {
    switch (kind) {
    case SurfaceKind::Euclidean:
        return w.dot(q - base);
    case SurfaceKind::Sphere:
        return w.dot(q);
    case SurfaceKind::Hyperbolic:
        return w.mdot(q);
    }
    return 0.0;
}

double GeodesicLine::side_derivative(const Vec3& dq) const {
    return kind == SurfaceKind::Hyperbolic ? w.mdot(dq) : w.dot(dq);
}

GeodesicLine geodesic_line(SurfaceKind kind, const Vec3& p, const Vec3& dir) {
    GeodesicLine line;
    line.kind = kind;
    line.base = p;
    switch (kind) {
    case SurfaceKind::Euclidean:
        line.w = {-dir.y, dir.x, 0.0};
        break;
    case SurfaceKind::Sphere:
        line.w = p.cross(dir);
        break;
    case SurfaceKind::Hyperbolic:
        line.w = p.mcross(dir);
        break;
    }
    return line;
}

double unit_perimeter_disk_radius(SurfaceKind kind) {
    const double r = 1.0 / kTwoPi;
    switch (kind) {
    case SurfaceKind::Euclidean: return r;
    case SurfaceKind::Sphere: return std::asin(r);
    case SurfaceKind::Hyperbolic: return std::asinh(r);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Table internals

double Table::radial(double phi) const {
    return rho0_ * (1.0 + amp_ * std::cos(mode_ * phi));
}

double Table::radial_slope(double phi) const {
    return -rho0_ * amp_ * mode_ * std::sin(mode_ * phi);
}

Vec3 Table::generator_point(double phi) const {
    switch (gen_) {
    case Gen::Disk:
        break; // handled by caller
    case Gen::Ellipse:
        return {ell_a_ * std::cos(phi), ell_b_ * std::sin(phi), 0.0};
    case Gen::Perturbed: {
        const double rho = radial(phi);
        const double cp = std::cos(phi), sp = std::sin(phi);
        switch (kind_) {
        case SurfaceKind::Euclidean:
            return Vec3{rho * cp, rho * sp, 0.0} * scale_;
        case SurfaceKind::Sphere:
            return {std::sin(rho) * cp, std::sin(rho) * sp, std::cos(rho)};
        case SurfaceKind::Hyperbolic:
            return {std::sinh(rho) * cp, std::sinh(rho) * sp, std::cosh(rho)};
        }
        break;
    }
    }
    return {};
}

Vec3 Table::generator_velocity(double phi) const {
    switch (gen_) {
    case Gen::Disk:
        break;
    case Gen::Ellipse:
        return {-ell_a_ * std::sin(phi), ell_b_ * std::cos(phi), 0.0};
    case Gen::Perturbed: {
        const double rho = radial(phi);
        const double drho = radial_slope(phi);
        const double cp = std::cos(phi), sp = std::sin(phi);
        const Vec3 u{cp, sp, 0.0};
        const Vec3 du{-sp, cp, 0.0};
        switch (kind_) {
        case SurfaceKind::Euclidean:
            return (u * drho + du * rho) * scale_;
        case SurfaceKind::Sphere: {
            const Vec3 dcenter = Vec3{0, 0, -std::sin(rho)} + u * std::cos(rho);
            return dcenter * drho + du * std::sin(rho);
        }
        case SurfaceKind::Hyperbolic: {
            const Vec3 dcenter = Vec3{0, 0, std::sinh(rho)} + u * std::cosh(rho);
            return dcenter * drho + du * std::sinh(rho);
        }
        }
        break;
    }
    }
    return {};
}

double Table::phi_of_s(double s) const {
    s -= std::floor(s);
    const int n = kSplineKnots;
    double x = s * n;
    int i = static_cast<int>(x);
    if (i >= n) i = n - 1;
    const double u = x - i;
    const double h = 1.0 / n;
    const double p0 = phi_knots_[i], p1 = phi_knots_[i + 1];
    const double m0 = dphi_knots_[i] * h, m1 = dphi_knots_[i + 1] * h;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * m0 +
           (-2 * u3 + 3 * u2) * p1 + (u3 - u2) * m1;
}

Vec3 Table::position(double s) const {
    s -= std::floor(s);
    if (gen_ == Gen::Disk) {
        const double alpha = kTwoPi * s;
        const double ca = std::cos(alpha), sa = std::sin(alpha);
        switch (kind_) {
        case SurfaceKind::Euclidean:
            return {disk_radius_ * ca, disk_radius_ * sa, 0.0};
        case SurfaceKind::Sphere:
            return {std::sin(disk_radius_) * ca, std::sin(disk_radius_) * sa,
                    std::cos(disk_radius_)};
        case SurfaceKind::Hyperbolic:
            return {std::sinh(disk_radius_) * ca, std::sinh(disk_radius_) * sa,
                    std::cosh(disk_radius_)};
        }
    }
    return generator_point(phi_of_s(s));
}

Vec3 Table::tangent(double s) const {
    s -= std::floor(s);
    if (gen_ == Gen::Disk) {
        const double alpha = kTwoPi * s;
        return {-std::sin(alpha), std::cos(alpha), 0.0};
    }
    const double phi = phi_of_s(s);
    const Vec3 v = generator_velocity(phi);
    const double speed = std::sqrt(surface_dot(kind_, v, v));
    return v * (1.0 / speed);
}

double Table::curvature(double s) const {
    switch (gen_) {
    case Gen::Disk:
        return kappa_const_;
    case Gen::Ellipse: {
        const double phi = phi_of_s(s);
        const double sp = std::sin(phi), cp = std::cos(phi);
        const double g2 = ell_a_ * ell_a_ * sp * sp + ell_b_ * ell_b_ * cp * cp;
        return ell_a_ * ell_b_ / (g2 * std::sqrt(g2));
    }
    case Gen::Perturbed: {
        // 5-point central difference of the chart in s, paired with the
        // inward normal; extracts the geodesic component on every surface.
        const double h = 1e-4;
        const Vec3 pm2 = position(s - 2 * h), pm1 = position(s - h);
        const Vec3 p0 = position(s);
        const Vec3 pp1 = position(s + h), pp2 = position(s + 2 * h);
        const Vec3 acc = (pm2 * -1.0 + pm1 * 16.0 + p0 * -30.0 + pp1 * 16.0 + pp2 * -1.0) *
                         (1.0 / (12.0 * h * h));
        const Vec3 tau = tangent(s);
        const Vec3 n = surface_rot90(kind_, p0, tau);
        return surface_dot(kind_, acc, n) / (length_ * length_);
    }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Construction

Table build_table(const TableSpec& spec, SurfaceKind kind) {
    Table t;
    t.kind_ = kind;

    if (const auto* disk = std::get_if<DiskSpec>(&spec)) {
        if (!(disk->radius > 0.0))
            throw UnsupportedCombination("disk radius must be positive");
        t.gen_ = Table::Gen::Disk;
        switch (kind) {
        case SurfaceKind::Euclidean:
            // Any Euclidean disk rescales to the unit-perimeter one.
            t.disk_radius_ = 1.0 / kTwoPi;
            t.scale_ = t.disk_radius_ / disk->radius;
            t.length_ = 1.0;
            t.kappa_const_ = kTwoPi;
            break;
        case SurfaceKind::Sphere:
            if (disk->radius >= 0.5 * kPi)
                throw NonConvexSpec("spherical disk requires radius < pi/2");
            t.disk_radius_ = disk->radius;
            t.length_ = kTwoPi * std::sin(disk->radius);
            t.kappa_const_ = 1.0 / std::tan(disk->radius);
            break;
        case SurfaceKind::Hyperbolic:
            t.disk_radius_ = disk->radius;
            t.length_ = kTwoPi * std::sinh(disk->radius);
            t.kappa_const_ = 1.0 / std::tanh(disk->radius);
            break;
        }
        t.label_ = "disk(r=" + fmt(disk->radius) + "," + surface_name(kind) + ")";
    } else if (const auto* ell = std::get_if<EllipseSpec>(&spec)) {
        if (kind != SurfaceKind::Euclidean)
            throw UnsupportedCombination("ellipse tables exist only on the plane");
        if (!(ell->a >= ell->b && ell->b > 0.0))
            throw UnsupportedCombination("ellipse requires a >= b > 0");
        t.gen_ = Table::Gen::Ellipse;
        t.ell_a_ = ell->a;
        t.ell_b_ = ell->b;
        t.label_ = "ellipse(a=" + fmt(ell->a) + ",b=" + fmt(ell->b) + ")";
    } else {
        const auto& pd = std::get<PerturbedDiskSpec>(spec);
        if (!(pd.radius > 0.0))
            throw UnsupportedCombination("perturbed disk radius must be positive");
        if (pd.amplitude < 0.0)
            throw UnsupportedCombination("perturbation amplitude must be >= 0");
        if (pd.mode < 2)
            throw UnsupportedCombination("perturbation mode must be >= 2");
        if (kind == SurfaceKind::Sphere && pd.radius * (1.0 + pd.amplitude) >= 0.5 * kPi)
            throw NonConvexSpec("perturbed spherical disk must stay inside radius pi/2");
        t.gen_ = Table::Gen::Perturbed;
        t.rho0_ = pd.radius;
        t.amp_ = pd.amplitude;
        t.mode_ = pd.mode;
        t.label_ = "perturbed_disk(r=" + fmt(pd.radius) + ",eps=" + fmt(pd.amplitude) +
                   ",m=" + std::to_string(pd.mode) + "," + surface_name(kind) + ")";
    }

    if (t.gen_ != Table::Gen::Disk) {
        // Source-curve speed |dc0/dphi| before any rescaling.
        std::function<double(double)> speed0;
        if (t.gen_ == Table::Gen::Ellipse) {
            const double a = t.ell_a_, b = t.ell_b_;
            speed0 = [a, b](double phi) {
                const double sp = std::sin(phi), cp = std::cos(phi);
                return std::sqrt(a * a * sp * sp + b * b * cp * cp);
            };
        } else {
            const double rho0 = t.rho0_, amp = t.amp_;
            const int mode = t.mode_;
            const SurfaceKind k = kind;
            speed0 = [rho0, amp, mode, k](double phi) {
                const double rho = rho0 * (1.0 + amp * std::cos(mode * phi));
                const double drho = -rho0 * amp * mode * std::sin(mode * phi);
                double radial_metric = rho;
                if (k == SurfaceKind::Sphere) radial_metric = std::sin(rho);
                if (k == SurfaceKind::Hyperbolic) radial_metric = std::sinh(rho);
                return std::sqrt(drho * drho + radial_metric * radial_metric);
            };
        }

        // Cumulative source arc length on a fine grid (per-interval Simpson).
        const int m = kIntegrationGrid;
        const double hphi = kTwoPi / m;
        std::vector<double> cum(m + 1, 0.0);
        for (int j = 0; j < m; ++j) {
            const double a = j * hphi, b = a + hphi;
            cum[j + 1] = cum[j] + hphi / 6.0 * (speed0(a) + 4.0 * speed0(0.5 * (a + b)) + speed0(b));
        }
        const double total = cum[m];

        if (kind == SurfaceKind::Euclidean) {
            t.scale_ = 1.0 / total;
            t.length_ = 1.0;
            t.ell_a_ *= t.scale_;
            t.ell_b_ *= t.scale_;
        } else {
            t.scale_ = 1.0;
            t.length_ = total;
        }

        // Local Simpson refinement of the cumulative integral.
        auto cum_at = [&](double phi) {
            if (phi <= 0.0) return 0.0;
            if (phi >= kTwoPi) return total;
            const int j = std::min(static_cast<int>(phi / hphi), m - 1);
            const double a = j * hphi;
            const double d = phi - a;
            return cum[j] + d / 6.0 * (speed0(a) + 4.0 * speed0(a + 0.5 * d) + speed0(phi));
        };

        // Invert to uniform knots in normalized arc length.
        const int n = kSplineKnots;
        t.phi_knots_.resize(n + 1);
        t.dphi_knots_.resize(n + 1);
        int j = 0;
        for (int i = 0; i <= n; ++i) {
            const double target = total * static_cast<double>(i) / n;
            while (j < m - 1 && cum[j + 1] < target) ++j;
            double phi = hphi * (j + (target - cum[j]) / std::max(cum[j + 1] - cum[j], 1e-300));
            for (int it = 0; it < 30; ++it) {
                const double f = cum_at(phi) - target;
                const double step = f / speed0(phi);
                phi = std::clamp(phi - step, 0.0, kTwoPi);
                if (std::fabs(step) < 1e-15) break;
            }
            if (i == 0) phi = 0.0;
            if (i == n) phi = kTwoPi;
            t.phi_knots_[i] = phi;
            t.dphi_knots_[i] = total / speed0(phi);
        }
    }

    // Convexity on the verification grid.  The margin admits profiles whose
    // curvature touches zero at isolated points (finite-difference noise
    // there is ~1e-8) while still rejecting genuinely concave boundaries.
    constexpr double kConvexityMargin = -1e-6;
    for (int i = 0; i < kConvexityGrid; ++i) {
        const double s = static_cast<double>(i) / kConvexityGrid;
        if (!(t.curvature(s) > kConvexityMargin))
            throw NonConvexSpec("table has negative geodesic curvature near s=" + fmt(s) +
                                " (" + t.label_ + ")");
    }

    t.coarse_.resize(kCoarseGrid);
    for (int i = 0; i < kCoarseGrid; ++i)
        t.coarse_[i] = t.position(static_cast<double>(i) / kCoarseGrid);

    return t;
}

} // namespace lyaplab
