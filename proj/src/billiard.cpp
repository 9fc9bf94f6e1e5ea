#include "lyaplab/billiard.hpp"

#include <cmath>
#include <optional>

#include "lyaplab/errors.hpp"

namespace lyaplab {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr int kCoarseGrid = 512;
constexpr double kBisectTol = 1e-12;
constexpr int kBisectBudget = 64;
constexpr int kNewtonPolish = 3;

struct RootCandidate {
    double u = 0.0;      // boundary parameter of the crossing
    double flight = 0.0; // forward geodesic distance
};

/// Forward flight time from (p, d) to boundary point q, or nothing if q lies
/// behind the ray.
std::optional<double> forward_flight(SurfaceKind kind, const Vec3& p, const Vec3& d,
                                     const Vec3& q) {
    switch (kind) {
    case SurfaceKind::Euclidean: {
        const Vec3 diff = q - p;
        const double proj = diff.dot(d);
        if (proj <= 0.0) return std::nullopt;
        return diff.norm();
    }
    case SurfaceKind::Sphere: {
        const double t = std::atan2(q.dot(d), q.dot(p));
        if (t <= 0.0) return std::nullopt;
        return t;
    }
    case SurfaceKind::Hyperbolic: {
        const double sinh_t = q.mdot(d);
        if (sinh_t <= 0.0) return std::nullopt;
        return std::asinh(sinh_t);
    }
    }
    return std::nullopt;
}

Vec3 arrival_direction(SurfaceKind kind, const Vec3& p, const Vec3& d, double t) {
    switch (kind) {
    case SurfaceKind::Euclidean:
        return d;
    case SurfaceKind::Sphere:
        return d * std::cos(t) - p * std::sin(t);
    case SurfaceKind::Hyperbolic:
        return d * std::cosh(t) + p * std::sinh(t);
    }
    return d;
}

int sign_of(double v) { return v >= 0.0 ? 1 : -1; }

} // namespace

CollisionState CollisionState::from_angle(double s, double theta) {
    CollisionState st;
    st.s = wrap_unit(s);
    st.theta = theta;
    st.r = -std::cos(theta);
    return st;
}

CollisionState CollisionState::from_r(double s, double r) {
    CollisionState st;
    st.s = wrap_unit(s);
    st.r = r;
    st.theta = std::acos(-r);
    return st;
}

CollisionResult collide(const Table& table, const CollisionState& state) {
    if (state.grazing()) return {state, 0.0};

    const SurfaceKind kind = table.surface();
    const Vec3 p = table.position(state.s);
    const Vec3 tau = table.tangent(state.s);
    const Vec3 nrm = surface_rot90(kind, p, tau);
    const Vec3 d = tau * std::cos(state.theta) + nrm * std::sin(state.theta);
    const GeodesicLine line = geodesic_line(kind, p, d);

    auto h = [&](double u) { return line.side(table.position(u)); };
    // d/du of h; the chart moves at speed length() in the normalized parameter
    auto hprime = [&](double u) {
        return line.side_derivative(table.tangent(u)) * table.length();
    };

    // Sign of h immediately after / before the start point s (transversal
    // crossing, so the limit sign is the sign of h'(s)).
    const int sign_after = sign_of(hprime(state.s));
    const int sign_before = -sign_after;

    auto bisect = [&](double lo, double hi, int sign_lo) {
        for (int it = 0; it < kBisectBudget && hi - lo > kBisectTol; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (sign_of(h(mid)) == sign_lo)
                lo = mid;
            else
                hi = mid;
        }
        double u = 0.5 * (lo + hi);
        for (int it = 0; it < kNewtonPolish; ++it) {
            const double dh = hprime(u);
            if (dh == 0.0) break;
            const double next = u - h(u) / dh;
            if (next > lo && next < hi) u = next;
        }
        return u;
    };

    // Coarse sweep over the fixed 512-point lattice; the cell holding the
    // start point is split at s so that its own root does not mask a nearby
    // crossing (short chords near grazing live in the same cell).
    const auto& coarse = table.coarse_points();
    const int cell_of_start = std::min(static_cast<int>(state.s * kCoarseGrid), kCoarseGrid - 1);

    std::optional<RootCandidate> best;
    auto consider = [&](double u) {
        const Vec3 q = table.position(u);
        const auto t = forward_flight(kind, p, d, q);
        if (!t || *t <= 0.0) return;
        // only exit crossings qualify; this rejects the start point when it
        // coincides with a lattice sample (its arrival direction still
        // points inward)
        const Vec3 dq = arrival_direction(kind, p, d, *t);
        const Vec3 nq = surface_rot90(kind, q, table.tangent(u));
        if (surface_dot(kind, dq, nq) >= 0.0) return;
        if (!best || *t < best->flight) best = RootCandidate{wrap_unit(u), *t};
    };

    int prev_sign = 0;
    for (int j = 0; j <= kCoarseGrid; ++j) {
        const int jm = j % kCoarseGrid;
        const double uj = static_cast<double>(j) / kCoarseGrid;
        const int sj = sign_of(line.side(coarse[jm]));
        if (j > 0) {
            const double ulo = static_cast<double>(j - 1) / kCoarseGrid;
            if (j - 1 == cell_of_start) {
                // left part [ulo, s): ends with the before-start sign
                if (state.s > ulo && prev_sign != sign_before)
                    consider(bisect(ulo, state.s, prev_sign));
                // right part (s, uj]: starts with the after-start sign
                if (uj > state.s && sj != sign_after)
                    consider(bisect(state.s, uj, sign_after));
            } else if (sj != prev_sign) {
                consider(bisect(ulo, uj, prev_sign));
            }
        }
        prev_sign = sj;
    }

    if (!best)
        throw RootFindFailure("no forward boundary crossing found from s=" +
                              std::to_string(state.s) + " theta=" + std::to_string(state.theta));

    const double u1 = best->u;
    const double t = best->flight;
    const Vec3 q = table.position(u1);
    const Vec3 d1 = arrival_direction(kind, p, d, t);
    const Vec3 tau1 = table.tangent(u1);
    const Vec3 n1 = surface_rot90(kind, q, tau1);
    const double sin1 = -surface_dot(kind, d1, n1);
    const double cos1 = surface_dot(kind, d1, tau1);
    double theta1 = std::atan2(std::max(sin1, 0.0), cos1);
    if (theta1 < 0.0) theta1 = 0.0;
    if (theta1 > kPi) theta1 = kPi;

    return {CollisionState::from_angle(u1, theta1), t};
}

Mat2 derivative_stheta(const Table& table, const CollisionState& state,
                       const CollisionResult& result) {
    const double kappa = table.curvature(state.s);
    if (state.grazing()) return Mat2::shear(2.0 / kappa);

    const double theta = state.theta;
    const double theta1 = result.next.theta;
    const double sin0 = std::sin(theta);
    const double sin1 = std::sin(theta1);
    if (sin1 < 1e-12)
        throw DegenerateAngle("interior state mapped to grazing angle");

    const double kappa1 = table.curvature(result.next.s);
    const double t = result.flight;
    const int K = curvature_sign(table.surface());

    // generalized sine/cosine of the flight: C^2 + K S^2 = 1
    double S = t, C = 1.0;
    if (K == 1) {
        S = std::sin(t);
        C = std::cos(t);
    } else if (K == -1) {
        S = std::sinh(t);
        C = std::cosh(t);
    }

    Mat2 m;
    m.a11 = (kappa * S - C * sin0) / sin1;
    m.a12 = S / sin1;
    m.a21 = (S * (kappa * kappa1 - K * sin0 * sin1) - C * (kappa1 * sin0 + kappa * sin1)) / sin1;
    m.a22 = (kappa1 * S - C * sin1) / sin1;
    return m;
}

Mat2 derivative_sr(const Table& table, const CollisionState& state,
                   const CollisionResult& result) {
    const Mat2 m = derivative_stheta(table, state, result);
    if (state.grazing()) return m; // limit form is already unimodular
    const double sin0 = std::sin(state.theta);
    const double sin1 = std::sin(result.next.theta);
    // diag(1, sin theta1) * m * diag(1, 1/sin theta)
    return {m.a11, m.a12 / sin0, m.a21 * sin1, m.a22 * sin1 / sin0};
}

TorusPoint torus_step(const Table& table, const TorusPoint& y) {
    return torus_step_with_derivative(table, y).first;
}

std::pair<TorusPoint, Mat2> torus_step_with_derivative(const Table& table,
                                                       const TorusPoint& y) {
    const double s = wrap_unit(y.y1);
    const double r = wrap_into(y.y2, -1.0, 2.0);
    if (r < -1.0 + kGrazingR || r > 1.0 - kGrazingR)
        return {{s, r}, Mat2::identity()};

    const CollisionState state = CollisionState::from_r(s, r);
    const CollisionResult res = collide(table, state);
    const Mat2 m = derivative_sr(table, state, res);
    return {{res.next.s, res.next.r}, m};
}

} // namespace lyaplab
