#pragma once

#include "lyaplab/geometry.hpp"
#include "lyaplab/linalg.hpp"
#include "lyaplab/toralmaps.hpp"

namespace lyaplab {

/// States with theta (or pi - theta) below this are treated as boundary
/// states: the map is the identity there and the derivative takes the
/// grazing-limit form.
constexpr double kGrazingTheta = 1e-9;
constexpr double kGrazingR = 1e-9;

/// A collision, stored both as (s, theta) and (s, r) with r = -cos(theta).
struct CollisionState {
    double s = 0.0;     // normalized arc length in [0, 1)
    double theta = 0.0; // reflection angle in [0, pi]
    double r = 0.0;     // -cos(theta)

    static CollisionState from_angle(double s, double theta);
    static CollisionState from_r(double s, double r);

    bool grazing() const {
        return theta < kGrazingTheta || theta > 3.14159265358979323846 - kGrazingTheta;
    }
};

struct CollisionResult {
    CollisionState next;
    double flight = 0.0; // geodesic distance between the collision points
};

/// Next collision of the geodesic leaving arc position s at angle theta.
/// Grazing states return themselves with flight 0.
CollisionResult collide(const Table& table, const CollisionState& state);

/// Derivative of the billiard map in (arc length, theta) coordinates, in
/// true arc-length units (multiply through the table's perimeter to convert
/// to the normalized parameter).  At grazing states returns the limit
/// [[1, 2/kappa(s)], [0, 1]].  det = sin(theta)/sin(theta1).
Mat2 derivative_stheta(const Table& table, const CollisionState& state,
                       const CollisionResult& result);

/// Derivative in (arc length, r) coordinates: conjugation of
/// derivative_stheta by diag(1, sin theta); det = 1 on interior states.
Mat2 derivative_sr(const Table& table, const CollisionState& state,
                   const CollisionResult& result);

/// Billiard map on the torus R/Z x R/2Z with fundamental domain
/// [0,1) x [-1,1); the circle r = -1 is fixed pointwise.
TorusPoint torus_step(const Table& table, const TorusPoint& y);

/// One torus step together with the (s, r) derivative cocycle of that step.
/// Grazing states map to themselves with the identity cocycle.
std::pair<TorusPoint, Mat2> torus_step_with_derivative(const Table& table,
                                                       const TorusPoint& y);

} // namespace lyaplab
