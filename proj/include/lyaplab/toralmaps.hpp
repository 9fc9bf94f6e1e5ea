#pragma once

#include <functional>
#include <string>
#include <utility>

#include "lyaplab/linalg.hpp"

namespace lyaplab {

/// Point of the 2-torus.  y1 always lives mod 1; y2 lives mod 1 for kicked
/// maps and mod 2 on [-1, 1) for the billiard torus (callers carry the
/// period, see wrap_into).
struct TorusPoint {
    double y1 = 0.0;
    double y2 = 0.0;
};

/// Reduce into [0, 1).
inline double wrap_unit(double x) { return x - std::floor(x); }

/// Reduce into [lo, lo + period).
inline double wrap_into(double x, double lo, double period) {
    return lo + (x - lo) - period * std::floor((x - lo) / period);
}

/// Signed shortest representative of a - b on a circle of given period.
inline double torus_delta(double a, double b, double period) {
    double d = a - b;
    d -= period * std::round(d / period);
    return d;
}

/// Kicked twist map (y1, y2) -> (y1 + y2 + K sin(2 pi y1), y2 + K sin(2 pi y1)).
TorusPoint standard_map(double K, const TorusPoint& y);

/// Derivative [[1 + c, 1], [c, 1]] with c = 2 pi K cos(2 pi y1); det = 1.
Mat2 standard_map_derivative(double K, const TorusPoint& y);

/// Smooth periodic kick V with closed-form slope V'.
struct KickFunction {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> slope;

    static KickFunction sine(double K);
    static KickFunction constant(double c);
};

/// Generalized kicked map (y1, y2) -> (y1 + y2 + V(y1), y2 + V(y1)).
TorusPoint gv_map(const KickFunction& kick, const TorusPoint& y);

/// Derivative [[1 + V'(y1), 1], [V'(y1), 1]]; det = 1, trace = 2 + V'(y1).
Mat2 gv_map_derivative(const KickFunction& kick, const TorusPoint& y);

/// Both sides of the two-step identity
///   f_(0,b) o f_(0,a) = tau_(a, a+b) o g_K^2
/// evaluated at y, where f_x = tau_x o g_K.  They agree up to rounding.
std::pair<TorusPoint, TorusPoint> two_step_sides(double K, double a, double b,
                                                 const TorusPoint& y);

/// Closed-form trace of D(g_K^2) at y.
double trace_gk_squared(double K, const TorusPoint& y);

} // namespace lyaplab
