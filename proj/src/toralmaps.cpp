#include "lyaplab/toralmaps.hpp"

#include <cmath>

namespace lyaplab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TorusPoint standard_map(double K, const TorusPoint& y) {
    const double kick = K * std::sin(kTwoPi * y.y1);
    return {wrap_unit(y.y1 + y.y2 + kick), wrap_unit(y.y2 + kick)};
}

Mat2 standard_map_derivative(double K, const TorusPoint& y) {
    const double c = kTwoPi * K * std::cos(kTwoPi * y.y1);
    return {1.0 + c, 1.0, c, 1.0};
}

KickFunction KickFunction::sine(double K) {
    KickFunction k;
    k.name = "sine";
    k.value = [K](double y1) { return K * std::sin(kTwoPi * y1); };
    k.slope = [K](double y1) { return kTwoPi * K * std::cos(kTwoPi * y1); };
    return k;
}

KickFunction KickFunction::constant(double c) {
    KickFunction k;
    k.name = "constant";
    k.value = [c](double) { return c; };
    k.slope = [](double) { return 0.0; };
    return k;
}

TorusPoint gv_map(const KickFunction& kick, const TorusPoint& y) {
    const double v = kick.value(y.y1);
    return {wrap_unit(y.y1 + y.y2 + v), wrap_unit(y.y2 + v)};
}

Mat2 gv_map_derivative(const KickFunction& kick, const TorusPoint& y) {
    const double vp = kick.slope(y.y1);
    return {1.0 + vp, 1.0, vp, 1.0};
}

std::pair<TorusPoint, TorusPoint> two_step_sides(double K, double a, double b,
                                                 const TorusPoint& y) {
    // lhs: apply f_(0,a) then f_(0,b)
    TorusPoint z = standard_map(K, y);
    z.y2 = wrap_unit(z.y2 + a);
    z = standard_map(K, z);
    z.y2 = wrap_unit(z.y2 + b);

    // rhs: g_K^2 then translate by (a, a + b)
    TorusPoint w = standard_map(K, standard_map(K, y));
    w.y1 = wrap_unit(w.y1 + a);
    w.y2 = wrap_unit(w.y2 + a + b);

    return {z, w};
}

double trace_gk_squared(double K, const TorusPoint& y) {
    const double c0 = std::cos(kTwoPi * y.y1);
    const double y1_next = y.y1 + y.y2 + K * std::sin(kTwoPi * y.y1);
    const double c1 = std::cos(kTwoPi * y1_next);
    const double a = kTwoPi * K;
    return 2.0 + 2.0 * a * c0 + 2.0 * a * c1 + a * a * c0 * c1;
}

} // namespace lyaplab
