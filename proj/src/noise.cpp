#include "lyaplab/noise.hpp"

#include <cmath>
#include <cstdio>

namespace lyaplab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Box-Muller pair, resampled until both coordinates fall inside 6 sigma.
/// Truncation keeps the support bounded; the discarded tail mass is < 1e-8.
void truncated_normal_pair(RngStream& rng, double& z1, double& z2) {
    for (;;) {
        double u1 = rng.next_double();
        if (u1 <= 0.0) continue;
        const double u2 = rng.next_double();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        z1 = rad * std::cos(kTwoPi * u2);
        z2 = rad * std::sin(kTwoPi * u2);
        if (std::fabs(z1) <= 6.0 && std::fabs(z2) <= 6.0) return;
    }
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

} // namespace

std::string NoiseModel::label() const {
    switch (kind) {
    case NoiseKind::Degenerate: return "degenerate";
    case NoiseKind::UniformBall: return "uniform_ball(" + fmt(epsilon) + ")";
    case NoiseKind::WrappedGaussian: return "wrapped_gaussian(" + fmt(sigma) + ")";
    case NoiseKind::SingularVertical: return "singular_vertical(" + fmt(epsilon) + ")";
    }
    return "unknown";
}

Vec2 sample_noise(const NoiseModel& model, RngStream& rng) {
    switch (model.kind) {
    case NoiseKind::Degenerate:
        return {0.0, 0.0};
    case NoiseKind::UniformBall: {
        // Rejection from the bounding square; acceptance ratio pi/4.
        const double eps = model.epsilon;
        for (;;) {
            const double u = eps * rng.next_symmetric();
            const double v = eps * rng.next_symmetric();
            if (u * u + v * v <= eps * eps) return {u, v};
        }
    }
    case NoiseKind::WrappedGaussian: {
        double z1 = 0.0, z2 = 0.0;
        truncated_normal_pair(rng, z1, z2);
        return {model.sigma * z1, model.sigma * z2};
    }
    case NoiseKind::SingularVertical:
        return {0.0, model.epsilon * rng.next_symmetric()};
    }
    return {0.0, 0.0};
}

} // namespace lyaplab
