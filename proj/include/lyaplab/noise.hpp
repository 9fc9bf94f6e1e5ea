#pragma once

#include <string>

#include "lyaplab/linalg.hpp"
#include "lyaplab/rng.hpp"

namespace lyaplab {

enum class NoiseKind {
    Degenerate,       // point mass at 0 (deterministic baseline)
    UniformBall,      // uniform on the closed epsilon-ball, flat torus metric
    WrappedGaussian,  // independent N(0, sigma^2) coordinates, truncated at 6 sigma
    SingularVertical, // uniform on {0} x [-epsilon, epsilon]
};

struct NoiseModel {
    NoiseKind kind = NoiseKind::Degenerate;
    double epsilon = 0.0; // ball radius / vertical half-width
    double sigma = 0.0;   // gaussian scale

    static NoiseModel degenerate() { return {}; }
    static NoiseModel uniform_ball(double eps) {
        return {NoiseKind::UniformBall, eps, 0.0};
    }
    static NoiseModel wrapped_gaussian(double sigma) {
        return {NoiseKind::WrappedGaussian, 0.0, sigma};
    }
    static NoiseModel singular_vertical(double eps) {
        return {NoiseKind::SingularVertical, eps, 0.0};
    }

    /// Compact identifier used in CSV rows, e.g. "uniform_ball(0.05)".
    std::string label() const;
};

/// One i.i.d. draw of the torus translation x ~ nu.
Vec2 sample_noise(const NoiseModel& model, RngStream& rng);

} // namespace lyaplab
