#pragma once

#include <stdexcept>
#include <string>

namespace lyaplab {

/// A table spec whose boundary fails strict convexity (kappa <= 0 somewhere).
struct NonConvexSpec : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A table spec that is not meaningful on the requested surface.
struct UnsupportedCombination : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The next-collision solver could not bracket a boundary crossing.
struct RootFindFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An interior state produced a numerically grazing image angle.
struct DegenerateAngle : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Projective action requested for a matrix with |det| below tolerance.
struct SingularMatrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Cocycle block overflowed before renormalization.
struct NonFiniteAccumulator : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Occupancy grid holds too few samples for the requested test.
struct InsufficientSamples : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad or unknown experiment configuration key/value.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace lyaplab
