#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lyaplab/linalg.hpp"
#include "lyaplab/rds.hpp"

namespace lyaplab {

/// Lines through the origin of R^2, represented by the angle in [0, pi) of a
/// spanning vector.  e_hat = [1:0] is the angle 0.
constexpr double kProjectivePi = 3.14159265358979323846264338328;

/// Reduce an angle mod pi into [0, pi).
double projective_wrap(double angle);

/// Metric on P^1: d(a, b) = min(|a-b|, pi - |a-b|).
double projective_distance(double a, double b);

/// Induced action of an invertible matrix on P^1.
/// Throws SingularMatrix when |det| <= 1e-14.
double project_line(const Mat2& m, double angle);

/// Circular histogram over P^1 with 512 bins; total mass normalized to 1.
class AngleHistogram {
public:
    static constexpr int kBins = 512;

    void add(double angle, double weight = 1.0);
    double total_weight() const { return total_; }

    /// Normalized mass of the bin.
    double bin_mass(int i) const;
    static double bin_center(int i);

    /// Mass within projective distance `radius` of `center`.
    double mass_within(double center, double radius) const;

    /// Draw an angle from the histogram (bin by mass, uniform inside).
    double sample(RngStream& rng) const;

    /// Kolmogorov-Smirnov distance maximized over rotations of the circle
    /// (equivalently the range of the cumulative mass difference).
    double kuiper_distance(const AngleHistogram& other) const;

    /// Sup-distance of the empirical CDF from the uniform law, maximized
    /// over rotations.
    double uniform_discrepancy() const;

private:
    std::array<double, kBins> mass_{};
    double total_ = 0.0;
};

/// Empirical stationary measure of the projective pair chain
/// (y, phi) -> (f_x(y), Dg(y) . phi), pooled over the base point.
AngleHistogram stationary_measure(const RandomSystem& system, TorusPoint y0,
                                  long long n, RngStream& rng);

/// Pushforward invariance defect of a candidate stationary measure: sample
/// (y, phi) with y uniform and phi ~ measure, push phi by Dg(y), and return
/// the rotation-maximized KS distance between the pushed and original laws.
double invariance_defect(const RandomSystem& system, const AngleHistogram& measure,
                         long long n_push, RngStream& rng);

// ---------------------------------------------------------------------------
// Furstenberg positivity classifier

enum class ClassifierOutcome {
    PositiveExponentCertificate,
    InvariantLineDetected,
    CompactLikely,
    Inconclusive,
};

std::string outcome_name(ClassifierOutcome o);

struct ClassifierWitness {
    Mat2 matrix;
    TorusPoint base;
    double trace = 0.0;
};

struct ClassifierVerdict {
    ClassifierOutcome outcome = ClassifierOutcome::Inconclusive;
    std::optional<ClassifierWitness> hyperbolic_witness; // |tr| >= 2, not +-I
    std::optional<ClassifierWitness> elliptic_witness;   // 0 < |tr| < 2
    std::optional<double> invariant_line_angle;
    std::string describe() const;
};

/// Scan the derivative field on a lattice of base points and classify the
/// support of the derivative pushforward:
///   - both witnesses present        -> PositiveExponentCertificate
///   - common eigenline (to 1e-8)    -> InvariantLineDetected
///   - all |tr| < 2 and a common positive-definite quadratic form
///     (least-squares residual < 1e-6) -> CompactLikely
///   - otherwise                     -> Inconclusive
/// The hyperbolic witness maximizes |tr|; the elliptic one minimizes it.
ClassifierVerdict classify_matrices(const std::vector<std::pair<TorusPoint, Mat2>>& samples);

/// Lattice helpers: toral maps are scanned on (i/grid, j/grid) including the
/// origin; billiard tables on cell-centered interior points of [0,1)x(-1,1).
ClassifierVerdict classify_toral(const std::function<Mat2(const TorusPoint&)>& field,
                                 int grid, bool parallel = true);
ClassifierVerdict classify_billiard(const Table& table, int grid, bool parallel = true);

} // namespace lyaplab
