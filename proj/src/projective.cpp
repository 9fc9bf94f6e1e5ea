#include "lyaplab/projective.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lyaplab/errors.hpp"
#include "lyaplab/parallel.hpp"
#include "lyaplab/stats.hpp"

namespace lyaplab {

namespace {
constexpr double kEigenlineTol = 1e-8;
constexpr double kScalarTol = 1e-10;      // entrywise tolerance for m == +-I
constexpr double kTraceMargin = 1e-8;     // strictness margin for 0 < |tr| < 2
constexpr double kFormResidualTol = 1e-6; // common quadratic form residual
} // namespace

double projective_wrap(double angle) {
    double a = angle - kProjectivePi * std::floor(angle / kProjectivePi);
    if (a >= kProjectivePi) a -= kProjectivePi;
    if (a < 0.0) a += kProjectivePi;
    return a;
}

double projective_distance(double a, double b) {
    const double d = std::fabs(projective_wrap(a) - projective_wrap(b));
    return std::min(d, kProjectivePi - d);
}

double project_line(const Mat2& m, double angle) {
    if (std::fabs(m.det()) <= 1e-14)
        throw SingularMatrix("projective action of a singular matrix");
    const Vec2 v{std::cos(angle), std::sin(angle)};
    const Vec2 w = m * v;
    return projective_wrap(std::atan2(w.y, w.x));
}

void AngleHistogram::add(double angle, double weight) {
    const double a = projective_wrap(angle);
    int i = static_cast<int>(a / kProjectivePi * kBins);
    if (i >= kBins) i = kBins - 1;
    mass_[i] += weight;
    total_ += weight;
}

double AngleHistogram::bin_mass(int i) const {
    return total_ > 0.0 ? mass_[i] / total_ : 0.0;
}

double AngleHistogram::bin_center(int i) {
    return (i + 0.5) * kProjectivePi / kBins;
}

double AngleHistogram::mass_within(double center, double radius) const {
    double acc = 0.0;
    for (int i = 0; i < kBins; ++i)
        if (projective_distance(bin_center(i), center) <= radius) acc += mass_[i];
    return total_ > 0.0 ? acc / total_ : 0.0;
}

double AngleHistogram::sample(RngStream& rng) const {
    const double u = rng.next_double() * total_;
    double acc = 0.0;
    for (int i = 0; i < kBins; ++i) {
        acc += mass_[i];
        if (u < acc || i == kBins - 1) {
            const double inner = rng.next_double();
            return (i + inner) * kProjectivePi / kBins;
        }
    }
    return 0.0;
}

double AngleHistogram::kuiper_distance(const AngleHistogram& other) const {
    double cum = 0.0, hi = 0.0, lo = 0.0;
    for (int i = 0; i < kBins; ++i) {
        cum += bin_mass(i) - other.bin_mass(i);
        hi = std::max(hi, cum);
        lo = std::min(lo, cum);
    }
    return hi - lo;
}

double AngleHistogram::uniform_discrepancy() const {
    const double flat = 1.0 / kBins;
    double cum = 0.0, hi = 0.0, lo = 0.0;
    for (int i = 0; i < kBins; ++i) {
        cum += bin_mass(i) - flat;
        hi = std::max(hi, cum);
        lo = std::min(lo, cum);
    }
    return hi - lo;
}

AngleHistogram stationary_measure(const RandomSystem& system, TorusPoint y0,
                                  long long n, RngStream& rng) {
    AngleHistogram hist;
    TorusPoint y = system.wrap(y0);
    double phi = 1.0; // generic start line, away from e_hat
    for (long long k = 0; k < kBurnInSteps + n; ++k) {
        const auto [gy, dgy] = system.step(y);
        phi = project_line(dgy, phi);
        const Vec2 x = system.draw(rng);
        y = system.wrap({gy.y1 + x.x, gy.y2 + x.y});
        if (k >= kBurnInSteps) hist.add(phi);
    }
    return hist;
}

double invariance_defect(const RandomSystem& system, const AngleHistogram& measure,
                         long long n_push, RngStream& rng) {
    AngleHistogram pushed;
    for (long long k = 0; k < n_push; ++k) {
        TorusPoint y{rng.next_double(),
                     system.second_lo + system.second_period * rng.next_double()};
        const auto [gy, dgy] = system.step(y);
        (void)gy;
        const double phi = measure.sample(rng);
        pushed.add(project_line(dgy, phi));
    }
    return measure.kuiper_distance(pushed);
}

// ---------------------------------------------------------------------------
// Classifier

std::string outcome_name(ClassifierOutcome o) {
    switch (o) {
    case ClassifierOutcome::PositiveExponentCertificate: return "PositiveExponentCertificate";
    case ClassifierOutcome::InvariantLineDetected: return "InvariantLineDetected";
    case ClassifierOutcome::CompactLikely: return "CompactLikely";
    case ClassifierOutcome::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

namespace {

bool is_plus_minus_identity(const Mat2& m) {
    const Mat2 dp = m - Mat2::identity();
    const Mat2 dm = m + Mat2::identity();
    return dp.norm_inf() <= kScalarTol || dm.norm_inf() <= kScalarTol;
}

bool is_scalar(const Mat2& m) {
    const double c = 0.5 * m.trace();
    return std::fabs(m.a11 - c) <= kScalarTol && std::fabs(m.a22 - c) <= kScalarTol &&
           std::fabs(m.a12) <= kScalarTol && std::fabs(m.a21) <= kScalarTol;
}

/// Real eigenlines of m (0, 1 or 2 angles).
std::vector<double> real_eigenlines(const Mat2& m) {
    std::vector<double> lines;
    const double tr = m.trace();
    const double disc = tr * tr - 4.0 * m.det();
    if (disc < 0.0) return lines;
    const double sq = std::sqrt(disc);
    for (const double lam : {0.5 * (tr + sq), 0.5 * (tr - sq)}) {
        // null vector of m - lam I from its larger row
        const double r1x = m.a11 - lam, r1y = m.a12;
        const double r2x = m.a21, r2y = m.a22 - lam;
        Vec2 v;
        if (std::hypot(r1x, r1y) >= std::hypot(r2x, r2y))
            v = {-r1y, r1x};
        else
            v = {-r2y, r2x};
        if (v.norm() < 1e-14) v = {1.0, 0.0}; // m is scalar: every line works
        lines.push_back(projective_wrap(std::atan2(v.y, v.x)));
        if (sq == 0.0) break;
    }
    return lines;
}

bool fixes_line(const Mat2& m, double angle) {
    const Vec2 v{std::cos(angle), std::sin(angle)};
    const Vec2 w = m * v;
    return std::fabs(w.cross(v)) <= kEigenlineTol * std::max(w.norm(), 1e-300);
}

} // namespace

ClassifierVerdict classify_matrices(const std::vector<std::pair<TorusPoint, Mat2>>& samples) {
    ClassifierVerdict verdict;

    std::optional<std::size_t> best_hyp, best_ell;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Mat2& m = samples[i].second;
        const double at = std::fabs(m.trace());
        if (at >= 2.0 && !is_plus_minus_identity(m)) {
            if (!best_hyp || at > std::fabs(samples[*best_hyp].second.trace())) best_hyp = i;
        }
        if (at > kTraceMargin && at < 2.0 - kTraceMargin) {
            if (!best_ell || at < std::fabs(samples[*best_ell].second.trace())) best_ell = i;
        }
    }

    auto witness = [&](std::size_t i) {
        return ClassifierWitness{samples[i].second, samples[i].first,
                                 samples[i].second.trace()};
    };

    if (best_hyp && best_ell) {
        verdict.outcome = ClassifierOutcome::PositiveExponentCertificate;
        verdict.hyperbolic_witness = witness(*best_hyp);
        verdict.elliptic_witness = witness(*best_ell);
        return verdict;
    }
    if (best_hyp) verdict.hyperbolic_witness = witness(*best_hyp);
    if (best_ell) verdict.elliptic_witness = witness(*best_ell);

    // common eigenline: candidates come from the first non-scalar matrix
    std::vector<double> candidates;
    bool all_scalar = true;
    for (const auto& [y, m] : samples) {
        (void)y;
        if (!is_scalar(m)) {
            all_scalar = false;
            candidates = real_eigenlines(m);
            break;
        }
    }
    if (all_scalar && !samples.empty()) {
        verdict.outcome = ClassifierOutcome::InvariantLineDetected;
        verdict.invariant_line_angle = 0.0;
        return verdict;
    }
    for (const double angle : candidates) {
        bool common = true;
        for (const auto& [y, m] : samples) {
            (void)y;
            if (!fixes_line(m, angle)) {
                common = false;
                break;
            }
        }
        if (common) {
            verdict.outcome = ClassifierOutcome::InvariantLineDetected;
            verdict.invariant_line_angle = angle;
            return verdict;
        }
    }

    // compact closure heuristic: all elliptic and a common invariant
    // positive-definite form solved by least squares over M^T P M = P
    bool all_elliptic = true;
    for (const auto& [y, m] : samples) {
        (void)y;
        if (std::fabs(m.trace()) >= 2.0) {
            all_elliptic = false;
            break;
        }
    }
    if (all_elliptic && !samples.empty()) {
        // unknowns (p11, p12, p22); rows of M^T P M - P = 0
        std::array<double, 9> ntn{};
        auto accumulate_row = [&](double r0, double r1, double r2) {
            const double row[3] = {r0, r1, r2};
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) ntn[3 * a + b] += row[a] * row[b];
        };
        for (const auto& [y, m] : samples) {
            (void)y;
            const double a = m.a11, b = m.a12, c = m.a21, d = m.a22;
            accumulate_row(a * a - 1.0, 2.0 * a * c, c * c);
            accumulate_row(a * b, a * d + b * c - 1.0, c * d);
            accumulate_row(b * b, 2.0 * b * d, d * d - 1.0);
        }
        const auto p = smallest_eigenvector_sym3(ntn);
        double p11 = p[0], p12 = p[1], p22 = p[2];
        if (p11 + p22 < 0.0) {
            p11 = -p11;
            p12 = -p12;
            p22 = -p22;
        }
        const bool positive = p11 > 0.0 && p11 * p22 - p12 * p12 > 0.0;
        if (positive) {
            double residual = 0.0;
            for (const auto& [y, m] : samples) {
                (void)y;
                const Mat2 form{p11, p12, p12, p22};
                const Mat2 err = m.transpose() * form * m - form;
                residual = std::max(residual, err.norm_inf());
            }
            if (residual < kFormResidualTol) {
                verdict.outcome = ClassifierOutcome::CompactLikely;
                return verdict;
            }
        }
    }

    verdict.outcome = ClassifierOutcome::Inconclusive;
    return verdict;
}

ClassifierVerdict classify_toral(const std::function<Mat2(const TorusPoint&)>& field,
                                 int grid, bool parallel) {
    std::vector<std::pair<TorusPoint, Mat2>> samples(static_cast<std::size_t>(grid) * grid);
    for_each_index(static_cast<std::int64_t>(grid) * grid, parallel, [&](std::int64_t idx) {
        const int i = static_cast<int>(idx / grid);
        const int j = static_cast<int>(idx % grid);
        const TorusPoint y{static_cast<double>(i) / grid, static_cast<double>(j) / grid};
        samples[static_cast<std::size_t>(idx)] = {y, field(y)};
    });
    return classify_matrices(samples);
}

ClassifierVerdict classify_billiard(const Table& table, int grid, bool parallel) {
    std::vector<std::pair<TorusPoint, Mat2>> samples(static_cast<std::size_t>(grid) * grid);
    for_each_index(static_cast<std::int64_t>(grid) * grid, parallel, [&](std::int64_t idx) {
        const int i = static_cast<int>(idx / grid);
        const int j = static_cast<int>(idx % grid);
        const TorusPoint y{(i + 0.5) / grid, -1.0 + 2.0 * (j + 0.5) / grid};
        const auto [next, m] = torus_step_with_derivative(table, y);
        (void)next;
        samples[static_cast<std::size_t>(idx)] = {y, m};
    });
    return classify_matrices(samples);
}

std::string ClassifierVerdict::describe() const {
    char buf[256];
    std::string out = "verdict: " + outcome_name(outcome) + "\n";
    auto show = [&](const char* tag, const ClassifierWitness& w) {
        std::snprintf(buf, sizeof(buf),
                      "%s: base=(%.6f, %.6f) trace=%.10g matrix=[[%.10g, %.10g], [%.10g, %.10g]]\n",
                      tag, w.base.y1, w.base.y2, w.trace, w.matrix.a11, w.matrix.a12,
                      w.matrix.a21, w.matrix.a22);
        out += buf;
    };
    if (hyperbolic_witness) show("hyperbolic_witness", *hyperbolic_witness);
    if (elliptic_witness) show("elliptic_witness", *elliptic_witness);
    if (invariant_line_angle) {
        std::snprintf(buf, sizeof(buf), "invariant_line_angle=%.10g\n", *invariant_line_angle);
        out += buf;
    }
    return out;
}

} // namespace lyaplab
