#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lyaplab/billiard.hpp"
#include "lyaplab/linalg.hpp"
#include "lyaplab/noise.hpp"
#include "lyaplab/rng.hpp"
#include "lyaplab/toralmaps.hpp"

namespace lyaplab {

/// Steps discarded before any accumulation starts.
constexpr long long kBurnInSteps = 1000;

/// Batches used for standard-error estimation.
constexpr int kBatchCount = 50;

/// A base map g on the torus together with its derivative cocycle and the
/// noise law driving the random composition f_x = tau_x o g.  The derivative
/// of every random step equals Dg at the pre-image (translations have
/// identity derivative), so only Dg is carried.
struct RandomSystem {
    std::string id;
    std::function<std::pair<TorusPoint, Mat2>(const TorusPoint&)> step; // (g(y), Dg(y))
    double second_lo = 0.0;     // fundamental interval of y2 is [lo, lo + period)
    double second_period = 1.0;
    NoiseModel noise;
    std::function<Vec2(RngStream&)> sampler; // defaults to sample_noise(noise, .)

    TorusPoint wrap(const TorusPoint& y) const {
        return {wrap_unit(y.y1), wrap_into(y.y2, second_lo, second_period)};
    }
    Vec2 draw(RngStream& rng) const {
        return sampler ? sampler(rng) : sample_noise(noise, rng);
    }

    static RandomSystem standard(double K, const NoiseModel& noise);
    static RandomSystem gv(const KickFunction& kick, const NoiseModel& noise);
    static RandomSystem billiard(std::shared_ptr<const Table> table, const NoiseModel& noise);
};

struct LyapunovEstimate {
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    double std_error = 0.0; // batch-means standard error of lambda_plus
    long long n_steps = 0;
    int renorm_interval = 1;
    std::vector<double> batch_rates; // per-batch lambda_plus rates (diagnostics)
};

/// Random orbit y, f_{x0}(y), f_{x1}(f_{x0}(y)), ... of length n + 1.
std::vector<TorusPoint> random_orbit(const RandomSystem& system, TorusPoint y0,
                                     long long n, RngStream& rng);

/// Lyapunov exponents from QR accumulation of the derivative cocycle along
/// one random orbit.  Both QR diagonal logs are accumulated, giving the
/// maximal and minimal exponent simultaneously; the matrix block between
/// re-orthonormalizations spans `renorm_interval` steps.
LyapunovEstimate estimate_lyapunov(const RandomSystem& system, TorusPoint y0,
                                   long long n, int renorm_interval, RngStream& rng);

/// Reference estimator: straight matrix product with explicit rescaling and
/// no QR.  Kept as the independent cross-check for estimate_lyapunov.
LyapunovEstimate estimate_lyapunov_brute(const RandomSystem& system, TorusPoint y0,
                                         long long n, RngStream& rng);

/// Lyapunov exponent of the standard map driven by singular vertical noise,
/// estimated two ways: `direct` runs n steps of the nu-random perturbation
/// of g_K; `reduced` runs n/2 steps of the pushed-forward nu'-random
/// perturbation of g_K^2, where noise pairs (a, b) become translations
/// (a, a + b).  The reduced estimate is returned per single step (already
/// halved), so the two values are directly comparable.
std::pair<LyapunovEstimate, LyapunovEstimate>
estimate_lyapunov_singular(double K, double epsilon, TorusPoint y0, long long n,
                           int renorm_interval, RngStream& rng);

} // namespace lyaplab
