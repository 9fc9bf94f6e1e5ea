#include "lyaplab/rds.hpp"

#include <cmath>
#include <cstdio>

#include "lyaplab/errors.hpp"
#include "lyaplab/stats.hpp"

namespace lyaplab {

namespace {

std::string fmt_param(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

/// Givens QR of a 2x2 matrix: returns the rotation Q and r11 = |first
/// column|.  log|r22| is recovered from the step determinants by the caller;
/// forming r22 directly loses it to cancellation once the block norm grows.
struct QrStep {
    Mat2 q;
    double r11 = 0.0;
};

QrStep givens_qr(const Mat2& b) {
    QrStep out;
    const double rho = std::hypot(b.a11, b.a21);
    if (rho == 0.0) {
        out.q = Mat2::identity();
        out.r11 = 0.0;
        return out;
    }
    const double c = b.a11 / rho;
    const double s = b.a21 / rho;
    out.q = {c, -s, s, c};
    out.r11 = rho;
    return out;
}

} // namespace

RandomSystem RandomSystem::standard(double K, const NoiseModel& noise) {
    RandomSystem sys;
    sys.id = "standard(K=" + fmt_param(K) + ")";
    sys.step = [K](const TorusPoint& y) {
        return std::make_pair(standard_map(K, y), standard_map_derivative(K, y));
    };
    sys.noise = noise;
    return sys;
}

RandomSystem RandomSystem::gv(const KickFunction& kick, const NoiseModel& noise) {
    RandomSystem sys;
    sys.id = "gv(" + kick.name + ")";
    sys.step = [kick](const TorusPoint& y) {
        return std::make_pair(gv_map(kick, y), gv_map_derivative(kick, y));
    };
    sys.noise = noise;
    return sys;
}

RandomSystem RandomSystem::billiard(std::shared_ptr<const Table> table,
                                    const NoiseModel& noise) {
    RandomSystem sys;
    sys.id = "billiard[" + table->label() + "]";
    sys.step = [table](const TorusPoint& y) {
        return torus_step_with_derivative(*table, y);
    };
    sys.second_lo = -1.0;
    sys.second_period = 2.0;
    sys.noise = noise;
    return sys;
}

std::vector<TorusPoint> random_orbit(const RandomSystem& system, TorusPoint y0,
                                     long long n, RngStream& rng) {
    std::vector<TorusPoint> orbit;
    orbit.reserve(static_cast<std::size_t>(n) + 1);
    TorusPoint y = system.wrap(y0);
    orbit.push_back(y);
    for (long long k = 0; k < n; ++k) {
        const auto [gy, dgy] = system.step(y);
        (void)dgy;
        const Vec2 x = system.draw(rng);
        y = system.wrap({gy.y1 + x.x, gy.y2 + x.y});
        orbit.push_back(y);
    }
    return orbit;
}

LyapunovEstimate estimate_lyapunov(const RandomSystem& system, TorusPoint y0,
                                   long long n, int renorm_interval, RngStream& rng) {
    LyapunovEstimate est;
    est.n_steps = n;
    est.renorm_interval = renorm_interval;

    TorusPoint y = system.wrap(y0);
    for (long long k = 0; k < kBurnInSteps; ++k) {
        const auto [gy, dgy] = system.step(y);
        (void)dgy;
        const Vec2 x = system.draw(rng);
        y = system.wrap({gy.y1 + x.x, gy.y2 + x.y});
    }

    Mat2 q = Mat2::identity();
    double acc_plus = 0.0;
    double acc_minus = 0.0;
    std::vector<double> batch_plus(kBatchCount, 0.0);
    std::vector<long long> batch_len(kBatchCount, 0);

    long long done = 0;
    while (done < n) {
        const int block = static_cast<int>(std::min<long long>(renorm_interval, n - done));
        Mat2 c = Mat2::identity();
        double block_logdet = 0.0;
        for (int j = 0; j < block; ++j) {
            const auto [gy, dgy] = system.step(y);
            c = dgy * c;
            block_logdet += std::log(std::fabs(dgy.det()));
            const Vec2 x = system.draw(rng);
            y = system.wrap({gy.y1 + x.x, gy.y2 + x.y});
        }
        const Mat2 b = c * q;
        if (!b.finite())
            throw NonFiniteAccumulator("cocycle block overflowed; reduce renorm_interval");
        const QrStep qr = givens_qr(b);
        q = qr.q;
        const double lp = std::log(std::fabs(qr.r11));
        const double lm = block_logdet - lp; // log|r22| = log|det| - log r11
        acc_plus += lp;
        acc_minus += lm;

        const int bi = static_cast<int>(std::min<long long>(
            kBatchCount - 1, (done + block - 1) * kBatchCount / n));
        batch_plus[bi] += lp;
        batch_len[bi] += block;
        done += block;
    }

    est.lambda_plus = acc_plus / static_cast<double>(n);
    est.lambda_minus = acc_minus / static_cast<double>(n);
    est.batch_rates.resize(kBatchCount, 0.0);
    std::vector<double> rates;
    rates.reserve(kBatchCount);
    for (int i = 0; i < kBatchCount; ++i) {
        if (batch_len[i] > 0) {
            est.batch_rates[i] = batch_plus[i] / static_cast<double>(batch_len[i]);
            rates.push_back(est.batch_rates[i]);
        }
    }
    est.std_error = batch_means(rates).std_error;
    return est;
}

LyapunovEstimate estimate_lyapunov_brute(const RandomSystem& system, TorusPoint y0,
                                         long long n, RngStream& rng) {
    LyapunovEstimate est;
    est.n_steps = n;
    est.renorm_interval = 0;

    TorusPoint y = system.wrap(y0);
    for (long long k = 0; k < kBurnInSteps; ++k) {
        const auto [gy, dgy] = system.step(y);
        (void)dgy;
        const Vec2 x = system.draw(rng);
        y = system.wrap({gy.y1 + x.x, gy.y2 + x.y});
    }

    Mat2 p = Mat2::identity();
    double log_offset = 0.0;
    double log_det = 0.0;
    std::vector<double> rates;
    rates.reserve(kBatchCount);
    double prev_mark = 0.0;
    long long prev_step = 0;

    for (long long k = 0; k < n; ++k) {
        const auto [gy, dgy] = system.step(y);
        p = dgy * p;
        log_det += std::log(std::fabs(dgy.det()));
        if (p.norm_inf() > 1e60) {
            const double nf = p.norm_fro();
            p = p * (1.0 / nf);
            log_offset += std::log(nf);
        }
        if (!p.finite())
            throw NonFiniteAccumulator("straight product overflowed");
        const Vec2 x = system.draw(rng);
        y = system.wrap({gy.y1 + x.x, gy.y2 + x.y});

        const long long batch_end = (static_cast<long long>(rates.size()) + 1) * n / kBatchCount;
        if (k + 1 == batch_end) {
            const double mark = log_offset + std::log(p.op_norm());
            rates.push_back((mark - prev_mark) / static_cast<double>(k + 1 - prev_step));
            prev_mark = mark;
            prev_step = k + 1;
        }
    }

    const double total = log_offset + std::log(p.op_norm());
    est.lambda_plus = total / static_cast<double>(n);
    est.lambda_minus = log_det / static_cast<double>(n) - est.lambda_plus;
    est.batch_rates = rates;
    est.std_error = batch_means(rates).std_error;
    return est;
}

std::pair<LyapunovEstimate, LyapunovEstimate>
estimate_lyapunov_singular(double K, double epsilon, TorusPoint y0, long long n,
                           int renorm_interval, RngStream& rng) {
    const NoiseModel vertical = NoiseModel::singular_vertical(epsilon);

    RandomSystem direct = RandomSystem::standard(K, vertical);
    RngStream rng_direct = rng.split(1);
    LyapunovEstimate direct_est =
        estimate_lyapunov(direct, y0, n, renorm_interval, rng_direct);

    // nu'-random perturbation of g_K^2: pairs (a, b) of vertical kicks push
    // forward to the translation (a, a + b).
    RandomSystem reduced;
    reduced.id = "standard2(K=" + fmt_param(K) + ")";
    reduced.step = [K](const TorusPoint& y) {
        const Mat2 d0 = standard_map_derivative(K, y);
        const TorusPoint mid = standard_map(K, y);
        const Mat2 d1 = standard_map_derivative(K, mid);
        return std::make_pair(standard_map(K, mid), d1 * d0);
    };
    reduced.noise = vertical;
    reduced.sampler = [epsilon](RngStream& r) {
        const double a = epsilon * r.next_symmetric();
        const double b = epsilon * r.next_symmetric();
        return Vec2{a, a + b};
    };

    RngStream rng_reduced = rng.split(2);
    LyapunovEstimate reduced_est =
        estimate_lyapunov(reduced, y0, n / 2, renorm_interval, rng_reduced);

    // one step of g_K^2 is two steps of g_K: report the per-step rate
    reduced_est.lambda_plus *= 0.5;
    reduced_est.lambda_minus *= 0.5;
    reduced_est.std_error *= 0.5;
    for (double& r : reduced_est.batch_rates) r *= 0.5;

    return {direct_est, reduced_est};
}

} // namespace lyaplab
