#include "qgeo/ode.hpp"

#include "qgeo/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qgeo {
namespace ode {

namespace {

// Dormand-Prince RK5(4)7M coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;

// b - bhat, the embedded error weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// Dense-output coefficients (Hairer's contd5).
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

}  // namespace

double integrate(const Rhs& f, double t0, double t1, std::vector<double>& y, const Options& opt,
                 const std::vector<double>& sample_times, const SampleSink& on_sample) {
    const std::size_t dim = y.size();
    const double span = t1 - t0;
    if (span <= 0.0) throw InputError("ode::integrate: t1 must exceed t0");

    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    std::vector<double> ytmp(dim), ynew(dim);
    std::vector<double> r1(dim), r2(dim), r3(dim), r4(dim), r5(dim), ysamp(dim);

    double t = t0;
    double h = opt.h_init > 0.0 ? std::min(opt.h_init, span) : span / 100.0;
    std::size_t next_sample = 0;
    while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) {
        if (on_sample) on_sample(next_sample, t0, y);
        ++next_sample;
    }

    f(t, y, k1);
    bool last_rejected = false;
    for (long step = 0; step < opt.max_steps; ++step) {
        if (t >= t1) return h;
        bool clamped = false;
        if (t + h >= t1) {
            h = t1 - t;
            clamped = true;
        }
        if (h < 1e-14 * span) {
            throw NumericalError("ode::integrate: step size underflow at t = " + std::to_string(t));
        }

        for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(t + h, ytmp, k6);
        for (std::size_t i = 0; i < dim; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        f(t + h, ynew, k7);

        double err_sq = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double e =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err_sq += (e / sc) * (e / sc);
        }
        const double err = std::sqrt(err_sq / static_cast<double>(dim == 0 ? 1 : dim));

        if (err <= 1.0) {
            // Accepted: emit dense samples inside (t, t_end].
            const double t_end = clamped ? t1 : t + h;
            if (next_sample < sample_times.size() && sample_times[next_sample] <= t_end) {
                for (std::size_t i = 0; i < dim; ++i) {
                    const double ydiff = ynew[i] - y[i];
                    const double bspl = h * k1[i] - ydiff;
                    r1[i] = y[i];
                    r2[i] = ydiff;
                    r3[i] = bspl;
                    r4[i] = ydiff - h * k7[i] - bspl;
                    r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                 d7 * k7[i]);
                }
                while (next_sample < sample_times.size() && sample_times[next_sample] <= t_end) {
                    const double ts = sample_times[next_sample];
                    const double theta = std::min((ts - t) / h, 1.0);
                    const double theta1 = 1.0 - theta;
                    for (std::size_t i = 0; i < dim; ++i) {
                        ysamp[i] =
                            r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
                    }
                    if (on_sample) on_sample(next_sample, ts, ysamp);
                    ++next_sample;
                }
            }
            t = clamped ? t1 : t + h;
            y.swap(ynew);
            k1.swap(k7);

            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            fac = std::clamp(fac, 0.2, 5.0);
            if (last_rejected) fac = std::min(fac, 1.0);
            h = clamped ? std::min(h * fac, span) : h * fac;
            last_rejected = false;
        } else {
            const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
            h *= fac;
            last_rejected = true;
        }
    }
    throw NumericalError("ode::integrate: exceeded maximum step count");
}

}  // namespace ode
}  // namespace qgeo
