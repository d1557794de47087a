#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace qgeo {
namespace ode {

struct Options {
    double rtol = 1e-8;
    double atol = 1e-10;
    double h_init = 0.0;  // 0 means (t1-t0)/100
    long max_steps = 10000000;
};

using Rhs = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dydt)>;
using SampleSink = std::function<void(std::size_t index, double t, const std::vector<double>& y)>;

// Explicit Dormand-Prince 5(4) with the classic quartic dense-output
// interpolant. Integrates y from t0 to t1 in place; emits dense samples at the
// (ascending, in-range) sample_times through on_sample. Returns the step size
// in effect at the end, so a caller can carry it across segments.
double integrate(const Rhs& f, double t0, double t1, std::vector<double>& y, const Options& opt,
                 const std::vector<double>& sample_times = {},
                 const SampleSink& on_sample = nullptr);

}  // namespace ode
}  // namespace qgeo
