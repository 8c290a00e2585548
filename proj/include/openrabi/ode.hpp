// Embedded Dormand-Prince 5(4) integrator for Eigen-valued states.
// Error control is elementwise: |e| / (abs_tol + rel_tol*|y|), max over
// entries. Throws StepSizeUnderflow when the controller collapses the step,
// which for a Lindblad right-hand side signals stiffness relative to the
// requested tolerance.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

namespace openrabi {

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_initial = 0.0;    // 0 = auto
    double h_min_factor = 1e-14;  // times the span
    double h_max_factor = 1.0;    // times the span
};

struct OdeStats {
    long steps_accepted = 0;
    long steps_rejected = 0;
    double h_last = 0.0;
};

class StepSizeUnderflow : public std::runtime_error {
public:
    explicit StepSizeUnderflow(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

template <class State>
double error_ratio(const State& err, const State& y0, const State& y1, double abs_tol, double rel_tol) {
    const auto scale = abs_tol + rel_tol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array();
    return (err.cwiseAbs().array() / scale).maxCoeff();
}

}  // namespace detail

// Advances y in place from t0 to t1. Rhs: State rhs(double t, const State& y).
template <class State, class Rhs>
void integrate_adaptive(Rhs&& rhs, State& y, double t0, double t1, const OdeOptions& opts = {},
                        OdeStats* stats = nullptr) {
    // Dormand-Prince RK5(4)7M coefficients.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // Difference between the 5th- and embedded 4th-order weights.
    static constexpr double d1 = 71.0 / 57600, d3 = -71.0 / 16695, d4 = 71.0 / 1920, d5 = -17253.0 / 339200,
                            d6 = 22.0 / 525, d7 = -1.0 / 40;

    const double span = t1 - t0;
    if (span == 0.0) return;
    if (span < 0.0) throw std::invalid_argument("integrate_adaptive: t1 must be >= t0");

    const double h_min = opts.h_min_factor * span;
    const double h_max = opts.h_max_factor * span;
    double t = t0;
    double h = opts.h_initial > 0.0 ? std::min(opts.h_initial, h_max) : std::min(span, 1e-2 * span + 1e-8);

    State k1 = rhs(t, y);  // FSAL: reused across accepted steps
    while (t < t1) {
        h = std::min(h, t1 - t);
        if (h < h_min)
            throw StepSizeUnderflow(
                "ODE step size underflow: the problem appears stiff at the requested tolerance; "
                "consider a tolerance larger relative to kappa_c2");

        const State k2 = rhs(t + c2 * h, y + h * (a21 * k1));
        const State k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const State k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const State k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const State k6 = rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const State y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const State k7 = rhs(t + h, y_new);
        const State err = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

        const double ratio = detail::error_ratio(err, y, y_new, opts.abs_tol, opts.rel_tol);
        if (ratio <= 1.0) {
            t += h;
            y = y_new;
            k1 = k7;
            if (stats) {
                ++stats->steps_accepted;
                stats->h_last = h;
            }
            const double grow = ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
            h = std::min(h * std::clamp(grow, 0.2, 5.0), h_max);
        } else {
            if (stats) ++stats->steps_rejected;
            h *= std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 0.9);
        }
    }
}

}  // namespace openrabi
