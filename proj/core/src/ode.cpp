#include "nlwlab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlwlab/errors.hpp"

namespace nlwlab {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Dopri5::Dopri5(Rhs rhs, OdeControls controls) : rhs_(std::move(rhs)), ctl_(controls) {}

void Dopri5::reset(double t, std::vector<double> y) {
    t_ = t;
    y_ = std::move(y);
    const std::size_t n = y_.size();
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ytmp_, &ynew_}) v->assign(n, 0.0);
    rhs_(t_, y_, k1_);
    h_ = ctl_.h_init;
    h_last_ = 0.0;
    steps_ = rejected_ = 0;
}

double Dopri5::initial_step(double t_stop) {
    // Hairer-Norsett-Wanner starting step heuristic.
    double d0 = 0.0, d1 = 0.0;
    const std::size_t n = y_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double sc = ctl_.atol + ctl_.rtol * std::abs(y_[i]);
        d0 += (y_[i] / sc) * (y_[i] / sc);
        d1 += (k1_[i] / sc) * (k1_[i] / sc);
    }
    d0 = std::sqrt(d0 / n);
    d1 = std::sqrt(d1 / n);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, std::abs(t_stop - t_));
    for (std::size_t i = 0; i < n; ++i) ytmp_[i] = y_[i] + h0 * k1_[i];
    rhs_(t_ + h0, ytmp_, k2_);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sc = ctl_.atol + ctl_.rtol * std::abs(y_[i]);
        d2 += ((k2_[i] - k1_[i]) / sc) * ((k2_[i] - k1_[i]) / sc);
    }
    d2 = std::sqrt(d2 / n) / h0;
    const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / std::max(d1, d2), 0.2);
    return std::min({100.0 * h0, h1, ctl_.h_max});
}

void Dopri5::step(double t_stop) {
    if (t_stop <= t_) return;
    if (h_ <= 0.0) h_ = initial_step(t_stop);
    const std::size_t n = y_.size();
    for (;;) {
        if (++steps_ > ctl_.max_steps) throw StiffnessError("step budget exhausted at t=" + std::to_string(t_));
        double h = std::min({h_, ctl_.h_max, t_stop - t_});
        const bool last = h >= t_stop - t_;
        if (h < ctl_.h_min * std::max(1.0, std::abs(t_)) && !last)
            throw StiffnessError("step size underflow (h=" + std::to_string(h) + ") at t=" + std::to_string(t_));

        for (std::size_t i = 0; i < n; ++i) ytmp_[i] = y_[i] + h * a21 * k1_[i];
        rhs_(t_ + c2 * h, ytmp_, k2_);
        for (std::size_t i = 0; i < n; ++i) ytmp_[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        rhs_(t_ + c3 * h, ytmp_, k3_);
        for (std::size_t i = 0; i < n; ++i) ytmp_[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        rhs_(t_ + c4 * h, ytmp_, k4_);
        for (std::size_t i = 0; i < n; ++i)
            ytmp_[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        rhs_(t_ + c5 * h, ytmp_, k5_);
        for (std::size_t i = 0; i < n; ++i)
            ytmp_[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
        rhs_(t_ + h, ytmp_, k6_);
        for (std::size_t i = 0; i < n; ++i)
            ynew_[i] = y_[i] + h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] + b6 * k6_[i]);
        rhs_(t_ + h, ynew_, k7_);

        double err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double e =
                h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
            const double sc = ctl_.atol + ctl_.rtol * std::max(std::abs(y_[i]), std::abs(ynew_[i]));
            err += (e / sc) * (e / sc);
            if (!std::isfinite(ynew_[i])) finite = false;
        }
        err = finite ? std::sqrt(err / n) : std::numeric_limits<double>::infinity();

        if (err <= 1.0) {
            const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            t_ = last ? t_stop : t_ + h;
            y_.swap(ynew_);
            k1_.swap(k7_);
            h_last_ = h;
            h_ = h * fac;
            return;
        }
        ++rejected_;
        h_ = h * (std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9) : 0.1);
    }
}

void Dopri5::advance_to(double t_stop) {
    while (t_ < t_stop) step(t_stop);
}

}  // namespace nlwlab
