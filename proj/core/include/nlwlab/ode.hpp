#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace nlwlab {

struct OdeControls {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0;  // 0 selects an automatic first step
    double h_min = 1e-14;
    double h_max = std::numeric_limits<double>::infinity();
    long max_steps = 50'000'000;
};

// Dormand-Prince 5(4) with per-step control, FSAL.
class Dopri5 {
public:
    using Rhs = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dydt)>;

    Dopri5(Rhs rhs, OdeControls controls);

    void reset(double t, std::vector<double> y);
    // Advance by one accepted step without passing t_stop. Throws StiffnessError when
    // the step underflows h_min.
    void step(double t_stop);
    // Repeated steps until t reaches t_stop exactly.
    void advance_to(double t_stop);

    double t() const { return t_; }
    const std::vector<double>& y() const { return y_; }
    double last_step() const { return h_last_; }
    long steps() const { return steps_; }
    long rejected() const { return rejected_; }

private:
    double initial_step(double t_stop);

    Rhs rhs_;
    OdeControls ctl_;
    double t_ = 0.0;
    double h_ = 0.0;
    double h_last_ = 0.0;
    long steps_ = 0;
    long rejected_ = 0;
    std::vector<double> y_, k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, ynew_;
};

}  // namespace nlwlab
