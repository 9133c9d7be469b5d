#pragma once

#include <limits>
#include <string>
#include <vector>

#include "nlwlab/params.hpp"
#include "nlwlab/physical.hpp"

namespace nlwlab {

// Named Cauchy data. Every preset lives on a grid whose nodes include x = 0.
//   odd-sine           u0 = A sin(pi x) on the periodic [-1, 1), u1 = 0, A = 4
//   plateaus-opposite  u0 = A (P(x + 1.5) - P(x - 1.5)) on the periodic [-4, 4), P a smoothed
//                      indicator of [-1, 1] with edge width 0.1, u1 = 0, A = 2
//   gaussian-positive  u0 = A exp(-x^2 / 0.25) on [-4, 4] with fixed ends, u1 = 0, A = 3
//   constant-exact     u0 = kappa0 T^{-2/(p-1)}, u1 = 2/(p-1) kappa0 T^{-2/(p-1)-1} on the periodic
//                      [-1, 1); blows up everywhere at t = T, default T = 1
struct PresetOptions {
    double dx = 1.0 / 1024;
    double amplitude = std::numeric_limits<double>::quiet_NaN();  // NaN selects the preset default
    double T = 1.0;                                                // constant-exact only
};

struct PresetInfo {
    std::string name;
    std::string description;
    double window_lo = 0.0;
    double window_hi = 0.0;
    double t_end = 0.0;  // safety stop for evolve_u
    double default_amplitude = 0.0;
};

std::vector<std::string> preset_names();
PresetInfo preset_info(const std::string& name);
CauchyData make_preset(const std::string& name, const Params& params, const PresetOptions& options = {});

// int (u1^2 + u0_x^2)/2 - F(u0) dx with periodic or one-sided differences.
double levine_energy(const CauchyData& data, const Params& params);

}  // namespace nlwlab
