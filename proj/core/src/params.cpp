#include "nlwlab/params.hpp"

#include <cmath>

#include "nlwlab/errors.hpp"

namespace nlwlab {

std::string to_string(Variant v) { return v == Variant::Signed ? "signed" : "unsigned"; }

Variant variant_from_string(const std::string& name) {
    if (name == "signed") return Variant::Signed;
    if (name == "unsigned") return Variant::Unsigned;
    throw InputError("unknown variant '" + name + "' (expected signed|unsigned)");
}

Params::Params(double p_, Variant v) : p(p_), variant(v) {
    if (!(p > 1.0) || !std::isfinite(p)) throw InputError("exponent p must be finite and > 1");
    kappa0 = std::pow(linear_coeff(), 1.0 / (p - 1.0));
}

double Params::f(double u) const {
    const double a = std::pow(std::abs(u), p - 1.0);
    return variant == Variant::Signed ? a * u : a * std::abs(u);
}

double Params::df(double u) const {
    const double a = p * std::pow(std::abs(u), p - 1.0);
    if (variant == Variant::Signed) return a;
    return u >= 0.0 ? a : -a;
}

double Params::F(double u) const {
    const double a = std::pow(std::abs(u), p) / (p + 1.0);
    return variant == Variant::Signed ? a * std::abs(u) : a * u;
}

}  // namespace nlwlab
