#pragma once

#include <string>

namespace nlwlab {

enum class Variant {
    Signed,    // |u|^{p-1} u
    Unsigned,  // |u|^p
};

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct Params {
    double p = 3.0;
    Variant variant = Variant::Signed;
    double kappa0 = 0.0;
    double eps0 = 1.0 / 1000.0;

    Params() : Params(3.0) {}
    explicit Params(double p, Variant variant = Variant::Signed);

    // 2/(p-1), the self-similar scaling exponent.
    double beta() const { return 2.0 / (p - 1.0); }
    // Coefficient 2(p+1)/(p-1)^2 of w in the self-similar equation.
    double linear_coeff() const { return 2.0 * (p + 1.0) / ((p - 1.0) * (p - 1.0)); }
    // (p+3)/(p-1), the damping coefficient.
    double damping() const { return (p + 3.0) / (p - 1.0); }

    double f(double u) const;
    double df(double u) const;
    // Primitive of f with F(0) = 0.
    double F(double u) const;
};

// r = floor(k/2).
inline int toda_r(int k) { return k / 2; }

}  // namespace nlwlab
