#pragma once

#include <complex>
#include <vector>

#include "skewdyn/sphere.hpp"

namespace skewdyn {

// Univariate polynomial with complex coefficients, ascending degree.
// Trailing (highest-order) zeros are trimmed; the zero polynomial has an
// empty coefficient list and degree() == -1.
struct Poly {
    std::vector<Complex> c;

    Poly() = default;
    explicit Poly(std::vector<Complex> coeffs);

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    Complex lead() const { return c.back(); }
    double max_coeff_modulus() const;

    Complex eval(Complex z) const;  // Horner
};

Poly poly_trim(std::vector<Complex> coeffs, double rel_tol = 1e-12);
Poly poly_derivative(const Poly& p);
Poly poly_add(const Poly& p, const Poly& q);
Poly poly_sub(const Poly& p, const Poly& q);
Poly poly_mul(const Poly& p, const Poly& q);
Poly poly_scale(const Poly& p, Complex s);
Poly poly_from_roots(const std::vector<Complex>& roots);  // monic

// A root cluster: nearby numerical roots merged, multiplicity counted.
struct RootCluster {
    Complex value;
    int multiplicity;
};

// All deg(p) roots, counted with multiplicity. Simultaneous Aberth-Ehrlich
// iteration (initial guesses on the Cauchy-bound circle, 200-sweep cap,
// per-root freezing at residual 1e-13, one Newton polish), then clustering
// at relative separation 1e-7. Degrees 1 and 2 use closed forms.
// Every returned root satisfies |p(root)| <= 1e-10 * max|coeff| * max(1,|root|)^deg;
// otherwise NumericError reports the offending residuals.
std::vector<RootCluster> find_roots(const Poly& p);

}  // namespace skewdyn
