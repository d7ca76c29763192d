#include "skewdyn/rational_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "skewdyn/errors.hpp"
#include "skewdyn/io_util.hpp"

namespace skewdyn {

namespace {

constexpr int kComposeDegreeCap = 4096;

// Homogeneous evaluation of p at [a : b], padded to degree D:
// sum p_i a^i b^{D-i}. Evaluated as a Horner form in whichever of a/b, b/a
// has modulus <= 1; with unit-normalized (a, b) nothing can overflow.
Complex eval_homogeneous(const Poly& p, int D, Complex a, Complex b) {
    if (std::abs(a) <= std::abs(b)) {
        Complex t = a / b;
        Complex y(0.0, 0.0);
        for (int i = D; i >= 0; --i) {
            y *= t;
            if (i < static_cast<int>(p.c.size())) y += p.c[static_cast<size_t>(i)];
        }
        // y = sum p_i t^i, so p_hom = b^D * y.
        return std::pow(b, D) * y;
    }
    Complex t = b / a;
    Complex y(0.0, 0.0);
    for (int i = 0; i <= D; ++i) {
        y *= t;
        if (i < static_cast<int>(p.c.size())) y += p.c[static_cast<size_t>(i)];
    }
    // y = sum p_i t^{D-i}, so p_hom = a^D * y.
    return std::pow(a, D) * y;
}

// Coefficients of u^D * p(1/u), the chart transform z = 1/u.
std::vector<Complex> reversed_padded(const Poly& p, int D) {
    std::vector<Complex> r(static_cast<size_t>(D) + 1, Complex(0.0, 0.0));
    for (size_t i = 0; i < p.c.size(); ++i) r[static_cast<size_t>(D) - i] = p.c[i];
    return r;
}

Complex eval_coeffs(std::span<const Complex> c, Complex z) {
    Complex y(0.0, 0.0);
    for (size_t i = c.size(); i-- > 0;) y = y * z + c[i];
    return y;
}

Complex eval_coeffs_derivative(std::span<const Complex> c, Complex z) {
    Complex y(0.0, 0.0);
    for (size_t i = c.size(); i-- > 1;) y = y * z + c[i] * static_cast<double>(i);
    return y;
}

}  // namespace

RationalMap::RationalMap(Poly num, Poly den, bool check_coprime)
    : num_(std::move(num)), den_(std::move(den)) {
    if (num_.is_zero() && den_.is_zero())
        throw ConfigError("RationalMap: zero numerator and denominator");
    degree_ = std::max(num_.degree(), den_.degree());
    if (degree_ < 1) throw ConfigError("RationalMap: degree must be >= 1");
    if (den_.is_zero()) throw ConfigError("RationalMap: zero denominator");

    double m = std::max(num_.max_coeff_modulus(), den_.max_coeff_modulus());
    num_ = poly_scale(num_, Complex(1.0 / m, 0.0));
    den_ = poly_scale(den_, Complex(1.0 / m, 0.0));

    if (check_coprime && num_.degree() >= 1 && den_.degree() >= 1) {
        // Heuristic only: flag a shared root when roots of P and Q approach
        // within 1e-8. Coprimality remains the caller's contract.
        auto rn = find_roots(num_);
        auto rd = find_roots(den_);
        for (const auto& x : rn)
            for (const auto& y : rd) {
                double tol = 1e-8 * std::max(1.0, std::abs(x.value));
                if (std::abs(x.value - y.value) < tol)
                    throw ConfigError("RationalMap: numerator and denominator share a root near " +
                                      fmt_complex(x.value));
            }
    }
}

SpherePoint RationalMap::operator()(const SpherePoint& p) const {
    Complex ph = eval_homogeneous(num_, degree_, p.a(), p.b());
    Complex qh = eval_homogeneous(den_, degree_, p.a(), p.b());
    double scale = std::max(num_.max_coeff_modulus(), den_.max_coeff_modulus());
    if (std::max(std::abs(ph), std::abs(qh)) <= 1e-14 * scale)
        throw NumericError("RationalMap: homogeneous 0/0 at " + p.to_text() +
                           " (non-coprime pair?)");
    return SpherePoint::from_projective(ph, qh);
}

Complex derivative_value(const RationalMap& R, Complex z) {
    Complex pv = R.num().eval(z);
    Complex qv = R.den().eval(z);
    if (qv == Complex(0.0, 0.0))
        throw std::domain_error("derivative_value: evaluation at a pole");
    Complex dpv = poly_derivative(R.num()).eval(z);
    Complex dqv = poly_derivative(R.den()).eval(z);
    return (dpv * qv - pv * dqv) / (qv * qv);
}

Complex derivative_value(const RationalMap& R, const SpherePoint& p) {
    if (p.is_infinity())
        throw std::domain_error("derivative_value: evaluation at infinity; use charts");
    return derivative_value(R, p.to_complex());
}

double chart_derivative_modulus(const RationalMap& R, const SpherePoint& p) {
    const int D = R.degree();
    bool in_inverted = std::abs(p.a()) > std::abs(p.b());
    Complex u = in_inverted ? p.b() / p.a() : p.a() / p.b();

    std::vector<Complex> P = in_inverted ? reversed_padded(R.num(), D) : R.num().c;
    std::vector<Complex> Q = in_inverted ? reversed_padded(R.den(), D) : R.den().c;

    SpherePoint image = R(p);
    bool out_inverted = std::abs(image.a()) > std::abs(image.b());
    if (out_inverted) std::swap(P, Q);

    Complex qv = eval_coeffs(Q, u);
    if (std::abs(qv) < 1e-12) {
        // Image sits on the chart boundary; the other output chart is fine.
        std::swap(P, Q);
        qv = eval_coeffs(Q, u);
        if (std::abs(qv) < 1e-12)
            throw NumericError("chart_derivative_modulus: degenerate denominators");
    }
    Complex pv = eval_coeffs(P, u);
    Complex w = eval_coeffs_derivative(P, u) * qv - pv * eval_coeffs_derivative(Q, u);
    return std::abs(w / (qv * qv));
}

namespace {

// Fast fiber path for maps of the form (c0 + cd z^d) / d0: the preimages of a
// finite q are the d-th roots of (q d0 - c0)/cd, which beats the general
// root finder by orders of magnitude on the monomial families that dominate
// deep tree walks. Roots come out in the same canonical (re, im) order.
bool monomial_preimages(const RationalMap& R, const SpherePoint& q,
                        std::vector<MultPoint>& out) {
    const Poly& num = R.num();
    const Poly& den = R.den();
    if (den.degree() != 0) return false;
    int d = num.degree();
    if (d < 1) return false;
    for (int i = 1; i < d; ++i)
        if (num.c[static_cast<size_t>(i)] != Complex(0.0, 0.0)) return false;
    if (q.is_infinity()) {
        out.push_back({SpherePoint::infinity(), d});
        return true;
    }
    Complex target = (q.to_complex() * den.c[0] - num.c[0]) / num.c.back();
    double r = std::pow(std::abs(target), 1.0 / d);
    // Same clustering rule as the general finder: a fiber collapsed within
    // relative 1e-7 reports one root with multiplicity.
    if (2.0 * r * std::sin(M_PI / std::max(d, 2)) <= 1e-7) {
        out.push_back({SpherePoint::zero(), d});
        return true;
    }
    double th = std::arg(target) / d;
    std::vector<Complex> roots(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j)
        roots[static_cast<size_t>(j)] = std::polar(r, th + 2.0 * M_PI * j / d);
    std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    for (Complex z : roots) out.push_back({SpherePoint::from_complex(z), 1});
    return true;
}

}  // namespace

std::vector<MultPoint> preimages(const RationalMap& R, const SpherePoint& q) {
    std::vector<MultPoint> out;
    if (monomial_preimages(R, q, out)) return out;
    // Solutions of R(z) = q: roots of H = qb*P - qa*Q, plus infinity with
    // multiplicity deg(R) - deg(H) when the leading terms cancel.
    Poly H = poly_sub(poly_scale(R.num(), q.b()), poly_scale(R.den(), q.a()));
    H = poly_trim(H.c);
    if (H.is_zero())
        throw NumericError("preimages: fiber polynomial vanished (degenerate map)");
    if (H.degree() >= 1)
        for (const auto& r : find_roots(H))
            out.push_back({SpherePoint::from_complex(r.value), r.multiplicity});
    int inf_mult = R.degree() - H.degree();
    if (inf_mult > 0) out.push_back({SpherePoint::infinity(), inf_mult});
    return out;
}

std::vector<MultPoint> critical_points(const RationalMap& R) {
    Poly W = poly_sub(poly_mul(poly_derivative(R.num()), R.den()),
                      poly_mul(R.num(), poly_derivative(R.den())));
    W = poly_trim(W.c);
    if (W.is_zero()) throw NumericError("critical_points: constant map");
    std::vector<MultPoint> out;
    if (W.degree() >= 1)
        for (const auto& r : find_roots(W))
            out.push_back({SpherePoint::from_complex(r.value), r.multiplicity});
    int inf_mult = 2 * R.degree() - 2 - W.degree();
    if (inf_mult > 0) out.push_back({SpherePoint::infinity(), inf_mult});
    return out;
}

std::vector<MultPoint> sphere_fixed_points(const RationalMap& R) {
    // Roots of H = P - z*Q; infinity fills the fixed-point count deg + 1.
    std::vector<Complex> shifted(R.den().c.size() + 1, Complex(0.0, 0.0));
    for (size_t i = 0; i < R.den().c.size(); ++i) shifted[i + 1] = R.den().c[i];
    Poly H = poly_sub(R.num(), Poly(std::move(shifted)));
    H = poly_trim(H.c);
    if (H.is_zero())
        throw NumericError("sphere_fixed_points: identity map has a continuum of fixed points");
    std::vector<MultPoint> out;
    if (H.degree() >= 1)
        for (const auto& r : find_roots(H))
            out.push_back({SpherePoint::from_complex(r.value), r.multiplicity});
    int inf_mult = R.degree() + 1 - H.degree();
    if (inf_mult > 0) out.push_back({SpherePoint::infinity(), inf_mult});
    return out;
}

RationalMap compose(const RationalMap& outer, const RationalMap& inner) {
    long long target = static_cast<long long>(outer.degree()) * inner.degree();
    if (target > kComposeDegreeCap)
        throw BudgetError("compose: degree " + std::to_string(target) + " exceeds cap " +
                          std::to_string(kComposeDegreeCap));
    const int Do = outer.degree();

    // Homogeneous substitution: num = sum po_i * Pi^i * Qi^{Do-i}, likewise den.
    std::vector<Poly> num_pow(static_cast<size_t>(Do) + 1), den_pow(static_cast<size_t>(Do) + 1);
    num_pow[0] = Poly({Complex(1.0, 0.0)});
    den_pow[0] = Poly({Complex(1.0, 0.0)});
    for (int i = 1; i <= Do; ++i) {
        num_pow[static_cast<size_t>(i)] = poly_mul(num_pow[static_cast<size_t>(i - 1)], inner.num());
        den_pow[static_cast<size_t>(i)] = poly_mul(den_pow[static_cast<size_t>(i - 1)], inner.den());
    }
    Poly num, den;
    for (int i = 0; i <= Do; ++i) {
        Poly term = poly_mul(num_pow[static_cast<size_t>(i)], den_pow[static_cast<size_t>(Do - i)]);
        if (i < static_cast<int>(outer.num().c.size()))
            num = poly_add(num, poly_scale(term, outer.num().c[static_cast<size_t>(i)]));
        if (i < static_cast<int>(outer.den().c.size()))
            den = poly_add(den, poly_scale(term, outer.den().c[static_cast<size_t>(i)]));
    }
    for (const Complex& v : num.c)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericError("compose: coefficient overflow in numerator");
    for (const Complex& v : den.c)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericError("compose: coefficient overflow in denominator");
    // Constructor renormalizes jointly; skip the coprimality heuristic, the
    // composition of irreducible maps stays irreducible up to rounding.
    return RationalMap(std::move(num), std::move(den), false);
}

MapFamily::MapFamily(std::vector<RationalMap> maps) : maps_(std::move(maps)) {
    if (maps_.empty()) throw ConfigError("MapFamily: need at least one map");
    if (maps_.size() > 255) throw ConfigError("MapFamily: at most 255 maps supported");
    total_degree_ = 0;
    int dmax = 0;
    for (const auto& m : maps_) {
        total_degree_ += m.degree();
        dmax = std::max(dmax, m.degree());
    }
    if (dmax < 2) throw ConfigError("MapFamily: at least one map must have degree >= 2");
}

RationalMap compose_cycle(const MapFamily& fam, std::span<const Letter> cycle) {
    if (cycle.empty()) throw ConfigError("compose_cycle: empty cycle");
    RationalMap acc = fam.map(cycle[0]);
    for (size_t k = 1; k < cycle.size(); ++k) acc = compose(fam.map(cycle[k]), acc);
    return acc;
}

}  // namespace skewdyn
