#include "skewdyn/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "skewdyn/errors.hpp"
#include "skewdyn/io_util.hpp"

namespace skewdyn {

Poly::Poly(std::vector<Complex> coeffs) : c(std::move(coeffs)) {
    while (!c.empty() && c.back() == Complex(0.0, 0.0)) c.pop_back();
}

double Poly::max_coeff_modulus() const {
    double m = 0.0;
    for (const Complex& v : c) m = std::max(m, std::abs(v));
    return m;
}

Complex Poly::eval(Complex z) const {
    Complex y(0.0, 0.0);
    for (size_t i = c.size(); i-- > 0;) y = y * z + c[i];
    return y;
}

Poly poly_trim(std::vector<Complex> coeffs, double rel_tol) {
    double m = 0.0;
    for (const Complex& v : coeffs) m = std::max(m, std::abs(v));
    double cut = m * rel_tol;
    while (!coeffs.empty() && std::abs(coeffs.back()) <= cut) coeffs.pop_back();
    return Poly(std::move(coeffs));
}

Poly poly_derivative(const Poly& p) {
    if (p.degree() <= 0) return Poly();
    std::vector<Complex> d(p.c.size() - 1);
    for (size_t i = 1; i < p.c.size(); ++i) d[i - 1] = p.c[i] * static_cast<double>(i);
    return Poly(std::move(d));
}

Poly poly_add(const Poly& p, const Poly& q) {
    std::vector<Complex> r(std::max(p.c.size(), q.c.size()), Complex(0.0, 0.0));
    for (size_t i = 0; i < p.c.size(); ++i) r[i] += p.c[i];
    for (size_t i = 0; i < q.c.size(); ++i) r[i] += q.c[i];
    return Poly(std::move(r));
}

Poly poly_sub(const Poly& p, const Poly& q) {
    std::vector<Complex> r(std::max(p.c.size(), q.c.size()), Complex(0.0, 0.0));
    for (size_t i = 0; i < p.c.size(); ++i) r[i] += p.c[i];
    for (size_t i = 0; i < q.c.size(); ++i) r[i] -= q.c[i];
    return Poly(std::move(r));
}

Poly poly_mul(const Poly& p, const Poly& q) {
    if (p.is_zero() || q.is_zero()) return Poly();
    std::vector<Complex> r(p.c.size() + q.c.size() - 1, Complex(0.0, 0.0));
    for (size_t i = 0; i < p.c.size(); ++i)
        for (size_t j = 0; j < q.c.size(); ++j) r[i + j] += p.c[i] * q.c[j];
    return Poly(std::move(r));
}

Poly poly_scale(const Poly& p, Complex s) {
    std::vector<Complex> r = p.c;
    for (Complex& v : r) v *= s;
    return Poly(std::move(r));
}

Poly poly_from_roots(const std::vector<Complex>& roots) {
    std::vector<Complex> c{Complex(1.0, 0.0)};
    for (Complex r : roots) {
        std::vector<Complex> next(c.size() + 1, Complex(0.0, 0.0));
        for (size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = std::move(next);
    }
    return Poly(std::move(c));
}

namespace {

// Residual bound the contract promises for each root.
double residual_bound(double max_coeff, int deg, Complex root) {
    return 1e-10 * max_coeff * std::pow(std::max(1.0, std::abs(root)), deg);
}

// Horner evaluation together with a running rounding-error bound
// (~2n * eps * sum |c_i| |z|^i). A residual at or below the bound cannot be
// improved in double precision, which is the honest stopping criterion for
// multiple roots.
struct EvalErr {
    Complex value;
    double attainable;
};

EvalErr eval_with_floor(const Poly& p, Complex z) {
    double az = std::abs(z);
    Complex y(0.0, 0.0);
    double s = 0.0;
    for (size_t i = p.c.size(); i-- > 0;) {
        y = y * z + p.c[i];
        s = s * az + std::abs(p.c[i]);
    }
    double gamma = 2.0 * static_cast<double>(p.c.size()) * 1.11e-16;
    return {y, gamma * s};
}

std::vector<Complex> roots_deg1(const Poly& p) { return {-p.c[0] / p.c[1]}; }

std::vector<Complex> roots_deg2(const Poly& p) {
    // Stable quadratic: pair the root formula with Vieta for the other root.
    Complex a = p.c[2], b = p.c[1], cc = p.c[0];
    Complex disc = std::sqrt(b * b - 4.0 * a * cc);
    Complex q = (std::abs(b + disc) >= std::abs(b - disc)) ? -0.5 * (b + disc)
                                                           : -0.5 * (b - disc);
    if (q == Complex(0.0, 0.0)) return {Complex(0.0, 0.0), Complex(0.0, 0.0)};
    return {q / a, cc / q};
}

std::vector<Complex> roots_aberth(const Poly& p) {
    const int n = p.degree();
    const double maxc = p.max_coeff_modulus();
    const Poly dp = poly_derivative(p);

    // Cauchy bound: all roots lie inside |z| <= 1 + max |c_i / c_n|.
    double cb = 0.0;
    for (int i = 0; i < n; ++i) cb = std::max(cb, std::abs(p.c[static_cast<size_t>(i)]));
    double radius = 1.0 + cb / std::abs(p.lead());

    std::vector<Complex> z(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        // Irregular angle offsets break the symmetry traps of z^n - c inputs.
        double th = 2.0 * M_PI * (k + 0.25) / n + 0.42;
        z[static_cast<size_t>(k)] = std::polar(radius, th);
    }

    std::vector<bool> frozen(static_cast<size_t>(n), false);
    const int max_sweeps = 200;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        int active = 0;
        for (int i = 0; i < n; ++i) {
            size_t si = static_cast<size_t>(i);
            if (frozen[si]) continue;
            EvalErr pe = eval_with_floor(p, z[si]);
            if (std::abs(pe.value) <= 2.0 * pe.attainable) {
                frozen[si] = true;
                continue;
            }
            ++active;
            Complex dpi = dp.eval(z[si]);
            if (dpi == Complex(0.0, 0.0)) {
                // Exact critical point of p; nudge off and retry next sweep.
                z[si] += Complex(1e-8 * (1.0 + std::abs(z[si])), 1e-8);
                continue;
            }
            Complex ratio = pe.value / dpi;
            Complex s(0.0, 0.0);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                Complex diff = z[si] - z[static_cast<size_t>(j)];
                if (diff == Complex(0.0, 0.0)) diff = Complex(1e-12, 1e-12);
                s += 1.0 / diff;
            }
            Complex denom = 1.0 - ratio * s;
            Complex w = (denom == Complex(0.0, 0.0)) ? ratio : ratio / denom;
            z[si] -= w;
            if (std::abs(w) <= 1e-13 * std::max(1.0, std::abs(z[si]))) frozen[si] = true;
        }
        if (active == 0) break;
    }
    return z;
}

}  // namespace

std::vector<RootCluster> find_roots(const Poly& p_in) {
    Poly p = poly_trim(p_in.c);
    if (p.degree() < 1) throw NumericError("find_roots: degree < 1");

    // Exact zero roots first (strip vanishing low-order coefficients).
    int zero_mult = 0;
    while (!p.c.empty() && p.c.front() == Complex(0.0, 0.0)) {
        p.c.erase(p.c.begin());
        ++zero_mult;
    }

    std::vector<Complex> roots;
    if (p.degree() >= 1) {
        // Scale to max coefficient modulus 1 (roots unchanged).
        Poly q = poly_scale(p, Complex(1.0 / p.max_coeff_modulus(), 0.0));
        switch (q.degree()) {
            case 1: roots = roots_deg1(q); break;
            case 2: roots = roots_deg2(q); break;
            default: roots = roots_aberth(q); break;
        }

        // One Newton polish per root, kept only when it reduces the residual.
        Poly dq = poly_derivative(q);
        for (Complex& r : roots) {
            Complex pv = q.eval(r);
            Complex dv = dq.eval(r);
            if (dv != Complex(0.0, 0.0)) {
                Complex r2 = r - pv / dv;
                if (std::abs(q.eval(r2)) < std::abs(pv)) r = r2;
            }
        }

        const double maxc = q.max_coeff_modulus();
        for (const Complex& r : roots) {
            double res = std::abs(q.eval(r));
            if (!(res <= residual_bound(maxc, q.degree(), r)))
                throw NumericError("find_roots: no convergence, residual " + fmt_double(res) +
                                   " at root " + fmt_complex(r));
        }
    }

    for (int k = 0; k < zero_mult; ++k) roots.push_back(Complex(0.0, 0.0));

    // Cluster nearby roots into multiplicities (relative tolerance 1e-7).
    size_t m = roots.size();
    std::vector<int> owner(m);
    for (size_t i = 0; i < m; ++i) owner[i] = static_cast<int>(i);
    auto find = [&](int i) {
        while (owner[static_cast<size_t>(i)] != i) i = owner[static_cast<size_t>(i)];
        return i;
    };
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j) {
            double tol = 1e-7 * std::max(1.0, 0.5 * (std::abs(roots[i]) + std::abs(roots[j])));
            if (std::abs(roots[i] - roots[j]) <= tol)
                owner[static_cast<size_t>(find(static_cast<int>(j)))] =
                    find(static_cast<int>(i));
        }
    std::vector<RootCluster> out;
    for (size_t i = 0; i < m; ++i) {
        if (find(static_cast<int>(i)) != static_cast<int>(i)) continue;
        Complex sum(0.0, 0.0);
        int count = 0;
        for (size_t j = 0; j < m; ++j)
            if (find(static_cast<int>(j)) == static_cast<int>(i)) {
                sum += roots[j];
                ++count;
            }
        out.push_back({sum / static_cast<double>(count), count});
    }

    // Multiplicity-aware polish: for a k-fold root, z -= k * p/p' converges
    // quadratically where plain Newton only halves the error.
    if (p_in.degree() >= 1) {
        Poly q = poly_trim(p_in.c);
        Poly dq = poly_derivative(q);
        for (RootCluster& rc : out) {
            Complex pv = q.eval(rc.value);
            Complex dv = dq.eval(rc.value);
            if (dv == Complex(0.0, 0.0)) continue;
            Complex better = rc.value - static_cast<double>(rc.multiplicity) * pv / dv;
            if (std::abs(q.eval(better)) <= std::abs(pv)) rc.value = better;
        }
    }

    std::sort(out.begin(), out.end(), [](const RootCluster& x, const RootCluster& y) {
        if (x.value.real() != y.value.real()) return x.value.real() < y.value.real();
        return x.value.imag() < y.value.imag();
    });
    return out;
}

}  // namespace skewdyn
