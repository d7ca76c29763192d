#include "skewdyn/sphere.hpp"

#include <cmath>
#include <stdexcept>

#include "skewdyn/io_util.hpp"

namespace skewdyn {

namespace {

std::atomic<std::uint64_t> g_saturations{0};

bool finite_c(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

SpherePoint SpherePoint::from_projective(Complex a, Complex b) {
    if (!finite_c(a) || !finite_c(b))
        throw std::domain_error("SpherePoint: non-finite projective components");
    double m = std::max(std::max(std::abs(a.real()), std::abs(a.imag())),
                        std::max(std::abs(b.real()), std::abs(b.imag())));
    if (m == 0.0) throw std::domain_error("SpherePoint: (0, 0) is not projective");
    // Pre-scale only at extreme magnitudes where |a|^2 + |b|^2 would over- or
    // underflow; otherwise normalize in place, and skip the rescale entirely
    // when already unit so that normalization is exactly idempotent.
    if (m > 1e135 || m < 1e-135) {
        a /= m;
        b /= m;
    }
    double n2 = std::norm(a) + std::norm(b);
    if (std::abs(n2 - 1.0) > 1e-14) {
        double n = std::sqrt(n2);
        a /= n;
        b /= n;
    }
    return SpherePoint(a, b);
}

SpherePoint SpherePoint::from_complex(Complex z) {
    if (!finite_c(z)) throw std::domain_error("SpherePoint: non-finite affine coordinate");
    if (std::max(std::abs(z.real()), std::abs(z.imag())) > 1e150) {
        g_saturations.fetch_add(1, std::memory_order_relaxed);
        return infinity();
    }
    return from_projective(z, Complex(1.0, 0.0));
}

Complex SpherePoint::to_complex() const {
    if (is_infinity()) throw std::domain_error("SpherePoint: to_complex at infinity");
    return a_ / b_;
}

std::array<double, 3> SpherePoint::to_r3() const {
    Complex ab = a_ * std::conj(b_);
    return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a_) - std::norm(b_)};
}

SpherePoint SpherePoint::from_r3(const std::array<double, 3>& u) {
    // Stereographic: z = (X + iY)/(1 - Z); pick the chart that avoids the pole.
    double X = u[0], Y = u[1], Z = u[2];
    if (Z <= 0.0) return from_projective(Complex(X, Y), Complex(1.0 - Z, 0.0));
    return from_projective(Complex(1.0 + Z, 0.0), Complex(X, -Y));
}

std::string SpherePoint::to_text() const {
    if (is_infinity()) return "inf";
    return fmt_complex(to_complex());
}

std::uint64_t SpherePoint::saturation_count() { return g_saturations.load(); }

double spherical_distance(const SpherePoint& p, const SpherePoint& q) {
    double d = 2.0 * std::abs(p.a() * q.b() - q.a() * p.b());
    return d > 2.0 ? 2.0 : d;
}

}  // namespace skewdyn
