#pragma once

#include <array>
#include <atomic>
#include <complex>
#include <cstdint>
#include <string>

namespace skewdyn {

using Complex = std::complex<double>;

// A point of the Riemann sphere in unit-normalized projective coordinates
// [a : b], meaning z = a/b, with b == 0 the point at infinity.
//
// Invariants: |a|^2 + |b|^2 = 1 after construction, (a, b) != (0, 0).
// Points that differ by a unit-modulus scalar are the same sphere point;
// all comparisons go through spherical_distance, never through (a, b).
class SpherePoint {
public:
    SpherePoint() : a_(0.0, 0.0), b_(1.0, 0.0) {}  // the origin

    // Normalizes an arbitrary projective pair. Throws std::domain_error on
    // non-finite components or (0, 0).
    static SpherePoint from_projective(Complex a, Complex b);

    // Affine embedding. Non-finite z is rejected; |component| > 1e150 would
    // overflow |z|^2 and saturates to infinity (counted, see
    // saturation_count) because root-finder intermediates can be huge.
    static SpherePoint from_complex(Complex z);

    static SpherePoint infinity() { return SpherePoint(Complex(1.0, 0.0), Complex(0.0, 0.0)); }
    static SpherePoint zero() { return SpherePoint(); }

    Complex a() const { return a_; }
    Complex b() const { return b_; }

    bool is_infinity() const { return b_ == Complex(0.0, 0.0); }

    // z = a/b. Throws std::domain_error at infinity.
    Complex to_complex() const;

    // Unit-sphere embedding (X, Y, Z); the chordal metric is the Euclidean
    // distance between embedded points.
    std::array<double, 3> to_r3() const;
    static SpherePoint from_r3(const std::array<double, 3>& u);

    // "inf" or "re im" of the affine coordinate.
    std::string to_text() const;

    // Count of from_complex saturations to infinity since process start.
    static std::uint64_t saturation_count();

private:
    SpherePoint(Complex a, Complex b) : a_(a), b_(b) {}
    Complex a_, b_;
};

// Chordal distance 2|a1 b2 - a2 b1| for unit-normalized pairs; range [0, 2],
// 2 between antipodal points, 0 iff projectively equal.
double spherical_distance(const SpherePoint& p, const SpherePoint& q);

inline bool approx_eq(const SpherePoint& p, const SpherePoint& q, double tol = 1e-9) {
    return spherical_distance(p, q) < tol;
}

}  // namespace skewdyn
