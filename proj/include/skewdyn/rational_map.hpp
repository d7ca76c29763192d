#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "skewdyn/poly.hpp"
#include "skewdyn/sphere.hpp"

namespace skewdyn {

// A sphere point with an integer multiplicity. Preimage fibers, critical
// points and fixed points are multisets of these.
struct MultPoint {
    SpherePoint point;
    int multiplicity;
};

// Rational map R = P/Q in irreducible form. Coprimality of (P, Q) is the
// caller's contract; the constructor only runs a heuristic shared-root check
// (mutual root proximity at 1e-8) and rejects detected violations.
// Coefficients are jointly rescaled so the max modulus over both lists is 1,
// which leaves the map unchanged and bounds every later evaluation.
class RationalMap {
public:
    RationalMap(Poly num, Poly den, bool check_coprime = true);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    int degree() const { return degree_; }

    // Homogeneous evaluation: finite non-poles map to P(z)/Q(z), poles to
    // infinity, infinity via the leading terms. Throws NumericError when both
    // homogeneous forms vanish (non-coprime input pair).
    SpherePoint operator()(const SpherePoint& p) const;

private:
    Poly num_, den_;
    int degree_;
};

// Affine derivative (P'Q - PQ')/Q^2 at finite z. Throws std::domain_error at
// a pole of R; derivatives at poles and infinity go through
// chart_derivative_modulus below.
Complex derivative_value(const RationalMap& R, Complex z);
Complex derivative_value(const RationalMap& R, const SpherePoint& p);

// |d(chart_out . R . chart_in^{-1})/du| at u = chart_in(p), where each chart
// is the identity for |z| <= 1 and z -> 1/z otherwise. Factors multiply along
// orbits into the derivative cocycle; for a periodic orbit the product is the
// multiplier modulus, independent of the chart choices.
double chart_derivative_modulus(const RationalMap& R, const SpherePoint& p);

// The full degree(R) preimage fiber of q, counted with multiplicity:
// roots of qb*P - qa*Q plus infinity filling the degree drop.
std::vector<MultPoint> preimages(const RationalMap& R, const SpherePoint& q);

// Critical points with multiplicity: finite ones are the roots of
// W = P'Q - PQ'; infinity carries multiplicity 2*deg - 2 - deg(W).
// Total multiplicity is always 2*deg - 2.
std::vector<MultPoint> critical_points(const RationalMap& R);

// Fixed points of R on the sphere with multiplicity: roots of P - zQ plus
// infinity filling the count to deg + 1. Throws NumericError for the
// identity map (P == zQ), whose fixed-point set is not discrete.
std::vector<MultPoint> sphere_fixed_points(const RationalMap& R);

// outer . inner, degree = deg(outer) * deg(inner), capped at 4096.
RationalMap compose(const RationalMap& outer, const RationalMap& inner);

using Letter = std::uint8_t;  // 1-based symbol

// The generating family {R_1, ..., R_N}. At least one degree must be >= 2.
class MapFamily {
public:
    explicit MapFamily(std::vector<RationalMap> maps);

    int size() const { return static_cast<int>(maps_.size()); }
    const RationalMap& map(Letter v) const { return maps_[static_cast<size_t>(v - 1)]; }
    int map_degree(Letter v) const { return map(v).degree(); }
    int total_degree() const { return total_degree_; }  // d_1 + ... + d_N

private:
    std::vector<RationalMap> maps_;
    int total_degree_;
};

// R_{c[m-1]} . ... . R_{c[0]}: the map applied along one period of the cycle
// read left to right (c[0] acts first).
RationalMap compose_cycle(const MapFamily& fam, std::span<const Letter> cycle);

}  // namespace skewdyn
