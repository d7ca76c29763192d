#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "skewdyn/errors.hpp"
#include "skewdyn/rational_map.hpp"

using namespace skewdyn;

namespace {

Poly P(std::vector<Complex> c) { return Poly(std::move(c)); }

RationalMap poly_map(std::vector<Complex> num) {
    return RationalMap(P(std::move(num)), P({{1.0, 0.0}}));
}

RationalMap z2() { return poly_map({{0, 0}, {0, 0}, {1, 0}}); }
RationalMap z3() { return poly_map({{0, 0}, {0, 0}, {0, 0}, {1, 0}}); }

bool contains_root(const std::vector<RootCluster>& roots, Complex v, int mult,
                   double tol = 1e-8) {
    for (const auto& r : roots)
        if (std::abs(r.value - v) < tol && r.multiplicity == mult) return true;
    return false;
}

bool contains_point(const std::vector<MultPoint>& pts, const SpherePoint& p, int mult,
                    double tol = 1e-8) {
    for (const auto& mp : pts)
        if (spherical_distance(mp.point, p) < tol && mp.multiplicity == mult) return true;
    return false;
}

// Central finite difference of R at z, the independent check for derivatives.
Complex fd_derivative(const RationalMap& R, Complex z, double h = 1e-6) {
    auto val = [&](Complex x) { return R.num().eval(x) / R.den().eval(x); };
    return (val(z + h) - val(z - h)) / (2.0 * h);
}

std::mt19937_64 g_rng(2024);

Complex random_c(double scale = 1.0) {
    std::normal_distribution<double> g;
    return {scale * g(g_rng), scale * g(g_rng)};
}

}  // namespace

TEST_CASE("root finding basics") {
    // z^2 + 1
    auto r1 = find_roots(P({{1, 0}, {0, 0}, {1, 0}}));
    REQUIRE(r1.size() == 2);
    CHECK(contains_root(r1, {0, 1}, 1));
    CHECK(contains_root(r1, {0, -1}, 1));

    // (z - 1)^2 reported as one double root
    auto r2 = find_roots(P({{1, 0}, {-2, 0}, {1, 0}}));
    REQUIRE(r2.size() == 1);
    CHECK(contains_root(r2, {1, 0}, 2, 1e-6));

    // (z - 2)^2 (z + 1), expanded by hand: z^3 - 3z^2 + 4
    auto r3 = find_roots(P({{4, 0}, {0, 0}, {-3, 0}, {1, 0}}));
    CHECK(contains_root(r3, {2, 0}, 2, 1e-6));
    CHECK(contains_root(r3, {-1, 0}, 1));
}

TEST_CASE("root finding against constructed polynomials") {
    std::uniform_int_distribution<int> deg_d(3, 9);
    for (int trial = 0; trial < 40; ++trial) {
        int n = deg_d(g_rng);
        std::vector<Complex> roots;
        for (int i = 0; i < n; ++i) roots.push_back(random_c(2.0));
        Poly p = poly_from_roots(roots);
        auto found = find_roots(p);
        int total = 0;
        for (const auto& rc : found) total += rc.multiplicity;
        CHECK(total == n);
        // Every constructed root is represented by a nearby found root.
        for (Complex r : roots) {
            double best = 1e18;
            for (const auto& rc : found) best = std::min(best, std::abs(rc.value - r));
            CHECK(best < 1e-6 * std::max(1.0, std::abs(r)));
        }
    }
}

TEST_CASE("residual contract") {
    // High-degree random coefficients.
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Complex> c;
        for (int i = 0; i <= 12; ++i) c.push_back(random_c());
        Poly p = poly_trim(std::move(c));
        if (p.degree() < 1) continue;
        double maxc = p.max_coeff_modulus();
        for (const auto& rc : find_roots(p)) {
            double bound =
                1e-10 * maxc * std::pow(std::max(1.0, std::abs(rc.value)), p.degree());
            CHECK(std::abs(p.eval(rc.value)) <= bound);
        }
    }
}

TEST_CASE("evaluation on the sphere") {
    CHECK(spherical_distance(z2()(SpherePoint::from_complex({2, 0})),
                             SpherePoint::from_complex({4, 0})) < 1e-12);
    CHECK(z2()(SpherePoint::infinity()).is_infinity());

    // (z^2 + 1)/z has a pole at 0.
    RationalMap R(P({{1, 0}, {0, 0}, {1, 0}}), P({{0, 0}, {1, 0}}));
    CHECK(R(SpherePoint::zero()).is_infinity());
}

TEST_CASE("affine derivative") {
    CHECK(std::abs(derivative_value(z2(), Complex{3, 0}) - Complex{6, 0}) < 1e-12);
    CHECK(std::abs(derivative_value(z2(), Complex{0, 0})) == 0.0);

    // (2z + 1)/(z + 2): quotient rule gives 3/(z + 2)^2, so 3/4 at 0.
    RationalMap M(P({{1, 0}, {2, 0}}), P({{2, 0}, {1, 0}}));
    Complex d0 = derivative_value(M, Complex{0, 0});
    CHECK(std::abs(d0 - Complex{0.75, 0}) < 1e-12);
    CHECK(std::abs(d0 - fd_derivative(M, {0, 0})) < 1e-5);

    CHECK_THROWS_AS(derivative_value(M, Complex{-2, 0}), std::domain_error);
    CHECK_THROWS_AS(derivative_value(M, SpherePoint::infinity()), std::domain_error);
}

TEST_CASE("derivative matches central differences at random non-critical points") {
    RationalMap R(P({{0.3, 0.1}, {1, 0}, {0, 0}, {0.5, -0.2}}), P({{1, 0}, {0, 0}, {0.2, 0}}));
    int checked = 0;
    while (checked < 50) {
        Complex z = random_c();
        Complex qv = R.den().eval(z);
        if (std::abs(qv) < 0.1) continue;
        Complex dv = derivative_value(R, z);
        if (std::abs(dv) < 1e-3) continue;
        CHECK(std::abs(dv - fd_derivative(R, z)) <= 1e-5 * std::abs(dv) + 1e-8);
        ++checked;
    }
}

TEST_CASE("preimage fibers") {
    // z^2 = -1
    auto f1 = preimages(z2(), SpherePoint::from_complex({-1, 0}));
    REQUIRE(f1.size() == 2);
    CHECK(contains_point(f1, SpherePoint::from_complex({0, 1}), 1));
    CHECK(contains_point(f1, SpherePoint::from_complex({0, -1}), 1));

    // z^2 = infinity: double point at infinity.
    auto f2 = preimages(z2(), SpherePoint::infinity());
    REQUIRE(f2.size() == 1);
    CHECK(f2[0].point.is_infinity());
    CHECK(f2[0].multiplicity == 2);

    // z^3 = 8: the three cube roots of 8.
    auto f3 = preimages(z3(), SpherePoint::from_complex({8, 0}));
    REQUIRE(f3.size() == 3);
    Complex w = std::polar(1.0, 2.0 * M_PI / 3.0);
    CHECK(contains_point(f3, SpherePoint::from_complex({2, 0}), 1));
    CHECK(contains_point(f3, SpherePoint::from_complex(2.0 * w), 1));
    CHECK(contains_point(f3, SpherePoint::from_complex(2.0 * w * w), 1));
}

TEST_CASE("preimages evaluate back to the target") {
    std::vector<RationalMap> maps;
    maps.push_back(RationalMap(P({{0.1, 0}, {0, 0}, {1, 0}}), P({{1, 0}})));
    maps.push_back(RationalMap(P({{1, 0}, {0, 0}, {1, 0}}), P({{0, 0}, {1, 0}})));
    maps.push_back(RationalMap(P({{0, 0}, {1, 0}, {0, 0}, {0.7, 0.1}}), P({{1, 0}, {0.2, 0}})));
    for (const auto& R : maps) {
        for (int trial = 0; trial < 30; ++trial) {
            SpherePoint q = SpherePoint::from_complex(random_c(1.5));
            int total = 0;
            for (const auto& mp : preimages(R, q)) {
                total += mp.multiplicity;
                CHECK(spherical_distance(R(mp.point), q) < 1e-8);
            }
            CHECK(total == R.degree());
        }
    }
}

TEST_CASE("critical points") {
    auto c1 = critical_points(z2());
    REQUIRE(c1.size() == 2);
    CHECK(contains_point(c1, SpherePoint::zero(), 1));
    CHECK(contains_point(c1, SpherePoint::infinity(), 1));

    // z^3 - 3z: finite critical points solve 3z^2 - 3 = 0; infinity is doubly
    // critical for a cubic polynomial.
    RationalMap R = poly_map({{0, 0}, {-3, 0}, {0, 0}, {1, 0}});
    auto c2 = critical_points(R);
    CHECK(contains_point(c2, SpherePoint::from_complex({1, 0}), 1));
    CHECK(contains_point(c2, SpherePoint::from_complex({-1, 0}), 1));
    CHECK(contains_point(c2, SpherePoint::infinity(), 2));

    // Moebius maps have none.
    RationalMap M(P({{1, 0}, {2, 0}}), P({{2, 0}, {1, 0}}));
    CHECK(critical_points(M).empty());
}

TEST_CASE("critical point count never exceeds 2 deg - 2") {
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Complex> num, den;
        std::uniform_int_distribution<int> deg_d(1, 4);
        int dn = deg_d(g_rng), dd = deg_d(g_rng);
        for (int i = 0; i <= dn; ++i) num.push_back(random_c());
        for (int i = 0; i <= dd; ++i) den.push_back(random_c());
        RationalMap R{P(num), P(den), false};
        if (R.degree() < 1) continue;
        int total = 0;
        for (const auto& mp : critical_points(R)) total += mp.multiplicity;
        CHECK(total <= 2 * R.degree() - 2);
    }
}

TEST_CASE("composition") {
    RationalMap c1 = compose(z2(), z2());
    CHECK(c1.degree() == 4);
    CHECK(spherical_distance(c1(SpherePoint::from_complex({1.5, 0})),
                             SpherePoint::from_complex({std::pow(1.5, 4), 0})) < 1e-10);

    // (z^2 + c) . z^2 = z^4 + c
    Complex cc{0.25, -0.1};
    RationalMap c2 = compose(poly_map({cc, {0, 0}, {1, 0}}), z2());
    for (int trial = 0; trial < 5; ++trial) {
        Complex z = random_c();
        SpherePoint lhs = c2(SpherePoint::from_complex(z));
        SpherePoint rhs = SpherePoint::from_complex(std::pow(z, 4) + cc);
        CHECK(spherical_distance(lhs, rhs) < 1e-9);
    }

    // (1/z) . ((z+1)/(z-1)) = (z-1)/(z+1), checked at sample points.
    RationalMap inv(P({{1, 0}}), P({{0, 0}, {1, 0}}));
    RationalMap mob(P({{1, 0}, {1, 0}}), P({{-1, 0}, {1, 0}}));
    RationalMap comp = compose(inv, mob);
    RationalMap expect(P({{-1, 0}, {1, 0}}), P({{1, 0}, {1, 0}}));
    for (int trial = 0; trial < 5; ++trial) {
        SpherePoint z = SpherePoint::from_complex(random_c(2.0));
        CHECK(spherical_distance(comp(z), expect(z)) < 1e-10);
    }
}

TEST_CASE("composition degree is multiplicative on random draws") {
    std::uniform_int_distribution<int> deg_d(1, 4);
    int done = 0;
    while (done < 20) {
        int dn = deg_d(g_rng), dd = deg_d(g_rng);
        std::vector<Complex> a, b;
        for (int i = 0; i <= dn; ++i) a.push_back(random_c());
        for (int i = 0; i <= dd; ++i) b.push_back(random_c());
        RationalMap R{P(a), P({{1, 0}}), false};
        RationalMap S{P(b), P({{1, 0}, {0, 0}, {0.3, 0}}), false};
        CHECK(compose(R, S).degree() == R.degree() * S.degree());
        ++done;
    }
}

TEST_CASE("composition degree cap") {
    RationalMap big = z2();
    for (int i = 0; i < 3; ++i) big = compose(big, big);
    CHECK(big.degree() == 256);
    // One more squaring would reach 65536, past the 4096 cap.
    CHECK_THROWS_AS(compose(big, big), BudgetError);
}

TEST_CASE("sphere fixed points") {
    auto f1 = sphere_fixed_points(z2());
    REQUIRE(f1.size() == 3);
    CHECK(contains_point(f1, SpherePoint::zero(), 1));
    CHECK(contains_point(f1, SpherePoint::from_complex({1, 0}), 1));
    CHECK(contains_point(f1, SpherePoint::infinity(), 1));

    // Moebius rotation z -> 1/z fixes +1 and -1.
    RationalMap inv(P({{1, 0}}), P({{0, 0}, {1, 0}}));
    auto f2 = sphere_fixed_points(inv);
    REQUIRE(f2.size() == 2);
    CHECK(contains_point(f2, SpherePoint::from_complex({1, 0}), 1));
    CHECK(contains_point(f2, SpherePoint::from_complex({-1, 0}), 1));
}

TEST_CASE("chart derivative modulus") {
    // Multiplier of z^2 at the repelling fixed point 1 is 2; at the
    // super-attracting points 0 and infinity it vanishes.
    CHECK(chart_derivative_modulus(z2(), SpherePoint::from_complex({1, 0})) ==
          doctest::Approx(2.0));
    CHECK(chart_derivative_modulus(z2(), SpherePoint::zero()) == doctest::Approx(0.0));
    CHECK(chart_derivative_modulus(z2(), SpherePoint::infinity()) == doctest::Approx(0.0));

    // 1/z swaps charts at 0: |d(1/u)/...| is 1 for the involution.
    RationalMap inv(P({{1, 0}}), P({{0, 0}, {1, 0}}));
    CHECK(chart_derivative_modulus(inv, SpherePoint::zero()) == doctest::Approx(1.0));
}

TEST_CASE("family validation") {
    std::vector<RationalMap> ok;
    ok.push_back(z2());
    ok.push_back(RationalMap(P({{1, 0}, {2, 0}}), P({{2, 0}, {1, 0}})));
    MapFamily fam(std::move(ok));
    CHECK(fam.total_degree() == 3);

    std::vector<RationalMap> all_moebius;
    all_moebius.push_back(RationalMap(P({{1, 0}, {2, 0}}), P({{2, 0}, {1, 0}})));
    CHECK_THROWS_AS(MapFamily(std::move(all_moebius)), ConfigError);
}

TEST_CASE("shared-root diagnostic") {
    // (z^2 - 1) / (z - 1) is not in irreducible form.
    CHECK_THROWS_AS(RationalMap(P({{-1, 0}, {0, 0}, {1, 0}}), P({{-1, 0}, {1, 0}})),
                    ConfigError);
}
