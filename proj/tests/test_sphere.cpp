#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "skewdyn/sphere.hpp"

using namespace skewdyn;

namespace {

SpherePoint random_point(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    return SpherePoint::from_projective({g(rng), g(rng)}, {g(rng), g(rng)});
}

}  // namespace

TEST_CASE("affine embedding") {
    SpherePoint origin = SpherePoint::from_complex({0.0, 0.0});
    CHECK(std::abs(origin.a()) == doctest::Approx(0.0));
    CHECK(std::abs(origin.b()) == doctest::Approx(1.0));

    SpherePoint one = SpherePoint::from_complex({1.0, 0.0});
    CHECK(std::abs(one.a()) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(one.b()) == doctest::Approx(1.0 / std::sqrt(2.0)));

    CHECK_THROWS_AS(SpherePoint::from_complex({std::nan(""), 0.0}), std::domain_error);
    CHECK_THROWS_AS(SpherePoint::from_complex(
                        {std::numeric_limits<double>::infinity(), 0.0}),
                    std::domain_error);

    // Overflow-scale inputs saturate to infinity and bump the counter.
    auto before = SpherePoint::saturation_count();
    SpherePoint big = SpherePoint::from_complex({1e300, 0.0});
    CHECK(big.is_infinity());
    CHECK(SpherePoint::saturation_count() == before + 1);

    // Accepted up to the documented 1e150 guard.
    SpherePoint large = SpherePoint::from_complex({1e149, 0.0});
    CHECK_FALSE(large.is_infinity());
}

TEST_CASE("round trip within relative 1e-12 over twelve decades") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> expo(-12.0, 12.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    for (int i = 0; i < 2000; ++i) {
        double r = std::pow(10.0, expo(rng));
        Complex z = std::polar(r, angle(rng));
        Complex back = SpherePoint::from_complex(z).to_complex();
        CHECK(std::abs(back - z) <= 1e-12 * std::abs(z));
    }
}

TEST_CASE("chordal distance values") {
    SpherePoint zero = SpherePoint::zero();
    SpherePoint inf = SpherePoint::infinity();
    SpherePoint one = SpherePoint::from_complex({1.0, 0.0});

    CHECK(spherical_distance(zero, inf) == doctest::Approx(2.0));
    CHECK(spherical_distance(one, one) == 0.0);
    CHECK(spherical_distance(zero, one) == doctest::Approx(std::sqrt(2.0)));

    // Matches the affine formula 2|z1-z2|/sqrt((1+|z1|^2)(1+|z2|^2)).
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int i = 0; i < 500; ++i) {
        Complex z1{g(rng), g(rng)}, z2{g(rng), g(rng)};
        double expected = 2.0 * std::abs(z1 - z2) /
                          std::sqrt((1.0 + std::norm(z1)) * (1.0 + std::norm(z2)));
        double got = spherical_distance(SpherePoint::from_complex(z1),
                                        SpherePoint::from_complex(z2));
        CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("approx_eq and projective scalar invariance") {
    SpherePoint p = SpherePoint::from_complex({0.3, -0.8});
    CHECK(approx_eq(p, p, 1e-9));
    CHECK_FALSE(approx_eq(SpherePoint::zero(), SpherePoint::infinity(), 1e-9));

    SpherePoint q1 = SpherePoint::from_projective({1.0, 0.0}, {1.0, 0.0});
    SpherePoint q2 = SpherePoint::from_projective({-1.0, 0.0}, {-1.0, 0.0});
    CHECK(approx_eq(q1, q2, 1e-9));

    // Unit-modulus complex scalar too.
    Complex u = std::polar(1.0, 0.77);
    SpherePoint q3 = SpherePoint::from_projective(u * Complex{1.0, 0.0}, u * Complex{1.0, 0.0});
    CHECK(approx_eq(q1, q3, 1e-9));
}

TEST_CASE("triangle inequality on random triples") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 3000; ++i) {
        SpherePoint a = random_point(rng), b = random_point(rng), c = random_point(rng);
        CHECK(spherical_distance(a, c) <=
              spherical_distance(a, b) + spherical_distance(b, c) + 1e-10);
    }
}

TEST_CASE("normalization is idempotent") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 1000; ++i) {
        SpherePoint p = random_point(rng);
        SpherePoint q = SpherePoint::from_projective(p.a(), p.b());
        CHECK(q.a() == p.a());
        CHECK(q.b() == p.b());
    }
}

TEST_CASE("unit sphere embedding is isometric to the chordal metric") {
    std::mt19937_64 rng(55);
    for (int i = 0; i < 500; ++i) {
        SpherePoint p = random_point(rng), q = random_point(rng);
        auto u = p.to_r3(), v = q.to_r3();
        double euclid = std::sqrt((u[0] - v[0]) * (u[0] - v[0]) +
                                  (u[1] - v[1]) * (u[1] - v[1]) +
                                  (u[2] - v[2]) * (u[2] - v[2]));
        CHECK(euclid == doctest::Approx(spherical_distance(p, q)).epsilon(1e-10));
        // Embedding round trip.
        CHECK(spherical_distance(SpherePoint::from_r3(u), p) < 1e-12);
    }
}

TEST_CASE("text form") {
    CHECK(SpherePoint::infinity().to_text() == "inf");
    CHECK(SpherePoint::zero().to_text() == "0 0");
}
