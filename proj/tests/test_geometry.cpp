#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "kfrac/error.hpp"
#include "kfrac/geometry.hpp"
#include "kfrac/grid_function.hpp"

using namespace kfrac;
constexpr double pi = std::numbers::pi;

namespace {
// largest t with |P + e t - C| <= R, by bisection on the circle equation
double chord_by_bisection(Vec2 c, double radius, Vec2 p, Vec2 e) {
    auto inside = [&](double t) { return std::hypot(p[0] + e[0] * t - c[0], p[1] + e[1] * t - c[1]) <= radius; };
    double lo = 1e-14, hi = 2.0 * radius + 1.0;
    if (!inside(lo)) return 0.0;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        (inside(mid) ? lo : hi) = mid;
    }
    return lo;
}
}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("domain constants") {
    const auto iv = ConvexDomain::interval(2.5);
    CHECK(iv.diam() == 2.5);
    CHECK(iv.dim() == 1);
    const auto s = ConvexDomain::sector(1.0, pi / 2.0);
    CHECK(s.diam() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(ConvexDomain::sector(2.0, pi / 3.0).diam() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(ConvexDomain::sector(1.0, pi).diam() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(ConvexDomain::disk(1.5, {0.0, 0.0}, {-1.5, 0.0}).diam() == 3.0);
    CHECK_THROWS_AS(ConvexDomain::disk(1.0, {0.0, 0.0}, {0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(ConvexDomain::sector(1.0, 4.0), DomainError);
    CHECK_THROWS_AS(ConvexDomain::interval(0.0), DomainError);
}

TEST_CASE("ray lengths") {
    const auto disk = ConvexDomain::disk(1.0, {0.0, 0.0}, {-1.0, 0.0});
    const double e0[] = {1.0, 0.0};
    CHECK(ray_length(disk, e0).length == doctest::Approx(2.0).epsilon(1e-15));
    for (double phi : {-1.2, -0.4, 0.3, 1.0}) {
        const double e[] = {std::cos(phi), std::sin(phi)};
        CHECK(ray_length(disk, e).length == doctest::Approx(2.0 * std::cos(phi)).epsilon(1e-14));
    }
    const auto sec = ConvexDomain::sector(1.0, pi / 2.0);
    for (double phi : {-0.7, 0.0, 0.5}) {
        const double e[] = {std::cos(phi), std::sin(phi)};
        CHECK(ray_length(sec, e).length == 1.0);
        CHECK_FALSE(ray_length(sec, e).outside);
    }
    const double out[] = {std::cos(2.0), std::sin(2.0)};
    CHECK(ray_length(sec, out).outside);
    CHECK(ray_length(sec, out).length == 0.0);
    const double back[] = {-1.0, 0.0};
    CHECK(ray_length(disk, back).outside);
    const double not_unit[] = {2.0, 0.0};
    CHECK_THROWS_AS(ray_length(disk, not_unit), DomainError);
    const double one[] = {1.0};
    CHECK_THROWS_AS(ray_length(disk, one), ShapeError);
}

TEST_CASE("disk ray length against bisection") {
    const Vec2 c{0.3, -0.2};
    const double radius = 1.7;
    const double th = 0.9;
    const Vec2 p{c[0] + radius * std::cos(th), c[1] + radius * std::sin(th)};
    const auto disk = ConvexDomain::disk(radius, c, p);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-pi / 2.0 + 1e-3, pi / 2.0 - 1e-3);
    for (int k = 0; k < 100; ++k) {
        const double ang = disk.axis_angle() + u(rng);
        const Vec2 e{std::cos(ang), std::sin(ang)};
        const double got = ray_length(disk, e).length;
        CHECK(std::abs(got - chord_by_bisection(c, radius, p, e)) <= 1e-10);
    }
}

TEST_CASE("grid nodes and weights") {
    const auto g = build_ray_grid(ConvexDomain::interval(1.0), 1, 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(g->r(0, i) == (2.0 * static_cast<double>(i) + 1.0) / 16.0);
        CHECK(g->weights()[i] == 0.125);
    }
    const auto s = build_ray_grid(ConvexDomain::sector(1.0, pi / 2.0), 16, 32);
    for (std::size_t j = 0; j < s->n_dirs(); ++j)
        for (std::size_t i = 0; i + 1 < s->n_radial(); ++i) CHECK(s->r(j, i) < s->r(j, i + 1));
    for (double w : s->weights()) CHECK(w > 0.0);
    CHECK_THROWS_AS(build_ray_grid(ConvexDomain::interval(1.0), 1, 4), DomainError);
    CHECK_THROWS_AS(build_ray_grid(ConvexDomain::interval(1.0), 2, 16), DomainError);
    CHECK_THROWS_AS(build_ray_grid(ConvexDomain::sector(1.0, 1.0), 0, 16), DomainError);
}

TEST_CASE("area quadrature") {
    const auto sec = build_ray_grid(ConvexDomain::sector(1.0, pi / 2.0), 64, 64);
    const GridFunction one = sample(sec, [](double, std::size_t) { return cplx(1.0); });
    CHECK(std::abs(integrate(*sec, one).real() - pi / 4.0) <= 1e-3);
    const auto disk = build_ray_grid(ConvexDomain::disk(1.0, {0.0, 0.0}, {-1.0, 0.0}), 128, 128);
    const GridFunction one_d = sample(disk, [](double, std::size_t) { return cplx(1.0); });
    CHECK(std::abs(integrate(*disk, one_d).real() - pi) <= 1e-2);
}

TEST_CASE("interval quadrature") {
    const auto g = build_ray_grid(ConvexDomain::interval(2.0), 1, 64);
    CHECK(integrate(*g, GridFunction(g)) == cplx(0.0));
    CHECK(integrate(*g, sample(g, [](double, std::size_t) { return cplx(1.0); })).real() ==
          doctest::Approx(2.0).epsilon(1e-15));
    // midpoint rule is exact on linear functions
    CHECK(integrate(*g, sample(g, [](double r, std::size_t) { return cplx(3.0 * r - 1.0); })).real() ==
          doctest::Approx(4.0).epsilon(1e-14));
    const auto g1 = build_ray_grid(ConvexDomain::interval(1.0), 1, 64);
    CHECK(std::abs(integrate(*g1, sample(g1, [](double r, std::size_t) { return cplx(r); })).real() - 0.5) <=
          1.0 / (64.0 * 64.0));
    double prev = INFINITY;
    for (std::size_t n : {16, 32, 64, 128}) {
        const auto gn = build_ray_grid(ConvexDomain::interval(1.0), 1, n);
        const double err =
            std::abs(integrate(*gn, sample(gn, [](double r, std::size_t) { return cplx(r * r); })).real() - 1.0 / 3.0);
        if (std::isfinite(prev)) CHECK(prev / err >= 3.0);
        prev = err;
    }
}

TEST_CASE("grid function algebra and shape checks") {
    const auto g = build_ray_grid(ConvexDomain::interval(1.0), 1, 16);
    const auto h = build_ray_grid(ConvexDomain::interval(1.0), 1, 32);
    const GridFunction f = sample(g, [](double r, std::size_t) { return cplx(r, 1.0); });
    CHECK(norm(f - f) == 0.0);
    CHECK(inner(f, f).imag() == 0.0);
    CHECK(norm(cplx(2.0) * f) == doctest::Approx(2.0 * norm(f)).epsilon(1e-15));
    const GridFunction other = sample(h, [](double, std::size_t) { return cplx(1.0); });
    CHECK_THROWS_AS(inner(f, other), ShapeError);
    CHECK_THROWS_AS(f + other, ShapeError);
}

}  // TEST_SUITE
