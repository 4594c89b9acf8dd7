#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "kfrac/directional.hpp"
#include "kfrac/elliptic.hpp"
#include "kfrac/error.hpp"
#include "kfrac/kernels.hpp"
#include "kfrac/spectral.hpp"

using namespace kfrac;
constexpr double pi = std::numbers::pi;

namespace {
Matrix random_matrix(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Matrix m(n, n);
    for (std::size_t e = 0; e < n * n; ++e) m.data()[e] = nd(rng);
    return m;
}

std::vector<double> random_gram(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    std::vector<double> w(n);
    for (auto& x : w) x = u(rng);
    return w;
}

// G-symmetric: A = G^{-1} S with S symmetric
OperatorMatrix g_symmetric(std::size_t n, std::uint64_t seed) {
    Matrix s = random_matrix(n, seed);
    s = 0.5 * (s + s.transpose());
    const auto w = random_gram(n, seed + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (auto& v : s.row(i)) v /= w[i];
    return OperatorMatrix::dense(s, w, "sym");
}

std::vector<cplx> zetas(const std::vector<RangeSample>& s) {
    std::vector<cplx> z;
    for (const auto& x : s) z.push_back(x.zeta);
    return z;
}

GridPtr line(std::size_t n) { return build_ray_grid(ConvexDomain::interval(1.0), 1, n); }

CoefficientField canonical(const GridPtr& g) {
    ScalarField a, rho;
    a.preset = Preset::cosine;
    a.amplitude = 0.3;
    rho.preset = Preset::linear_ramp;
    rho.value = 2.0;
    rho.amplitude = -0.5;
    rho.exponent = 0.9;
    return CoefficientField::make(a, rho, g->domain());
}
}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("sym_eigs") {
    Matrix d(4, 4);
    d(0, 0) = 4.0;
    d(1, 1) = -2.0;
    d(2, 2) = 1.0;
    d(3, 3) = 0.5;
    const auto e = sym_eigs(OperatorMatrix::dense(d, {1.0, 2.0, 3.0, 4.0}, "diag"));
    CHECK(e.values == std::vector<double>{-2.0, 0.5, 1.0, 4.0});
    const auto a = g_symmetric(40, 3);
    const auto s = sym_eigs(a);
    CHECK(s.values.size() == 40);
    CHECK(s.max_residual <= 1e-8);
    // oracle: generalized problem (S, G) with Eigen
    const Matrix m = a.to_dense();
    Eigen::MatrixXd S(40, 40), G = Eigen::MatrixXd::Zero(40, 40);
    for (std::size_t i = 0; i < 40; ++i) {
        G(i, i) = a.gram()[i];
        for (std::size_t j = 0; j < 40; ++j) S(i, j) = a.gram()[i] * m(i, j);
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ref(S, G);
    for (std::size_t k = 0; k < 40; ++k) CHECK(std::abs(s.values[k] - ref.eigenvalues()(k)) <= 1e-10);
    CHECK_THROWS_AS(sym_eigs(OperatorMatrix::dense(random_matrix(5, 1), random_gram(5, 2), "ns")), DomainError);
}

TEST_CASE("Laplacian spectrum through sym_eigs") {
    const auto g = line(512);
    ScalarField a, rho;
    rho.value = 0.0;
    const auto e = sym_eigs(assemble_L(g, CoefficientField::make(a, rho, g->domain()), 0.5));
    CHECK(e.values.size() == 512);
    for (int j = 1; j <= 5; ++j) CHECK(std::abs(e.values[j - 1] / (j * j * pi * pi) - 1.0) <= 1e-2);
}

TEST_CASE("general_eigs") {
    Matrix rot(2, 2);
    rot(0, 1) = -1.0;
    rot(1, 0) = 1.0;
    const auto r = general_eigs(OperatorMatrix::dense(rot, {1.0, 1.0}, "rot"));
    REQUIRE(r.values.size() == 2);
    CHECK(std::abs(r.values[0] - cplx(0.0, -1.0)) <= 1e-14);
    CHECK(std::abs(r.values[1] - cplx(0.0, 1.0)) <= 1e-14);
    const auto a = g_symmetric(30, 9);
    const auto ge = general_eigs(a);
    const auto se = sym_eigs(a);
    for (std::size_t k = 0; k < 30; ++k) {
        CHECK(std::abs(ge.values[k].real() - se.values[k]) <= 1e-8);
        CHECK(std::abs(ge.values[k].imag()) <= 1e-8);
    }
    const auto b = OperatorMatrix::dense(random_matrix(25, 4), random_gram(25, 5), "rand");
    const auto gb = general_eigs(b);
    for (std::size_t k = 1; k < gb.values.size(); ++k) {
        const cplx p = gb.values[k - 1], q = gb.values[k];
        CHECK((p.real() < q.real() || (p.real() == q.real() && p.imag() <= q.imag())));
    }
    CHECK(gb.max_residual <= 1e-8);
    // eigenvalues do not depend on the gram matrix
    Eigen::MatrixXd e(25, 25);
    const Matrix bd = b.to_dense();
    for (std::size_t i = 0; i < 25; ++i)
        for (std::size_t j = 0; j < 25; ++j) e(i, j) = bd(i, j);
    Eigen::EigenSolver<Eigen::MatrixXd> es(e, false);
    for (Eigen::Index k = 0; k < 25; ++k) {
        const cplx z = es.eigenvalues()(k);
        double best = INFINITY;
        for (const cplx w : gb.values) best = std::min(best, std::abs(w - z));
        CHECK(best <= 1e-9 * (1.0 + std::abs(z)));
    }
}

TEST_CASE("numerical range") {
    CHECK_THROWS_AS(numerical_range(g_symmetric(5, 1), 3), DomainError);
    const auto id = OperatorMatrix::dense(Matrix::identity(6), random_gram(6, 3), "id");
    for (const auto& s : numerical_range(id, 8, 20)) CHECK(std::abs(s.zeta - cplx(1.0)) <= 1e-12);
    const auto a = g_symmetric(20, 4);
    const auto ev = sym_eigs(a).values;
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& s : numerical_range(a, 16, 50)) {
        CHECK(std::abs(s.zeta.imag()) <= 1e-10 * (1.0 + std::abs(s.zeta)));
        CHECK(s.zeta.real() >= ev.front() - 1e-10);
        CHECK(s.zeta.real() <= ev.back() + 1e-10);
        if (s.kind != "random") {
            lo = std::min(lo, s.zeta.real());
            hi = std::max(hi, s.zeta.real());
        }
    }
    CHECK(lo == doctest::Approx(ev.front()).epsilon(1e-10));
    CHECK(hi == doctest::Approx(ev.back()).epsilon(1e-10));
}

TEST_CASE("numerical range certificates and containment") {
    const auto b = OperatorMatrix::dense(random_matrix(30, 6), random_gram(30, 7), "rand");
    const auto samples = numerical_range(b, 32, 100, 42);
    CHECK(samples.size() == 32 * 2 + 100);
    for (const auto& s : samples) CHECK(std::abs(rayleigh_quotient(b, s.v) - s.zeta) <= 1e-10 * (1.0 + std::abs(s.zeta)));
    const auto z = zetas(samples);
    double scale = 0.0;
    for (const cplx x : z) scale = std::max(scale, std::abs(x));
    for (const cplx e : general_eigs(b).values) CHECK(hull_distance(z, e) <= 1e-6 * scale);
    // deterministic and policy independent
    const auto again = numerical_range(b, 32, 100, 42, Exec::serial);
    bool same = true;
    for (std::size_t k = 0; k < samples.size(); ++k) same = same && samples[k].zeta == again[k].zeta;
    CHECK(same);
}

TEST_CASE("accretivity margin") {
    CHECK(accretivity_margin(OperatorMatrix::dense(Matrix::identity(7), random_gram(7, 1), "id")) ==
          doctest::Approx(1.0).epsilon(1e-12));
    const auto b = OperatorMatrix::dense(random_matrix(20, 2), random_gram(20, 3), "rand");
    CHECK(accretivity_margin(b) == doctest::Approx(accretivity_margin(b.g_symmetric_part())).epsilon(1e-12));
    // minimum of Re (Au, u)_G / ||u||^2 over random u never goes below it
    const double m = accretivity_margin(b);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    for (int rep = 0; rep < 200; ++rep) {
        CVector u(20);
        for (auto& x : u) x = {nd(rng), nd(rng)};
        CHECK(rayleigh_quotient(b, u).real() >= m - 1e-12);
    }
}

TEST_CASE("accretivity of the weighted Kipriyanov matrix") {
    for (const auto& dom : {ConvexDomain::sector(1.0, pi / 2.0), ConvexDomain::interval(1.0)}) {
        double prev = -INFINITY;
        for (std::size_t n : {32, 64, 128}) {
            const auto g = build_ray_grid(dom, dom.dim() == 1 ? 1 : 8, n);
            const double mu = mu_theoretical(0.5, dom.dim(), dom.diam(), 1.0, 0.0, 1.0, true);
            const double m = accretivity_margin(assemble_matrix(g, {DirOp::formal, 0.5, 0.0}));
            CHECK(m >= 0.9 * mu);
            CHECK(m >= prev - 1e-12);
            prev = m;
        }
    }
}

TEST_CASE("sector fit") {
    const std::vector<cplx> real{3.0, 1.5, 2.0};
    const auto f = sector_fit(real);
    CHECK(f.gamma == 1.5);
    CHECK(f.theta == 0.0);
    CHECK_FALSE(f.degenerate);
    const std::vector<cplx> pm{{1.0, 1.0}, {1.0, -1.0}};
    const auto d = sector_fit(pm);
    CHECK(d.gamma == 1.0);
    CHECK(d.theta == doctest::Approx(pi / 2.0));
    CHECK(d.degenerate);
    const std::vector<cplx> wedge{{1.0, 0.0}, {2.0, 1.0}, {2.0, -0.5}, {3.0, 0.2}};
    const auto w = sector_fit(wedge);
    CHECK(w.gamma == 1.0);
    CHECK(w.theta == doctest::Approx(pi / 4.0).epsilon(1e-14));
    CHECK_THROWS_AS(sector_fit(std::vector<cplx>{}), DomainError);
}

TEST_CASE("hull distance") {
    const std::vector<cplx> sq{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.5, 0.5}};
    CHECK(hull_distance(sq, {0.3, 0.7}) == 0.0);
    CHECK(hull_distance(sq, {2.0, 0.5}) == doctest::Approx(1.0));
    CHECK(hull_distance(sq, {2.0, 2.0}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(hull_distance(std::vector<cplx>{{1.0, 1.0}}, {4.0, 5.0}) == doctest::Approx(5.0));
    CHECK(hull_distance(std::vector<cplx>{{0.0, 0.0}, {2.0, 0.0}}, {1.0, 1.0}) == doctest::Approx(1.0));
}

TEST_CASE("canonical one-dimensional operator") {
    const auto g = line(256);
    const auto c = canonical(g);
    const auto l = assemble_L(g, c, 0.5);
    const auto samples = numerical_range(l, 32, 100);
    const auto z = zetas(samples);
    const auto fit = sector_fit(z);
    CHECK(fit.gamma > 0.0);
    CHECK(fit.theta < pi / 2.0);
    CHECK_FALSE(fit.degenerate);
    for (const cplx x : z) CHECK(x.real() >= fit.gamma);
    for (const cplx e : general_eigs(l).values) CHECK(e.real() >= fit.gamma - 1e-9 * std::abs(e));
    const double mu = mu_theoretical(0.5, 1, 1.0, c.lambda, c.lip_M, c.inf_rho, c.rho_monotone());
    CHECK(accretivity_margin(l) >= 0.9 * (c.a0 * pi * pi + mu * c.inf_rho));
}

TEST_CASE("two-sided eigenvalue bounds") {
    const std::vector<double> x{1.0, 2.0, 3.0};
    const auto same = eigen_bounds_check(x, x, x);
    CHECK(same.lower_margin == 0.0);
    CHECK(same.upper_margin == 0.0);
    CHECK(same.pass());
    CHECK_THROWS_AS(eigen_bounds_check(x, std::vector<double>{1.0, 2.0}, x), ShapeError);
    CHECK_THROWS_AS(eigen_bounds_check(x, std::vector<double>{2.0, 1.0, 3.0}, x), DomainError);
    const std::vector<double> lo{0.5, 1.9, 3.5}, hi{1.5, 2.5, 3.2};
    const auto bad = eigen_bounds_check(lo, x, hi);
    CHECK(bad.lower_margin == doctest::Approx(-0.5));
    CHECK(bad.worst_lower == 2);
    CHECK(bad.upper_margin == doctest::Approx(0.2));
    CHECK_FALSE(bad.pass());

    const auto g = line(128);
    const auto c = canonical(g);
    const auto h = assemble_H(g, c, 0.5).sym;
    const double mu = mu_theoretical(0.5, 1, 1.0, c.lambda, c.lip_M, c.inf_rho, c.rho_monotone());
    const auto k = default_comparators(g, c, h, mu);
    const auto l0 = assemble_comparator(g, 0, k.a_lo, k.rho_lo), l1 = assemble_comparator(g, 1, k.a_hi, k.rho_hi);
    REQUIRE(form_order_check(h, l0, l1).pass());
    const auto chk = eigen_bounds_check(sym_eigs(l0).values, sym_eigs(h).values, sym_eigs(l1).values);
    CHECK(chk.pass());
    CHECK(chk.lower_margin > 0.0);
    CHECK(chk.upper_margin > 0.0);
}

TEST_CASE("parametric sector constants") {
    const auto s = SectorConstants::compute(1.0, 2.0, 1.0, 0.5, 0.25, 1.5, 2.0, 0.75, 0.8, 1.2);
    const double k = 1.0 / (0.25 * std::pow(0.5, 2.0 - 1.5) * 2.0 + 2.0);
    CHECK(s.k == doctest::Approx(k).epsilon(1e-14));
    CHECK(s.gamma == doctest::Approx(0.8 * 1.2 - k * (0.25 * std::pow(0.5, -1.5) * 1.5 + 4.0)).epsilon(1e-14));
    CHECK(s.theta == doctest::Approx(std::atan(1.0 / k)).epsilon(1e-14));
    CHECK(s.theta > 0.0);
    CHECK(s.theta < pi / 2.0);
    CHECK_THROWS_AS(SectorConstants::compute(1.0, 2.0, 1.0, 0.5, 0.0, 1.5, 2.0, 0.75, 0.8, 1.2), DomainError);
    CHECK_THROWS_AS(SectorConstants::compute(1.0, 2.0, 1.0, 0.5, 0.25, 1.5, 2.0, 1.0, 0.8, 1.2), DomainError);
}

}  // TEST_SUITE
