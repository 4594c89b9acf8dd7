#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "doctest.h"
#include "kfrac/eigensolvers.hpp"
#include "kfrac/elliptic.hpp"
#include "kfrac/error.hpp"
#include "kfrac/kernels.hpp"
#include "kfrac/spectral.hpp"

using namespace kfrac;
constexpr double pi = std::numbers::pi;

namespace {
GridPtr line(std::size_t n, double d = 1.0) { return build_ray_grid(ConvexDomain::interval(d), 1, n); }

ScalarField field(Preset p, double value, double amplitude = 0.0, double exponent = 1.0) {
    ScalarField f;
    f.preset = p;
    f.value = value;
    f.amplitude = amplitude;
    f.exponent = exponent;
    return f;
}

CoefficientField coeffs(const GridPtr& g, ScalarField a, ScalarField rho) {
    return CoefficientField::make(a, rho, g->domain());
}

double max_entry_diff(const Matrix& x, const Matrix& y) {
    double d = 0.0;
    for (std::size_t e = 0; e < x.rows() * x.cols(); ++e) d = std::max(d, std::abs(x.data()[e] - y.data()[e]));
    return d;
}

// 1-D Marchaud derivative of u at x by tanh-sinh quadrature of the untruncated difference quotient
template <class U>
double marchaud_oracle(U&& u, double x, double a) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double ux = u(x);
    const double q = ts.integrate([&](double t) { return (ux - u(t)) * std::pow(x - t, -a - 1.0); }, 0.0, x, 1e-12);
    return (ux * std::pow(x, -a) + a * q) / boost::math::tgamma(1.0 - a);
}
}  // namespace

TEST_SUITE("elliptic") {

TEST_CASE("presets and coefficient constants") {
    CHECK(parse_preset("constant") == Preset::constant);
    CHECK(parse_preset("linear-ramp") == Preset::linear_ramp);
    CHECK(parse_preset("linear_ramp") == Preset::linear_ramp);
    CHECK(parse_preset("cosine") == Preset::cosine);
    CHECK(to_string(Preset::linear_ramp) == "linear-ramp");
    CHECK_THROWS_AS(parse_preset("gaussian"), ConfigError);
    const auto dom = ConvexDomain::sector(1.0, pi / 3.0);
    const auto c = CoefficientField::make(field(Preset::cosine, 2.0, 0.25), field(Preset::linear_ramp, 1.0, -0.5, 0.9), dom);
    CHECK(c.n == 2);
    CHECK(c.a0 == doctest::Approx(1.5));
    CHECK(c.a1 == doctest::Approx(2.5 * std::sqrt(2.0)));
    CHECK(c.lambda == 0.9);
    CHECK(c.inf_rho == doctest::Approx(0.5));
    CHECK(c.rho_monotone());
    CHECK(c.lip_M == doctest::Approx(0.5));
    CHECK_THROWS_AS(CoefficientField::make(field(Preset::constant, 1.0), field(Preset::linear_ramp, 1.0, 0.5, 1.5), dom),
                    DomainError);
}

TEST_CASE("coefficient validation by sampling") {
    for (const auto& dom : {ConvexDomain::interval(2.0), ConvexDomain::sector(1.0, pi / 2.0)}) {
        const auto c =
            CoefficientField::make(field(Preset::cosine, 1.0, 0.3), field(Preset::linear_ramp, 2.0, -0.4, 0.7), dom);
        const auto chk = validate_coefficients(c, dom, 42);
        CHECK(chk.ok());
        CHECK(chk.ellipticity_margin >= 0.0);
        auto tampered = c;
        tampered.lip_M *= 0.01;
        CHECK(validate_coefficients(tampered, dom, 42).holder_margin < 0.0);
        tampered = c;
        tampered.inf_rho = 2.0 * c.rho.sup();
        CHECK(validate_coefficients(tampered, dom, 42).positivity_margin < 0.0);
        tampered = c;
        tampered.a0 = 1.2;
        CHECK_FALSE(validate_coefficients(tampered, dom, 42).ok());
    }
}

TEST_CASE("one-dimensional stencil") {
    const std::size_t n = 64;
    const auto g = line(n);
    const double h = 1.0 / n;
    const auto c = coeffs(g, field(Preset::constant, 1.0), field(Preset::constant, 0.0));
    const Matrix l = assemble_L(g, c, 0.5).to_dense();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        CHECK(l(i, i) == doctest::Approx(2.0 / (h * h)).epsilon(1e-13));
        CHECK(l(i, i - 1) == doctest::Approx(-1.0 / (h * h)).epsilon(1e-13));
        CHECK(l(i, i + 1) == doctest::Approx(-1.0 / (h * h)).epsilon(1e-13));
        for (std::size_t j = 0; j < n; ++j)
            if (j + 1 < i || j > i + 1) CHECK(l(i, j) == 0.0);
    }
    // boundary faces at half-cell distance
    CHECK(l(0, 0) == doctest::Approx(3.0 / (h * h)).epsilon(1e-13));
    CHECK(l(n - 1, n - 1) == doctest::Approx(3.0 / (h * h)).epsilon(1e-13));
    CHECK_THROWS_AS(assemble_L(line(8), c, 0.5), DomainError);
    const auto disk = build_ray_grid(ConvexDomain::disk(1.0, {0.0, 0.0}, {-1.0, 0.0}), 4, 16);
    CHECK_THROWS_AS(assemble_L(disk, c, 0.5), ShapeError);
    const auto thin = build_ray_grid(ConvexDomain::sector(1.0, 1.0), 1, 16);
    CHECK_THROWS_AS(assemble_L(thin, c, 0.5), DomainError);
}

TEST_CASE("Dirichlet Laplacian spectrum") {
    const auto g = line(512);
    const auto c = coeffs(g, field(Preset::constant, 1.0), field(Preset::constant, 0.0));
    for (double alpha : {0.25, 0.75}) {
        const auto e = sym_eigs(assemble_L(g, c, alpha));
        for (int j = 1; j <= 5; ++j) CHECK(std::abs(e.values[j - 1] / (j * j * pi * pi) - 1.0) <= 1e-2);
    }
    // interval of length 2
    const auto g2 = line(512, 2.0);
    const auto e2 = sym_eigs(assemble_L(g2, coeffs(g2, field(Preset::constant, 3.0), field(Preset::constant, 0.0)), 0.5));
    for (int j = 1; j <= 5; ++j) CHECK(std::abs(e2.values[j - 1] / (3.0 * j * j * pi * pi / 4.0) - 1.0) <= 1e-2);
}

TEST_CASE("sector Laplacian against the Bessel zero") {
    const double theta = pi / 3.0;
    const auto g = build_ray_grid(ConvexDomain::sector(1.0, theta), 16, 32);
    const auto c = coeffs(g, field(Preset::constant, 1.0), field(Preset::constant, 0.0));
    const Matrix k = stiffness(*g, c.a);
    CHECK(max_entry_diff(k, k.transpose()) == 0.0);
    const double j1 = boost::math::cyl_bessel_j_zero(pi / theta, 1);
    const auto e = sym_eigs(assemble_L(g, c, 0.5));
    CHECK(std::abs(e.values[0] / (j1 * j1) - 1.0) <= 2e-2);
}

TEST_CASE("formal adjoint and real part") {
    const auto g = line(128);
    const auto c0 = coeffs(g, field(Preset::cosine, 1.0, 0.3), field(Preset::constant, 0.0));
    const auto l = assemble_L(g, c0, 0.5), lp = assemble_L_plus(g, c0, 0.5);
    CHECK(max_entry_diff(l.to_dense(), lp.to_dense()) == 0.0);
    const auto h0 = assemble_H(g, c0, 0.5);
    CHECK(max_entry_diff(h0.sym.to_dense(), l.to_dense()) <= 1e-12 * l.to_dense().max_abs());
    const auto zero = coeffs(g, field(Preset::constant, 0.0), field(Preset::constant, 0.0));
    CHECK(assemble_L_plus(g, zero, 0.5).to_dense().max_abs() == 0.0);
    CHECK(assemble_L(g, zero, 0.5).to_dense().max_abs() == 0.0);

    const auto c = coeffs(g, field(Preset::cosine, 1.0, 0.3), field(Preset::linear_ramp, 2.0, -0.5, 0.9));
    const auto h = assemble_H(g, c, 0.5);
    const Matrix s = h.sym.to_dense(), sa = h.sym.g_adjoint().to_dense();
    CHECK(max_entry_diff(s, sa) <= 1e-12 * s.max_abs());
    // in 1-D with uniform weights the right Marchaud matrix is the transpose of the left one
    CHECK(h.gap <= 1e-12);
    // on the sector the (t/r)^{n-1} weight of the left operator is absorbed by the gram weights
    for (std::size_t n : {32, 64}) {
        for (double a : {0.25, 0.75}) {
            const auto gs = build_ray_grid(ConvexDomain::sector(1.0, pi / 3.0), 8, n);
            CHECK(assemble_H(gs, coeffs(gs, c.a, c.rho), a).gap <= 1e-12);
        }
    }
}

TEST_CASE("comparators") {
    const auto g = line(512);
    CHECK_THROWS_AS(assemble_comparator(g, 0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(assemble_comparator(g, 1, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(assemble_comparator(g, 2, 1.0, 1.0), DomainError);
    const auto e = sym_eigs(assemble_comparator(g, 0, 1.0, 1.0)).values;
    CHECK(std::abs(e[0] / (pi * pi + 1.0) - 1.0) <= 1e-2);
    CHECK(pi * pi + 1.0 == doctest::Approx(10.8696).epsilon(1e-5));
    for (int j = 1; j <= 5; ++j) CHECK(std::abs(e[j - 1] / (j * j * pi * pi + 1.0) - 1.0) <= 1e-2);
    for (std::size_t j = 1; j < e.size(); ++j) CHECK(e[j] > e[j - 1]);
    const auto e2 = sym_eigs(assemble_comparator(g, 1, 2.5, 4.0)).values;
    for (int j = 1; j <= 5; ++j) CHECK(std::abs(e2[j - 1] / (2.5 * j * j * pi * pi + 4.0) - 1.0) <= 1e-2);
}

TEST_CASE("forms") {
    const auto g = line(256);
    const auto c0 = coeffs(g, field(Preset::constant, 1.0), field(Preset::constant, 0.0));
    const auto f0 = assemble_form_t(g, c0, 0.5);
    // first discrete eigenvector: T[u, u] = lambda_1 ||u||^2
    const auto l = assemble_L(g, c0, 0.5);
    const auto scaled = l.scaled_blocks();
    const auto eg = eig::symmetric_eigen(scaled[0], true);
    CVector u(256);
    const auto& w = g->weights();
    for (std::size_t i = 0; i < 256; ++i) u[i] = eg.vectors(i, 0) / std::sqrt(w[i]);
    double nu2 = 0.0;
    for (std::size_t i = 0; i < 256; ++i) nu2 += w[i] * std::norm(u[i]);
    CHECK(form_value(f0.t, u, u).real() == doctest::Approx(eg.values[0] * nu2).epsilon(1e-10));

    const auto c = coeffs(g, field(Preset::cosine, 1.0, 0.3), field(Preset::linear_ramp, 2.0, -0.5, 0.9));
    const auto f = assemble_form_t(g, c, 0.5);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    for (int rep = 0; rep < 5; ++rep) {
        CVector x(256), y(256);
        for (std::size_t i = 0; i < 256; ++i) {
            x[i] = {nd(rng), nd(rng)};
            y[i] = {nd(rng), nd(rng)};
        }
        const cplx ts = form_value(f.t_star, x, y);
        CHECK(std::abs(ts - std::conj(form_value(f.t, y, x))) <= 1e-13 * std::abs(ts));
        const cplx hx = form_value(f.h(), x, x);
        CHECK(std::abs(hx.imag()) <= 1e-12 * std::abs(hx));
        CHECK(hx.real() == doctest::Approx(form_value(f.t, x, x).real()).epsilon(1e-12));
    }
    const Matrix tt = f.t.transpose();
    CHECK(max_entry_diff(tt, f.t_star) == 0.0);
}

TEST_CASE("Green formula residual") {
    const auto c_flat = [](const GridPtr& g) {
        return coeffs(g, field(Preset::cosine, 1.0, 0.3), field(Preset::constant, 0.0));
    };
    CHECK(green_form_residual(line(512), c_flat(line(512)), 0.5) <= 1e-2);
    for (bool with_rho : {false, true}) {
        double prev = 0.0;
        for (std::size_t n : {128, 256, 512}) {
            const auto g = line(n);
            auto c = c_flat(g);
            if (with_rho) c = coeffs(g, c.a, field(Preset::linear_ramp, 1.0, -0.5, 0.9));
            const double r = green_form_residual(g, c, 0.5);
            if (prev > 0.0) CHECK(prev / r >= 1.5);
            prev = r;
        }
    }
    double prev = 0.0;
    for (std::size_t n : {32, 64, 128}) {
        const auto gs = build_ray_grid(ConvexDomain::sector(1.0, pi / 3.0), n / 4, n);
        const double r = green_form_residual(gs, coeffs(gs, field(Preset::cosine, 1.0, 0.3), field(Preset::constant, 1.0)), 0.5);
        if (n == 64) CHECK(r <= 1e-2);
        if (prev > 0.0) CHECK(prev / r >= 1.5);
        prev = r;
    }
}

TEST_CASE("consistency with the pointwise operator") {
    const double alpha = 0.5;
    auto u = [](double x) { return std::sin(pi * x); };
    const auto a = field(Preset::cosine, 1.0, 0.3), rho = field(Preset::constant, 1.0);
    double prev = INFINITY;
    for (std::size_t n : {128, 512}) {
        const auto g = line(n);
        const auto c = coeffs(g, a, rho);
        const auto lu = assemble_L(g, c, alpha).apply(sample(g, [&](double r, std::size_t) { return cplx(u(r)); }));
        // -(a u')' + rho D u
        const GridFunction want = sample(g, [&](double x, std::size_t) {
            const double ax = c.a(x), dax = -0.3 * pi * std::sin(pi * x);
            const double du = pi * std::cos(pi * x), d2u = -pi * pi * std::sin(pi * x);
            return cplx(-(dax * du + ax * d2u) + c.rho(x) * marchaud_oracle(u, x, alpha));
        });
        const double e = norm(lu - want) / norm(want);
        if (n == 512) CHECK(e <= 1e-2);
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("coercivity of the real part") {
    const auto g = line(256);
    const double alpha = 0.5;
    const auto c = coeffs(g, field(Preset::cosine, 1.0, 0.3), field(Preset::linear_ramp, 2.0, -0.5, 0.9));
    const double mu = mu_theoretical(alpha, 1, g->domain().diam(), c.lambda, c.lip_M, c.inf_rho, c.rho_monotone());
    const double margin = accretivity_margin(assemble_L(g, c, alpha));
    CHECK(margin >= 0.9 * (c.a0 * pi * pi + mu * c.inf_rho));
}

TEST_CASE("form order") {
    const auto g = line(128);
    const auto c = coeffs(g, field(Preset::cosine, 1.0, 0.3), field(Preset::linear_ramp, 2.0, -0.5, 0.9));
    const auto h = assemble_H(g, c, 0.5).sym;
    const auto same = form_order_check(h, h, h);
    CHECK(std::abs(same.lower_margin) <= 1e-10);
    CHECK(std::abs(same.upper_margin) <= 1e-10);
    CHECK(same.pass());
    const auto l0 = assemble_comparator(g, 0, 1e-3, 1e-3), l1 = assemble_comparator(g, 1, 1e3, 1e3);
    const auto ok = form_order_check(h, l0, l1);
    CHECK(ok.lower_margin > 0.0);
    CHECK(ok.upper_margin > 0.0);
    const auto rev = form_order_check(h, l1, l0);
    CHECK(rev.lower_margin < 0.0);
    CHECK(rev.upper_margin < 0.0);
    CHECK_FALSE(rev.pass());
    const double mu = mu_theoretical(0.5, 1, 1.0, c.lambda, c.lip_M, c.inf_rho, c.rho_monotone());
    const auto k = default_comparators(g, c, h, mu);
    CHECK(k.a_lo == doctest::Approx(0.5 * c.a0));
    CHECK(k.rho_lo == doctest::Approx(0.5 * std::min(mu * c.inf_rho, c.inf_rho)));
    CHECK(k.a_hi == doctest::Approx(2.0 * c.a1));
    CHECK(k.rho_hi == doctest::Approx(2.0 * k.form_bound));
    CHECK(form_order_check(h, assemble_comparator(g, 0, k.a_lo, k.rho_lo), assemble_comparator(g, 1, k.a_hi, k.rho_hi))
              .pass());
    const auto other = line(64);
    CHECK_THROWS_AS(form_order_check(h, assemble_comparator(other, 0, 1.0, 1.0), l1), ShapeError);
}

}  // TEST_SUITE
