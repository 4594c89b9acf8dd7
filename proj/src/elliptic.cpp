#include "kfrac/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "kfrac/directional.hpp"
#include "kfrac/eigensolvers.hpp"
#include "kfrac/error.hpp"
#include "kfrac/spectral.hpp"

namespace kfrac {

namespace {
constexpr double pi = std::numbers::pi;
}

Preset parse_preset(const std::string& s) {
    if (s == "constant") return Preset::constant;
    if (s == "linear-ramp" || s == "linear_ramp") return Preset::linear_ramp;
    if (s == "cosine") return Preset::cosine;
    throw ConfigError("unknown coefficient preset '" + s + "' (constant, linear-ramp, cosine)");
}

std::string to_string(Preset p) {
    switch (p) {
        case Preset::constant: return "constant";
        case Preset::linear_ramp: return "linear-ramp";
        case Preset::cosine: return "cosine";
    }
    return "?";
}

double ScalarField::operator()(double r) const {
    switch (preset) {
        case Preset::constant: return value;
        case Preset::linear_ramp: return value * (1.0 + amplitude * std::pow(std::max(r, 0.0) / scale, exponent));
        case Preset::cosine: return value * (1.0 + amplitude * std::cos(pi * r / scale));
    }
    return value;
}

double ScalarField::inf() const {
    switch (preset) {
        case Preset::constant: return value;
        case Preset::linear_ramp: return value * std::min(1.0, 1.0 + amplitude);
        case Preset::cosine: return value * (1.0 - std::abs(amplitude));
    }
    return value;
}

double ScalarField::sup() const {
    switch (preset) {
        case Preset::constant: return value;
        case Preset::linear_ramp: return value * std::max(1.0, 1.0 + amplitude);
        case Preset::cosine: return value * (1.0 + std::abs(amplitude));
    }
    return value;
}

double ScalarField::holder_exponent() const { return preset == Preset::linear_ramp ? exponent : 1.0; }

double ScalarField::holder_constant() const {
    switch (preset) {
        case Preset::constant: return 0.0;
        case Preset::linear_ramp: return std::abs(value * amplitude) / std::pow(scale, exponent);
        case Preset::cosine: return std::abs(value * amplitude) * pi / scale;
    }
    return 0.0;
}

bool ScalarField::nonincreasing() const {
    switch (preset) {
        case Preset::constant: return true;
        case Preset::linear_ramp: return value * amplitude <= 0.0;
        case Preset::cosine: return value * amplitude >= 0.0;
    }
    return false;
}

CoefficientField CoefficientField::make(ScalarField a, ScalarField rho, const ConvexDomain& dom) {
    if (a.preset == Preset::linear_ramp && !(a.exponent > 0.0 && a.exponent <= 1.0))
        throw DomainError("linear-ramp exponent must lie in (0, 1]");
    if (rho.preset == Preset::linear_ramp && !(rho.exponent > 0.0 && rho.exponent <= 1.0))
        throw DomainError("linear-ramp exponent must lie in (0, 1]");
    a.scale = dom.diam();
    rho.scale = dom.diam();
    CoefficientField c;
    c.a = a;
    c.rho = rho;
    c.n = dom.dim();
    c.a0 = a.inf();
    c.a1 = a.sup() * std::sqrt(static_cast<double>(c.n));
    c.lambda = rho.holder_exponent();
    c.lip_M = rho.holder_constant();
    c.inf_rho = rho.inf();
    return c;
}

CoefficientCheck validate_coefficients(const CoefficientField& c, const ConvexDomain& dom, std::uint64_t seed,
                                       int samples) {
    std::mt19937_64 rng(seed);
    const double D = dom.diam();
    std::uniform_real_distribution<double> u(-D, D);
    std::vector<Vec2> pts;
    while (static_cast<int>(pts.size()) < samples) {
        Vec2 q = dom.dim() == 1 ? Vec2{std::abs(u(rng)) * dom.length() / D, 0.0}
                                : Vec2{dom.pole()[0] + u(rng), dom.pole()[1] + u(rng)};
        if (dom.contains(q)) pts.push_back(q);
    }
    auto dist = [&](Vec2 q) { return std::hypot(q[0] - dom.pole()[0], q[1] - dom.pole()[1]); };
    CoefficientCheck chk;
    chk.ellipticity_margin = INFINITY;
    chk.positivity_margin = INFINITY;
    chk.holder_margin = INFINITY;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double r = dist(pts[k]);
        chk.ellipticity_margin = std::min(chk.ellipticity_margin, c.a(r) - c.a0);
        chk.positivity_margin = std::min(chk.positivity_margin, c.rho(r) - c.inf_rho);
        const Vec2 p = pts[(k * 7919 + 1) % pts.size()];
        const double gap = std::hypot(pts[k][0] - p[0], pts[k][1] - p[1]);
        const double bound = c.lip_M * std::pow(gap, c.lambda);
        chk.holder_margin = std::min(chk.holder_margin, bound - std::abs(c.rho(r) - c.rho(dist(p))) + 1e-14);
    }
    return chk;
}

namespace {

template <class F>
double gauss_mean(F&& f, double lo, double hi) {
    const double m = 0.5 * (lo + hi), delta = (hi - lo) / (2.0 * std::sqrt(3.0));
    return 0.5 * (f(m - delta) + f(m + delta));
}

void add_face(Matrix& k, std::size_t p, std::size_t q, double tau) {
    k(p, p) += tau;
    k(q, q) += tau;
    k(p, q) -= tau;
    k(q, p) -= tau;
}

void require_elliptic_grid(const RayGrid& grid) {
    const Shape s = grid.domain().shape();
    if (s != Shape::interval && s != Shape::sector)
        throw ShapeError("elliptic assembly supports the interval and the sector");
    if (grid.n_radial() < 16) throw DomainError("elliptic assembly: grid too coarse (need N >= 16)");
    if (s == Shape::sector && grid.n_dirs() < 2) throw DomainError("elliptic assembly: sector needs >= 2 rays");
}

std::vector<double> sample_field(const RayGrid& grid, const ScalarField& f) {
    std::vector<double> v(grid.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(grid.r_at(k));
    return v;
}

}  // namespace

Matrix stiffness(const RayGrid& grid, const ScalarField& a, bool gauss) {
    require_elliptic_grid(grid);
    const std::size_t N = grid.n_radial();
    Matrix k(grid.size(), grid.size());
    if (grid.dim() == 1) {
        const double h = grid.ray(0).h, d = grid.ray(0).length;
        for (std::size_t i = 0; i + 1 < N; ++i) {
            const double tau = gauss ? gauss_mean(a, grid.r(0, i), grid.r(0, i + 1)) / h : a((i + 1) * h) / h;
            add_face(k, i, i + 1, tau);
        }
        k(0, 0) += gauss ? gauss_mean(a, 0.0, 0.5 * h) / (0.5 * h) : a(0.0) / (0.5 * h);
        k(N - 1, N - 1) += gauss ? gauss_mean(a, d - 0.5 * h, d) / (0.5 * h) : a(d) / (0.5 * h);
        return k;
    }
    const std::size_t J = grid.n_dirs();
    const double h = grid.ray(0).h, R = grid.ray(0).length, dchi = grid.ray(0).dchi;
    auto ar = [&](double r) { return a(r) * r; };
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t i = 0; i + 1 < N; ++i) {
            const double rf = (i + 1) * h;
            const double tau = gauss ? dchi / h * gauss_mean(ar, grid.r(j, i), grid.r(j, i + 1)) : a(rf) * rf * dchi / h;
            add_face(k, grid.index(j, i), grid.index(j, i + 1), tau);
        }
        k(grid.index(j, N - 1), grid.index(j, N - 1)) +=
            gauss ? dchi / (0.5 * h) * gauss_mean(ar, R - 0.5 * h, R) : a(R) * R * dchi / (0.5 * h);
    }
    for (std::size_t i = 0; i < N; ++i) {
        const double r = grid.r(0, i);
        const double base = (gauss ? gauss_mean(a, r - 0.5 * h, r + 0.5 * h) : a(r)) * h / r;
        for (std::size_t j = 0; j + 1 < J; ++j) add_face(k, grid.index(j, i), grid.index(j + 1, i), base / dchi);
        k(grid.index(0, i), grid.index(0, i)) += base / (0.5 * dchi);
        k(grid.index(J - 1, i), grid.index(J - 1, i)) += base / (0.5 * dchi);
    }
    return k;
}

namespace {

OperatorMatrix diffusion_operator(const RayGrid& grid, const ScalarField& a, const std::string& tag) {
    Matrix k = stiffness(grid, a, false);
    const auto& w = grid.weights();
    for (std::size_t i = 0; i < k.rows(); ++i)
        for (auto& v : k.row(i)) v /= w[i];
    return OperatorMatrix::dense(std::move(k), w, tag);
}

}  // namespace

OperatorMatrix assemble_L(const GridPtr& grid, const CoefficientField& c, double alpha, Exec ex) {
    require_elliptic_grid(*grid);
    const OperatorMatrix diff = diffusion_operator(*grid, c.a, "diffusion");
    const OperatorMatrix frac = assemble_matrix(grid, {DirOp::formal, alpha, 0.0}, ex).scale_rows(sample_field(*grid, c.rho));
    OperatorMatrix l = diff + frac;
    l.set_tag("L");
    return l;
}

OperatorMatrix assemble_L_plus(const GridPtr& grid, const CoefficientField& c, double alpha, Exec ex) {
    require_elliptic_grid(*grid);
    // a is symmetric, so the transposed-index diffusion term coincides with the original one
    const OperatorMatrix diff = diffusion_operator(*grid, c.a, "diffusion");
    const OperatorMatrix frac =
        assemble_matrix(grid, {DirOp::trunc_right, alpha, 0.0}, ex).scale_cols(sample_field(*grid, c.rho));
    OperatorMatrix l = diff + frac;
    l.set_tag("L+");
    return l;
}

HParts assemble_H(const GridPtr& grid, const CoefficientField& c, double alpha, Exec ex) {
    const OperatorMatrix l = assemble_L(grid, c, alpha, ex);
    const OperatorMatrix lp = assemble_L_plus(grid, c, alpha, ex);
    HParts h;
    h.sym = l.g_symmetric_part();
    h.sym.set_tag("H");
    h.average = 0.5 * (l + lp);
    h.average.set_tag("H_avg");
    const double ns = operator_norm(h.sym, ex);
    h.gap = ns > 0.0 ? operator_norm(h.average - h.sym, ex) / ns : 0.0;
    return h;
}

OperatorMatrix assemble_comparator(const GridPtr& grid, int k, double a_const, double rho_const) {
    if (k != 0 && k != 1) throw DomainError("comparator index must be 0 or 1");
    if (!(a_const > 0.0)) throw DomainError("comparator needs a_const > 0");
    if (!(rho_const > 0.0)) throw DomainError("comparator needs rho_const > 0");
    ScalarField a;
    a.value = a_const;
    OperatorMatrix op = diffusion_operator(*grid, a, "");
    Matrix m = op.block(0);
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += rho_const;
    return OperatorMatrix::dense(std::move(m), grid->weights(), "L" + std::to_string(k));
}

Matrix FormMatrices::h() const {
    Matrix out = t;
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = 0.5 * (t(i, j) + t_star(i, j));
    return out;
}

FormMatrices assemble_form_t(const GridPtr& grid, const CoefficientField& c, double alpha, Exec ex) {
    require_elliptic_grid(*grid);
    FormMatrices f;
    f.t = stiffness(*grid, c.a, true);
    const std::vector<double> rho = sample_field(*grid, c.rho);
    const auto& w = grid->weights();
    const std::vector<double> grho = [&] {
        std::vector<double> v(rho.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = w[k] * rho[k];
        return v;
    }();
    const OperatorMatrix frac = assemble_matrix(grid, {DirOp::formal, alpha, 0.0}, ex).scale_rows(grho);
    for (std::size_t b = 0; b < frac.n_blocks(); ++b) {
        const Matrix& m = frac.block(b);
        const std::size_t lo = frac.offset(b);
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) f.t(lo + i, lo + j) += m(i, j);
    }
    f.t_star = f.t.transpose();
    return f;
}

cplx form_value(const Matrix& form, const CVector& u, const CVector& v) {
    const CVector fu = matvec<cplx>(form, u);
    cplx s{};
    for (std::size_t i = 0; i < v.size(); ++i) s += std::conj(v[i]) * fu[i];
    return s;
}

double green_form_residual(const GridPtr& grid, const CoefficientField& c, double alpha) {
    const OperatorMatrix l = assemble_L(grid, c, alpha);
    const FormMatrices f = assemble_form_t(grid, c, alpha);
    std::vector<GridFunction> basis;
    if (grid->dim() == 1) {
        const double d = grid->ray(0).length;
        for (int k = 1; k <= 4; ++k)
            basis.push_back(sample(grid, [&](double r, std::size_t) { return cplx(std::sin(k * pi * r / d)); }));
    } else {
        const double R = grid->ray(0).length, theta = grid->domain().angle();
        for (int k = 1; k <= 2; ++k)
            for (int m = 1; m <= 2; ++m)
                basis.push_back(sample(grid, [&](double r, std::size_t j) {
                    const double chi = grid->ray(j).angle + theta / 2.0;
                    return cplx(std::sin(k * pi * r / R) * std::sin(m * pi * chi / theta));
                }));
    }
    double worst = 0.0;
    for (const auto& u : basis) {
        const GridFunction lu = l.apply(u);
        for (const auto& v : basis) {
            const double nu = norm(u), nv = norm(v);
            if (nu == 0.0 || nv == 0.0) continue;
            const cplx lhs = inner(lu, v);
            const cplx rhs = form_value(f.t, u.values, v.values);
            worst = std::max(worst, std::abs(lhs - rhs) / (nu * nv));
        }
    }
    return worst;
}

FormOrder form_order_check(const OperatorMatrix& h, const OperatorMatrix& l0, const OperatorMatrix& l1) {
    FormOrder out;
    out.lower_margin = accretivity_margin(h - l0);
    out.upper_margin = accretivity_margin(l1 - h);
    return out;
}

ComparatorConstants default_comparators(const GridPtr& grid, const CoefficientField& c, const OperatorMatrix& h_sym,
                                        double mu) {
    ComparatorConstants k;
    k.a_lo = 0.5 * c.a0;
    k.rho_lo = 0.5 * std::min(mu * c.inf_rho, c.inf_rho);
    ScalarField unit;
    Matrix b = stiffness(*grid, unit, false);
    const auto& w = grid->weights();
    for (std::size_t i = 0; i < b.rows(); ++i) b(i, i) += w[i];
    const Matrix hd = h_sym.to_dense();
    Matrix gh(hd.rows(), hd.cols());
    for (std::size_t i = 0; i < hd.rows(); ++i)
        for (std::size_t j = 0; j < hd.cols(); ++j) gh(i, j) = w[i] * hd(i, j);
    for (std::size_t i = 0; i < gh.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j) gh(i, j) = gh(j, i) = 0.5 * (gh(i, j) + gh(j, i));
    k.form_bound = eig::generalized_symmetric_eigenvalues(gh, b).back();
    k.a_hi = 2.0 * c.a1;
    k.rho_hi = 2.0 * k.form_bound;
    return k;
}

}  // namespace kfrac
