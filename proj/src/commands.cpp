#include "kfrac/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <random>

#include <boost/math/special_functions/bessel.hpp>

#include "kfrac/directional.hpp"
#include "kfrac/elliptic.hpp"
#include "kfrac/error.hpp"
#include "kfrac/frac1d.hpp"
#include "kfrac/kernels.hpp"
#include "kfrac/spectral.hpp"

namespace kfrac {

namespace {

constexpr double pi = std::numbers::pi;

std::string g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

Shape parse_shape(const std::string& s) {
    if (s == "interval") return Shape::interval;
    if (s == "sector") return Shape::sector;
    if (s == "disk") return Shape::disk;
    throw ConfigError("unknown domain.shape '" + s + "' (interval, sector, disk)");
}

ConvexDomain make_domain(const Config& c, Shape s) {
    switch (s) {
        case Shape::interval: return ConvexDomain::interval(c.get_double("domain.length"));
        case Shape::sector: return ConvexDomain::sector(c.get_double("domain.radius"), c.get_double("domain.angle"));
        case Shape::disk:
            return ConvexDomain::disk(c.get_double("domain.radius"),
                                      {c.get_double("domain.center_x"), c.get_double("domain.center_y")},
                                      {c.get_double("domain.pole_x"), c.get_double("domain.pole_y")});
    }
    throw ConfigError("bad shape");
}

std::size_t positive_size(const Config& c, const std::string& key) {
    const long v = c.get_int(key);
    if (v <= 0) throw ConfigError("config key '" + key + "' must be positive");
    return static_cast<std::size_t>(v);
}

GridPtr make_grid(const Config& c, Shape s, std::size_t n_radial) {
    const ConvexDomain dom = make_domain(c, s);
    return build_ray_grid(dom, s == Shape::interval ? 1 : positive_size(c, "grid.n_dirs"), n_radial);
}

struct Ctx {
    Config cfg;
    int levels = 3;
    std::uint64_t seed = 42;

    std::vector<std::size_t> ladder(Shape s) const {
        std::size_t n = positive_size(cfg, s == Shape::interval ? "study.base_n" : "study.base_n_2d");
        std::vector<std::size_t> out;
        for (int k = 0; k <= levels; ++k, n *= 2) out.push_back(n);
        return out;
    }
};

// rows N, residual, observed_order = log2(res_prev / res)
void add_study(Report& r, const Json& base, const std::vector<std::size_t>& ns, const std::vector<double>& res) {
    for (std::size_t k = 0; k < ns.size(); ++k) {
        Json row = base;
        row["N"] = ns[k];
        row["residual"] = num(res[k]);
        row["observed_order"] = k == 0 ? Json(nullptr) : num(std::log2(res[k - 1] / res[k]));
        r.values.push_back(std::move(row));
    }
}

Json base_row(const std::string& name, const std::string& shape, double alpha) {
    Json j;
    j["name"] = name;
    j["shape"] = shape;
    j["alpha"] = alpha;
    return j;
}

CoefficientField coefficients(const Config& c, const ConvexDomain& dom) {
    auto field = [&](const std::string& p) {
        ScalarField f;
        f.preset = parse_preset(c.get_string(p + ".preset"));
        f.value = c.get_double(p + ".value");
        f.amplitude = c.get_double(p + ".amplitude");
        f.exponent = c.get_double(p + ".exponent");
        return f;
    };
    return CoefficientField::make(field("coeff.a"), field("coeff.rho"), dom);
}

double coefficient_mu(const CoefficientField& c, double alpha, const ConvexDomain& dom) {
    return mu_theoretical(alpha, dom.dim(), dom.diam(), c.lambda, c.lip_M, c.inf_rho, c.rho_monotone());
}

// first Dirichlet eigenvalue of -Laplace
double first_dirichlet(const ConvexDomain& dom) {
    if (dom.shape() == Shape::interval) return pi * pi / (dom.length() * dom.length());
    if (dom.shape() == Shape::sector) {
        const double z = boost::math::cyl_bessel_j_zero(pi / dom.angle(), 1);
        return z * z / (dom.radius() * dom.radius());
    }
    throw ShapeError("first Dirichlet eigenvalue: interval or sector only");
}

// ---------------------------------------------------------------- verify-kernels

Report verify_kernels(const Ctx& x) {
    Report r;
    const Config& c = x.cfg;
    const double cutoff = c.get_double("kernels.cutoff");
    const long n_max = c.get_int("kernels.n_max");
    for (double a : c.get_list("kernels.alphas")) {
        const double integral = kernel_K_integral(a, cutoff);
        Json row;
        row["name"] = "kernel_integral";
        row["alpha"] = a;
        row["kernel_integral"] = num(integral);
        r.values.push_back(row);
        r.add(check_le("kernel_integral[a=" + g(a) + "]", std::abs(integral - 1.0), 1e-6));
        double worst = 0.0;
        for (int n = 2; n <= n_max; ++n) {
            const double t = telescoping_residual(n, a);
            worst = std::max(worst, t);
            Json tr;
            tr["name"] = "telescoping";
            tr["alpha"] = a;
            tr["n"] = n;
            tr["residual"] = num(t);
            r.values.push_back(tr);
        }
        r.add(check_le("telescoping[a=" + g(a) + "]", worst, 1e-12));
    }
    // power functions against the closed forms
    const ConvexDomain dom = make_domain(c, Shape::interval);
    const auto ns = x.ladder(Shape::interval);
    for (double beta : c.get_list("oracle.betas")) {
        for (double a : c.get_list("frac.alphas")) {
            for (const PowerMode mode : {PowerMode::integral, PowerMode::derivative}) {
                const auto exact = power_oracle(beta, a, mode);
                std::vector<double> err;
                for (std::size_t n : ns) {
                    const GridPtr grid = build_ray_grid(dom, 1, n);
                    const GridFunction f = sample(grid, [&](double rr, std::size_t) { return cplx(std::pow(rr, beta)); });
                    const GridFunction e = sample(grid, [&](double rr, std::size_t) { return cplx(exact(rr)); });
                    const GridFunction got = mode == PowerMode::integral
                                                 ? rl_integral_left(f, a)
                                                 : rl_derivative_left(f, a, beta == 0.0 ? 1.0 : 0.0);
                    err.push_back(norm(got - e) / norm(e));
                }
                const std::string tag = std::string(mode == PowerMode::integral ? "integral" : "derivative") +
                                        "[b=" + g(beta) + ",a=" + g(a) + "]";
                Json base;
                base["name"] = "power_oracle";
                base["mode"] = mode == PowerMode::integral ? "integral" : "derivative";
                base["beta"] = beta;
                base["alpha"] = a;
                add_study(r, base, ns, err);
                r.add(check_le("power_oracle." + tag + ".finest", err.back(), 1e-2));
                // errors at rounding level carry no order information
                if (err.back() <= 1e-12) {
                    r.add(check_le("power_oracle." + tag + ".exact", err.back(), 1e-12));
                } else {
                    for (std::size_t k = 1; k < err.size(); ++k)
                        r.add(check_ge("power_oracle." + tag + ".order[N=" + std::to_string(ns[k]) + "]",
                                       std::log2(err[k - 1] / err[k]), 1.0));
                }
            }
        }
    }
    return r;
}

// ---------------------------------------------------------------- inversion

Report inversion(const Ctx& x) {
    Report r;
    const double min_factor = x.cfg.get_double("study.min_factor");
    for (double a : x.cfg.get_list("frac.alphas")) {
        for (const Shape s : {Shape::interval, Shape::sector}) {
            const auto ns = x.ladder(s);
            for (const Side side : {Side::left, Side::right}) {
                std::vector<double> res;
                for (std::size_t n : ns) {
                    const GridPtr grid = make_grid(x.cfg, s, n);
                    const GridFunction phi = sample(grid, [&](double rr, std::size_t j) {
                        return cplx(std::sin(pi * rr / grid->ray(j).length));
                    });
                    res.push_back(inversion_residual(grid, phi, a, side));
                }
                const std::string sd = side == Side::left ? "left" : "right";
                Json base = base_row("inversion", to_string(s), a);
                base["side"] = sd;
                add_study(r, base, ns, res);
                const std::string tag = "inversion[" + to_string(s) + "," + sd + ",a=" + g(a) + "]";
                r.add(check_le(tag + ".finest", res.back(), s == Shape::interval ? 5e-2 : 1e-1));
                for (std::size_t k = 1; k < res.size(); ++k)
                    r.add(check_ge(tag + ".factor[N=" + std::to_string(ns[k]) + "]", res[k - 1] / res[k], min_factor));
            }
        }
    }
    return r;
}

// ---------------------------------------------------------------- representability

Report representability(const Ctx& x) {
    Report r;
    const double a = x.cfg.get_double("frac.alpha");
    for (const Shape s : {Shape::interval, Shape::sector}) {
        const auto ns = x.ladder(s);
        for (const std::string rho_kind : {"constant", "ramp"}) {
            std::vector<double> res;
            for (std::size_t n : ns) {
                const GridPtr grid = make_grid(x.cfg, s, n);
                const double diam = grid->domain().diam();
                const GridFunction f = sample(grid, [&](double rr, std::size_t j) {
                    const double y = 2.0 * rr / grid->ray(j).length - 1.0;
                    const double bump = std::abs(y) < 1.0 ? std::exp(-1.0 / (1.0 - y * y)) : 0.0;
                    const double rho = rho_kind == "constant" ? 1.0 : 1.0 - 0.5 * std::pow(rr / diam, 0.9);
                    return cplx(rho * bump);
                });
                res.push_back(representability_residual(grid, f, a));
            }
            Json base = base_row("representability", to_string(s), a);
            base["rho"] = rho_kind;
            add_study(r, base, ns, res);
            const std::string tag = "representability[" + to_string(s) + "," + rho_kind + "]";
            for (std::size_t k = 1; k < res.size(); ++k)
                r.add(check_le(tag + ".decay[N=" + std::to_string(ns[k]) + "]", res[k], 1.05 * res[k - 1]));
        }
    }
    return r;
}

// ---------------------------------------------------------------- adjoint

Report adjoint(const Ctx& x) {
    Report r;
    std::mt19937_64 rng(x.seed);
    std::normal_distribution<double> nd;
    for (double a : x.cfg.get_list("frac.alphas")) {
        for (const Shape s : {Shape::interval, Shape::sector}) {
            const auto ns = x.ladder(s);
            std::vector<double> res;
            double bilinear = 0.0;
            for (std::size_t n : ns) {
                const GridPtr grid = make_grid(x.cfg, s, n);
                res.push_back(adjoint_residual(grid, a, AdjointKind::integral));
                const OperatorMatrix m = assemble_matrix(grid, {DirOp::integral_left, a, 0.0});
                const OperatorMatrix ms = m.g_adjoint();
                GridFunction f(grid), h(grid);
                for (std::size_t k = 0; k < grid->size(); ++k) {
                    f[k] = {nd(rng), nd(rng)};
                    h[k] = {nd(rng), nd(rng)};
                }
                const cplx lhs = inner(m.apply(f), h), rhs = inner(f, ms.apply(h));
                bilinear = std::max(bilinear, std::abs(lhs - rhs) / (norm(f) * norm(h)));
            }
            add_study(r, base_row("adjoint", to_string(s), a), ns, res);
            const std::string tag = "adjoint[" + to_string(s) + ",a=" + g(a) + "]";
            r.add(check_le(tag + ".finest", res.back(), s == Shape::interval ? 5e-2 : 1e-1));
            for (std::size_t k = 1; k < res.size(); ++k)
                r.add(check_le(tag + ".decrease[N=" + std::to_string(ns[k]) + "]", res[k], res[k - 1]));
            r.add(check_le(tag + ".bilinear_identity", bilinear, 1e-10));
        }
    }
    return r;
}

// ---------------------------------------------------------------- restriction

double max_entry_gap(const Matrix& p, const Matrix& q) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j) d = std::max(d, std::abs(p(i, j) - q(i, j)));
    return d;
}

Report restriction(const Ctx& x) {
    Report r;
    const std::size_t n1 = positive_size(x.cfg, "grid.n_radial"), n2 = positive_size(x.cfg, "grid.n_radial_2d");
    for (double a : x.cfg.get_list("frac.alphas")) {
        const GridPtr g1 = make_grid(x.cfg, Shape::interval, n1);
        const Matrix k1 = assemble_matrix(g1, {DirOp::formal, a, 0.0}).to_dense();
        const Matrix m1 = marchaud_matrix(*g1, a, g1->ray(0).h, Side::left);
        const double d1 = max_entry_gap(k1, m1);
        Json row = base_row("restriction", "interval", a);
        row["N"] = n1;
        row["compare"] = "formal_vs_marchaud";
        row["max_entry_gap"] = num(d1);
        r.values.push_back(row);
        r.add(check_le("restriction[interval,a=" + g(a) + "].marchaud", d1, 1e-12));

        const GridPtr g2 = make_grid(x.cfg, Shape::sector, n2);
        const OperatorMatrix direct = assemble_matrix(g2, {DirOp::formal, a, 0.0});
        const OperatorMatrix restricted = assemble_matrix(g2, {DirOp::formal_restricted, a, 0.0});
        double d2 = 0.0;
        for (std::size_t b = 0; b < direct.n_blocks(); ++b)
            d2 = std::max(d2, max_entry_gap(direct.block(b), restricted.block(b)));
        const GridFunction f = sample(g2, [&](double rr, std::size_t j) {
            const double len = g2->ray(j).length;
            return cplx(rr * rr * (len - rr) * (len - rr));
        });
        const FormalResult fa = kipriyanov_formal(g2, f, a, FormalPath::direct);
        const FormalResult fb = kipriyanov_formal(g2, f, a, FormalPath::restriction);
        const double df = norm(fa.value - fb.value) / norm(fa.value);
        Json row2 = base_row("restriction", "sector", a);
        row2["N"] = n2;
        row2["compare"] = "direct_vs_restriction";
        row2["max_entry_gap"] = num(d2);
        row2["function_gap"] = num(df);
        r.values.push_back(row2);
        r.add(check_le("restriction[sector,a=" + g(a) + "].two_path", d2, 1e-8));
        r.add(check_le("restriction[sector,a=" + g(a) + "].two_path_function", df, 1e-8));
    }
    return r;
}

// ---------------------------------------------------------------- norm-bound

Report norm_bound(const Ctx& x) {
    Report r;
    for (double a : x.cfg.get_list("frac.alphas")) {
        for (const Shape s : {Shape::interval, Shape::sector, Shape::disk}) {
            for (std::size_t n : x.ladder(s)) {
                const GridPtr grid = make_grid(x.cfg, s, n);
                const double bound = std::pow(grid->domain().diam(), a) / gamma(a + 1.0);
                for (const DirOp op : {DirOp::integral_left, DirOp::integral_right}) {
                    const double v = operator_norm(assemble_matrix(grid, {op, a, 0.0}));
                    Json row = base_row("norm_bound", to_string(s), a);
                    row["operator"] = to_string(op);
                    row["N"] = n;
                    row["norm"] = num(v);
                    row["bound"] = num(bound);
                    r.values.push_back(row);
                    r.add(check_le("norm_bound[" + to_string(s) + "," + to_string(op) + ",a=" + g(a) +
                                       ",N=" + std::to_string(n) + "]",
                                   v, bound * (1.0 + 1e-2)));
                }
            }
        }
    }
    return r;
}

// ---------------------------------------------------------------- accretivity

Report accretivity(const Ctx& x) {
    Report r;
    for (double a : x.cfg.get_list("frac.alphas")) {
        for (const Shape s : {Shape::interval, Shape::sector}) {
            const auto ns = x.ladder(s);
            std::vector<double> mus;
            const ConvexDomain dom = make_domain(x.cfg, s);
            const double mu = mu_theoretical(a, dom.dim(), dom.diam(), 1.0, 0.0, 1.0, true);
            for (std::size_t n : ns) {
                const GridPtr grid = make_grid(x.cfg, s, n);
                mus.push_back(accretivity_margin(assemble_matrix(grid, {DirOp::formal, a, 0.0})));
                Json row = base_row("accretivity", to_string(s), a);
                row["N"] = n;
                row["mu_hat"] = num(mus.back());
                row["mu"] = num(mu);
                r.values.push_back(row);
            }
            const std::string tag = "accretivity[" + to_string(s) + ",a=" + g(a) + "]";
            for (std::size_t k = 0; k < ns.size(); ++k)
                r.add(check_ge(tag + ".margin[N=" + std::to_string(ns[k]) + "]", mus[k], 0.9 * mu));
            for (std::size_t k = 1; k < ns.size(); ++k)
                r.add(check_ge(tag + ".nondecreasing[N=" + std::to_string(ns[k]) + "]", mus[k], mus[k - 1],
                               1e-12 * std::abs(mus[k - 1])));
        }
    }
    return r;
}

// ---------------------------------------------------------------- sector

GridPtr elliptic_grid(const Config& c, std::size_t n) { return make_grid(c, parse_shape(c.get_string("domain.shape")), n); }

Report sector(const Ctx& x) {
    Report r;
    const Config& c = x.cfg;
    const double a = c.get_double("frac.alpha");
    const int n_angles = static_cast<int>(c.get_int("spectral.n_angles"));
    const int n_random = static_cast<int>(c.get_int("spectral.n_random"));
    std::vector<double> thetas;
    for (const std::string key : {"spectral.n_coarse", "spectral.n_fine"}) {
        const std::size_t n = positive_size(c, key);
        const GridPtr grid = elliptic_grid(c, n);
        const ConvexDomain& dom = grid->domain();
        const CoefficientField cf = coefficients(c, dom);
        const OperatorMatrix l = assemble_L(grid, cf, a);
        const std::vector<RangeSample> samples = numerical_range(l, n_angles, n_random, x.seed);
        std::vector<cplx> z;
        for (const auto& s : samples) z.push_back(s.zeta);
        const SectorFit fit = sector_fit(z);
        thetas.push_back(fit.theta);
        double scale = 0.0, min_re = INFINITY, cert = 0.0;
        for (const auto& s : samples) {
            scale = std::max(scale, std::abs(s.zeta));
            min_re = std::min(min_re, s.zeta.real());
            cert = std::max(cert, std::abs(rayleigh_quotient(l, s.v) - s.zeta) / std::max(1.0, std::abs(s.zeta)));
        }
        const GeneralEigs ge = general_eigs(l);
        double hull = 0.0, eig_min_re = INFINITY;
        for (const cplx& e : ge.values) {
            hull = std::max(hull, hull_distance(z, e));
            eig_min_re = std::min(eig_min_re, e.real());
        }
        const double mu_hat = accretivity_margin(l);
        const double mu1 = cf.a0 * first_dirichlet(dom) + coefficient_mu(cf, a, dom) * cf.inf_rho;

        Json row;
        row["name"] = "sector_fit";
        row["N"] = n;
        row["gamma_hat"] = num(fit.gamma);
        row["theta_hat"] = num(fit.theta);
        row["degenerate"] = fit.degenerate;
        row["mu_hat"] = num(mu_hat);
        row["coercivity_bound"] = num(mu1);
        row["eig_min_re"] = num(eig_min_re);
        row["hull_distance"] = num(hull);
        row["eig_residual"] = num(ge.max_residual);
        r.values.push_back(row);
        for (const auto& s : samples) {
            Json sr;
            sr["name"] = "range_sample";
            sr["N"] = n;
            sr["kind"] = s.kind;
            sr["angle"] = num(s.angle);
            sr["re"] = num(s.zeta.real());
            sr["im"] = num(s.zeta.imag());
            r.values.push_back(sr);
        }
        for (std::size_t k = 0; k < ge.values.size(); ++k) {
            Json er;
            er["name"] = "eigenvalue";
            er["N"] = n;
            er["index"] = k;
            er["re"] = num(ge.values[k].real());
            er["im"] = num(ge.values[k].imag());
            r.values.push_back(er);
        }
        const std::string tag = "sector[N=" + std::to_string(n) + "]";
        r.add(check_ge(tag + ".gamma_positive", fit.gamma, 0.0, -1e-300));
        r.add(check_ge(tag + ".samples_right_of_vertex", min_re, fit.gamma));
        r.add(check_le(tag + ".theta_below_half_pi", fit.theta, pi / 2.0, -1e-12));
        r.add(check_le(tag + ".not_degenerate", fit.degenerate ? 1.0 : 0.0, 0.0));
        r.add(check_le(tag + ".rayleigh_certificate", cert, 1e-10));
        r.add(check_le(tag + ".eigs_in_range_hull", hull, 1e-6 * scale));
        r.add(check_ge(tag + ".eigs_right_of_gamma", eig_min_re, fit.gamma, 1e-10 * std::max(1.0, std::abs(fit.gamma))));
        r.add(check_le(tag + ".eig_residual", ge.max_residual, 1e-8));
        r.add(check_ge(tag + ".strict_accretivity", mu_hat, 0.9 * mu1));
    }
    r.add(check_le("sector.theta_stability", std::abs(thetas[1] - thetas[0]), 0.05 * thetas[0]));
    r.meta["note"] = "numerical range and spectrum of the discretized operator";
    return r;
}

// ---------------------------------------------------------------- eigen-bounds

Report eigen_bounds(const Ctx& x) {
    Report r;
    const Config& c = x.cfg;
    const double a = c.get_double("frac.alpha");
    const std::size_t n = positive_size(c, "grid.n_radial");
    const GridPtr grid = elliptic_grid(c, n);
    const ConvexDomain& dom = grid->domain();
    const CoefficientField cf = coefficients(c, dom);
    const OperatorMatrix l = assemble_L(grid, cf, a);
    const HParts hp = assemble_H(grid, cf, a);
    const SymEigs eh = sym_eigs(hp.sym);
    const double mu_hat = accretivity_margin(l);
    const double mu = coefficient_mu(cf, a, dom);

    ComparatorConstants k = default_comparators(grid, cf, hp.sym, mu);
    auto pick = [&](const std::string& key, double fallback) { return c.is_auto(key) ? fallback : c.get_double(key); };
    k.a_lo = pick("comparator.a_lo", k.a_lo);
    k.rho_lo = pick("comparator.rho_lo", k.rho_lo);
    k.a_hi = pick("comparator.a_hi", k.a_hi);
    k.rho_hi = pick("comparator.rho_hi", k.rho_hi);
    const OperatorMatrix l0 = assemble_comparator(grid, 0, k.a_lo, k.rho_lo);
    const OperatorMatrix l1 = assemble_comparator(grid, 1, k.a_hi, k.rho_hi);
    const FormOrder fo = form_order_check(hp.sym, l0, l1);
    const SymEigs e0 = sym_eigs(l0), e1 = sym_eigs(l1);
    const BoundsCheck bc = eigen_bounds_check(e0.values, eh.values, e1.values);

    r.meta["note"] = "discrete eigenvalue ordering on one grid; the continuum statement holds only in the limit";
    Json cr;
    cr["name"] = "comparators";
    cr["N"] = n;
    cr["a_lo"] = num(k.a_lo);
    cr["rho_lo"] = num(k.rho_lo);
    cr["a_hi"] = num(k.a_hi);
    cr["rho_hi"] = num(k.rho_hi);
    cr["form_bound"] = num(k.form_bound);
    cr["mu"] = num(mu);
    cr["mu_hat"] = num(mu_hat);
    cr["h_gap"] = num(hp.gap);
    cr["form_lower_margin"] = num(fo.lower_margin);
    cr["form_upper_margin"] = num(fo.upper_margin);
    cr["bounds_lower_margin"] = num(bc.lower_margin);
    cr["bounds_upper_margin"] = num(bc.upper_margin);
    r.values.push_back(cr);
    for (std::size_t i = 0; i < eh.values.size(); ++i) {
        Json row;
        row["name"] = "eigenvalues";
        row["index"] = i;
        row["L0"] = num(e0.values[i]);
        row["H"] = num(eh.values[i]);
        row["L1"] = num(e1.values[i]);
        r.values.push_back(row);
    }

    r.add(check_ge("form_order.lower", fo.lower_margin, 0.0, 1e-10));
    r.add(check_ge("form_order.upper", fo.upper_margin, 0.0, 1e-10));
    r.add(check_ge("eigen_bounds.lower", bc.lower_margin, 0.0, 1e-10));
    r.add(check_ge("eigen_bounds.upper", bc.upper_margin, 0.0, 1e-10));
    if (dom.shape() == Shape::interval) {
        const double d = dom.length();
        for (int kk = 0; kk < 2; ++kk) {
            const auto& ev = kk == 0 ? e0.values : e1.values;
            const double ac = kk == 0 ? k.a_lo : k.a_hi, rc = kk == 0 ? k.rho_lo : k.rho_hi;
            for (int j = 1; j <= 5 && j <= static_cast<int>(ev.size()); ++j) {
                const double exact = ac * (j * pi / d) * (j * pi / d) + rc;
                r.add(check_le("comparator_L" + std::to_string(kk) + ".lambda_" + std::to_string(j),
                               std::abs(ev[j - 1] - exact) / exact, 1e-2));
            }
        }
    }
    double min_gap = INFINITY;
    for (std::size_t i = 1; i < eh.values.size(); ++i) min_gap = std::min(min_gap, eh.values[i] - eh.values[i - 1]);
    const double top = std::max(1.0, std::abs(eh.values.back()));
    r.add(check_ge("H.positive", mu_hat, 0.0, -1e-300));
    r.add(check_ge("H.bounded_below", eh.values.front(), mu_hat, 1e-10 * std::max(1.0, std::abs(mu_hat))));
    r.add(check_ge("H.simple", min_gap / top, 1e-12));
    r.add(check_le("H.eig_residual", eh.max_residual, 1e-8));
    return r;
}

using Handler = std::function<Report(const Ctx&)>;

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h = {
        {"verify-kernels", verify_kernels}, {"inversion", inversion},       {"representability", representability},
        {"adjoint", adjoint},               {"restriction", restriction},   {"norm-bound", norm_bound},
        {"accretivity", accretivity},       {"sector", sector},             {"eigen-bounds", eigen_bounds},
    };
    return h;
}

}  // namespace

Report run_command(const std::string& sub, const Config& cfg, const RunOptions& opt) {
    const auto it = handlers().find(sub);
    if (it == handlers().end()) throw ConfigError("unknown subcommand '" + sub + "'");
    Ctx x;
    x.cfg = cfg.scoped(sub);
    x.levels = opt.levels ? *opt.levels : static_cast<int>(x.cfg.get_int("study.levels"));
    if (x.levels < 2) throw ConfigError("levels must be >= 2");
    x.seed = opt.seed;
    Report r = it->second(x);
    r.command = sub;
    Json meta;
    meta["command"] = sub;
    meta["levels"] = x.levels;
    meta["seed"] = x.seed;
    Json echo = Json::object();
    for (const auto& [k, v] : x.cfg.entries()) echo[k] = v;
    meta["config"] = echo;
    for (const auto& [k, v] : r.meta.items()) meta[k] = v;
    r.meta = meta;
    return r;
}

int run(const std::string& sub, const Config& cfg, const RunOptions& opt, std::ostream& log) {
    std::vector<std::string> subs;
    if (sub == "all")
        subs = subcommand_names();
    else
        subs = {sub};
    if (opt.levels && *opt.levels < 2) throw ConfigError("--levels must be >= 2");
    for (const auto& s : subs)
        if (!handlers().count(s)) throw ConfigError("unknown subcommand '" + s + "'");
    bool ok = true;
    for (const auto& s : subs) {
        const Report r = run_command(s, cfg, opt);
        if (opt.out_dir) write_report(r, *opt.out_dir);
        std::size_t passed = 0;
        for (const auto& v : r.verdicts) {
            if (v.pass)
                ++passed;
            else
                log << "  " << summary_line(v) << "\n";
        }
        log << (r.pass() ? "PASS " : "FAIL ") << s << " (" << passed << "/" << r.verdicts.size() << " checks)\n";
        ok = ok && r.pass();
    }
    return ok ? 0 : 1;
}

}  // namespace kfrac
