#include "kfrac/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "kfrac/eigensolvers.hpp"
#include "kfrac/error.hpp"

namespace kfrac {

namespace {

constexpr double half_pi = std::numbers::pi / 2.0;

Matrix symmetrized(const Matrix& c) {
    Matrix s = c;
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j) s(i, j) = s(j, i) = 0.5 * (c(i, j) + c(j, i));
    return s;
}

double asymmetry(const Matrix& c) {
    double d = 0.0;
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j) d = std::max(d, std::abs(c(i, j) - c(j, i)));
    return d;
}

Matrix scaled_dense(const OperatorMatrix& a) {
    const Matrix d = a.to_dense();
    Matrix c(d.rows(), d.cols());
    const auto& g = a.gram();
    for (std::size_t i = 0; i < d.rows(); ++i) {
        const double si = std::sqrt(g[i]);
        for (std::size_t j = 0; j < d.cols(); ++j) c(i, j) = si * d(i, j) / std::sqrt(g[j]);
    }
    return c;
}

}  // namespace

SymEigs sym_eigs(const OperatorMatrix& a) {
    const std::vector<Matrix> blocks = a.scaled_blocks();
    double scale = 0.0, asym = 0.0;
    for (const auto& c : blocks) {
        scale = std::max(scale, c.max_abs());
        asym = std::max(asym, asymmetry(c));
    }
    if (asym > 1e-10 * std::max(1.0, scale))
        throw DomainError("sym_eigs: matrix is not symmetric in the G inner product (defect " + std::to_string(asym) +
                          ")");
    SymEigs out;
    for (const auto& c : blocks) {
        const Matrix s = symmetrized(c);
        const eig::SymmetricEigen se = eig::symmetric_eigen(s, true);
        double norm = 0.0;
        for (double v : se.values) norm = std::max(norm, std::abs(v));
        const std::size_t n = s.rows();
        // z is an eigenvector of G^{1/2} A G^{-1/2}; ||A v - lambda v||_G = ||C z - lambda z||
        for (std::size_t k = 0; k < n; ++k) {
            double res = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double acc = -se.values[k] * se.vectors(i, k);
                for (std::size_t j = 0; j < n; ++j) acc += s(i, j) * se.vectors(j, k);
                res += acc * acc;
            }
            out.max_residual = std::max(out.max_residual, std::sqrt(res) / std::max(1.0, norm));
        }
        out.values.insert(out.values.end(), se.values.begin(), se.values.end());
    }
    std::sort(out.values.begin(), out.values.end());
    if (out.max_residual > 1e-8) throw ConvergenceError("sym_eigs: eigenpair residual above 1e-8");
    return out;
}

GeneralEigs general_eigs(const OperatorMatrix& a) {
    GeneralEigs out;
    for (Matrix c : a.scaled_blocks()) {
        double norm = 0.0;
        for (std::size_t i = 0; i < c.rows(); ++i) {
            double s = 0.0;
            for (double v : c.row(i)) s += std::abs(v);
            norm = std::max(norm, s);
        }
        eig::hessenberg_reduce(c);
        const std::vector<cplx> vals = eig::hessenberg_qr(c);
        for (const cplx& l : vals)
            out.max_residual = std::max(out.max_residual, eig::hessenberg_residual(c, l) / std::max(1.0, norm));
        out.values.insert(out.values.end(), vals.begin(), vals.end());
    }
    std::sort(out.values.begin(), out.values.end(), [](cplx x, cplx y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return out;
}

cplx rayleigh_quotient(const OperatorMatrix& a, const CVector& v) {
    if (v.size() != a.size()) throw ShapeError("rayleigh_quotient: size mismatch");
    const CVector av = a.apply(std::span<const cplx>(v));
    const auto& g = a.gram();
    cplx num{};
    double den = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        num += g[i] * av[i] * std::conj(v[i]);
        den += g[i] * std::norm(v[i]);
    }
    if (den == 0.0) throw DomainError("rayleigh_quotient: zero vector");
    return num / den;
}

std::vector<RangeSample> numerical_range(const OperatorMatrix& a, int n_angles, int n_random, std::uint64_t seed,
                                         Exec ex) {
    if (n_angles < 4) throw DomainError("numerical_range: n_angles must be >= 4");
    if (n_random < 0) throw DomainError("numerical_range: n_random must be >= 0");
    const Matrix c = scaled_dense(a);
    const std::size_t n = c.rows();
    Matrix s(n, n), k(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            s(i, j) = 0.5 * (c(i, j) + c(j, i));
            k(i, j) = 0.5 * (c(i, j) - c(j, i));
        }
    const auto& g = a.gram();
    // zeta = z^H C z / z^H z, stored as v = G^{-1/2} z
    auto make_sample = [&](const CVector& z, std::string kind, double angle) {
        const CVector cz = matvec<cplx>(c, z);
        cplx num{};
        double den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            num += std::conj(z[i]) * cz[i];
            den += std::norm(z[i]);
        }
        RangeSample r;
        r.zeta = num / den;
        r.v.resize(n);
        for (std::size_t i = 0; i < n; ++i) r.v[i] = z[i] / std::sqrt(g[i]);
        r.kind = std::move(kind);
        r.angle = angle;
        return r;
    };
    // theta_{n-m} = -theta_m and the rotated part for -theta is the complex conjugate
    const int half = n_angles / 2;
    std::vector<eig::HermitianExtremes> ext(static_cast<std::size_t>(half) + 1);
    for_each_index(ex, ext.size(), [&](std::size_t m) {
        const double th = std::numbers::pi * static_cast<double>(m) / n_angles - half_pi;
        ext[m] = eig::hermitian_extremes(s, k, std::cos(th), std::sin(th));
    });
    auto conj_of = [](CVector v) {
        for (auto& x : v) x = std::conj(x);
        return v;
    };
    std::vector<RangeSample> out;
    for (int m = 0; m < n_angles; ++m) {
        const double th = std::numbers::pi * m / n_angles - half_pi;
        if (m <= half) {
            out.push_back(make_sample(ext[m].v_hi, "top", th));
            out.push_back(make_sample(ext[m].v_lo, "bottom", th));
        } else {
            const auto& e = ext[static_cast<std::size_t>(n_angles - m)];
            out.push_back(make_sample(conj_of(e.v_hi), "top", th));
            out.push_back(make_sample(conj_of(e.v_lo), "bottom", th));
        }
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int r = 0; r < n_random; ++r) {
        CVector z(n);
        for (auto& x : z) {
            const double re = nd(rng);
            x = {re, nd(rng)};
        }
        out.push_back(make_sample(z, "random", 0.0));
    }
    return out;
}

double accretivity_margin(const OperatorMatrix& a) {
    double lo = INFINITY;
    for (const Matrix& c : a.scaled_blocks()) {
        if (c.rows() == 0) continue;
        const eig::SymmetricEigen se = eig::symmetric_eigen(symmetrized(c), false);
        lo = std::min(lo, se.values.front());
    }
    return lo;
}

SectorFit sector_fit(std::span<const cplx> points) {
    if (points.empty()) throw DomainError("sector_fit: empty point list");
    SectorFit f;
    f.gamma = INFINITY;
    double scale = 0.0;
    for (const cplx& z : points) {
        f.gamma = std::min(f.gamma, z.real());
        scale = std::max(scale, std::abs(z));
    }
    const double tol = 1e-12 * std::max(scale, 1e-300);
    for (const cplx& z : points) {
        const double dx = z.real() - f.gamma;
        if (dx <= tol) {
            if (std::abs(z.imag()) > tol) f.degenerate = true;
            continue;
        }
        f.theta = std::max(f.theta, std::abs(std::atan2(z.imag(), dx)));
    }
    if (f.degenerate) f.theta = half_pi;
    return f;
}

double hull_distance(std::span<const cplx> points, cplx z) {
    if (points.empty()) throw DomainError("hull_distance: empty point list");
    std::vector<cplx> p(points.begin(), points.end());
    std::sort(p.begin(), p.end(), [](cplx x, cplx y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    p.erase(std::unique(p.begin(), p.end()), p.end());
    auto cross = [](cplx o, cplx a, cplx b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
    };
    std::vector<cplx> h;
    if (p.size() > 2) {
        h.resize(2 * p.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0.0) --k;
            h[k++] = p[i];
        }
        for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
            while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0.0) --k;
            h[k++] = p[i];
        }
        h.resize(k - 1);
    } else {
        h = p;
    }
    auto seg = [](cplx a, cplx b, cplx q) {
        const cplx ab = b - a;
        const double l2 = std::norm(ab);
        if (l2 == 0.0) return std::abs(q - a);
        const double t = std::clamp(((q - a) * std::conj(ab)).real() / l2, 0.0, 1.0);
        return std::abs(q - (a + t * ab));
    };
    if (h.size() == 1) return std::abs(z - h[0]);
    if (h.size() == 2) return seg(h[0], h[1], z);
    bool inside = true;
    double d = INFINITY;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const cplx a = h[i], b = h[(i + 1) % h.size()];
        if (cross(a, b, z) < 0.0) inside = false;
        d = std::min(d, seg(a, b, z));
    }
    return inside ? 0.0 : d;
}

BoundsCheck eigen_bounds_check(std::span<const double> e0, std::span<const double> eh, std::span<const double> e1) {
    if (e0.size() != eh.size() || eh.size() != e1.size())
        throw ShapeError("eigen_bounds_check: eigenvalue lists differ in length");
    for (auto l : {e0, eh, e1})
        if (!std::is_sorted(l.begin(), l.end())) throw DomainError("eigen_bounds_check: eigenvalues must be sorted");
    BoundsCheck b;
    b.lower_margin = INFINITY;
    b.upper_margin = INFINITY;
    for (std::size_t i = 0; i < eh.size(); ++i) {
        if (eh[i] - e0[i] < b.lower_margin) {
            b.lower_margin = eh[i] - e0[i];
            b.worst_lower = i;
        }
        if (e1[i] - eh[i] < b.upper_margin) {
            b.upper_margin = e1[i] - eh[i];
            b.worst_upper = i;
        }
    }
    if (eh.empty()) b.lower_margin = b.upper_margin = 0.0;
    return b;
}

SectorConstants SectorConstants::compute(double a0, double a1, double K, double delta, double eps_young, double C2,
                                         double C3, double nu, double mu, double inf_rho) {
    for (double v : {a0, a1, K, delta, eps_young, C2, C3, mu, inf_rho})
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("SectorConstants: inputs must be positive and finite");
    if (!(nu > 0.0 && nu < 1.0)) throw DomainError("SectorConstants: nu must lie in (0, 1)");
    SectorConstants s{a0, a1, K, delta, eps_young, C2, C3, nu, mu, inf_rho};
    s.k = a0 / (eps_young * std::pow(delta, 2.0 - 2.0 * nu) * C3 + a1);
    s.gamma = mu * inf_rho - s.k * (eps_young * std::pow(delta, -2.0 * nu) * C2 + 1.0 / eps_young);
    s.theta = std::atan(1.0 / s.k);
    return s;
}

}  // namespace kfrac
