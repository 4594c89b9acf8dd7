#include <cmath>
#include <vector>

#include "kfrac/eigensolvers.hpp"
#include "kfrac/error.hpp"

namespace kfrac::eig {

namespace {

// Householder reflector I - tau v v^H acting on indices k+1..n-1.
struct Reflector {
    std::vector<double> vr, vi;
    double tau = 0.0;
};

// Applies H z for z stored as split real/imaginary parts, on the trailing block.
void apply_reflector(const Reflector& h, std::size_t off, std::vector<double>& zr, std::vector<double>& zi) {
    if (h.tau == 0.0) return;
    double sr = 0.0, si = 0.0;  // v^H z
    for (std::size_t i = 0; i < h.vr.size(); ++i) {
        sr += h.vr[i] * zr[off + i] + h.vi[i] * zi[off + i];
        si += h.vr[i] * zi[off + i] - h.vi[i] * zr[off + i];
    }
    sr *= h.tau;
    si *= h.tau;
    for (std::size_t i = 0; i < h.vr.size(); ++i) {
        zr[off + i] -= h.vr[i] * sr - h.vi[i] * si;
        zi[off + i] -= h.vr[i] * si + h.vi[i] * sr;
    }
}

}  // namespace

HermitianExtremes hermitian_extremes(const Matrix& sym, const Matrix& skew, double c, double s) {
    if (!sym.square() || sym.rows() != skew.rows() || sym.cols() != skew.cols())
        throw ShapeError("hermitian_extremes: size mismatch");
    const std::size_t n = sym.rows();
    HermitianExtremes out;
    if (n == 0) return out;
    // A = ar + i ai, full storage
    std::vector<double> ar(n * n), ai(n * n);
    for (std::size_t k = 0; k < n * n; ++k) {
        ar[k] = c * sym.data()[k];
        ai[k] = s * skew.data()[k];
    }
    std::vector<double> d(n, 0.0), e(n > 1 ? n - 1 : 0, 0.0);
    std::vector<cplx> sub(n > 1 ? n - 1 : 0);
    std::vector<Reflector> refl;
    std::vector<double> pr(n), pi(n), wr(n), wi(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = n - k - 1, off = k + 1;
        Reflector h;
        h.vr.resize(m);
        h.vi.resize(m);
        double nrm = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            h.vr[i] = ar[(off + i) * n + k];
            h.vi[i] = ai[(off + i) * n + k];
            nrm += h.vr[i] * h.vr[i] + h.vi[i] * h.vi[i];
        }
        nrm = std::sqrt(nrm);
        const double x0 = std::hypot(h.vr[0], h.vi[0]);
        if (nrm == 0.0) {
            sub[k] = 0.0;
        } else {
            const double phr = x0 > 0.0 ? h.vr[0] / x0 : 1.0, phi = x0 > 0.0 ? h.vi[0] / x0 : 0.0;
            // alpha = -phase |x|, v = x - alpha e1
            sub[k] = {-phr * nrm, -phi * nrm};
            h.vr[0] += phr * nrm;
            h.vi[0] += phi * nrm;
            h.tau = 1.0 / (nrm * (nrm + x0));
            // p = tau A22 v
            for (std::size_t i = 0; i < m; ++i) {
                const double* rr = &ar[(off + i) * n + off];
                const double* ri = &ai[(off + i) * n + off];
                double sr = 0.0, si = 0.0;
                for (std::size_t j = 0; j < m; ++j) {
                    sr += rr[j] * h.vr[j] - ri[j] * h.vi[j];
                    si += rr[j] * h.vi[j] + ri[j] * h.vr[j];
                }
                pr[i] = h.tau * sr;
                pi[i] = h.tau * si;
            }
            double vp = 0.0;  // Re v^H p
            for (std::size_t i = 0; i < m; ++i) vp += h.vr[i] * pr[i] + h.vi[i] * pi[i];
            const double kk = 0.5 * h.tau * vp;
            for (std::size_t i = 0; i < m; ++i) {
                wr[i] = pr[i] - kk * h.vr[i];
                wi[i] = pi[i] - kk * h.vi[i];
            }
            // A22 -= v w^H + w v^H
            for (std::size_t i = 0; i < m; ++i) {
                double* rr = &ar[(off + i) * n + off];
                double* ri = &ai[(off + i) * n + off];
                const double vri = h.vr[i], vii = h.vi[i], wri = wr[i], wii = wi[i];
                for (std::size_t j = 0; j < m; ++j) {
                    rr[j] -= vri * wr[j] + vii * wi[j] + wri * h.vr[j] + wii * h.vi[j];
                    ri[j] -= vii * wr[j] - vri * wi[j] + wii * h.vr[j] - wri * h.vi[j];
                }
            }
        }
        d[k] = ar[k * n + k];
        refl.push_back(std::move(h));
    }
    if (n >= 2) {
        d[n - 2] = ar[(n - 2) * n + n - 2];
        sub[n - 2] = {ar[(n - 1) * n + n - 2], ai[(n - 1) * n + n - 2]};
    }
    d[n - 1] = ar[(n - 1) * n + n - 1];

    // T = D T' D^H with T' real, subdiagonal |sub|
    std::vector<cplx> phase(n, 1.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double a = std::abs(sub[k]);
        e[k] = a;
        phase[k + 1] = phase[k] * (a > 0.0 ? sub[k] / a : cplx(1.0));
    }
    std::vector<double> evals = d;
    tridiagonal_ql(evals, e, nullptr);
    out.lo = evals.front();
    out.hi = evals.back();

    auto lift = [&](double lambda) {
        const std::vector<double> y = tridiagonal_eigenvector(d, e, lambda);
        std::vector<double> zr(n), zi(n);
        for (std::size_t i = 0; i < n; ++i) {
            zr[i] = phase[i].real() * y[i];
            zi[i] = phase[i].imag() * y[i];
        }
        for (std::size_t k = refl.size(); k-- > 0;) apply_reflector(refl[k], k + 1, zr, zi);
        CVector v(n);
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = {zr[i], zi[i]};
            nrm += zr[i] * zr[i] + zi[i] * zi[i];
        }
        nrm = std::sqrt(nrm);
        for (auto& x : v) x /= nrm;
        return v;
    };
    out.v_lo = lift(out.lo);
    out.v_hi = lift(out.hi);
    return out;
}

}  // namespace kfrac::eig
