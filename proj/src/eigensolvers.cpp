#include "kfrac/eigensolvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "kfrac/error.hpp"

namespace kfrac::eig {

namespace {
constexpr double eps = std::numeric_limits<double>::epsilon();
}

void tridiagonalize(Matrix a, std::vector<double>& d, std::vector<double>& e, Matrix* q) {
    if (!a.square()) throw ShapeError("tridiagonalize: matrix must be square");
    const std::size_t n = a.rows();
    d.assign(n, 0.0);
    e.assign(n > 0 ? n - 1 : 0, 0.0);
    if (n == 0) return;
    std::vector<std::vector<double>> vs;
    std::vector<double> taus;
    std::vector<double> p(n), w(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = n - k - 1;
        std::vector<double> v(m);
        double nrm = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            v[i] = a(k + 1 + i, k);
            nrm += v[i] * v[i];
        }
        nrm = std::sqrt(nrm);
        double tau = 0.0;
        if (nrm == 0.0) {
            e[k] = 0.0;
        } else {
            const double alpha = v[0] >= 0.0 ? -nrm : nrm;
            v[0] -= alpha;
            double vv = 0.0;
            for (double x : v) vv += x * x;
            tau = 2.0 / vv;
            e[k] = alpha;
            // p = tau A22 v, w = p - (tau p.v / 2) v, A22 -= v w^T + w v^T
            for (std::size_t i = 0; i < m; ++i) {
                const double* row = &a(k + 1 + i, k + 1);
                double s = 0.0;
                for (std::size_t j = 0; j < m; ++j) s += row[j] * v[j];
                p[i] = tau * s;
            }
            double pv = 0.0;
            for (std::size_t i = 0; i < m; ++i) pv += p[i] * v[i];
            const double kk = 0.5 * tau * pv;
            for (std::size_t i = 0; i < m; ++i) w[i] = p[i] - kk * v[i];
            for (std::size_t i = 0; i < m; ++i) {
                double* row = &a(k + 1 + i, k + 1);
                const double vi = v[i], wi = w[i];
                for (std::size_t j = 0; j < m; ++j) row[j] -= vi * w[j] + wi * v[j];
            }
        }
        d[k] = a(k, k);
        vs.push_back(std::move(v));
        taus.push_back(tau);
    }
    if (n >= 2) {
        d[n - 2] = a(n - 2, n - 2);
        e[n - 2] = a(n - 1, n - 2);
    }
    d[n - 1] = a(n - 1, n - 1);
    if (!q) return;
    *q = Matrix::identity(n);
    for (std::size_t kk = vs.size(); kk-- > 0;) {
        const auto& v = vs[kk];
        const double tau = taus[kk];
        if (tau == 0.0) continue;
        const std::size_t off = kk + 1, m = v.size();
        // Q[off:, off:] = (I - tau v v^T) Q[off:, off:]
        std::vector<double> s(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            const double* row = &(*q)(off + i, off);
            for (std::size_t j = 0; j < m; ++j) s[j] += v[i] * row[j];
        }
        for (std::size_t i = 0; i < m; ++i) {
            double* row = &(*q)(off + i, off);
            const double tv = tau * v[i];
            for (std::size_t j = 0; j < m; ++j) row[j] -= tv * s[j];
        }
    }
}

void tridiagonal_ql(std::vector<double>& d, std::vector<double> e, Matrix* z) {
    const int n = static_cast<int>(d.size());
    if (n == 0) return;
    e.resize(n, 0.0);
    e[n - 1] = 0.0;
    double f = 0.0, tst1 = 0.0;
    for (int l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        int m = l;
        while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 60) throw ConvergenceError("tridiagonal QL: no convergence");
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (int i = l + 2; i < n; ++i) d[i] -= h;
                f += h;
                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0, s = 0.0, s2 = 0.0;
                const double el1 = e[l + 1];
                for (int i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if (z) {
                        for (std::size_t k = 0; k < z->rows(); ++k) {
                            double& zi1 = (*z)(k, i + 1);
                            double& zi = (*z)(k, i);
                            h = zi1;
                            zi1 = s * zi + c * h;
                            zi = c * zi - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    std::vector<double> sorted(n);
    for (int i = 0; i < n; ++i) sorted[i] = d[order[i]];
    d = std::move(sorted);
    if (z) {
        Matrix zs(z->rows(), z->cols());
        for (std::size_t k = 0; k < z->rows(); ++k)
            for (int i = 0; i < n; ++i) zs(k, i) = (*z)(k, order[i]);
        *z = std::move(zs);
    }
}

std::vector<double> tridiagonal_eigenvector(const std::vector<double>& d, const std::vector<double>& e,
                                            double lambda) {
    const std::size_t n = d.size();
    if (n == 1) return {1.0};
    double tnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        tnorm = std::max(tnorm, std::abs(d[i]) + (i < n - 1 ? std::abs(e[i]) : 0.0) + (i > 0 ? std::abs(e[i - 1]) : 0.0));
    const double tiny = std::max(eps * tnorm, std::numeric_limits<double>::min());
    // LU with partial pivoting of T - lambda I (LAPACK gttrf layout)
    std::vector<double> dl(e.begin(), e.end()), dd(n), du(e.begin(), e.end()), du2(n, 0.0);
    std::vector<char> swapped(n, 0);
    for (std::size_t i = 0; i < n; ++i) dd[i] = d[i] - lambda;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(dd[i]) >= std::abs(dl[i])) {
            if (dd[i] == 0.0) dd[i] = tiny;
            const double fact = dl[i] / dd[i];
            dl[i] = fact;
            dd[i + 1] -= fact * du[i];
        } else {
            const double fact = dd[i] / dl[i];
            dd[i] = dl[i];
            dl[i] = fact;
            const double temp = du[i];
            du[i] = dd[i + 1];
            dd[i + 1] = temp - fact * dd[i + 1];
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            swapped[i] = 1;
        }
    }
    for (auto& v : dd)
        if (std::abs(v) < tiny) v = v < 0 ? -tiny : tiny;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    std::vector<double> b(n);
    for (auto& v : b) v = u(rng);
    for (int it = 0; it < 3; ++it) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!swapped[i]) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                const double temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i];
            }
        }
        b[n - 1] /= dd[n - 1];
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dd[n - 2];
        for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / dd[i];
        double nrm = 0.0;
        for (double v : b) nrm += v * v;
        nrm = std::sqrt(nrm);
        for (auto& v : b) v /= nrm;
    }
    return b;
}

SymmetricEigen symmetric_eigen(const Matrix& a, bool vectors) {
    SymmetricEigen out;
    std::vector<double> e;
    if (vectors) {
        tridiagonalize(a, out.values, e, &out.vectors);
        tridiagonal_ql(out.values, e, &out.vectors);
    } else {
        tridiagonalize(a, out.values, e, nullptr);
        tridiagonal_ql(out.values, e, nullptr);
    }
    return out;
}

Matrix cholesky(const Matrix& b) {
    if (!b.square()) throw ShapeError("cholesky: matrix must be square");
    const std::size_t n = b.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = b(j, j);
        for (std::size_t k = 0; k < j; ++k) s -= l(j, k) * l(j, k);
        if (!(s > 0.0)) throw DomainError("cholesky: matrix is not positive definite");
        l(j, j) = std::sqrt(s);
        for (std::size_t i = j + 1; i < n; ++i) {
            double t = b(i, j);
            for (std::size_t k = 0; k < j; ++k) t -= l(i, k) * l(j, k);
            l(i, j) = t / l(j, j);
        }
    }
    return l;
}

std::vector<double> generalized_symmetric_eigenvalues(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || !a.square() || !b.square()) throw ShapeError("generalized eigenproblem: size mismatch");
    const std::size_t n = a.rows();
    const Matrix l = cholesky(b);
    // Y = L^{-1} A, then C = Y L^{-T} = (L^{-1} Y^T)^T
    auto lower_solve = [&](Matrix m) {
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t i = 0; i < n; ++i) {
                double s = m(i, c);
                for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * m(k, c);
                m(i, c) = s / l(i, i);
            }
        return m;
    };
    const Matrix y = lower_solve(a);
    Matrix c = lower_solve(y.transpose()).transpose();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) c(i, j) = c(j, i) = 0.5 * (c(i, j) + c(j, i));
    return symmetric_eigen(c, false).values;
}

void hessenberg_reduce(Matrix& h) {
    if (!h.square()) throw ShapeError("hessenberg_reduce: matrix must be square");
    const int n = static_cast<int>(h.rows());
    const int high = n - 1;
    std::vector<double> ort(n, 0.0);
    for (int m = 1; m <= high - 1; ++m) {
        double scale = 0.0;
        for (int i = m; i <= high; ++i) scale += std::abs(h(i, m - 1));
        if (scale == 0.0) continue;
        double hh = 0.0;
        for (int i = high; i >= m; --i) {
            ort[i] = h(i, m - 1) / scale;
            hh += ort[i] * ort[i];
        }
        double g = std::sqrt(hh);
        if (ort[m] > 0) g = -g;
        hh -= ort[m] * g;
        ort[m] -= g;
        for (int j = m; j < n; ++j) {
            double f = 0.0;
            for (int i = high; i >= m; --i) f += ort[i] * h(i, j);
            f /= hh;
            for (int i = m; i <= high; ++i) h(i, j) -= f * ort[i];
        }
        for (int i = 0; i <= high; ++i) {
            double f = 0.0;
            for (int j = high; j >= m; --j) f += ort[j] * h(i, j);
            f /= hh;
            for (int j = m; j <= high; ++j) h(i, j) -= f * ort[j];
        }
        ort[m] *= scale;
        h(m, m - 1) = scale * g;
        for (int i = m + 1; i <= high; ++i) h(i, m - 1) = 0.0;
    }
}

std::vector<cplx> hessenberg_qr(Matrix H) {
    const int nn = static_cast<int>(H.rows());
    std::vector<double> d(nn, 0.0), e(nn, 0.0);
    int n = nn - 1;
    const int low = 0;
    double exshift = 0.0, p = 0, q = 0, r = 0, s = 0, z = 0, t, w, x, y;
    double norm = 0.0;
    for (int i = 0; i < nn; ++i)
        for (int j = std::max(i - 1, 0); j < nn; ++j) norm += std::abs(H(i, j));
    int iter = 0, total = 0;
    const int cap = 100 * std::max(nn, 1);
    while (n >= low) {
        int l = n;
        while (l > low) {
            s = std::abs(H(l - 1, l - 1)) + std::abs(H(l, l));
            if (s == 0.0) s = norm;
            if (std::abs(H(l, l - 1)) < eps * s) break;
            --l;
        }
        if (l == n) {
            H(n, n) += exshift;
            d[n] = H(n, n);
            e[n] = 0.0;
            --n;
            iter = 0;
        } else if (l == n - 1) {
            w = H(n, n - 1) * H(n - 1, n);
            p = (H(n - 1, n - 1) - H(n, n)) / 2.0;
            q = p * p + w;
            z = std::sqrt(std::abs(q));
            H(n, n) += exshift;
            H(n - 1, n - 1) += exshift;
            x = H(n, n);
            if (q >= 0) {
                z = p >= 0 ? p + z : p - z;
                d[n - 1] = x + z;
                d[n] = d[n - 1];
                if (z != 0.0) d[n] = x - w / z;
                e[n - 1] = 0.0;
                e[n] = 0.0;
            } else {
                d[n - 1] = x + p;
                d[n] = x + p;
                e[n - 1] = z;
                e[n] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            x = H(n, n);
            y = 0.0;
            w = 0.0;
            if (l < n) {
                y = H(n - 1, n - 1);
                w = H(n, n - 1) * H(n - 1, n);
            }
            if (iter == 10) {  // exceptional shift
                exshift += x;
                for (int i = low; i <= n; ++i) H(i, i) -= x;
                s = std::abs(H(n, n - 1)) + std::abs(H(n - 1, n - 2));
                x = y = 0.75 * s;
                w = -0.4375 * s * s;
            }
            if (iter == 30) {
                s = (y - x) / 2.0;
                s = s * s + w;
                if (s > 0) {
                    s = std::sqrt(s);
                    if (y < x) s = -s;
                    s = x - w / ((y - x) / 2.0 + s);
                    for (int i = low; i <= n; ++i) H(i, i) -= s;
                    exshift += s;
                    x = y = w = 0.964;
                }
            }
            ++iter;
            if (++total > cap) throw ConvergenceError("Hessenberg QR: iteration cap exceeded");
            int m = n - 2;
            while (m >= l) {
                z = H(m, m);
                r = x - z;
                s = y - z;
                p = (r * s - w) / H(m + 1, m) + H(m, m + 1);
                q = H(m + 1, m + 1) - z - r - s;
                r = H(m + 2, m + 1);
                s = std::abs(p) + std::abs(q) + std::abs(r);
                p /= s;
                q /= s;
                r /= s;
                if (m == l) break;
                if (std::abs(H(m, m - 1)) * (std::abs(q) + std::abs(r)) <
                    eps * (std::abs(p) * (std::abs(H(m - 1, m - 1)) + std::abs(z) + std::abs(H(m + 1, m + 1)))))
                    break;
                --m;
            }
            for (int i = m + 2; i <= n; ++i) {
                H(i, i - 2) = 0.0;
                if (i > m + 2) H(i, i - 3) = 0.0;
            }
            for (int k = m; k <= n - 1; ++k) {
                const bool notlast = (k != n - 1);
                if (k != m) {
                    p = H(k, k - 1);
                    q = H(k + 1, k - 1);
                    r = notlast ? H(k + 2, k - 1) : 0.0;
                    x = std::abs(p) + std::abs(q) + std::abs(r);
                    if (x == 0.0) continue;
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = std::sqrt(p * p + q * q + r * r);
                if (p < 0) s = -s;
                if (s != 0) {
                    if (k != m)
                        H(k, k - 1) = -s * x;
                    else if (l != m)
                        H(k, k - 1) = -H(k, k - 1);
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;
                    for (int j = k; j < nn; ++j) {
                        p = H(k, j) + q * H(k + 1, j);
                        if (notlast) {
                            p += r * H(k + 2, j);
                            H(k + 2, j) -= p * z;
                        }
                        H(k, j) -= p * x;
                        H(k + 1, j) -= p * y;
                    }
                    for (int i = 0; i <= std::min(n, k + 3); ++i) {
                        p = x * H(i, k) + y * H(i, k + 1);
                        if (notlast) {
                            p += z * H(i, k + 2);
                            H(i, k + 2) -= p * r;
                        }
                        H(i, k) -= p;
                        H(i, k + 1) -= p * q;
                    }
                }
            }
        }
    }
    (void)t;
    std::vector<cplx> out(nn);
    for (int i = 0; i < nn; ++i) out[i] = {d[i], e[i]};
    return out;
}

double hessenberg_residual(const Matrix& h, cplx lambda) {
    const std::size_t n = h.rows();
    if (n == 0) return 0.0;
    double hnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = (i > 0 ? i - 1 : 0); j < n; ++j) hnorm = std::max(hnorm, std::abs(h(i, j)));
    const double tiny = std::max(eps * hnorm * n, std::numeric_limits<double>::min());
    // LU with adjacent-row pivoting of H - lambda I (upper Hessenberg keeps one subdiagonal)
    CMatrix u(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = (i > 0 ? i - 1 : 0); j < n; ++j) u(i, j) = h(i, j) - (i == j ? lambda : cplx{});
    std::vector<cplx> mult(n, 0.0);
    std::vector<char> swapped(n, 0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (std::abs(u(k + 1, k)) > std::abs(u(k, k))) {
            for (std::size_t j = k; j < n; ++j) std::swap(u(k, j), u(k + 1, j));
            swapped[k] = 1;
        }
        if (std::abs(u(k, k)) < tiny) u(k, k) = tiny;
        const cplx f = u(k + 1, k) / u(k, k);
        mult[k] = f;
        u(k + 1, k) = 0.0;
        for (std::size_t j = k + 1; j < n; ++j) u(k + 1, j) -= f * u(k, j);
    }
    if (std::abs(u(n - 1, n - 1)) < tiny) u(n - 1, n - 1) = tiny;
    CVector x(n, 1.0);
    for (int it = 0; it < 3; ++it) {
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (swapped[k]) std::swap(x[k], x[k + 1]);
            x[k + 1] -= mult[k] * x[k];
        }
        for (std::size_t i = n; i-- > 0;) {
            cplx s = x[i];
            for (std::size_t j = i + 1; j < n; ++j) s -= u(i, j) * x[j];
            x[i] = s / u(i, i);
        }
        double nrm = 0.0;
        for (const auto& v : x) nrm += std::norm(v);
        nrm = std::sqrt(nrm);
        for (auto& v : x) v /= nrm;
    }
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cplx s = -lambda * x[i];
        for (std::size_t j = (i > 0 ? i - 1 : 0); j < n; ++j) s += h(i, j) * x[j];
        res += std::norm(s);
    }
    return std::sqrt(res);
}

}  // namespace kfrac::eig
