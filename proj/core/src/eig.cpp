#include "qclt/eig.hpp"

#include "qclt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace qclt {

namespace {

// ---------------------------------------------------------------------------
// Real symmetric path: Householder reduction (tred2 lineage) + implicit-shift
// QL (tql2 lineage). V is n*n row-major; on entry the matrix, on exit the
// eigenvectors (columns) when accumulate=true.
// ---------------------------------------------------------------------------

void tred2(std::vector<double>& V, std::vector<double>& d, std::vector<double>& e,
           std::size_t n, bool accumulate) {
    auto v = [&](std::size_t i, std::size_t j) -> double& { return V[i * n + j]; };

    for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0, h = 0.0;
        for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
                v(j, i) = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                v(j, i) = f;
                g = e[j] + v(j, j) * f;
                for (std::size_t k = j + 1; k <= i - 1; ++k) {
                    g += v(k, j) * d[k];
                    e[k] += v(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (std::size_t k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    if (accumulate) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            v(n - 1, i) = v(i, i);
            v(i, i) = 1.0;
            const double h = d[i + 1];
            if (h != 0.0) {
                for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
                for (std::size_t j = 0; j <= i; ++j) {
                    double g = 0.0;
                    for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
                    for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
                }
            }
            for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
        }
        for (std::size_t j = 0; j < n; ++j) {
            d[j] = v(n - 1, j);
            v(n - 1, j) = 0.0;
        }
        v(n - 1, n - 1) = 1.0;
    } else {
        for (std::size_t j = 0; j < n; ++j) d[j] = v(j, j);
    }
    e[0] = 0.0;
}

// QL with implicit shifts on (d, e); e[0] unused. When accumulate=true the
// rotations are applied to V (n*n row-major). Returns false if an eigenvalue
// fails to converge (caller falls back to Jacobi).
bool tql2(std::vector<double>& d, std::vector<double>& e, std::vector<double>* V,
          std::size_t n) {
    if (n == 0) return true;
    auto v = [&](std::size_t i, std::size_t j) -> double& { return (*V)[i * n + j]; };

    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0, tst1 = 0.0;
    const double eps = std::ldexp(1.0, -52);
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n) {
            if (std::abs(e[m]) <= eps * tst1) break;
            ++m;
        }
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 100) return false;
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = c, c3 = c;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t i = m; i-- > l;) {
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
                    if (V) {
                        for (std::size_t k = 0; k < n; ++k) {
                            h = v(k, i + 1);
                            v(k, i + 1) = s * v(k, i) + c * h;
                            v(k, i) = c * v(k, i) - s * h;
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
    return true;
}

// ---------------------------------------------------------------------------
// Complex Hermitian path (htridi/htribk lineage). Internal buffers are
// column-major with 1-based accessors to stay close to the reference routines.
// ---------------------------------------------------------------------------

struct HtridiWork {
    std::size_t n;
    std::vector<double> ar, ai;       // n*n, transformation info after reduction
    std::vector<double> d, e;         // 1-based, size n+1
    std::vector<double> tau1, tau2;   // 1-based, size n+2
};

void htridi(const Matrix& A, HtridiWork& w) {
    const std::size_t n = A.rows();
    w.n = n;
    w.ar.assign(n * n, 0.0);
    w.ai.assign(n * n, 0.0);
    w.d.assign(n + 1, 0.0);
    w.e.assign(n + 1, 0.0);
    w.tau1.assign(n + 2, 0.0);
    w.tau2.assign(n + 2, 0.0);

    auto ar = [&](std::size_t i, std::size_t k) -> double& { return w.ar[(i - 1) + (k - 1) * n]; };
    auto ai = [&](std::size_t i, std::size_t k) -> double& { return w.ai[(i - 1) + (k - 1) * n]; };
    auto& d = w.d;
    auto& e = w.e;
    auto& tau1 = w.tau1;
    auto& tau2 = w.tau2;

    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t k = 1; k <= i; ++k) {
            ar(i, k) = A(i - 1, k - 1).real();
            ai(i, k) = A(i - 1, k - 1).imag();
        }

    tau1[n] = 1.0;
    tau2[n] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) d[i] = ar(i, i);

    for (std::size_t ii = 1; ii <= n; ++ii) {
        const std::size_t i = n + 1 - ii;
        const std::size_t l = i - 1;
        double h = 0.0, scale = 0.0, g, f, si = 0.0, hh;

        if (l >= 1) {
            for (std::size_t k = 1; k <= l; ++k)
                scale += std::abs(ar(i, k)) + std::abs(ai(i, k));
        }
        if (l < 1 || scale == 0.0) {
            if (l >= 1) {
                tau1[l] = 1.0;
                tau2[l] = 0.0;
            }
            e[i] = 0.0;
            hh = d[i];
            d[i] = ar(i, i);
            ar(i, i) = hh;
            ai(i, i) = scale * std::sqrt(h);
            continue;
        }

        for (std::size_t k = 1; k <= l; ++k) {
            ar(i, k) /= scale;
            ai(i, k) /= scale;
            h += ar(i, k) * ar(i, k) + ai(i, k) * ai(i, k);
        }
        g = std::sqrt(h);
        e[i] = scale * g;
        f = std::hypot(ar(i, l), ai(i, l));

        bool skip_update = false;
        if (f != 0.0) {
            tau1[l] = (ai(i, l) * tau2[i] - ar(i, l) * tau1[i]) / f;
            si = (ar(i, l) * tau2[i] + ai(i, l) * tau1[i]) / f;
            h += f * g;
            g = g / f + 1.0;
            ar(i, l) = g * ar(i, l);
            ai(i, l) = g * ai(i, l);
            if (l == 1) skip_update = true;
        } else {
            tau1[l] = -tau1[i];
            si = tau2[i];
            ar(i, l) = g;
        }

        if (!skip_update) {
            f = 0.0;
            for (std::size_t j = 1; j <= l; ++j) {
                g = 0.0;
                double gi = 0.0;
                for (std::size_t k = 1; k <= j; ++k) {
                    g += ar(j, k) * ar(i, k) + ai(j, k) * ai(i, k);
                    gi += -ar(j, k) * ai(i, k) + ai(j, k) * ar(i, k);
                }
                for (std::size_t k = j + 1; k <= l; ++k) {
                    g += ar(k, j) * ar(i, k) - ai(k, j) * ai(i, k);
                    gi += -ar(k, j) * ai(i, k) - ai(k, j) * ar(i, k);
                }
                e[j] = g / h;
                tau2[j] = gi / h;
                f += e[j] * ar(i, j) - tau2[j] * ai(i, j);
            }

            hh = f / (h + h);
            for (std::size_t j = 1; j <= l; ++j) {
                f = ar(i, j);
                g = e[j] - hh * f;
                e[j] = g;
                const double fi = -ai(i, j);
                double gi = tau2[j] - hh * fi;
                tau2[j] = -gi;
                for (std::size_t k = 1; k <= j; ++k) {
                    ar(j, k) += -f * e[k] - g * ar(i, k) + fi * tau2[k] + gi * ai(i, k);
                    ai(j, k) += -f * tau2[k] - g * ai(i, k) - fi * e[k] - gi * ar(i, k);
                }
            }
        }

        for (std::size_t k = 1; k <= l; ++k) {
            ar(i, k) = scale * ar(i, k);
            ai(i, k) = scale * ai(i, k);
        }
        tau2[l] = -si;

        hh = d[i];
        d[i] = ar(i, i);
        ar(i, i) = hh;
        ai(i, i) = scale * std::sqrt(h);
    }
}

// Back-transform the real tridiagonal eigenvectors Z (n*n row-major) into
// complex eigenvectors of the original Hermitian matrix.
Matrix htribk(const HtridiWork& w, const std::vector<double>& Z) {
    const std::size_t n = w.n;
    auto ar = [&](std::size_t i, std::size_t k) { return w.ar[(i - 1) + (k - 1) * n]; };
    auto ai = [&](std::size_t i, std::size_t k) { return w.ai[(i - 1) + (k - 1) * n]; };

    std::vector<double> zr(n * n), zi(n * n);
    auto Zr = [&](std::size_t k, std::size_t j) -> double& { return zr[(k - 1) * n + (j - 1)]; };
    auto Zi = [&](std::size_t k, std::size_t j) -> double& { return zi[(k - 1) * n + (j - 1)]; };

    for (std::size_t k = 1; k <= n; ++k)
        for (std::size_t j = 1; j <= n; ++j) {
            const double z = Z[(k - 1) * n + (j - 1)];
            Zi(k, j) = -z * w.tau2[k];
            Zr(k, j) = z * w.tau1[k];
        }

    for (std::size_t i = 2; i <= n; ++i) {
        const std::size_t l = i - 1;
        const double h = ai(i, i);
        if (h == 0.0) continue;
        for (std::size_t j = 1; j <= n; ++j) {
            double s = 0.0, si = 0.0;
            for (std::size_t k = 1; k <= l; ++k) {
                s += ar(i, k) * Zr(k, j) - ai(i, k) * Zi(k, j);
                si += ar(i, k) * Zi(k, j) + ai(i, k) * Zr(k, j);
            }
            s = s / h / h;
            si = si / h / h;
            for (std::size_t k = 1; k <= l; ++k) {
                Zr(k, j) -= s * ar(i, k) + si * ai(i, k);
                Zi(k, j) += -si * ar(i, k) + s * ai(i, k);
            }
        }
    }

    Matrix V(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            V(k, j) = cplx(zr[k * n + j], zi[k * n + j]);
    return V;
}

void sort_result(EigResult& r) {
    const std::size_t n = r.values.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return r.values[a] < r.values[b]; });
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = r.values[idx[i]];
    if (r.have_vectors) {
        Matrix V(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) V(i, j) = r.vectors(i, idx[j]);
        r.vectors = std::move(V);
    }
    r.values = std::move(vals);
}

} // namespace

EigResult eig_hermitian(const Matrix& A, bool want_vectors) {
    const std::size_t n = A.rows();
    if (n == 0 || A.cols() != n) throw invalid_parameter("eig_hermitian: square matrix required");
    if (!A.is_hermitian(1e-12 * std::max(1.0, A.max_abs())))
        throw invalid_parameter("eig_hermitian: matrix is not Hermitian");

    EigResult r;
    if (A.is_real(0.0)) {
        std::vector<double> V(n * n), d(n), e(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) V[i * n + j] = A(i, j).real();
        tred2(V, d, e, n, want_vectors);
        if (!tql2(d, e, want_vectors ? &V : nullptr, n)) return eig_jacobi_hermitian(A);
        r.values = std::move(d);
        if (want_vectors) {
            r.vectors = Matrix(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) r.vectors(i, j) = V[i * n + j];
            r.have_vectors = true;
        }
    } else {
        HtridiWork w;
        htridi(A, w);
        std::vector<double> d(n), e(n);
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = w.d[i + 1];
            e[i] = w.e[i + 1];
        }
        std::vector<double> Z;
        if (want_vectors) {
            Z.assign(n * n, 0.0);
            for (std::size_t i = 0; i < n; ++i) Z[i * n + i] = 1.0;
        }
        if (!tql2(d, e, want_vectors ? &Z : nullptr, n)) return eig_jacobi_hermitian(A);
        r.values = std::move(d);
        if (want_vectors) {
            r.vectors = htribk(w, Z);
            r.have_vectors = true;
        }
    }
    sort_result(r);
    return r;
}

EigResult eig_jacobi_hermitian(const Matrix& A) {
    const std::size_t n = A.rows();
    if (n == 0 || A.cols() != n) throw invalid_parameter("eig_jacobi: square matrix required");
    Matrix M = A;
    Matrix V = Matrix::identity(n);
    const double base = std::max(1.0, M.max_abs());

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(M(p, q)));
        if (off <= 1e-15 * base) break;

        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx b = M(p, q);
                const double ab = std::abs(b);
                if (ab <= 1e-18 * base) continue;
                const double a = M(p, p).real();
                const double dd = M(q, q).real();
                const cplx phase = b / ab;
                const double theta = (dd - a) / (2.0 * ab);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const cplx s = t * c * phase;

                // rows p, q of M: M = R^dagger M with R = [[c, s], [-conj(s), c]]
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx mp = M(p, k), mq = M(q, k);
                    M(p, k) = c * mp - s * mq;
                    M(q, k) = std::conj(s) * mp + c * mq;
                }
                // columns p, q of M and V: M = M R, V = V R
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx mp = M(k, p), mq = M(k, q);
                    M(k, p) = c * mp - std::conj(s) * mq;
                    M(k, q) = s * mp + c * mq;
                    const cplx vp = V(k, p), vq = V(k, q);
                    V(k, p) = c * vp - std::conj(s) * vq;
                    V(k, q) = s * vp + c * vq;
                }
            }
    }

    EigResult r;
    r.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.values[i] = M(i, i).real();
    r.vectors = std::move(V);
    r.have_vectors = true;
    sort_result(r);
    return r;
}

double spectral_norm(const Matrix& A) {
    const double base = std::max(1.0, A.max_abs());
    if (A.rows() == A.cols() && A.is_hermitian(1e-12 * base)) {
        auto r = eig_hermitian(A, false);
        double m = 0.0;
        for (double v : r.values) m = std::max(m, std::abs(v));
        return m;
    }
    const Matrix G = A.dagger() * A;
    auto r = eig_hermitian(G, false);
    double m = 0.0;
    for (double v : r.values) m = std::max(m, v);
    return std::sqrt(std::max(0.0, m));
}

} // namespace qclt
