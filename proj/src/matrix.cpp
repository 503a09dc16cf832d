#include "enttest/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace enttest {

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

cplx ComplexMatrix::trace() const {
    cplx t(0, 0);
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0;
    for (const cplx& z : a_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0;
    for (const cplx& z : a_) s += std::norm(z);
    return std::sqrt(s);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (o.dim_ != dim_) throw DimensionError("matrix dimension mismatch in +");
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (o.dim_ != dim_) throw DimensionError("matrix dimension mismatch in -");
    for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (cplx& z : a_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim_ != b.dim_) throw DimensionError("matrix dimension mismatch in *");
    const int n = a.dim_;
    ComplexMatrix r(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0, 0)) continue;
            const cplx* brow = &b.a_[static_cast<size_t>(k) * n];
            cplx* rrow = &r.a_[static_cast<size_t>(i) * n];
            for (int j = 0; j < n; ++j) rrow[j] += aik * brow[j];
        }
    }
    return r;
}

cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionError("matrix dimension mismatch in trace_product");
    const int n = a.dim();
    cplx t(0, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t += a(i, j) * b(j, i);
    return t;
}

cplx vector_expectation(const ComplexMatrix& a, const std::vector<cplx>& v) {
    const int n = a.dim();
    if (static_cast<int>(v.size()) != n) throw DimensionError("vector length mismatch");
    cplx t(0, 0);
    for (int i = 0; i < n; ++i) {
        cplx row(0, 0);
        for (int j = 0; j < n; ++j) row += a(i, j) * v[j];
        t += std::conj(v[i]) * row;
    }
    return t;
}

ComplexMatrix outer_projector(const std::vector<cplx>& v) {
    const int n = static_cast<int>(v.size());
    ComplexMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r(i, j) = v[i] * std::conj(v[j]);
    return r;
}

namespace {

// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
// form, accumulating the unitary Q so that A = Q T Q^dag. Reflectors are
// chosen with a real beta, which makes the resulting subdiagonal real
// without a separate phase-rotation pass.
void householder_tridiag(ComplexMatrix& a, ComplexMatrix& q, std::vector<double>& d,
                         std::vector<double>& sub) {
    const int n = a.dim();
    q = ComplexMatrix::identity(n);
    d.assign(n, 0.0);
    sub.assign(n, 0.0);

    std::vector<cplx> v(n), w(n), qv(n), qcol(n);
    for (int i = n - 1; i >= 1; --i) {
        const int m = i;  // reflector acts on indices 0..i-1
        // x = A[0..i-1, i]
        double scale = 0;
        for (int j = 0; j < m; ++j) scale = std::max(scale, std::abs(a(j, i)));
        if (scale == 0.0) {
            sub[i] = 0.0;
            continue;
        }
        double xnorm2 = 0;
        for (int j = 0; j < m; ++j) {
            const cplx x = a(j, i) / scale;
            v[j] = x;
            xnorm2 += std::norm(x);
        }
        const cplx alpha = v[m - 1];
        const double beta = -std::copysign(std::sqrt(xnorm2), alpha.real() >= 0 ? 1.0 : -1.0);
        v[m - 1] -= beta;
        const cplx denom = beta * (beta - alpha);
        const cplx tau = 1.0 / denom;

        // w = A0 v over the leading i x i block
        for (int r = 0; r < m; ++r) {
            cplx s(0, 0);
            for (int c = 0; c < m; ++c) s += a(r, c) * v[c];
            w[r] = s;
        }
        cplx vw(0, 0);
        for (int r = 0; r < m; ++r) vw += std::conj(v[r]) * w[r];
        const double tau2 = std::norm(tau);
        // qvec = conj(tau) w - 0.5 |tau|^2 (v^dag w) v
        for (int r = 0; r < m; ++r) w[r] = std::conj(tau) * w[r] - 0.5 * tau2 * vw * v[r];
        // A0 -= v q^dag + q v^dag
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c)
                a(r, c) -= v[r] * std::conj(w[c]) + w[r] * std::conj(v[c]);

        // column/row i becomes beta * scale at the neighbor, zero above
        for (int j = 0; j < m - 1; ++j) {
            a(j, i) = 0.0;
            a(i, j) = 0.0;
        }
        a(m - 1, i) = beta * scale;
        a(i, m - 1) = beta * scale;
        sub[i] = beta * scale;

        // Q <- Q (1 - conj(tau) v v^dag)
        for (int r = 0; r < n; ++r) {
            cplx s(0, 0);
            for (int c = 0; c < m; ++c) s += q(r, c) * v[c];
            qv[r] = s * std::conj(tau);
        }
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < m; ++c) q(r, c) -= qv[r] * std::conj(v[c]);
    }
    for (int j = 0; j < n; ++j) d[j] = a(j, j).real();
}

// Implicit-shift QL on a real symmetric tridiagonal matrix, rotations
// accumulated into the complex columns of z. d: diagonal; e: e[i] holds the
// element between i and i+1 (e[n-1] = 0 sentinel).
void tql2(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& z) {
    const int n = static_cast<int>(d.size());
    if (n <= 1) return;
    const double eps = std::numeric_limits<double>::epsilon();

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 64)
                    throw ConvergenceError("tridiagonal QL failed to converge", std::abs(e[l]));
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        const cplx fk = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * fk;
                        z(k, i) = c * z(k, i) - s * fk;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

EigenSystem hermitian_eig(const ComplexMatrix& h) {
    const int n = h.dim();
    EigenSystem es;
    if (n == 0) {
        es.vectors = ComplexMatrix(0);
        return es;
    }
    // average away any tiny non-Hermitian round-off
    ComplexMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));

    if (n == 1) {
        es.values = {a(0, 0).real()};
        es.vectors = ComplexMatrix::identity(1);
        return es;
    }
    if (n == 2) {
        // closed form keeps the seesaw inner loop cheap
        const double p = a(0, 0).real(), q = a(1, 1).real();
        const cplx b = a(0, 1);
        const double h = 0.5 * (p - q);
        const double r = std::sqrt(h * h + std::norm(b));
        const double mid = 0.5 * (p + q);
        es.values = {mid - r, mid + r};
        es.vectors = ComplexMatrix(2);
        if (r < 1e-300) {
            es.vectors = ComplexMatrix::identity(2);
            return es;
        }
        // eigenvector for mid + r: (b, r - h) (up to normalization), unless b ~ 0
        if (std::abs(b) < 1e-300) {
            if (p >= q) {
                es.vectors(0, 1) = 1;
                es.vectors(1, 0) = 1;
            } else {
                es.vectors(0, 0) = 1;
                es.vectors(1, 1) = 1;
            }
            return es;
        }
        const cplx v1a = b, v1b = cplx(r - h, 0);
        const double n1 = std::sqrt(std::norm(v1a) + std::norm(v1b));
        es.vectors(0, 1) = v1a / n1;
        es.vectors(1, 1) = v1b / n1;
        // orthogonal partner
        es.vectors(0, 0) = -std::conj(es.vectors(1, 1));
        es.vectors(1, 0) = std::conj(es.vectors(0, 1));
        return es;
    }

    ComplexMatrix q(n);
    std::vector<double> d, sub;
    householder_tridiag(a, q, d, sub);

    // shift subdiagonal to tql2 convention: e[i] couples i and i+1
    std::vector<double> e(n, 0.0);
    for (int i = 1; i < n; ++i) e[i - 1] = sub[i];
    tql2(d, e, q);

    // sort ascending, carrying columns
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) { return d[x] < d[y]; });
    es.values.resize(n);
    es.vectors = ComplexMatrix(n);
    for (int k = 0; k < n; ++k) {
        es.values[k] = d[idx[k]];
        for (int r = 0; r < n; ++r) es.vectors(r, k) = q(r, idx[k]);
    }
    return es;
}

}  // namespace enttest
