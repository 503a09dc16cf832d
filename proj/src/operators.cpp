#include "enttest/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace enttest {

namespace {

int product_of(const std::vector<int>& dims) {
    int p = 1;
    for (int d : dims) p *= d;
    return p;
}

// Mixed-radix decomposition of a flat index into per-factor indices.
void decompose_index(int idx, const std::vector<int>& dims, std::vector<int>& out) {
    const int k = static_cast<int>(dims.size());
    out.resize(k);
    for (int f = k - 1; f >= 0; --f) {
        out[f] = idx % dims[f];
        idx /= dims[f];
    }
}

int compose_index(const std::vector<int>& digits, const std::vector<int>& dims) {
    int idx = 0;
    for (size_t f = 0; f < dims.size(); ++f) idx = idx * dims[f] + digits[f];
    return idx;
}

}  // namespace

HermitianOperator::HermitianOperator(ComplexMatrix m) : mat_(std::move(m)) {
    const int n = mat_.dim();
    const double scale = mat_.max_abs();
    double dev = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            dev = std::max(dev, std::abs(mat_(i, j) - std::conj(mat_(j, i))));
    if (dev > 1e-12 * std::max(scale, 1e-300))
        throw DomainError("operator is not Hermitian (deviation " + std::to_string(dev) + ")");
    // make it exactly Hermitian so spectral routines see a clean input
    for (int i = 0; i < n; ++i) {
        mat_(i, i) = cplx(mat_(i, i).real(), 0.0);
        for (int j = i + 1; j < n; ++j) {
            const cplx avg = 0.5 * (mat_(i, j) + std::conj(mat_(j, i)));
            mat_(i, j) = avg;
            mat_(j, i) = std::conj(avg);
        }
    }
}

Bipartition Bipartition::first_vs_rest(int n_factors, int n_left) {
    Bipartition b;
    for (int i = 0; i < n_left; ++i) b.left.push_back(i);
    for (int i = n_left; i < n_factors; ++i) b.right.push_back(i);
    return b;
}

void Bipartition::validate(int n_factors) const {
    std::set<int> seen;
    for (int i : left) seen.insert(i);
    for (int i : right) seen.insert(i);
    if (static_cast<int>(seen.size()) != n_factors ||
        static_cast<int>(left.size() + right.size()) != n_factors)
        throw DimensionError("bipartition does not partition the factor indices");
    for (int i : seen)
        if (i < 0 || i >= n_factors) throw DimensionError("bipartition index out of range");
}

DensityOperator::DensityOperator(HermitianOperator op, std::vector<int> factor_dims)
    : op_(std::move(op)), dims_(std::move(factor_dims)) {
    if (product_of(dims_) != op_.dim())
        throw DimensionError("factor_dims product does not match operator dimension");
    for (int d : dims_)
        if (d <= 0) throw DimensionError("factor dimensions must be positive");
    const double tr = op_.matrix().trace().real();
    if (std::abs(tr - 1.0) > 1e-10)
        throw DomainError("density operator trace " + std::to_string(tr) + " is not 1");
    const auto es = hermitian_eig(op_.matrix());
    if (!es.values.empty() && es.values.front() < -1e-10)
        throw DomainError("density operator has negative eigenvalue " +
                          std::to_string(es.values.front()));
}

SpectralDecomposition spectral_decompose(const HermitianOperator& h) {
    auto es = hermitian_eig(h.matrix());
    return {std::move(es.values), std::move(es.vectors)};
}

HermitianOperator matrix_function(const HermitianOperator& h,
                                  const std::function<double(double)>& f, double kernel_tol,
                                  double kernel_value) {
    const auto sd = spectral_decompose(h);
    const int n = h.dim();
    double radius = 0;
    for (double v : sd.eigenvalues) radius = std::max(radius, std::abs(v));
    std::vector<double> fv(n);
    for (int k = 0; k < n; ++k) {
        const double lam = sd.eigenvalues[k];
        if (std::abs(lam) <= kernel_tol * radius) {
            fv[k] = kernel_value;
        } else {
            const double y = f(lam);
            if (!std::isfinite(y))
                throw DomainError("matrix_function: f undefined at eigenvalue " +
                                  std::to_string(lam));
            fv[k] = y;
        }
    }
    ComplexMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx s(0, 0);
            for (int k = 0; k < n; ++k)
                s += sd.eigenvectors(i, k) * fv[k] * std::conj(sd.eigenvectors(j, k));
            r(i, j) = s;
        }
    return HermitianOperator(std::move(r));
}

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int na = a.dim(), nb = b.dim();
    ComplexMatrix r(na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0, 0)) continue;
            for (int k = 0; k < nb; ++k)
                for (int l = 0; l < nb; ++l) r(i * nb + k, j * nb + l) = aij * b(k, l);
        }
    return r;
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator(kronecker(a.matrix(), b.matrix()));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
    std::vector<int> dims = a.factor_dims();
    dims.insert(dims.end(), b.factor_dims().begin(), b.factor_dims().end());
    return DensityOperator(kronecker(a.matrix(), b.matrix()), std::move(dims));
}

ComplexMatrix partial_trace_matrix(const ComplexMatrix& m, const std::vector<int>& factor_dims,
                                   const std::vector<int>& traced_factors) {
    const int k = static_cast<int>(factor_dims.size());
    std::vector<bool> traced(k, false);
    for (int f : traced_factors) {
        if (f < 0 || f >= k) throw DimensionError("traced factor index out of range");
        traced[f] = true;
    }
    std::vector<int> kept;
    for (int f = 0; f < k; ++f)
        if (!traced[f]) kept.push_back(f);
    if (kept.empty()) throw DimensionError("partial trace would leave a scalar");

    std::vector<int> kept_dims, traced_dims_v;
    for (int f : kept) kept_dims.push_back(factor_dims[f]);
    std::vector<int> traced_list;
    for (int f = 0; f < k; ++f)
        if (traced[f]) {
            traced_list.push_back(f);
            traced_dims_v.push_back(factor_dims[f]);
        }
    const int dk = product_of(kept_dims);
    const int dt = product_of(traced_dims_v);

    ComplexMatrix r(dk);
    std::vector<int> di, dj, full_i(k), full_j(k), dt_digits;
    for (int i = 0; i < dk; ++i) {
        decompose_index(i, kept_dims, di);
        for (int j = 0; j < dk; ++j) {
            decompose_index(j, kept_dims, dj);
            cplx s(0, 0);
            for (int t = 0; t < dt; ++t) {
                decompose_index(t, traced_dims_v, dt_digits);
                for (size_t f = 0; f < kept.size(); ++f) {
                    full_i[kept[f]] = di[f];
                    full_j[kept[f]] = dj[f];
                }
                for (size_t f = 0; f < traced_list.size(); ++f) {
                    full_i[traced_list[f]] = dt_digits[f];
                    full_j[traced_list[f]] = dt_digits[f];
                }
                s += m(compose_index(full_i, factor_dims), compose_index(full_j, factor_dims));
            }
            r(i, j) = s;
        }
    }
    return r;
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& traced_factors) {
    ComplexMatrix r = partial_trace_matrix(rho.matrix(), rho.factor_dims(), traced_factors);
    std::vector<bool> traced(rho.factor_dims().size(), false);
    for (int f : traced_factors) traced[f] = true;
    std::vector<int> kept_dims;
    for (size_t f = 0; f < rho.factor_dims().size(); ++f)
        if (!traced[f]) kept_dims.push_back(rho.factor_dims()[f]);
    return DensityOperator(std::move(r), std::move(kept_dims));
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const std::vector<int>& factor_dims,
                                const Bipartition& cut) {
    cut.validate(static_cast<int>(factor_dims.size()));
    const int k = static_cast<int>(factor_dims.size());
    std::vector<bool> on_right(k, false);
    for (int f : cut.right) on_right[f] = true;
    const int n = m.dim();
    ComplexMatrix r(n);
    std::vector<int> di, dj, ti(k), tj(k);
    for (int i = 0; i < n; ++i) {
        decompose_index(i, factor_dims, di);
        for (int j = 0; j < n; ++j) {
            decompose_index(j, factor_dims, dj);
            for (int f = 0; f < k; ++f) {
                ti[f] = on_right[f] ? dj[f] : di[f];
                tj[f] = on_right[f] ? di[f] : dj[f];
            }
            r(compose_index(ti, factor_dims), compose_index(tj, factor_dims)) = m(i, j);
        }
    }
    return r;
}

ComplexMatrix permute_factors(const ComplexMatrix& m, const std::vector<int>& factor_dims,
                              const std::vector<int>& perm) {
    const int k = static_cast<int>(factor_dims.size());
    if (static_cast<int>(perm.size()) != k) throw DimensionError("permutation length mismatch");
    std::vector<int> new_dims(k);
    for (int f = 0; f < k; ++f) new_dims[f] = factor_dims[perm[f]];
    const int n = m.dim();
    ComplexMatrix r(n);
    std::vector<int> di, dj, pi(k), pj(k);
    for (int i = 0; i < n; ++i) {
        decompose_index(i, factor_dims, di);
        for (int j = 0; j < n; ++j) {
            decompose_index(j, factor_dims, dj);
            for (int f = 0; f < k; ++f) {
                pi[f] = di[perm[f]];
                pj[f] = dj[perm[f]];
            }
            r(compose_index(pi, new_dims), compose_index(pj, new_dims)) = m(i, j);
        }
    }
    return r;
}

DensityOperator regroup_copies(const DensityOperator& rho_n, int d_a, int d_b, int n) {
    const auto& dims = rho_n.factor_dims();
    if (static_cast<int>(dims.size()) != 2 * n)
        throw DimensionError("regroup_copies expects 2n factors");
    for (int c = 0; c < n; ++c)
        if (dims[2 * c] != d_a || dims[2 * c + 1] != d_b)
            throw DimensionError("regroup_copies factor dims must be (dA,dB) repeated");
    std::vector<int> perm;
    for (int c = 0; c < n; ++c) perm.push_back(2 * c);      // A parts
    for (int c = 0; c < n; ++c) perm.push_back(2 * c + 1);  // B parts
    ComplexMatrix r = permute_factors(rho_n.matrix(), dims, perm);
    std::vector<int> new_dims;
    for (int c = 0; c < n; ++c) new_dims.push_back(d_a);
    for (int c = 0; c < n; ++c) new_dims.push_back(d_b);
    return DensityOperator(std::move(r), std::move(new_dims));
}

DensityOperator tensor_power(const DensityOperator& rho, int n) {
    if (n < 1) throw DimensionError("tensor power needs n >= 1");
    DensityOperator out = rho;
    for (int i = 1; i < n; ++i) out = tensor(out, rho);
    return out;
}

DensityOperator max_entangled(int m) {
    if (m < 1) throw DimensionError("max_entangled needs m >= 1");
    const int d = 1 << m;
    // |Phi_m> = 2^{-m/2} sum_x |x>_{A^m} |x>_{B^m}
    ComplexMatrix mat(d * d);
    const double w = 1.0 / d;
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y) mat(x * d + x, y * d + y) = w;
    std::vector<int> dims(2 * m, 2);
    return DensityOperator(std::move(mat), std::move(dims));
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) throw DimensionError("trace_distance dimension mismatch");
    const auto es = hermitian_eig(rho.matrix() - sigma.matrix());
    double s = 0;
    for (double v : es.values) s += std::abs(v);
    return 0.5 * s;
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) throw DimensionError("fidelity dimension mismatch");
    const auto sq = matrix_function(
        rho.op(), [](double x) { return std::sqrt(std::max(x, 0.0)); }, kKernelTol);
    // || sqrt(rho) sqrt(sigma) ||_1^2 = (sum sqrt eig of sqrt(rho) sigma sqrt(rho)))^2
    ComplexMatrix inner = sq.matrix() * sigma.matrix() * sq.matrix();
    const auto es = hermitian_eig(inner);
    double s = 0;
    for (double v : es.values) s += std::sqrt(std::max(v, 0.0));
    return s * s;
}

double negative_part_trace(const HermitianOperator& h) {
    const auto es = hermitian_eig(h.matrix());
    double s = 0;
    for (double v : es.values)
        if (v < 0) s += v;
    return s;
}

ComplexMatrix support_projector(const HermitianOperator& h, double kernel_tol) {
    const auto sd = spectral_decompose(h);
    const int n = h.dim();
    double radius = 0;
    for (double v : sd.eigenvalues) radius = std::max(radius, std::abs(v));
    ComplexMatrix p(n);
    for (int k = 0; k < n; ++k) {
        if (std::abs(sd.eigenvalues[k]) <= kernel_tol * radius) continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                p(i, j) += sd.eigenvectors(i, k) * std::conj(sd.eigenvectors(j, k));
    }
    return p;
}

}  // namespace enttest
