#include "enttest/separability.hpp"

#include <algorithm>
#include <cmath>

#include "enttest/rng.hpp"

namespace enttest {

void ProductVector::validate() const {
    double na = 0, nb = 0;
    for (const cplx& z : alpha) na += std::norm(z);
    for (const cplx& z : beta) nb += std::norm(z);
    if (std::abs(std::sqrt(na) - 1.0) > 1e-12 || std::abs(std::sqrt(nb) - 1.0) > 1e-12)
        throw DomainError("product vector factors are not unit vectors");
}

std::vector<cplx> ProductVector::joint() const {
    std::vector<cplx> v(alpha.size() * beta.size());
    for (size_t i = 0; i < alpha.size(); ++i)
        for (size_t j = 0; j < beta.size(); ++j) v[i * beta.size() + j] = alpha[i] * beta[j];
    return v;
}

void SeparableEnsemble::validate() const {
    double s = 0;
    for (const auto& m : members) {
        if (m.weight < 0) throw DomainError("separable ensemble has negative weight");
        if (static_cast<int>(m.vec.alpha.size()) != dim_left ||
            static_cast<int>(m.vec.beta.size()) != dim_right)
            throw DimensionError("separable ensemble member has wrong factor dimensions");
        m.vec.validate();
        s += m.weight;
    }
    if (std::abs(s - 1.0) > 1e-10) throw DomainError("separable ensemble weights do not sum to 1");
}

ComplexMatrix SeparableEnsemble::density_matrix() const {
    const int n = dim_left * dim_right;
    ComplexMatrix rho(n);
    for (const auto& m : members) {
        const auto v = m.vec.joint();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) rho(i, j) += m.weight * v[i] * std::conj(v[j]);
    }
    return rho;
}

DensityOperator SeparableEnsemble::density_operator() const {
    return DensityOperator(density_matrix(), {dim_left, dim_right});
}

namespace {

// B[k,l] = sum_{i,j} conj(alpha_i) G[(i,k),(j,l)] alpha_j
void contract_left(const ComplexMatrix& g, int dl, int dr, const std::vector<cplx>& alpha,
                   ComplexMatrix& out) {
    for (int k = 0; k < dr; ++k)
        for (int l = 0; l < dr; ++l) {
            cplx s(0, 0);
            for (int i = 0; i < dl; ++i) {
                const cplx ai = std::conj(alpha[i]);
                if (ai == cplx(0, 0)) continue;
                for (int j = 0; j < dl; ++j) s += ai * g(i * dr + k, j * dr + l) * alpha[j];
            }
            out(k, l) = s;
        }
}

// A[i,j] = sum_{k,l} conj(beta_k) G[(i,k),(j,l)] beta_l
void contract_right(const ComplexMatrix& g, int dl, int dr, const std::vector<cplx>& beta,
                    ComplexMatrix& out) {
    for (int i = 0; i < dl; ++i)
        for (int j = 0; j < dl; ++j) {
            cplx s(0, 0);
            for (int k = 0; k < dr; ++k) {
                const cplx bk = std::conj(beta[k]);
                if (bk == cplx(0, 0)) continue;
                for (int l = 0; l < dr; ++l) s += bk * g(i * dr + k, j * dr + l) * beta[l];
            }
            out(i, j) = s;
        }
}

std::vector<cplx> top_eigenvector(const ComplexMatrix& h, double& value) {
    const auto es = hermitian_eig(h);
    const int n = h.dim();
    const int k = n - 1;  // ascending order, take the largest
    value = es.values[k];
    std::vector<cplx> v(n);
    for (int i = 0; i < n; ++i) v[i] = es.vectors(i, k);
    return v;
}

}  // namespace

LmoResult lmo_product(const ComplexMatrix& g, int dim_left, int dim_right, Sense sense,
                      const SeesawConfig& cfg) {
    if (g.dim() != dim_left * dim_right) throw DimensionError("lmo_product dimension mismatch");
    if (cfg.restarts < 1) throw DomainError("seesaw needs at least one restart");

    ComplexMatrix work = g;
    if (sense == Sense::Min) work *= cplx(-1, 0);

    LmoResult best;
    best.value = -std::numeric_limits<double>::infinity();
    ComplexMatrix bmat(dim_right), amat(dim_left);

    for (int r = 0; r < cfg.restarts; ++r) {
        Rng rng(cfg.seed, static_cast<uint64_t>(r));
        std::vector<cplx> alpha = rng.unit_vector(dim_left);
        std::vector<cplx> beta = rng.unit_vector(dim_right);
        double value = -std::numeric_limits<double>::infinity();
        for (int it = 0; it < cfg.max_iters; ++it) {
            double vb, va;
            contract_left(work, dim_left, dim_right, alpha, bmat);
            beta = top_eigenvector(bmat, vb);
            contract_right(work, dim_left, dim_right, beta, amat);
            alpha = top_eigenvector(amat, va);
            if (va - value < cfg.improvement_tol) {
                value = std::max(value, va);
                break;
            }
            value = va;
        }
        if (value > best.value) {
            best.value = value;
            best.vec = ProductVector{alpha, beta};
        }
    }
    if (sense == Sense::Min) best.value = -best.value;
    return best;
}

double sep_max_overlap(const ComplexMatrix& m, int dim_left, int dim_right,
                       const SeesawConfig& cfg) {
    const LmoResult r = lmo_product(m, dim_left, dim_right, Sense::Max, cfg);
    return std::clamp(r.value, 0.0, 1.0);
}

PptResult ppt_check(const DensityOperator& rho, const Bipartition& cut) {
    const ComplexMatrix pt = partial_transpose(rho.matrix(), rho.factor_dims(), cut);
    const auto es = hermitian_eig(pt);
    const double min_ev = es.values.empty() ? 0.0 : es.values.front();
    return {min_ev >= -1e-10, min_ev};
}

PptResult ppt_check(const DensityOperator& rho) {
    const int k = static_cast<int>(rho.factor_dims().size());
    return ppt_check(rho, Bipartition::first_vs_rest(k, 1));
}

bool gurvits_barnum_certify(const HermitianOperator& x) {
    return x.matrix().frobenius_norm() <= 1.0 + 1e-12;
}

ComplexMatrix werner_projector(int d, int a) {
    if (d < 2) throw DimensionError("werner_projector needs d >= 2");
    if (a != 0 && a != 1) throw DomainError("werner_projector block index must be 0 or 1");
    ComplexMatrix q(d * d);
    const double sign = (a == 0) ? 1.0 : -1.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            q(i * d + j, i * d + j) += 0.5;
            q(i * d + j, j * d + i) += 0.5 * sign;
        }
    return q;
}

DensityOperator werner_state(double delta, int d) {
    if (delta < 0 || delta > 1) throw DomainError("werner_state parameter outside [0,1]");
    const ComplexMatrix q0 = werner_projector(d, 0);
    const ComplexMatrix q1 = werner_projector(d, 1);
    const double r0 = d * (d + 1) / 2.0, r1 = d * (d - 1) / 2.0;
    ComplexMatrix m = q0 * cplx((1.0 - delta) / r0, 0) + q1 * cplx(delta / r1, 0);
    return DensityOperator(std::move(m), {d, d});
}

DensityOperator isotropic_state(double f, int d) {
    if (f < 0 || f > 1) throw DomainError("isotropic_state parameter outside [0,1]");
    const int n = d * d;
    ComplexMatrix phi(n);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) phi(i * d + i, j * d + j) = 1.0 / d;
    ComplexMatrix m = phi * cplx(f, 0);
    const double rest = (1.0 - f) / (n - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) += rest * ((i == j ? 1.0 : 0.0) - phi(i, j).real());
    return DensityOperator(std::move(m), {d, d});
}

std::vector<double> twirl_werner(const ComplexMatrix& h, int d, int n) {
    int expect = 1;
    for (int c = 0; c < n; ++c) expect *= d * d;
    if (h.dim() != expect) throw DimensionError("twirl_werner dimension mismatch");
    const ComplexMatrix q0 = werner_projector(d, 0);
    const ComplexMatrix q1 = werner_projector(d, 1);
    std::vector<double> p(static_cast<size_t>(1) << n);
    for (size_t a = 0; a < p.size(); ++a) {
        ComplexMatrix proj = ((a >> (n - 1)) & 1) ? q1 : q0;
        for (int c = 1; c < n; ++c) proj = kronecker(proj, ((a >> (n - 1 - c)) & 1) ? q1 : q0);
        p[a] = trace_product(h, proj).real();
    }
    return p;
}

SeparableEnsemble random_separable(int dim_left, int dim_right, int k_terms, uint64_t seed) {
    if (k_terms < 1) throw DomainError("random_separable needs k_terms >= 1");
    Rng rng(seed);
    SeparableEnsemble e;
    e.dim_left = dim_left;
    e.dim_right = dim_right;
    std::vector<double> w(k_terms);
    double s = 0;
    for (int i = 0; i < k_terms; ++i) {
        double u = rng.uniform();
        while (u <= 0) u = rng.uniform();
        w[i] = -std::log(u);  // Dirichlet(1,...,1)
        s += w[i];
    }
    for (int i = 0; i < k_terms; ++i) {
        SeparableEnsemble::Member m;
        m.weight = w[i] / s;
        m.vec.alpha = rng.unit_vector(dim_left);
        m.vec.beta = rng.unit_vector(dim_right);
        e.members.push_back(std::move(m));
    }
    return e;
}

}  // namespace enttest
