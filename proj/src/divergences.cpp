#include "enttest/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace enttest {

namespace {

constexpr double kLog2e = 1.4426950408889634073599246810019;  // 1/ln 2

double log2d(double x) { return std::log(x) * kLog2e; }

double spectral_radius(const std::vector<double>& eigs) {
    double r = 0;
    for (double v : eigs) r = std::max(r, std::abs(v));
    return r;
}

// mass of rho on the kernel of the decomposed operator
double kernel_mass(const SpectralDecomposition& sd, const ComplexMatrix& rho) {
    const int n = sd.eigenvectors.dim();
    const double radius = spectral_radius(sd.eigenvalues);
    double mass = 0;
    for (int k = 0; k < n; ++k) {
        if (std::abs(sd.eigenvalues[k]) > kKernelTol * radius) continue;
        std::vector<cplx> v(n);
        for (int i = 0; i < n; ++i) v[i] = sd.eigenvectors(i, k);
        mass += std::max(0.0, vector_expectation(rho, v).real());
    }
    return mass;
}

// positive part trace of a Hermitian matrix
double positive_part_trace(const ComplexMatrix& m) {
    const auto es = hermitian_eig(m);
    double s = 0;
    for (double v : es.values)
        if (v > 0) s += v;
    return s;
}

constexpr double kSupportMassTol = 1e-9;

}  // namespace

TestEffect::TestEffect(ComplexMatrix m) : op_(std::move(m)) {
    const auto es = hermitian_eig(op_.matrix());
    if (!es.values.empty() && (es.values.front() < -1e-10 || es.values.back() > 1 + 1e-10))
        throw DomainError("test effect eigenvalues outside [0,1]: [" +
                          std::to_string(es.values.front()) + ", " +
                          std::to_string(es.values.back()) + "]");
}

DivergenceValue umegaki(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) throw DimensionError("umegaki dimension mismatch");
    const auto sd_sigma = spectral_decompose(sigma.op());
    if (kernel_mass(sd_sigma, rho.matrix()) > kSupportMassTol)
        return DivergenceValue::infinity("supp(rho) not contained in supp(sigma)");

    const auto sd_rho = spectral_decompose(rho.op());
    const double rad_rho = spectral_radius(sd_rho.eigenvalues);
    const int n = rho.dim();
    double t1 = 0;  // Tr rho log2 rho
    for (double lam : sd_rho.eigenvalues)
        if (lam > kKernelTol * rad_rho) t1 += lam * log2d(lam);
    const double rad_sigma = spectral_radius(sd_sigma.eigenvalues);
    double t2 = 0;  // Tr rho log2 sigma
    for (int k = 0; k < n; ++k) {
        const double mu = sd_sigma.eigenvalues[k];
        if (mu <= kKernelTol * rad_sigma) continue;
        std::vector<cplx> v(n);
        for (int i = 0; i < n; ++i) v[i] = sd_sigma.eigenvectors(i, k);
        t2 += vector_expectation(rho.matrix(), v).real() * log2d(mu);
    }
    return DivergenceValue::finite(t1 - t2);
}

DivergenceValue petz_renyi(double alpha, const DensityOperator& rho,
                           const DensityOperator& sigma) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("petz_renyi requires alpha strictly inside (0,1)");
    if (rho.dim() != sigma.dim()) throw DimensionError("petz_renyi dimension mismatch");
    const auto ra = matrix_function(
        rho.op(), [alpha](double x) { return std::pow(std::max(x, 0.0), alpha); }, kKernelTol);
    const auto sb = matrix_function(
        sigma.op(), [alpha](double x) { return std::pow(std::max(x, 0.0), 1.0 - alpha); },
        kKernelTol);
    const double q = trace_product(ra.matrix(), sb.matrix()).real();
    if (q <= 0.0) return DivergenceValue::infinity("orthogonal supports");
    return DivergenceValue::finite(log2d(q) / (alpha - 1.0));
}

DivergenceValue dmax(const DensityOperator& sigma, const DensityOperator& rho) {
    if (rho.dim() != sigma.dim()) throw DimensionError("dmax dimension mismatch");
    const auto sd_rho = spectral_decompose(rho.op());
    if (kernel_mass(sd_rho, sigma.matrix()) > kSupportMassTol)
        return DivergenceValue::infinity("supp(sigma) not contained in supp(rho)");
    const auto inv_sqrt = matrix_function(
        rho.op(), [](double x) { return 1.0 / std::sqrt(x); }, kKernelTol, 0.0);
    ComplexMatrix x = inv_sqrt.matrix() * sigma.matrix() * inv_sqrt.matrix();
    const auto es = hermitian_eig(x);
    const double lam = es.values.empty() ? 0.0 : es.values.back();
    if (lam <= 0.0) return DivergenceValue::infinity("empty support");
    return DivergenceValue::finite(log2d(lam), "mu=" + std::to_string(lam));
}

std::pair<DivergenceValue, NeymanPearsonTest> dh_two_state(double eps, const DensityOperator& sigma,
                                                           const DensityOperator& rho) {
    if (eps < 0.0) throw DomainError("dh_two_state requires eps >= 0");
    if (eps >= 1.0) throw DomainError("dh_two_state requires eps < 1");
    if (rho.dim() != sigma.dim()) throw DimensionError("dh_two_state dimension mismatch");
    const int n = rho.dim();
    const double target = 1.0 - eps;

    // Exactly infinite iff the projector onto ker(rho) already passes the
    // constraint: then Tr M rho = 0 with a feasible M.
    const auto sd_rho = spectral_decompose(rho.op());
    const double rad_rho = spectral_radius(sd_rho.eigenvalues);
    ComplexMatrix ker_proj(n);
    for (int k = 0; k < n; ++k) {
        if (std::abs(sd_rho.eigenvalues[k]) > kKernelTol * rad_rho) continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                ker_proj(i, j) += sd_rho.eigenvectors(i, k) * std::conj(sd_rho.eigenvectors(j, k));
    }
    const double ker_sigma_mass = trace_product(ker_proj, sigma.matrix()).real();
    if (ker_sigma_mass >= target - 1e-12) {
        NeymanPearsonTest t;
        t.effect = TestEffect(ker_proj);
        t.threshold = std::numeric_limits<double>::infinity();
        t.fractional_weight = 0.0;
        return {DivergenceValue::infinity("perfect test: sigma supported on ker(rho)"), t};
    }

    const auto sd_sigma = spectral_decompose(sigma.op());
    const double rad_sigma = spectral_radius(sd_sigma.eigenvalues);

    // sigma-mass of the strictly-positive eigenspace of (sigma - t rho)
    const auto plus_mass = [&](double t) {
        ComplexMatrix a = sigma.matrix() - ComplexMatrix(rho.matrix()) * cplx(t, 0);
        const auto es = hermitian_eig(a);
        const double band = 1e-13 * (rad_sigma + t * rad_rho);
        double mass = 0;
        for (int k = 0; k < n; ++k) {
            if (es.values[k] <= band) continue;
            std::vector<cplx> v(n);
            for (int i = 0; i < n; ++i) v[i] = es.vectors(i, k);
            mass += vector_expectation(sigma.matrix(), v).real();
        }
        return mass;
    };

    double t_lo = 0.0, t_hi = 1.0;
    int guard = 0;
    while (plus_mass(t_hi) >= target) {
        t_lo = t_hi;
        t_hi *= 2.0;
        if (++guard > 200)
            throw ConvergenceError("dh_two_state: threshold search did not bracket", t_hi);
    }
    for (int it = 0; it < 200 && (t_hi - t_lo) > 1e-12 * std::max(1.0, t_hi); ++it) {
        const double mid = 0.5 * (t_lo + t_hi);
        if (plus_mass(mid) >= target)
            t_lo = mid;
        else
            t_hi = mid;
    }
    const double t_star = t_hi;

    // primal recovery at t_star with a zero band wide enough to absorb the
    // crossing eigenvalue
    ComplexMatrix a = sigma.matrix() - ComplexMatrix(rho.matrix()) * cplx(t_star, 0);
    const auto es = hermitian_eig(a);
    const double band =
        std::max(1e-13 * (rad_sigma + t_star * rad_rho), 2.0 * (t_hi - t_lo) * rad_rho);
    ComplexMatrix m_eff(n);
    std::vector<int> zero_idx;
    for (int k = 0; k < n; ++k) {
        if (es.values[k] > band) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    m_eff(i, j) += es.vectors(i, k) * std::conj(es.vectors(j, k));
        } else if (es.values[k] > -band) {
            zero_idx.push_back(k);
        }
    }
    const double a_mass = trace_product(m_eff, sigma.matrix()).real();
    double w = 0.0;
    if (!zero_idx.empty() && a_mass < target) {
        const int z = static_cast<int>(zero_idx.size());
        // compressions of rho and sigma onto the zero eigenspace
        ComplexMatrix rz(z), sz(z);
        std::vector<std::vector<cplx>> basis(z, std::vector<cplx>(n));
        for (int c = 0; c < z; ++c)
            for (int i = 0; i < n; ++i) basis[c][i] = es.vectors(i, zero_idx[c]);
        for (int r = 0; r < z; ++r)
            for (int c = 0; c < z; ++c) {
                cplx sr(0, 0), ss(0, 0);
                for (int i = 0; i < n; ++i) {
                    cplx rowr(0, 0), rows(0, 0);
                    for (int j = 0; j < n; ++j) {
                        rowr += rho.matrix()(i, j) * basis[c][j];
                        rows += sigma.matrix()(i, j) * basis[c][j];
                    }
                    sr += std::conj(basis[r][i]) * rowr;
                    ss += std::conj(basis[r][i]) * rows;
                }
                rz(r, c) = sr;
                sz(r, c) = ss;
            }
        const double need = target - a_mass;
        // weight split proportionally to the rho-overlap on the zero space,
        // falling back to a uniform fraction when that is not representable
        const double rz_sz = trace_product(rz, sz).real();
        const auto rz_eig = hermitian_eig(rz);
        const double rz_max = rz_eig.values.empty() ? 0.0 : rz_eig.values.back();
        bool applied = false;
        if (rz_sz > 1e-300 && rz_max > 0) {
            const double c = need / rz_sz;
            if (c * rz_max <= 1.0 + 1e-12) {
                for (int r = 0; r < z; ++r)
                    for (int c2 = 0; c2 < z; ++c2) {
                        const cplx wrc = c * rz(r, c2);
                        for (int i = 0; i < n; ++i)
                            for (int j = 0; j < n; ++j)
                                m_eff(i, j) += basis[r][i] * wrc * std::conj(basis[c2][j]);
                    }
                w = std::min(1.0, c * rz_max);
                applied = true;
            }
        }
        if (!applied) {
            const double sz_tr = sz.trace().real();
            w = sz_tr > 1e-300 ? std::clamp(need / sz_tr, 0.0, 1.0) : 0.0;
            for (int c = 0; c < z; ++c)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        m_eff(i, j) += w * basis[c][i] * std::conj(basis[c][j]);
        }
    }

    double primal = trace_product(m_eff, rho.matrix()).real();
    primal = std::max(primal, 0.0);

    // dual certificate at mu = 1/t_star
    const double mu = 1.0 / t_star;
    ComplexMatrix dual_arg = ComplexMatrix(sigma.matrix()) * cplx(mu, 0) - rho.matrix();
    const double dual = mu * target - positive_part_trace(dual_arg);

    NeymanPearsonTest test;
    test.effect = TestEffect(m_eff);
    test.threshold = t_star;
    test.fractional_weight = w;
    test.primal_type2 = primal;
    test.dual_type2 = dual;
    test.gap = primal - dual;

    if (primal <= 0.0)
        return {DivergenceValue::infinity("vanishing type-II error"), test};
    std::ostringstream cert;
    cert << "t=" << t_star << " w=" << w << " gap=" << test.gap;
    return {DivergenceValue::finite(-log2d(primal), cert.str()), test};
}

PinchedBound pinched_relent_bound(const DensityOperator& rho_k, const DensityOperator& sigma,
                                  int k) {
    if (k < 1) throw DimensionError("pinched_relent_bound requires k >= 1");
    DensityOperator sigma_k = (k == 1) ? sigma : tensor_power(sigma, k);
    if (sigma_k.dim() != rho_k.dim())
        throw DimensionError("rho_k does not live on k copies of sigma's system");

    const auto sd = spectral_decompose(sigma_k.op());
    const int n = sigma_k.dim();
    const double radius = spectral_radius(sd.eigenvalues);

    // cluster (numerically) equal eigenvalues of sigma^k
    std::vector<int> cluster(n, -1);
    int n_clusters = 0;
    for (int i = 0; i < n; ++i) {
        if (cluster[i] >= 0) continue;
        cluster[i] = n_clusters;
        for (int j = i + 1; j < n; ++j)
            if (cluster[j] < 0 &&
                std::abs(sd.eigenvalues[j] - sd.eigenvalues[i]) <= 1e-9 * std::max(radius, 1e-300))
                cluster[j] = n_clusters;
        ++n_clusters;
    }

    // rho in the eigenbasis of sigma^k, then dephased across clusters
    ComplexMatrix r_basis(n);
    {
        ComplexMatrix tmp(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cplx s(0, 0);
                for (int l = 0; l < n; ++l) s += rho_k.matrix()(i, l) * sd.eigenvectors(l, j);
                tmp(i, j) = s;
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cplx s(0, 0);
                for (int l = 0; l < n; ++l) s += std::conj(sd.eigenvectors(l, i)) * tmp(l, j);
                r_basis(i, j) = s;
            }
    }
    ComplexMatrix pinched = r_basis;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (cluster[i] != cluster[j]) pinched(i, j) = 0.0;

    ComplexMatrix sigma_diag(n);
    for (int i = 0; i < n; ++i) sigma_diag(i, i) = sd.eigenvalues[i];

    std::vector<int> flat{n};
    const DensityOperator rho_in_basis(HermitianOperator(r_basis), flat);
    const DensityOperator pinched_state(HermitianOperator(pinched), flat);
    const DensityOperator sigma_in_basis(HermitianOperator(sigma_diag), flat);

    const auto d_full = umegaki(rho_in_basis, sigma_in_basis);
    const auto d_pinch = umegaki(pinched_state, sigma_in_basis);
    if (d_full.infinite || d_pinch.infinite)
        throw DomainError("pinched_relent_bound: support of rho_k escapes supp(sigma^k)");

    PinchedBound out;
    out.upper_bits = d_full.bits;
    out.lower_bits = d_full.bits - log2d(static_cast<double>(n_clusters));
    out.pinched_bits = d_pinch.bits;
    out.distinct_eigenvalues = n_clusters;
    if (out.pinched_bits > out.upper_bits + 1e-7 || out.pinched_bits < out.lower_bits - 1e-7)
        throw Error("pinching bound violated (numerical inconsistency)");
    return out;
}

// --- classical helpers ---

double binary_kl(double a, double b) {
    const auto term = [](double x, double y) {
        if (x <= 0.0) return 0.0;
        if (y <= 0.0) return std::numeric_limits<double>::infinity();
        return x * log2d(x / y);
    };
    return term(a, b) + term(1.0 - a, 1.0 - b);
}

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw DimensionError("kl_divergence length mismatch");
    double s = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
        s += p[i] * log2d(p[i] / q[i]);
    }
    return s;
}

DivergenceValue classical_dmax(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw DimensionError("classical_dmax length mismatch");
    double mu = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) return DivergenceValue::infinity("supp(p) escapes supp(q)");
        mu = std::max(mu, p[i] / q[i]);
    }
    if (mu <= 0.0) return DivergenceValue::infinity("empty p");
    return DivergenceValue::finite(log2d(mu), "mu=" + std::to_string(mu));
}

DivergenceValue dmax_smooth_classical(double eps, const std::vector<double>& p,
                                      const std::vector<double>& q) {
    if (eps < 0.0 || eps >= 1.0) throw DomainError("dmax_smooth_classical requires eps in [0,1)");
    if (p.size() != q.size()) throw DimensionError("dmax_smooth_classical length mismatch");
    double sp = 0, sq = 0;
    for (double x : p) sp += x;
    for (double x : q) sq += x;
    if (std::abs(sp - 1.0) > 1e-10 || std::abs(sq - 1.0) > 1e-10)
        throw DomainError("dmax_smooth_classical inputs must be normalized");

    const auto h = [&](double mu) {
        double s = 0;
        for (size_t i = 0; i < p.size(); ++i) s += std::max(0.0, p[i] - mu * q[i]);
        return s;
    };
    // irremovable mass where q vanishes
    double p0 = 0;
    for (size_t i = 0; i < p.size(); ++i)
        if (q[i] <= 0.0) p0 += p[i];
    if (p0 > eps + 1e-15)
        return DivergenceValue::infinity("mass on ker(q) exceeds the smoothing budget");

    if (h(1.0) <= eps) return DivergenceValue::finite(0.0, "mu=1");
    double lo = 1.0, hi = 2.0;
    int guard = 0;
    while (h(hi) > eps) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 400) throw ConvergenceError("dmax_smooth_classical bisection bracket", hi);
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (h(mid) <= eps)
            hi = mid;
        else
            lo = mid;
    }
    return DivergenceValue::finite(log2d(hi), "mu=" + std::to_string(hi));
}

DivergenceValue classical_dh(double eps, const std::vector<double>& sigma,
                             const std::vector<double>& rho) {
    if (eps < 0.0 || eps >= 1.0) throw DomainError("classical_dh requires eps in [0,1)");
    if (sigma.size() != rho.size()) throw DimensionError("classical_dh length mismatch");
    const size_t n = sigma.size();
    // Neyman-Pearson: take outcomes in decreasing order of sigma/rho, with
    // rho = 0 outcomes first; randomize on the last one.
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        const bool fa = rho[a] <= 0.0, fb = rho[b] <= 0.0;
        if (fa != fb) return fa;
        if (fa && fb) return false;
        return sigma[a] * rho[b] > sigma[b] * rho[a];
    });
    const double target = 1.0 - eps;
    double got_sigma = 0, got_rho = 0;
    for (size_t r = 0; r < n; ++r) {
        const size_t i = idx[r];
        if (got_sigma >= target) break;
        if (got_sigma + sigma[i] <= target || sigma[i] <= 0.0) {
            got_sigma += sigma[i];
            got_rho += rho[i];
        } else {
            const double frac = (target - got_sigma) / sigma[i];
            got_sigma = target;
            got_rho += frac * rho[i];
        }
    }
    if (got_sigma < target - 1e-12) throw DomainError("classical_dh: sigma mass below target");
    if (got_rho <= 0.0) return DivergenceValue::infinity("perfect classical test");
    return DivergenceValue::finite(-log2d(got_rho));
}

}  // namespace enttest
