#pragma once

#include <optional>
#include <string>
#include <vector>

#include "enttest/operators.hpp"

namespace enttest {

// Extended-real divergence value in bits. Infinite values are flagged, never
// encoded as large floats.
struct DivergenceValue {
    double bits = 0.0;
    bool infinite = false;
    std::string certificate;

    static DivergenceValue finite(double b, std::string cert = {}) {
        if (b < 0 && b >= -1e-9) b = 0.0;
        return {b, false, std::move(cert)};
    }
    static DivergenceValue infinity(std::string cert = {}) { return {0.0, true, std::move(cert)}; }
    bool is_zero(double tol = 1e-9) const { return !infinite && std::abs(bits) <= tol; }
};

// Hermitian M with 0 <= M <= 1 (checked at construction, tolerance 1e-10).
class TestEffect {
  public:
    TestEffect() = default;
    explicit TestEffect(ComplexMatrix m);
    int dim() const { return op_.dim(); }
    const ComplexMatrix& matrix() const { return op_.matrix(); }
    const HermitianOperator& op() const { return op_; }

  private:
    HermitianOperator op_;
};

// Optimal two-outcome test in the threshold family
// M = P_+(sigma - t rho) + w P_0(sigma - t rho).
struct NeymanPearsonTest {
    TestEffect effect;
    double threshold = 0.0;
    double fractional_weight = 0.0;
    double primal_type2 = 0.0;  // Tr[M rho]
    double dual_type2 = 0.0;    // certified lower bound on min Tr[M rho]
    double gap = 0.0;           // primal - dual
};

// --- quantum divergences ---

// D(rho||sigma) = Tr rho (log2 rho - log2 sigma); infinite when supp(rho) is
// not contained in supp(sigma).
DivergenceValue umegaki(const DensityOperator& rho, const DensityOperator& sigma);

// Petz-Renyi divergence, alpha strictly inside (0,1):
// D_alpha(rho||sigma) = (1/(alpha-1)) log2 Tr[rho^alpha sigma^(1-alpha)].
DivergenceValue petz_renyi(double alpha, const DensityOperator& rho,
                           const DensityOperator& sigma);

// D_max(sigma||rho): log2 of the largest eigenvalue of the compression of
// rho^{-1/2} sigma rho^{-1/2} onto supp(rho); infinite when supp(sigma) is not
// contained in supp(rho).
DivergenceValue dmax(const DensityOperator& sigma, const DensityOperator& rho);

// Hypothesis-testing relative entropy
// D_H^eps(sigma||rho) = -log2 min{Tr M rho : 0<=M<=1, Tr M sigma >= 1-eps},
// solved exactly by bisection over the Neyman-Pearson threshold family. The
// returned test carries a dual certificate with gap <= 1e-8.
std::pair<DivergenceValue, NeymanPearsonTest> dh_two_state(double eps, const DensityOperator& sigma,
                                                           const DensityOperator& rho);

struct PinchedBound {
    double lower_bits;    // D(rho_k || sigma^k) - log2 |spec(sigma^k)|
    double upper_bits;    // D(rho_k || sigma^k)
    double pinched_bits;  // D(pinch(rho_k) || sigma^k), lies in [lower, upper]
    int distinct_eigenvalues;
};

// Bounds on the measured relative entropy via pinching in the eigenbasis of
// sigma^{tensor k}.
PinchedBound pinched_relent_bound(const DensityOperator& rho_k, const DensityOperator& sigma,
                                  int k);

// --- classical helpers (probability vectors, bits) ---

double binary_kl(double a, double b);                                        // d(a||b)
double kl_divergence(const std::vector<double>& p, const std::vector<double>& q);
DivergenceValue classical_dmax(const std::vector<double>& p, const std::vector<double>& q);

// Smooth max-relative entropy of normalized vectors:
// min log2 mu over states p~ with p~ <= mu q and (1/2)||p~ - p||_1 <= eps.
// Bisection on mu over h(mu) = sum_x (p(x) - mu q(x))_+ ; matches the LP.
DivergenceValue dmax_smooth_classical(double eps, const std::vector<double>& p,
                                      const std::vector<double>& q);

// Classical D_H^eps(sigma||rho) by the exact randomized Neyman-Pearson test.
DivergenceValue classical_dh(double eps, const std::vector<double>& sigma,
                             const std::vector<double>& rho);

}  // namespace enttest
