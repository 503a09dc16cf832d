#pragma once

#include <cstdint>
#include <vector>

#include "enttest/operators.hpp"

namespace enttest {

// Unit product vector |alpha> x |beta> across a fixed left:right cut.
struct ProductVector {
    std::vector<cplx> alpha;
    std::vector<cplx> beta;

    void validate() const;
    std::vector<cplx> joint() const;  // alpha tensor beta
};

// Convex mixture of product pure states.
struct SeparableEnsemble {
    struct Member {
        double weight;
        ProductVector vec;
    };
    std::vector<Member> members;
    int dim_left = 0;
    int dim_right = 0;

    void validate() const;  // weights >= 0, sum 1 within 1e-10
    ComplexMatrix density_matrix() const;
    DensityOperator density_operator() const;  // factor_dims = (dim_left, dim_right)
};

struct SeesawConfig {
    int restarts = 64;
    int max_iters = 200;
    double improvement_tol = 1e-11;
    uint64_t seed = 0;
};

enum class Sense { Min, Max };

struct LmoResult {
    ProductVector vec;
    double value;  // <alpha beta| G |alpha beta> of the best point found
};

// Heuristic linear optimization over product states: alternating extremal
// eigenvector seesaw, best over seeded restarts (deterministic per seed,
// ties keep the lowest restart index). G is indexed (i_left * dim_right +
// i_right). The value is a certified bound in one direction only: any
// returned point is feasible, exactness is never assumed.
LmoResult lmo_product(const ComplexMatrix& g, int dim_left, int dim_right, Sense sense,
                      const SeesawConfig& cfg);

// Convenience wrapper: max_{sep} Tr[M sigma] for an effect-like operator.
double sep_max_overlap(const ComplexMatrix& m, int dim_left, int dim_right,
                       const SeesawConfig& cfg);

struct PptResult {
    bool is_ppt;
    double min_pt_eigenvalue;
};

// Partial-transpose test across the given cut. Exact separability criterion
// only for dim_left * dim_right <= 6; a relaxation elsewhere.
PptResult ppt_check(const DensityOperator& rho, const Bipartition& cut);
PptResult ppt_check(const DensityOperator& rho);  // first factor vs rest

// Frobenius-ball separability certificate: ||X||_2 <= 1 implies that
// (1 + X)/Tr(1 + X) is separable across every cut.
bool gurvits_barnum_certify(const HermitianOperator& x);

// Werner-twirl block weights: P_a = Tr[H (Q_{a_1} x ... x Q_{a_n})] with
// Q_0/Q_1 the symmetric/antisymmetric projectors on each d x d copy.
// H has factor_dims (d,d) repeated n times; result indexed by the bitstring
// a (a_1 most significant).
std::vector<double> twirl_werner(const ComplexMatrix& h, int d, int n);

// Symmetric/antisymmetric projector on C^d x C^d.
ComplexMatrix werner_projector(int d, int a);
// Werner state rho(delta) = (1-delta) rho_0 + delta rho_1 as a 2-factor state.
DensityOperator werner_state(double delta, int d);
// Isotropic state with fidelity f to the maximally entangled state.
DensityOperator isotropic_state(double f, int d);

// Seeded random separable ensemble (Haar-like product vectors, Dirichlet-like
// weights); deterministic per seed.
SeparableEnsemble random_separable(int dim_left, int dim_right, int k_terms, uint64_t seed);

}  // namespace enttest
