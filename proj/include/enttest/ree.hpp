#pragma once

#include "enttest/divergences.hpp"
#include "enttest/separability.hpp"

namespace enttest {

struct FrankWolfeConfig {
    int max_iters = 4000;
    double gap_tol = 1e-5;  // certified gap target, bits
    SeesawConfig lmo;
    bool pairwise_steps = true;  // move weight from the worst active vertex
};

struct FrankWolfeIterate {
    double objective_bits;
    double lower_bound_bits;
    double step;
};

struct FrankWolfeTrace {
    std::vector<FrankWolfeIterate> iterates;
    SeparableEnsemble final_ensemble;
    bool converged = false;
    double final_gap_bits = 0.0;
    double best_lower_bound_bits = 0.0;
};

struct ReverseReeResult {
    DivergenceValue value;
    FrankWolfeTrace trace;
};

// Reverse relative entropy of entanglement min_{sigma in S} D(sigma||rho) by
// Frank-Wolfe over separable ensembles with the seesaw linear oracle. rho is
// taken across the cut (dim_left : dim_right) of its two regrouped factors.
// Returns an exactly flagged infinity when no separable state is supported
// inside supp(rho) (pure entangled states in particular).
ReverseReeResult reverse_ree(const DensityOperator& rho, const FrankWolfeConfig& cfg = {});

// Closed forms on the twirl-symmetric families (bits).
DivergenceValue werner_reverse_ree(double delta, int d);
DivergenceValue isotropic_reverse_ree(double f, int d);

struct AdditivityReport {
    DivergenceValue joint;   // D(S || rho x omega) on the regrouped cut
    DivergenceValue left;    // D(S || rho)
    DivergenceValue right;   // D(S || omega)
    double gap_bits;         // joint - left - right (signed, finite case)
};

AdditivityReport additivity_check(const DensityOperator& rho, const DensityOperator& omega,
                                  const FrankWolfeConfig& cfg = {});

// Reverse Renyi-alpha relative entropy of entanglement on the antisymmetric
// Werner state, n = 1 or 2 copies, via the commuting twirl reduction:
// value = (alpha/(1-alpha)) * (-log2 max P_{1^n}).
DivergenceValue reverse_renyi_werner(double alpha, int d, int n, const SeesawConfig& cfg = {});

// max_{sep} Tr[sigma (Q1 x Q1)] across the AA':BB' cut (the n=2 block weight).
double werner_antisym_two_copy_overlap(int d, const SeesawConfig& cfg);

// Standard relative entropy of entanglement min_{sigma} D(rho||sigma).
// Debugging utility only: heuristic accuracy, no certified gap.
DivergenceValue forward_ree_debug(const DensityOperator& rho, const FrankWolfeConfig& cfg = {});

}  // namespace enttest
