#pragma once

#include "enttest/composite.hpp"
#include "enttest/divergences.hpp"

namespace enttest {

// Measure-and-prepare channel built from a binary test: on outcome "not M"
// prepare Phi_m, on outcome "M" prepare the orthogonal garbage state
// (1 - Phi_m)/(2^{2m} - 1).
struct MeasurePrepareChannel {
    TestEffect effect;
    int m_copies = 1;
    std::vector<int> input_dims;  // two regrouped factors

    DensityOperator apply(const DensityOperator& rho_in) const;
    // adjoint action on the target projector: Lambda^dag(Phi_m) = 1 - M
    ComplexMatrix adjoint_on_target() const;
};

MeasurePrepareChannel channel_from_test(const TestEffect& m, int m_copies,
                                        std::vector<int> input_dims);

// Recover the test from the channel's adjoint: M = 1 - Lambda^dag(Phi_m).
// Throws when the adjoint output leaves [0,1].
TestEffect test_from_channel(const MeasurePrepareChannel& ch);

struct NonentanglingAudit {
    double worst_sep_overlap;  // max_sep Tr[(1-M) sigma] found
    std::string verdict;       // certified | heuristic-pass | fail
    ProductVector violator;    // populated on fail (a certificate of failure)
    bool has_violator = false;
};

// Worst-case product attack against the non-entangling threshold 2^{-m}.
NonentanglingAudit nonentangling_audit(const MeasurePrepareChannel& ch, const SeesawConfig& cfg);

struct DistillationReport {
    std::vector<int> n_values;
    std::vector<double> fidelity_vals;       // F(Lambda(rho^n), Phi_m)
    std::vector<double> achieved_exponents;  // -(1/n) log2 (type-I error)
    std::vector<double> worst_overlaps;
    std::vector<std::string> verdicts;
    DivergenceValue single_letter;  // reverse REE target
    int m_copies = 1;
    double eps = 0.0;  // 2^{-m}
};

// Lemma-style distillation experiment: per n, build the composite-optimal
// test at eps = 2^{-m}, convert it to a measure-and-prepare channel, audit
// non-entanglement, and record the achieved error exponent.
DistillationReport distillation_exponent(const DensityOperator& rho, int m_copies, int n_max,
                                         const CompositeConfig& ccfg = {},
                                         const FrankWolfeConfig& fcfg = {});

}  // namespace enttest
