#include "enttest/distillation.hpp"

#include <cmath>
#include <sstream>

namespace enttest {

namespace {
constexpr double kLog2e = 1.4426950408889634073599246810019;
double log2d(double x) { return std::log(x) * kLog2e; }
}  // namespace

DensityOperator MeasurePrepareChannel::apply(const DensityOperator& rho_in) const {
    if (rho_in.dim() != effect.dim()) throw DimensionError("channel input dimension mismatch");
    const double p_bad = trace_product(effect.matrix(), rho_in.matrix()).real();
    const double p_good = 1.0 - p_bad;
    const DensityOperator phi = max_entangled(m_copies);
    const int dim = phi.dim();
    ComplexMatrix out = phi.matrix() * cplx(p_good, 0);
    const double garbage = p_bad / (dim - 1);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            out(i, j) += garbage * ((i == j ? 1.0 : 0.0) - phi.matrix()(i, j));
    return DensityOperator(std::move(out), phi.factor_dims());
}

ComplexMatrix MeasurePrepareChannel::adjoint_on_target() const {
    // Tr[Phi_m Lambda(X)] = Tr[(1-M) X] * 1 + Tr[M X] * 0
    ComplexMatrix one = ComplexMatrix::identity(effect.dim());
    return one - effect.matrix();
}

MeasurePrepareChannel channel_from_test(const TestEffect& m, int m_copies,
                                        std::vector<int> input_dims) {
    if (m_copies < 1) throw DimensionError("channel_from_test needs m >= 1");
    int prod = 1;
    for (int d : input_dims) prod *= d;
    if (prod != m.dim()) throw DimensionError("channel_from_test input_dims mismatch");
    MeasurePrepareChannel ch;
    ch.effect = m;
    ch.m_copies = m_copies;
    ch.input_dims = std::move(input_dims);
    return ch;
}

TestEffect test_from_channel(const MeasurePrepareChannel& ch) {
    ComplexMatrix adj = ch.adjoint_on_target();
    ComplexMatrix one = ComplexMatrix::identity(adj.dim());
    try {
        return TestEffect(one - adj);
    } catch (const DomainError& e) {
        throw DomainError(std::string("channel adjoint leaves [0,1]: ") + e.what());
    }
}

NonentanglingAudit nonentangling_audit(const MeasurePrepareChannel& ch, const SeesawConfig& cfg) {
    if (ch.input_dims.size() != 2)
        throw DimensionError("nonentangling_audit expects two regrouped input factors");
    const int dl = ch.input_dims[0], dr = ch.input_dims[1];
    const double threshold = std::exp2(-static_cast<double>(ch.m_copies));
    ComplexMatrix complement = ComplexMatrix::identity(ch.effect.dim()) - ch.effect.matrix();

    NonentanglingAudit out;
    // operator-norm bound certifies a pass without any heuristics
    const auto es = hermitian_eig(complement);
    const double opnorm = es.values.empty() ? 0.0 : es.values.back();
    const LmoResult worst = lmo_product(complement, dl, dr, Sense::Max, cfg);
    out.worst_sep_overlap = worst.value;
    if (worst.value > threshold + 1e-9) {
        out.verdict = "fail";
        out.violator = worst.vec;
        out.has_violator = true;
    } else if (opnorm <= threshold + 1e-9) {
        out.verdict = "certified";
    } else {
        out.verdict = "heuristic-pass";
    }
    return out;
}

DistillationReport distillation_exponent(const DensityOperator& rho, int m_copies, int n_max,
                                         const CompositeConfig& ccfg,
                                         const FrankWolfeConfig& fcfg) {
    if (rho.factor_dims().size() != 2)
        throw DimensionError("distillation_exponent expects a two-factor state");
    if (m_copies < 1 || m_copies > 2)
        throw DomainError("distillation_exponent supports m in {1,2}");
    const int da = rho.factor_dims()[0];
    const int db = rho.factor_dims()[1];
    const double eps = std::exp2(-static_cast<double>(m_copies));

    DistillationReport rep;
    rep.m_copies = m_copies;
    rep.eps = eps;
    for (int n = 1; n <= n_max; ++n) {
        DensityOperator rn = tensor_power(rho, n);
        DensityOperator grouped = regroup_copies(rn, da, db, n);
        int dl = 1, dr = 1;
        for (int c = 0; c < n; ++c) {
            dl *= da;
            dr *= db;
        }
        DensityOperator flat(grouped.matrix(), std::vector<int>{dl, dr});
        const CompositeResult comp = dh_composite(eps, flat, ccfg);

        MeasurePrepareChannel ch = channel_from_test(comp.test, m_copies, {dl, dr});
        const double type1 = trace_product(comp.test.matrix(), flat.matrix()).real();
        const double fid = 1.0 - type1;
        const NonentanglingAudit audit = nonentangling_audit(ch, ccfg.lmo);

        rep.n_values.push_back(n);
        rep.fidelity_vals.push_back(fid);
        rep.achieved_exponents.push_back(type1 > 0 ? -log2d(type1) / n
                                                   : std::numeric_limits<double>::infinity());
        rep.worst_overlaps.push_back(audit.worst_sep_overlap);
        rep.verdicts.push_back(audit.verdict);
    }
    rep.single_letter = reverse_ree(rho, fcfg).value;
    return rep;
}

}  // namespace enttest
