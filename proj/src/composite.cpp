#include "enttest/composite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "enttest/rng.hpp"
#include "enttest/types_classical.hpp"

namespace enttest {

namespace {

constexpr double kLog2e = 1.4426950408889634073599246810019;
double log2d(double x) { return std::log(x) * kLog2e; }

struct DualEval {
    double value;
    std::vector<double> supergradient;
    double neg_radius;  // spectral radius of the dual argument
};

DualEval eval_dual(double eps, const std::vector<ComplexMatrix>& constraints,
                   const ComplexMatrix& rho, const std::vector<double>& mu) {
    ComplexMatrix a = rho;
    for (size_t i = 0; i < constraints.size(); ++i) a -= ComplexMatrix(constraints[i]) * cplx(mu[i], 0);
    const auto es = hermitian_eig(a);
    const int n = a.dim();
    double neg = 0, radius = 0;
    ComplexMatrix p_minus(n);
    for (int k = 0; k < n; ++k) {
        radius = std::max(radius, std::abs(es.values[k]));
        if (es.values[k] >= 0) continue;
        neg += es.values[k];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                p_minus(i, j) += es.vectors(i, k) * std::conj(es.vectors(j, k));
    }
    DualEval out;
    out.neg_radius = radius;
    double mu_sum = 0;
    for (double m : mu) mu_sum += m;
    out.value = neg + (1.0 - eps) * mu_sum;
    out.supergradient.resize(constraints.size());
    for (size_t i = 0; i < constraints.size(); ++i)
        out.supergradient[i] = (1.0 - eps) - trace_product(constraints[i], p_minus).real();
    return out;
}

struct PrimalRecovery {
    ComplexMatrix m_eff;
    double type2;
    double min_constraint;  // min_i Tr[M sigma_i]
    double weight;
};

PrimalRecovery recover_primal(double eps, const std::vector<ComplexMatrix>& constraints,
                              const ComplexMatrix& rho, const std::vector<double>& mu,
                              double band) {
    ComplexMatrix a = rho;
    for (size_t i = 0; i < constraints.size(); ++i) a -= ComplexMatrix(constraints[i]) * cplx(mu[i], 0);
    const auto es = hermitian_eig(a);
    const int n = a.dim();
    ComplexMatrix p_minus(n), p_zero(n);
    for (int k = 0; k < n; ++k) {
        if (es.values[k] < -band) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    p_minus(i, j) += es.vectors(i, k) * std::conj(es.vectors(j, k));
        } else if (es.values[k] <= band) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    p_zero(i, j) += es.vectors(i, k) * std::conj(es.vectors(j, k));
        }
    }
    const double target = 1.0 - eps;
    // scalar fractional weight making the tightest constraint hit the target
    double w = 0.0;
    for (size_t i = 0; i < constraints.size(); ++i) {
        const double have = trace_product(p_minus, constraints[i]).real();
        const double zmass = trace_product(p_zero, constraints[i]).real();
        if (have >= target) continue;
        if (zmass > 1e-15) w = std::max(w, std::clamp((target - have) / zmass, 0.0, 1.0));
    }
    ComplexMatrix m_eff = p_minus + p_zero * cplx(w, 0);
    // blend toward the identity if any constraint is still short
    double c = 0.0;
    for (size_t i = 0; i < constraints.size(); ++i) {
        const double have = trace_product(m_eff, constraints[i]).real();
        if (have < target && have < 1.0 - 1e-15)
            c = std::max(c, (target - have) / (1.0 - have));
    }
    if (c > 0) {
        c = std::clamp(c, 0.0, 1.0);
        ComplexMatrix ident = ComplexMatrix::identity(n);
        m_eff = m_eff * cplx(1.0 - c, 0) + ident * cplx(c, 0);
    }
    PrimalRecovery out;
    out.type2 = std::max(0.0, trace_product(m_eff, rho).real());
    out.min_constraint = 1.0;
    for (const auto& s : constraints)
        out.min_constraint = std::min(out.min_constraint, trace_product(m_eff, s).real());
    out.m_eff = std::move(m_eff);
    out.weight = w;
    return out;
}

}  // namespace

InnerDualResult inner_dual_solve(double eps, const std::vector<ComplexMatrix>& constraints,
                                 const DensityOperator& rho_n, double tolerance) {
    if (eps <= 0.0 || eps >= 1.0)
        throw DomainError("inner_dual_solve requires eps in (0,1) for strong duality");
    if (constraints.empty()) throw DomainError("inner_dual_solve needs at least one constraint");
    const ComplexMatrix& rho = rho_n.matrix();
    const size_t k = constraints.size();

    std::vector<double> mu(k, 0.0), best_mu(k, 0.0);
    double best_val = -std::numeric_limits<double>::infinity();

    // projected supergradient ascent, step c/sqrt(iter)
    DualEval ev = eval_dual(eps, constraints, rho, mu);
    double snorm = 0;
    for (double s : ev.supergradient) snorm += s * s;
    snorm = std::sqrt(snorm);
    const double c0 = 0.5 / std::max(snorm, 1e-12);
    for (int it = 1; it <= 2000; ++it) {
        if (ev.value > best_val) {
            best_val = ev.value;
            best_mu = mu;
        }
        const double step = c0 / std::sqrt(static_cast<double>(it));
        for (size_t i = 0; i < k; ++i) mu[i] = std::max(0.0, mu[i] + step * ev.supergradient[i]);
        ev = eval_dual(eps, constraints, rho, mu);
    }
    if (ev.value > best_val) {
        best_val = ev.value;
        best_mu = mu;
    }

    // cyclic coordinate maximization: the dual is concave in each mu_i and
    // the partial derivative (1-eps) - Tr[sigma_i P_-] is non-increasing
    mu = best_mu;
    const auto coord_deriv = [&](size_t i, double x) {
        std::vector<double> probe = mu;
        probe[i] = x;
        const DualEval e = eval_dual(eps, constraints, rho, probe);
        return e.supergradient[i];
    };
    double gap = std::numeric_limits<double>::infinity();
    PrimalRecovery rec;
    const auto refresh_gap = [&]() {
        const DualEval e = eval_dual(eps, constraints, rho, mu);
        best_val = std::max(best_val, e.value);
        double best_gap = std::numeric_limits<double>::infinity();
        for (double band_rel : {1e-12, 1e-10, 1e-8, 1e-7, 1e-6, 1e-5}) {
            PrimalRecovery r =
                recover_primal(eps, constraints, rho, mu, band_rel * std::max(e.neg_radius, 1.0));
            const double g = r.type2 - best_val;
            if (g < best_gap) {
                best_gap = g;
                rec = std::move(r);
            }
        }
        gap = best_gap;
    };
    refresh_gap();
    for (int pass = 0; pass < 40 && gap > tolerance; ++pass) {
        for (size_t i = 0; i < k; ++i) {
            if (coord_deriv(i, 0.0) <= 0) {
                mu[i] = 0.0;
                continue;
            }
            double lo = 0.0, hi = std::max(1.0, 2.0 * mu[i]);
            int guard = 0;
            while (coord_deriv(i, hi) > 0) {
                lo = hi;
                hi *= 2.0;
                if (++guard > 100) break;
            }
            for (int b = 0; b < 80; ++b) {
                const double mid = 0.5 * (lo + hi);
                if (coord_deriv(i, mid) > 0)
                    lo = mid;
                else
                    hi = mid;
            }
            mu[i] = 0.5 * (lo + hi);
        }
        refresh_gap();
    }

    InnerDualResult out;
    out.multipliers.mu = mu;
    out.primal_type2 = rec.type2;
    out.dual_type2 = std::max(best_val, 0.0);
    out.gap = gap;
    out.converged = gap <= tolerance;
    out.test = TestEffect(rec.m_eff);
    if (rec.type2 <= 1e-13) {
        out.value = DivergenceValue::infinity("vanishing type-II error on the relaxation");
    } else {
        std::ostringstream cert;
        cert << "dual=" << out.dual_type2 << " gap=" << gap;
        out.value = DivergenceValue::finite(-log2d(rec.type2), cert.str());
    }
    return out;
}

CompositeResult dh_composite(double eps, const DensityOperator& rho_n,
                             const CompositeConfig& cfg) {
    if (rho_n.factor_dims().size() != 2)
        throw DimensionError("dh_composite expects a state with two (regrouped) factors");
    const int dl = rho_n.factor_dims()[0];
    const int dr = rho_n.factor_dims()[1];
    const int n = rho_n.dim();

    CompositeResult out;

    // constraint storage: ensembles plus cached density matrices
    std::vector<SeparableEnsemble> ens_list;
    std::vector<ComplexMatrix> mats;
    std::vector<int> inactive_streak;

    {
        SeparableEnsemble mm;
        mm.dim_left = dl;
        mm.dim_right = dr;
        for (int i = 0; i < dl; ++i)
            for (int j = 0; j < dr; ++j) {
                SeparableEnsemble::Member mem;
                mem.weight = 1.0 / n;
                mem.vec.alpha.assign(dl, cplx(0, 0));
                mem.vec.beta.assign(dr, cplx(0, 0));
                mem.vec.alpha[i] = 1.0;
                mem.vec.beta[j] = 1.0;
                mm.members.push_back(std::move(mem));
            }
        mats.push_back(mm.density_matrix());
        ens_list.push_back(std::move(mm));
        inactive_streak.push_back(0);
    }

    InnerDualResult inner;
    int outer = 0;
    for (; outer < cfg.max_outer; ++outer) {
        inner = inner_dual_solve(eps, mats, rho_n, cfg.inner_tol);

        // drop rule for persistently inactive constraints
        for (size_t i = 0; i < mats.size(); ++i) {
            if (inner.multipliers.mu[i] < 1e-12)
                ++inactive_streak[i];
            else
                inactive_streak[i] = 0;
        }
        if (mats.size() > 1) {
            for (size_t i = mats.size(); i-- > 0 && mats.size() > 1;) {
                if (inactive_streak[i] >= cfg.drop_after_inactive) {
                    mats.erase(mats.begin() + i);
                    ens_list.erase(ens_list.begin() + i);
                    inactive_streak.erase(inactive_streak.begin() + i);
                }
            }
        }

        // seesaw attack: most violated separable state for the current test
        SeesawConfig attack = cfg.lmo;
        attack.seed = cfg.lmo.seed ^ (0x9e3779b97f4a7c15ULL * (outer + 1));
        const LmoResult worst = lmo_product(inner.test.matrix(), dl, dr, Sense::Min, attack);
        if (worst.value < 1.0 - eps - cfg.viol_tol &&
            static_cast<int>(mats.size()) < cfg.constraint_cap) {
            SeparableEnsemble e;
            e.dim_left = dl;
            e.dim_right = dr;
            e.members.push_back({1.0, worst.vec});
            mats.push_back(e.density_matrix());
            ens_list.push_back(std::move(e));
            inactive_streak.push_back(0);
            continue;
        }
        out.converged = true;
        break;
    }
    out.outer_iterations = outer + 1;
    out.inner_gap = inner.gap;
    out.value = inner.value;
    out.test = inner.test;
    out.constraints = ens_list;

    if (inner.value.infinite) {
        out.upper_bits = std::numeric_limits<double>::infinity();
        out.lower_bits = std::numeric_limits<double>::infinity();
        return out;
    }
    out.upper_bits =
        inner.dual_type2 > 0 ? -log2d(inner.dual_type2) : std::numeric_limits<double>::infinity();

    // lower bound: harden the recovered test against fresh attacks, then the
    // blended test is (heuristically) feasible for the full problem
    SeesawConfig fresh = cfg.lmo;
    fresh.seed = cfg.lmo.seed ^ 0xa77ac4d1b02ull;
    fresh.restarts = std::max(cfg.lmo.restarts, 96);
    const LmoResult attack = lmo_product(inner.test.matrix(), dl, dr, Sense::Min, fresh);
    ComplexMatrix hardened = inner.test.matrix();
    if (attack.value < 1.0 - eps) {
        const double c = std::clamp((1.0 - eps - attack.value) / (1.0 - attack.value), 0.0, 1.0);
        hardened = hardened * cplx(1.0 - c, 0) + ComplexMatrix::identity(n) * cplx(c, 0);
    }
    const double hard_type2 = std::max(trace_product(hardened, rho_n.matrix()).real(), 0.0);
    out.lower_bits = hard_type2 > 0 ? -log2d(hard_type2) : std::numeric_limits<double>::infinity();
    return out;
}

ExponentReport sanov_series(const DensityOperator& rho, double eps, int n_max,
                            const CompositeConfig& ccfg, const FrankWolfeConfig& fcfg) {
    if (rho.factor_dims().size() != 2)
        throw DimensionError("sanov_series expects a two-factor state");
    const int da = rho.factor_dims()[0];
    const int db = rho.factor_dims()[1];
    const int cap = (da == 2 && db == 2) ? 3 : 2;
    if (n_max < 1 || n_max > cap)
        throw DomainError("sanov_series n_max out of range for this dimension");

    ExponentReport rep;
    rep.eps = eps;
    for (int n = 1; n <= n_max; ++n) {
        DensityOperator rn = tensor_power(rho, n);
        DensityOperator grouped = regroup_copies(rn, da, db, n);
        int dl = 1, drr = 1;
        for (int c = 0; c < n; ++c) {
            dl *= da;
            drr *= db;
        }
        DensityOperator flat(grouped.matrix(), std::vector<int>{dl, drr});
        const CompositeResult comp = dh_composite(eps, flat, ccfg);
        rep.n_values.push_back(n);
        const double v = comp.value.infinite ? std::numeric_limits<double>::infinity()
                                             : comp.value.bits;
        rep.per_copy_bits.push_back(v / n);
        rep.per_copy_lower_bits.push_back(comp.lower_bits / n);
        rep.per_copy_upper_bits.push_back(comp.upper_bits / n);
    }
    rep.single_letter = reverse_ree(rho, fcfg).value;
    return rep;
}

namespace {

void push(AxiomsReport& rep, int axiom, const std::string& name, bool pass,
          const std::string& detail) {
    rep.checks.push_back({axiom, name, pass ? "pass" : "fail", detail});
    if (!pass) rep.all_finite_checks_pass = false;
}

AxiomsReport audit_separable_like(FreeSetKind kind, uint64_t seed) {
    AxiomsReport rep;
    rep.kind = kind;
    const bool sep = kind == FreeSetKind::Separable;
    rep.checks.push_back({1, "convex and closed", "by-construction",
                          sep ? "convex hulls of product states" : "spectral condition, closed"});

    // members: random separable ensembles (2x2), or random PPT two-qubit states
    const int trials = 6;
    bool traces_ok = true, tensors_ok = true, perms_ok = true;
    for (int t = 0; t < trials; ++t) {
        // a free state on AA':BB' built as a tensor of two free A:B states
        DensityOperator s1, s2;
        if (sep) {
            s1 = random_separable(2, 2, 4, seed + 2 * t).density_operator();
            s2 = random_separable(2, 2, 4, seed + 2 * t + 1).density_operator();
        } else {
            // rejection-sample PPT two-qubit states
            Rng rng(seed + 100 + t);
            auto draw = [&]() {
                for (;;) {
                    DensityOperator cand(rng.density_matrix(4), {2, 2});
                    if (ppt_check(cand).is_ppt) return cand;
                }
            };
            s1 = draw();
            s2 = draw();
        }
        // tensor product: factors (A,B,A',B') -> regroup to (AA' : BB')
        DensityOperator prod = tensor(s1, s2);
        ComplexMatrix g = permute_factors(prod.matrix(), prod.factor_dims(), {0, 2, 1, 3});
        DensityOperator joint(g, {2, 2, 2, 2});  // A A' B B'
        const Bipartition cut_aabb = Bipartition::first_vs_rest(4, 2);
        tensors_ok = tensors_ok && ppt_check(joint, cut_aabb).is_ppt;

        // partial trace: drop the primed copy, must stay free on A:B
        DensityOperator reduced = partial_trace(joint, {1, 3});
        traces_ok = traces_ok && ppt_check(reduced).is_ppt;

        // permutation: swap the two copies
        ComplexMatrix swapped = permute_factors(joint.matrix(), joint.factor_dims(), {1, 0, 3, 2});
        DensityOperator perm(swapped, {2, 2, 2, 2});
        perms_ok = perms_ok && ppt_check(perm, cut_aabb).is_ppt;
    }
    push(rep, 3, "closed under partial traces", traces_ok, "reduced states stay free (PPT check)");
    push(rep, 4, "closed under tensor products", tensors_ok,
         "products of sampled members stay free");
    push(rep, 5, "closed under permutations", perms_ok, "copy swap keeps members free");

    const DensityOperator mm(ComplexMatrix::identity(4) * cplx(0.25, 0), {2, 2});
    const auto es = hermitian_eig(mm.matrix());
    push(rep, 2, "contains a full-rank state", es.values.front() > 0,
         "maximally mixed state, min eigenvalue 0.25");

    rep.checks.push_back({6, "regularised relative entropy of resource is faithful",
                          sep ? "asserted" : "not-asserted",
                          sep ? "known faithfulness for the separable set; not numerically testable"
                              : "no faithfulness claim is made for the PPT relaxation"});
    return rep;
}

bool weights_equal(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    return a == b;
}

// partial trace of the last position in sequence space
std::vector<Rational> trace_last(const std::vector<Rational>& w) {
    std::vector<Rational> out(w.size() / 2, Rational(0));
    for (size_t x = 0; x < w.size(); ++x) out[x >> 1] += w[x];
    return out;
}

AxiomsReport audit_counterexample(uint64_t seed) {
    (void)seed;
    AxiomsReport rep;
    rep.kind = FreeSetKind::Counterexample;
    rep.checks.push_back(
        {1, "convex and closed", "by-construction", "finite convex hull of generators"});

    bool traces_ok = true, tensors_ok = true, perms_ok = true;
    for (int n = 2; n <= 5; ++n) {
        const auto gens = counterexample_generators(n);
        const auto prev = counterexample_generators(n - 1);
        for (const auto& g : gens) {
            const auto reduced = trace_last(g.seq_weights);
            bool found = false;
            for (const auto& h : prev)
                if (weights_equal(reduced, h.seq_weights)) {
                    found = true;
                    break;
                }
            traces_ok = traces_ok && found;
        }
    }
    push(rep, 3, "closed under partial traces", traces_ok,
         "tr_last maps every generator to a generator (n <= 5, exact)");

    for (int n1 = 1; n1 <= 2; ++n1)
        for (int n2 = 1; n2 <= 2; ++n2) {
            const auto a = counterexample_generators(n1);
            const auto b = counterexample_generators(n2);
            const auto joint = counterexample_generators(n1 + n2);
            for (const auto& ga : a)
                for (const auto& gb : b) {
                    std::vector<Rational> prod(ga.seq_weights.size() * gb.seq_weights.size());
                    for (size_t x = 0; x < ga.seq_weights.size(); ++x)
                        for (size_t y = 0; y < gb.seq_weights.size(); ++y)
                            prod[(x << n2) | y] = ga.seq_weights[x] * gb.seq_weights[y];
                    bool found = false;
                    for (const auto& h : joint)
                        if (weights_equal(prod, h.seq_weights)) {
                            found = true;
                            break;
                        }
                    tensors_ok = tensors_ok && found;
                }
        }
    push(rep, 4, "closed under tensor products", tensors_ok,
         "generator x generator is a generator (exact)");

    {
        const int n = 4;
        const auto gens = counterexample_generators(n);
        const std::vector<int> perm{2, 0, 3, 1};  // position p of output reads position perm[p]
        for (const auto& g : gens) {
            std::vector<Rational> permuted(g.seq_weights.size(), Rational(0));
            for (size_t x = 0; x < g.seq_weights.size(); ++x) {
                size_t y = 0;
                for (int p = 0; p < n; ++p) {
                    const size_t bit = (x >> (n - 1 - perm[p])) & 1;
                    y |= bit << (n - 1 - p);
                }
                permuted[y] = g.seq_weights[x];
            }
            bool found = false;
            for (const auto& h : gens)
                if (weights_equal(permuted, h.seq_weights)) {
                    found = true;
                    break;
                }
            perms_ok = perms_ok && found;
        }
    }
    push(rep, 5, "closed under permutations", perms_ok,
         "permuted generators are generators (n = 4, exact)");

    {
        const auto gens = counterexample_generators(3);
        bool full_rank = false;
        for (const auto& g : gens) {
            bool all_pos = true;
            for (const auto& w : g.seq_weights) all_pos = all_pos && (w > 0);
            full_rank = full_rank || all_pos;
        }
        push(rep, 2, "contains a full-rank state", full_rank,
             "the all-singletons generator is the uniform distribution");
    }

    // Axiom 6 fails: D_max(e1^n || r_n) = 1 bit for every n, so the
    // regularised divergence vanishes although e1 is not free.
    bool violated_evidence = true;
    for (int n = 1; n <= 5; ++n) {
        const auto gens = counterexample_generators(n);
        const auto& rn = gens.front().partition.blocks.size() == 1
                             ? gens.front()
                             : *std::find_if(gens.begin(), gens.end(), [](const auto& g) {
                                   return g.partition.blocks.size() == 1;
                               });
        const Rational q1n = rn.seq_weights[rn.seq_weights.size() - 1];
        violated_evidence = violated_evidence && (q1n == Rational(1, 2));
    }
    rep.checks.push_back({6, "regularised relative entropy of resource is faithful",
                          violated_evidence ? "violated" : "fail",
                          "D_max(point mass on 1^n || r_n) = 1 bit for all n, so the per-copy "
                          "divergence tends to 0 while the point mass is outside the family"});
    return rep;
}

}  // namespace

AxiomsReport axioms_audit(FreeSetKind kind, uint64_t seed) {
    switch (kind) {
        case FreeSetKind::Separable:
        case FreeSetKind::Ppt:
            return audit_separable_like(kind, seed);
        case FreeSetKind::Counterexample:
            return audit_counterexample(seed);
    }
    throw DomainError("unknown free set kind");
}

}  // namespace enttest
