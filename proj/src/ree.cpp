#include "enttest/ree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace enttest {

namespace {

constexpr double kLog2e = 1.4426950408889634073599246810019;

double log2d(double x) { return std::log(x) * kLog2e; }

// log2 with a deep floor; keeps gradients finite on (numerically) rank
// deficient states and penalizes directions that leak out of supp(rho).
double floored_log2(double lam, double floor_val) { return log2d(std::max(lam, floor_val)); }

struct Objective {
    ComplexMatrix log_rho;  // log2 of rho with floored kernel
    double floor_rho;

    // returns f(sigma) in bits and the gradient log2(sigma) - log2(rho)
    double eval(const ComplexMatrix& sigma, ComplexMatrix* grad) const {
        const auto es = hermitian_eig(sigma);
        const int n = sigma.dim();
        double f = 0;
        for (double lam : es.values)
            if (lam > 0) f += lam * log2d(lam);
        f -= trace_product(sigma, log_rho).real();
        if (grad) {
            ComplexMatrix g(n);
            for (int k = 0; k < n; ++k) {
                const double lg = floored_log2(es.values[k], 1e-18);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        g(i, j) += es.vectors(i, k) * lg * std::conj(es.vectors(j, k));
            }
            *grad = g - log_rho;
        }
        return f;
    }

    double eval(const ComplexMatrix& sigma) const { return eval(sigma, nullptr); }
};

ComplexMatrix floored_log_matrix(const DensityOperator& rho, double rel_floor) {
    const auto sd = spectral_decompose(rho.op());
    const int n = rho.dim();
    double radius = 0;
    for (double v : sd.eigenvalues) radius = std::max(radius, std::abs(v));
    const double floor_val = std::max(radius * rel_floor, 1e-300);
    ComplexMatrix l(n);
    for (int k = 0; k < n; ++k) {
        const double lg = floored_log2(sd.eigenvalues[k], floor_val);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                l(i, j) += sd.eigenvectors(i, k) * lg * std::conj(sd.eigenvectors(j, k));
    }
    return l;
}

void split_cut(const DensityOperator& rho, int& dl, int& dr) {
    if (rho.factor_dims().size() != 2)
        throw DimensionError("reverse_ree expects a state with two (regrouped) factors");
    dl = rho.factor_dims()[0];
    dr = rho.factor_dims()[1];
}

}  // namespace

ReverseReeResult reverse_ree(const DensityOperator& rho, const FrankWolfeConfig& cfg) {
    int dl, dr;
    split_cut(rho, dl, dr);
    const int n = rho.dim();

    const auto sd = spectral_decompose(rho.op());
    double radius = 0;
    for (double v : sd.eigenvalues) radius = std::max(radius, std::abs(v));
    const bool full_rank = sd.eigenvalues.front() > kKernelTol * radius;

    FrankWolfeTrace trace;
    trace.final_ensemble.dim_left = dl;
    trace.final_ensemble.dim_right = dr;

    SeparableEnsemble ens;
    ens.dim_left = dl;
    ens.dim_right = dr;

    if (full_rank) {
        // start at the maximally mixed state (uniform product basis mixture)
        for (int i = 0; i < dl; ++i)
            for (int j = 0; j < dr; ++j) {
                SeparableEnsemble::Member m;
                m.weight = 1.0 / n;
                m.vec.alpha.assign(dl, cplx(0, 0));
                m.vec.beta.assign(dr, cplx(0, 0));
                m.vec.alpha[i] = 1.0;
                m.vec.beta[j] = 1.0;
                ens.members.push_back(std::move(m));
            }
    } else {
        // look for a product vector inside supp(rho)
        ComplexMatrix proj = support_projector(rho.op());
        SeesawConfig sup_cfg = cfg.lmo;
        sup_cfg.restarts = std::max(sup_cfg.restarts, 64);
        const LmoResult sup = lmo_product(proj, dl, dr, Sense::Max, sup_cfg);
        if (sup.value < 1.0 - 1e-9) {
            std::ostringstream cert;
            cert << "no separable state supported in supp(rho); best product support overlap "
                 << sup.value;
            return {DivergenceValue::infinity(cert.str()), trace};
        }
        SeparableEnsemble::Member m;
        m.weight = 1.0;
        m.vec = sup.vec;
        ens.members.push_back(std::move(m));
    }

    Objective obj;
    obj.floor_rho = 1e-28;
    obj.log_rho = floored_log_matrix(rho, obj.floor_rho);

    ComplexMatrix sigma = ens.density_matrix();
    ComplexMatrix grad(n);
    double f = obj.eval(sigma, &grad);
    double best_lower = -std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();

    std::vector<std::vector<cplx>> joints;
    joints.reserve(ens.members.size());
    for (const auto& m : ens.members) joints.push_back(m.vec.joint());

    // derivative of t -> f(sigma + t dir) along a fixed, traceless direction
    const auto directional = [&](const ComplexMatrix& dir, double c_dir) {
        return [&, c_dir](double t) {
            ComplexMatrix st = sigma;
            const cplx tt(t, 0);
            for (size_t i = 0; i < st.data().size(); ++i) st.data()[i] += tt * dir.data()[i];
            const auto es = hermitian_eig(st);
            double s = 0;
            std::vector<cplx> col(n);
            for (int k = 0; k < n; ++k) {
                for (int i = 0; i < n; ++i) col[i] = es.vectors(i, k);
                s += floored_log2(es.values[k], 1e-18) * vector_expectation(dir, col).real();
            }
            return s - c_dir;
        };
    };

    // corrective weight polish over the finite active set: multiplicative
    // updates move every weight at once (they balance weight over near-optimal
    // orbits quickly), pairwise exchanges clean up the end game
    std::vector<ComplexMatrix> projs;
    for (const auto& j : joints) projs.push_back(outer_projector(j));

    // revisited vertices are merged instead of appended, so the corrective
    // polish can move their full weight at once
    const auto add_vertex = [&](const ProductVector& vec, const std::vector<cplx>& joint,
                                double weight) {
        for (size_t k = 0; k < joints.size(); ++k) {
            cplx ov(0, 0);
            for (int i = 0; i < n; ++i) ov += std::conj(joints[k][i]) * joint[i];
            if (std::norm(ov) >= 1.0 - 1e-8) {
                ens.members[k].weight += weight;
                return;
            }
        }
        ens.members.push_back({weight, vec});
        joints.push_back(joint);
        projs.push_back(outer_projector(joint));
    };
    const auto rebuild_sigma = [&](const std::vector<double>& w) {
        ComplexMatrix s(n);
        for (size_t k = 0; k < projs.size(); ++k) {
            const cplx wk(w[k], 0);
            for (size_t i = 0; i < s.data().size(); ++i) s.data()[i] += wk * projs[k].data()[i];
        }
        return s;
    };
    const auto polish_weights = [&](int rounds, double stop_gap) {
        const size_t k_count = joints.size();
        std::vector<double> w(k_count), scores(k_count);
        for (size_t k = 0; k < k_count; ++k) w[k] = ens.members[k].weight;
        ComplexMatrix g(n);
        double fcur = obj.eval(sigma, &g);
        for (int p = 0; p < rounds; ++p) {
            double smin = std::numeric_limits<double>::infinity();
            double smax_active = -std::numeric_limits<double>::infinity();
            int fw = -1, aw = -1;
            for (size_t k = 0; k < k_count; ++k) {
                scores[k] = vector_expectation(g, joints[k]).real();
                if (scores[k] < smin) {
                    smin = scores[k];
                    fw = static_cast<int>(k);
                }
                if (w[k] > 1e-14 && scores[k] > smax_active) {
                    smax_active = scores[k];
                    aw = static_cast<int>(k);
                }
            }
            if (fw < 0 || aw < 0 || fw == aw || smax_active - smin <= stop_gap) break;

            // shift weight from the worst active vertex to the best one,
            // with an exact line search
            const ComplexMatrix dir = projs[fw] - projs[aw];
            const double c_dir = trace_product(dir, obj.log_rho).real();
            const auto dphi = directional(dir, c_dir);
            const double t_max = w[aw];
            double step;
            if (dphi(t_max) <= 0) {
                step = t_max;
            } else {
                double lo = 0, hi = t_max;
                for (int b = 0; b < 20; ++b) {
                    const double mid = 0.5 * (lo + hi);
                    if (dphi(mid) <= 0)
                        lo = mid;
                    else
                        hi = mid;
                }
                step = 0.5 * (lo + hi);
            }
            if (step <= 0) break;
            w[aw] -= step;
            w[fw] += step;
            sigma = rebuild_sigma(w);
            fcur = obj.eval(sigma, &g);
        }
        for (size_t k = 0; k < k_count; ++k) ens.members[k].weight = w[k];
    };

    for (int it = 0; it < cfg.max_iters; ++it) {
        const LmoResult lmo = lmo_product(grad, dl, dr, Sense::Min, cfg.lmo);
        const double grad_sigma = trace_product(grad, sigma).real();
        gap = grad_sigma - lmo.value;
        best_lower = std::max(best_lower, f - gap);
        if (gap <= cfg.gap_tol) {
            trace.converged = true;
            trace.iterates.push_back({f, f - gap, 0.0});
            break;
        }

        const std::vector<cplx> v = lmo.vec.joint();
        const ComplexMatrix pv = outer_projector(v);

        // plain conditional-gradient step with exact line search, weight
        // capped to keep sigma strictly full rank
        const double t_max = 1.0 - 1e-9;
        const ComplexMatrix dir = pv - sigma;
        const double c_dir = trace_product(dir, obj.log_rho).real();
        const auto dphi = directional(dir, c_dir);
        double step;
        if (dphi(t_max) <= 0) {
            step = t_max;
        } else {
            double lo = 0, hi = t_max;
            for (int b = 0; b < 40; ++b) {
                const double mid = 0.5 * (lo + hi);
                if (dphi(mid) <= 0)
                    lo = mid;
                else
                    hi = mid;
            }
            step = 0.5 * (lo + hi);
        }
        for (auto& m : ens.members) m.weight *= (1.0 - step);
        sigma = sigma + ComplexMatrix(dir) * cplx(step, 0);
        add_vertex(lmo.vec, v, step);

        if (cfg.pairwise_steps) polish_weights(400, 0.02 * cfg.gap_tol);

        // rebuild sigma from the weights to stop drift, prune dead vertices
        for (size_t k = joints.size(); k-- > 0;) {
            if (ens.members[k].weight <= 1e-12) {
                ens.members.erase(ens.members.begin() + k);
                joints.erase(joints.begin() + k);
                projs.erase(projs.begin() + k);
            }
        }
        sigma = ens.density_matrix();

        f = obj.eval(sigma, &grad);
        trace.iterates.push_back({f, f - gap, step});
    }

    trace.final_gap_bits = gap;
    trace.best_lower_bound_bits = best_lower;
    trace.final_ensemble = std::move(ens);

    std::ostringstream cert;
    cert << (trace.converged ? "certified gap " : "heuristic-gap ") << gap << " bits after "
         << trace.iterates.size() << " iterations";
    ReverseReeResult out;
    out.value = DivergenceValue::finite(std::max(f, 0.0), cert.str());
    out.trace = std::move(trace);
    return out;
}

DivergenceValue werner_reverse_ree(double delta, int d) {
    if (d < 2) throw DomainError("werner_reverse_ree needs d >= 2");
    if (delta < 0 || delta > 1) throw DomainError("werner_reverse_ree parameter outside [0,1]");
    if (delta <= 0.5) return DivergenceValue::finite(0.0);
    if (delta >= 1.0)
        return DivergenceValue::infinity("antisymmetric subspace holds no product vector");
    return DivergenceValue::finite(binary_kl(0.5, delta));
}

DivergenceValue isotropic_reverse_ree(double f, int d) {
    if (d < 2) throw DomainError("isotropic_reverse_ree needs d >= 2");
    if (f < 0 || f > 1) throw DomainError("isotropic_reverse_ree parameter outside [0,1]");
    const double thr = 1.0 / d;
    if (f <= thr) return DivergenceValue::finite(0.0);
    if (f >= 1.0) return DivergenceValue::infinity("pure maximally entangled target");
    return DivergenceValue::finite(binary_kl(thr, f));
}

AdditivityReport additivity_check(const DensityOperator& rho, const DensityOperator& omega,
                                  const FrankWolfeConfig& cfg) {
    int dla, dra, dlb, drb;
    split_cut(rho, dla, dra);
    split_cut(omega, dlb, drb);
    DensityOperator joint = tensor(rho, omega);
    // (A, B, A', B') -> (A, A', B, B')
    ComplexMatrix m = permute_factors(joint.matrix(), joint.factor_dims(), {0, 2, 1, 3});
    DensityOperator regrouped(std::move(m), {dla * dlb, dra * drb});

    AdditivityReport rep;
    rep.joint = reverse_ree(regrouped, cfg).value;
    rep.left = reverse_ree(rho, cfg).value;
    rep.right = reverse_ree(omega, cfg).value;
    rep.gap_bits = (rep.joint.infinite || rep.left.infinite || rep.right.infinite)
                       ? std::numeric_limits<double>::quiet_NaN()
                       : rep.joint.bits - rep.left.bits - rep.right.bits;
    return rep;
}

double werner_antisym_two_copy_overlap(int d, const SeesawConfig& cfg) {
    const ComplexMatrix q1 = werner_projector(d, 1);
    ComplexMatrix qq = kronecker(q1, q1);  // factors (A, B, A', B')
    std::vector<int> dims{d, d, d, d};
    ComplexMatrix regrouped = permute_factors(qq, dims, {0, 2, 1, 3});
    return sep_max_overlap(regrouped, d * d, d * d, cfg);
}

DivergenceValue reverse_renyi_werner(double alpha, int d, int n, const SeesawConfig& cfg) {
    if (!(alpha > 0 && alpha < 1)) throw DomainError("reverse_renyi_werner needs alpha in (0,1)");
    if (d < 2) throw DomainError("reverse_renyi_werner needs d >= 2");
    if (n != 1 && n != 2) throw DomainError("reverse_renyi_werner supports n in {1,2}");
    const double ratio = alpha / (1.0 - alpha);
    if (n == 1) {
        // max P_1 over separable twirled states is the Werner threshold 1/2
        return DivergenceValue::finite(ratio * 1.0, "P1max=0.5");
    }
    SeesawConfig c = cfg;
    c.restarts = std::max(c.restarts, 256);
    const double p11 = werner_antisym_two_copy_overlap(d, c);
    std::ostringstream cert;
    cert << "P11max=" << p11;
    return DivergenceValue::finite(ratio * (-log2d(p11)), cert.str());
}

DivergenceValue forward_ree_debug(const DensityOperator& rho, const FrankWolfeConfig& cfg) {
    int dl, dr;
    split_cut(rho, dl, dr);
    const int n = rho.dim();

    // f(sigma) = Tr rho log2 rho - Tr rho log2 sigma; gradient via the
    // divided-difference representation of the derivative of log.
    const auto sd_rho = spectral_decompose(rho.op());
    double radius = 0;
    for (double v : sd_rho.eigenvalues) radius = std::max(radius, std::abs(v));
    double const_term = 0;
    for (double lam : sd_rho.eigenvalues)
        if (lam > kKernelTol * radius) const_term += lam * log2d(lam);

    SeparableEnsemble ens;
    ens.dim_left = dl;
    ens.dim_right = dr;
    for (int i = 0; i < dl; ++i)
        for (int j = 0; j < dr; ++j) {
            SeparableEnsemble::Member m;
            m.weight = 1.0 / n;
            m.vec.alpha.assign(dl, cplx(0, 0));
            m.vec.beta.assign(dr, cplx(0, 0));
            m.vec.alpha[i] = 1.0;
            m.vec.beta[j] = 1.0;
            ens.members.push_back(std::move(m));
        }
    ComplexMatrix sigma = ens.density_matrix();

    const auto eval = [&](const ComplexMatrix& s, ComplexMatrix* grad) {
        const auto es = hermitian_eig(s);
        double f = const_term;
        for (int k = 0; k < n; ++k) {
            std::vector<cplx> v(n);
            for (int i = 0; i < n; ++i) v[i] = es.vectors(i, k);
            const double overlap = vector_expectation(rho.matrix(), v).real();
            f -= overlap * floored_log2(es.values[k], 1e-18);
        }
        if (grad) {
            // M = V^dag rho V; grad = -V (M .* D) V^dag with the divided
            // differences D of log2 at the eigenvalues of sigma
            ComplexMatrix mv(n);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) {
                    cplx s2(0, 0);
                    for (int j = 0; j < n; ++j) s2 += rho.matrix()(i, j) * es.vectors(j, k);
                    mv(i, k) = s2;
                }
            ComplexMatrix m(n);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) {
                    cplx s2(0, 0);
                    for (int j = 0; j < n; ++j) s2 += std::conj(es.vectors(j, i)) * mv(j, k);
                    m(i, k) = s2;
                }
            const auto dd = [&](double a, double b) {
                const double fa = std::max(a, 1e-18), fb = std::max(b, 1e-18);
                if (std::abs(fa - fb) < 1e-14 * std::max(fa, fb))
                    return kLog2e / (0.5 * (fa + fb));
                return (log2d(fa) - log2d(fb)) / (fa - fb);
            };
            ComplexMatrix core(n);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k)
                    core(i, k) = -m(i, k) * dd(es.values[i], es.values[k]);
            ComplexMatrix tmp(n);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) {
                    cplx s2(0, 0);
                    for (int j = 0; j < n; ++j) s2 += es.vectors(i, j) * core(j, k);
                    tmp(i, k) = s2;
                }
            ComplexMatrix g(n);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) {
                    cplx s2(0, 0);
                    for (int j = 0; j < n; ++j) s2 += tmp(i, j) * std::conj(es.vectors(k, j));
                    g(i, k) = s2;
                }
            *grad = g;
        }
        return f;
    };

    ComplexMatrix grad(n);
    double f = eval(sigma, &grad);
    for (int it = 0; it < cfg.max_iters; ++it) {
        const LmoResult lmo = lmo_product(grad, dl, dr, Sense::Min, cfg.lmo);
        const double gap = trace_product(grad, sigma).real() - lmo.value;
        if (gap <= cfg.gap_tol) break;
        const ComplexMatrix pv = outer_projector(lmo.vec.joint());
        const ComplexMatrix dir = pv - sigma;
        const auto dphi = [&](double t) {
            ComplexMatrix st = sigma + ComplexMatrix(dir) * cplx(t, 0);
            ComplexMatrix g(n);
            eval(st, &g);
            return trace_product(g, dir).real();
        };
        double lo = 0, hi = 1.0 - 1e-9;
        if (dphi(hi) <= 0) {
            lo = hi;
        } else {
            for (int b = 0; b < 40; ++b) {
                const double mid = 0.5 * (lo + hi);
                if (dphi(mid) <= 0)
                    lo = mid;
                else
                    hi = mid;
            }
        }
        sigma = sigma + ComplexMatrix(dir) * cplx(lo, 0);
        f = eval(sigma, &grad);
    }
    return DivergenceValue::finite(std::max(f, 0.0), "debug utility, heuristic accuracy");
}

}  // namespace enttest
