#include "enttest/types_classical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

#include "json.hpp"

namespace enttest {

namespace {

constexpr double kLog2e = 1.4426950408889634073599246810019;
double log2d(double x) { return std::log(x) * kLog2e; }

double to_double(const Rational& r) { return r.convert_to<double>(); }
double to_double(const BigInt& b) { return b.convert_to<double>(); }

}  // namespace

int TypeVector::n() const {
    int s = 0;
    for (int c : counts) s += c;
    return s;
}

std::vector<double> TypeVector::probabilities() const {
    const int total = n();
    std::vector<double> p(counts.size());
    for (size_t i = 0; i < counts.size(); ++i) p[i] = static_cast<double>(counts[i]) / total;
    return p;
}

namespace {

void enumerate_rec(int remaining, int slot, int alphabet, TypeVector& cur,
                   std::vector<TypeVector>& out) {
    if (slot == alphabet - 1) {
        cur.counts[slot] = remaining;
        out.push_back(cur);
        return;
    }
    for (int c = remaining; c >= 0; --c) {
        cur.counts[slot] = c;
        enumerate_rec(remaining - c, slot + 1, alphabet, cur, out);
    }
}

std::map<std::pair<int, int>, std::vector<TypeVector>> g_type_cache;

}  // namespace

const std::vector<TypeVector>& enumerate_types(int n, int alphabet) {
    if (n < 0 || alphabet < 1) throw DomainError("enumerate_types needs n >= 0, |X| >= 1");
    const auto key = std::make_pair(n, alphabet);
    auto it = g_type_cache.find(key);
    if (it != g_type_cache.end()) return it->second;
    std::vector<TypeVector> out;
    TypeVector cur;
    cur.counts.assign(alphabet, 0);
    enumerate_rec(n, 0, alphabet, cur, out);
    return g_type_cache.emplace(key, std::move(out)).first->second;
}

int type_index(const TypeVector& t) {
    const auto& all = enumerate_types(t.n(), t.alphabet_size());
    const auto it = std::find(all.begin(), all.end(), t);
    if (it == all.end()) throw DomainError("type not found in enumeration");
    return static_cast<int>(it - all.begin());
}

BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

BigInt type_class_size(const TypeVector& t) {
    BigInt r = 1;
    int used = 0;
    for (int c : t.counts) {
        used += c;
        r *= binomial(used, c);
    }
    return r;
}

void SymmetricTypeDistribution::validate() const {
    const auto& all = enumerate_types(n, alphabet);
    if (weights.size() != all.size())
        throw DimensionError("symmetric distribution weight count does not match the type list");
    double s = 0;
    for (double w : weights) {
        if (w < -1e-12) throw DomainError("symmetric distribution has negative weight");
        s += w;
    }
    if (std::abs(s - 1.0) > 1e-12)
        throw DomainError("symmetric distribution weights sum to " + std::to_string(s));
}

double SymmetricTypeDistribution::ball_mass(const std::vector<double>& s, double delta) const {
    const auto& all = enumerate_types(n, alphabet);
    double mass = 0;
    for (size_t i = 0; i < all.size(); ++i) {
        const auto p = all[i].probabilities();
        double dist = 0;
        for (size_t x = 0; x < p.size(); ++x) dist = std::max(dist, std::abs(p[x] - s[x]));
        if (dist <= delta + 1e-12) mass += weights[i];
    }
    return mass;
}

SymmetricTypeDistribution iid_type_distribution(const std::vector<double>& p, int n) {
    const int alphabet = static_cast<int>(p.size());
    const auto& all = enumerate_types(n, alphabet);
    SymmetricTypeDistribution q;
    q.n = n;
    q.alphabet = alphabet;
    q.weights.resize(all.size());
    for (size_t i = 0; i < all.size(); ++i) {
        const auto& t = all[i];
        bool zero = false;
        double lg = to_double(type_class_size(t));
        lg = log2d(lg);
        for (int x = 0; x < alphabet; ++x) {
            if (t.counts[x] == 0) continue;
            if (p[x] <= 0.0) {
                zero = true;
                break;
            }
            lg += t.counts[x] * log2d(p[x]);
        }
        q.weights[i] = zero ? 0.0 : std::exp2(lg);
    }
    return q;
}

std::string symmetric_distribution_to_json(const SymmetricTypeDistribution& q) {
    nlohmann::json j;
    j["alphabet_size"] = q.alphabet;
    j["n"] = q.n;
    nlohmann::json tw = nlohmann::json::array();
    const auto& all = enumerate_types(q.n, q.alphabet);
    for (size_t i = 0; i < all.size(); ++i) {
        if (q.weights[i] == 0.0) continue;
        tw.push_back({{"counts", all[i].counts}, {"w", q.weights[i]}});
    }
    j["type_weights"] = std::move(tw);
    return j.dump();
}

SymmetricTypeDistribution symmetric_distribution_from_json(const std::string& text,
                                                           const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FileFormatError(origin + ": JSON parse error at byte " + std::to_string(e.byte) +
                              ": " + e.what());
    }
    if (!j.is_object() || !j.contains("alphabet_size") || !j.contains("n") ||
        !j.contains("type_weights"))
        throw FileFormatError(origin + ": expected alphabet_size, n, type_weights");
    SymmetricTypeDistribution q;
    try {
        q.alphabet = j.at("alphabet_size").get<int>();
        q.n = j.at("n").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw FileFormatError(origin + ": bad header fields: " + e.what());
    }
    if (q.alphabet < 1 || q.n < 0) throw FileFormatError(origin + ": invalid n or alphabet_size");
    const auto& all = enumerate_types(q.n, q.alphabet);
    q.weights.assign(all.size(), 0.0);
    for (const auto& row : j.at("type_weights")) {
        if (!row.is_object() || !row.contains("counts") || !row.contains("w"))
            throw FileFormatError(origin + ": type_weights rows need counts and w");
        TypeVector t;
        try {
            t.counts = row.at("counts").get<std::vector<int>>();
        } catch (const nlohmann::json::exception& e) {
            throw FileFormatError(origin + ": bad counts: " + e.what());
        }
        if (t.alphabet_size() != q.alphabet || t.n() != q.n)
            throw FileFormatError(origin + ": counts row does not describe an n-type");
        q.weights[type_index(t)] = row.at("w").get<double>();
    }
    q.validate();
    return q;
}

SanovCheck sanov_bound_check(const std::vector<double>& p,
                             const std::function<bool(const std::vector<double>&)>& predicate,
                             int n, double exponent_bits) {
    const int alphabet = static_cast<int>(p.size());
    const auto iid = iid_type_distribution(p, n);
    const auto& all = enumerate_types(n, alphabet);
    double lhs = 0;
    for (size_t i = 0; i < all.size(); ++i)
        if (predicate(all[i].probabilities())) lhs += iid.weights[i];
    double rhs;
    if (std::isinf(exponent_bits))
        rhs = 0.0;
    else
        rhs = std::pow(n + 1.0, alphabet - 1) * std::exp2(-static_cast<double>(n) * exponent_bits);
    return {lhs, rhs, lhs <= rhs + 1e-12, exponent_bits};
}

double halfspace_min_kl(const std::vector<double>& p, const std::vector<double>& a, double c) {
    if (p.size() != a.size()) throw DimensionError("halfspace_min_kl length mismatch");
    const int k = static_cast<int>(p.size());
    double mean = 0, amax = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
        if (p[i] <= 0) continue;
        mean += p[i] * a[i];
        amax = std::max(amax, a[i]);
    }
    if (mean >= c) return 0.0;
    if (c > amax + 1e-13) return std::numeric_limits<double>::infinity();
    if (c >= amax - 1e-13) {
        double mass = 0;
        for (int i = 0; i < k; ++i)
            if (p[i] > 0 && a[i] >= amax - 1e-12) mass += p[i];
        return -log2d(mass);
    }
    // tilt q_lambda ~ p exp(lambda a); <a>_lambda is increasing in lambda
    const auto tilt_mean = [&](double lam) {
        double z = 0, num = 0;
        for (int i = 0; i < k; ++i) {
            if (p[i] <= 0) continue;
            const double w = p[i] * std::exp(lam * (a[i] - amax));
            z += w;
            num += w * a[i];
        }
        return num / z;
    };
    double lo = 0, hi = 1;
    int guard = 0;
    while (tilt_mean(hi) < c) {
        lo = hi;
        hi *= 2;
        if (++guard > 200) throw ConvergenceError("halfspace_min_kl tilt bracket", hi);
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (tilt_mean(mid) < c)
            lo = mid;
        else
            hi = mid;
    }
    const double lam = 0.5 * (lo + hi);
    double z = 0;
    std::vector<double> q(k, 0.0);
    for (int i = 0; i < k; ++i) {
        if (p[i] <= 0) continue;
        q[i] = p[i] * std::exp(lam * (a[i] - amax));
        z += q[i];
    }
    for (double& x : q) x /= z;
    return kl_divergence(q, p);
}

namespace {
std::map<std::tuple<int, int, int>, std::vector<std::vector<double>>> g_kernel_cache;
}

const std::vector<std::vector<double>>& blurring_kernel(int n, int m, int alphabet) {
    if (n < 1 || m < 0) throw DomainError("blurring_kernel needs n >= 1, m >= 0");
    const auto key = std::make_tuple(n, m, alphabet);
    auto it = g_kernel_cache.find(key);
    if (it != g_kernel_cache.end()) return it->second;

    const auto& all = enumerate_types(n, alphabet);
    const int t_count = static_cast<int>(all.size());
    const BigInt denom = binomial(n + m * alphabet, n);
    const double denom_d = to_double(denom);
    std::vector<std::vector<double>> kern(t_count, std::vector<double>(t_count, 0.0));
    for (int src = 0; src < t_count; ++src) {
        const auto& c = all[src].counts;
        for (int dst = 0; dst < t_count; ++dst) {
            const auto& kk = all[dst].counts;
            BigInt num = 1;
            bool zero = false;
            for (int x = 0; x < alphabet; ++x) {
                if (kk[x] > c[x] + m) {
                    zero = true;
                    break;
                }
                num *= binomial(c[x] + m, kk[x]);
            }
            if (!zero) kern[dst][src] = to_double(num) / denom_d;
        }
    }
    return g_kernel_cache.emplace(key, std::move(kern)).first->second;
}

SymmetricTypeDistribution apply_blurring(const SymmetricTypeDistribution& q, int m) {
    const auto& kern = blurring_kernel(q.n, m, q.alphabet);
    SymmetricTypeDistribution out;
    out.n = q.n;
    out.alphabet = q.alphabet;
    out.weights.assign(q.weights.size(), 0.0);
    for (size_t dst = 0; dst < out.weights.size(); ++dst) {
        double s = 0;
        for (size_t src = 0; src < q.weights.size(); ++src) s += kern[dst][src] * q.weights[src];
        out.weights[dst] = s;
    }
    return out;
}

double bosonic_entropy_g(double x) {
    if (x <= 0) return 0.0;
    return (x + 1) * log2d(x + 1) - x * log2d(x);
}

BlurringLemmaCheck blurring_lemma_check(const std::vector<double>& s,
                                        const SymmetricTypeDistribution& q, double delta,
                                        double eta) {
    if (static_cast<int>(s.size()) != q.alphabet)
        throw DimensionError("blurring_lemma_check alphabet mismatch");
    const int n = q.n;
    const int alphabet = q.alphabet;
    const int m = static_cast<int>(std::ceil(2.0 * delta * n));

    const auto p_iid = iid_type_distribution(s, n);
    BlurringLemmaCheck out{};
    out.m = m;
    out.premise_mass = p_iid.ball_mass(s, delta);
    if (out.premise_mass < 1.0 - eta - 1e-12)
        throw DomainError("blurring lemma premise fails: s^n has delta-ball mass " +
                          std::to_string(out.premise_mass) + " < 1 - eta");

    const auto blurred = apply_blurring(q, m);
    const auto lhs = dmax_smooth_classical(eta, p_iid.weights, blurred.weights);
    out.lhs_infinite = lhs.infinite;
    out.lhs_bits = lhs.bits;

    const double q_ball = q.ball_mass(s, delta);
    const double fudge = n * bosonic_entropy_g((2.0 * delta + 1.0 / n) * alphabet);
    if (q_ball <= 0.0) {
        out.rhs_infinite = true;
        out.rhs_bits = 0.0;
        out.holds = true;
        return out;
    }
    out.rhs_infinite = false;
    out.rhs_bits = -log2d(q_ball) + fudge;
    out.holds = lhs.infinite ? false : (out.lhs_bits <= out.rhs_bits + 1e-9);
    return out;
}

// --- counter-example family ---

std::vector<SetPartition> set_partitions(int n) {
    if (n < 1 || n > 12) throw DomainError("set_partitions guarded to 1 <= n <= 12");
    std::vector<SetPartition> out;
    std::vector<int> assign(n, 0);
    // restricted growth strings
    const std::function<void(int, int)> rec = [&](int pos, int max_used) {
        if (pos == n) {
            SetPartition p;
            p.blocks.assign(max_used + 1, {});
            for (int i = 0; i < n; ++i) p.blocks[assign[i]].push_back(i);
            out.push_back(std::move(p));
            return;
        }
        for (int b = 0; b <= max_used + 1 && b <= pos; ++b) {
            assign[pos] = b;
            rec(pos + 1, std::max(max_used, b));
        }
    };
    rec(0, -1);
    return out;
}

std::vector<CounterexampleGenerator> counterexample_generators(int n) {
    const auto partitions = set_partitions(n);
    std::vector<CounterexampleGenerator> out;
    out.reserve(partitions.size());
    const size_t size = static_cast<size_t>(1) << n;
    for (const auto& part : partitions) {
        CounterexampleGenerator g;
        g.partition = part;
        g.seq_weights.assign(size, Rational(0));
        g.ones_weights.assign(n + 1, Rational(0));
        const int k = static_cast<int>(part.blocks.size());
        Rational w = Rational(1);
        for (int b = 0; b < k; ++b) w /= 2;
        for (size_t x = 0; x < size; ++x) {
            bool ok = true;
            for (const auto& block : part.blocks) {
                const int first_bit = (x >> (n - 1 - block[0])) & 1;
                for (int pos : block)
                    if (static_cast<int>((x >> (n - 1 - pos)) & 1) != first_bit) {
                        ok = false;
                        break;
                    }
                if (!ok) break;
            }
            if (!ok) continue;
            g.seq_weights[x] = w;
            g.ones_weights[std::popcount(x)] += w;
        }
        out.push_back(std::move(g));
    }
    return out;
}

SymmetricTypeDistribution generator_type_distribution(const CounterexampleGenerator& g) {
    const int n = static_cast<int>(g.ones_weights.size()) - 1;
    SymmetricTypeDistribution q;
    q.n = n;
    q.alphabet = 2;
    const auto& all = enumerate_types(n, 2);
    q.weights.assign(all.size(), 0.0);
    for (size_t i = 0; i < all.size(); ++i) {
        const int ones = all[i].counts[1];
        q.weights[i] = to_double(g.ones_weights[ones]);
    }
    return q;
}

Rational rational_np_type2(const Rational& eps, const std::vector<Rational>& sigma,
                           const std::vector<Rational>& rho) {
    if (sigma.size() != rho.size()) throw DimensionError("rational_np_type2 length mismatch");
    if (eps < 0 || eps >= 1) throw DomainError("rational_np_type2 needs eps in [0,1)");
    const size_t n = sigma.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        const bool fa = rho[a] == 0, fb = rho[b] == 0;
        if (fa != fb) return fa;
        if (fa && fb) return false;
        return sigma[a] * rho[b] > sigma[b] * rho[a];
    });
    const Rational target = Rational(1) - eps;
    Rational got_sigma = 0, got_rho = 0;
    for (size_t r = 0; r < n && got_sigma < target; ++r) {
        const size_t i = idx[r];
        if (got_sigma + sigma[i] <= target || sigma[i] == 0) {
            got_sigma += sigma[i];
            got_rho += rho[i];
        } else {
            const Rational frac = (target - got_sigma) / sigma[i];
            got_sigma = target;
            got_rho += frac * rho[i];
        }
    }
    if (got_sigma < target) throw DomainError("rational_np_type2: sigma mass below target");
    return got_rho;
}

CounterexampleDh counterexample_dh(const Rational& eps, int n) {
    if (n < 1 || n > 12) throw DomainError("counterexample_dh guarded to 1 <= n <= 12");
    const auto gens = counterexample_generators(n);
    const size_t size = static_cast<size_t>(1) << n;
    std::vector<Rational> e1(size, Rational(0));
    e1[size - 1] = 1;  // the all-ones sequence

    // D_H is decreasing in the type-II error, so the family optimum is the
    // largest exact NP value across generators (the hull optimum sits at a
    // vertex because the objective depends on q only through q(1^n)).
    Rational best = 0;
    for (const auto& g : gens) {
        const Rational v = rational_np_type2(eps, g.seq_weights, e1);
        if (v > best) best = v;
    }

    const Rational closed_arg =
        (eps < Rational(1, 2)) ? Rational(1) - 2 * eps : Rational(0);

    CounterexampleDh out;
    out.exact_match = (best == closed_arg);
    if (closed_arg == 0)
        out.closed_form = DivergenceValue::infinity("eps >= 1/2");
    else
        out.closed_form = DivergenceValue::finite(-log2d(to_double(closed_arg)));
    if (best == 0)
        out.brute_force = DivergenceValue::infinity("eps >= 1/2");
    else
        out.brute_force = DivergenceValue::finite(-log2d(to_double(best)));
    return out;
}

CounterexampleStein counterexample_stein(const Rational& eps, const CounterexampleGenerator& q,
                                         int n) {
    const size_t size = static_cast<size_t>(1) << n;
    if (q.seq_weights.size() != size) throw DimensionError("generator size mismatch");
    std::vector<Rational> e1(size, Rational(0));
    e1[size - 1] = 1;

    CounterexampleStein out;
    const Rational q1n = q.seq_weights[size - 1];
    if (q1n == 0) {
        out.formula = DivergenceValue::infinity("q(1^n) = 0");
    } else {
        const double bits =
            -log2d(to_double(Rational(1) - eps)) - log2d(to_double(q1n));
        out.formula = DivergenceValue::finite(bits);
    }
    const Rational v = rational_np_type2(eps, e1, q.seq_weights);
    if (v == 0)
        out.brute_force = DivergenceValue::infinity("q(1^n) = 0");
    else
        out.brute_force = DivergenceValue::finite(-log2d(to_double(v)));
    return out;
}

}  // namespace enttest
