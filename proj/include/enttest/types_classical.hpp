#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <string>
#include <vector>

#include "enttest/divergences.hpp"

namespace enttest {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Empirical symbol counts of a length-n sequence.
struct TypeVector {
    std::vector<int> counts;

    int n() const;
    int alphabet_size() const { return static_cast<int>(counts.size()); }
    std::vector<double> probabilities() const;

    bool operator==(const TypeVector& o) const { return counts == o.counts; }
};

// All compositions of n into alphabet parts, in a fixed deterministic order;
// memoized. Count is C(n + |X| - 1, |X| - 1).
const std::vector<TypeVector>& enumerate_types(int n, int alphabet);
int type_index(const TypeVector& t);  // position within enumerate_types

BigInt binomial(int n, int k);
BigInt type_class_size(const TypeVector& t);  // multinomial coefficient, exact

// Permutation-symmetric distribution stored as weights per type class,
// aligned with enumerate_types(n, alphabet).
struct SymmetricTypeDistribution {
    int n = 0;
    int alphabet = 0;
    std::vector<double> weights;

    void validate() const;  // weights >= -1e-12, sum to 1 within 1e-12
    double ball_mass(const std::vector<double>& s, double delta) const;
};

// Type-class weights of p^{tensor n}.
SymmetricTypeDistribution iid_type_distribution(const std::vector<double>& p, int n);

std::string symmetric_distribution_to_json(const SymmetricTypeDistribution& q);
SymmetricTypeDistribution symmetric_distribution_from_json(const std::string& text,
                                                           const std::string& origin = "<string>");

// --- Sanov's estimate ---

struct SanovCheck {
    double lhs;            // exact p^{tensor n} weight of {x^n : t_{x^n} in A}
    double rhs;            // (n+1)^{|X|-1} 2^{-n D(A||p)}
    bool holds;            // lhs <= rhs (within 1e-12 slack)
    double exponent_bits;  // the D(A||p) used
};

SanovCheck sanov_bound_check(const std::vector<double>& p,
                             const std::function<bool(const std::vector<double>&)>& predicate,
                             int n, double exponent_bits);

// min D(q||p) over the half-space {q : <a,q> >= c}, by bisection on the
// exponential tilting parameter; bits.
double halfspace_min_kl(const std::vector<double>& p, const std::vector<double>& a, double c);

// --- blurring ---

// Column-stochastic kernel K[t'][t]: add m extra symbols of each kind to the
// counts of t, keep a uniformly random size-n sub-multiset (multivariate
// hypergeometric).
const std::vector<std::vector<double>>& blurring_kernel(int n, int m, int alphabet);

SymmetricTypeDistribution apply_blurring(const SymmetricTypeDistribution& q, int m);

double bosonic_entropy_g(double x);  // (x+1)log2(x+1) - x log2 x

struct BlurringLemmaCheck {
    double lhs_bits;  // D_max^eta(s^n || B_{n,m}(q)) in type space
    bool lhs_infinite;
    double rhs_bits;  // -log2 q(ball) + n g((2delta+1/n)|X|)
    bool rhs_infinite;
    bool holds;
    double premise_mass;  // s^n mass of the delta-ball (must be >= 1 - eta)
    int m;               // ceil(2 delta n)
};

BlurringLemmaCheck blurring_lemma_check(const std::vector<double>& s,
                                        const SymmetricTypeDistribution& q, double delta,
                                        double eta);

// --- the counter-example family F_n ---

struct SetPartition {
    std::vector<std::vector<int>> blocks;  // 0-based positions, disjoint cover of {0..n-1}
};

std::vector<SetPartition> set_partitions(int n);  // guarded to n <= 12

struct CounterexampleGenerator {
    SetPartition partition;
    // exact weights over {0,1}^n; position p maps to bit (n-1-p) of the index
    std::vector<Rational> seq_weights;
    // symmetrized projection: total weight per number of ones (0..n)
    std::vector<Rational> ones_weights;
};

std::vector<CounterexampleGenerator> counterexample_generators(int n);
SymmetricTypeDistribution generator_type_distribution(const CounterexampleGenerator& g);

// Exact randomized Neyman-Pearson: min sum_x a(x) rho(x) subject to
// sum_x a(x) sigma(x) >= 1 - eps, 0 <= a <= 1. All arithmetic rational.
Rational rational_np_type2(const Rational& eps, const std::vector<Rational>& sigma,
                           const std::vector<Rational>& rho);

struct CounterexampleDh {
    DivergenceValue closed_form;  // -log2(1-2eps), infinite for eps >= 1/2
    DivergenceValue brute_force;  // exact NP minimized over the generators
    bool exact_match;             // rational equality of the two optima
};

CounterexampleDh counterexample_dh(const Rational& eps, int n);

struct CounterexampleStein {
    DivergenceValue formula;      // -log2(1-eps) - log2 q(1^n)
    DivergenceValue brute_force;  // exact NP on the 2^n points
};

CounterexampleStein counterexample_stein(const Rational& eps, const CounterexampleGenerator& q,
                                         int n);

}  // namespace enttest
