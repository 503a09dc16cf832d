#include <cmath>

#include "doctest.h"
#include "enttest/divergences.hpp"
#include "enttest/rng.hpp"
#include "support/lp.hpp"

using namespace enttest;

namespace {

DensityOperator diag_state(const std::vector<double>& p) {
    const int k = static_cast<int>(p.size());
    ComplexMatrix m(k);
    for (int i = 0; i < k; ++i) m(i, i) = p[i];
    return DensityOperator(std::move(m), {k});
}

DensityOperator maximally_mixed(int n, std::vector<int> dims) {
    return DensityOperator(ComplexMatrix::identity(n) * cplx(1.0 / n, 0), std::move(dims));
}

DensityOperator random_state(Rng& rng, int n, std::vector<int> dims) {
    return DensityOperator(rng.density_matrix(n), std::move(dims));
}

}  // namespace

TEST_CASE("umegaki: self, maximally entangled vs mixed, classical embedding") {
    Rng rng(100);
    const auto rho = random_state(rng, 4, {2, 2});
    CHECK(umegaki(rho, rho).bits == doctest::Approx(0).epsilon(1e-10));

    const auto phi = max_entangled(1);
    const auto mm = maximally_mixed(4, {2, 2});
    CHECK(umegaki(phi, mm).bits == doctest::Approx(2).epsilon(1e-10));

    const auto p = diag_state({0.5, 0.5});
    const auto q = diag_state({0.75, 0.25});
    CHECK(umegaki(p, q).bits == doctest::Approx(1.0 - 0.5 * std::log2(3.0)).epsilon(1e-12));

    // support violation is an exact flag
    const auto pure0 = diag_state({1.0, 0.0});
    const auto pure1 = diag_state({0.0, 1.0});
    CHECK(umegaki(pure0, pure1).infinite);
    CHECK_THROWS_AS(umegaki(phi, diag_state({1.0})), DimensionError);
}

TEST_CASE("umegaki additivity on tensor products") {
    Rng rng(101);
    for (int t = 0; t < 5; ++t) {
        const auto a = random_state(rng, 2, {2});
        const auto b = random_state(rng, 2, {2});
        const auto c = random_state(rng, 3, {3});
        const auto d = random_state(rng, 3, {3});
        const double lhs = umegaki(tensor(a, c), tensor(b, d)).bits;
        const double rhs = umegaki(a, b).bits + umegaki(c, d).bits;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("petz_renyi: examples and limits") {
    Rng rng(102);
    const auto rho = random_state(rng, 4, {2, 2});
    CHECK(petz_renyi(0.5, rho, rho).bits == doctest::Approx(0).epsilon(1e-10));

    const auto p = diag_state({1.0, 0.0});
    const auto q = diag_state({0.5, 0.5});
    CHECK(petz_renyi(0.5, p, q).bits == doctest::Approx(1).epsilon(1e-12));

    CHECK_THROWS_AS(petz_renyi(1.0, rho, rho), DomainError);
    CHECK_THROWS_AS(petz_renyi(0.0, rho, rho), DomainError);

    // alpha -> 1 approaches the Umegaki divergence
    for (int t = 0; t < 5; ++t) {
        const auto a = random_state(rng, 2, {2});
        const auto b = random_state(rng, 2, {2});
        const double u = umegaki(a, b).bits;
        double prev_dist = std::abs(petz_renyi(0.9, a, b).bits - u);
        for (double alpha : {0.99, 0.999}) {
            const double dist = std::abs(petz_renyi(alpha, a, b).bits - u);
            CHECK(dist <= prev_dist + 1e-12);
            prev_dist = dist;
        }
        CHECK(prev_dist < 1e-2);
    }
}

TEST_CASE("petz_renyi monotone in alpha on seeded pairs") {
    Rng rng(103);
    for (int t = 0; t < 50; ++t) {
        const auto a = random_state(rng, 3, {3});
        const auto b = random_state(rng, 3, {3});
        double prev = -1;
        for (int g = 1; g <= 9; ++g) {
            const double v = petz_renyi(0.1 * g, a, b).bits;
            CHECK(v >= prev - 1e-8);
            prev = v;
        }
    }
}

TEST_CASE("petz_renyi additivity on products") {
    Rng rng(104);
    const auto a = random_state(rng, 2, {2});
    const auto b = random_state(rng, 2, {2});
    const auto c = random_state(rng, 2, {2});
    const auto d = random_state(rng, 2, {2});
    const double lhs = petz_renyi(0.3, tensor(a, c), tensor(b, d)).bits;
    CHECK(lhs == doctest::Approx(petz_renyi(0.3, a, b).bits + petz_renyi(0.3, c, d).bits)
                     .epsilon(1e-9));
}

TEST_CASE("dmax: examples and additivity") {
    Rng rng(105);
    const auto rho = random_state(rng, 4, {2, 2});
    CHECK(dmax(rho, rho).bits == doctest::Approx(0).epsilon(1e-9));

    const auto phi = max_entangled(1);
    const auto mm = maximally_mixed(4, {2, 2});
    CHECK(dmax(phi, mm).bits == doctest::Approx(2).epsilon(1e-10));
    CHECK(dmax(mm, phi).infinite);

    CHECK(dmax(diag_state({0.5, 0.5}), diag_state({0.75, 0.25})).bits ==
          doctest::Approx(1).epsilon(1e-12));

    const auto a = random_state(rng, 2, {2});
    const auto b = random_state(rng, 2, {2});
    const auto c = random_state(rng, 2, {2});
    const auto d = random_state(rng, 2, {2});
    CHECK(dmax(tensor(a, c), tensor(b, d)).bits ==
          doctest::Approx(dmax(a, b).bits + dmax(c, d).bits).epsilon(1e-9));
}

TEST_CASE("dmax_smooth_classical: closed cases and LP equivalence") {
    // eps = 0 reduces to dmax
    const std::vector<double> p{0.5, 0.5}, q{0.75, 0.25};
    CHECK(dmax_smooth_classical(0.0, p, q).bits ==
          doctest::Approx(classical_dmax(p, q).bits).epsilon(1e-10));

    // reachable reference: 1/2 ||p-q||_1 = 1/4 exactly
    CHECK(dmax_smooth_classical(0.25, p, q).bits == doctest::Approx(0).epsilon(1e-10));

    // LP is the oracle
    Rng rng(106);
    for (int t = 0; t < 40; ++t) {
        const int k = 2 + static_cast<int>(rng.uniform() * 4);
        const auto pv = rng.probability_vector(k);
        const auto qv = rng.probability_vector(k);
        const double eps = 0.3 * rng.uniform();
        const auto fast = dmax_smooth_classical(eps, pv, qv);
        const double mu = lptest::lp_smooth_dmax_mu(eps, pv, qv);
        REQUIRE(mu > 0);
        CHECK(fast.bits == doctest::Approx(std::log2(mu)).epsilon(1e-8));
    }
    // spec example p=(0.9,0.1), q=(1/2,1/2), eps=0.1 against the LP
    {
        const std::vector<double> pp{0.9, 0.1}, qq{0.5, 0.5};
        const double mu = lptest::lp_smooth_dmax_mu(0.1, pp, qq);
        CHECK(dmax_smooth_classical(0.1, pp, qq).bits ==
              doctest::Approx(std::log2(mu)).epsilon(1e-8));
    }

    // irremovable mass on ker(q)
    CHECK(dmax_smooth_classical(0.1, {0.5, 0.5}, {1.0, 0.0}).infinite);
}

TEST_CASE("dh_two_state: self test, perfect test, counterexample pair") {
    Rng rng(107);
    const auto rho = random_state(rng, 4, {2, 2});
    for (double eps : {0.0, 0.1, 0.3, 0.7}) {
        const auto [v, t] = dh_two_state(eps, rho, rho);
        CHECK(!v.infinite);
        CHECK(v.bits == doctest::Approx(-std::log2(1 - eps)).epsilon(1e-9));
        CHECK(t.gap <= 1e-8);
    }

    const auto p0 = diag_state({1.0, 0.0});
    const auto p1 = diag_state({0.0, 1.0});
    CHECK(dh_two_state(0.2, p0, p1).first.infinite);

    const auto r1 = diag_state({0.5, 0.5});
    const auto e1 = diag_state({0.0, 1.0});
    for (double eps : {0.0, 0.1, 0.25, 0.4}) {
        const auto [v, t] = dh_two_state(eps, r1, e1);
        CHECK(v.bits == doctest::Approx(-std::log2(1 - 2 * eps)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(dh_two_state(-0.1, rho, rho), DomainError);
}

TEST_CASE("dh_two_state matches the LP oracle on commuting pairs") {
    Rng rng(108);
    for (int t = 0; t < 25; ++t) {
        const int k = 2 + static_cast<int>(rng.uniform() * 4);
        const auto sv = rng.probability_vector(k);
        const auto rv = rng.probability_vector(k);
        const double eps = 0.05 + 0.85 * rng.uniform();
        const auto [v, test] = dh_two_state(eps, diag_state(sv), diag_state(rv));
        const double lp = lptest::lp_classical_dh_type2(eps, sv, rv);
        REQUIRE(!v.infinite);
        CHECK(std::exp2(-v.bits) == doctest::Approx(lp).epsilon(1e-8));
        CHECK(std::abs(test.gap) <= 1e-8);
        // classical exact Neyman-Pearson agrees too
        CHECK(classical_dh(eps, sv, rv).bits == doctest::Approx(v.bits).epsilon(1e-8));
    }
}

TEST_CASE("dh_two_state dual certificate on non-commuting pairs") {
    Rng rng(109);
    for (int t = 0; t < 25; ++t) {
        const auto sigma = random_state(rng, 4, {2, 2});
        const auto rho = random_state(rng, 4, {2, 2});
        const double eps = 0.05 + 0.9 * rng.uniform();
        const auto [v, test] = dh_two_state(eps, sigma, rho);
        REQUIRE(!v.infinite);
        CHECK(test.gap >= -1e-10);
        CHECK(test.gap <= 1e-8);
    }
}

TEST_CASE("duality sandwich on classical pairs") {
    const double eps = 0.3, delta = 0.05;
    Rng rng(110);
    for (int t = 0; t < 25; ++t) {
        const int k = 2 + static_cast<int>(rng.uniform() * 3);
        const auto sv = rng.probability_vector(k);
        const auto rv = rng.probability_vector(k);
        const auto dh = dh_two_state(eps, diag_state(sv), diag_state(rv)).first;
        const auto low = dmax_smooth_classical(std::sqrt(1 - eps), sv, rv);
        const auto high = dmax_smooth_classical(1 - eps - delta, sv, rv);
        REQUIRE(!dh.infinite);
        if (!low.infinite) CHECK(low.bits <= dh.bits + 1e-9);
        if (!high.infinite) CHECK(dh.bits <= high.bits + std::log2(1 / delta) + 1e-9);
    }
}

TEST_CASE("data processing under partial trace") {
    Rng rng(111);
    for (int t = 0; t < 10; ++t) {
        const auto rho = random_state(rng, 4, {2, 2});
        const auto sigma = random_state(rng, 4, {2, 2});
        const auto rho_a = partial_trace(rho, {1});
        const auto sigma_a = partial_trace(sigma, {1});
        CHECK(umegaki(rho_a, sigma_a).bits <= umegaki(rho, sigma).bits + 1e-8);
        CHECK(petz_renyi(0.5, rho_a, sigma_a).bits <= petz_renyi(0.5, rho, sigma).bits + 1e-8);
        CHECK(dmax(rho_a, sigma_a).bits <= dmax(rho, sigma).bits + 1e-8);
        const double dh_ab = dh_two_state(0.2, rho, sigma).first.bits;
        const double dh_a = dh_two_state(0.2, rho_a, sigma_a).first.bits;
        CHECK(dh_a <= dh_ab + 1e-8);
    }
}

TEST_CASE("pinched relative entropy bounds") {
    // commuting inputs: pinching is the identity
    const auto rho_c = diag_state({0.7, 0.3});
    const auto sigma_c = diag_state({0.4, 0.6});
    const auto pb = pinched_relent_bound(rho_c, sigma_c, 1);
    CHECK(pb.pinched_bits == doctest::Approx(pb.upper_bits).epsilon(1e-10));

    // single eigenvalue: the correction vanishes and the bounds collapse
    Rng rng(112);
    const auto rho1 = random_state(rng, 2, {2});
    const auto mm = maximally_mixed(2, {2});
    const auto pb2 = pinched_relent_bound(rho1, mm, 1);
    CHECK(pb2.distinct_eigenvalues == 1);
    CHECK(pb2.lower_bits == doctest::Approx(pb2.upper_bits).epsilon(1e-12));
    CHECK(pb2.pinched_bits == doctest::Approx(pb2.upper_bits).epsilon(1e-9));

    // generic two-copy input: strict sandwich
    const auto sigma = random_state(rng, 2, {2});
    DensityOperator rho2(rng.density_matrix(4), {2, 2});
    const auto pb3 = pinched_relent_bound(rho2, sigma, 2);
    CHECK(pb3.pinched_bits > pb3.lower_bits);
    CHECK(pb3.pinched_bits < pb3.upper_bits);
}

TEST_CASE("classical helpers") {
    CHECK(binary_kl(0.5, 0.75) == doctest::Approx(1.0 - 0.5 * std::log2(3.0)).epsilon(1e-12));
    CHECK(binary_kl(0.9, 0.5) == doctest::Approx(0.531004406).epsilon(1e-8));
    CHECK(kl_divergence({0.5, 0.5}, {0.75, 0.25}) ==
          doctest::Approx(1.0 - 0.5 * std::log2(3.0)).epsilon(1e-12));
    CHECK(std::isinf(kl_divergence({0.5, 0.5}, {1.0, 0.0})));
}
