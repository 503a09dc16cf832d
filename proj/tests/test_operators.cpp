#include <cmath>

#include "doctest.h"
#include "enttest/json_io.hpp"
#include "enttest/operators.hpp"
#include "enttest/rng.hpp"

using namespace enttest;

namespace {

DensityOperator phi_plus() { return max_entangled(1); }

DensityOperator maximally_mixed(std::vector<int> dims) {
    int n = 1;
    for (int d : dims) n *= d;
    return DensityOperator(ComplexMatrix::identity(n) * cplx(1.0 / n, 0), std::move(dims));
}

double reconstruction_residual(const ComplexMatrix& h) {
    const auto es = hermitian_eig(h);
    const int n = h.dim();
    double res = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx s(0, 0);
            for (int k = 0; k < n; ++k)
                s += es.vectors(i, k) * es.values[k] * std::conj(es.vectors(j, k));
            res = std::max(res, std::abs(s - h(i, j)));
        }
    return res;
}

}  // namespace

TEST_CASE("spectral_decompose on diagonal and symmetry-forced inputs") {
    ComplexMatrix d3(3);
    d3(0, 0) = 3;
    d3(1, 1) = 1;
    d3(2, 2) = 2;
    const auto sd = spectral_decompose(HermitianOperator(d3));
    CHECK(sd.eigenvalues[0] == doctest::Approx(1).epsilon(1e-14));
    CHECK(sd.eigenvalues[1] == doctest::Approx(2).epsilon(1e-14));
    CHECK(sd.eigenvalues[2] == doctest::Approx(3).epsilon(1e-14));
    // columns are a permutation of the standard basis
    for (int k = 0; k < 3; ++k) {
        double mx = 0;
        for (int i = 0; i < 3; ++i) mx = std::max(mx, std::abs(sd.eigenvectors(i, k)));
        CHECK(mx == doctest::Approx(1).epsilon(1e-12));
    }

    ComplexMatrix sx(2);
    sx(0, 1) = 1;
    sx(1, 0) = 1;
    const auto sx_sd = spectral_decompose(HermitianOperator(sx));
    CHECK(sx_sd.eigenvalues[0] == doctest::Approx(-1).epsilon(1e-14));
    CHECK(sx_sd.eigenvalues[1] == doctest::Approx(1).epsilon(1e-14));
}

TEST_CASE("spectral reconstruction residual on seeded random Hermitians") {
    for (int dim : {2, 3, 5, 8, 16, 27, 48, 81}) {
        Rng rng(1234 + dim);
        ComplexMatrix h = rng.hermitian_matrix(dim);
        const auto es = hermitian_eig(h);
        double radius = 0;
        for (double v : es.values) radius = std::max(radius, std::abs(v));
        CHECK(reconstruction_residual(h) < 1e-9 * dim * radius);
        // orthonormality within 1e-10
        for (int a = 0; a < dim; ++a)
            for (int b = a; b < dim; ++b) {
                cplx dot(0, 0);
                for (int i = 0; i < dim; ++i)
                    dot += std::conj(es.vectors(i, a)) * es.vectors(i, b);
                CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-10);
            }
        for (int k = 1; k < dim; ++k) CHECK(es.values[k] >= es.values[k - 1]);
    }
}

TEST_CASE("non-Hermitian input is rejected at construction") {
    ComplexMatrix bad(2);
    bad(0, 1) = cplx(1, 0);
    bad(1, 0) = cplx(0.5, 0);
    CHECK_THROWS_AS(HermitianOperator(std::move(bad)), DomainError);
}

TEST_CASE("matrix_function: identity, square, sqrt") {
    Rng rng(77);
    ComplexMatrix h = rng.hermitian_matrix(5);
    const HermitianOperator hh(h);
    const auto id = matrix_function(hh, [](double x) { return x; }, kKernelTol);
    CHECK((id.matrix() - h).max_abs() < 1e-12);

    ComplexMatrix sz(2);
    sz(0, 0) = 1;
    sz(1, 1) = -1;
    const auto sq = matrix_function(HermitianOperator(sz), [](double x) { return x * x; },
                                    kKernelTol);
    CHECK((sq.matrix() - ComplexMatrix::identity(2)).max_abs() < 1e-14);

    ComplexMatrix d49(2);
    d49(0, 0) = 4;
    d49(1, 1) = 9;
    const auto rt = matrix_function(HermitianOperator(d49),
                                    [](double x) { return std::sqrt(x); }, kKernelTol);
    CHECK(rt.matrix()(0, 0).real() == doctest::Approx(2).epsilon(1e-14));
    CHECK(rt.matrix()(1, 1).real() == doctest::Approx(3).epsilon(1e-14));

    // f undefined at a retained eigenvalue
    ComplexMatrix neg(2);
    neg(0, 0) = -1;
    neg(1, 1) = 1;
    CHECK_THROWS_AS(matrix_function(HermitianOperator(neg),
                                    [](double x) { return std::log2(x); }, kKernelTol),
                    DomainError);
}

TEST_CASE("tensor products and factor bookkeeping") {
    const auto mm2 = maximally_mixed({2});
    const auto t = tensor(mm2, mm2);
    CHECK(t.factor_dims() == std::vector<int>{2, 2});
    CHECK((t.matrix() - ComplexMatrix::identity(4) * cplx(0.25, 0)).max_abs() < 1e-14);

    const auto p2 = tensor(phi_plus(), phi_plus());
    CHECK(p2.matrix().trace().real() == doctest::Approx(1).epsilon(1e-12));

    const auto a = maximally_mixed({2, 3});
    const auto b = maximally_mixed({2});
    const auto ab = tensor(a, b);
    CHECK(ab.factor_dims() == std::vector<int>{2, 3, 2});
    CHECK(ab.dim() == 12);
}

TEST_CASE("partial_trace basics") {
    const auto phi = phi_plus();
    const auto red = partial_trace(phi, {1});
    CHECK(red.dim() == 2);
    CHECK((red.matrix() - ComplexMatrix::identity(2) * cplx(0.5, 0)).max_abs() < 1e-12);

    const auto same = partial_trace(phi, {});
    CHECK((same.matrix() - phi.matrix()).max_abs() == 0.0);

    Rng rng(5);
    const DensityOperator rho_a(rng.density_matrix(2), {2});
    const DensityOperator omega_b(rng.density_matrix(3), {3});
    const auto prod = tensor(rho_a, omega_b);
    const auto back = partial_trace(prod, {0});
    CHECK((back.matrix() - omega_b.matrix()).max_abs() < 1e-12);
    CHECK_THROWS_AS(partial_trace(prod, {0, 1}), DimensionError);
    CHECK(partial_trace(prod, {1}).matrix().trace().real() == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("partial_transpose: spectrum, involution, trace") {
    const auto phi = phi_plus();
    const Bipartition cut = Bipartition::first_vs_rest(2, 1);
    const ComplexMatrix pt = partial_transpose(phi.matrix(), phi.factor_dims(), cut);
    const auto es = hermitian_eig(pt);
    CHECK(es.values.front() == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(pt.trace().real() == doctest::Approx(1).epsilon(1e-12));

    Rng rng(9);
    ComplexMatrix h = rng.hermitian_matrix(6);
    const std::vector<int> dims{2, 3};
    const ComplexMatrix twice = partial_transpose(partial_transpose(h, dims, cut), dims, cut);
    CHECK((twice - h).max_abs() < 1e-14);

    // product state stays PSD under partial transposition
    const DensityOperator rho_a(rng.density_matrix(2), {2});
    const DensityOperator omega_b(rng.density_matrix(2), {2});
    const auto prod = tensor(rho_a, omega_b);
    const auto es2 = hermitian_eig(partial_transpose(prod.matrix(), prod.factor_dims(), cut));
    CHECK(es2.values.front() > -1e-12);
}

TEST_CASE("regroup_copies permutes factors and preserves the spectrum") {
    const auto phi = phi_plus();
    const auto one = regroup_copies(phi, 2, 2, 1);
    CHECK((one.matrix() - phi.matrix()).max_abs() < 1e-14);

    Rng rng(11);
    const DensityOperator rho_a(rng.density_matrix(2), {2});
    const DensityOperator rho_b(rng.density_matrix(2), {2});
    const auto ab = tensor(rho_a, rho_b);
    const auto two = regroup_copies(tensor(ab, ab), 2, 2, 2);
    const auto direct = tensor(tensor(rho_a, rho_a), tensor(rho_b, rho_b));
    CHECK((two.matrix() - direct.matrix()).max_abs() < 1e-12);

    const auto phi2 = tensor(phi, phi);
    const auto grouped = regroup_copies(phi2, 2, 2, 2);
    const auto ev_in = hermitian_eig(phi2.matrix());
    const auto ev_out = hermitian_eig(grouped.matrix());
    for (size_t k = 0; k < ev_in.values.size(); ++k)
        CHECK(ev_in.values[k] == doctest::Approx(ev_out.values[k]).epsilon(1e-10));
}

TEST_CASE("max_entangled") {
    const auto p1 = max_entangled(1);
    CHECK(p1.dim() == 4);
    const auto es = hermitian_eig(p1.matrix());
    CHECK(es.values.back() == doctest::Approx(1).epsilon(1e-12));
    CHECK(es.values[es.values.size() - 2] < 1e-12);  // rank 1

    const auto p2 = max_entangled(2);
    // tracing the B half leaves the maximally mixed state on A^m
    const auto red = partial_trace(p2, {2, 3});
    CHECK((red.matrix() - ComplexMatrix::identity(4) * cplx(0.25, 0)).max_abs() < 1e-12);
    CHECK(p2.matrix().trace().real() == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("trace_distance and fidelity") {
    Rng rng(21);
    const DensityOperator rho(rng.density_matrix(4), {2, 2});
    const DensityOperator sigma(rng.density_matrix(4), {2, 2});
    CHECK(trace_distance(rho, rho) < 1e-12);
    CHECK(fidelity(rho, rho) == doctest::Approx(1).epsilon(1e-10));
    CHECK(trace_distance(rho, sigma) > 0);
    CHECK(fidelity(rho, sigma) < 1);
    // fidelity with a pure state is the overlap
    const auto phi = phi_plus();
    const auto mm = maximally_mixed({2, 2});
    CHECK(fidelity(phi, mm) == doctest::Approx(0.25).epsilon(1e-9));

    ComplexMatrix h(2);
    h(0, 0) = 1;
    h(1, 1) = -2;
    CHECK(negative_part_trace(HermitianOperator(h)) == doctest::Approx(-2).epsilon(1e-14));
}

TEST_CASE("partial_trace of tensor recovers marginals exactly") {
    Rng rng(31);
    const DensityOperator a(rng.density_matrix(3), {3});
    const DensityOperator b(rng.density_matrix(2), {2});
    const auto prod = tensor(a, b);
    CHECK((partial_trace(prod, {1}).matrix() - a.matrix()).max_abs() < 1e-12);
    CHECK((partial_trace(prod, {0}).matrix() - b.matrix()).max_abs() < 1e-12);
}

TEST_CASE("state JSON round trip and validation") {
    const auto phi = phi_plus();
    const std::string text = state_to_json(phi);
    const auto back = state_from_json(text);
    CHECK((back.matrix() - phi.matrix()).max_abs() < 1e-15);
    CHECK(back.factor_dims() == phi.factor_dims());

    CHECK_THROWS_AS(state_from_json("{not json"), FileFormatError);
    CHECK_THROWS_AS(state_from_json(R"({"factor_dims":[2],"entries":[[1,0]]})"), FileFormatError);
    // hermitian but wrong trace
    CHECK_THROWS_AS(state_from_json(R"({"factor_dims":[2],"entries":[[1,0],[0,0],[0,0],[1,0]]})"),
                    DomainError);
}

TEST_CASE("density operator invariants enforced") {
    ComplexMatrix neg(2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityOperator(std::move(neg), {2}), DomainError);
    ComplexMatrix ok(2);
    ok(0, 0) = 0.5;
    ok(1, 1) = 0.5;
    CHECK_THROWS_AS(DensityOperator(ComplexMatrix(ok), {3}), DimensionError);
}
