#pragma once

#include <functional>
#include <vector>

#include "enttest/matrix.hpp"

namespace enttest {

// Relative eigenvalue cutoff separating genuine kernel from round-off.
inline constexpr double kKernelTol = 1e-10;

// Hermitian operator; Hermiticity is validated at construction.
class HermitianOperator {
  public:
    HermitianOperator() = default;
    explicit HermitianOperator(ComplexMatrix m);

    int dim() const { return mat_.dim(); }
    const ComplexMatrix& matrix() const { return mat_; }

  private:
    ComplexMatrix mat_;
};

// Partition of the tensor factors into a left and a right group.
struct Bipartition {
    std::vector<int> left;
    std::vector<int> right;

    static Bipartition first_vs_rest(int n_factors, int n_left);
    void validate(int n_factors) const;
};

// Positive unit-trace Hermitian operator with explicit tensor-factor sizes.
class DensityOperator {
  public:
    DensityOperator() = default;
    DensityOperator(HermitianOperator op, std::vector<int> factor_dims);
    DensityOperator(ComplexMatrix m, std::vector<int> factor_dims)
        : DensityOperator(HermitianOperator(std::move(m)), std::move(factor_dims)) {}

    int dim() const { return op_.dim(); }
    const ComplexMatrix& matrix() const { return op_.matrix(); }
    const HermitianOperator& op() const { return op_; }
    const std::vector<int>& factor_dims() const { return dims_; }

  private:
    HermitianOperator op_;
    std::vector<int> dims_;
};

struct SpectralDecomposition {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // orthonormal columns
};

SpectralDecomposition spectral_decompose(const HermitianOperator& h);

// V f(lambda) V^dag with eigenvalues |lambda| <= kernel_tol * spectral radius
// treated as exactly zero (mapped to kernel_value, default 0). Throws
// DomainError when f is not finite at a retained eigenvalue.
HermitianOperator matrix_function(const HermitianOperator& h,
                                  const std::function<double(double)>& f, double kernel_tol,
                                  double kernel_value = 0.0);

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b);
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& traced_factors);
ComplexMatrix partial_trace_matrix(const ComplexMatrix& m, const std::vector<int>& factor_dims,
                                   const std::vector<int>& traced_factors);

ComplexMatrix partial_transpose(const ComplexMatrix& m, const std::vector<int>& factor_dims,
                                const Bipartition& cut);

// Permute tensor factors: factor j of the output is factor perm[j] of the input.
ComplexMatrix permute_factors(const ComplexMatrix& m, const std::vector<int>& factor_dims,
                              const std::vector<int>& perm);

// n copies of an A:B system, reordered from (A1 B1 ... An Bn) to
// (A1 ... An B1 ... Bn); spectrum is unchanged.
DensityOperator regroup_copies(const DensityOperator& rho_n, int d_a, int d_b, int n);

// n-fold tensor power.
DensityOperator tensor_power(const DensityOperator& rho, int n);

// Phi_m = Phi_+^{tensor m} on 2m qubits, factors ordered (A^m, B^m).
DensityOperator max_entangled(int m);

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);
double negative_part_trace(const HermitianOperator& h);

// Projector onto the span of eigenvectors with eigenvalue above the kernel cut.
ComplexMatrix support_projector(const HermitianOperator& h, double kernel_tol = kKernelTol);

}  // namespace enttest
