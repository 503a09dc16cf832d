#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace enttest {

using cplx = std::complex<double>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct ConvergenceError : Error {
    double residual = 0.0;
    ConvergenceError(const std::string& msg, double r) : Error(msg), residual(r) {}
};
struct FileFormatError : Error {
    using Error::Error;
};

// Dense square complex matrix, row-major.
class ComplexMatrix {
  public:
    ComplexMatrix() : dim_(0) {}
    explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim, cplx(0, 0)) {
        if (dim < 0) throw DimensionError("matrix dimension must be nonnegative");
    }
    ComplexMatrix(int dim, std::vector<cplx> entries) : dim_(dim), a_(std::move(entries)) {
        if (a_.size() != static_cast<size_t>(dim) * dim)
            throw DimensionError("entry count does not match dim^2");
    }

    static ComplexMatrix identity(int dim) {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return dim_; }
    cplx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }
    const std::vector<cplx>& data() const { return a_; }
    std::vector<cplx>& data() { return a_; }

    ComplexMatrix adjoint() const;
    cplx trace() const;
    double max_abs() const;
    double frobenius_norm() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  private:
    int dim_;
    std::vector<cplx> a_;
};

// Tr[A B] without forming the product.
cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

// <v|A|v> for a unit (or any) vector v.
cplx vector_expectation(const ComplexMatrix& a, const std::vector<cplx>& v);

// |v><v| as a matrix.
ComplexMatrix outer_projector(const std::vector<cplx>& v);

struct EigenSystem {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // orthonormal columns, vectors(i, k) = <i|v_k>
};

// Eigendecomposition of a Hermitian matrix: Householder tridiagonalization
// followed by implicit-shift QL with accumulated vectors. Input is not
// checked for Hermiticity here (HermitianOperator does that upstream); the
// strictly lower triangle and conjugated upper triangle are averaged.
EigenSystem hermitian_eig(const ComplexMatrix& h);

}  // namespace enttest
