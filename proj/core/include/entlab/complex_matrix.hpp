#pragma once

#include <complex>
#include <vector>
#include <cstddef>

namespace entlab::num {

using cplx = std::complex<double>;
using Vector = std::vector<cplx>;

/// Dense complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(const std::vector<cplx>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    cplx* row(std::size_t i) { return a_.data() + i * cols_; }
    const cplx* row(std::size_t i) const { return a_.data() + i * cols_; }

    std::vector<cplx>& data() { return a_; }
    const std::vector<cplx>& data() const { return a_; }

    ComplexMatrix adjoint() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx s);

private:
    std::size_t rows_, cols_;
    std::vector<cplx> a_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(cplx s, ComplexMatrix m);

Vector matvec(const ComplexMatrix& m, const Vector& v);
/// m.adjoint() * v without forming the adjoint.
Vector matvec_adj(const ComplexMatrix& m, const Vector& v);

cplx dot(const Vector& x, const Vector& y);  // conjugate-linear in x

/// In-place unnormalized DFT, X_k = sum_j x_j e^{-+ 2 pi i jk / n}
/// (forward uses the minus sign); radix-2, requires a power-of-two length.
void fft_pow2(Vector& x, bool inverse = false);
double norm(const Vector& v);
double norm_sq(const Vector& v);
void normalize(Vector& v);

double frobenius_norm(const ComplexMatrix& m);
double max_abs(const ComplexMatrix& m);
cplx trace(const ComplexMatrix& m);

/// max_{ij} |m - m^dagger| entry deviation.
double hermiticity_defect(const ComplexMatrix& m);
/// Frobenius norm of m^dagger m - Id.
double unitarity_defect(const ComplexMatrix& m);

}  // namespace entlab::num
