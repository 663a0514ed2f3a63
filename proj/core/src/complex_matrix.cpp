#include "entlab/complex_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace entlab::num {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<cplx>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("matrix shape mismatch in +=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += other.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("matrix shape mismatch in -=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= other.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& x : a_) x *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    if (lhs.cols() != rhs.rows())
        throw std::invalid_argument("matrix shape mismatch in *");
    ComplexMatrix out(lhs.rows(), rhs.cols());
    const std::size_t n = lhs.rows(), k = lhs.cols(), m = rhs.cols();
    // ikj order: the inner loop streams over contiguous rows.
    for (std::size_t i = 0; i < n; ++i) {
        cplx* oi = out.row(i);
        const cplx* li = lhs.row(i);
        for (std::size_t p = 0; p < k; ++p) {
            const cplx l = li[p];
            if (l == cplx(0.0)) continue;
            const cplx* rp = rhs.row(p);
            for (std::size_t j = 0; j < m; ++j) oi[j] += l * rp[j];
        }
    }
    return out;
}

Vector matvec(const ComplexMatrix& m, const Vector& v) {
    if (m.cols() != v.size()) throw std::invalid_argument("matvec shape mismatch");
    Vector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const cplx* mi = m.row(i);
        cplx s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += mi[j] * v[j];
        out[i] = s;
    }
    return out;
}

Vector matvec_adj(const ComplexMatrix& m, const Vector& v) {
    if (m.rows() != v.size()) throw std::invalid_argument("matvec_adj shape mismatch");
    Vector out(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const cplx* mi = m.row(i);
        const cplx vi = v[i];
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += std::conj(mi[j]) * vi;
    }
    return out;
}

cplx dot(const Vector& x, const Vector& y) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

void fft_pow2(Vector& x, bool inverse) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_pow2: length must be a power of two");
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const cplx w_len = std::polar(1.0, sign * 2.0 * M_PI / (double)len);
        for (std::size_t i = 0; i < n; i += len) {
            cplx w = 1.0;
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx even = x[i + j];
                const cplx odd = x[i + j + len / 2] * w;
                x[i + j] = even + odd;
                x[i + j + len / 2] = even - odd;
                w *= w_len;
            }
        }
    }
}

double norm_sq(const Vector& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return s;
}

double norm(const Vector& v) { return std::sqrt(norm_sq(v)); }

void normalize(Vector& v) {
    const double n = norm(v);
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero vector");
    for (auto& x : v) x /= n;
}

double frobenius_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (const auto& x : m.data()) s += std::norm(x);
    return std::sqrt(s);
}

double max_abs(const ComplexMatrix& m) {
    double s = 0.0;
    for (const auto& x : m.data()) s = std::max(s, std::abs(x));
    return s;
}

cplx trace(const ComplexMatrix& m) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) s += m(i, i);
    return s;
}

double hermiticity_defect(const ComplexMatrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            s = std::max(s, std::abs(m(i, j) - std::conj(m(j, i))));
    return s;
}

double unitarity_defect(const ComplexMatrix& m) {
    ComplexMatrix g = m.adjoint() * m;
    for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
    return frobenius_norm(g);
}

}  // namespace entlab::num
