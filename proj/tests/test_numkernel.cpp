#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "entlab/classdyn.hpp"
#include "entlab/complex_matrix.hpp"
#include "entlab/eig.hpp"
#include "entlab/quantization.hpp"

using namespace entlab;
using num::ComplexMatrix;
using num::cplx;
using num::Vector;

namespace {

ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = g(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            m(i, j) = cplx(g(rng), g(rng));
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

ComplexMatrix random_square(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

ComplexMatrix dft(std::size_t n) {
    ComplexMatrix f(n, n);
    const double s = 1.0 / std::sqrt((double)n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            f(r, c) = s * std::exp(cplx(0.0, -2.0 * M_PI * (double)(r * c) / (double)n));
    return f;
}

ComplexMatrix reconstruct(const num::SpectralDecomposition& dec) {
    const std::size_t n = dec.vectors.rows();
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < dec.eigenvalues.size(); ++i) {
        const Vector v = dec.eigenvector(i);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                out(r, c) += dec.eigenvalues[i] * v[r] * std::conj(v[c]);
    }
    return out;
}

double reconstruction_error(const ComplexMatrix& a, const num::SpectralDecomposition& dec) {
    ComplexMatrix diff = reconstruct(dec);
    diff -= a;
    return num::frobenius_norm(diff);
}

}  // namespace

TEST_CASE("hermitian_eig: identity and diagonal cases") {
    const auto id = num::hermitian_eig(ComplexMatrix::identity(3));
    for (const auto& ev : id.eigenvalues) CHECK(std::abs(ev - 1.0) < 1e-12);

    ComplexMatrix d(2, 2);
    d(0, 0) = -1.0;
    d(1, 1) = 2.0;
    const auto dec = num::hermitian_eig(d);
    CHECK(dec.eigenvalues[0].real() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(dec.eigenvalues[1].real() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("hermitian_eig: random 16x16 reconstruction, ascending order, residuals") {
    const ComplexMatrix h = random_hermitian(16, 7);
    const auto dec = num::hermitian_eig(h);
    CHECK(reconstruction_error(h, dec) < 1e-9 * num::frobenius_norm(h));
    for (std::size_t i = 1; i < dec.eigenvalues.size(); ++i)
        CHECK(dec.eigenvalues[i - 1].real() <= dec.eigenvalues[i].real() + 1e-12);
    const double scale = num::frobenius_norm(h);
    for (std::size_t i = 0; i < 16; ++i) {
        Vector r = num::matvec(h, dec.eigenvector(i));
        const Vector v = dec.eigenvector(i);
        for (std::size_t j = 0; j < r.size(); ++j) r[j] -= dec.eigenvalues[i] * v[j];
        CHECK(num::norm(r) < 1e-8 * scale);
    }
}

TEST_CASE("hermitian_eig: rejects non-Hermitian input") {
    ComplexMatrix m(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS((void)num::hermitian_eig(m), std::invalid_argument);
}

TEST_CASE("unitary_eig: diagonal phases and the 2x2 DFT") {
    ComplexMatrix d(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = cplx(0.0, 1.0);
    const auto dec = num::unitary_eig(d, 1);
    CHECK(std::abs(std::arg(dec.eigenvalues[0])) < 1e-10);
    CHECK(std::arg(dec.eigenvalues[1]) == doctest::Approx(M_PI / 2).epsilon(1e-10));

    // 2x2 DFT is real symmetric with eigenvalues +-1.
    const auto f = num::unitary_eig(dft(2), 1);
    for (const auto& ev : f.eigenvalues)
        CHECK(std::min(std::abs(ev - 1.0), std::abs(ev + 1.0)) < 1e-8);
}

TEST_CASE("unitary_eig: N=64 cat propagator has unit-modulus spectrum") {
    qt::QuantumTorusSpace space(64);
    const ComplexMatrix u = qt::cat_propagator(space, cl::ToralAutomorphism::cat());
    const auto dec = num::unitary_eig(u, 1);
    for (const auto& ev : dec.eigenvalues) CHECK(std::abs(std::abs(ev) - 1.0) < 1e-8);
    CHECK(reconstruction_error(u, dec) < 1e-8 * num::frobenius_norm(u));
    // Orthonormal columns.
    ComplexMatrix g = dec.vectors.adjoint() * dec.vectors;
    g -= ComplexMatrix::identity(64);
    CHECK(num::max_abs(g) < 1e-9);
}

TEST_CASE("unitary_eig: eigenvectors diagonalize polynomials in U") {
    qt::QuantumTorusSpace space(32);
    const ComplexMatrix u = qt::cat_propagator(space, cl::ToralAutomorphism::cat());
    const auto dec = num::unitary_eig(u, 3);
    // p(U) = U^2 + 2U; each eigenvector must be an eigenvector of p(U) too.
    const ComplexMatrix p = u * u + cplx(2.0) * u;
    for (std::size_t i = 0; i < dec.eigenvalues.size(); ++i) {
        const Vector v = dec.eigenvector(i);
        Vector r = num::matvec(p, v);
        const cplx ev = dec.eigenvalues[i] * dec.eigenvalues[i] + 2.0 * dec.eigenvalues[i];
        for (std::size_t j = 0; j < r.size(); ++j) r[j] -= ev * v[j];
        CHECK(num::norm(r) < 1e-8 * num::frobenius_norm(p));
    }
}

TEST_CASE("unitary_eig: deterministic given the seed") {
    const ComplexMatrix u = dft(8);
    const auto a = num::unitary_eig(u, 42);
    const auto b = num::unitary_eig(u, 42);
    for (std::size_t i = 0; i < a.eigenvalues.size(); ++i)
        CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) == 0.0);
}

TEST_CASE("operator_norm: identity, diagonal, SVD oracle") {
    CHECK(num::operator_norm(ComplexMatrix::identity(5)) == doctest::Approx(1.0).epsilon(1e-9));

    ComplexMatrix d(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = cplx(0.0, -4.0);
    CHECK(num::operator_norm(d) == doctest::Approx(4.0).epsilon(1e-9));

    // Dense oracle: largest eigenvalue of A^dag A.
    const ComplexMatrix a = random_square(8, 11);
    const auto gram = num::hermitian_eig(a.adjoint() * a);
    const double oracle = std::sqrt(gram.eigenvalues.back().real());
    CHECK(num::operator_norm(a) == doctest::Approx(oracle).epsilon(1e-6));

    CHECK(num::operator_norm(ComplexMatrix(4, 4)) == 0.0);
}

TEST_CASE("operator_norm: adjoint and unitary invariance") {
    const ComplexMatrix a = random_square(10, 5);
    CHECK(num::operator_norm(a) == doctest::Approx(num::operator_norm(a.adjoint())).epsilon(1e-8));
    const ComplexMatrix f = dft(10);
    CHECK(num::operator_norm(f * a) == doctest::Approx(num::operator_norm(a)).epsilon(1e-8));
}

TEST_CASE("von_neumann_entropy: pure, mixed, and two-level cases") {
    ComplexMatrix pure(3, 3);
    pure(1, 1) = 1.0;
    CHECK(std::abs(num::von_neumann_entropy(pure)) < 1e-10);

    const std::size_t d = 6;
    ComplexMatrix mixed(d, d);
    for (std::size_t i = 0; i < d; ++i) mixed(i, i) = 1.0 / d;
    CHECK(num::von_neumann_entropy(mixed) == doctest::Approx(std::log((double)d)).epsilon(1e-10));

    ComplexMatrix two(2, 2);
    two(0, 0) = 0.75;
    two(1, 1) = 0.25;
    const double expected = -0.75 * std::log(0.75) - 0.25 * std::log(0.25);
    CHECK(num::von_neumann_entropy(two) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("von_neumann_entropy: rejects bad density matrices") {
    ComplexMatrix neg(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS((void)num::von_neumann_entropy(neg), std::invalid_argument);
    ComplexMatrix off_trace(2, 2);
    off_trace(0, 0) = 0.7;
    off_trace(1, 1) = 0.7;
    CHECK_THROWS_AS((void)num::von_neumann_entropy(off_trace), std::invalid_argument);
}

TEST_CASE("reconstruction holds for Hermitian and unitary inputs up to N=512") {
    const ComplexMatrix h = random_hermitian(128, 2);
    CHECK(reconstruction_error(h, num::hermitian_eig(h)) < 1e-8 * num::frobenius_norm(h));

    qt::QuantumTorusSpace space(512);
    const ComplexMatrix u = qt::cat_propagator(space, cl::ToralAutomorphism::cat());
    CHECK(reconstruction_error(u, num::unitary_eig(u, 9)) < 1e-8 * num::frobenius_norm(u));
}

TEST_CASE("fft_pow2 matches the direct DFT and round-trips") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (std::size_t n : {1u, 2u, 8u, 64u, 256u}) {
        num::Vector x(n);
        for (auto& v : x) v = num::cplx(g(rng), g(rng));

        num::Vector direct(n, num::cplx(0.0, 0.0));
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j)
                direct[k] += x[j] * std::exp(num::cplx(0.0, -2.0 * M_PI *
                                                                (double)(j * k) / (double)n));

        num::Vector fast = x;
        num::fft_pow2(fast);
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(fast[k] - direct[k]));
        CHECK(worst < 1e-10);

        num::fft_pow2(fast, true);
        for (auto& v : fast) v /= (double)n;
        worst = 0.0;
        for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(fast[k] - x[k]));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("fft_pow2 rejects non-power-of-two lengths") {
    num::Vector x(6);
    CHECK_THROWS_AS(num::fft_pow2(x), std::invalid_argument);
    num::Vector empty;
    CHECK_THROWS_AS(num::fft_pow2(empty), std::invalid_argument);
}
