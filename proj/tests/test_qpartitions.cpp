#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "entlab/classdyn.hpp"
#include "entlab/eig.hpp"
#include "entlab/qpartitions.hpp"
#include "entlab/quantization.hpp"

using namespace entlab;
using num::ComplexMatrix;
using num::cplx;
using num::Vector;

TEST_CASE("smooth partition: validation, sharp limit, square-sum identity") {
    CHECK_THROWS_AS(qp::SmoothPartition(4, 0.1, 0.01), std::invalid_argument);  // 1/K > eps
    CHECK_THROWS_AS(qp::SmoothPartition(4, 0.25, 0.2), std::invalid_argument);  // width too big

    const qp::SmoothPartition sharp(4, 0.25, 0.0);
    CHECK(sharp.value(0, 0.1) == 1.0);
    CHECK(sharp.value(1, 0.1) == 0.0);
    CHECK(sharp.value(3, 0.99) == 1.0);

    const qp::SmoothPartition smooth(2, 0.5, 1.0 / 8.0);
    for (int i = 0; i < 10000; ++i) {
        const double x = (double)i / 10000.0;
        double s = 0.0;
        for (int k = 0; k < 2; ++k) s += smooth.value(k, x) * smooth.value(k, x);
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
}

TEST_CASE("smooth partition: support arithmetic and range") {
    const qp::SmoothPartition sp(8, 1.0 / 8.0, 1.0 / 32.0);
    for (int k = 0; k < 8; ++k) {
        for (int i = 0; i < 4000; ++i) {
            const double x = (double)i / 4000.0;
            const double f = sp.value(k, x);
            CHECK(f >= 0.0);
            CHECK(f <= 1.0 + 1e-12);
            // Support contained in the arc fattened by the ramp width.
            double d = x - (double)k / 8.0;
            d -= std::floor(d);
            if (d > 0.5) d -= 1.0;
            const bool inside = d > -1.0 / 32.0 && d < 1.0 / 8.0 + 1.0 / 32.0;
            if (!inside) CHECK(f == 0.0);
        }
    }
}

TEST_CASE("quantum partition: K=1 identity, resolution of identity, commutation") {
    qt::QuantumTorusSpace space(32);
    const qp::QuantumPartition single(space, qp::SmoothPartition(1, 1.0, 0.0));
    ComplexMatrix m = single.matrix(0);
    m -= ComplexMatrix::identity(32);
    CHECK(num::max_abs(m) < 1e-14);

    const qp::QuantumPartition part(space, qp::SmoothPartition(4, 0.25, 1.0 / 16.0));
    ComplexMatrix sum(32, 32);
    for (int k = 0; k < 4; ++k) {
        const ComplexMatrix pk = part.matrix(k);
        sum += pk * pk;
    }
    sum -= ComplexMatrix::identity(32);
    CHECK(num::max_abs(sum) < 1e-12);

    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const Vector psi = qt::random_state(32, seed);
        double total = 0.0;
        for (int k = 0; k < 4; ++k) {
            Vector cut = psi;
            part.apply(k, cut);
            total += num::norm_sq(cut);
        }
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("refined_operator: depth one, contraction, concatenation identity") {
    qt::QuantumTorusSpace space(32);
    const auto a = cl::ToralAutomorphism::cat();
    const ComplexMatrix u = qt::cat_propagator(space, a);
    const qp::QuantumPartition part(space, qp::SmoothPartition(2, 0.5, 1.0 / 8.0));

    ComplexMatrix p0 = qp::refined_operator(part, u, {0}, qp::Ordering::Forward);
    p0 -= part.matrix(0);
    CHECK(num::max_abs(p0) < 1e-14);

    for (int s0 = 0; s0 < 2; ++s0)
        for (int s1 = 0; s1 < 2; ++s1) {
            const ComplexMatrix p =
                qp::refined_operator(part, u, {s0, s1}, qp::Ordering::Forward);
            CHECK(num::operator_norm(p) <= 1.0 + 1e-10);
        }

    // P_{alpha alpha'} relates to P_{alpha'}(n) P_alpha: with |alpha| = n,
    // P_{alpha'} U^n P_alpha = U^n P_{alpha alpha'}.
    const cl::SymbolSequence alpha{0, 1};
    const cl::SymbolSequence alpha2{1, 0};
    const ComplexMatrix pa = qp::refined_operator(part, u, alpha, qp::Ordering::Forward);
    const ComplexMatrix pa2 = qp::refined_operator(part, u, alpha2, qp::Ordering::Forward);
    const ComplexMatrix pcat =
        qp::refined_operator(part, u, {0, 1, 1, 0}, qp::Ordering::Forward);
    const ComplexMatrix uu = u * u;
    ComplexMatrix lhs = pa2 * (uu * pa);
    lhs -= uu * pcat;
    CHECK(num::max_abs(lhs) < 1e-10);
}

TEST_CASE("reversed operator is the adjoint of the forward one") {
    qt::QuantumTorusSpace space(16);
    const ComplexMatrix u = qt::cat_propagator(space, cl::ToralAutomorphism::cat());
    const qp::QuantumPartition part(space, qp::SmoothPartition(2, 0.5, 1.0 / 8.0));
    for (int s0 = 0; s0 < 2; ++s0)
        for (int s1 = 0; s1 < 2; ++s1)
            for (int s2 = 0; s2 < 2; ++s2) {
                const cl::SymbolSequence alpha{s0, s1, s2};
                ComplexMatrix diff =
                    qp::refined_operator(part, u, alpha, qp::Ordering::Reversed);
                diff -= qp::refined_operator(part, u, alpha, qp::Ordering::Forward).adjoint();
                CHECK(num::max_abs(diff) < 1e-12);
            }
}

TEST_CASE("refined_weights: tree recursion matches explicit matrix products") {
    qt::QuantumTorusSpace space(16);
    const ComplexMatrix u = qt::cat_propagator(space, cl::ToralAutomorphism::cat());
    const qp::QuantumPartition part(space, qp::SmoothPartition(2, 0.5, 1.0 / 8.0));
    const Vector psi = qt::random_state(16, 3);

    for (auto ordering : {qp::Ordering::Forward, qp::Ordering::Reversed}) {
        const auto rw = qp::refined_weights(psi, part, u, 3, ordering);
        REQUIRE(rw.weights.size() == 8);
        for (std::uint64_t code = 0; code < 8; ++code) {
            const auto alpha = cl::decode_sequence(code, 2, 3);
            const ComplexMatrix p = qp::refined_operator(part, u, alpha, ordering);
            CHECK(rw.weights[code] ==
                  doctest::Approx(num::norm_sq(num::matvec(p, psi))).epsilon(1e-10));
        }
    }
}

TEST_CASE("refined_weights: localized state and telescoping sum") {
    qt::QuantumTorusSpace space(32);
    const ComplexMatrix u = qt::cat_propagator(space, cl::ToralAutomorphism::cat());
    const qp::QuantumPartition part(space, qp::SmoothPartition(4, 0.25, 1.0 / 32.0));

    // Basis state at j=4: position 1/8, interior of arc 0 away from the ramps.
    const auto one = qp::refined_weights(qt::basis_state(space, 4), part, u, 1,
                                         qp::Ordering::Forward);
    CHECK(one.weights[0] == doctest::Approx(1.0).epsilon(1e-12));

    for (std::uint64_t seed : {1, 2, 3}) {
        const Vector psi = qt::random_state(32, seed);
        for (int n : {1, 2, 4, 6}) {
            const auto rw = qp::refined_weights(psi, part, u, n, qp::Ordering::Forward);
            double total = 0.0;
            for (double w : rw.weights) total += w;
            CHECK(std::abs(total - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("forward and reversed weights coincide on eigenvectors after reversal") {
    // The two orderings are exchanged by an antiunitary time reversal.  With
    // this quantization that symmetry (complex conjugation) requires a
    // symmetric propagator, i.e. a map with equal diagonal entries, and an
    // eigenvector from a nondegenerate level, so the check uses [[2,3],[1,2]].
    qt::QuantumTorusSpace space(32);
    const ComplexMatrix u = qt::cat_propagator(space, cl::ToralAutomorphism(2, 3, 1, 2));
    const qp::QuantumPartition part(space, qp::SmoothPartition(2, 0.5, 1.0 / 8.0));
    const auto dec = num::unitary_eig(u, 1);

    // Pick the most isolated eigenvalue.
    std::size_t pick = 0;
    double best_gap = 0.0;
    for (std::size_t i = 0; i < dec.eigenvalues.size(); ++i) {
        double gap = 1e300;
        for (std::size_t j = 0; j < dec.eigenvalues.size(); ++j)
            if (j != i) gap = std::min(gap, std::abs(dec.eigenvalues[i] - dec.eigenvalues[j]));
        if (gap > best_gap) {
            best_gap = gap;
            pick = i;
        }
    }
    REQUIRE(best_gap > 1e-3);
    const Vector psi = dec.eigenvector(pick);

    const int n = 3;
    const auto fwd = qp::refined_weights(psi, part, u, n, qp::Ordering::Forward);
    const auto rev = qp::refined_weights(psi, part, u, n, qp::Ordering::Reversed);
    for (std::uint64_t code = 0; code < 8; ++code) {
        auto alpha = cl::decode_sequence(code, 2, n);
        std::reverse(alpha.begin(), alpha.end());
        const auto mirrored = cl::encode_sequence(alpha, 2);
        CHECK(fwd.weights[code] == doctest::Approx(rev.weights[mirrored]).epsilon(1e-9));
    }
}

TEST_CASE("max_refined_norms agrees with the exhaustive tables") {
    qt::QuantumTorusSpace space(32);
    const ComplexMatrix u = qt::cat_propagator(space, cl::ToralAutomorphism::cat());
    const qp::QuantumPartition part(space, qp::SmoothPartition(4, 0.25, 1.0 / 16.0));
    const Vector psi = qt::random_state(32, 9);

    const int n_max = 5;
    for (auto ordering : {qp::Ordering::Forward, qp::Ordering::Reversed}) {
        const auto maxima = qp::max_refined_norms(psi, part, u, n_max, ordering);
        REQUIRE((int)maxima.size() == n_max);
        for (int n = 1; n <= n_max; ++n) {
            const auto rw = qp::refined_weights(psi, part, u, n, ordering);
            double best = 0.0;
            for (double w : rw.weights) best = std::max(best, w);
            CHECK(maxima[n - 1] == doctest::Approx(std::sqrt(best)).epsilon(1e-10));
        }
    }
}

TEST_CASE("caps are enforced") {
    qt::QuantumTorusSpace space(16);
    const ComplexMatrix u = qt::cat_propagator(space, cl::ToralAutomorphism::cat());
    const qp::QuantumPartition part(space, qp::SmoothPartition(4, 0.25, 1.0 / 16.0));
    CHECK_THROWS_AS(
        (void)qp::refined_weights(qt::random_state(16, 1), part, u, 4, qp::Ordering::Forward,
                                  100),
        std::invalid_argument);
    CHECK_THROWS_AS((void)qp::refined_operator(part, u, {0, 1, 2, 3}, qp::Ordering::Forward, 100),
                    std::invalid_argument);
}

TEST_CASE("matrix-free max_refined_norms matches the dense variant") {
    qt::QuantumTorusSpace space(64);
    const auto a = cl::ToralAutomorphism::cat();
    const ComplexMatrix u = qt::cat_propagator(space, a);
    const qt::PropagatorAction action(space, a);
    const qp::QuantumPartition part(space, qp::SmoothPartition(4, 0.25, 1.0 / 16.0));
    const Vector psi = qt::random_state(64, 3);
    for (auto ordering : {qp::Ordering::Forward, qp::Ordering::Reversed}) {
        const auto dense = qp::max_refined_norms(psi, part, u, 6, ordering);
        const auto fast = qp::max_refined_norms(psi, part, action, 6, ordering);
        REQUIRE(dense.size() == fast.size());
        for (std::size_t i = 0; i < dense.size(); ++i)
            CHECK(std::abs(dense[i] - fast[i]) < 1e-11);
    }
}
