#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "entlab/classdyn.hpp"
#include "entlab/eig.hpp"
#include "entlab/entropy.hpp"
#include "entlab/qpartitions.hpp"
#include "entlab/quantization.hpp"

using namespace entlab;
using num::ComplexMatrix;
using num::cplx;
using num::Vector;

TEST_CASE("eta: endpoints, midpoint, maximum, domain") {
    CHECK(ent::eta(0.0) == 0.0);
    CHECK(ent::eta(1.0) == 0.0);
    CHECK(ent::eta(0.5) == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-12));
    CHECK(ent::eta(1.0 / M_E) == doctest::Approx(1.0 / M_E).epsilon(1e-12));
    // 1/e is the maximum.
    CHECK(ent::eta(1.0 / M_E) > ent::eta(1.0 / M_E + 0.01));
    CHECK(ent::eta(1.0 / M_E) > ent::eta(1.0 / M_E - 0.01));
    CHECK_THROWS_AS((void)ent::eta(-0.1), std::invalid_argument);
    CHECK_THROWS_AS((void)ent::eta(1.1), std::invalid_argument);
}

TEST_CASE("shannon_entropy: uniform, point mass, two-level") {
    ent::WeightVector uniform;
    uniform.entries.assign(8, 1.0 / 8.0);
    CHECK(ent::shannon_entropy(uniform) == doctest::Approx(std::log(8.0)).epsilon(1e-12));

    ent::WeightVector point;
    point.entries = {1.0, 0.0, 0.0};
    CHECK(ent::shannon_entropy(point) == 0.0);

    ent::WeightVector two;
    two.entries = {0.75, 0.25};
    CHECK(ent::shannon_entropy(two) ==
          doctest::Approx(-0.75 * std::log(0.75) - 0.25 * std::log(0.25)).epsilon(1e-12));

    ent::WeightVector bad;
    bad.entries = {0.9, 0.9};
    CHECK_THROWS_AS((void)ent::shannon_entropy(bad), std::invalid_argument);
}

TEST_CASE("classical_refined_entropy: depth one, atoms, cat-map growth rate") {
    const auto a = cl::ToralAutomorphism::cat();
    const auto leb = cl::InvariantMeasure::lebesgue();

    const cl::ArcPartition p4(4);
    CHECK(ent::classical_refined_entropy(*leb, a, p4, 1) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-3));

    const auto fixed = cl::InvariantMeasure::periodic_orbit({{0.0, 0.0}});
    for (int n : {1, 3, 6}) CHECK(ent::classical_refined_entropy(*fixed, a, p4, n) == 0.0);

    // Pesin: Lebesgue difference increments approach log lambda_plus.
    const cl::ArcPartition p8(8);
    const long samples = 1024 * 1024;
    for (int n : {6, 8}) {
        const double inc = ent::classical_refined_entropy(*leb, a, p8, n + 1, samples) -
                           ent::classical_refined_entropy(*leb, a, p8, n, samples);
        CHECK(inc == doctest::Approx(a.log_lambda()).epsilon(0.1));
    }
}

TEST_CASE("ks_entropy_estimate: orbits, Lebesgue, mixtures, monotone rates") {
    const auto a = cl::ToralAutomorphism::cat();
    const cl::ArcPartition p(8);

    const auto orbit = cl::InvariantMeasure::periodic_orbit(cl::find_periodic_orbit(a, 5));
    const auto est_orbit = ent::ks_entropy_estimate(*orbit, a, p, 6);
    CHECK(std::abs(est_orbit.difference_estimate) < 1e-12);

    const auto leb = cl::InvariantMeasure::lebesgue();
    const auto est_leb = ent::ks_entropy_estimate(*leb, a, p, 10, 1024 * 1024);
    CHECK(est_leb.difference_estimate == doctest::Approx(0.9624).epsilon(0.1));
    for (std::size_t i = 1; i < est_leb.rates.size(); ++i)
        CHECK(est_leb.rates[i] <= est_leb.rates[i - 1] + 5e-3);

    const auto mix = cl::InvariantMeasure::mixture(
        {{0.5, leb}, {0.5, cl::InvariantMeasure::periodic_orbit({{0.0, 0.0}})}});
    const auto est_mix = ent::ks_entropy_estimate(*mix, a, p, 10, 1024 * 1024);
    CHECK(est_mix.difference_estimate == doctest::Approx(0.4812).epsilon(0.25));
    CHECK(std::abs(est_mix.difference_estimate - 0.4812) < 0.1);
}

TEST_CASE("classical subadditivity and the decay criterion") {
    const auto a = cl::ToralAutomorphism::cat();
    const cl::ArcPartition p(4);
    const auto leb = cl::InvariantMeasure::lebesgue();
    const long samples = 1024 * 1024;

    const double h2 = ent::classical_refined_entropy(*leb, a, p, 2, samples);
    const double h3 = ent::classical_refined_entropy(*leb, a, p, 3, samples);
    const double h5 = ent::classical_refined_entropy(*leb, a, p, 5, samples);
    CHECK(h5 <= h2 + h3 + 1e-2);  // sampling noise allowance

    // Decay criterion: max cylinder weight <= C e^{-beta n} forces the
    // difference estimator >= beta (here beta = log lambda for Lebesgue).
    const auto table = cl::cylinder_weight_table(*leb, a, p, 8, samples);
    double biggest = 0.0;
    for (const auto& [code, w] : table) biggest = std::max(biggest, w);
    // h_n = sum eta(w) >= -log(max w), so h_n/n >= beta up to sampling noise.
    const double beta = -std::log(biggest) / 8.0;
    const auto est = ent::ks_entropy_estimate(*leb, a, p, 8, samples);
    CHECK(est.rates.back() >= beta - 0.05);
}

TEST_CASE("quantum_entropy: localized state, bounds, pressure consistency") {
    qt::QuantumTorusSpace space(32);
    const ComplexMatrix u = qt::cat_propagator(space, cl::ToralAutomorphism::cat());
    const qp::QuantumPartition part(space, qp::SmoothPartition(4, 0.25, 1.0 / 32.0));

    // Basis state in the interior of arc 0.
    CHECK(ent::quantum_entropy(qt::basis_state(space, 4), part, u, 1,
                               qp::Ordering::Forward) == doctest::Approx(0.0).epsilon(1e-10));

    for (std::uint64_t seed : {1, 2, 3}) {
        const Vector psi = qt::random_state(32, seed);
        for (int n : {1, 2, 4}) {
            const double h = ent::quantum_entropy(psi, part, u, n, qp::Ordering::Forward);
            CHECK(h >= 0.0);
            CHECK(h <= n * std::log(4.0) + 1e-9);
        }
    }
}

TEST_CASE("quantum entropy approaches the classical smoothed weights as N grows") {
    // Eigenstate-averaged depth-2 entropy against the classical entropy of the
    // smoothed-partition weights mu((f_{a0} . f_{a1} o g)^2) under Lebesgue.
    const auto a = cl::ToralAutomorphism::cat();
    const qp::SmoothPartition sp(4, 0.25, 1.0 / 32.0);
    const int n = 2;

    // Classical side, by direct quadrature on a fine grid.
    const int grid = 4096;
    std::vector<double> classical(16, 0.0);
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid / 16; ++j) {
            const cl::TorusPoint pt{(i + 0.5) / grid, (j + 0.5) / (grid / 16)};
            for (int a0 = 0; a0 < 4; ++a0)
                for (int a1 = 0; a1 < 4; ++a1)
                    classical[(std::size_t)(a0 * 4 + a1)] +=
                        sp.refined_symbol_sq(a, {a0, a1}, pt) / (grid * (grid / 16.0));
        }
    double h_classical = 0.0;
    for (double w : classical) h_classical += ent::eta(w);

    double previous_distance = 1e300;
    for (int big_n : {64, 256}) {
        qt::QuantumTorusSpace space(big_n);
        const ComplexMatrix u = qt::cat_propagator(space, a);
        const qp::QuantumPartition part(space, sp);
        const auto dec = num::unitary_eig(u, 1);
        double h_avg = 0.0;
        for (int i = 0; i < big_n; ++i)
            h_avg +=
                ent::quantum_entropy(dec.eigenvector(i), part, u, n, qp::Ordering::Forward) /
                big_n;
        const double distance = std::abs(h_avg - h_classical);
        CHECK(distance < previous_distance);
        previous_distance = distance;
    }
    CHECK(previous_distance < 0.05);
}

TEST_CASE("pressure: unit weights, point mass, scaling shift") {
    ent::WeightVector w;
    w.entries = {0.5, 0.3, 0.2};
    w.labels = {{0}, {1}, {2}};

    ent::PressureWeights unit;
    for (int k = 0; k < 3; ++k) unit.v[{k}] = 1.0;
    CHECK(ent::pressure(w, unit) == doctest::Approx(ent::shannon_entropy(w)).epsilon(1e-12));

    ent::WeightVector point;
    point.entries = {1.0};
    point.labels = {{0}};
    ent::PressureWeights ve;
    ve.v[{0}] = M_E;
    CHECK(ent::pressure(point, ve) == doctest::Approx(-2.0).epsilon(1e-12));

    // Scaling all v by c shifts the pressure by exactly -2 log c.
    ent::PressureWeights scaled;
    for (int k = 0; k < 3; ++k) scaled.v[{k}] = 3.0;
    CHECK(ent::pressure(w, scaled) ==
          doctest::Approx(ent::pressure(w, unit) - 2.0 * std::log(3.0)).epsilon(1e-12));

    ent::PressureWeights missing;
    missing.v[{0}] = 1.0;
    CHECK_THROWS_AS((void)ent::pressure(w, missing), std::invalid_argument);
}

TEST_CASE("sz_instrument_weights: pure states, mixed states, normalization") {
    qt::QuantumTorusSpace space(16);
    const ComplexMatrix u = qt::cat_propagator(space, cl::ToralAutomorphism::cat());
    const qp::QuantumPartition part(space, qp::SmoothPartition(2, 0.5, 1.0 / 8.0));
    const Vector psi = qt::random_state(16, 4);
    const int n = 3;

    const auto pure = ent::sz_instrument_weights(psi, part, u, n);
    const auto rw = qp::refined_weights(psi, part, u, n, qp::Ordering::Forward);
    double total = 0.0;
    for (std::size_t i = 0; i < pure.entries.size(); ++i) {
        CHECK(std::abs(pure.entries[i] - rw.weights[i]) < 1e-10);
        total += pure.entries[i];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

    // Maximally mixed state at n=1: tr(P_k^2)/N.
    const std::size_t dim = 16;
    ComplexMatrix mixed(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) mixed(i, i) = 1.0 / dim;
    const auto mw = ent::sz_instrument_weights(mixed, part, u, 1);
    for (int k = 0; k < 2; ++k) {
        const ComplexMatrix pk = part.matrix(k);
        const double expected = num::trace(pk * pk).real() / dim;
        CHECK(mw.entries[(std::size_t)k] == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("af_density_matrix: localization, diagonal, Hermitian PSD trace one") {
    qt::QuantumTorusSpace space(16);
    const ComplexMatrix u = qt::cat_propagator(space, cl::ToralAutomorphism::cat());

    // Sharp-limit partition and a basis state: single diagonal 1.
    const qp::QuantumPartition sharp(space, qp::SmoothPartition(2, 0.5, 0.0));
    const ComplexMatrix rho1 = ent::af_density_matrix(qt::basis_state(space, 3), sharp, u, 1);
    CHECK(std::abs(rho1(0, 0) - cplx(1.0)) < 1e-12);
    CHECK(std::abs(rho1(1, 1)) < 1e-12);

    const qp::QuantumPartition part(space, qp::SmoothPartition(2, 0.5, 1.0 / 8.0));
    const Vector psi = qt::random_state(16, 8);
    const int n = 3;
    const ComplexMatrix rho = ent::af_density_matrix(psi, part, u, n);
    CHECK(num::hermiticity_defect(rho) < 1e-9);
    CHECK(std::abs(num::trace(rho) - cplx(1.0)) < 1e-9);
    const auto dec = num::hermitian_eig(rho);
    CHECK(dec.eigenvalues.front().real() > -1e-9);

    // Diagonal equals the instrument weights.
    const auto weights = ent::sz_instrument_weights(psi, part, u, n);
    for (std::size_t i = 0; i < weights.entries.size(); ++i)
        CHECK(std::abs(rho(i, i).real() - weights.entries[i]) < 1e-10);

    // Pure-state density matrix input gives the same history matrix.
    ComplexMatrix proj(16, 16);
    for (std::size_t r = 0; r < 16; ++r)
        for (std::size_t c = 0; c < 16; ++c) proj(r, c) = psi[r] * std::conj(psi[c]);
    ComplexMatrix diff = ent::af_density_matrix(proj, part, u, n);
    diff -= rho;
    CHECK(num::max_abs(diff) < 1e-8);

    CHECK_THROWS_AS((void)ent::af_density_matrix(psi, part, u, 13), std::invalid_argument);
}

TEST_CASE("af_entropy_curve: agreement with direct spectra, bounds, equidistribution") {
    qt::QuantumTorusSpace space(16);
    const ComplexMatrix u = qt::cat_propagator(space, cl::ToralAutomorphism::cat());
    const qp::QuantumPartition part(space, qp::SmoothPartition(4, 0.25, 1.0 / 32.0));
    const Vector psi = qt::random_state(16, 2);

    const auto curve = ent::af_entropy_curve(psi, part, u, 3);
    REQUIRE(curve.size() == 3);
    for (int n = 1; n <= 3; ++n) {
        // Oracle: entropy of the explicit K^n x K^n history matrix.
        const double direct =
            num::von_neumann_entropy(ent::af_density_matrix(psi, part, u, n));
        CHECK(curve[(std::size_t)n - 1] == doctest::Approx(direct).epsilon(1e-8));
        CHECK(curve[(std::size_t)n - 1] <= n * std::log(4.0) + 1e-9);
    }

    // Equidistributed state: h_1 close to log K.
    Vector flat(16, cplx(0.25, 0.0));
    const auto one = ent::af_entropy_curve(flat, part, u, 1);
    CHECK(one[0] == doctest::Approx(std::log(4.0)).epsilon(0.05));
}
