#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "entlab/classdyn.hpp"
#include "entlab/complex_matrix.hpp"
#include "entlab/qpartitions.hpp"

namespace entlab::ent {

using num::ComplexMatrix;
using num::Vector;

/// Sub-probability weight vector with optional symbol-sequence labels
/// (labels empty, or one per entry).
struct WeightVector {
    std::vector<double> entries;
    std::vector<cl::SymbolSequence> labels;
};

/// Multiplicative weights >= 1 attached to symbol sequences.
struct PressureWeights {
    std::map<cl::SymbolSequence, double> v;
};

/// Throws if entries leave [0,1], the total exceeds 1 + 1e-9, or the label
/// count mismatches.
void validate_weights(const WeightVector& w);

/// Attach decoded labels to a refined-weights table.
WeightVector to_weight_vector(const qp::RefinedWeights& rw);

/// eta(s) = -s log s with eta(0) = 0; rejects s outside [0,1].
double eta(double s);

/// Sum of eta over the entries.
double shannon_entropy(const WeightVector& w);

/// h_n(mu, P) = sum over |alpha|=n of eta(mu(E_alpha)).
double classical_refined_entropy(const cl::InvariantMeasure& mu,
                                 const cl::ToralAutomorphism& a,
                                 const cl::ArcPartition& p, int n,
                                 long samples = 512 * 512, std::uint64_t seed = 1);

struct KsEstimate {
    std::vector<double> h;            // h_1..h_{n_max}
    std::vector<double> rates;        // h_n / n
    std::vector<double> differences;  // h_{n+1} - h_n
    double inf_rate = 0.0;            // min of rates
    double difference_estimate = 0.0; // last difference
};

KsEstimate ks_entropy_estimate(const cl::InvariantMeasure& mu,
                               const cl::ToralAutomorphism& a,
                               const cl::ArcPartition& p, int n_max,
                               long samples = 512 * 512, std::uint64_t seed = 1);

/// h_n(psi) = sum over alpha of eta(||P_alpha psi||^2)  (forward), or the
/// reversed family P*_alpha.
double quantum_entropy(const Vector& psi, const qp::QuantumPartition& qp,
                       const ComplexMatrix& u, int n, qp::Ordering ordering,
                       std::uint64_t cap = qp::kSequenceCap);

/// p = sum eta(w_i) - 2 sum w_i log v(label_i).  Every label of w must be
/// present in v.
double pressure(const WeightVector& w, const PressureWeights& v);

/// Instrument weights tr(pi_alpha rho pi_alpha^dag); coincides with the
/// refined weights for pure states.
WeightVector sz_instrument_weights(const Vector& psi, const qp::QuantumPartition& qp,
                                   const ComplexMatrix& u, int n,
                                   std::uint64_t cap = qp::kSequenceCap);
WeightVector sz_instrument_weights(const ComplexMatrix& rho,
                                   const qp::QuantumPartition& qp,
                                   const ComplexMatrix& u, int n,
                                   std::uint64_t cap = qp::kSequenceCap);

inline constexpr std::uint64_t kAfMatrixCap = 4096;

/// History density matrix [rho_n]_{alpha',alpha} = tr(pi_alpha' rho pi_alpha^dag),
/// a K^n x K^n Hermitian PSD trace-1 matrix.
ComplexMatrix af_density_matrix(const Vector& psi, const qp::QuantumPartition& qp,
                                const ComplexMatrix& u, int n,
                                std::uint64_t cap = kAfMatrixCap);
ComplexMatrix af_density_matrix(const ComplexMatrix& rho,
                                const qp::QuantumPartition& qp,
                                const ComplexMatrix& u, int n,
                                std::uint64_t cap = kAfMatrixCap);

/// n -> tr eta(rho_n) for n = 1..n_max.  For pure states rho_n shares its
/// nonzero spectrum with the N x N second-moment matrix
/// sum_alpha v_alpha v_alpha^dag, so the cost stays polynomial in N even when
/// K^n is huge.
std::vector<double> af_entropy_curve(const Vector& psi, const qp::QuantumPartition& qp,
                                     const ComplexMatrix& u, int n_max);

}  // namespace entlab::ent
