#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "entlab/quantization.hpp"

namespace entlab::qp {

using num::ComplexMatrix;
using num::Vector;
using qt::QuantumTorusSpace;

/// Default cap on the number of refined sequences held in full tables.
constexpr std::uint64_t kSequenceCap = 1ull << 20;  // 4^10

/// Smoothed partition of unity on the position circle: K bumps f_k with
/// sum_k f_k(x)^2 = 1 pointwise, supp f_k inside the arc widened by `width`
/// on each side.
class SmoothPartition {
public:
    /// K equal arcs of length 1/K <= epsilon; raised-cosine ramps of
    /// half-width `width`, then pointwise square-sum normalization.
    SmoothPartition(int k, double epsilon, double width);

    int K() const { return k_; }
    double width() const { return width_; }
    double epsilon() const { return epsilon_; }
    /// Support diameter bound 1/K + 2*width.
    double support_diameter() const { return 1.0 / k_ + 2.0 * width_; }

    /// f_k evaluated at position x (mod 1).
    double value(int k, double x) const;
    /// (f_{alpha_{n-1}} o g^{n-1})^2 ... (f_{alpha_0})^2 evaluated at a phase
    /// point: the classical weight symbol of the refined quantum operators.
    double refined_symbol_sq(const cl::ToralAutomorphism& a,
                             const cl::SymbolSequence& alpha, cl::TorusPoint pt) const;

private:
    int k_;
    double epsilon_;
    double width_;
};

/// Diagonal multiplication operators P_k = diag(f_k(j/N)), sum P_k^2 = Id.
class QuantumPartition {
public:
    QuantumPartition(const QuantumTorusSpace& space, const SmoothPartition& sp);

    int K() const { return (int)diag_.size(); }
    int N() const { return n_; }
    const std::vector<double>& diag(int k) const { return diag_[k]; }
    ComplexMatrix matrix(int k) const;

    /// In-place psi <- P_k psi.
    void apply(int k, Vector& psi) const;

private:
    int n_;
    std::vector<std::vector<double>> diag_;
};

enum class Ordering {
    Forward,   // tau family: P_alpha = P_{a_{n-1}}(n-1) ... P_{a_0}
    Reversed,  // pi family:  P*_alpha = P_{a_0} P_{a_1}(1) ... P_{a_{n-1}}(n-1)
};

/// The product operator as a dense matrix (small n only).
ComplexMatrix refined_operator(const QuantumPartition& qp, const ComplexMatrix& u,
                               const cl::SymbolSequence& alpha, Ordering ordering,
                               std::uint64_t cap = kSequenceCap);

/// Weight table ||P_alpha psi||^2 over all K^n sequences.
struct RefinedWeights {
    int n = 0;
    int k = 0;
    Ordering ordering = Ordering::Forward;
    /// Indexed by encode_sequence(alpha, K).
    std::vector<double> weights;
};

/// Depth-first tree evaluation: states branch through the K multiplication
/// operators and evolve by one propagator step per level, so no K^n matrix
/// products are formed.  Requires K^n <= cap.
RefinedWeights refined_weights(const Vector& psi, const QuantumPartition& qp,
                               const ComplexMatrix& u, int n, Ordering ordering,
                               std::uint64_t cap = kSequenceCap);

/// Leaf callback variant: visits (code, leaf vector) for every sequence.
/// The leaf vector equals P_alpha psi up to a global unitary (norms and
/// mutual inner products are those of the refined family).
void refined_leaves(const Vector& psi, const QuantumPartition& qp,
                    const ComplexMatrix& u, int n, Ordering ordering,
                    const std::function<void(std::uint64_t, const Vector&)>& visit,
                    std::uint64_t cap = kSequenceCap);

/// max_{|alpha|=n} ||P_alpha psi|| for every n in [1, n_max], by pruned
/// depth-first search (no full table, no sequence cap).
std::vector<double> max_refined_norms(const Vector& psi, const QuantumPartition& qp,
                                      const ComplexMatrix& u, int n_max,
                                      Ordering ordering = Ordering::Forward);

/// Matrix-free variant; identical output, O(N log N) per tree node when the
/// action has a fast factorization.
std::vector<double> max_refined_norms(const Vector& psi, const QuantumPartition& qp,
                                      const qt::PropagatorAction& u, int n_max,
                                      Ordering ordering = Ordering::Forward);

}  // namespace entlab::qp
