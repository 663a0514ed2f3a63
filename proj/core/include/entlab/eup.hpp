#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "entlab/classdyn.hpp"
#include "entlab/complex_matrix.hpp"
#include "entlab/entropy.hpp"
#include "entlab/qpartitions.hpp"

#include <nlohmann/json.hpp>

namespace entlab::eup {

using num::ComplexMatrix;
using num::Vector;

/// Data of the weighted uncertainty bound: two partitions of unity
/// (sum pi_k^dag pi_k = Id), an isometry U, a bounded operator O, weights
/// v (for pi) and w (for tau), and the localization tolerance epsilon.
struct EupInstance {
    std::vector<ComplexMatrix> pi_family;
    std::vector<ComplexMatrix> tau_family;
    ComplexMatrix u{1, 1};
    ComplexMatrix o{1, 1};
    std::vector<double> v;  // aligned with pi_family, all >= something positive
    std::vector<double> w;  // aligned with tau_family
    double epsilon = 0.0;

    /// Throws unless both families resolve the identity to 1e-10, U is an
    /// isometry to 1e-10, and the weight lists are aligned and positive.
    void validate() const;
};

struct EupReport {
    double pressure_pi = 0.0;
    double pressure_tau_of_upsi = 0.0;
    double c = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double localization_defect = 0.0;
    bool hypothesis_ok = true;
    bool c_exhaustive = true;  // false when c is a sampled lower bound
};

void to_json(nlohmann::json& j, const EupReport& r);
void from_json(const nlohmann::json& j, EupReport& r);

/// c = max over (j,k) of w_j v_k ||tau_j U pi_k^dag O||.
double contraction_coefficient(const EupInstance& inst);

/// max_k ||(Id - O) pi_k psi||.
double localization_defect(const Vector& psi,
                           const std::vector<ComplexMatrix>& pi_family,
                           const ComplexMatrix& o);

/// Evaluates p_{pi,v}(psi) + p_{tau,w}(U psi) against -2 log(c + N V W eps).
EupReport check_eup(const EupInstance& inst, const Vector& psi);

/// A family of `count` d x d blocks of a random isometry C^d -> C^{count*d};
/// a partition of unity by construction.
std::vector<ComplexMatrix> random_partition_of_unity(int count, int dim,
                                                     std::uint64_t seed);

/// v_alpha = J^u_n(alpha)^{-1/2} >= 1 for every length-n sequence.
ent::PressureWeights jacobian_weights(const std::vector<cl::SymbolSequence>& alphas,
                                      const cl::ToralAutomorphism& a,
                                      const cl::ArcPartition& p, double big_r);

/// The eigenstate instantiation: pi = reversed family, tau = forward family,
/// isometry U^{n_E}, O = Id, eps = 0; weights either all ones or the
/// Jacobian weights.
struct CorollaryOptions {
    bool jacobian = false;
    const cl::ToralAutomorphism* map = nullptr;  // required when jacobian
    const cl::ArcPartition* arcs = nullptr;
    double big_r = 0.0;
    std::uint64_t pair_cap = 1u << 20;  // exhaustive below this many pairs
    std::uint64_t sample_pairs = 4096;  // sampled-pair mode budget
    std::uint64_t seed = 1;
};

EupReport corollary_instance(const Vector& psi_eigenstate,
                             const qp::QuantumPartition& part, const ComplexMatrix& u,
                             int n_e, const CorollaryOptions& opt = {});

/// Pressure subadditivity defect R = p_{n_o+n} - p_{n_o} - p_n for one state,
/// with Jacobian-type weights supplied per depth via `weight_for`.
double subadditivity_check(const Vector& psi, const qp::QuantumPartition& part,
                           const ComplexMatrix& u, int n_o, int n,
                           const std::function<ent::PressureWeights(int)>& weight_for);

}  // namespace entlab::eup
