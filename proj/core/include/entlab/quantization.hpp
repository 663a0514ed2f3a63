#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "entlab/classdyn.hpp"
#include "entlab/complex_matrix.hpp"

namespace entlab::qt {

using num::ComplexMatrix;
using num::Vector;
using num::cplx;

/// Hilbert space of the quantum torus: dimension N, hbar = 1/(2 pi N).
/// N is kept even so the propagator construction below is phase-consistent.
class QuantumTorusSpace {
public:
    explicit QuantumTorusSpace(int n);

    int N() const { return n_; }
    double hbar() const { return 1.0 / (2.0 * M_PI * n_); }

    /// Ehrenfest horizon floor((1-delta') log(2 pi N) / log_lambda).
    int ehrenfest_time(double log_lambda, double delta_prime = 0.05) const;
    /// The longer correspondence time |log hbar| / log_lambda.
    double n1_time(double log_lambda) const;

private:
    int n_;
};

/// Phase-space translation by (n/N, m/N):
///   (T(n,m) psi)(j) = e^{i pi n m / N} e^{2 pi i n j / N} psi(j + m mod N).
/// Unitary, T(n,m)^dagger = T(-n,-m), and the exchange relation
///   T(n,m) T(n',m') = e^{2 pi i (n m' - n' m)/N} T(n',m') T(n,m).
ComplexMatrix weyl_translation(const QuantumTorusSpace& space, long n, long m);

/// Finite Fourier series on the torus; coefficient (n,m) multiplies the mode
/// e^{2 pi i (n x + m p)}.
class Observable {
public:
    Observable() = default;

    void set(long n, long m, cplx coeff);
    cplx get(long n, long m) const;
    const std::map<std::pair<long, long>, cplx>& coeffs() const { return c_; }

    /// cos(2 pi n x) (real, position-only).
    static Observable cos_position(long n = 1);
    static Observable constant(cplx value);
    /// Single mode e^{2 pi i (n x + m p)}.
    static Observable mode(long n, long m);

    /// Real-valued symbol check: coeff(-n,-m) = conj(coeff(n,m)).
    bool is_real_symbol(double tol = 1e-12) const;

    /// Exact composition with the automorphism step: index transport
    /// (n,m) -> (n,m) A^t (t may be negative through the inverse matrix).
    Observable evolve(const cl::ToralAutomorphism& a, long t) const;

    /// Pointwise evaluation (for classical cross-checks).
    cplx eval(double x, double p) const;

private:
    std::map<std::pair<long, long>, cplx> c_;
};

/// Op_N(a) = sum coeff(n,m) T(n,m).
ComplexMatrix quantize_observable(const QuantumTorusSpace& space, const Observable& a);

/// Propagator quantizing the automorphism: for A = [[a,b],[c,d]], b != 0,
///   U_{k',k} = (i N b)^{-1/2} sum_{l=0}^{|b|-1}
///              exp{ i pi / (N b) (a (k+lN)^2 - 2 (k+lN) k' + d k'^2) }.
/// Certified by unitarity and by the exact intertwining
///   U^dagger T(n,m) U = T((n,m) A), not by formula provenance.
ComplexMatrix cat_propagator(const QuantumTorusSpace& space, const cl::ToralAutomorphism& a);

/// Matrix-free application of the propagator (and its adjoint).  For b = 1
/// and power-of-two N the propagator factors as
///   U = (iN)^{-1/2} diag(e^{i pi d k^2 / N}) . DFT . diag(e^{i pi a k^2 / N}),
/// so one application costs O(N log N); other maps fall back to the dense
/// matrix.  Agrees with cat_propagator entrywise.
class PropagatorAction {
public:
    PropagatorAction(const QuantumTorusSpace& space, const cl::ToralAutomorphism& a);

    int dim() const { return n_; }
    bool fast() const { return fast_; }
    void apply(Vector& psi) const;
    void apply_adjoint(Vector& psi) const;

private:
    int n_;
    bool fast_;
    num::cplx pref_;                 // (i N b)^{-1/2}
    std::vector<num::cplx> phase_in_, phase_out_;  // e^{i pi a k^2/N}, e^{i pi d k^2/N}
    ComplexMatrix dense_;            // fallback
};

/// Operator norm of U^{-t} Op(a) U^t - Op(a o g^t); exactly 0 (to machine
/// precision) for the linear model.
double egorov_defect(const QuantumTorusSpace& space, const ComplexMatrix& u,
                     const cl::ToralAutomorphism& a, const Observable& obs, long t);

/// <Op(a) psi, psi> for a normalized state.
cplx wigner_element(const QuantumTorusSpace& space, const Vector& psi, const Observable& a);
cplx wigner_element(const ComplexMatrix& op, const Vector& psi);

/// Position basis vector e_j.
Vector basis_state(const QuantumTorusSpace& space, int j);
/// Normalized state with iid Gaussian entries, deterministic given seed.
Vector random_state(int dim, std::uint64_t seed);

}  // namespace entlab::qt
