#include "entlab/quantization.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "entlab/eig.hpp"

namespace entlab::qt {

QuantumTorusSpace::QuantumTorusSpace(int n) : n_(n) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("QuantumTorusSpace: N must be even and >= 2");
}

int QuantumTorusSpace::ehrenfest_time(double log_lambda, double delta_prime) const {
    return (int)std::floor((1.0 - delta_prime) * std::log(2.0 * M_PI * n_) / log_lambda);
}

double QuantumTorusSpace::n1_time(double log_lambda) const {
    return std::log(2.0 * M_PI * n_) / log_lambda;
}

ComplexMatrix weyl_translation(const QuantumTorusSpace& space, long n, long m) {
    const int N = space.N();
    ComplexMatrix t(N, N);
    const double pref_arg = M_PI * (double)(n * m) / N;
    for (int j = 0; j < N; ++j) {
        const double arg = pref_arg + 2.0 * M_PI * (double)n * j / N;
        const int col = (int)(((j + m) % N + N) % N);
        t(j, col) = std::polar(1.0, arg);
    }
    return t;
}

void Observable::set(long n, long m, cplx coeff) {
    if (coeff == cplx(0.0))
        c_.erase({n, m});
    else
        c_[{n, m}] = coeff;
}

cplx Observable::get(long n, long m) const {
    auto it = c_.find({n, m});
    return it == c_.end() ? cplx(0.0) : it->second;
}

Observable Observable::cos_position(long n) {
    Observable a;
    a.set(n, 0, 0.5);
    a.set(-n, 0, 0.5);
    return a;
}

Observable Observable::constant(cplx value) {
    Observable a;
    a.set(0, 0, value);
    return a;
}

Observable Observable::mode(long n, long m) {
    Observable a;
    a.set(n, m, 1.0);
    return a;
}

bool Observable::is_real_symbol(double tol) const {
    for (const auto& [nm, coeff] : c_)
        if (std::abs(get(-nm.first, -nm.second) - std::conj(coeff)) > tol) return false;
    return true;
}

Observable Observable::evolve(const cl::ToralAutomorphism& a, long t) const {
    // (n,m) A for one forward step; the inverse matrix for backward steps.
    long ma = a.a(), mb = a.b(), mc = a.c(), md = a.d();
    unsigned steps = (unsigned)std::llabs(t);
    if (t < 0) {
        ma = a.d(); mb = -a.b(); mc = -a.c(); md = a.a();
    }
    Observable out = *this;
    for (unsigned s = 0; s < steps; ++s) {
        Observable next;
        for (const auto& [nm, coeff] : out.c_) {
            const long n2 = nm.first * ma + nm.second * mc;
            const long m2 = nm.first * mb + nm.second * md;
            next.set(n2, m2, next.get(n2, m2) + coeff);
        }
        out = std::move(next);
    }
    return out;
}

cplx Observable::eval(double x, double p) const {
    cplx s = 0.0;
    for (const auto& [nm, coeff] : c_)
        s += coeff * std::polar(1.0, 2.0 * M_PI * (nm.first * x + nm.second * p));
    return s;
}

ComplexMatrix quantize_observable(const QuantumTorusSpace& space, const Observable& a) {
    const int N = space.N();
    ComplexMatrix op(N, N);
    for (const auto& [nm, coeff] : a.coeffs()) {
        const auto [n, m] = nm;
        const double pref_arg = M_PI * (double)(n * m) / N;
        for (int j = 0; j < N; ++j) {
            const double arg = pref_arg + 2.0 * M_PI * (double)n * j / N;
            const int col = (int)(((j + m) % N + N) % N);
            op(j, col) += coeff * std::polar(1.0, arg);
        }
    }
    return op;
}

ComplexMatrix cat_propagator(const QuantumTorusSpace& space, const cl::ToralAutomorphism& a) {
    const long b = a.b();
    if (b == 0) throw std::invalid_argument("cat_propagator: requires b != 0");
    const int N = space.N();

    // (i N b)^{-1/2}, principal branch; the global phase is irrelevant
    // downstream.
    const cplx pref = std::pow(cplx(0.0, (double)N * (double)b), -0.5);

    ComplexMatrix u(N, N);
    const double den = (double)N * (double)b;
    for (int kp = 0; kp < N; ++kp) {
        for (int k = 0; k < N; ++k) {
            cplx s = 0.0;
            for (long l = 0; l < std::llabs(b); ++l) {
                const double kk = k + (double)l * N;
                const double arg =
                    M_PI / den * (a.a() * kk * kk - 2.0 * kk * kp + a.d() * (double)kp * kp);
                s += std::polar(1.0, arg);
            }
            u(kp, k) = pref * s;
        }
    }
    return u;
}

PropagatorAction::PropagatorAction(const QuantumTorusSpace& space,
                                   const cl::ToralAutomorphism& a)
    : n_(space.N()), fast_(a.b() == 1 && (n_ & (n_ - 1)) == 0) {
    if (!fast_) {
        dense_ = cat_propagator(space, a);
        return;
    }
    pref_ = std::pow(cplx(0.0, (double)n_), -0.5);
    phase_in_.resize((std::size_t)n_);
    phase_out_.resize((std::size_t)n_);
    for (int k = 0; k < n_; ++k) {
        const double q = M_PI * (double)k * (double)k / (double)n_;
        phase_in_[(std::size_t)k] = std::polar(1.0, (double)a.a() * q);
        phase_out_[(std::size_t)k] = std::polar(1.0, (double)a.d() * q);
    }
}

void PropagatorAction::apply(Vector& psi) const {
    if (!fast_) {
        psi = num::matvec(dense_, psi);
        return;
    }
    for (std::size_t k = 0; k < psi.size(); ++k) psi[k] *= phase_in_[k];
    num::fft_pow2(psi, false);
    for (std::size_t k = 0; k < psi.size(); ++k) psi[k] *= pref_ * phase_out_[k];
}

void PropagatorAction::apply_adjoint(Vector& psi) const {
    if (!fast_) {
        psi = num::matvec_adj(dense_, psi);
        return;
    }
    const cplx cpref = std::conj(pref_);
    for (std::size_t k = 0; k < psi.size(); ++k)
        psi[k] *= cpref * std::conj(phase_out_[k]);
    num::fft_pow2(psi, true);
    for (std::size_t k = 0; k < psi.size(); ++k) psi[k] *= std::conj(phase_in_[k]);
}

double egorov_defect(const QuantumTorusSpace& space, const ComplexMatrix& u,
                     const cl::ToralAutomorphism& a, const Observable& obs, long t) {
    // || U^{-t} Op(a) U^t - Op(a o g^t) || = || Op(a) U^t - U^t Op(a o g^t) ||.
    const ComplexMatrix op = quantize_observable(space, obs);
    const ComplexMatrix op_t = quantize_observable(space, obs.evolve(a, t));
    ComplexMatrix ut = ComplexMatrix::identity(space.N());
    const ComplexMatrix step = t >= 0 ? u : u.adjoint();
    for (long i = 0; i < std::llabs(t); ++i) ut = step * ut;
    const ComplexMatrix diff = op * ut - ut * op_t;
    return num::operator_norm(diff, 1e-8);
}

cplx wigner_element(const ComplexMatrix& op, const Vector& psi) {
    return num::dot(num::matvec(op, psi), psi);
}

cplx wigner_element(const QuantumTorusSpace& space, const Vector& psi, const Observable& a) {
    return wigner_element(quantize_observable(space, a), psi);
}

Vector basis_state(const QuantumTorusSpace& space, int j) {
    Vector v(space.N(), 0.0);
    v[(std::size_t)(((j % space.N()) + space.N()) % space.N())] = 1.0;
    return v;
}

Vector random_state(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(dim);
    for (auto& x : v) {
        const double re = g(rng), im = g(rng);
        x = cplx(re, im);
    }
    num::normalize(v);
    return v;
}

}  // namespace entlab::qt
