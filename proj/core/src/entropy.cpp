#include "entlab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "entlab/eig.hpp"

namespace entlab::ent {

namespace {

// Weights produced by floating-point products can overshoot [0,1] by a few
// ulp; fold that back before eta sees it.
double clip01(double s) {
    if (s < 0.0 && s > -1e-9) return 0.0;
    if (s > 1.0 && s < 1.0 + 1e-9) return 1.0;
    return s;
}

}  // namespace

void validate_weights(const WeightVector& w) {
    if (!w.labels.empty() && w.labels.size() != w.entries.size())
        throw std::invalid_argument("WeightVector: label/entry count mismatch");
    double sum = 0.0;
    for (double e : w.entries) {
        const double c = clip01(e);
        if (c < 0.0 || c > 1.0)
            throw std::invalid_argument("WeightVector: entry outside [0,1]");
        sum += c;
    }
    if (sum > 1.0 + 1e-9)
        throw std::invalid_argument("WeightVector: total weight exceeds 1");
}

WeightVector to_weight_vector(const qp::RefinedWeights& rw) {
    WeightVector out;
    out.entries = rw.weights;
    out.labels.reserve(rw.weights.size());
    for (std::uint64_t code = 0; code < rw.weights.size(); ++code)
        out.labels.push_back(cl::decode_sequence(code, rw.k, rw.n));
    return out;
}

double eta(double s) {
    s = clip01(s);
    if (s < 0.0 || s > 1.0) throw std::invalid_argument("eta: argument outside [0,1]");
    if (s == 0.0) return 0.0;
    return -s * std::log(s);
}

double shannon_entropy(const WeightVector& w) {
    validate_weights(w);
    double h = 0.0;
    for (double e : w.entries) h += eta(e);
    return h;
}

double classical_refined_entropy(const cl::InvariantMeasure& mu,
                                 const cl::ToralAutomorphism& a,
                                 const cl::ArcPartition& p, int n,
                                 long samples, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("classical_refined_entropy: n >= 1");
    const auto table = cl::cylinder_weight_table(mu, a, p, n, samples, seed);
    double h = 0.0;
    for (const auto& [code, weight] : table) h += eta(weight);
    return h;
}

KsEstimate ks_entropy_estimate(const cl::InvariantMeasure& mu,
                               const cl::ToralAutomorphism& a,
                               const cl::ArcPartition& p, int n_max,
                               long samples, std::uint64_t seed) {
    if (n_max < 2) throw std::invalid_argument("ks_entropy_estimate: n_max >= 2");
    KsEstimate out;
    for (int n = 1; n <= n_max; ++n) {
        out.h.push_back(classical_refined_entropy(mu, a, p, n, samples, seed));
        out.rates.push_back(out.h.back() / n);
    }
    for (int n = 0; n + 1 < n_max; ++n) out.differences.push_back(out.h[n + 1] - out.h[n]);
    out.inf_rate = *std::min_element(out.rates.begin(), out.rates.end());
    out.difference_estimate = out.differences.back();
    return out;
}

double quantum_entropy(const Vector& psi, const qp::QuantumPartition& part,
                       const ComplexMatrix& u, int n, qp::Ordering ordering,
                       std::uint64_t cap) {
    const auto rw = qp::refined_weights(psi, part, u, n, ordering, cap);
    double h = 0.0;
    for (double w : rw.weights) h += eta(w);
    return h;
}

double pressure(const WeightVector& w, const PressureWeights& v) {
    validate_weights(w);
    if (w.labels.size() != w.entries.size())
        throw std::invalid_argument("pressure: weight vector needs labels");
    double p = 0.0;
    for (std::size_t i = 0; i < w.entries.size(); ++i) {
        const auto it = v.v.find(w.labels[i]);
        if (it == v.v.end())
            throw std::invalid_argument("pressure: label missing from pressure weights");
        p += eta(w.entries[i]) - 2.0 * clip01(w.entries[i]) * std::log(it->second);
    }
    return p;
}

WeightVector sz_instrument_weights(const Vector& psi, const qp::QuantumPartition& part,
                                   const ComplexMatrix& u, int n, std::uint64_t cap) {
    return to_weight_vector(qp::refined_weights(psi, part, u, n, qp::Ordering::Forward, cap));
}

WeightVector sz_instrument_weights(const ComplexMatrix& rho,
                                   const qp::QuantumPartition& part,
                                   const ComplexMatrix& u, int n, std::uint64_t cap) {
    const auto dec = num::hermitian_eig(rho);
    WeightVector out;
    for (std::size_t i = 0; i < dec.eigenvalues.size(); ++i) {
        const double lambda = dec.eigenvalues[i].real();
        if (lambda < 1e-14) continue;
        const auto rw =
            qp::refined_weights(dec.eigenvector(i), part, u, n, qp::Ordering::Forward, cap);
        if (out.entries.empty()) {
            out = to_weight_vector(rw);
            for (double& e : out.entries) e *= lambda;
        } else {
            for (std::size_t c = 0; c < rw.weights.size(); ++c)
                out.entries[c] += lambda * rw.weights[c];
        }
    }
    return out;
}

namespace {

// Gram matrix of the refined leaf vectors of one pure state, scaled by
// `scale`, accumulated into `m`.
void accumulate_af_gram(ComplexMatrix& m, double scale, const Vector& psi,
                        const qp::QuantumPartition& part, const ComplexMatrix& u,
                        int n, std::uint64_t cap) {
    std::vector<Vector> leaves(m.rows());
    qp::refined_leaves(psi, part, u, n, qp::Ordering::Forward,
                       [&](std::uint64_t code, const Vector& leaf) {
                           leaves[(std::size_t)code] = leaf;
                       },
                       cap);
    for (std::size_t ap = 0; ap < m.rows(); ++ap)
        for (std::size_t al = 0; al < m.cols(); ++al)
            m(ap, al) += scale * num::dot(leaves[al], leaves[ap]);
}

std::uint64_t af_dim(int k, int n, std::uint64_t cap) {
    std::uint64_t dim = 1;
    for (int i = 0; i < n; ++i) {
        dim *= (std::uint64_t)k;
        if (dim > cap)
            throw std::invalid_argument("af_density_matrix: K^n exceeds the matrix cap");
    }
    return dim;
}

}  // namespace

ComplexMatrix af_density_matrix(const Vector& psi, const qp::QuantumPartition& part,
                                const ComplexMatrix& u, int n, std::uint64_t cap) {
    const std::uint64_t dim = af_dim(part.K(), n, cap);
    ComplexMatrix m((int)dim, (int)dim);
    accumulate_af_gram(m, 1.0, psi, part, u, n, cap);
    return m;
}

ComplexMatrix af_density_matrix(const ComplexMatrix& rho,
                                const qp::QuantumPartition& part,
                                const ComplexMatrix& u, int n, std::uint64_t cap) {
    const std::uint64_t dim = af_dim(part.K(), n, cap);
    ComplexMatrix m((int)dim, (int)dim);
    const auto dec = num::hermitian_eig(rho);
    for (std::size_t i = 0; i < dec.eigenvalues.size(); ++i) {
        if (dec.eigenvalues[i].real() < 1e-14) continue;
        accumulate_af_gram(m, dec.eigenvalues[i].real(), dec.eigenvector(i), part, u, n, cap);
    }
    return m;
}

std::vector<double> af_entropy_curve(const Vector& psi, const qp::QuantumPartition& part,
                                     const ComplexMatrix& u, int n_max) {
    if (n_max < 1) throw std::invalid_argument("af_entropy_curve: n_max >= 1");
    const int dim = (int)psi.size();

    // One DFS through the branching tree; the depth-d second moments pick up a
    // harmless unitary conjugation relative to sum_alpha v_alpha v_alpha^dag,
    // which leaves their spectra (hence tr eta) unchanged.
    std::vector<ComplexMatrix> moments(n_max, ComplexMatrix(dim, dim));
    auto recurse = [&](auto&& self, int depth, const Vector& state) -> void {
        for (int k = 0; k < part.K(); ++k) {
            Vector branch = state;
            part.apply(k, branch);
            // A subtree of mass < 1e-18 moves every tr eta by < 1e-15.
            if (num::norm_sq(branch) < 1e-18) continue;
            ComplexMatrix& m = moments[depth];
            for (int r = 0; r < dim; ++r) {
                if (std::norm(branch[(std::size_t)r]) < 1e-300) continue;
                for (int c = 0; c < dim; ++c)
                    m(r, c) += branch[(std::size_t)r] * std::conj(branch[(std::size_t)c]);
            }
            if (depth + 1 < n_max) self(self, depth + 1, num::matvec(u, branch));
        }
    };
    recurse(recurse, 0, psi);

    std::vector<double> curve;
    curve.reserve(n_max);
    for (int n = 0; n < n_max; ++n) {
        const auto dec = num::hermitian_eig(moments[n]);
        double h = 0.0;
        for (const num::cplx& ev : dec.eigenvalues) {
            double lambda = ev.real();
            if (lambda < 0.0 && lambda >= -1e-10) lambda = 0.0;
            h += eta(lambda);
        }
        curve.push_back(h);
    }
    return curve;
}

}  // namespace entlab::ent
