#include "entlab/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace entlab::num {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kUnitaryTol = 1e-10;
constexpr double kGapTol = 1e-10;

double offdiag_frobenius(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// One Jacobi rotation zeroing a(p,q).  The unitary acting on columns (p,q) is
//   [ c*e^{i phi}   s*e^{i phi} ]
//   [    -s              c      ]
// where a(p,q) = r e^{i phi}; the phase makes the 2x2 block real symmetric and
// (c, s) is the classical symmetric Jacobi rotation.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const cplx apq = a(p, q);
    const double r = std::abs(apq);
    if (r == 0.0) return;
    const cplx phase = apq / r;

    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * r);
    double t;
    if (tau >= 0.0)
        t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
    else
        t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const std::size_t n = a.rows();
    const cplx cp = c * phase, sp = s * phase;

    // A <- R^dagger A R.  Column update then row update.
    for (std::size_t i = 0; i < n; ++i) {
        const cplx aip = a(i, p), aiq = a(i, q);
        a(i, p) = cp * aip - s * aiq;
        a(i, q) = sp * aip + c * aiq;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const cplx apj = a(p, j), aqj = a(q, j);
        a(p, j) = std::conj(cp) * apj - s * aqj;
        a(q, j) = std::conj(sp) * apj + c * aqj;
    }
    // Clean the rotationally-zeroed pair and enforce real diagonal.
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = cplx(a(p, p).real(), 0.0);
    a(q, q) = cplx(a(q, q).real(), 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const cplx vip = v(i, p), viq = v(i, q);
        v(i, p) = cp * vip - s * viq;
        v(i, q) = sp * vip + c * viq;
    }
}

SpectralDecomposition hermitian_eig_unchecked(const ComplexMatrix& h) {
    const std::size_t n = h.rows();
    ComplexMatrix a = h;
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double anorm = frobenius_norm(a);
    const double threshold = 1e-13 * std::max(anorm, 1e-300);
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (offdiag_frobenius(a) <= threshold) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(a(p, q)) > threshold / (double)n)
                    jacobi_rotate(a, v, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = cplx(a(order[k], order[k]).real(), 0.0);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

ComplexMatrix hermitian_combination(const ComplexMatrix& u, double theta) {
    const std::size_t n = u.rows();
    ComplexMatrix h(n, n);
    const double ct = std::cos(theta), st = std::sin(theta);
    const cplx ihalf(0.0, 0.5);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const cplx uij = u(i, j), uji_c = std::conj(u(j, i));
            h(i, j) = ct * 0.5 * (uij + uji_c) - st * ihalf * (uij - uji_c);
        }
    return h;
}

void unitary_eig_impl(const ComplexMatrix& u, std::mt19937_64& rng, int depth,
                      std::vector<cplx>& values, std::vector<Vector>& vectors) {
    const std::size_t n = u.rows();
    if (n == 1) {
        cplx lam = u(0, 0);
        lam /= std::abs(lam);
        values.push_back(lam);
        vectors.push_back({cplx(1.0, 0.0)});
        return;
    }

    // Genuinely scalar block: any orthonormal basis diagonalizes it.
    {
        cplx mean = trace(u) / (double)n;
        double dev = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                dev = std::max(dev, std::abs(u(i, j) - (i == j ? mean : cplx(0.0))));
        if (dev <= 1e-11 || depth > 40) {
            mean /= std::abs(mean);
            for (std::size_t k = 0; k < n; ++k) {
                values.push_back(mean);
                Vector e(n, 0.0);
                e[k] = 1.0;
                vectors.push_back(std::move(e));
            }
            return;
        }
    }

    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    SpectralDecomposition hd;
    bool split = false;
    for (int attempt = 0; attempt < 4 && !split; ++attempt) {
        const double theta = angle(rng);
        hd = hermitian_eig_unchecked(hermitian_combination(u, theta));
        split = true;
        for (std::size_t k = 0; k + 1 < n; ++k)
            if (hd.eigenvalues[k + 1].real() - hd.eigenvalues[k].real() < kGapTol) {
                split = false;
                break;
            }
    }

    // Cluster the H-spectrum by gaps; each cluster spans a U-invariant
    // subspace (or a spurious merge that a fresh theta resolves below).
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n &&
               hd.eigenvalues[end].real() - hd.eigenvalues[end - 1].real() < kGapTol)
            ++end;
        const std::size_t k = end - start;
        if (k == 1) {
            Vector v = hd.eigenvector(start);
            const cplx lam = dot(v, matvec(u, v));
            values.push_back(lam / std::abs(lam));
            vectors.push_back(std::move(v));
        } else {
            // Restrict U to the cluster and recurse.
            std::vector<Vector> basis(k);
            for (std::size_t j = 0; j < k; ++j) basis[j] = hd.eigenvector(start + j);
            ComplexMatrix b(k, k);
            std::vector<Vector> ub(k);
            for (std::size_t j = 0; j < k; ++j) ub[j] = matvec(u, basis[j]);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) b(i, j) = dot(basis[i], ub[j]);

            std::vector<cplx> sub_values;
            std::vector<Vector> sub_vectors;
            unitary_eig_impl(b, rng, depth + 1, sub_values, sub_vectors);
            for (std::size_t j = 0; j < k; ++j) {
                Vector w(n, 0.0);
                for (std::size_t c = 0; c < k; ++c)
                    for (std::size_t i = 0; i < n; ++i) w[i] += sub_vectors[j][c] * basis[c][i];
                normalize(w);
                values.push_back(sub_values[j]);
                vectors.push_back(std::move(w));
            }
        }
        start = end;
    }
}

}  // namespace

Vector SpectralDecomposition::eigenvector(std::size_t i) const {
    Vector v(vectors.rows());
    for (std::size_t r = 0; r < vectors.rows(); ++r) v[r] = vectors(r, i);
    return v;
}

SpectralDecomposition hermitian_eig(const ComplexMatrix& h) {
    if (!h.square()) throw std::invalid_argument("hermitian_eig: matrix not square");
    const double scale = std::max(max_abs(h), 1.0);
    const double asym = hermiticity_defect(h);
    if (asym > kHermTol * scale) {
        std::ostringstream os;
        os << "hermitian_eig: input not Hermitian, asymmetry " << asym;
        throw std::invalid_argument(os.str());
    }
    return hermitian_eig_unchecked(h);
}

SpectralDecomposition unitary_eig(const ComplexMatrix& u, std::uint64_t seed) {
    if (!u.square()) throw std::invalid_argument("unitary_eig: matrix not square");
    const double defect = unitarity_defect(u);
    if (defect > kUnitaryTol * std::sqrt((double)u.rows())) {
        std::ostringstream os;
        os << "unitary_eig: input not unitary, defect " << defect;
        throw std::invalid_argument(os.str());
    }

    std::mt19937_64 rng(seed);
    std::vector<cplx> values;
    std::vector<Vector> vecs;
    unitary_eig_impl(u, rng, 0, values, vecs);

    const std::size_t n = u.rows();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto phase = [&](std::size_t i) {
        double a = std::arg(values[i]);
        if (a < 0.0) a += 2.0 * M_PI;
        return a;
    };
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return phase(i) < phase(j); });

    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = values[order[k]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = vecs[order[k]][i];
    }
    return out;
}

double operator_norm(const ComplexMatrix& a, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("operator_norm: tol must be positive");
    const std::size_t n = a.cols();
    if (n == 0 || a.rows() == 0) return 0.0;

    // Deterministic start with no special structure.
    Vector x(n);
    std::uint64_t state = 0x9e3779b97f4a7c15ull ^ (n * 0x2545f4914f6cdd1dull);
    auto next = [&]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return (double)(state >> 11) / (double)(1ull << 53) - 0.5;
    };
    for (auto& xi : x) xi = cplx(next(), next());
    const double nx = norm(x);
    if (nx == 0.0) x[0] = 1.0;
    else for (auto& xi : x) xi /= nx;

    double value = 0.0;
    for (int it = 0; it < 20000; ++it) {
        Vector y = matvec(a, x);
        Vector z = matvec_adj(a, y);
        const double nz = norm(z);
        if (nz == 0.0) return 0.0;
        const double sigma_sq = nz;  // Rayleigh quotient of A*A at unit x
        for (auto& zi : z) zi /= nz;
        x = std::move(z);
        if (it > 0 && std::abs(sigma_sq - value) <= tol * std::max(sigma_sq, 1e-300)) {
            value = sigma_sq;
            break;
        }
        value = sigma_sq;
    }
    return std::sqrt(value);
}

double von_neumann_entropy(const ComplexMatrix& rho) {
    const SpectralDecomposition d = hermitian_eig(rho);  // rejects non-Hermitian
    double tr = 0.0;
    for (const auto& lam : d.eigenvalues) tr += lam.real();
    if (std::abs(tr - 1.0) > 1e-8) {
        std::ostringstream os;
        os << "von_neumann_entropy: trace " << tr << " is not 1";
        throw std::invalid_argument(os.str());
    }
    double h = 0.0;
    for (const auto& lam : d.eigenvalues) {
        const double p = lam.real();
        if (p < -1e-8) {
            std::ostringstream os;
            os << "von_neumann_entropy: negative eigenvalue " << p;
            throw std::invalid_argument(os.str());
        }
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

}  // namespace entlab::num
