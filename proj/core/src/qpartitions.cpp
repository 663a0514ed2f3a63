#include "entlab/qpartitions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace entlab::qp {

namespace {

double mod1(double x) {
    double m = x - std::floor(x);
    if (m >= 1.0) m -= 1.0;
    if (m < 0.0) m += 1.0;
    return m;
}

}  // namespace

SmoothPartition::SmoothPartition(int k, double epsilon, double width)
    : k_(k), epsilon_(epsilon), width_(width) {
    if (k < 1) throw std::invalid_argument("SmoothPartition: K must be >= 1");
    const double arc = 1.0 / k;
    if (arc > epsilon + 1e-15)
        throw std::invalid_argument("SmoothPartition: arc length 1/K exceeds epsilon");
    if (width < 0.0) throw std::invalid_argument("SmoothPartition: width must be >= 0");
    if (k > 1 && width >= arc / 2.0)
        throw std::invalid_argument(
            "SmoothPartition: width >= half arc length (non-adjacent overlap)");
}

double SmoothPartition::value(int k, double x) const {
    if (k < 0 || k >= k_) throw std::invalid_argument("arc index out of range");
    if (k_ == 1) return 1.0;

    const double arc = 1.0 / k_;
    auto raw = [&](int j, double xx) -> double {
        // Offset from arc start, folded to (-1/2, 1/2].
        double d = mod1(xx - (double)j * arc);
        if (d > 0.5) d -= 1.0;
        if (width_ == 0.0) return (d >= 0.0 && d < arc) ? 1.0 : 0.0;
        const double e = d - arc;  // offset from arc end
        if (d > -width_ && d < width_)
            return std::sin(M_PI / 2.0 * (d + width_) / (2.0 * width_));
        if (e > -width_ && e < width_)
            return std::cos(M_PI / 2.0 * (e + width_) / (2.0 * width_));
        return (d >= 0.0 && d < arc) ? 1.0 : 0.0;
    };

    double sum_sq = 0.0;
    for (int j = 0; j < k_; ++j) sum_sq += raw(j, x) * raw(j, x);
    return raw(k, x) / std::sqrt(sum_sq);
}

double SmoothPartition::refined_symbol_sq(const cl::ToralAutomorphism& a,
                                          const cl::SymbolSequence& alpha,
                                          cl::TorusPoint pt) const {
    double prod = 1.0;
    for (std::size_t t = 0; t < alpha.size(); ++t) {
        const double f = value(alpha[t], pt.x);
        prod *= f * f;
        if (prod == 0.0) return 0.0;
        if (t + 1 < alpha.size()) pt = a.apply(pt);
    }
    return prod;
}

QuantumPartition::QuantumPartition(const QuantumTorusSpace& space, const SmoothPartition& sp)
    : n_(space.N()), diag_(sp.K()) {
    for (int k = 0; k < sp.K(); ++k) {
        diag_[k].resize(n_);
        for (int j = 0; j < n_; ++j) diag_[k][j] = sp.value(k, (double)j / n_);
    }
}

ComplexMatrix QuantumPartition::matrix(int k) const {
    ComplexMatrix m(n_, n_);
    for (int j = 0; j < n_; ++j) m(j, j) = diag_[k][j];
    return m;
}

void QuantumPartition::apply(int k, Vector& psi) const {
    const auto& d = diag_[k];
    for (int j = 0; j < n_; ++j) psi[j] *= d[j];
}

namespace {

std::uint64_t checked_pow(std::uint64_t base, int exp, std::uint64_t cap) {
    std::uint64_t v = 1;
    for (int i = 0; i < exp; ++i) {
        if (v > cap / base) return cap + 1;
        v *= base;
    }
    return v;
}

}  // namespace

ComplexMatrix refined_operator(const QuantumPartition& qp, const ComplexMatrix& u,
                               const cl::SymbolSequence& alpha, Ordering ordering,
                               std::uint64_t cap) {
    if (alpha.empty()) throw std::invalid_argument("refined_operator: |alpha| >= 1");
    const int n = (int)alpha.size();
    if (checked_pow((std::uint64_t)qp.K(), n, cap) > cap)
        throw std::invalid_argument("refined_operator: K^n exceeds the configured cap");
    const ComplexMatrix udag = u.adjoint();

    if (ordering == Ordering::Forward) {
        // P_alpha = U^{-(n-1)} (P_{a_{n-1}} U P_{a_{n-2}} U ... P_{a_0}).
        ComplexMatrix m = qp.matrix(alpha[0]);
        for (int t = 1; t < n; ++t) m = qp.matrix(alpha[t]) * (u * m);
        for (int t = 1; t < n; ++t) m = udag * m;
        return m;
    }
    // P*_alpha = P_{a_0} (U^dag P_{a_1} (U^dag ... U) U).
    ComplexMatrix m = qp.matrix(alpha[n - 1]);
    for (int t = n - 2; t >= 0; --t) m = qp.matrix(alpha[t]) * (udag * m * u);
    return m;
}

void refined_leaves(const Vector& psi, const QuantumPartition& qp,
                    const ComplexMatrix& u, int n, Ordering ordering,
                    const std::function<void(std::uint64_t, const Vector&)>& visit,
                    std::uint64_t cap) {
    if (n < 1) throw std::invalid_argument("refined_leaves: depth must be >= 1");
    const std::uint64_t total = checked_pow((std::uint64_t)qp.K(), n, cap);
    if (total > cap)
        throw std::invalid_argument("refined_leaves: K^n exceeds the configured cap");

    const bool forward = ordering == Ordering::Forward;
    const ComplexMatrix step = forward ? u : u.adjoint();

    Vector start = psi;
    if (!forward) {
        // The pi family consumes symbols from the far end of U^{n-1} psi.
        for (int t = 0; t < n - 1; ++t) start = num::matvec(u, start);
    }

    std::vector<std::uint64_t> powers(n, 1);
    for (int t = 1; t < n; ++t) powers[t] = powers[t - 1] * (std::uint64_t)qp.K();

    auto recurse = [&](auto&& self, int level, std::uint64_t code, const Vector& state) -> void {
        for (int k = 0; k < qp.K(); ++k) {
            Vector branch = state;
            qp.apply(k, branch);
            const std::uint64_t branch_code =
                forward ? code * (std::uint64_t)qp.K() + (std::uint64_t)k
                        : code + (std::uint64_t)k * powers[level];
            if (level == n - 1)
                visit(branch_code, branch);
            else
                self(self, level + 1, branch_code, num::matvec(step, branch));
        }
    };
    recurse(recurse, 0, 0, start);
}

RefinedWeights refined_weights(const Vector& psi, const QuantumPartition& qp,
                               const ComplexMatrix& u, int n, Ordering ordering,
                               std::uint64_t cap) {
    RefinedWeights out;
    out.n = n;
    out.k = qp.K();
    out.ordering = ordering;
    out.weights.assign((std::size_t)checked_pow((std::uint64_t)qp.K(), n, cap), 0.0);
    refined_leaves(psi, qp, u, n, ordering,
                   [&](std::uint64_t code, const Vector& leaf) {
                       out.weights[(std::size_t)code] = num::norm_sq(leaf);
                   },
                   cap);
    return out;
}

namespace {

// Shared search body: `step` applies the per-level evolution in place
// (U forward, U^dagger reversed) and `advance` applies U in place (for the
// reversed-family roots).
template <class Step, class Advance>
std::vector<double> max_norms_impl(const Vector& psi, const QuantumPartition& qp,
                                   int n_max, Ordering ordering, Step step,
                                   Advance advance) {
    if (n_max < 1) throw std::invalid_argument("max_refined_norms: n_max >= 1");
    const bool forward = ordering == Ordering::Forward;

    std::vector<double> best(n_max, 0.0);

    // Branch norms only shrink, so a branch that cannot beat every deeper
    // record is dead.  Children are explored largest first to tighten the
    // records early.
    auto run = [&](const Vector& root, int from_depth, int to_depth) {
        auto recurse = [&](auto&& self, int depth, const Vector& state) -> void {
            std::vector<std::pair<double, Vector>> children;
            children.reserve(qp.K());
            for (int k = 0; k < qp.K(); ++k) {
                Vector branch = state;
                qp.apply(k, branch);
                children.emplace_back(num::norm(branch), std::move(branch));
            }
            std::sort(children.begin(), children.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
            for (auto& [nrm, branch] : children) {
                best[depth] = std::max(best[depth], nrm);
                if (depth + 1 > to_depth) continue;
                double floor_ahead = best[depth + 1];
                for (int d = depth + 2; d <= to_depth; ++d)
                    floor_ahead = std::min(floor_ahead, best[d]);
                if (nrm <= floor_ahead) continue;
                step(branch);
                self(self, depth + 1, branch);
            }
        };
        recurse(recurse, from_depth, root);
    };

    if (forward) {
        run(psi, 0, n_max - 1);
        return best;
    }

    // Each depth-d reversed family is rooted at its own evolved state, so the
    // trees cannot be shared across depths: run one pruned tree per depth and
    // record only its leaves.
    auto run_reversed = [&](const Vector& root, int depth_target) {
        auto recurse = [&](auto&& self, int level, const Vector& state) -> void {
            std::vector<std::pair<double, Vector>> children;
            children.reserve(qp.K());
            for (int k = 0; k < qp.K(); ++k) {
                Vector branch = state;
                qp.apply(k, branch);
                children.emplace_back(num::norm(branch), std::move(branch));
            }
            std::sort(children.begin(), children.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
            for (auto& [nrm, branch] : children) {
                if (level == depth_target - 1) {
                    best[depth_target - 1] = std::max(best[depth_target - 1], nrm);
                    continue;
                }
                if (nrm <= best[depth_target - 1]) continue;
                step(branch);
                self(self, level + 1, branch);
            }
        };
        recurse(recurse, 0, root);
    };

    Vector evolved = psi;
    for (int d = 1; d <= n_max; ++d) {
        run_reversed(evolved, d);
        if (d < n_max) advance(evolved);
    }
    return best;
}

}  // namespace

std::vector<double> max_refined_norms(const Vector& psi, const QuantumPartition& qp,
                                      const ComplexMatrix& u, int n_max,
                                      Ordering ordering) {
    const ComplexMatrix step_mat =
        ordering == Ordering::Forward ? u : u.adjoint();
    return max_norms_impl(
        psi, qp, n_max, ordering,
        [&](Vector& v) { v = num::matvec(step_mat, v); },
        [&](Vector& v) { v = num::matvec(u, v); });
}

std::vector<double> max_refined_norms(const Vector& psi, const QuantumPartition& qp,
                                      const qt::PropagatorAction& u, int n_max,
                                      Ordering ordering) {
    const bool forward = ordering == Ordering::Forward;
    return max_norms_impl(
        psi, qp, n_max, ordering,
        [&](Vector& v) { forward ? u.apply(v) : u.apply_adjoint(v); },
        [&](Vector& v) { u.apply(v); });
}

}  // namespace entlab::qp
