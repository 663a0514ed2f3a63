#include "entlab/eup.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "entlab/eig.hpp"

namespace entlab::eup {

namespace {

void check_resolution(const std::vector<ComplexMatrix>& family, const char* name) {
    if (family.empty()) throw std::invalid_argument("EupInstance: empty partition family");
    const std::size_t dim = family.front().rows();
    ComplexMatrix sum(dim, dim);
    for (const auto& m : family) {
        if (m.rows() != dim || m.cols() != dim)
            throw std::invalid_argument("EupInstance: ragged partition family");
        sum += m.adjoint() * m;
    }
    sum -= ComplexMatrix::identity(dim);
    if (num::max_abs(sum) > 1e-10)
        throw std::invalid_argument(std::string("EupInstance: ") + name +
                                    " does not resolve the identity");
}

}  // namespace

void EupInstance::validate() const {
    check_resolution(pi_family, "pi family");
    check_resolution(tau_family, "tau family");
    if (num::unitarity_defect(u) > 1e-10)
        throw std::invalid_argument("EupInstance: U is not an isometry");
    if (v.size() != pi_family.size() || w.size() != tau_family.size())
        throw std::invalid_argument("EupInstance: weight/family size mismatch");
    for (double x : v)
        if (!(x > 0.0)) throw std::invalid_argument("EupInstance: nonpositive v weight");
    for (double x : w)
        if (!(x > 0.0)) throw std::invalid_argument("EupInstance: nonpositive w weight");
    if (epsilon < 0.0) throw std::invalid_argument("EupInstance: negative epsilon");
}

void to_json(nlohmann::json& j, const EupReport& r) {
    j = nlohmann::json{{"pressure_pi", r.pressure_pi},
                       {"pressure_tau_of_upsi", r.pressure_tau_of_upsi},
                       {"c", r.c},
                       {"rhs", r.rhs},
                       {"slack", r.slack},
                       {"localization_defect", r.localization_defect},
                       {"hypothesis_ok", r.hypothesis_ok},
                       {"c_exhaustive", r.c_exhaustive}};
}

void from_json(const nlohmann::json& j, EupReport& r) {
    j.at("pressure_pi").get_to(r.pressure_pi);
    j.at("pressure_tau_of_upsi").get_to(r.pressure_tau_of_upsi);
    j.at("c").get_to(r.c);
    j.at("rhs").get_to(r.rhs);
    j.at("slack").get_to(r.slack);
    j.at("localization_defect").get_to(r.localization_defect);
    j.at("hypothesis_ok").get_to(r.hypothesis_ok);
    j.at("c_exhaustive").get_to(r.c_exhaustive);
}

double contraction_coefficient(const EupInstance& inst) {
    double c = 0.0;
    for (std::size_t j = 0; j < inst.tau_family.size(); ++j) {
        const ComplexMatrix tu = inst.tau_family[j] * inst.u;
        for (std::size_t k = 0; k < inst.pi_family.size(); ++k) {
            const ComplexMatrix m = tu * (inst.pi_family[k].adjoint() * inst.o);
            c = std::max(c, inst.w[j] * inst.v[k] * num::operator_norm(m));
        }
    }
    return c;
}

double localization_defect(const Vector& psi,
                           const std::vector<ComplexMatrix>& pi_family,
                           const ComplexMatrix& o) {
    double worst = 0.0;
    for (const auto& pi : pi_family) {
        Vector r = num::matvec(pi, psi);
        const Vector or_ = num::matvec(o, r);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= or_[i];
        worst = std::max(worst, num::norm(r));
    }
    return worst;
}

namespace {

// Pressure of one family evaluated on phi, labels being singleton indices.
double family_pressure(const std::vector<ComplexMatrix>& family,
                       const std::vector<double>& weights, const Vector& phi) {
    ent::WeightVector wv;
    ent::PressureWeights pw;
    for (std::size_t k = 0; k < family.size(); ++k) {
        wv.entries.push_back(num::norm_sq(num::matvec(family[k], phi)));
        wv.labels.push_back({(int)k});
        pw.v[{(int)k}] = weights[k];
    }
    return ent::pressure(wv, pw);
}

}  // namespace

EupReport check_eup(const EupInstance& inst, const Vector& psi) {
    inst.validate();
    if (std::abs(num::norm(psi) - 1.0) > 1e-9)
        throw std::invalid_argument("check_eup: psi not normalized");

    EupReport rep;
    rep.localization_defect = localization_defect(psi, inst.pi_family, inst.o);
    rep.hypothesis_ok = rep.localization_defect <= inst.epsilon + 1e-12;

    rep.pressure_pi = family_pressure(inst.pi_family, inst.v, psi);
    rep.pressure_tau_of_upsi =
        family_pressure(inst.tau_family, inst.w, num::matvec(inst.u, psi));

    rep.c = contraction_coefficient(inst);
    double vmax = 0.0, wmax = 0.0;
    for (double x : inst.v) vmax = std::max(vmax, x);
    for (double x : inst.w) wmax = std::max(wmax, x);
    rep.rhs = -2.0 * std::log(rep.c + (double)inst.pi_family.size() * vmax * wmax *
                                          inst.epsilon);
    rep.slack = rep.pressure_pi + rep.pressure_tau_of_upsi - rep.rhs;
    return rep;
}

std::vector<ComplexMatrix> random_partition_of_unity(int count, int dim,
                                                     std::uint64_t seed) {
    if (count < 1 || dim < 1)
        throw std::invalid_argument("random_partition_of_unity: bad shape");
    const int rows = count * dim;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);

    // Random Gaussian matrix, columns orthonormalized (twice, for stability):
    // the dim columns form an isometry C^dim -> C^rows, so the row blocks
    // resolve the identity exactly.
    std::vector<Vector> cols(dim, Vector(rows));
    for (auto& col : cols)
        for (auto& z : col) z = num::cplx(g(rng), g(rng));
    for (int pass = 0; pass < 2; ++pass) {
        for (int c = 0; c < dim; ++c) {
            for (int p = 0; p < c; ++p) {
                const num::cplx overlap = num::dot(cols[p], cols[c]);
                for (int r = 0; r < rows; ++r) cols[c][r] -= overlap * cols[p][r];
            }
            num::normalize(cols[c]);
        }
    }

    std::vector<ComplexMatrix> family(count, ComplexMatrix(dim, dim));
    for (int k = 0; k < count; ++k)
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) family[k](r, c) = cols[c][k * dim + r];
    return family;
}

ent::PressureWeights jacobian_weights(const std::vector<cl::SymbolSequence>& alphas,
                                      const cl::ToralAutomorphism& a,
                                      const cl::ArcPartition& p, double big_r) {
    ent::PressureWeights out;
    for (const auto& alpha : alphas) {
        if (alpha.empty()) throw std::invalid_argument("jacobian_weights: empty sequence");
        if (alpha.size() != alphas.front().size())
            throw std::invalid_argument("jacobian_weights: mixed sequence lengths");
        const double j =
            alpha.size() == 1 ? 1.0 : cl::coarse_jacobian_n(a, p, alpha, big_r);
        out.v[alpha] = 1.0 / std::sqrt(j);
    }
    return out;
}

namespace {

std::vector<cl::SymbolSequence> all_sequences(int k, int n) {
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) total *= (std::uint64_t)k;
    std::vector<cl::SymbolSequence> out;
    out.reserve(total);
    for (std::uint64_t code = 0; code < total; ++code)
        out.push_back(cl::decode_sequence(code, k, n));
    return out;
}

double pressure_at_depth(const Vector& phi, const qp::QuantumPartition& part,
                         const ComplexMatrix& u, int n, qp::Ordering ordering,
                         const ent::PressureWeights& pw) {
    return ent::pressure(
        ent::to_weight_vector(qp::refined_weights(phi, part, u, n, ordering)), pw);
}

}  // namespace

EupReport corollary_instance(const Vector& psi_eigenstate,
                             const qp::QuantumPartition& part, const ComplexMatrix& u,
                             int n_e, const CorollaryOptions& opt) {
    if (n_e < 1) throw std::invalid_argument("corollary_instance: n_E >= 1");
    const int k = part.K();
    std::uint64_t total = 1;
    for (int i = 0; i < n_e; ++i) {
        total *= (std::uint64_t)k;
        if (total > opt.pair_cap)
            throw std::invalid_argument("corollary_instance: K^{n_E} exceeds the pair cap");
    }
    const auto alphas = all_sequences(k, n_e);

    ent::PressureWeights pw;
    if (opt.jacobian) {
        if (!opt.map || !opt.arcs)
            throw std::invalid_argument("corollary_instance: Jacobian weights need the map");
        pw = jacobian_weights(alphas, *opt.map, *opt.arcs, opt.big_r);
    } else {
        for (const auto& alpha : alphas) pw.v[alpha] = 1.0;
    }

    ComplexMatrix u_ne = u;
    for (int t = 1; t < n_e; ++t) u_ne = u * u_ne;
    Vector evolved = psi_eigenstate;
    for (int t = 0; t < n_e; ++t) evolved = num::matvec(u, evolved);

    EupReport rep;
    rep.pressure_pi =
        pressure_at_depth(psi_eigenstate, part, u, n_e, qp::Ordering::Reversed, pw);
    rep.pressure_tau_of_upsi =
        pressure_at_depth(evolved, part, u, n_e, qp::Ordering::Forward, pw);

    auto weight_of = [&](std::uint64_t code) { return pw.v.at(alphas[(std::size_t)code]); };
    auto pair_value = [&](std::uint64_t j_code, std::uint64_t k_code) {
        const ComplexMatrix tau =
            qp::refined_operator(part, u, alphas[(std::size_t)j_code], qp::Ordering::Forward);
        const ComplexMatrix pi =
            qp::refined_operator(part, u, alphas[(std::size_t)k_code], qp::Ordering::Reversed);
        return weight_of(j_code) * weight_of(k_code) *
               num::operator_norm(tau * (u_ne * pi.adjoint()));
    };

    double c = 0.0;
    if (total * total <= opt.pair_cap) {
        for (std::uint64_t j = 0; j < total; ++j)
            for (std::uint64_t kk = 0; kk < total; ++kk) c = std::max(c, pair_value(j, kk));
        rep.c_exhaustive = true;
    } else {
        std::mt19937_64 rng(opt.seed);
        std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
        for (std::uint64_t s = 0; s < opt.sample_pairs; ++s)
            c = std::max(c, pair_value(pick(rng), pick(rng)));
        rep.c_exhaustive = false;
    }
    rep.c = c;
    rep.rhs = -2.0 * std::log(c);
    rep.slack = rep.pressure_pi + rep.pressure_tau_of_upsi - rep.rhs;
    rep.localization_defect = 0.0;
    rep.hypothesis_ok = true;
    return rep;
}

double subadditivity_check(const Vector& psi, const qp::QuantumPartition& part,
                           const ComplexMatrix& u, int n_o, int n,
                           const std::function<ent::PressureWeights(int)>& weight_for) {
    if (n_o < 0 || n < 0) throw std::invalid_argument("subadditivity_check: negative depth");
    auto p_of = [&](int depth) {
        if (depth == 0) return 0.0;
        return pressure_at_depth(psi, part, u, depth, qp::Ordering::Forward,
                                 weight_for(depth));
    };
    return p_of(n_o + n) - p_of(n_o) - p_of(n);
}

}  // namespace entlab::eup
