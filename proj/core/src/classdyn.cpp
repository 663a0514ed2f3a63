#include "entlab/classdyn.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace entlab::cl {

namespace {

double mod1(double x) {
    double m = x - std::floor(x);
    if (m >= 1.0) m -= 1.0;
    if (m < 0.0) m += 1.0;
    return m;
}

long mod(long x, long q) {
    long m = x % q;
    return m < 0 ? m + q : m;
}

}  // namespace

ToralAutomorphism::ToralAutomorphism(long a, long b, long c, long d)
    : a_(a), b_(b), c_(c), d_(d) {
    if (a * d - b * c != 1)
        throw std::invalid_argument("ToralAutomorphism: determinant must be 1");
    const long tr = a + d;
    if (tr * tr <= 4)
        throw std::invalid_argument("ToralAutomorphism: |trace| must exceed 2 (hyperbolic)");
    const double t = std::abs((double)tr);
    lambda_plus_ = (t + std::sqrt(t * t - 4.0)) / 2.0;
}

double ToralAutomorphism::log_lambda() const { return std::log(lambda_plus_); }

TorusPoint ToralAutomorphism::apply(const TorusPoint& pt) const {
    return {mod1(a_ * pt.x + b_ * pt.p), mod1(c_ * pt.x + d_ * pt.p)};
}

TorusPoint ToralAutomorphism::apply(const TorusPoint& pt, long t) const {
    TorusPoint cur = pt;
    if (t >= 0) {
        for (long i = 0; i < t; ++i) cur = apply(cur);
    } else {
        // A^{-1} = [[d,-b],[-c,a]] for det 1.
        for (long i = 0; i < -t; ++i)
            cur = {mod1(d_ * cur.x - b_ * cur.p), mod1(-c_ * cur.x + a_ * cur.p)};
    }
    return cur;
}

std::array<long, 4> ToralAutomorphism::power(unsigned t) const {
    std::array<long, 4> m = {1, 0, 0, 1};
    for (unsigned i = 0; i < t; ++i) {
        m = {m[0] * a_ + m[1] * c_, m[0] * b_ + m[1] * d_,
             m[2] * a_ + m[3] * c_, m[2] * b_ + m[3] * d_};
    }
    return m;
}

ArcPartition::ArcPartition(int k) : k_(k) {
    if (k < 1) throw std::invalid_argument("ArcPartition: K must be >= 1");
}

int ArcPartition::index(double x) const {
    const double m = mod1(x);
    int i = (int)std::floor(m * k_);
    if (i >= k_) i = k_ - 1;
    if (i < 0) i = 0;
    return i;
}

std::uint64_t encode_sequence(const SymbolSequence& alpha, int k) {
    std::uint64_t code = 0;
    for (int s : alpha) {
        if (s < 0 || s >= k) throw std::invalid_argument("symbol out of range");
        code = code * (std::uint64_t)k + (std::uint64_t)s;
    }
    return code;
}

SymbolSequence decode_sequence(std::uint64_t code, int k, int n) {
    SymbolSequence alpha(n);
    for (int i = n - 1; i >= 0; --i) {
        alpha[i] = (int)(code % (std::uint64_t)k);
        code /= (std::uint64_t)k;
    }
    return alpha;
}

MeasurePtr InvariantMeasure::lebesgue() {
    auto m = std::shared_ptr<InvariantMeasure>(new InvariantMeasure());
    m->kind_ = Kind::Lebesgue;
    return m;
}

MeasurePtr InvariantMeasure::periodic_orbit(std::vector<TorusPoint> points) {
    if (points.empty()) throw std::invalid_argument("periodic orbit needs points");
    auto m = std::shared_ptr<InvariantMeasure>(new InvariantMeasure());
    m->kind_ = Kind::PeriodicOrbit;
    m->points_ = std::move(points);
    return m;
}

MeasurePtr InvariantMeasure::mixture(std::vector<std::pair<double, MeasurePtr>> parts) {
    double total = 0.0;
    for (const auto& [w, comp] : parts) {
        if (w <= 0.0 || !comp) throw std::invalid_argument("mixture weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("mixture weights must sum to 1");
    auto m = std::shared_ptr<InvariantMeasure>(new InvariantMeasure());
    m->kind_ = Kind::Mixture;
    m->parts_ = std::move(parts);
    return m;
}

namespace {

nlohmann::json measure_json(const InvariantMeasure& mu) {
    nlohmann::json j;
    switch (mu.kind()) {
        case InvariantMeasure::Kind::Lebesgue:
            j["kind"] = "lebesgue";
            break;
        case InvariantMeasure::Kind::PeriodicOrbit: {
            j["kind"] = "periodic_orbit";
            auto pts = nlohmann::json::array();
            for (const auto& p : mu.points()) pts.push_back({p.x, p.p});
            j["points"] = pts;
            break;
        }
        case InvariantMeasure::Kind::Mixture: {
            j["kind"] = "mixture";
            auto parts = nlohmann::json::array();
            for (const auto& [w, comp] : mu.parts())
                parts.push_back({w, measure_json(*comp)});
            j["parts"] = parts;
            break;
        }
    }
    return j;
}

MeasurePtr measure_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "lebesgue") return InvariantMeasure::lebesgue();
    if (kind == "periodic_orbit") {
        std::vector<TorusPoint> pts;
        for (const auto& p : j.at("points"))
            pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        return InvariantMeasure::periodic_orbit(std::move(pts));
    }
    if (kind == "mixture") {
        std::vector<std::pair<double, MeasurePtr>> parts;
        for (const auto& p : j.at("parts"))
            parts.emplace_back(p.at(0).get<double>(), measure_from_json(p.at(1)));
        return InvariantMeasure::mixture(std::move(parts));
    }
    throw std::invalid_argument("unknown measure kind: " + kind);
}

/// Visits the stratified Lebesgue sample set; cb receives each point with
/// weight 1/samples.
template <class F>
void for_each_lebesgue_sample(long samples, std::uint64_t seed, F&& cb) {
    const long g = std::max(1L, (long)std::llround(std::sqrt((double)samples)));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double w = 1.0 / ((double)g * (double)g);
    for (long i = 0; i < g; ++i)
        for (long j = 0; j < g; ++j) {
            // Jitter breaks the alignment of the lattice with the integer map.
            const TorusPoint pt{(i + unit(rng)) / g, (j + unit(rng)) / g};
            cb(pt, w);
        }
}

bool orbit_point_in_cylinder(const ToralAutomorphism& a, const ArcPartition& p,
                             const SymbolSequence& alpha, TorusPoint pt) {
    for (std::size_t t = 0; t < alpha.size(); ++t) {
        if (p.index(pt.x) != alpha[t]) return false;
        if (t + 1 < alpha.size()) pt = a.apply(pt);
    }
    return true;
}

}  // namespace

std::string InvariantMeasure::to_json() const { return measure_json(*this).dump(); }

MeasurePtr InvariantMeasure::from_json(const std::string& text) {
    return measure_from_json(nlohmann::json::parse(text));
}

double cylinder_weight(const InvariantMeasure& mu, const ToralAutomorphism& a,
                       const ArcPartition& p, const SymbolSequence& alpha,
                       long samples, std::uint64_t seed) {
    switch (mu.kind()) {
        case InvariantMeasure::Kind::PeriodicOrbit: {
            double hit = 0.0;
            for (const auto& pt : mu.points())
                if (orbit_point_in_cylinder(a, p, alpha, pt)) hit += 1.0;
            return hit / (double)mu.points().size();
        }
        case InvariantMeasure::Kind::Mixture: {
            double w = 0.0;
            for (const auto& [coef, comp] : mu.parts())
                w += coef * cylinder_weight(*comp, a, p, alpha, samples, seed);
            return w;
        }
        case InvariantMeasure::Kind::Lebesgue: {
            if (samples < 1) throw std::invalid_argument("samples must be >= 1");
            double acc = 0.0;
            for_each_lebesgue_sample(samples, seed, [&](const TorusPoint& pt, double w) {
                if (orbit_point_in_cylinder(a, p, alpha, pt)) acc += w;
            });
            return acc;
        }
    }
    return 0.0;
}

std::unordered_map<std::uint64_t, double> cylinder_weight_table(
    const InvariantMeasure& mu, const ToralAutomorphism& a, const ArcPartition& p,
    int n, long samples, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("depth must be >= 1");
    std::unordered_map<std::uint64_t, double> table;
    auto code_of = [&](TorusPoint pt) {
        std::uint64_t code = 0;
        for (int t = 0; t < n; ++t) {
            code = code * (std::uint64_t)p.K() + (std::uint64_t)p.index(pt.x);
            if (t + 1 < n) pt = a.apply(pt);
        }
        return code;
    };
    switch (mu.kind()) {
        case InvariantMeasure::Kind::PeriodicOrbit: {
            const double w = 1.0 / (double)mu.points().size();
            for (const auto& pt : mu.points()) table[code_of(pt)] += w;
            break;
        }
        case InvariantMeasure::Kind::Mixture: {
            for (const auto& [coef, comp] : mu.parts()) {
                auto sub = cylinder_weight_table(*comp, a, p, n, samples, seed);
                for (const auto& [code, w] : sub) table[code] += coef * w;
            }
            break;
        }
        case InvariantMeasure::Kind::Lebesgue: {
            for_each_lebesgue_sample(samples, seed, [&](const TorusPoint& pt, double w) {
                table[code_of(pt)] += w;
            });
            break;
        }
    }
    return table;
}

std::vector<std::vector<bool>> transition_table(const ToralAutomorphism& a,
                                                const ArcPartition& p) {
    const int k = p.K();
    std::vector<std::vector<bool>> t(k, std::vector<bool>(k, false));
    // Position image a*x + b*p mod 1 sweeps the whole circle over a full
    // momentum fiber whenever b != 0, which hyperbolicity forces here
    // (b = 0 with det 1 gives |trace| = 2).  Kept explicit for clarity.
    if (a.b() != 0) {
        for (auto& row : t) row.assign(k, true);
        return t;
    }
    for (int a0 = 0; a0 < k; ++a0) {
        // b == 0: image of arc a0 is the interval a*[l,r) mod 1; march it in
        // sub-arc steps.
        const int steps = 64 * std::abs((int)a.a()) * k;
        for (int s = 0; s < steps; ++s) {
            const double x = p.lower(a0) + (s + 0.5) * (p.dia() / steps);
            t[a0][p.index(a.a() * x)] = true;
        }
    }
    return t;
}

double coarse_jacobian_1(const std::vector<std::vector<bool>>& transitions,
                         double lambda_plus, int a0, int a1, double big_r) {
    if (big_r <= 0.0) throw std::invalid_argument("R must be positive");
    if (a0 < 0 || a1 < 0 || a0 >= (int)transitions.size() || a1 >= (int)transitions.size())
        throw std::invalid_argument("symbol out of range");
    return transitions[a0][a1] ? 1.0 / lambda_plus : std::exp(-big_r);
}

double coarse_jacobian_1(const ToralAutomorphism& a, const ArcPartition& p,
                         int a0, int a1, double big_r) {
    return coarse_jacobian_1(transition_table(a, p), a.lambda_plus(), a0, a1, big_r);
}

double coarse_jacobian_n(const ToralAutomorphism& a, const ArcPartition& p,
                         const SymbolSequence& alpha, double big_r) {
    if (alpha.size() < 2)
        throw std::invalid_argument("coarse_jacobian_n needs |alpha| >= 2");
    const auto t = transition_table(a, p);
    double j = 1.0;
    for (std::size_t i = 0; i + 1 < alpha.size(); ++i)
        j *= coarse_jacobian_1(t, a.lambda_plus(), alpha[i], alpha[i + 1], big_r);
    return j;
}

double ruelle_bound(const ToralAutomorphism& a) { return a.log_lambda(); }

double coarse_ruelle_bound(const InvariantMeasure& mu, const ToralAutomorphism& a,
                           const ArcPartition& p, double big_r,
                           long samples, std::uint64_t seed) {
    const auto table = cylinder_weight_table(mu, a, p, 2, samples, seed);
    const auto trans = transition_table(a, p);
    double s = 0.0;
    for (const auto& [code, w] : table) {
        const auto alpha = decode_sequence(code, p.K(), 2);
        s += w * std::log(coarse_jacobian_1(trans, a.lambda_plus(), alpha[0], alpha[1], big_r));
    }
    return -s;
}

double default_big_r(const ToralAutomorphism& a) { return 20.0 * a.log_lambda(); }

std::vector<TorusPoint> orbit_of(const ToralAutomorphism& a, long nx, long np, long q) {
    if (q < 1) throw std::invalid_argument("q must be >= 1");
    nx = mod(nx, q);
    np = mod(np, q);
    std::vector<TorusPoint> orbit;
    long cx = nx, cp = np;
    do {
        orbit.push_back({(double)cx / q, (double)cp / q});
        const long tx = mod(a.a() * cx + a.b() * cp, q);
        cp = mod(a.c() * cx + a.d() * cp, q);
        cx = tx;
    } while (!(cx == nx && cp == np));
    return orbit;
}

std::vector<TorusPoint> find_periodic_orbit(const ToralAutomorphism& a, long q) {
    if (q < 1 || q > 64)
        throw std::invalid_argument("periodic orbits are enumerated for 1 <= q <= 64");
    return orbit_of(a, 1 % q, 2 % q, q);
}

}  // namespace entlab::cl
