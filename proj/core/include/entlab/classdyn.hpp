#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace entlab::cl {

/// Point on the torus T^2 = (R/Z)^2, coordinates in [0,1).
struct TorusPoint {
    double x = 0.0;
    double p = 0.0;
};

/// Integer unimodular hyperbolic matrix [[a,b],[c,d]] acting on T^2.
class ToralAutomorphism {
public:
    ToralAutomorphism(long a, long b, long c, long d);

    static ToralAutomorphism cat() { return {2, 1, 1, 1}; }

    long a() const { return a_; }
    long b() const { return b_; }
    long c() const { return c_; }
    long d() const { return d_; }

    /// Expanding eigenvalue modulus, > 1.
    double lambda_plus() const { return lambda_plus_; }
    /// log(lambda_plus); both the uniform and the maximal expansion rate of
    /// this linear model.
    double log_lambda() const;

    TorusPoint apply(const TorusPoint& pt) const;
    /// t-fold application (t may be negative).
    TorusPoint apply(const TorusPoint& pt, long t) const;

    /// Integer matrix power, entries of A^t (t >= 0).
    std::array<long, 4> power(unsigned t) const;

private:
    long a_, b_, c_, d_;
    double lambda_plus_;
};

/// K half-open equal arcs [k/K, (k+1)/K) of the position circle.
class ArcPartition {
public:
    explicit ArcPartition(int k);

    int K() const { return k_; }
    double dia() const { return 1.0 / k_; }
    double lower(int arc) const { return (double)arc / k_; }
    double upper(int arc) const { return (double)(arc + 1) / k_; }
    /// Index of the arc containing position x (x taken mod 1).
    int index(double x) const;

private:
    int k_;
};

/// Symbol sequence alpha = (alpha_0, ..., alpha_{n-1}), 0-based symbols.
using SymbolSequence = std::vector<int>;

/// Encode a sequence as sum alpha_i * K^(n-1-i); requires K^n < 2^63.
std::uint64_t encode_sequence(const SymbolSequence& alpha, int k);
SymbolSequence decode_sequence(std::uint64_t code, int k, int n);

class InvariantMeasure;
using MeasurePtr = std::shared_ptr<const InvariantMeasure>;

/// Lebesgue, finite periodic-orbit atomic measures, or convex mixtures.
class InvariantMeasure {
public:
    enum class Kind { Lebesgue, PeriodicOrbit, Mixture };

    static MeasurePtr lebesgue();
    /// Uniform atomic measure on a closed orbit.
    static MeasurePtr periodic_orbit(std::vector<TorusPoint> points);
    static MeasurePtr mixture(std::vector<std::pair<double, MeasurePtr>> parts);

    Kind kind() const { return kind_; }
    const std::vector<TorusPoint>& points() const { return points_; }
    const std::vector<std::pair<double, MeasurePtr>>& parts() const { return parts_; }

    std::string to_json() const;
    static MeasurePtr from_json(const std::string& text);

private:
    InvariantMeasure() = default;
    Kind kind_ = Kind::Lebesgue;
    std::vector<TorusPoint> points_;
    std::vector<std::pair<double, MeasurePtr>> parts_;
};

/// mu(E_alpha), E_alpha = E_{alpha_0} ∩ A^{-1}E_{alpha_1} ∩ ...  Exact for
/// atomic measures; stratified-grid estimate with `samples` total points for
/// the Lebesgue component (error O(1/sqrt(samples))).
double cylinder_weight(const InvariantMeasure& mu, const ToralAutomorphism& a,
                       const ArcPartition& p, const SymbolSequence& alpha,
                       long samples = 512 * 512, std::uint64_t seed = 1);

/// All nonzero cylinder weights of depth n at once, keyed by encoded
/// sequence.  One pass over the sample set.
std::unordered_map<std::uint64_t, double> cylinder_weight_table(
    const InvariantMeasure& mu, const ToralAutomorphism& a, const ArcPartition& p,
    int n, long samples = 512 * 512, std::uint64_t seed = 1);

/// K x K table of which one-step transitions arc -> arc are realized by the
/// automorphism (with full momentum fibers attached to each arc).
std::vector<std::vector<bool>> transition_table(const ToralAutomorphism& a,
                                                const ArcPartition& p);

/// Coarse-grained unstable Jacobian over one transition: 1/lambda_plus when
/// the transition set is nonempty, exp(-R) otherwise.
double coarse_jacobian_1(const ToralAutomorphism& a, const ArcPartition& p,
                         int a0, int a1, double big_r);
double coarse_jacobian_1(const std::vector<std::vector<bool>>& transitions,
                         double lambda_plus, int a0, int a1, double big_r);

/// Product of one-step factors along a sequence of length >= 2.
double coarse_jacobian_n(const ToralAutomorphism& a, const ArcPartition& p,
                         const SymbolSequence& alpha, double big_r);

/// |∫ log J^u dmu| = log lambda_plus for any probability measure on this
/// linear model.
double ruelle_bound(const ToralAutomorphism& a);

/// Coarse-grained version: -sum mu(E_{(a0,a1)}) log J^u_1(a0,a1).
double coarse_ruelle_bound(const InvariantMeasure& mu, const ToralAutomorphism& a,
                           const ArcPartition& p, double big_r,
                           long samples = 512 * 512, std::uint64_t seed = 1);

/// Default fallback exponent for forbidden transitions.
double default_big_r(const ToralAutomorphism& a);

/// Closed orbit of the rational point (nx/q, np/q); every rational point is
/// periodic under an integer unimodular matrix.
std::vector<TorusPoint> orbit_of(const ToralAutomorphism& a, long nx, long np, long q);
/// Orbit of a default rational seed point with denominator q (q <= 64).
std::vector<TorusPoint> find_periodic_orbit(const ToralAutomorphism& a, long q);

}  // namespace entlab::cl
