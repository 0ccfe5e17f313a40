#ifndef ATSP_INSTANCE_HPP
#define ATSP_INSTANCE_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "atsp/cost_model.hpp"

namespace atsp {

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

enum class Family { Complete, OutInUnion, Bipolar };

Family parse_family(const std::string& s);
std::string to_string(Family f);

/// Scale-dependent quantities used by the case split and the lemma checks.
struct Thresholds {
    double epsilon; // alpha - 1/2
    double gamma_n; // (ln n)^4 / n
    double p_low;   // n^{-1/10}
    double nu_0;    // n^{5/6}
    double nu_1;    // 3 / epsilon
    double ell_1;   // n^{4/5}

    static Thresholds compute(std::size_t n, double alpha);
};

/// Dense digraph with i.i.d. edge costs. Absent ordered pairs read as
/// kInfiniteCost; self-loops never exist.
class Instance {
public:
    Instance(std::size_t n, double alpha, CostDistribution dist, Family family,
             std::uint64_t seed);

    static Instance generate(std::size_t n, double alpha, const CostDistribution& dist,
                             Family family, std::uint64_t seed);

    /// Cost of ordered pair (i, j); kInfiniteCost when absent. Throws
    /// SelfLoopQuery for i == j.
    double cost(std::size_t i, std::size_t j) const;
    bool has_edge(std::size_t i, std::size_t j) const;

    void set_cost(std::size_t i, std::size_t j, double c);
    void remove_edge(std::size_t i, std::size_t j);

    /// Row i of the dense cost matrix (kInfiniteCost = absent; entry i==j is
    /// always infinite). For hot loops; cost() is the checked accessor.
    const double* row(std::size_t i) const { return costs_.data() + i * n_; }

    std::size_t n() const { return n_; }
    double alpha() const { return alpha_; }
    Family family() const { return family_; }
    const CostDistribution& dist() const { return dist_; }
    std::uint64_t seed() const { return seed_; }

    /// False when a loaded file breaks the minimum-degree contract.
    bool degree_valid() const { return degree_valid_; }

    std::size_t edge_count() const;
    std::size_t min_out_degree() const;
    std::size_t min_in_degree() const;
    /// ceil(alpha*n) capped at n-1 (a vertex has at most n-1 out-neighbors).
    std::size_t required_degree() const;

    Thresholds thresholds() const { return Thresholds::compute(n_, alpha_); }

    void save(const std::string& path) const;
    static Instance load(const std::string& path);

    /// Round-trippable serialized form (also what save() writes).
    std::string serialize() const;

private:
    std::size_t n_;
    double alpha_;
    CostDistribution dist_;
    Family family_;
    std::uint64_t seed_;
    bool degree_valid_ = true;
    std::vector<double> costs_; // n*n row-major, infinity = absent

    void check_degrees();
};

} // namespace atsp

#endif
