#ifndef ATSP_COST_MODEL_HPP
#define ATSP_COST_MODEL_HPP

#include <cstdint>
#include <random>
#include <string>

namespace atsp {

enum class DistKind { Exp1, Uniform, Truncated };

/// Edge-cost law. Supported families: EXP(1), uniform [0,1], and a linear
/// density 1 + slope*x renormalized to [0, cutoff].
struct CostDistribution {
    DistKind kind = DistKind::Exp1;
    double slope = 0.0;  // truncated only
    double cutoff = 0.0; // truncated only

    static CostDistribution exp1() { return {DistKind::Exp1, 0.0, 0.0}; }
    static CostDistribution uniform() { return {DistKind::Uniform, 0.0, 0.0}; }
    static CostDistribution truncated(double b, double nu);

    /// Parses the CLI/config spec string: "exp1", "uniform", "trunc:b=<b>,nu=<nu>".
    static CostDistribution parse(const std::string& spec);
    std::string to_string() const;

    double cdf(double x) const;
    double quantile(double p) const; // inverse CDF on [0,1)
    double support_max() const;      // +inf for unbounded kinds
};

/// Counter-free deterministic RNG stream. Equal (seed, stream) gives equal
/// sequences; distinct streams are decorrelated through seed scrambling.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit();
    /// Uniform integer in [0, bound).
    std::uint64_t next_below(std::uint64_t bound);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 gen_;
};

double sample_cost(const CostDistribution& dist, RandomSource& rng);

/// Maps x to the exponential scale: y with 1 - e^{-y} = CDF(x).
/// Throws UnboundedTransform when CDF(x) = 1.
double exp_transform(double x, const CostDistribution& dist);

struct ClampedTransform {
    double y;
    bool clamped;
};

/// Batch-safe variant: CDF(x) = 1 clamps y to -ln(ulp) instead of throwing.
ClampedTransform exp_transform_clamped(double x, const CostDistribution& dist);

/// Inverse of exp_transform: x with CDF(x) = 1 - e^{-y}.
double inverse_transform(double y, const CostDistribution& dist);

} // namespace atsp

#endif
