#include "atsp/cost_model.hpp"

#include <cfloat>
#include <cmath>
#include <cstdio>

#include "atsp/errors.hpp"

namespace atsp {

CostDistribution CostDistribution::truncated(double b, double nu) {
    if (!(nu > 0.0))
        throw Error("truncated distribution needs cutoff nu > 0");
    if (1.0 + b * nu < 0.0)
        throw Error("truncated density 1 + b*x is negative on [0, nu]");
    return {DistKind::Truncated, b, nu};
}

CostDistribution CostDistribution::parse(const std::string& spec) {
    if (spec == "exp1")
        return exp1();
    if (spec == "uniform")
        return uniform();
    double b = 0.0, nu = 0.0;
    if (std::sscanf(spec.c_str(), "trunc:b=%lf,nu=%lf", &b, &nu) == 2)
        return truncated(b, nu);
    throw Error("unknown distribution spec: " + spec);
}

std::string CostDistribution::to_string() const {
    switch (kind) {
    case DistKind::Exp1:
        return "exp1";
    case DistKind::Uniform:
        return "uniform";
    case DistKind::Truncated: {
        char buf[64];
        std::snprintf(buf, sizeof buf, "trunc:b=%g,nu=%g", slope, cutoff);
        return buf;
    }
    }
    return "?";
}

namespace {
// normalizing mass of the linear density on [0, nu]
double trunc_mass(const CostDistribution& d) {
    return d.cutoff + 0.5 * d.slope * d.cutoff * d.cutoff;
}
} // namespace

double CostDistribution::cdf(double x) const {
    if (x <= 0.0)
        return 0.0;
    switch (kind) {
    case DistKind::Exp1:
        return -std::expm1(-x);
    case DistKind::Uniform:
        return x >= 1.0 ? 1.0 : x;
    case DistKind::Truncated: {
        if (x >= cutoff)
            return 1.0;
        return (x + 0.5 * slope * x * x) / trunc_mass(*this);
    }
    }
    return 0.0;
}

double CostDistribution::quantile(double p) const {
    switch (kind) {
    case DistKind::Exp1:
        return -std::log1p(-p);
    case DistKind::Uniform:
        return p;
    case DistKind::Truncated: {
        const double m = p * trunc_mass(*this);
        if (slope == 0.0)
            return m;
        // solve (b/2) x^2 + x - m = 0 for the root in [0, cutoff]
        double x = (-1.0 + std::sqrt(1.0 + 2.0 * slope * m)) / slope;
        if (x < 0.0)
            x = 0.0;
        if (x > cutoff)
            x = cutoff;
        return x;
    }
    }
    return 0.0;
}

double CostDistribution::support_max() const {
    switch (kind) {
    case DistKind::Exp1:
        return std::numeric_limits<double>::infinity();
    case DistKind::Uniform:
        return 1.0;
    case DistKind::Truncated:
        return cutoff;
    }
    return 0.0;
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
} // namespace

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream),
      gen_(splitmix64(seed) ^ splitmix64(splitmix64(stream) + 0x6a09e667f3bcc909ULL)) {}

std::uint64_t RandomSource::next_u64() { return gen_(); }

double RandomSource::next_unit() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomSource::next_below(std::uint64_t bound) {
    // rejection sampling, no modulo bias
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
        x = gen_();
    } while (x >= limit);
    return x % bound;
}

double sample_cost(const CostDistribution& dist, RandomSource& rng) {
    return dist.quantile(rng.next_unit());
}

double exp_transform(double x, const CostDistribution& dist) {
    const double p = dist.cdf(x);
    if (p >= 1.0)
        throw UnboundedTransform("CDF(x) = 1, exponential image unbounded");
    if (dist.kind == DistKind::Exp1)
        return x; // identity by construction
    return -std::log1p(-p);
}

ClampedTransform exp_transform_clamped(double x, const CostDistribution& dist) {
    const double p = dist.cdf(x);
    if (p >= 1.0)
        return {-std::log(DBL_EPSILON), true};
    if (dist.kind == DistKind::Exp1)
        return {x, false};
    return {-std::log1p(-p), false};
}

double inverse_transform(double y, const CostDistribution& dist) {
    if (dist.kind == DistKind::Exp1)
        return y;
    return dist.quantile(-std::expm1(-y));
}

} // namespace atsp
