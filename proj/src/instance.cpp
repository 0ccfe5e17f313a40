#include "atsp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "atsp/errors.hpp"

namespace atsp {

Family parse_family(const std::string& s) {
    if (s == "complete")
        return Family::Complete;
    if (s == "out_in_union")
        return Family::OutInUnion;
    if (s == "bipolar")
        return Family::Bipolar;
    throw InvalidFamily("unknown family: " + s);
}

std::string to_string(Family f) {
    switch (f) {
    case Family::Complete:
        return "complete";
    case Family::OutInUnion:
        return "out_in_union";
    case Family::Bipolar:
        return "bipolar";
    }
    return "?";
}

Thresholds Thresholds::compute(std::size_t n, double alpha) {
    const double dn = static_cast<double>(n);
    const double ln = std::log(dn);
    Thresholds th;
    th.epsilon = alpha - 0.5;
    th.gamma_n = ln * ln * ln * ln / dn;
    th.p_low = std::pow(dn, -0.1);
    th.nu_0 = std::pow(dn, 5.0 / 6.0);
    th.nu_1 = 3.0 / th.epsilon;
    th.ell_1 = std::pow(dn, 0.8);
    return th;
}

Instance::Instance(std::size_t n, double alpha, CostDistribution dist, Family family,
                   std::uint64_t seed)
    : n_(n), alpha_(alpha), dist_(dist), family_(family), seed_(seed),
      costs_(n * n, kInfiniteCost) {
    if (n < 2)
        throw Error("instance needs at least 2 vertices");
    if (!(alpha > 0.5) || !(alpha <= 1.0))
        throw InvalidAlpha("alpha must lie in (1/2, 1]");
}

double Instance::cost(std::size_t i, std::size_t j) const {
    if (i == j)
        throw SelfLoopQuery("cost queried for self-loop (" + std::to_string(i + 1) + ")");
    return costs_[i * n_ + j];
}

bool Instance::has_edge(std::size_t i, std::size_t j) const {
    return i != j && std::isfinite(costs_[i * n_ + j]);
}

void Instance::set_cost(std::size_t i, std::size_t j, double c) {
    if (i == j)
        throw SelfLoopQuery("cannot set cost of a self-loop");
    if (!(c >= 0.0) || !std::isfinite(c))
        throw Error("edge cost must be finite and nonnegative");
    costs_[i * n_ + j] = c;
}

void Instance::remove_edge(std::size_t i, std::size_t j) {
    if (i == j)
        throw SelfLoopQuery("cannot remove a self-loop");
    costs_[i * n_ + j] = kInfiniteCost;
}

std::size_t Instance::edge_count() const {
    std::size_t c = 0;
    for (double x : costs_)
        if (std::isfinite(x))
            ++c;
    return c;
}

std::size_t Instance::min_out_degree() const {
    std::size_t best = n_;
    for (std::size_t i = 0; i < n_; ++i) {
        std::size_t d = 0;
        for (std::size_t j = 0; j < n_; ++j)
            if (std::isfinite(costs_[i * n_ + j]))
                ++d;
        best = std::min(best, d);
    }
    return best;
}

std::size_t Instance::min_in_degree() const {
    std::vector<std::size_t> deg(n_, 0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            if (std::isfinite(costs_[i * n_ + j]))
                ++deg[j];
    return *std::min_element(deg.begin(), deg.end());
}

std::size_t Instance::required_degree() const {
    const auto d = static_cast<std::size_t>(std::ceil(alpha_ * static_cast<double>(n_)));
    return std::min(d, n_ - 1);
}

void Instance::check_degrees() {
    const std::size_t req = required_degree();
    degree_valid_ = min_out_degree() >= req && min_in_degree() >= req;
}

namespace {

// draws k distinct values from pool (consumed in place) by partial shuffle
std::vector<std::size_t> draw_distinct(std::vector<std::size_t>& pool, std::size_t k,
                                       RandomSource& rng) {
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t t = 0; t < k; ++t) {
        const std::size_t idx = t + static_cast<std::size_t>(
                                        rng.next_below(pool.size() - t));
        std::swap(pool[t], pool[idx]);
        out.push_back(pool[t]);
    }
    return out;
}

} // namespace

Instance Instance::generate(std::size_t n, double alpha, const CostDistribution& dist,
                            Family family, std::uint64_t seed) {
    if (n < 3)
        throw Error("generate requires n >= 3");
    if (family == Family::Complete && alpha != 1.0)
        throw InvalidAlpha("family=complete requires alpha = 1");

    Instance inst(n, alpha, dist, family, seed);
    RandomSource rng(seed, /*stream=*/0);
    std::vector<std::uint8_t> present(n * n, 0);
    const std::size_t req = inst.required_degree();

    switch (family) {
    case Family::Complete:
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j)
                    present[i * n + j] = 1;
        break;
    case Family::OutInUnion: {
        std::vector<std::size_t> pool;
        pool.reserve(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            pool.clear();
            for (std::size_t j = 0; j < n; ++j)
                if (j != i)
                    pool.push_back(j);
            for (std::size_t j : draw_distinct(pool, req, rng))
                present[i * n + j] = 1;
        }
        for (std::size_t j = 0; j < n; ++j) {
            pool.clear();
            for (std::size_t i = 0; i < n; ++i)
                if (i != j)
                    pool.push_back(i);
            for (std::size_t i : draw_distinct(pool, req, rng))
                present[i * n + j] = 1;
        }
        break;
    }
    case Family::Bipolar: {
        const std::size_t n0 = n / 2; // blocks [0, n0) and [n0, n)
        auto block_begin = [&](std::size_t v) { return v < n0 ? std::size_t{0} : n0; };
        auto block_end = [&](std::size_t v) { return v < n0 ? n0 : n; };
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = block_begin(i); j < block_end(i); ++j)
                if (i != j)
                    present[i * n + j] = 1;
        std::vector<std::size_t> pool;
        for (std::size_t v = 0; v < n; ++v) {
            const std::size_t intra = block_end(v) - block_begin(v) - 1;
            const std::size_t need = req > intra ? req - intra : 0;
            if (need == 0)
                continue;
            // cross-block out-edges
            pool.clear();
            for (std::size_t j = 0; j < n; ++j)
                if (block_begin(j) != block_begin(v))
                    pool.push_back(j);
            for (std::size_t j : draw_distinct(pool, need, rng))
                present[v * n + j] = 1;
            // cross-block in-edges
            pool.clear();
            for (std::size_t i = 0; i < n; ++i)
                if (block_begin(i) != block_begin(v))
                    pool.push_back(i);
            for (std::size_t i : draw_distinct(pool, need, rng))
                present[i * n + v] = 1;
        }
        break;
    }
    }

    // one fresh i.i.d. cost per present edge, in lexicographic edge order
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (present[i * n + j])
                inst.costs_[i * n + j] = sample_cost(dist, rng);

    inst.check_degrees();
    return inst;
}

std::string Instance::serialize() const {
    std::string out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu %.17g %s %s %llu\n", n_, alpha_,
                  to_string(family_).c_str(), dist_.to_string().c_str(),
                  static_cast<unsigned long long>(seed_));
    out += buf;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            if (std::isfinite(costs_[i * n_ + j])) {
                std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", i + 1, j + 1,
                              costs_[i * n_ + j]);
                out += buf;
            }
    return out;
}

void Instance::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot open for writing: " + path);
    f << serialize();
}

Instance Instance::load(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw Error("cannot open for reading: " + path);
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(f, line))
        throw ParseError("empty file", 1);
    ++lineno;
    std::istringstream head(line);
    std::size_t n = 0;
    double alpha = 0.0;
    std::string family_s, dist_s;
    unsigned long long seed = 0;
    if (!(head >> n >> alpha >> family_s >> dist_s >> seed))
        throw ParseError("expected 'n alpha family dist seed'", lineno);

    Family family;
    CostDistribution dist;
    try {
        family = parse_family(family_s);
        dist = CostDistribution::parse(dist_s);
    } catch (const Error& e) {
        throw ParseError(e.what(), lineno);
    }
    if (!(alpha > 0.5) || !(alpha <= 1.0))
        throw ParseError("alpha out of range (1/2, 1]", lineno);
    if (n < 2)
        throw ParseError("n too small", lineno);

    Instance inst(n, alpha, dist, family, seed);
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::istringstream es(line);
        std::size_t i = 0, j = 0;
        double c = 0.0;
        if (!(es >> i >> j >> c))
            throw ParseError("expected 'i j cost'", lineno);
        if (i < 1 || i > n || j < 1 || j > n)
            throw ParseError("vertex index out of range", lineno);
        if (i == j)
            throw ParseError("self-loop edge", lineno);
        if (!(c >= 0.0) || !std::isfinite(c))
            throw ParseError("cost must be finite and nonnegative", lineno);
        inst.costs_[(i - 1) * n + (j - 1)] = c;
    }
    inst.check_degrees(); // contract breach is a validity flag, not fatal
    return inst;
}

} // namespace atsp
