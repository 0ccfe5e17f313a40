#include "atsp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "atsp/errors.hpp"

namespace atsp {

OracleResult exhaustive_atsp(const Instance& inst) {
    const std::size_t n = inst.n();
    if (n > 10)
        throw TooLarge("exhaustive_atsp limited to n <= 10");
    OracleResult res;
    res.method = OracleMethod::Exhaustive;
    res.value = kInfiniteCost;

    // fix vertex 0 first; permute the rest
    std::vector<std::size_t> rest(n - 1);
    std::iota(rest.begin(), rest.end(), 1);
    do {
        double total = 0.0;
        bool ok = true;
        std::size_t prev = 0;
        for (std::size_t v : rest) {
            if (!inst.has_edge(prev, v)) {
                ok = false;
                break;
            }
            total += inst.cost(prev, v);
            prev = v;
        }
        if (ok && inst.has_edge(prev, 0))
            total += inst.cost(prev, 0);
        else
            ok = false;
        if (ok && total < res.value) {
            res.value = total;
            res.tour.assign(1, 0);
            res.tour.insert(res.tour.end(), rest.begin(), rest.end());
        }
    } while (std::next_permutation(rest.begin(), rest.end()));
    return res;
}

OracleResult held_karp(const Instance& inst) {
    const std::size_t n = inst.n();
    if (n > 16)
        throw TooLarge("held_karp limited to n <= 16");
    OracleResult res;
    res.method = OracleMethod::HeldKarp;

    // dp[S][v]: min cost of a path from 0 through set S (subset of 1..n-1)
    // ending at v; saturating +inf propagation
    const std::size_t full = std::size_t{1} << (n - 1);
    std::vector<double> dp(full * (n - 1), kInfiniteCost);
    std::vector<std::int8_t> parent(full * (n - 1), -1);
    auto at = [&](std::size_t S, std::size_t v) -> double& {
        return dp[S * (n - 1) + (v - 1)];
    };

    for (std::size_t v = 1; v < n; ++v)
        if (inst.has_edge(0, v))
            at(std::size_t{1} << (v - 1), v) = inst.cost(0, v);

    for (std::size_t S = 1; S < full; ++S) {
        for (std::size_t v = 1; v < n; ++v) {
            const std::size_t bit = std::size_t{1} << (v - 1);
            if (!(S & bit))
                continue;
            const double cur = at(S, v);
            if (!std::isfinite(cur))
                continue;
            for (std::size_t w = 1; w < n; ++w) {
                const std::size_t wbit = std::size_t{1} << (w - 1);
                if ((S & wbit) || !inst.has_edge(v, w))
                    continue;
                const double cand = cur + inst.cost(v, w);
                if (cand < at(S | wbit, w)) {
                    at(S | wbit, w) = cand;
                    parent[(S | wbit) * (n - 1) + (w - 1)] = static_cast<std::int8_t>(v);
                }
            }
        }
    }

    res.value = kInfiniteCost;
    std::size_t best_end = 0;
    for (std::size_t v = 1; v < n; ++v) {
        const double tail = at(full - 1, v);
        if (std::isfinite(tail) && inst.has_edge(v, 0)) {
            const double total = tail + inst.cost(v, 0);
            if (total < res.value) {
                res.value = total;
                best_end = v;
            }
        }
    }
    if (std::isfinite(res.value)) {
        std::vector<std::size_t> rev;
        std::size_t S = full - 1, v = best_end;
        while (v != 0) {
            rev.push_back(v);
            const std::int8_t p = parent[S * (n - 1) + (v - 1)];
            S &= ~(std::size_t{1} << (v - 1));
            v = p < 0 ? 0 : static_cast<std::size_t>(p);
        }
        res.tour.assign(1, 0);
        res.tour.insert(res.tour.end(), rev.rbegin(), rev.rend());
    }
    return res;
}

} // namespace atsp
