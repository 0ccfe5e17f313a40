#include "atsp/sampler.hpp"

#include <algorithm>

#include "atsp/errors.hpp"

namespace atsp {

PlusGraph build_plus_graph(const Instance& inst, const Assignment& asg) {
    const std::size_t n = inst.n();
    PlusGraph g;
    g.n = n;
    g.member.assign(n * n, 0);
    std::vector<std::size_t> ldeg(n, 0), rdeg(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (inst.has_edge(i, j) && asg.u[i] + asg.v[j] >= 0.0) {
                g.member[i * n + j] = 1;
                g.edges.emplace_back(i, j);
                ++ldeg[i];
                ++rdeg[j];
            }
    g.min_left_degree = *std::min_element(ldeg.begin(), ldeg.end());
    g.min_right_degree = *std::min_element(rdeg.begin(), rdeg.end());
    return g;
}

ChainState ChainState::from_assignment(const Assignment& asg) {
    ChainState st;
    const std::size_t n = asg.phi.size();
    st.match_a.assign(n, -1);
    st.match_b.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        st.match_a[i] = static_cast<std::ptrdiff_t>(asg.phi[i]);
        st.match_b[asg.phi[i]] = static_cast<std::ptrdiff_t>(i);
    }
    return st;
}

bool ChainState::valid_for(const PlusGraph& g) const {
    const std::size_t n = g.n;
    if (match_a.size() != n || match_b.size() != n)
        return false;
    std::size_t size = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (match_a[i] < 0)
            continue;
        const auto j = static_cast<std::size_t>(match_a[i]);
        if (j >= n || match_b[j] != static_cast<std::ptrdiff_t>(i) || !g.has(i, j))
            return false;
        ++size;
    }
    if (perfect())
        return size == n && hole_b < 0;
    return size == n - 1 && hole_a >= 0 && hole_b >= 0 &&
           match_a[static_cast<std::size_t>(hole_a)] < 0 &&
           match_b[static_cast<std::size_t>(hole_b)] < 0;
}

void chain_step(ChainState& state, const PlusGraph& g, RandomSource& rng) {
    const auto& e = g.edges[rng.next_below(g.edges.size())];
    const auto x = static_cast<std::ptrdiff_t>(e.first);
    const auto y = static_cast<std::ptrdiff_t>(e.second);
    ++state.step;

    if (!state.perfect()) {
        if (x == state.hole_a && y == state.hole_b) {
            state.match_a[e.first] = y;
            state.match_b[e.second] = x;
            state.hole_a = state.hole_b = -1;
        } else if (x == state.hole_a && y != state.hole_b) {
            // rotate: displace the edge currently covering y
            const std::ptrdiff_t xp = state.match_b[e.second];
            state.match_a[static_cast<std::size_t>(xp)] = -1;
            state.match_a[e.first] = y;
            state.match_b[e.second] = x;
            state.hole_a = xp;
        } else if (x != state.hole_a && y == state.hole_b) {
            const std::ptrdiff_t yp = state.match_a[e.first];
            state.match_b[static_cast<std::size_t>(yp)] = -1;
            state.match_a[e.first] = y;
            state.match_b[e.second] = x;
            state.hole_b = yp;
        }
        // otherwise unchanged
    } else {
        if (state.match_a[e.first] == y) {
            state.match_a[e.first] = -1;
            state.match_b[e.second] = -1;
            state.hole_a = x;
            state.hole_b = y;
        }
        // otherwise unchanged
    }
}

namespace {

// cycle count and small-cycle vertex mass of the permutation i -> match_a[i]
void perfect_cycle_stats(const ChainState& st, double ell_1, std::size_t& cycles,
                         std::size_t& small_mass) {
    const std::size_t n = st.match_a.size();
    std::vector<char> seen(n, 0);
    cycles = 0;
    small_mass = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s])
            continue;
        std::size_t len = 0;
        for (std::size_t v = s; !seen[v]; v = static_cast<std::size_t>(st.match_a[v])) {
            seen[v] = 1;
            ++len;
        }
        ++cycles;
        if (static_cast<double>(len) <= ell_1)
            small_mass += len;
    }
}

} // namespace

ChainTrace run_chain(const PlusGraph& g, ChainState start, std::uint64_t steps,
                     RandomSource& rng, std::uint64_t burnin, bool tally_matchings,
                     std::uint64_t stat_every) {
    if (g.edges.empty())
        throw Error("plus graph has no edges");
    if (!start.valid_for(g))
        throw Error("start state invalid for this plus graph");

    ChainTrace trace;
    trace.steps = steps;
    trace.burnin = burnin;
    const double ell_1 = Thresholds::compute(g.n, 1.0).ell_1;

    for (std::uint64_t t = 0; t < burnin; ++t)
        chain_step(start, g, rng);

    double sum_cycles = 0.0, sum_small = 0.0;
    std::uint64_t perfect_seen = 0;
    for (std::uint64_t t = 0; t < steps; ++t) {
        chain_step(start, g, rng);
        if (start.perfect()) {
            ++trace.perfect_visits;
            ++perfect_seen;
            if (stat_every > 0 && perfect_seen % stat_every == 0) {
                std::size_t cycles = 0, small = 0;
                perfect_cycle_stats(start, ell_1, cycles, small);
                ++trace.stat_samples;
                sum_cycles += static_cast<double>(cycles);
                sum_small += static_cast<double>(small);
                ++trace.cycle_count_hist[cycles];
            }
            if (tally_matchings) {
                std::vector<std::size_t> key(g.n);
                for (std::size_t i = 0; i < g.n; ++i)
                    key[i] = static_cast<std::size_t>(start.match_a[i]);
                ++trace.perfect_visit_counts[key];
            }
        } else {
            ++trace.near_visits;
        }
    }
    if (trace.stat_samples > 0) {
        trace.mean_cycles = sum_cycles / static_cast<double>(trace.stat_samples);
        trace.mean_small_mass = sum_small / static_cast<double>(trace.stat_samples);
    }
    return trace;
}

} // namespace atsp
