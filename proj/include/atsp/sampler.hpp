#ifndef ATSP_SAMPLER_HPP
#define ATSP_SAMPLER_HPP

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "atsp/assignment.hpp"
#include "atsp/instance.hpp"

namespace atsp {

/// Bipartite subgraph on edges (a_i, b_j) with u_i + v_j >= 0 under the
/// normalized optimal duals. Contains every optimal-matching edge.
struct PlusGraph {
    std::size_t n = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<std::uint8_t> member; // n*n row-major
    std::size_t min_left_degree = 0;
    std::size_t min_right_degree = 0;

    bool has(std::size_t i, std::size_t j) const { return member[i * n + j] != 0; }
};

PlusGraph build_plus_graph(const Instance& inst, const Assignment& asg_normalized);

/// Perfect or near-perfect matching of a PlusGraph. When near-perfect,
/// (hole_a, hole_b) are the uncovered left/right vertices.
struct ChainState {
    std::vector<std::ptrdiff_t> match_a; // left -> right, -1 unmatched
    std::vector<std::ptrdiff_t> match_b; // right -> left, -1 unmatched
    std::ptrdiff_t hole_a = -1;
    std::ptrdiff_t hole_b = -1;
    std::uint64_t step = 0;

    bool perfect() const { return hole_a < 0; }
    static ChainState from_assignment(const Assignment& asg);
    bool valid_for(const PlusGraph& g) const;
};

/// One transition of the matching chain: sample an edge uniformly and apply
/// the add/remove/rotate rule.
void chain_step(ChainState& state, const PlusGraph& g, RandomSource& rng);

struct ChainTrace {
    std::uint64_t steps = 0;
    std::uint64_t burnin = 0;
    std::uint64_t perfect_visits = 0;
    std::uint64_t near_visits = 0;
    // cycle structure of the permutation at sampled perfect visits
    std::uint64_t stat_samples = 0;
    double mean_cycles = 0.0;
    double mean_small_mass = 0.0; // vertices on cycles of size <= ell_1
    std::map<std::size_t, std::uint64_t> cycle_count_hist;
    // per-matching visit tallies, only when tally_matchings is set
    std::map<std::vector<std::size_t>, std::uint64_t> perfect_visit_counts;
};

/// Runs the chain for `burnin + steps` transitions, tallying only the last
/// `steps`. Cycle statistics are sampled every `stat_every` perfect visits.
ChainTrace run_chain(const PlusGraph& g, ChainState start, std::uint64_t steps,
                     RandomSource& rng, std::uint64_t burnin = 0,
                     bool tally_matchings = false, std::uint64_t stat_every = 1);

} // namespace atsp

#endif
