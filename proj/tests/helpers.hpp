#ifndef ATSP_TEST_HELPERS_HPP
#define ATSP_TEST_HELPERS_HPP

#include <cstddef>
#include <vector>

#include "atsp/instance.hpp"
#include "atsp/sampler.hpp"

namespace atsp_test {

// The shared 4-vertex complete instance used across patching/oracle tests:
// AP optimum 1.0 on (1->2, 2->1, 3->4, 4->3); best patch delta 0.7; tour 1.7.
inline atsp::Instance shared_four_vertex() {
    atsp::Instance inst(4, 1.0, atsp::CostDistribution::exp1(), atsp::Family::Complete, 0);
    inst.set_cost(0, 1, 0.1);
    inst.set_cost(1, 0, 0.2);
    inst.set_cost(2, 3, 0.3);
    inst.set_cost(3, 2, 0.4);
    inst.set_cost(0, 2, 0.9);
    inst.set_cost(2, 0, 0.8);
    inst.set_cost(0, 3, 0.5);
    inst.set_cost(3, 0, 0.6);
    inst.set_cost(1, 2, 0.7);
    inst.set_cost(2, 1, 1.0);
    inst.set_cost(1, 3, 1.1);
    inst.set_cost(3, 1, 1.2);
    return inst;
}

// The 3-vertex example: optimum 10 via the cycle 1->2->3->1.
inline atsp::Instance three_vertex() {
    atsp::Instance inst(3, 1.0, atsp::CostDistribution::exp1(), atsp::Family::Complete, 0);
    inst.set_cost(0, 1, 1.0);
    inst.set_cost(0, 2, 4.0);
    inst.set_cost(1, 0, 2.0);
    inst.set_cost(1, 2, 6.0);
    inst.set_cost(2, 0, 3.0);
    inst.set_cost(2, 1, 5.0);
    return inst;
}

// independent oracle: all perfect matchings of a bipartite PlusGraph, as
// left-to-right permutations, by exhaustive recursion
inline void enumerate_perfect_matchings_rec(const atsp::PlusGraph& g, std::size_t i,
                                            std::vector<std::size_t>& phi,
                                            std::vector<char>& used,
                                            std::vector<std::vector<std::size_t>>& out,
                                            std::size_t limit) {
    if (out.size() >= limit)
        return;
    if (i == g.n) {
        out.push_back(phi);
        return;
    }
    for (std::size_t j = 0; j < g.n; ++j)
        if (!used[j] && g.has(i, j)) {
            used[j] = 1;
            phi[i] = j;
            enumerate_perfect_matchings_rec(g, i + 1, phi, used, out, limit);
            used[j] = 0;
        }
}

inline std::vector<std::vector<std::size_t>>
enumerate_perfect_matchings(const atsp::PlusGraph& g, std::size_t limit = 1000000) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> phi(g.n, 0);
    std::vector<char> used(g.n, 0);
    enumerate_perfect_matchings_rec(g, 0, phi, used, out, limit);
    return out;
}

} // namespace atsp_test

#endif
