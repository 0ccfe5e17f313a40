#include <algorithm>
#include <cmath>
#include <numeric>

#include <doctest.h>

#include "atsp/assignment.hpp"
#include "atsp/sampler.hpp"
#include "helpers.hpp"

using namespace atsp;

namespace {

PlusGraph complete_bipartite(std::size_t n) {
    PlusGraph g;
    g.n = n;
    g.member.assign(n * n, 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            g.edges.emplace_back(i, j);
    g.min_left_degree = g.min_right_degree = n;
    return g;
}

ChainState identity_state(std::size_t n) {
    ChainState st;
    st.match_a.resize(n);
    st.match_b.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        st.match_a[i] = st.match_b[i] = static_cast<std::ptrdiff_t>(i);
    return st;
}

} // namespace

TEST_CASE("plus graph contains the optimal matching") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto inst = Instance::generate(12, 0.8, CostDistribution::exp1(),
                                             Family::OutInUnion, seed);
        auto asg = solve_ap(inst);
        normalize_duals(asg, 0);
        const auto g = build_plus_graph(inst, asg);
        REQUIRE(g.n == 12);
        for (std::size_t i = 0; i < g.n; ++i)
            CHECK(g.has(i, asg.phi[i]));
        CHECK(g.min_left_degree >= 1);
        CHECK(g.min_right_degree >= 1);
        // edge list and membership matrix agree
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < g.n; ++i)
            for (std::size_t j = 0; j < g.n; ++j)
                if (g.has(i, j)) {
                    ++cnt;
                    CHECK(inst.has_edge(i, j));
                    CHECK(asg.u[i] + asg.v[j] >= -1e-9);
                }
        CHECK(cnt == g.edges.size());
    }

    // exhaustive enumeration is only tractable on small graphs (n! worst case)
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto inst = Instance::generate(6, 0.8, CostDistribution::exp1(),
                                             Family::OutInUnion, 30 + seed);
        auto asg = solve_ap(inst);
        normalize_duals(asg, 0);
        const auto g = build_plus_graph(inst, asg);
        const auto all = atsp_test::enumerate_perfect_matchings(g);
        CHECK(std::find(all.begin(), all.end(), asg.phi) != all.end());
    }
}

TEST_CASE("chain state bookkeeping") {
    const auto inst = atsp_test::shared_four_vertex();
    auto asg = solve_ap(inst);
    normalize_duals(asg, 0);
    const auto g = build_plus_graph(inst, asg);
    const auto st = ChainState::from_assignment(asg);
    CHECK(st.perfect());
    CHECK(st.valid_for(g));
    for (std::size_t i = 0; i < inst.n(); ++i) {
        CHECK(st.match_a[i] == static_cast<std::ptrdiff_t>(asg.phi[i]));
        CHECK(st.match_b[asg.phi[i]] == static_cast<std::ptrdiff_t>(i));
    }
}

TEST_CASE("chain steps preserve the matching invariants") {
    const auto g = complete_bipartite(4);
    auto st = identity_state(4);
    RandomSource rng(3, 0);
    for (int k = 0; k < 5000; ++k) {
        chain_step(st, g, rng);
        if (k % 100 == 0)
            REQUIRE(st.valid_for(g));
        if (st.perfect()) {
            CHECK(st.hole_b < 0);
        } else {
            REQUIRE(st.hole_a >= 0);
            REQUIRE(st.hole_b >= 0);
            CHECK(st.match_a[static_cast<std::size_t>(st.hole_a)] < 0);
            CHECK(st.match_b[static_cast<std::size_t>(st.hole_b)] < 0);
        }
    }
    CHECK(st.step == 5000);
}

TEST_CASE("perfect matchings of K33 are visited near-uniformly") {
    const auto g = complete_bipartite(3);
    RandomSource rng(17, 0);
    const auto trace = run_chain(g, identity_state(3), 300000, rng,
                                 /*burnin=*/10 * g.edges.size(),
                                 /*tally_matchings=*/true);
    CHECK(trace.steps == 300000);
    CHECK(trace.perfect_visits + trace.near_visits == trace.steps);
    // 6 perfect + 18 near-perfect states; uniform stationary law
    const double pf = static_cast<double>(trace.perfect_visits) / 300000.0;
    CHECK(pf == doctest::Approx(6.0 / 24.0).epsilon(0.08));
    REQUIRE(trace.perfect_visit_counts.size() == 6);
    double tv = 0.0;
    for (const auto& [phi, cnt] : trace.perfect_visit_counts)
        tv += 0.5 * std::abs(static_cast<double>(cnt) /
                                 static_cast<double>(trace.perfect_visits) -
                             1.0 / 6.0);
    CHECK(tv < 0.05);
}

TEST_CASE("cycle statistics are tallied at perfect visits") {
    const auto g = complete_bipartite(4);
    RandomSource rng(5, 0);
    const auto trace = run_chain(g, identity_state(4), 50000, rng, 1000, false,
                                 /*stat_every=*/10);
    CHECK(trace.stat_samples > 0);
    CHECK(trace.mean_cycles >= 1.0);
    CHECK(trace.mean_cycles <= 4.0);
    std::uint64_t total = 0;
    for (const auto& [rho, cnt] : trace.cycle_count_hist) {
        CHECK(rho >= 1);
        CHECK(rho <= 4);
        total += cnt;
    }
    CHECK(total == trace.stat_samples);
}

TEST_CASE("chain runs are seed-deterministic") {
    const auto g = complete_bipartite(3);
    RandomSource r1(99, 2), r2(99, 2);
    const auto t1 = run_chain(g, identity_state(3), 20000, r1, 100, true);
    const auto t2 = run_chain(g, identity_state(3), 20000, r2, 100, true);
    CHECK(t1.perfect_visits == t2.perfect_visits);
    CHECK(t1.perfect_visit_counts == t2.perfect_visit_counts);
    RandomSource r3(100, 2);
    const auto t3 = run_chain(g, identity_state(3), 20000, r3, 100, true);
    CHECK(t1.perfect_visit_counts != t3.perfect_visit_counts);
}
