#ifndef ATSP_ASSIGNMENT_HPP
#define ATSP_ASSIGNMENT_HPP

#include <cstddef>
#include <vector>

#include "atsp/instance.hpp"

namespace atsp {

/// Optimal assignment: loop-free permutation phi plus LP duals (u, v).
/// At optimum: value = sum C(i, phi(i)) = sum u + sum v,
/// u_i + v_phi(i) = C(i, phi(i)), and u_i + v_j <= C(i, j) on present edges.
struct Assignment {
    std::vector<std::size_t> phi;
    std::vector<double> u;
    std::vector<double> v;
    double value = 0.0;
};

/// Exact minimum-cost perfect matching over the bipartite view, by shortest
/// augmenting paths with dual potentials. Deterministic; ties broken by
/// smallest column index. Throws NoPerfectMatching.
Assignment solve_ap(const Instance& inst);

struct AssignmentCertificate {
    bool permutation_ok = false;
    bool cs_ok = false;          // complementary slackness
    bool feasible_ok = false;    // dual feasibility on present edges
    bool value_ok = false;       // value identity (primal sum and dual sum)
    double max_cs_residual = 0.0;
    double min_feasibility_slack = 0.0;
    double value_gap = 0.0;
    // witness for a feasibility violation, valid when !feasible_ok
    std::size_t witness_i = 0, witness_j = 0;

    bool pass() const { return permutation_ok && cs_ok && feasible_ok && value_ok; }
};

AssignmentCertificate verify_assignment(const Instance& inst, const Assignment& asg,
                                        double tol = 1e-9);

/// Shifts duals so u_s = 0; every pairwise sum u_i + v_j is unchanged.
Assignment normalize_duals(Assignment asg, std::size_t s);

/// Exhaustive oracle over derangements, n <= 10. Returns +inf when no
/// feasible derangement exists. Throws TooLarge.
double brute_force_ap(const Instance& inst);

struct Lemma2Check {
    double max_matching_edge;
    double gamma_n;
    bool ok;
};

/// Flags whether every matching edge costs at most gamma_n.
Lemma2Check lemma2_check(const Instance& inst, const Assignment& asg);

} // namespace atsp

#endif
