#ifndef ATSP_CYCLES_HPP
#define ATSP_CYCLES_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "atsp/assignment.hpp"
#include "atsp/instance.hpp"

namespace atsp {

/// Partition of [n] into directed cycles (each of length >= 2), with the
/// summed edge cost.
struct CycleCover {
    std::size_t n = 0;
    std::vector<std::vector<std::size_t>> cycles; // each in traversal order
    double total_cost = 0.0;

    std::size_t rho() const { return cycles.size(); }
    std::vector<std::size_t> sizes_sorted() const;
};

CycleCover to_cycle_cover(const Instance& inst, const Assignment& asg);

enum class CaseLabel { Done, Case1, Case2, Case3 };
std::string to_string(CaseLabel label);

struct CycleStats {
    std::size_t rho = 0;
    std::vector<std::size_t> sizes; // ascending
    std::size_t c1 = 0;             // smallest cycle size
    std::size_t small_count = 0;    // cycles with size <= ell_1
    std::size_t small_mass = 0;     // vertices on small cycles (sigma)
    bool rho_ok = false;            // rho <= nu_0
    CaseLabel label = CaseLabel::Done;
};

CycleStats cycle_stats(const CycleCover& cover, const Thresholds& th);

/// Exact count of ordered pairs of edges e=(x,y) in cycle A, f=(u,v) in a
/// different cycle B, such that (u,y) and (x,v) are both present.
/// Requires rho >= 2.
std::size_t count_patching_pairs(const Instance& inst, const CycleCover& cover);

} // namespace atsp

#endif
