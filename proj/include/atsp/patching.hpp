#ifndef ATSP_PATCHING_HPP
#define ATSP_PATCHING_HPP

#include <array>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "atsp/cycles.hpp"
#include "atsp/instance.hpp"

namespace atsp {

enum class PatchObjective { NetDelta, ExtraCost };
enum class PatchStrategy { Cheapest, CaseAware };

PatchObjective parse_objective(const std::string& s);
PatchStrategy parse_strategy(const std::string& s);

/// One cycle merge: remove e=(x,y) and f=(u,v) from distinct cycles, add
/// (x,v) and (u,y).
struct PatchMove {
    std::size_t x, y; // removed edge in cycle A
    std::size_t u, v; // removed edge in cycle B
    double delta;     // C(x,v) + C(u,y) - C(x,y) - C(u,v)
    double extra;     // C(x,v) + C(u,y)
};

using Edge = std::pair<std::size_t, std::size_t>;
using EdgeSet = std::set<Edge>;

/// One three-edge exchange performed by the Case-3 surgery.
struct RepairRecord {
    std::array<Edge, 3> removed; // (y1,x2), (v,u), (z,w)
    std::array<Edge, 3> added;   // (y1,u), (v,w), (z,x2)
};

struct TourMove {
    bool is_repair = false;
    PatchMove patch{};
    RepairRecord repair{};
};

struct Tour {
    std::vector<std::size_t> order; // single directed Hamiltonian cycle
    double cost = 0.0;
    std::vector<TourMove> log;
    std::vector<CaseLabel> case_labels; // labels seen while patching
    std::size_t patches = 0;
    std::size_t repairs = 0;
};

/// Membership test for R: present edges of cost at most gamma_n + p_low.
struct LowCostSet {
    const Instance* inst;
    double bound;
    bool contains(std::size_t i, std::size_t j) const {
        return inst->has_edge(i, j) && inst->cost(i, j) <= bound;
    }
};

/// Minimizes the chosen objective over all patching pairs across all cycle
/// pairs; ties by lexicographic (x, u). Throws NoPatchingPair.
PatchMove best_patch(const Instance& inst, const CycleCover& cover, PatchObjective obj);

/// Merges the two cycles named by the move; rho drops by 1 and total_cost
/// grows by exactly mv.delta. Throws StaleMove.
CycleCover apply_patch(CycleCover cover, const PatchMove& mv);

struct ChainEdge {
    std::size_t from, to; // (y_i, x_{i+1})
    bool present;
    bool low_cost; // membership in R
};

struct ChainResult {
    Tour tour;                    // candidate; chaining edges may be absent
    std::vector<ChainEdge> chain; // all 2*rho chaining edges
};

/// Case-3 surgery, phase one: split every cycle into two near-equal paths
/// (dropping the cheapest balanced edge pair) and chain the 2*rho paths
/// cyclically. Requires 2 <= rho <= nu_1 and every cycle size >= 4.
ChainResult split_and_chain(const Instance& inst, const CycleCover& cover,
                            RandomSource& rng);

/// Replaces the bad tour edge (y1, x2) by the three-edge exchange
/// T' = T + (y1,u) + (v,w) + (z,x2) - (y1,x2) - (v,u) - (z,w),
/// using only edges of R and examining at most `budget` candidate (z,w)
/// pairs. `session_removed` edges are never re-added; the three removed
/// edges are appended to it. Throws RepairFailed.
Tour repair_edge(const Instance& inst, const Tour& tour, Edge bad, const LowCostSet& R,
                 std::size_t budget, EdgeSet* session_removed = nullptr);

struct TourReport {
    bool hamiltonian = false;
    bool edges_present = false;
    bool cost_ok = false;
    Edge witness{0, 0}; // first absent edge when !edges_present
    double resummed_cost = 0.0;

    bool pass() const { return hamiltonian && edges_present && cost_ok; }
};

TourReport validate_tour(const Instance& inst, const Tour& tour);

/// Repeated cheapest patching until one cycle remains, with Case-3 surgery
/// as fallback (Cheapest) or triggered by the case label (CaseAware).
/// Throws Unpatchable.
Tour patch_to_tour(const Instance& inst, CycleCover cover, PatchStrategy strategy,
                   PatchObjective obj, RandomSource& rng);

} // namespace atsp

#endif
