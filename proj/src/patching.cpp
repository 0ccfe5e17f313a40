#include "atsp/patching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "atsp/errors.hpp"

namespace atsp {

PatchObjective parse_objective(const std::string& s) {
    if (s == "net" || s == "net_delta")
        return PatchObjective::NetDelta;
    if (s == "extra" || s == "extra_cost")
        return PatchObjective::ExtraCost;
    throw Error("unknown objective: " + s);
}

PatchStrategy parse_strategy(const std::string& s) {
    if (s == "cheapest")
        return PatchStrategy::Cheapest;
    if (s == "case-aware" || s == "case_aware")
        return PatchStrategy::CaseAware;
    throw Error("unknown strategy: " + s);
}

namespace {

// best move across a fixed ordered cycle pair (a supplies e, b supplies f),
// or nullopt when nothing patches; tie-break by lexicographic (x, u)
bool best_move_for_pair(const Instance& inst, const std::vector<std::size_t>& ca,
                        const std::vector<std::size_t>& cb, PatchObjective obj,
                        PatchMove& best, bool& have) {
    bool improved = false;
    for (std::size_t p = 0; p < ca.size(); ++p) {
        const std::size_t x = ca[p];
        const std::size_t y = ca[(p + 1) % ca.size()];
        const double* xrow = inst.row(x);
        const double cxy = xrow[y];
        for (std::size_t q = 0; q < cb.size(); ++q) {
            const std::size_t u = cb[q];
            const std::size_t v = cb[(q + 1) % cb.size()];
            const double cxv = xrow[v];
            const double cuy = inst.row(u)[y];
            if (!std::isfinite(cxv) || !std::isfinite(cuy))
                continue;
            PatchMove mv;
            mv.x = x;
            mv.y = y;
            mv.u = u;
            mv.v = v;
            mv.extra = cxv + cuy;
            // grouped so mirrored orientations of one move tie bit-exactly
            mv.delta = mv.extra - (cxy + inst.row(u)[v]);
            const double key = obj == PatchObjective::NetDelta ? mv.delta : mv.extra;
            const double bestkey =
                obj == PatchObjective::NetDelta ? best.delta : best.extra;
            if (!have || key < bestkey ||
                (key == bestkey && (mv.x < best.x || (mv.x == best.x && mv.u < best.u)))) {
                best = mv;
                have = true;
                improved = true;
            }
        }
    }
    return improved;
}

} // namespace

PatchMove best_patch(const Instance& inst, const CycleCover& cover, PatchObjective obj) {
    if (cover.rho() < 2)
        throw Error("best_patch requires at least two cycles");
    PatchMove best{};
    bool have = false;
    for (std::size_t a = 0; a < cover.cycles.size(); ++a)
        for (std::size_t b = 0; b < cover.cycles.size(); ++b)
            if (a != b)
                best_move_for_pair(inst, cover.cycles[a], cover.cycles[b], obj, best, have);
    if (!have)
        throw NoPatchingPair("no patching pair across any cycle pair");
    return best;
}

namespace {

// locates the cycle containing directed edge (x, y) as consecutive entries
bool find_cycle_edge(const CycleCover& cover, std::size_t x, std::size_t y,
                     std::size_t& cycle_idx, std::size_t& pos) {
    for (std::size_t c = 0; c < cover.cycles.size(); ++c) {
        const auto& cyc = cover.cycles[c];
        for (std::size_t p = 0; p < cyc.size(); ++p)
            if (cyc[p] == x && cyc[(p + 1) % cyc.size()] == y) {
                cycle_idx = c;
                pos = p;
                return true;
            }
    }
    return false;
}

} // namespace

CycleCover apply_patch(CycleCover cover, const PatchMove& mv) {
    std::size_t ca = 0, pa = 0, cb = 0, pb = 0;
    if (!find_cycle_edge(cover, mv.x, mv.y, ca, pa) ||
        !find_cycle_edge(cover, mv.u, mv.v, cb, pb) || ca == cb)
        throw StaleMove("move edges are not in distinct cycles of this cover");

    const auto& A = cover.cycles[ca];
    const auto& B = cover.cycles[cb];
    // merged cycle: x -> v -> ... -> u -> y -> ... -> x
    std::vector<std::size_t> merged;
    merged.reserve(A.size() + B.size());
    merged.push_back(mv.x);
    for (std::size_t k = 0; k < B.size(); ++k)
        merged.push_back(B[(pb + 1 + k) % B.size()]); // v ... u
    for (std::size_t k = 0; k < A.size() - 1; ++k)
        merged.push_back(A[(pa + 1 + k) % A.size()]); // y ... pred(x)

    std::vector<std::vector<std::size_t>> next;
    for (std::size_t c = 0; c < cover.cycles.size(); ++c)
        if (c != ca && c != cb)
            next.push_back(std::move(cover.cycles[c]));
    next.push_back(std::move(merged));
    cover.cycles = std::move(next);
    cover.total_cost += mv.delta;
    return cover;
}

ChainResult split_and_chain(const Instance& inst, const CycleCover& cover,
                            RandomSource& rng) {
    const Thresholds th = inst.thresholds();
    const std::size_t rho = cover.rho();
    if (rho < 2 || static_cast<double>(rho) > th.nu_1)
        throw Error("split_and_chain requires 2 <= rho <= nu_1");
    for (const auto& c : cover.cycles)
        if (c.size() < 4)
            throw CycleTooSmall("split_and_chain requires every cycle size >= 4");

    // For each cycle drop the cheapest balanced pair of edges: cut positions
    // a and a+floor(c/2) around the ring, ties by smaller a.
    struct Path {
        std::vector<std::size_t> verts; // directed x -> y
    };
    std::vector<Path> paths;
    paths.reserve(2 * rho);
    for (const auto& cyc : cover.cycles) {
        const std::size_t c = cyc.size();
        const std::size_t gap = c / 2;
        std::size_t best_a = 0;
        double best_cost = kInfiniteCost;
        const std::size_t limit = (c % 2 == 0) ? c / 2 : c; // even: each pair once
        for (std::size_t a = 0; a < limit; ++a) {
            const std::size_t b = (a + gap) % c;
            const double w = inst.cost(cyc[a], cyc[(a + 1) % c]) +
                             inst.cost(cyc[b], cyc[(b + 1) % c]);
            if (w < best_cost) {
                best_cost = w;
                best_a = a;
            }
        }
        const std::size_t a = best_a;
        const std::size_t b = (a + gap) % c;
        Path p1, p2;
        for (std::size_t k = (a + 1) % c; k != (b + 1) % c; k = (k + 1) % c)
            p1.verts.push_back(cyc[k]); // v_{a+1} .. v_b
        for (std::size_t k = (b + 1) % c; k != (a + 1) % c; k = (k + 1) % c)
            p2.verts.push_back(cyc[k]); // v_{b+1} .. v_a
        paths.push_back(std::move(p1));
        paths.push_back(std::move(p2));
    }

    // chain the 2*rho paths in random cyclic order
    std::vector<std::size_t> order(paths.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t t = order.size(); t > 1; --t)
        std::swap(order[t - 1], order[rng.next_below(t)]);

    ChainResult out;
    const LowCostSet R{&inst, th.gamma_n + th.p_low};
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& cur = paths[order[k]].verts;
        const auto& nxt = paths[order[(k + 1) % order.size()]].verts;
        out.tour.order.insert(out.tour.order.end(), cur.begin(), cur.end());
        ChainEdge ce;
        ce.from = cur.back();
        ce.to = nxt.front();
        ce.present = inst.has_edge(ce.from, ce.to);
        ce.low_cost = R.contains(ce.from, ce.to);
        out.chain.push_back(ce);
    }
    // candidate cost; resums to +inf when a chaining edge is absent
    double cost = 0.0;
    const std::size_t n = out.tour.order.size();
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = out.tour.order[k];
        const std::size_t j = out.tour.order[(k + 1) % n];
        cost += inst.has_edge(i, j) ? inst.cost(i, j) : kInfiniteCost;
    }
    out.tour.cost = cost;
    return out;
}

Tour repair_edge(const Instance& inst, const Tour& tour, Edge bad, const LowCostSet& R,
                 std::size_t budget, EdgeSet* session_removed) {
    const std::size_t n = tour.order.size();
    const std::size_t y1 = bad.first, x2 = bad.second;

    // rotate so that ord[0] = x2 and ord[n-1] = y1
    std::size_t t = n;
    for (std::size_t k = 0; k < n; ++k)
        if (tour.order[k] == y1 && tour.order[(k + 1) % n] == x2) {
            t = (k + 1) % n;
            break;
        }
    if (t == n)
        throw StaleMove("bad edge is not on the tour");

    std::vector<std::size_t> ord(n);
    for (std::size_t k = 0; k < n; ++k)
        ord[k] = tour.order[(t + k) % n];

    EdgeSet local;
    EdgeSet& removed = session_removed ? *session_removed : local;
    auto usable = [&](std::size_t i, std::size_t j) {
        return R.contains(i, j) && removed.count({i, j}) == 0;
    };

    std::size_t remaining = budget;
    for (std::size_t k = 1; k + 1 < n && remaining > 0; ++k) {
        const std::size_t u = ord[k];
        if (!usable(y1, u))
            continue;
        const std::size_t v = ord[k - 1];
        // scan tour-adjacent (z, w) with z at position >= k, w its successor
        for (std::size_t q = k; q + 1 < n && remaining > 0; ++q) {
            const std::size_t z = ord[q];
            const std::size_t w = ord[q + 1];
            if (!inst.has_edge(z, x2) || !inst.has_edge(v, w))
                continue; // not a structural candidate, costs nothing
            --remaining;
            if (!usable(z, x2) || !usable(v, w))
                continue;
            // T' = ord[0..k-1] + ord[q+1..n-1] + ord[k..q]
            Tour next = tour;
            next.order.clear();
            next.order.insert(next.order.end(), ord.begin(), ord.begin() + k);
            next.order.insert(next.order.end(), ord.begin() + q + 1, ord.end());
            next.order.insert(next.order.end(), ord.begin() + k, ord.begin() + q + 1);
            double cost = 0.0;
            for (std::size_t m = 0; m < n; ++m) {
                const std::size_t i = next.order[m];
                const std::size_t j = next.order[(m + 1) % n];
                cost += inst.has_edge(i, j) ? inst.cost(i, j) : kInfiniteCost;
            }
            next.cost = cost;
            RepairRecord rec;
            rec.removed = {Edge{y1, x2}, Edge{v, u}, Edge{z, w}};
            rec.added = {Edge{y1, u}, Edge{v, w}, Edge{z, x2}};
            removed.insert(rec.removed.begin(), rec.removed.end());
            TourMove lm;
            lm.is_repair = true;
            lm.repair = rec;
            next.log.push_back(lm);
            ++next.repairs;
            return next;
        }
    }
    throw RepairFailed(remaining == 0 ? "repair budget exhausted"
                                      : "no low-cost candidate u for repair");
}

TourReport validate_tour(const Instance& inst, const Tour& tour) {
    TourReport rep;
    const std::size_t n = inst.n();
    rep.hamiltonian = tour.order.size() == n;
    if (rep.hamiltonian) {
        std::vector<char> seen(n, 0);
        for (std::size_t v : tour.order) {
            if (v >= n || seen[v]) {
                rep.hamiltonian = false;
                break;
            }
            seen[v] = 1;
        }
    }
    if (!rep.hamiltonian)
        return rep;

    rep.edges_present = true;
    double cost = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = tour.order[k];
        const std::size_t j = tour.order[(k + 1) % n];
        if (!inst.has_edge(i, j)) {
            if (rep.edges_present) {
                rep.edges_present = false;
                rep.witness = {i, j};
            }
            cost = kInfiniteCost;
        } else if (std::isfinite(cost)) {
            cost += inst.cost(i, j);
        }
    }
    rep.resummed_cost = cost;
    rep.cost_ok = rep.edges_present && std::fabs(cost - tour.cost) <= 1e-9;
    return rep;
}

namespace {

// Case-3 surgery: split, chain, then repair every chaining edge outside R.
// Retries with a fresh random chaining order on repair failure.
Tour run_surgery(const Instance& inst, const CycleCover& cover, RandomSource& rng,
                 std::vector<TourMove>&& log_so_far, std::size_t patches,
                 std::vector<CaseLabel>&& labels) {
    const Thresholds th = inst.thresholds();
    const LowCostSet R{&inst, th.gamma_n + th.p_low};
    const std::size_t budget = static_cast<std::size_t>(
        std::ceil(th.p_low > 0 ? std::log(static_cast<double>(inst.n())) / th.p_low : 1.0));

    const int kAttempts = 3;
    std::string last_err = "surgery did not run";
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        ChainResult cr = split_and_chain(inst, cover, rng);
        Tour tour = std::move(cr.tour);
        tour.log = log_so_far;
        tour.patches = patches;
        tour.case_labels = labels;
        EdgeSet removed;
        bool ok = true;
        try {
            for (const ChainEdge& ce : cr.chain) {
                if (ce.low_cost)
                    continue;
                // a previous repair may already have displaced this edge
                bool on_tour = false;
                const std::size_t n = tour.order.size();
                for (std::size_t k = 0; k < n; ++k)
                    if (tour.order[k] == ce.from && tour.order[(k + 1) % n] == ce.to) {
                        on_tour = true;
                        break;
                    }
                if (!on_tour)
                    continue;
                tour = repair_edge(inst, tour, {ce.from, ce.to}, R, budget, &removed);
            }
        } catch (const RepairFailed& e) {
            ok = false;
            last_err = e.what();
        }
        if (ok) {
            TourReport rep = validate_tour(inst, tour);
            if (rep.pass())
                return tour;
            last_err = "surgery left an invalid tour";
        }
    }
    throw Unpatchable("case-3 surgery failed: " + last_err +
                      " (rho=" + std::to_string(cover.rho()) + ")");
}

// merges away cycles below the splittable size using ordinary patching,
// preferring moves that touch a short cycle
CycleCover absorb_short_cycles(const Instance& inst, CycleCover cover,
                               std::vector<TourMove>& log, std::size_t& patches,
                               PatchObjective obj) {
    while (cover.rho() >= 2) {
        bool any_short = false;
        for (const auto& c : cover.cycles)
            if (c.size() < 4)
                any_short = true;
        if (!any_short)
            break;
        PatchMove best{};
        bool have = false;
        for (std::size_t a = 0; a < cover.cycles.size(); ++a)
            for (std::size_t b = 0; b < cover.cycles.size(); ++b) {
                if (a == b)
                    continue;
                if (cover.cycles[a].size() >= 4 && cover.cycles[b].size() >= 4)
                    continue;
                best_move_for_pair(inst, cover.cycles[a], cover.cycles[b], obj, best, have);
            }
        if (!have)
            best = best_patch(inst, cover, obj); // throws NoPatchingPair
        cover = apply_patch(std::move(cover), best);
        TourMove lm;
        lm.patch = best;
        log.push_back(lm);
        ++patches;
    }
    return cover;
}

Tour tour_from_single_cycle(const Instance& inst, const CycleCover& cover,
                            std::vector<TourMove>&& log, std::size_t patches,
                            std::vector<CaseLabel>&& labels) {
    Tour tour;
    tour.order = cover.cycles.front();
    tour.cost = cover.total_cost;
    tour.log = std::move(log);
    tour.patches = patches;
    tour.case_labels = std::move(labels);
    return tour;
}

} // namespace

Tour patch_to_tour(const Instance& inst, CycleCover cover, PatchStrategy strategy,
                   PatchObjective obj, RandomSource& rng) {
    if (cover.rho() == 0)
        throw Error("empty cycle cover");
    const Thresholds th = inst.thresholds();
    std::vector<TourMove> log;
    std::vector<CaseLabel> labels;
    std::size_t patches = 0;

    while (cover.rho() >= 2) {
        const CycleStats st = cycle_stats(cover, th);
        if (labels.empty() || labels.back() != st.label)
            labels.push_back(st.label);

        const bool want_surgery = strategy == PatchStrategy::CaseAware &&
                                  st.label == CaseLabel::Case3;
        if (!want_surgery) {
            try {
                const PatchMove mv = best_patch(inst, cover, obj);
                cover = apply_patch(std::move(cover), mv);
                TourMove lm;
                lm.patch = mv;
                log.push_back(lm);
                ++patches;
                continue;
            } catch (const NoPatchingPair&) {
                // fall through to surgery
            }
        }
        try {
            cover = absorb_short_cycles(inst, std::move(cover), log, patches, obj);
            if (cover.rho() == 1)
                break;
            return run_surgery(inst, cover, rng, std::move(log), patches,
                               std::move(labels));
        } catch (const Unpatchable&) {
            throw;
        } catch (const NoPatchingPair& e) {
            throw Unpatchable(std::string("stuck: no patching pair and short cycles "
                                          "block surgery: ") +
                              e.what() + " (rho=" + std::to_string(cover.rho()) + ")");
        } catch (const Error& e) {
            throw Unpatchable(std::string("stuck: ") + e.what());
        }
    }

    if (labels.empty())
        labels.push_back(CaseLabel::Done);
    return tour_from_single_cycle(inst, cover, std::move(log), patches, std::move(labels));
}

} // namespace atsp
