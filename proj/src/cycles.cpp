#include "atsp/cycles.hpp"

#include <algorithm>
#include <cmath>

#include "atsp/errors.hpp"

namespace atsp {

std::vector<std::size_t> CycleCover::sizes_sorted() const {
    std::vector<std::size_t> s;
    s.reserve(cycles.size());
    for (const auto& c : cycles)
        s.push_back(c.size());
    std::sort(s.begin(), s.end());
    return s;
}

CycleCover to_cycle_cover(const Instance& inst, const Assignment& asg) {
    const std::size_t n = inst.n();
    CycleCover cover;
    cover.n = n;
    cover.total_cost = 0.0;
    std::vector<char> visited(n, 0);
    for (std::size_t start = 0; start < n; ++start) {
        if (visited[start])
            continue;
        std::vector<std::size_t> cycle;
        for (std::size_t v = start; !visited[v]; v = asg.phi[v]) {
            visited[v] = 1;
            cycle.push_back(v);
            cover.total_cost += inst.cost(v, asg.phi[v]);
        }
        cover.cycles.push_back(std::move(cycle));
    }
    return cover;
}

std::string to_string(CaseLabel label) {
    switch (label) {
    case CaseLabel::Done:
        return "done";
    case CaseLabel::Case1:
        return "case1";
    case CaseLabel::Case2:
        return "case2";
    case CaseLabel::Case3:
        return "case3";
    }
    return "?";
}

CycleStats cycle_stats(const CycleCover& cover, const Thresholds& th) {
    CycleStats st;
    st.rho = cover.rho();
    st.sizes = cover.sizes_sorted();
    st.c1 = st.sizes.empty() ? 0 : st.sizes.front();
    for (std::size_t s : st.sizes)
        if (static_cast<double>(s) <= th.ell_1) {
            ++st.small_count;
            st.small_mass += s;
        }
    st.rho_ok = static_cast<double>(st.rho) <= th.nu_0;

    const double rho = static_cast<double>(st.rho);
    const double half_eps_n = th.epsilon * static_cast<double>(cover.n) / 2.0;
    if (st.rho == 1)
        st.label = CaseLabel::Done;
    else if (rho > th.nu_1)
        st.label = CaseLabel::Case1;
    else if (static_cast<double>(st.c1) <= half_eps_n)
        st.label = CaseLabel::Case2;
    else
        st.label = CaseLabel::Case3;
    return st;
}

std::size_t count_patching_pairs(const Instance& inst, const CycleCover& cover) {
    if (cover.rho() < 2)
        throw Error("count_patching_pairs requires at least two cycles");
    std::size_t count = 0;
    const auto& cs = cover.cycles;
    for (std::size_t a = 0; a < cs.size(); ++a) {
        for (std::size_t b = 0; b < cs.size(); ++b) {
            if (a == b)
                continue;
            for (std::size_t p = 0; p < cs[a].size(); ++p) {
                const std::size_t x = cs[a][p];
                const std::size_t y = cs[a][(p + 1) % cs[a].size()];
                const double* xrow = inst.row(x);
                for (std::size_t q = 0; q < cs[b].size(); ++q) {
                    const std::size_t u = cs[b][q];
                    const std::size_t v = cs[b][(q + 1) % cs[b].size()];
                    if (std::isfinite(inst.row(u)[y]) && std::isfinite(xrow[v]))
                        ++count;
                }
            }
        }
    }
    return count;
}

} // namespace atsp
