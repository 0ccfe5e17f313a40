#include "atsp/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "atsp/errors.hpp"

namespace atsp {

// Shortest augmenting paths with dual potentials over the dense cost matrix
// (absent edges = +inf). Rows are inserted in index order; the column scan
// breaks distance ties by smallest index, so the result is deterministic.
Assignment solve_ap(const Instance& inst) {
    const std::size_t n = inst.n();
    const double INF = kInfiniteCost;

    // 1-based working arrays; column 0 is the virtual root.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
    std::vector<std::size_t> row_of(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1, 0);

    for (std::size_t i = 1; i <= n; ++i) {
        row_of[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), INF);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = row_of[j0];
            const double* crow = inst.row(i0 - 1); // absent and self pairs are +inf
            const double ui0 = u[i0];
            double delta = INF;
            std::size_t j1 = 0;
            bool found = false;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const double c = crow[j - 1];
                const double cur = c - ui0 - v[j]; // +inf stays +inf
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                    found = true;
                }
            }
            if (!found || !std::isfinite(delta))
                throw NoPerfectMatching("bipartite view has no perfect matching");
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else if (std::isfinite(minv[j])) {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (row_of[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    Assignment asg;
    asg.phi.assign(n, 0);
    asg.u.assign(n, 0.0);
    asg.v.assign(n, 0.0);
    for (std::size_t j = 1; j <= n; ++j)
        asg.phi[row_of[j] - 1] = j - 1;
    for (std::size_t i = 1; i <= n; ++i)
        asg.u[i - 1] = u[i];
    for (std::size_t j = 1; j <= n; ++j)
        asg.v[j - 1] = v[j];
    asg.value = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        asg.value += inst.cost(i, asg.phi[i]);
    return asg;
}

AssignmentCertificate verify_assignment(const Instance& inst, const Assignment& asg,
                                        double tol) {
    const std::size_t n = inst.n();
    AssignmentCertificate cert;

    // permutation well-formed and loop-free
    std::vector<char> seen(n, 0);
    cert.permutation_ok = asg.phi.size() == n && asg.u.size() == n && asg.v.size() == n;
    if (cert.permutation_ok) {
        for (std::size_t i = 0; i < n; ++i) {
            if (asg.phi[i] >= n || asg.phi[i] == i || seen[asg.phi[i]]) {
                cert.permutation_ok = false;
                break;
            }
            seen[asg.phi[i]] = 1;
        }
    }
    if (!cert.permutation_ok)
        return cert;

    double max_cs = 0.0;
    double primal = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = inst.cost(i, asg.phi[i]);
        primal += c;
        max_cs = std::max(max_cs, std::fabs(asg.u[i] + asg.v[asg.phi[i]] - c));
    }
    cert.max_cs_residual = max_cs;
    cert.cs_ok = max_cs <= tol;

    double min_slack = kInfiniteCost;
    cert.feasible_ok = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (inst.has_edge(i, j)) {
                const double slack = inst.cost(i, j) - asg.u[i] - asg.v[j];
                if (slack < min_slack) {
                    min_slack = slack;
                    if (slack < -tol) {
                        cert.witness_i = i;
                        cert.witness_j = j;
                        cert.feasible_ok = false;
                    }
                }
            }
    cert.min_feasibility_slack = min_slack;

    const double dual = std::accumulate(asg.u.begin(), asg.u.end(), 0.0) +
                        std::accumulate(asg.v.begin(), asg.v.end(), 0.0);
    cert.value_gap = std::max(std::fabs(asg.value - primal), std::fabs(asg.value - dual));
    cert.value_ok = cert.value_gap <= tol;
    return cert;
}

Assignment normalize_duals(Assignment asg, std::size_t s) {
    const double lambda = asg.u.at(s);
    for (double& x : asg.u)
        x -= lambda;
    for (double& x : asg.v)
        x += lambda;
    return asg;
}

double brute_force_ap(const Instance& inst) {
    const std::size_t n = inst.n();
    if (n > 10)
        throw TooLarge("brute_force_ap limited to n <= 10");
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    double best = kInfiniteCost;
    do {
        double total = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            if (sigma[i] == i || !inst.has_edge(i, sigma[i]))
                ok = false;
            else
                total += inst.cost(i, sigma[i]);
        }
        if (ok && total < best)
            best = total;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return best;
}

Lemma2Check lemma2_check(const Instance& inst, const Assignment& asg) {
    Lemma2Check out;
    out.gamma_n = inst.thresholds().gamma_n;
    out.max_matching_edge = 0.0;
    for (std::size_t i = 0; i < inst.n(); ++i)
        out.max_matching_edge = std::max(out.max_matching_edge, inst.cost(i, asg.phi[i]));
    out.ok = out.max_matching_edge <= out.gamma_n;
    return out;
}

} // namespace atsp
