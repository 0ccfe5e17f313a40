#ifndef ATSP_HARNESS_HPP
#define ATSP_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "atsp/instance.hpp"
#include "atsp/patching.hpp"

namespace atsp {

struct CellSpec {
    std::size_t n;
    double alpha;
    CostDistribution dist;
    Family family;
};

struct ExperimentConfig {
    std::vector<CellSpec> cells;
    std::size_t trials = 1;
    std::uint64_t seed_base = 1;
    PatchStrategy strategy = PatchStrategy::Cheapest;
    PatchObjective objective = PatchObjective::NetDelta;

    bool check_lemma1 = true;
    bool check_lemma2 = true;
    bool check_duals = true;
    bool check_sandwich = false; // only honored on cells with n <= 16
    bool check_ratio = false;    // per-cell median trend across n

    double lemma1_threshold = 0.99;
    double lemma2_threshold = 0.95;
    double duals_threshold = 0.95;

    /// Wall-clock columns are inherently nondeterministic; disable for
    /// byte-reproducible CSV output.
    bool record_timings = true;
    /// Re-validate and re-sum every tour against the instance.
    bool audit = false;
};

struct TrialReport {
    std::size_t cell_index = 0;
    std::size_t n = 0;
    double alpha = 0.0;
    std::string dist;
    std::string family;
    std::uint64_t seed = 0;

    double v_ap = 0.0;
    double tour_cost = 0.0;
    double ratio = 0.0; // (tour_cost - v_ap) / v_ap
    std::size_t rho_initial = 0;
    std::size_t patches = 0;
    std::size_t repairs = 0;
    std::vector<std::string> case_labels;
    double max_matching_edge = 0.0;
    double gamma_n = 0.0;
    bool lemma1_ok = false;
    bool lemma2_ok = false;
    bool duals_ok = false;
    double t_solve_ms = 0.0;
    double t_patch_ms = 0.0;

    // transformed-cost pipeline extras (uniform/truncated cells)
    bool transformed = false;
    double tour_cost_original = 0.0; // realized original-unit cost
    std::size_t clamp_count = 0;

    // oracle sandwich, small cells only
    bool sandwich_checked = false;
    bool sandwich_ok = false;

    bool failed = false;
    std::string error;
};

struct ExperimentResult {
    std::vector<TrialReport> reports;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// CSV serialization with the fixed header
/// n,alpha,dist,family,seed,v_ap,tour_cost,ratio,rho,patches,repairs,max_edge,
/// lemma1,lemma2,duals_ok,t_solve_ms,t_patch_ms
std::string to_csv(const std::vector<TrialReport>& reports);

struct ClaimResult {
    std::string name;
    bool pass;
    std::string detail;
};

struct ClaimSummary {
    std::vector<ClaimResult> claims;
    bool all_pass = true;
};

ClaimSummary check_claims(const ExperimentResult& result, const ExperimentConfig& cfg);

std::string summary_json(const ExperimentResult& result, const ClaimSummary& claims);

/// Deterministic per-trial seed derived from (seed_base, cell, trial).
std::uint64_t trial_seed(std::uint64_t seed_base, std::size_t cell, std::size_t trial);

} // namespace atsp

#endif
