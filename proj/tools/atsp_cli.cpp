// Command-line front end: instance generation, assignment solving, patching,
// exact oracles, the matching chain, and the batch experiment runner.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "atsp/assignment.hpp"
#include "atsp/cycles.hpp"
#include "atsp/errors.hpp"
#include "atsp/harness.hpp"
#include "atsp/oracle.hpp"
#include "atsp/patching.hpp"
#include "atsp/sampler.hpp"

using nlohmann::json;

namespace {

atsp::Instance load_instance(const std::string& path) { return atsp::Instance::load(path); }

json assignment_json(const atsp::Assignment& asg) {
    json j;
    j["value"] = asg.value;
    json phi = json::array();
    for (std::size_t t : asg.phi)
        phi.push_back(t + 1); // 1-based, matching the file format
    j["matching"] = phi;
    j["u"] = asg.u;
    j["v"] = asg.v;
    return j;
}

int cmd_gen(const std::string& out, std::size_t n, double alpha, const std::string& dist,
            const std::string& family, std::uint64_t seed) {
    const auto inst = atsp::Instance::generate(n, alpha, atsp::CostDistribution::parse(dist),
                                               atsp::parse_family(family), seed);
    inst.save(out);
    std::printf("wrote %s: n=%zu edges=%zu min_out=%zu min_in=%zu\n", out.c_str(), inst.n(),
                inst.edge_count(), inst.min_out_degree(), inst.min_in_degree());
    return 0;
}

int cmd_ap(const std::string& in, bool check) {
    const auto inst = load_instance(in);
    const auto asg = atsp::solve_ap(inst);
    json j = assignment_json(asg);
    if (check) {
        const auto cert = atsp::verify_assignment(inst, asg);
        j["check"] = {{"pass", cert.pass()},
                      {"max_cs_residual", cert.max_cs_residual},
                      {"min_feasibility_slack", cert.min_feasibility_slack},
                      {"value_gap", cert.value_gap}};
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_tour(const std::string& in, const std::string& strategy,
             const std::string& objective, bool validate, std::uint64_t seed) {
    const auto inst = load_instance(in);
    const auto asg = atsp::solve_ap(inst);
    auto cover = atsp::to_cycle_cover(inst, asg);
    atsp::RandomSource rng(seed, 1);
    const auto tour = atsp::patch_to_tour(inst, std::move(cover),
                                          atsp::parse_strategy(strategy),
                                          atsp::parse_objective(objective), rng);
    json j;
    j["cost"] = tour.cost;
    j["v_ap"] = asg.value;
    j["patches"] = tour.patches;
    j["repairs"] = tour.repairs;
    json labels = json::array();
    for (auto l : tour.case_labels)
        labels.push_back(atsp::to_string(l));
    j["case_labels"] = labels;
    json order = json::array();
    for (std::size_t v : tour.order)
        order.push_back(v + 1);
    j["tour"] = order;
    json log = json::array();
    for (const auto& mv : tour.log) {
        json e;
        if (mv.is_repair) {
            e["kind"] = "repair";
            json rm = json::array(), ad = json::array();
            for (const auto& [a, b] : mv.repair.removed)
                rm.push_back({a + 1, b + 1});
            for (const auto& [a, b] : mv.repair.added)
                ad.push_back({a + 1, b + 1});
            e["removed"] = rm;
            e["added"] = ad;
        } else {
            e["kind"] = "patch";
            e["removed"] = {{mv.patch.x + 1, mv.patch.y + 1},
                            {mv.patch.u + 1, mv.patch.v + 1}};
            e["added"] = {{mv.patch.x + 1, mv.patch.v + 1},
                          {mv.patch.u + 1, mv.patch.y + 1}};
            e["delta"] = mv.patch.delta;
        }
        log.push_back(e);
    }
    j["log"] = log;
    if (validate) {
        const auto rep = atsp::validate_tour(inst, tour);
        j["valid"] = rep.pass();
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_oracle(const std::string& in, const std::string& method) {
    const auto inst = load_instance(in);
    const auto res = method == "hk" ? atsp::held_karp(inst) : atsp::exhaustive_atsp(inst);
    json j;
    j["method"] = method == "hk" ? "held_karp" : "exhaustive";
    j["value"] = std::isfinite(res.value) ? json(res.value) : json("inf");
    json order = json::array();
    for (std::size_t v : res.tour)
        order.push_back(v + 1);
    j["tour"] = order;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_chain(const std::string& in, std::uint64_t steps, std::uint64_t burnin,
              std::uint64_t report_every, std::uint64_t seed) {
    const auto inst = load_instance(in);
    const auto asg = atsp::normalize_duals(atsp::solve_ap(inst), 0);
    const auto g = atsp::build_plus_graph(inst, asg);
    if (burnin == 0)
        burnin = 10 * g.edges.size(); // default: 10 sweeps over E(G+)
    atsp::RandomSource rng(seed, 2);
    const auto trace = atsp::run_chain(g, atsp::ChainState::from_assignment(asg), steps,
                                       rng, burnin, inst.n() <= 8, report_every);
    json j;
    j["edges"] = g.edges.size();
    j["min_left_degree"] = g.min_left_degree;
    j["min_right_degree"] = g.min_right_degree;
    j["steps"] = trace.steps;
    j["burnin"] = trace.burnin;
    j["perfect_visits"] = trace.perfect_visits;
    j["near_visits"] = trace.near_visits;
    j["mean_cycles"] = trace.mean_cycles;
    j["mean_small_mass"] = trace.mean_small_mass;
    json hist = json::object();
    for (const auto& [k, v] : trace.cycle_count_hist)
        hist[std::to_string(k)] = v;
    j["cycle_count_hist"] = hist;
    if (!trace.perfect_visit_counts.empty())
        j["distinct_perfect_matchings_visited"] = trace.perfect_visit_counts.size();
    std::cout << j.dump(2) << "\n";
    return 0;
}

// key=value config lines; '#' starts a comment
atsp::ExperimentConfig parse_bench_config(const std::string& path) {
    atsp::ExperimentConfig cfg;
    std::ifstream f(path);
    if (!f)
        throw atsp::Error("cannot open config: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "cell") { // n,alpha,dist,family
            std::istringstream ss(val);
            std::string tok;
            std::vector<std::string> parts;
            while (std::getline(ss, tok, ','))
                parts.push_back(trim(tok));
            if (parts.size() != 4)
                throw atsp::ParseError("cell needs 'n,alpha,dist,family'", lineno);
            atsp::CellSpec cell;
            cell.n = std::stoull(parts[0]);
            cell.alpha = std::stod(parts[1]);
            cell.dist = atsp::CostDistribution::parse(parts[2]);
            cell.family = atsp::parse_family(parts[3]);
            cfg.cells.push_back(cell);
        } else if (key == "trials")
            cfg.trials = std::stoull(val);
        else if (key == "seed_base")
            cfg.seed_base = std::stoull(val);
        else if (key == "strategy")
            cfg.strategy = atsp::parse_strategy(val);
        else if (key == "objective")
            cfg.objective = atsp::parse_objective(val);
        else if (key == "check_lemma1")
            cfg.check_lemma1 = val == "1" || val == "true";
        else if (key == "check_lemma2")
            cfg.check_lemma2 = val == "1" || val == "true";
        else if (key == "check_duals")
            cfg.check_duals = val == "1" || val == "true";
        else if (key == "check_sandwich")
            cfg.check_sandwich = val == "1" || val == "true";
        else if (key == "check_ratio")
            cfg.check_ratio = val == "1" || val == "true";
        else if (key == "record_timings")
            cfg.record_timings = val == "1" || val == "true";
        else if (key == "audit")
            cfg.audit = val == "1" || val == "true";
        else if (key == "lemma1_threshold")
            cfg.lemma1_threshold = std::stod(val);
        else if (key == "lemma2_threshold")
            cfg.lemma2_threshold = std::stod(val);
        else if (key == "duals_threshold")
            cfg.duals_threshold = std::stod(val);
        else
            throw atsp::ParseError("unknown config key: " + key, lineno);
    }
    return cfg;
}

int cmd_bench(const std::string& config, const std::string& out_csv,
              const std::string& out_json) {
    const auto cfg = parse_bench_config(config);
    const auto result = atsp::run_experiment(cfg);
    const auto claims = atsp::check_claims(result, cfg);
    {
        std::ofstream f(out_csv, std::ios::binary);
        f << atsp::to_csv(result.reports);
    }
    {
        std::ofstream f(out_json, std::ios::binary);
        f << atsp::summary_json(result, claims) << "\n";
    }
    for (const auto& c : claims.claims)
        std::printf("[%s] %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
    std::printf("%zu trial rows -> %s, summary -> %s\n", result.reports.size(),
                out_csv.c_str(), out_json.c_str());
    return claims.all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cycle-cover patching heuristic for the asymmetric TSP on dense "
                 "random digraphs"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random instance file");
    std::string gen_out = "instance.dinst", gen_dist = "exp1", gen_family = "out_in_union";
    std::size_t gen_n = 100;
    double gen_alpha = 0.75;
    std::uint64_t gen_seed = 1;
    gen->add_option("--out", gen_out);
    gen->add_option("--n", gen_n)->required();
    gen->add_option("--alpha", gen_alpha);
    gen->add_option("--dist", gen_dist, "exp1 | uniform | trunc:b=<b>,nu=<nu>");
    gen->add_option("--family", gen_family, "complete | out_in_union | bipolar");
    gen->add_option("--seed", gen_seed);

    // ap
    auto* ap = app.add_subcommand("ap", "solve the assignment problem");
    std::string ap_in;
    bool ap_check = false;
    ap->add_option("--in", ap_in)->required();
    ap->add_flag("--check", ap_check, "verify the optimality certificate");

    // tour
    auto* tour = app.add_subcommand("tour", "patch the cycle cover into a tour");
    std::string tour_in, tour_strategy = "cheapest", tour_objective = "net";
    bool tour_validate = false;
    std::uint64_t tour_seed = 1;
    tour->add_option("--in", tour_in)->required();
    tour->add_option("--strategy", tour_strategy, "cheapest | case-aware");
    tour->add_option("--objective", tour_objective, "net | extra");
    tour->add_flag("--validate", tour_validate);
    tour->add_option("--seed", tour_seed);

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact small-instance solver");
    std::string oracle_in, oracle_method = "hk";
    oracle->add_option("--in", oracle_in)->required();
    oracle->add_option("--method", oracle_method, "exhaustive | hk");

    // chain
    auto* chain = app.add_subcommand("chain", "matching chain statistics");
    std::string chain_in;
    std::uint64_t chain_steps = 1000000, chain_burnin = 0, chain_every = 1, chain_seed = 1;
    chain->add_option("--in", chain_in)->required();
    chain->add_option("--steps", chain_steps);
    chain->add_option("--burnin", chain_burnin, "0 = ten sweeps over E(G+)");
    chain->add_option("--report-every", chain_every,
                      "sample cycle statistics every k-th perfect visit");
    chain->add_option("--seed", chain_seed);

    // bench
    auto* bench = app.add_subcommand("bench", "batch experiments and claim checks");
    std::string bench_config, bench_csv = "report.csv", bench_json = "summary.json";
    bench->add_option("--config", bench_config)->required();
    bench->add_option("--csv", bench_csv);
    bench->add_option("--json", bench_json);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(gen_out, gen_n, gen_alpha, gen_dist, gen_family, gen_seed);
        if (ap->parsed())
            return cmd_ap(ap_in, ap_check);
        if (tour->parsed())
            return cmd_tour(tour_in, tour_strategy, tour_objective, tour_validate,
                            tour_seed);
        if (oracle->parsed())
            return cmd_oracle(oracle_in, oracle_method);
        if (chain->parsed())
            return cmd_chain(chain_in, chain_steps, chain_burnin, chain_every, chain_seed);
        if (bench->parsed())
            return cmd_bench(bench_config, bench_csv, bench_json);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
