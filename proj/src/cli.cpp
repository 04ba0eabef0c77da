#include "gravelai/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "gravelai/brute_force.hpp"
#include "gravelai/confusing_dp.hpp"
#include "gravelai/error.hpp"
#include "gravelai/fast_confusing_dp.hpp"
#include "gravelai/gl_descent.hpp"
#include "gravelai/local_search.hpp"

namespace gravelai::cli {

using nlohmann::json;

namespace {

// JSON has no infinity; unbounded values are written as null.
json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json arm(Arm k, IndexBase base) { return k + base.offset(); }

json witness_json(const Witness& w, IndexBase base) {
    if (w.kind == WitnessKind::Trivial) {
        return {{"kind", "single_arm"}, {"k", arm(w.k, base)}};
    }
    return {{"kind", "mode_jump"}, {"k", arm(w.k, base)}, {"k_prime", arm(w.k_prime, base)}};
}

void emit(const json& doc, const std::optional<std::filesystem::path>& path, std::ostream& out) {
    if (path) {
        save_json(*path, doc);
    } else {
        out << doc.dump(2) << '\n';
    }
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    }
    return file;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::filesystem::path with_suffix(const std::filesystem::path& path, const std::string& suffix) {
    return path.parent_path() / (path.stem().string() + "_" + suffix + path.extension().string());
}

}  // namespace

int cmd_solve(const SolveOptions& options, IndexBase base, std::ostream& out, std::ostream&) {
    Instance instance = load_instance(options.instance, base);
    DescentConfig config;
    config.n = options.n;
    config.t = options.t;
    config.gamma = options.gamma;

    auto start = std::chrono::steady_clock::now();
    GLSolution solution = solve_graves_lai(instance, config);
    ConfusingResult certificate = most_confusing(instance, solution.eta, make_grid(instance, options.n));
    const double elapsed = seconds_since(start);

    json report = {
        {"value", solution.value},
        {"eta", solution.eta},
        {"constraint_value", solution.constraint_value},
        {"certified", solution.certified},
        {"scale_factor", real(solution.scale_factor)},
        {"gamma", solution.gamma},
        {"step", solution.step},
        {"n", options.n},
        {"t", options.t},
        {"certificate",
         {{"value", real(certificate.value)},
          {"lambda", certificate.lambda},
          {"witness", witness_json(certificate.witness, base)}}},
        {"wall_time_seconds", elapsed},
    };
    emit(report, options.out, out);
    return solution.certified ? kOk : kUncertified;
}

int cmd_confuse(const ConfuseOptions& options, IndexBase base, std::ostream& out, std::ostream&) {
    Instance instance = load_instance(options.instance, base);
    std::vector<double> eta;
    if (options.eta_is_file) {
        std::ifstream in(options.eta, std::ios::binary);
        if (!in) {
            throw Error(ErrorCode::ParseError, "cannot open " + options.eta);
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        eta = parse_real_list(buffer.str());
    } else {
        eta = parse_real_list(options.eta);
    }
    Grid grid = make_grid(instance, options.n);

    json report = {{"n", options.n}};
    switch (options.engine) {
        case Engine::Dp: {
            auto r = most_confusing(instance, eta, grid);
            report.update({{"engine", "dp"}, {"value", real(r.value)}, {"lambda", r.lambda},
                           {"witness", witness_json(r.witness, base)}});
            break;
        }
        case Engine::Fast: {
            auto r = solve_pgl_prime(instance, eta, grid);
            report.update({{"engine", "fast"}, {"value", real(r.value)}, {"lambda", r.lambda},
                           {"witness", witness_json(r.witness, base)}});
            break;
        }
        case Engine::Oracle: {
            auto r = enumerate_confusing(instance, eta, grid);
            report.update({{"engine", "oracle"}, {"value", real(r.value)}, {"lambda", r.lambda},
                           {"witness", nullptr}});
            break;
        }
    }
    out << report.dump(2) << '\n';
    return kOk;
}

int cmd_simulate(const SimulateOptions& options, IndexBase base, std::ostream& out, std::ostream& err) {
    std::optional<Instance> instance;
    if (options.instance) {
        instance = load_instance(*options.instance, base);
    } else {
        if (options.tree.empty() || options.modes.empty()) {
            throw Error(ErrorCode::InvalidArgument, "give --instance or a generator (--tree, --modes)");
        }
        const Arm k_star = options.k_star.value_or(options.modes.front());
        instance = generate_instance(tree_from_spec(options.tree), options.modes, k_star, options.sigma);
    }

    std::vector<std::pair<std::string, Policy>> runs;
    if (options.policy == "multimodal" || options.policy == "both") {
        runs.emplace_back("multimodal", Policy::Multimodal);
    }
    if (options.policy == "classical" || options.policy == "both") {
        runs.emplace_back("classical", Policy::Classical);
    }
    if (runs.empty()) {
        throw Error(ErrorCode::InvalidArgument, "unknown policy '" + options.policy + "'");
    }

    json summary = {{"instance", instance_to_json(*instance, base)}, {"horizon", options.config.horizon},
                    {"trials", options.config.trials}, {"seed", options.config.seed}};
    for (const auto& [name, policy] : runs) {
        SimConfig config = options.config;
        config.policy = policy;
        auto traces = run_ossb(*instance, config);
        auto trace = aggregate(traces);

        const auto path = runs.size() > 1 ? with_suffix(options.out, name) : options.out;
        auto file = open_output(path);
        write_aggregate_csv(file, trace);
        if (options.raw_out) {
            auto raw_path = runs.size() > 1 ? with_suffix(*options.raw_out, name) : *options.raw_out;
            auto raw = open_output(raw_path);
            write_raw_csv(raw, traces);
        }
        std::size_t fallbacks = 0;
        for (const auto& t : traces) {
            fallbacks += t.fallbacks;
        }
        summary["policies"][name] = {{"csv", path.string()},
                                     {"final_mean_regret", trace.mean.back()},
                                     {"final_std_error", trace.std_error.back()},
                                     {"classical_fallbacks", fallbacks}};
    }
    if (options.config.trials == 1) {
        err << "note: one trial, standard errors are zero\n";
    }
    out << summary.dump(2) << '\n';
    return kOk;
}

int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err) {
    json summary = {{"suite", options.suite}};
    std::ostringstream csv;
    csv.precision(17);
    if (options.suite == "scaling_k") {
        for (std::size_t K : options.scaling.ks) {
            if (K < 2) {
                err << "note: skipping K=" << K << ", a single arm has no confusing parameter\n";
            }
        }
        auto rows = scaling_benchmark(options.scaling);
        csv << "K,mean_seconds,min_seconds,max_seconds\n";
        std::vector<double> x, y;
        for (const auto& r : rows) {
            csv << r.K << ',' << r.time.mean << ',' << r.time.min << ',' << r.time.max << '\n';
            x.push_back(static_cast<double>(r.K));
            y.push_back(r.time.mean);
        }
        summary["rows"] = rows.size();
        summary["loglog_slope"] = x.size() >= 2 ? json(loglog_slope(x, y)) : json(nullptr);
    } else if (options.suite == "dp_compare") {
        auto rows = dp_compare_benchmark(options.compare);
        csv << "family,parameter,K,original_mean,original_min,original_max,fast_mean,fast_min,fast_max\n";
        std::vector<double> d, original, fast;
        for (const auto& r : rows) {
            const bool balanced = r.family == TreeFamily::Balanced;
            csv << (balanced ? "dary" : "random") << ',' << r.parameter << ',' << r.K << ',' << r.original.mean
                << ',' << r.original.min << ',' << r.original.max << ',' << r.fast.mean << ',' << r.fast.min
                << ',' << r.fast.max << '\n';
            if (balanced) {
                d.push_back(static_cast<double>(r.parameter));
                original.push_back(r.original.mean);
                fast.push_back(r.fast.mean);
            }
        }
        summary["rows"] = rows.size();
        if (d.size() >= 2) {
            summary["original_slope_in_d"] = loglog_slope(d, original);
            summary["fast_slope_in_d"] = loglog_slope(d, fast);
        }
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown suite '" + options.suite + "'");
    }
    if (options.out) {
        auto file = open_output(*options.out);
        file << csv.str();
    } else {
        out << csv.str();
    }
    (options.out ? out : err) << summary.dump() << '\n';
    return kOk;
}

int cmd_bounds(const BoundsOptions& options, IndexBase base, std::ostream& out, std::ostream&) {
    Instance instance = load_instance(options.instance, base);
    json report;
    try {
        BoundsReport b = local_search_bounds(instance);
        json deltas = json::array();
        for (auto [k, delta] : b.delta_per_mode) {
            deltas.push_back({{"mode", arm(k, base)}, {"delta", delta}});
        }
        report = {{"c_loc_lower", b.c_loc_lower ? json(*b.c_loc_lower) : json(nullptr)},
                  {"c_loc_upper", real(b.c_loc_upper)},
                  {"c_lower", real(b.c_lower)},
                  {"c_upper", real(b.c_upper)},
                  {"delta_per_mode", deltas},
                  {"local_eta", b.local_eta},
                  {"note", b.note}};
        report["local_eta_feasible"] = verify_local_eta_feasible(instance, options.n);
    } catch (const Error& e) {
        // Partial report: whatever the hypotheses allow.
        report["error"] = e.what();
    }
    if (options.kappa) {
        try {
            report["kappa"] = *options.kappa;
            report["kappa_peaked"] = is_kappa_peaked(instance, *options.kappa);
        } catch (const Error& e) {
            report["kappa_peaked"] = nullptr;
            report["kappa_error"] = e.what();
        }
    }
    out << report.dump(2) << '\n';
    return kOk;
}

int cmd_oracle_check(const OracleCheckOptions& options, IndexBase base, std::ostream& out, std::ostream& err) {
    if (options.cases == 0) {
        err << "warning: zero cases requested, nothing checked\n";
    }
    std::mt19937_64 rng(options.seed);
    std::size_t mismatches = 0;
    json dumped = json::array();
    for (std::size_t i = 0; i < options.cases; ++i) {
        OracleCase c = random_oracle_case(rng, options.max_K, options.max_n);
        Grid grid = make_grid(c.instance, c.n);
        const double oracle = enumerate_confusing(c.instance, c.eta, grid).value;
        const double dp = most_confusing(c.instance, c.eta, grid).value;
        double fast = solve_pgl_prime(c.instance, c.eta, grid).value;
        if (options.inject_fault) {
            fast += 1e-6;
        }
        const double tol = 1e-9 * std::max(1.0, std::abs(oracle));
        if (std::abs(dp - oracle) <= tol && std::abs(fast - oracle) <= tol) {
            continue;
        }
        ++mismatches;
        std::filesystem::create_directories(options.dump_dir);
        const auto path = options.dump_dir / ("case_" + std::to_string(i) + ".json");
        json doc = instance_to_json(c.instance, base);
        doc["eta"] = c.eta;
        doc["n"] = c.n;
        doc["values"] = {{"oracle", real(oracle)}, {"dp", real(dp)}, {"fast", real(fast)}};
        save_json(path, doc);
        dumped.push_back(path.string());
        err << "mismatch in case " << i << ": oracle " << oracle << ", dp " << dp << ", fast " << fast << '\n';
    }
    json summary = {{"cases", options.cases}, {"mismatches", mismatches}, {"dumped", dumped}};
    out << summary.dump(2) << '\n';
    return mismatches == 0 ? kOk : kMismatch;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Graves-Lai rates and multimodal OSSB on tree-structured bandits"};
    app.require_subcommand(1);
    app.fallthrough();
    bool one_based = false;
    app.add_flag("--one-based", one_based, "read and write arm indices starting at 1");

    SolveOptions solve;
    auto* solve_cmd = app.add_subcommand("solve", "approximate the Graves-Lai program");
    solve_cmd->add_option("instance", solve.instance, "instance file")->required();
    solve_cmd->add_option("-n,--n", solve.n, "grid resolution");
    solve_cmd->add_option("-t,--t", solve.t, "descent iterations");
    solve_cmd->add_option("--gamma", solve.gamma, "penalty weight");
    solve_cmd->add_option("-o,--out", solve.out, "report path (stdout if absent)");

    ConfuseOptions confuse;
    std::string eta_file;
    auto* confuse_cmd = app.add_subcommand("confuse", "most confusing parameter for given rates");
    confuse_cmd->add_option("instance", confuse.instance, "instance file")->required();
    auto* eta_inline = confuse_cmd->add_option("--eta", confuse.eta, "rates, comma separated");
    auto* eta_path = confuse_cmd->add_option("--eta-file", eta_file, "file holding the rates");
    eta_inline->excludes(eta_path);
    confuse_cmd->add_option("-n,--n", confuse.n, "grid resolution");
    confuse_cmd->add_option("--engine", confuse.engine, "dp, fast or oracle")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Engine>{{"dp", Engine::Dp}, {"fast", Engine::Fast}, {"oracle", Engine::Oracle}}));

    SimulateOptions simulate;
    std::string instance_path, modes, schedule = "powers";
    std::optional<std::size_t> k_star;
    auto* simulate_cmd = app.add_subcommand("simulate", "regret curves of multimodal and classical OSSB");
    auto* inst_opt = simulate_cmd->add_option("--instance", instance_path, "instance file");
    auto* tree_opt = simulate_cmd->add_option("--tree", simulate.tree, "generator tree, e.g. binary:h=2");
    inst_opt->excludes(tree_opt);
    simulate_cmd->add_option("--modes", modes, "generator modes, comma separated");
    simulate_cmd->add_option("--kstar", k_star, "generator best arm (default: first mode)");
    simulate_cmd->add_option("--sigma", simulate.sigma, "generator kernel width");
    simulate_cmd->add_option("--policy", simulate.policy, "multimodal, classical or both")
        ->check(CLI::IsMember({"multimodal", "classical", "both"}));
    simulate_cmd->add_option("-T,--horizon", simulate.config.horizon, "rounds per trial");
    simulate_cmd->add_option("--trials", simulate.config.trials, "independent trials");
    simulate_cmd->add_option("--seed", simulate.config.seed, "master seed");
    simulate_cmd->add_option("--schedule", schedule, "powers, every, or fixed:r1,r2,...");
    simulate_cmd->add_option("--descent-n", simulate.config.descent.n, "grid resolution of the rate solver");
    simulate_cmd->add_option("--descent-t", simulate.config.descent.t, "iterations of the rate solver");
    simulate_cmd->add_option("-o,--out", simulate.out, "aggregated CSV; gets a policy suffix with both")
        ->required();
    simulate_cmd->add_option("--raw", simulate.raw_out, "per-trial CSV");

    BenchOptions bench;
    std::string ks = "10,20,40", ds = "2,6,10", random_sizes;
    auto* bench_cmd = app.add_subcommand("bench", "runtime benchmarks");
    bench_cmd->add_option("suite", bench.suite, "scaling_k or dp_compare")
        ->required()
        ->check(CLI::IsMember({"scaling_k", "dp_compare"}));
    bench_cmd->add_option("--ks", ks, "line sizes for scaling_k");
    bench_cmd->add_option("--m", bench.scaling.m, "mode budget for scaling_k");
    bench_cmd->add_option("--t", bench.scaling.t, "descent iterations for scaling_k");
    bench_cmd->add_flag("--skip", bench.scaling.skip, "let scaling_k skip subproblems");
    bench_cmd->add_option("--ds", ds, "branching factors for dp_compare");
    bench_cmd->add_option("--height", bench.compare.height, "tree height for dp_compare");
    bench_cmd->add_option("--random-sizes", random_sizes, "random tree sizes for dp_compare");
    std::optional<std::size_t> bench_n, reps;
    std::uint64_t bench_seed = 1;
    bench_cmd->add_option("-n,--n", bench_n, "grid resolution (default 50 for scaling_k, 100 for dp_compare)");
    bench_cmd->add_option("--reps", reps, "repetitions per point (default 5)");
    bench_cmd->add_option("--seed", bench_seed, "seed for rates and random trees");
    bench_cmd->add_option("-o,--out", bench.out, "CSV path (stdout if absent)");

    BoundsOptions bounds;
    auto* bounds_cmd = app.add_subcommand("bounds", "local-search bounds and peakedness");
    bounds_cmd->add_option("instance", bounds.instance, "instance file")->required();
    bounds_cmd->add_option("--kappa", bounds.kappa, "peakedness threshold");
    bounds_cmd->add_option("-n,--n", bounds.n, "grid resolution of the feasibility check");

    OracleCheckOptions check;
    auto* check_cmd = app.add_subcommand("oracle-check", "cross-check both DPs against enumeration");
    check_cmd->add_option("--seed", check.seed, "seed");
    check_cmd->add_option("--cases", check.cases, "random cases");
    check_cmd->add_option("--max-k", check.max_K, "largest tree");
    check_cmd->add_option("--max-n", check.max_n, "largest grid resolution");
    check_cmd->add_option("--dump-dir", check.dump_dir, "where failing cases are written");
    check_cmd->add_flag("--inject-fault", check.inject_fault)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kError;
    }

    const IndexBase base{one_based};
    try {
        if (*solve_cmd) {
            return cmd_solve(solve, base, out, err);
        }
        if (*confuse_cmd) {
            if (!eta_file.empty()) {
                confuse.eta = eta_file;
                confuse.eta_is_file = true;
            } else if (confuse.eta.empty()) {
                throw Error(ErrorCode::InvalidArgument, "give --eta or --eta-file");
            }
            return cmd_confuse(confuse, base, out, err);
        }
        if (*simulate_cmd) {
            if (!instance_path.empty()) {
                simulate.instance = instance_path;
            }
            if (!modes.empty()) {
                simulate.modes = parse_arm_list(modes, base);
            }
            if (k_star) {
                if (*k_star < base.offset()) {
                    throw Error(ErrorCode::InvalidArgument, "--kstar below the index base");
                }
                simulate.k_star = *k_star - base.offset();
            }
            if (schedule == "powers") {
                simulate.config.schedule = Schedule::PowersOfTwo;
            } else if (schedule == "every") {
                simulate.config.schedule = Schedule::EveryRound;
            } else if (schedule.rfind("fixed:", 0) == 0) {
                simulate.config.schedule = Schedule::FixedSet;
                for (double r : parse_real_list(schedule.substr(6))) {
                    simulate.config.fixed_rounds.push_back(static_cast<std::size_t>(r));
                }
            } else {
                throw Error(ErrorCode::InvalidArgument, "unknown schedule '" + schedule + "'");
            }
            return cmd_simulate(simulate, base, out, err);
        }
        if (*bench_cmd) {
            auto sizes = [](const std::string& text) {
                std::vector<std::size_t> v;
                for (double x : parse_real_list(text)) {
                    if (x < 0 || x != std::floor(x)) {
                        throw Error(ErrorCode::InvalidArgument, "sizes must be nonnegative integers");
                    }
                    v.push_back(static_cast<std::size_t>(x));
                }
                return v;
            };
            bench.scaling.ks = sizes(ks);
            bench.compare.branching = sizes(ds);
            bench.compare.random_sizes = sizes(random_sizes);
            bench.compare.seed = bench_seed;
            if (bench_n) {
                bench.scaling.n = bench.compare.n = *bench_n;
            }
            if (reps) {
                bench.scaling.reps = bench.compare.reps = *reps;
            }
            return cmd_bench(bench, out, err);
        }
        if (*bounds_cmd) {
            return cmd_bounds(bounds, base, out, err);
        }
        return cmd_oracle_check(check, base, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
}

}  // namespace gravelai::cli
