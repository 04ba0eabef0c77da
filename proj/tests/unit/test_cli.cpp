#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "gravelai/cli.hpp"
#include "gravelai/error.hpp"
#include "gravelai/instance_io.hpp"

using namespace gravelai;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kData = GRAVELAI_TEST_DATA;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "gravelai");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / "gravelai_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

std::string five() { return (kData / "line_five.json").string(); }

}  // namespace

TEST_CASE("instance files round-trip and report bad fields") {
    Instance inst = load_instance(kData / "line_five.json");
    CHECK(inst.arms() == 5);
    CHECK(inst.modes() == std::vector<Arm>{2, 4});
    CHECK(instance_from_json(instance_to_json(inst)).mu() == inst.mu());

    auto shifted = instance_to_json(inst, {true});
    CHECK(shifted["edges"][0] == json::array({1, 2}));
    CHECK(instance_from_json(shifted, {true}).tree().edges() == inst.tree().edges());

    auto message = [](const std::string& text) {
        try {
            parse_instance(text);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ParseError);
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message(R"({"arms": 2, "edges": [[0, 1]], "mu": [1, "x"], "m": 1})").find("mu[1]") != std::string::npos);
    CHECK(message(R"({"arms": 2, "edges": [[0, 1]]
        "mu": [1]})").find("line 2") != std::string::npos);
    CHECK(message(R"({"arms": 2, "edges": [[0, 1]], "mu": [1, 2]})").find("'m'") != std::string::npos);
    CHECK(message(R"({"arms": 3, "edges": [[0, 1]], "mu": [1, 2, 3], "m": 1})").find("NotATree") !=
          std::string::npos);
    CHECK(message(R"({"arms": 2, "edges": [[0, 1]], "mu": [1, 2], "m": 1, "model": {"kind": "poisson"}})")
              .find("model.kind") != std::string::npos);
    CHECK_THROWS_AS(instance_from_json(json::parse(R"({"arms": 2, "edges": [[0, 1]], "mu": [1, 2], "m": 1})"),
                                       {true}),
                    Error);
}

TEST_CASE("list and tree-spec parsing") {
    CHECK(parse_real_list("0.5, 1,2") == std::vector<double>{0.5, 1, 2});
    CHECK(parse_real_list("[1e-2, 3]") == std::vector<double>{0.01, 3});
    CHECK_THROWS_AS(parse_real_list("1,two"), Error);
    CHECK(parse_arm_list("5,7", {true}) == std::vector<Arm>{4, 6});
    CHECK_THROWS_AS(parse_arm_list("0", {true}), Error);
    CHECK(tree_from_spec("binary:h=2").size() == 7);
    CHECK(tree_from_spec("line:12").size() == 12);
    CHECK(tree_from_spec("dary:d=3,h=2").size() == 13);
    CHECK(tree_from_spec("star:K=6").degree(0) == 5);
    CHECK(tree_from_spec("random:K=9,seed=4").edges() == tree_from_spec("random:K=9,seed=4").edges());
    CHECK_THROWS_AS(tree_from_spec("dary:d=3"), Error);
    CHECK_THROWS_AS(tree_from_spec("ring:5"), Error);
}

TEST_CASE("confuse matches the golden report and agrees across engines") {
    auto dp = run({"confuse", five(), "--eta", "0.01,0.25,1,0.25,1", "-n", "200", "--engine", "dp"});
    CHECK(dp.code == 0);
    CHECK(dp.out == slurp(kData / "golden" / "confuse_dp.json"));

    auto fast = run({"confuse", five(), "--eta", "0.01,0.25,1,0.25,1", "-n", "200", "--engine", "fast"});
    CHECK(json::parse(fast.out)["value"] == json::parse(dp.out)["value"]);

    auto eta_file = scratch("eta.json");
    std::ofstream(eta_file) << "[0.01, 0.25, 1, 0.25, 1]\n";
    auto from_file = run({"confuse", five(), "--eta-file", eta_file.string(), "-n", "200"});
    CHECK(from_file.out == dp.out);

    auto shifted = scratch("five_one_based.json");
    save_json(shifted, instance_to_json(load_instance(five()), {true}));
    auto one_based =
        json::parse(run({"--one-based", "confuse", shifted.string(), "--eta", "0.01,0.25,1,0.25,1", "-n", "200"}).out);
    CHECK(one_based["witness"]["k"] == 1);
    CHECK(one_based["witness"]["k_prime"] == 5);

    auto oracle = run({"confuse", five(), "--eta", "0.01,0.25,1,0.25,1", "-n", "4", "--engine", "oracle"});
    auto small_dp = run({"confuse", five(), "--eta", "0.01,0.25,1,0.25,1", "-n", "4"});
    CHECK(json::parse(oracle.out)["value"] == json::parse(small_dp.out)["value"]);
    CHECK(run({"confuse", five(), "--eta", "0.01,0.25,1,0.25,1", "-n", "200", "--engine", "oracle"}).code == 1);

    auto short_eta = run({"confuse", five(), "--eta", "0.01,0.25,1"});
    CHECK(short_eta.code == 1);
    CHECK(short_eta.err.find("DimensionMismatch") != std::string::npos);
    CHECK(run({"confuse", five()}).code == 1);
}

TEST_CASE("solve reports a stable schema and exit codes") {
    auto r = run({"solve", five(), "-n", "1", "-t", "1"});
    CHECK(r.code == cli::kUncertified);
    auto doc = json::parse(r.out);
    std::vector<std::string> keys;
    for (auto& [key, _] : doc.items()) {
        keys.push_back(key);
    }
    CHECK(keys == std::vector<std::string>{"certificate", "certified", "constraint_value", "eta", "gamma",
                                           "n", "scale_factor", "step", "t", "value", "wall_time_seconds"});
    CHECK(doc["certified"] == false);
    CHECK(doc["scale_factor"].is_null());
    CHECK(doc["eta"] == json::array({0.0, 0.0, 0.0, 0.0, 0.0}));

    auto pair = scratch("pair.json");
    std::ofstream(pair) << R"({"arms": 2, "edges": [[0, 1]], "mu": [0, 1], "m": 1})";
    auto out = scratch("pair_report.json");
    auto certified = run({"solve", pair.string(), "-n", "100", "-t", "2000", "-o", out.string()});
    CHECK(certified.code == cli::kOk);
    auto report = json::parse(slurp(out));
    CHECK(report["certified"] == true);
    CHECK(report["certificate"]["value"].get<double>() >= 1.0 - 1e-9);
    CHECK(report["value"].get<double>() >= 2.0 - 1e-9);

    auto bad = scratch("bad.json");
    std::ofstream(bad) << "{\"arms\": 2,";
    auto malformed = run({"solve", bad.string()});
    CHECK(malformed.code == cli::kError);
    CHECK(malformed.err.find("ParseError") != std::string::npos);
    CHECK(run({"solve", (kData / "missing.json").string()}).code == cli::kError);
}

TEST_CASE("simulate writes deterministic traces") {
    auto out = scratch("sim.csv");
    std::vector<std::string> args{"simulate", "--tree", "binary:h=2", "--modes", "4,6", "--kstar", "6",
                                  "--sigma", "0.5", "--policy", "classical", "-T", "12", "--trials", "2",
                                  "--seed", "7", "-o", out.string()};
    CHECK(run(args).code == 0);
    CHECK(slurp(out) == slurp(kData / "golden" / "simulate_classical.csv"));

    args[8] = "0.5";
    args[10] = "both";
    args[12] = "40";
    args[14] = "1";
    auto first = run(args);
    CHECK(first.code == 0);
    auto multimodal = slurp(scratch("sim_multimodal.csv"));
    auto classical = slurp(scratch("sim_classical.csv"));
    CHECK(multimodal.rfind("round,mean_regret,std_error\n", 0) == 0);
    CHECK(run(args).code == 0);
    CHECK(slurp(scratch("sim_multimodal.csv")) == multimodal);
    CHECK(slurp(scratch("sim_classical.csv")) == classical);
    CHECK(json::parse(first.out)["policies"].size() == 2);

    auto one_based = run({"--one-based", "simulate", "--tree", "binary:h=2", "--modes", "5,7", "--kstar", "7",
                          "--policy", "classical", "-T", "40", "--trials", "1", "--seed", "7",
                          "-o", scratch("ob.csv").string()});
    CHECK(one_based.code == 0);
    CHECK(slurp(scratch("ob.csv")) == classical);

    auto flat = run({"simulate", "--tree", "binary:h=2", "--modes", "4,6", "--kstar", "6", "--sigma", "100",
                     "-T", "10", "--trials", "1", "-o", out.string()});
    CHECK(flat.code == cli::kError);
    CHECK(flat.err.find("ModesNotRealized") != std::string::npos);
    CHECK(run({"simulate", "--tree", "binary:h=2", "-o", out.string()}).code == cli::kError);
}

TEST_CASE("bounds golden report") {
    auto r = run({"bounds", five(), "--kappa", "16", "-n", "200"});
    CHECK(r.code == 0);
    CHECK(r.out == slurp(kData / "golden" / "bounds.json"));

    auto uni = scratch("uni.json");
    std::ofstream(uni) << R"({"arms": 4, "edges": [[0, 1], [1, 2], [2, 3]], "mu": [0, 1, 2, 3], "m": 2})";
    auto doc = json::parse(run({"bounds", uni.string()}).out);
    CHECK(doc["c_loc_lower"] == 0.0);

    auto bern = scratch("bern.json");
    std::ofstream(bern) << R"({"arms": 3, "edges": [[0, 1], [1, 2]], "mu": [0.9, 0.2, 0.5], "m": 2,
                              "model": {"kind": "bernoulli"}})";
    CHECK(json::parse(run({"bounds", bern.string(), "--kappa", "4"}).out)["kappa_peaked"].is_boolean());

    // A single arm violates the hypotheses; the report is partial, not an error exit.
    auto single = scratch("single.json");
    std::ofstream(single) << R"({"arms": 1, "edges": [], "mu": [1], "m": 1})";
    auto partial = run({"bounds", single.string(), "--kappa", "4"});
    CHECK(partial.code == 0);
    auto partial_doc = json::parse(partial.out);
    CHECK(partial_doc.contains("error"));
    CHECK(partial_doc.contains("kappa_peaked"));
}

TEST_CASE("oracle-check passes, flags injected faults and dumps repros") {
    auto pass = run({"oracle-check", "--cases", "100", "--max-k", "6", "--max-n", "8", "--seed", "3"});
    CHECK(pass.code == cli::kOk);
    CHECK(json::parse(pass.out)["mismatches"] == 0);

    auto dir = scratch("failures");
    fs::remove_all(dir);
    auto fail = run({"oracle-check", "--cases", "3", "--inject-fault", "--dump-dir", dir.string()});
    CHECK(fail.code == cli::kMismatch);
    auto dumped = json::parse(fail.out)["dumped"];
    REQUIRE(dumped.size() == 3);
    auto repro = json::parse(slurp(dumped[0].get<std::string>()));
    CHECK_NOTHROW(instance_from_json(repro));
    CHECK(repro.contains("eta"));

    auto none = run({"oracle-check", "--cases", "0"});
    CHECK(none.code == cli::kOk);
    CHECK(none.err.find("warning") != std::string::npos);
}

TEST_CASE("bench skips single-arm lines and writes CSV") {
    auto r = run({"bench", "scaling_k", "--ks", "1,4,6", "-n", "5", "--t", "3", "--reps", "1"});
    CHECK(r.code == 0);
    CHECK(r.err.find("skipping K=1") != std::string::npos);
    CHECK(r.out.rfind("K,mean_seconds,min_seconds,max_seconds\n4,", 0) == 0);

    auto csv = scratch("dp.csv");
    auto c = run({"bench", "dp_compare", "--ds", "2,3", "--height", "2", "--random-sizes", "12", "-n", "10",
                  "--reps", "1", "-o", csv.string()});
    CHECK(c.code == 0);
    auto summary = json::parse(c.out);
    CHECK(summary["rows"] == 3);
    CHECK(summary.contains("fast_slope_in_d"));
    CHECK(slurp(csv).rfind("family,parameter,K,original_mean", 0) == 0);
    CHECK(run({"bench", "nonsense"}).code == cli::kError);
}

TEST_CASE("help and usage errors") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({}).code == cli::kError);
    CHECK(run({"solve"}).code == cli::kError);
}
