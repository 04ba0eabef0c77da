#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gravelai/bench.hpp"
#include "gravelai/instance_io.hpp"
#include "gravelai/simulator.hpp"

namespace gravelai::cli {

enum ExitCode : int {
    kOk = 0,
    kError = 1,
    kUncertified = 2,
    kMismatch = 3,
};

struct SolveOptions {
    std::filesystem::path instance;
    std::size_t n = 100;
    std::size_t t = 1000;
    std::optional<double> gamma;
    std::optional<std::filesystem::path> out;
};

enum class Engine { Dp, Fast, Oracle };

struct ConfuseOptions {
    std::filesystem::path instance;
    std::string eta;  // inline list, or a path when eta_is_file
    bool eta_is_file = false;
    std::size_t n = 100;
    Engine engine = Engine::Dp;
};

struct SimulateOptions {
    std::optional<std::filesystem::path> instance;
    std::string tree;  // generator spec when no instance is given
    std::vector<Arm> modes;
    std::optional<Arm> k_star;
    double sigma = 0.5;
    std::string policy = "both";
    SimConfig config;
    std::filesystem::path out;
    std::optional<std::filesystem::path> raw_out;
};

struct BenchOptions {
    std::string suite;
    ScalingParams scaling;
    DpCompareParams compare;
    std::optional<std::filesystem::path> out;
};

struct BoundsOptions {
    std::filesystem::path instance;
    std::optional<double> kappa;
    std::size_t n = 200;
};

struct OracleCheckOptions {
    std::uint64_t seed = 1;
    std::size_t cases = 100;
    std::size_t max_K = 6;
    std::size_t max_n = 8;
    std::filesystem::path dump_dir = "oracle_failures";
    bool inject_fault = false;  // negative control: perturbs the fast DP value
};

int cmd_solve(const SolveOptions& options, IndexBase base, std::ostream& out, std::ostream& err);
int cmd_confuse(const ConfuseOptions& options, IndexBase base, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& options, IndexBase base, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err);
int cmd_bounds(const BoundsOptions& options, IndexBase base, std::ostream& out, std::ostream& err);
int cmd_oracle_check(const OracleCheckOptions& options, IndexBase base, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches. Errors of any kind come back as kError with a message on `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gravelai::cli
