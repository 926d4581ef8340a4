#pragma once

// Command implementations behind the `sparsify` executable. Each command
// writes its output graph, re-reads it, recomputes every certified claim from
// the file and returns a report. Wall-clock numbers live under "timings" so
// that everything else is reproducible byte for byte.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace sparsify::cli {

using Report = nlohmann::ordered_json;

struct PatchArgs {
    std::string g_path, w_path, out_path, trace_csv;
    int k = 1;
    int budget = 0;  ///< 0 selects 8k + 1
};

struct UltraArgs {
    std::string g_path, out_path, trace_csv;
    int k = 1;
    double c1 = 4.0;
    double c3 = 1.0;
    std::uint64_t seed = 1;
};

struct AlgconnArgs {
    std::string base_path, cand_path, out_path, trace_csv;
    int k = 1;
    double tol = 1e-4;
    bool oracle = false;
};

struct VerifyArgs {
    std::string g_path, h_path;
};

Report cmd_patch(const PatchArgs& args);
Report cmd_ultra(const UltraArgs& args);
Report cmd_algconn(const AlgconnArgs& args);
Report cmd_verify(const VerifyArgs& args);

/// Whole front end: parses argv, runs one command, prints the report to
/// `out` (or --report) and diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

/// Report with "timings" removed, for determinism checks.
Report strip_timings(Report report);

}  // namespace sparsify::cli
