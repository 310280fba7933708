#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "singma/config.hpp"
#include "singma/csv.hpp"
#include "singma/domain.hpp"
#include "singma/rhs.hpp"
#include "singma/solver.hpp"

namespace singma {

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"verify-barriers", "solve",      "fit-exponent", "compare",
                                                "bootstrap",       "mixc-probe", "reproduce-all"};
    return names;
}

/// Every key the harness understands, with its default rendered as text.
const std::map<std::string, std::string>& config_defaults();

Domain domain_from_config(const Config& cfg);
RhsSpec rhs_from_config(const Config& cfg);
SolveConfig solve_config_from(const Config& cfg);
/// Rejects unknown keys and out-of-range values before any work starts.
void validate_config(const std::string& subcommand, const Config& cfg);

/// SINGMA_OUTPUT_DIR when set, else output.dir.
std::string output_directory(const Config& cfg);

/// Memoised solves shared by the experiments of one run.
class SolutionCache {
public:
    const DiscreteSolution& get(const Domain& domain, const RhsSpec& rhs, const SolveConfig& cfg);

private:
    std::map<std::string, DiscreteSolution> solutions_;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::string expected;
    std::string measured;
    std::string tolerance;
    bool pass = false;
    std::uint64_t seed = 1;
    double runtime_seconds = 0.0;
};

constexpr int kCriterionCount = 11;

CriterionResult run_criterion(int id, std::uint64_t seed, SolutionCache& cache);
CsvTable criteria_table(const std::vector<CriterionResult>& rows);
CsvTable criteria_timing_table(const std::vector<CriterionResult>& rows);

struct RunOutcome {
    int exit_code = 0;  // 0 pass, 1 a check failed, 2 configuration error
    std::vector<std::string> files;
};

/// Run one subcommand. Progress lines go to `log`; CSV files go to the output directory.
RunOutcome run(const std::string& subcommand, const Config& cfg, std::ostream& log);

}  // namespace singma
