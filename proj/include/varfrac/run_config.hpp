#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "varfrac/semilinear_solver.hpp"
#include "varfrac/sir.hpp"

namespace varfrac {

// Configuration problems exit with code 2; solver failures with code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Schema-validated run description; unknown keys are rejected with the
// offending key path in the message.
struct RunConfig {
    std::string problem;  // linear | semilinear | sir
    std::size_t nx = 64;
    double left = 0.0;
    double right = 1.0;
    std::size_t nt = 256;
    double horizon = 1.0;
    double p = 2.0;
    Scheme scheme = Scheme::L1Linear;
    std::uint64_t seed = 42;
    double blowup_threshold = 1e8;
    std::string output;
    std::string diagnostics;
    PicardConfig picard;

    SpatialGridPtr grid;
    std::optional<OrderField> alpha;
    std::optional<BoundedOperator> op;  // linear problems
    std::optional<Field> initial;       // linear / semilinear
    std::optional<SemilinearRhs> rhs;   // semilinear
    SirParams sir_params;               // sir
    std::optional<SirState> sir_initial;
};

RunConfig load_run_config(const std::filesystem::path& file);

// CSV emission, fixed headers, 17 significant digits.
void write_solution_csv(const std::string& path, const SolveReport& rep);
void write_sir_csv(const std::string& path, const SirReport& rep);
void write_sir_diagnostics_csv(const std::string& path, const SirReport& rep);

}  // namespace varfrac
