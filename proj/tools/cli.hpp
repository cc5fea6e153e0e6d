#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmk/lp.hpp"
#include "mmk/measures.hpp"
#include "mmk/potentials.hpp"

namespace mmk::cli {

struct ProblemFile {
    MarginalFamily family;
    std::optional<CostGrid> cost;
    std::optional<std::vector<DiscreteMeasure>> refs;
};

// Throws DomainError (or a json exception) on malformed input.
ProblemFile parse_problem(const nlohmann::json& j);
nlohmann::json to_json(const ProblemFile& p);

struct RunConfig {
    lp::Arithmetic arithmetic = lp::Arithmetic::Exact;
    double tolerance = 1e-9;
    std::uint64_t seed = 1;
    std::string out;      // report path, empty for stdout
    std::string out_dir;  // image directory
};

enum Exit { Ok = 0, Malformed = 1, Infeasible = 2 };

// Full command line without the program name. Output goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mmk::cli
