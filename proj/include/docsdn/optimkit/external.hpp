#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "docsdn/optimkit/lp_format.hpp"
#include "docsdn/optimkit/model.hpp"

namespace docsdn::opt {

class SolverError : public OptError {
 public:
  using OptError::OptError;
};

struct ExternalSolverConfig {
  // Shell command with {model}, {solution} and {timelimit} placeholders.
  std::string command;
  std::string solution_format = "plain";  // "plain" or "cbc"
  QuadMode quad_mode = QuadMode::kPiecewise;
  int pieces = 8;
  std::filesystem::path work_dir;  // empty: a fresh directory under temp
  bool keep_files = false;
};

// Ready-made configurations: "highs" (MILP, piecewise), "scip" (native
// MIQP), "cbc" (MILP, piecewise). The command template can be overridden
// through the DOCSDN_SOLVER_CMD environment variable.
ExternalSolverConfig preset_solver(std::string_view name);

// Writes the model as an LP file, runs the command, parses and re-verifies
// the returned point. Binaries are snapped to 0/1 and the objective is the
// exact model objective evaluated in-process (so piecewise solves report
// their true cost, which exceeds the optimum by at most the error bound).
Solution solve_external(const Model& model, const ExternalSolverConfig& config,
                        const Limits& limits = {});

class ExternalBackend final : public Backend {
 public:
  ExternalBackend(std::string name, ExternalSolverConfig config)
      : name_(std::move(name)), config_(std::move(config)) {}
  Solution solve(const Model& model, const Limits& limits) const override {
    return solve_external(model, config_, limits);
  }
  std::string name() const override { return name_; }
  const ExternalSolverConfig& config() const { return config_; }

 private:
  std::string name_;
  ExternalSolverConfig config_;
};

}  // namespace docsdn::opt
