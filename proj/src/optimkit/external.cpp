#include "docsdn/optimkit/external.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef DOCSDN_SOLVER_DIR
#define DOCSDN_SOLVER_DIR "tools/solvers"
#endif
#ifndef DOCSDN_CBC_BIN
#define DOCSDN_CBC_BIN "cbc"
#endif

namespace docsdn::opt {
namespace fs = std::filesystem;
namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string replace_all(std::string s, std::string_view from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos;) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

std::string quote(const fs::path& p) {
  return "'" + replace_all(p.string(), "'", "'\\''") + "'";
}

std::string tail(const std::string& s, std::size_t n = 800) {
  return s.size() <= n ? s : s.substr(s.size() - n);
}

fs::path make_work_dir(const ExternalSolverConfig& cfg) {
  static std::atomic<int> counter{0};
  const fs::path base = cfg.work_dir.empty() ? fs::temp_directory_path() : cfg.work_dir;
  const fs::path dir = base / ("docsdn-" + std::to_string(::getpid()) + "-" +
                               std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

ExternalSolverConfig preset_solver(std::string_view name) {
  ExternalSolverConfig cfg;
  const std::string dir = DOCSDN_SOLVER_DIR;
  if (name == "highs") {
    cfg.command = "python3 " + dir + "/highs_lp.py {model} {solution} {timelimit}";
  } else if (name == "scip") {
    cfg.command = "python3 " + dir + "/scip_lp.py {model} {solution} {timelimit}";
    cfg.quad_mode = QuadMode::kNative;
  } else if (name == "cbc") {
    const char* bin = std::getenv("DOCSDN_CBC_BIN");
    cfg.command = std::string(bin ? bin : DOCSDN_CBC_BIN) +
                  " {model} sec {timelimit} ratio 0 allow 0 solve solu {solution}";
    cfg.solution_format = "cbc";
  } else {
    throw SolverError("unknown solver preset: " + std::string(name));
  }
  if (const char* cmd = std::getenv("DOCSDN_SOLVER_CMD"); cmd && *cmd) {
    cfg.command = cmd;
  }
  return cfg;
}

Solution solve_external(const Model& model, const ExternalSolverConfig& config,
                        const Limits& limits) {
  if (config.command.empty()) throw SolverError("no solver command configured");
  Solution sol;
  if (model.num_vars() == 0) {
    // Nothing to hand over; the model is just its constant rows.
    if (model.find_violation({}, kFeasTol, kIntTol)) {
      sol.status = SolveStatus::kInfeasible;
      return sol;
    }
    sol.status = SolveStatus::kOptimal;
    sol.objective = model.objective_value({});
    return sol;
  }

  const LpExport lp = write_lp(model, config.quad_mode, config.pieces);
  const fs::path dir = make_work_dir(config);
  const fs::path model_path = dir / "model.lp";
  const fs::path sol_path = dir / "solution.txt";
  const fs::path log_path = dir / "solver.log";
  {
    std::ofstream out(model_path);
    out << lp.text;
    if (!out) throw SolverError("cannot write " + model_path.string());
  }

  std::string cmd = config.command;
  cmd = replace_all(cmd, "{model}", quote(model_path));
  cmd = replace_all(cmd, "{solution}", quote(sol_path));
  cmd = replace_all(cmd, "{timelimit}",
                    std::to_string(std::max(1, static_cast<int>(std::ceil(limits.time_limit_s)))));
  cmd += " > " + quote(log_path) + " 2>&1";

  const int raw = std::system(cmd.c_str());
  const int code = raw == -1 ? -1 : (WIFEXITED(raw) ? WEXITSTATUS(raw) : 128);
  const std::string log = read_file(log_path);
  auto cleanup = [&] {
    if (!config.keep_files) {
      std::error_code ec;
      fs::remove_all(dir, ec);
    }
  };
  if (code == 127) {
    cleanup();
    throw SolverError("solver not found: " + config.command);
  }
  if (code != 0 || !fs::exists(sol_path)) {
    cleanup();
    throw SolverError("solver failed (exit " + std::to_string(code) + "): " + tail(log));
  }

  ParsedSolution parsed;
  try {
    parsed = parse_solution(read_file(sol_path), config.solution_format);
  } catch (const OptError& e) {
    cleanup();
    throw SolverError(std::string(e.what()));
  }
  cleanup();

  sol.status = parsed.status;
  sol.reported_objective = parsed.objective;
  // Solvers may omit zero-valued columns, so an optimal status with no
  // listed values still denotes the all-zero point.
  if (parsed.status == SolveStatus::kInfeasible) return sol;
  if (parsed.status == SolveStatus::kLimit && !parsed.has_point) return sol;

  std::vector<double> values(model.num_vars(), 0.0);
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    auto it = parsed.values.find(lp.names[j]);
    if (it != parsed.values.end()) values[j] = it->second;
  }
  if (auto bad = model.find_violation(values, kFeasTol, kIntTol)) {
    throw SolverError("solver point failed re-verification: " + *bad);
  }
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    const auto& v = model.vars()[j];
    if (v.kind == VarKind::kBinary) values[j] = std::round(values[j]);
    values[j] = std::clamp(values[j], v.lo, v.hi);
  }
  sol.values = std::move(values);
  sol.objective = model.objective_value(sol.values);
  return sol;
}

}  // namespace docsdn::opt
