// docsdn: batch driver for the two-layer routing/security optimizer.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "docsdn/coordinator/coordinator.hpp"
#include "docsdn/fixtures/fixtures.hpp"
#include "docsdn/kpaths/kpaths.hpp"
#include "docsdn/optimkit/exact.hpp"
#include "docsdn/optimkit/external.hpp"
#include "docsdn/scenario/scenario.hpp"

namespace fs = std::filesystem;
using namespace docsdn;

namespace {

constexpr int kUsage = 1;
constexpr int kInfeasible = 2;

struct Overrides {
  std::optional<int> k;
  std::vector<double> alpha;
  std::vector<double> beta;
};

void apply(Scenario& s, const Overrides& o) {
  if (o.k) s.paths_per_pair = *o.k;
  if (!o.alpha.empty()) std::copy(o.alpha.begin(), o.alpha.end(), s.weights.alpha.begin());
  if (!o.beta.empty()) std::copy(o.beta.begin(), o.beta.end(), s.weights.beta.begin());
}

std::unique_ptr<opt::Backend> make_backend(const std::string& name, const std::string& quad,
                                           int pieces) {
  if (name == "exact") return std::make_unique<opt::ExactBackend>();
  auto config = opt::preset_solver(name);
  if (quad == "native") config.quad_mode = opt::QuadMode::kNative;
  if (quad == "piecewise") config.quad_mode = opt::QuadMode::kPiecewise;
  config.pieces = pieces;
  return std::make_unique<opt::ExternalBackend>(name, config);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void emit_scenario(const Scenario& s, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << serialize_scenario(s);
  } else {
    save_scenario_file(s, out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint routing and security configuration with feedback cuts"};
  app.require_subcommand(1);

  std::string scenario_path;
  Overrides overrides;
  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--k", overrides.k, "Candidate paths per endpoint pair")->check(CLI::PositiveNumber);
    sub->add_option("--alpha", overrides.alpha, "Functional weights a0,a1,a2")->expected(3)->delimiter(',');
    sub->add_option("--beta", overrides.beta, "Security weights b0,b1,b2,b3")->expected(4)->delimiter(',');
  };

  auto* run = app.add_subcommand("run", "Run the optimizer on a scenario");
  std::string backend_name = "exact";
  std::string quad;
  std::string out_dir = "out";
  int pieces = 8;
  bool dot_every = false;
  int max_iter = 1000;
  double budget = 600.0;
  run->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  run->add_option("--backend", backend_name, "exact, highs, scip or cbc")
      ->check(CLI::IsMember({"exact", "highs", "scip", "cbc"}));
  run->add_option("--quad", quad, "Quadratic handling for external solvers")
      ->check(CLI::IsMember({"native", "piecewise"}));
  run->add_option("--pieces", pieces, "Piecewise segments per quadratic term")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--max-iterations", max_iter)->check(CLI::PositiveNumber);
  run->add_option("--time-budget", budget, "Wall-clock budget in seconds")->check(CLI::PositiveNumber);
  run->add_flag("--dot-every-iter", dot_every, "Write iter<i>.dot for every iteration");
  add_overrides(run);

  auto* fat = app.add_subcommand("gen-fat-tree", "Generate the fat-tree workload");
  FatTreeScenarioSpec fspec;
  std::string gen_out;
  fat->add_option("--order", fspec.tree.order)->check(CLI::PositiveNumber);
  fat->add_option("--gateways", fspec.tree.gateways)->check(CLI::PositiveNumber);
  fat->add_option("--hosts-per-edge", fspec.tree.hosts_per_edge)->check(CLI::PositiveNumber);
  fat->add_option("--flows", fspec.flows)->check(CLI::NonNegativeNumber);
  fat->add_option("--external", fspec.external)->check(CLI::NonNegativeNumber);
  fat->add_option("--high-risk", fspec.high_risk)->check(CLI::NonNegativeNumber);
  fat->add_option("--risk", fspec.high_risk_value, "Risk of the high-risk hosts");
  fat->add_option("--seed", fspec.seed);
  fat->add_option("--out", gen_out, "Output file (default stdout)");
  add_overrides(fat);

  auto* toy = app.add_subcommand("gen-toy", "Generate the four-host example");
  ToyOptions topts;
  toy->add_option("--h1-risk", topts.h1_risk)->check(CLI::Range(1.0, 1e9));
  toy->add_option("--out", gen_out, "Output file (default stdout)");
  add_overrides(toy);

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("--scenario", scenario_path)->required();

  auto* paths = app.add_subcommand("paths", "Dump the primed candidate paths");
  paths->add_option("--scenario", scenario_path)->required();
  add_overrides(paths);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*fat) {
      if (fspec.tree.order % 2 != 0) throw CLI::ValidationError("--order", "must be even");
      Scenario s = fat_tree_scenario(fspec);
      apply(s, overrides);
      emit_scenario(s, gen_out);
      return 0;
    }
    if (*toy) {
      Scenario s = toy_scenario(topts);
      apply(s, overrides);
      emit_scenario(s, gen_out);
      return 0;
    }
    if (*validate) {
      // Parse failures carry the full list of violations.
      Scenario s;
      try {
        s = load_scenario_file(scenario_path);
      } catch (const ScenarioError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
      }
      std::cout << "ok: " << s.nodes.size() << " nodes, " << s.edges.size() << " edges, "
                << s.flows.size() << " flows\n";
      return 0;
    }

    Scenario s = load_scenario_file(scenario_path);
    apply(s, overrides);
    if (auto v = validate_scenario(s); !v.empty()) {
      for (const auto& x : v) std::cerr << x.entity << ": " << x.message << "\n";
      return kUsage;
    }
    if (*paths) {
      std::cout << build_pool(s).dump();
      return 0;
    }

    auto backend = make_backend(backend_name, quad, pieces);
    RunOptions options;
    options.max_iterations = max_iter;
    options.wall_budget_s = budget;
    const RunResult result = run_framework(s, *backend, options);

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    write_file(dir / "report.txt", report_text(s, result));
    write_file(dir / "report.csv", report_csv(result));
    write_file(dir / "rules.sdn", emit_sdn_fragments(s, result));
    if (dot_every) {
      for (std::size_t i = 0; i < result.history.size(); ++i) {
        write_file(dir / ("iter" + std::to_string(i) + ".dot"), iteration_dot(s, result, static_cast<int>(i)));
      }
    } else {
      const int b = result.best_iteration;
      write_file(dir / ("iter" + std::to_string(b) + ".dot"), iteration_dot(s, result, b));
    }
    std::cout << report_text(s, result);
    return 0;
  } catch (const opt::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const ScenarioError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
