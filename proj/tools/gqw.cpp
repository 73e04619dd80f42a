#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gqw/catalog.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kDisagreement = 1;
constexpr int kInputError = 2;

gqw::Phase parse_phase(const std::string& s) {
  if (s == "1" || s == "+1") return gqw::Phase::plus_one;
  if (s == "-1") return gqw::Phase::minus_one;
  throw gqw::InputError("z must be +1 or -1, got '" + s + "'");
}

int cmd_analyze(const std::string& path, std::optional<std::size_t> steps, bool json) {
  const auto inst = gqw::load_instance(path);
  gqw::AnalyzeOptions opts;
  opts.simulate_steps = steps;
  const auto rep = gqw::analyze(inst, opts);
  if (json)
    std::cout << gqw::to_json(rep).dump(2) << '\n';
  else
    gqw::render_text(std::cout, rep);
  return rep.ok() ? kOk : kDisagreement;
}

int cmd_rank(int n, const std::string& z, bool json) {
  const auto rep = gqw::rank_catalog(n, parse_phase(z));
  if (json)
    std::cout << gqw::to_json(rep).dump(2) << '\n';
  else
    gqw::render_text(std::cout, rep);
  return kOk;
}

int cmd_simulate(const std::string& path, std::size_t steps, const std::string& out) {
  if (steps < 1) throw gqw::InputError("--steps must be at least 1");
  const auto inst = gqw::load_instance(path);
  const auto exact = gqw::stationary_state(inst);
  const auto trace = gqw::simulate(inst, steps, exact);
  std::ofstream csv(out);
  if (!csv) throw gqw::InputError("cannot write " + out);
  gqw::write_trace_csv(csv, inst, trace);
  std::cout << "steps " << trace.steps() << '\n'
            << "horizon " << trace.final_state.horizon << '\n'
            << "final residual " << gqw::decimal(trace.residuals.back(), 6) << '\n'
            << "distance to exact " << gqw::decimal(*trace.distance_to_exact, 6) << '\n';
  if (trace.converged_at) std::cout << "converged at step " << *trace.converged_at << '\n';
  std::cout << "trace written to " << out << '\n';
  return kOk;
}

int cmd_selftest(int max_n, bool mutate) {
  gqw::SelftestOptions opts;
  opts.max_n = max_n;
  opts.mutate_signless = mutate;
  const auto start = std::chrono::steady_clock::now();
  const auto results = gqw::run_selftest(opts);
  bool all = true;
  for (const auto& s : results) {
    std::cout << (s.passed() ? "[PASS] " : "[FAIL] ") << s.name << ": " << s.checks << " checks, " << s.failures
              << " failures\n";
    for (const auto& m : s.messages) std::cout << "       " << m << '\n';
    all = all && s.passed();
  }
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
  std::cout << results.size() << " suites, " << (all ? "all passed" : "FAILURES") << " in "
            << gqw::decimal(dt.count(), 3) << " s\n";
  return all ? kOk : kDisagreement;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact analyzer and simulator for Grover walks on tailed graphs"};
  app.require_subcommand(1);

  std::string file, out, z;
  std::size_t steps = 0;
  int n = 0, max_n = 5;
  bool json = false, mutate = false;
  std::optional<std::size_t> simulate_steps;

  auto* analyze = app.add_subcommand("analyze", "Analyze one instance file");
  analyze->add_option("file", file, "Instance file")->required();
  analyze->add_option("--simulate", simulate_steps, "Also run the simulator for T steps");
  analyze->add_flag("--json", json, "JSON output");

  auto* rank = app.add_subcommand("rank", "Comfortability catalog over all graphs on n vertices");
  rank->add_option("--n", n, "Number of vertices (2..5)")->required();
  rank->add_option("--z", z, "Phase, +1 or -1")->required();
  rank->add_flag("--json", json, "JSON output");

  auto* sim = app.add_subcommand("simulate", "Iterate the walk and write a CSV trace");
  sim->add_option("file", file, "Instance file")->required();
  sim->add_option("--steps", steps, "Number of steps T")->required();
  sim->add_option("--out", out, "CSV output path")->required();

  auto* selftest = app.add_subcommand("selftest", "Run every property suite over the small-graph catalog");
  selftest->add_option("--max-n", max_n, "Largest catalog order")->check(CLI::Range(2, 5));
  selftest->add_flag("--mutate-q", mutate, "Replace Q by D - M in the determinant route")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*analyze) return cmd_analyze(file, simulate_steps, json);
    if (*rank) return cmd_rank(n, z, json);
    if (*sim) return cmd_simulate(file, steps, out);
    if (*selftest) return cmd_selftest(max_n, mutate);
  } catch (const gqw::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const gqw::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kDisagreement;
  }
  return kInputError;
}
