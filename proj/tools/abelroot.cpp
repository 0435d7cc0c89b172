#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "abelroot/errors.hpp"
#include "cli/commands.hpp"

namespace fs = std::filesystem;
using namespace abelroot::cli;

namespace {

using Runner = ResultRecord (*)(const std::string&, const CommandOptions&);

struct SolveArgs {
  std::string instance;
  std::string batch_dir;
  bool json = false;
  CommandOptions options;
};

void add_solve_flags(CLI::App* sub, SolveArgs& args, bool with_budget) {
  auto* path = sub->add_option("instance", args.instance, "Instance file (JSON)");
  auto* batch = sub->add_option("--batch", args.batch_dir, "Process every *.json file in a directory")
                    ->check(CLI::ExistingDirectory);
  path->excludes(batch);
  sub->add_flag("--json", args.json, "Machine-readable output");
  sub->add_flag("--verbose", args.options.verbose, "Per-block reports and iteration traces");
  sub->add_flag("--count-ops", args.options.count_ops, "Include the operation breakdown");
  if (with_budget) {
    sub->add_option("--budget", args.options.budget, "Largest group the oracle will enumerate")
        ->capture_default_str();
  }
}

void print(const ResultRecord& record, const SolveArgs& args, const std::string& label = {}) {
  if (args.json) {
    auto doc = to_json(record, args.options);
    if (!label.empty()) doc["file"] = label;
    std::cout << doc.dump() << "\n";
  } else {
    if (!label.empty()) std::cout << "== " << label << "\n";
    std::cout << to_text(record, args.options);
  }
}

int run(Runner runner, const SolveArgs& args) {
  if (args.batch_dir.empty()) {
    if (args.instance.empty()) {
      std::cerr << "error: an instance file or --batch DIR is required\n";
      return 1;
    }
    const auto record = runner(args.instance, args.options);
    print(record, args);
    return exit_code(record.status);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(args.batch_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  // Worst code wins: 1 (bad input) over 2 (no solution) over 0.
  int code = 0;
  for (const auto& file : files) {
    const auto record = runner(file.string(), args.options);
    print(record, args, file.filename().string());
    const int c = exit_code(record.status);
    if (c == 1 || (c == 2 && code == 0)) code = c;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Root extraction in finite Abelian groups"};
  app.require_subcommand(1);

  SolveArgs extract_args, check_args, verify_args, oracle_args;
  add_solve_flags(app.add_subcommand("extract", "Find a basis P with K = sum m_i P_i"), extract_args, false);
  add_solve_flags(app.add_subcommand("check", "Decide whether a solution exists"), check_args, false);
  add_solve_flags(app.add_subcommand("verify", "Check the instance's claimed_basis"), verify_args, false);
  add_solve_flags(app.add_subcommand("oracle", "Exhaustive search on a small group"), oracle_args, true);

  std::string factors;
  unsigned long seed = 1;
  bool solvable = false, random = false;
  auto* gen = app.add_subcommand("gen", "Print a random instance");
  gen->add_option("--factors", factors, "e.g. 2^1,2^3,2^4 or Z/2xZ/8xZ/16")->required();
  gen->add_option("--seed", seed, "RNG seed")->capture_default_str();
  auto* s = gen->add_flag("--solvable", solvable, "K built from a random basis");
  auto* r = gen->add_flag("--random", random, "K and m uniform");
  s->excludes(r);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("extract")) return run(cmd_extract, extract_args);
    if (app.got_subcommand("check")) return run(cmd_check, check_args);
    if (app.got_subcommand("verify")) return run(cmd_verify, verify_args);
    if (app.got_subcommand("oracle")) return run(cmd_oracle, oracle_args);
    if (app.got_subcommand("gen")) {
      std::cout << cmd_gen(factors, seed, !random);
      return 0;
    }
  } catch (const abelroot::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
