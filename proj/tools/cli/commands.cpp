#include "cli/commands.hpp"

#include <chrono>
#include <sstream>

#include "abelroot/errors.hpp"
#include "abelroot/oracle.hpp"
#include "cli/generator.hpp"

namespace abelroot::cli {

using nlohmann::ordered_json;

std::string to_string(Status status) {
  switch (status) {
    case Status::kSolution: return "solution";
    case Status::kSolutionExists: return "solution_exists";
    case Status::kValid: return "valid";
    case Status::kInvalid: return "invalid";
    case Status::kNoSolution: return "no_solution";
    case Status::kInvalidInput: return "invalid_input";
    case Status::kInternalError: return "internal_error";
  }
  return "internal_error";
}

int exit_code(Status status) {
  switch (status) {
    case Status::kSolution:
    case Status::kSolutionExists:
    case Status::kValid:
      return 0;
    case Status::kNoSolution:
    case Status::kInvalid:
      return 2;
    default:
      return 1;
  }
}

namespace {

Reason reason_of(const NoSolution& failure) {
  return Reason{to_string(failure.condition), failure.prime, failure.j};
}

template <typename Body>
ResultRecord guarded(Body body) {
  const auto start = std::chrono::steady_clock::now();
  ResultRecord record;
  try {
    record = body();
  } catch (const InvalidArgument& e) {
    record = ResultRecord{};
    record.status = Status::kInvalidInput;
    record.message = e.what();
  } catch (const StructureMismatch& e) {
    record = ResultRecord{};
    record.status = Status::kInvalidInput;
    record.message = e.what();
  } catch (const BudgetExceeded& e) {
    record = ResultRecord{};
    record.status = Status::kInvalidInput;
    record.message = e.what();
  } catch (const std::exception& e) {
    record = ResultRecord{};
    record.status = Status::kInternalError;
    record.message = e.what();
  }
  record.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return record;
}

ResultRecord base_record(const NormalizedInstance& n) {
  ResultRecord record;
  if (n.reordered()) record.permutation = n.position;
  record.warnings = n.warnings;
  return record;
}

void attach_blocks(ResultRecord& record, const std::vector<BlockReport>& blocks) {
  for (const auto& b : blocks) {
    BlockSummary s{b.prime, b.offset, std::nullopt, b.ops.total()};
    if (b.failure) s.failure = reason_of(*b.failure);
    record.blocks.push_back(std::move(s));
  }
}

ResultRecord from_file(const std::string& path, const CommandOptions& options,
                       ResultRecord (*run)(const InstanceFile&, const CommandOptions&)) {
  return guarded([&] { return run(read_instance(path), options); });
}

ordered_json strings(const std::vector<Integer>& v) {
  ordered_json out = ordered_json::array();
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

ordered_json reason_json(const Reason& reason) {
  ordered_json out;
  out["condition"] = reason.condition;
  if (reason.prime) out["p"] = reason.prime->get_str();
  if (reason.j) out["j"] = *reason.j;
  return out;
}

std::string row_text(const std::vector<Integer>& row) {
  std::string out = "(";
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ",";
    out += row[i].get_str();
  }
  return out + ")";
}

}  // namespace

ResultRecord run_extract(const InstanceFile& instance, const CommandOptions& options) {
  return guarded([&] {
    const NormalizedInstance n = normalize(instance);
    ResultRecord record = base_record(n);
    std::vector<BlockReport> blocks;
    SolveContext ctx{&record.ops, options.verbose ? &record.trace : nullptr};
    const ExtractionOutcome outcome = extract(n.problem, ctx, options.verbose ? &blocks : nullptr);
    attach_blocks(record, blocks);
    if (outcome.has_solution()) {
      if (!verify_solution(n.problem, outcome.basis())) {
        throw InternalError("extract returned a basis that fails verification");
      }
      record.status = Status::kSolution;
      record.basis = n.to_user_order(outcome.basis());
    } else {
      record.status = Status::kNoSolution;
      record.reason = reason_of(outcome.failure());
    }
    return record;
  });
}

ResultRecord run_check(const InstanceFile& instance, const CommandOptions& options) {
  return guarded([&] {
    const NormalizedInstance n = normalize(instance);
    ResultRecord record = base_record(n);
    SolveContext ctx{&record.ops, options.verbose ? &record.trace : nullptr};
    std::optional<NoSolution> first;
    for (const auto& block : sylow_split(n.problem.k, n.problem.m)) {
      OpCounter block_ops;
      SolveContext block_ctx{&block_ops, ctx.trace};
      const auto failure = existence_failure(ExtractionProblem(block.k, block.m), block_ctx);
      record.ops += block_ops;
      if (options.verbose) {
        record.blocks.push_back(BlockSummary{block.prime, block.offset, std::nullopt, block_ops.total()});
        if (failure) record.blocks.back().failure = reason_of(*failure);
      }
      if (failure && !first) {
        first = failure;
        if (!options.verbose) break;
      }
    }
    if (first) {
      record.status = Status::kNoSolution;
      record.reason = reason_of(*first);
    } else {
      record.status = Status::kSolutionExists;
    }
    return record;
  });
}

ResultRecord run_verify(const InstanceFile& instance, const CommandOptions&) {
  return guarded([&] {
    const NormalizedInstance n = normalize(instance);
    if (!n.claimed_basis) throw InvalidArgument("verify needs a \"claimed_basis\" in the instance");
    ResultRecord record = base_record(n);
    if (!verify_basis(*n.claimed_basis)) {
      record.status = Status::kInvalid;
      record.reason = Reason{"not_a_basis", std::nullopt, std::nullopt};
    } else if (!verify_solution(n.problem, *n.claimed_basis)) {
      record.status = Status::kInvalid;
      record.reason = Reason{"sum_mismatch", std::nullopt, std::nullopt};
    } else {
      record.status = Status::kValid;
    }
    return record;
  });
}

ResultRecord run_oracle(const InstanceFile& instance, const CommandOptions& options) {
  return guarded([&] {
    const NormalizedInstance n = normalize(instance);
    ResultRecord record = base_record(n);
    oracle::EnumerationBudget budget;
    budget.max_group_size = options.budget;
    const auto found = oracle::brute_force_extract(n.problem, budget);
    if (found) {
      record.status = Status::kSolution;
      record.basis = n.to_user_order(*found);
    } else {
      record.status = Status::kNoSolution;
      record.reason = Reason{"no_basis_found", std::nullopt, std::nullopt};
    }
    return record;
  });
}

ResultRecord cmd_extract(const std::string& path, const CommandOptions& options) {
  return from_file(path, options, run_extract);
}
ResultRecord cmd_check(const std::string& path, const CommandOptions& options) {
  return from_file(path, options, run_check);
}
ResultRecord cmd_verify(const std::string& path, const CommandOptions& options) {
  return from_file(path, options, run_verify);
}
ResultRecord cmd_oracle(const std::string& path, const CommandOptions& options) {
  return from_file(path, options, run_oracle);
}

std::string cmd_gen(const std::string& factor_spec, unsigned long seed, bool solvable) {
  auto factors = parse_factor_spec(factor_spec);
  GroupPtr group = make_group(GroupStructure::canonicalize(std::move(factors)).first.factors());
  InstanceGenerator gen(seed);
  return emit_instance(to_instance(solvable ? gen.solvable(group) : gen.random(group)));
}

ordered_json to_json(const ResultRecord& record, const CommandOptions& options) {
  ordered_json out;
  out["status"] = to_string(record.status);
  if (record.basis) {
    out["basis"] = ordered_json::array();
    for (const auto& row : *record.basis) out["basis"].push_back(strings(row));
  }
  if (record.reason) out["reason"] = reason_json(*record.reason);
  if (record.message) out["message"] = *record.message;
  out["op_count"] = record.ops.total();
  out["elapsed_ms"] = record.elapsed_ms;
  if (record.permutation) out["permutation"] = *record.permutation;
  if (!record.warnings.empty()) out["warnings"] = record.warnings;
  if (options.count_ops) {
    out["ops"] = {{"additions", record.ops.additions},
                  {"doublings", record.ops.doublings},
                  {"negations", record.ops.negations},
                  {"order_charges", record.ops.order_charges}};
  }
  if (options.verbose) {
    ordered_json blocks = ordered_json::array();
    for (const auto& b : record.blocks) {
      ordered_json entry;
      entry["p"] = b.prime.get_str();
      entry["offset"] = b.offset;
      entry["op_count"] = b.op_count;
      if (b.failure) entry["failure"] = reason_json(*b.failure);
      blocks.push_back(entry);
    }
    out["blocks"] = blocks;
    out["trace"] = record.trace;
  }
  return out;
}

std::string to_text(const ResultRecord& record, const CommandOptions& options) {
  std::ostringstream out;
  out << "status: " << to_string(record.status) << "\n";
  if (record.message) out << "message: " << *record.message << "\n";
  for (const auto& w : record.warnings) out << "warning: " << w << "\n";
  if (record.basis) {
    out << "basis:\n";
    for (std::size_t i = 0; i < record.basis->size(); ++i) {
      out << "  P_" << i + 1 << " = " << row_text((*record.basis)[i]) << "\n";
    }
  }
  if (record.reason) {
    out << "reason: " << record.reason->condition;
    if (record.reason->prime) out << " at p=" << record.reason->prime->get_str();
    if (record.reason->j) out << ", j=" << *record.reason->j;
    out << "\n";
  }
  if (record.permutation) {
    out << "factor order:";
    for (auto c : *record.permutation) out << " " << c + 1;
    out << " (canonical slot of each input factor)\n";
  }
  if (options.verbose) {
    for (const auto& b : record.blocks) {
      out << "block p=" << b.prime.get_str() << " offset=" << b.offset << " ops=" << b.op_count;
      if (b.failure) out << " fails: " << b.failure->condition;
      out << "\n";
    }
    for (const auto& line : record.trace) out << "  " << line << "\n";
  }
  out << "op_count: " << record.ops.total() << "\n";
  if (options.count_ops) {
    out << "  additions=" << record.ops.additions << " doublings=" << record.ops.doublings
        << " negations=" << record.ops.negations << " order_charges=" << record.ops.order_charges
        << "\n";
  }
  out << "elapsed_ms: " << record.elapsed_ms << "\n";
  return out.str();
}

}  // namespace abelroot::cli
