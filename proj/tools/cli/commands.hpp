#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abelroot/op_counter.hpp"
#include "abelroot/root_extraction.hpp"
#include "cli/instance.hpp"
#include "json.hpp"

namespace abelroot::cli {

enum class Status {
  kSolution,        // extract / oracle found a basis
  kSolutionExists,  // check: conditions hold
  kValid,           // verify: claimed basis is a solution
  kInvalid,         // verify: it is not
  kNoSolution,
  kInvalidInput,
  kInternalError,
};

std::string to_string(Status status);

// 0 solution / exists / valid, 2 no_solution / invalid, 1 otherwise.
int exit_code(Status status);

struct Reason {
  std::string condition;
  std::optional<Integer> prime;
  std::optional<unsigned long> j;
};

struct BlockSummary {
  Integer prime;
  std::size_t offset;
  std::optional<Reason> failure;
  std::uint64_t op_count;
};

struct ResultRecord {
  Status status = Status::kInvalidInput;
  std::optional<std::vector<std::vector<Integer>>> basis;  // user factor order
  std::optional<Reason> reason;
  std::optional<std::string> message;
  OpCounter ops;
  double elapsed_ms = 0.0;
  std::optional<std::vector<std::size_t>> permutation;  // present when factors were reordered
  std::vector<std::string> warnings;
  std::vector<BlockSummary> blocks;  // verbose only
  std::vector<std::string> trace;    // verbose only
};

struct CommandOptions {
  bool verbose = false;
  bool count_ops = false;
  std::uint64_t budget = 256;  // oracle: maximum |G|
};

ResultRecord run_extract(const InstanceFile& instance, const CommandOptions& options = {});
ResultRecord run_check(const InstanceFile& instance, const CommandOptions& options = {});
ResultRecord run_verify(const InstanceFile& instance, const CommandOptions& options = {});
ResultRecord run_oracle(const InstanceFile& instance, const CommandOptions& options = {});

// File-path entry points. Read and parse failures become invalid_input.
ResultRecord cmd_extract(const std::string& path, const CommandOptions& options = {});
ResultRecord cmd_check(const std::string& path, const CommandOptions& options = {});
ResultRecord cmd_verify(const std::string& path, const CommandOptions& options = {});
ResultRecord cmd_oracle(const std::string& path, const CommandOptions& options = {});

// One instance per call, canonical factor order.
std::string cmd_gen(const std::string& factor_spec, unsigned long seed, bool solvable);

nlohmann::ordered_json to_json(const ResultRecord& record, const CommandOptions& options = {});
std::string to_text(const ResultRecord& record, const CommandOptions& options = {});

}  // namespace abelroot::cli
