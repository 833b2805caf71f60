#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpdo/zero_test.hpp"

namespace lpdo::cli {

/// One parsed invocation. Only the fields of `verb` are meaningful.
struct Command {
  std::string verb;
  bool json = false;
  std::optional<std::uint64_t> seed;

  std::vector<std::string> inputs;  // operator texts, or @path to read one

  std::optional<int> order;         // factor
  std::optional<std::string> root;  // factor
  bool hierarchy = false;           // invariants
  int steps = 0;                    // laplace-chain
  std::string direction = "a";      // laplace-chain
  int size = 0;                     // cartan -N
  bool periodic = false;            // cartan
  bool det = false;                 // cartan
  std::string w;                    // dn
  int n = 0;                        // dn
  std::string kind;                 // closure-check
  std::string b1;                   // bloch
  std::string b2;                   // bloch
  std::string suite;                // verify
  std::optional<int> trials;        // verify

  /// Canonical argument list; parse(to_args()) reproduces the command.
  std::vector<std::string> to_args() const;
  bool operator==(const Command&) const = default;
};

/// Throws Error(InvalidArgument) with the usage message on bad input. A
/// request for help throws nothing and returns verb "help", with the
/// subcommand (if any) as the only input.
Command parse(const std::vector<std::string>& args);

struct Outcome {
  int code = 0;  // 0 ok, 1 mathematical failure, 2 usage error
  std::string out;
  std::string err;
};

Outcome run(const Command& cmd);

/// parse + run with error mapping; the tool's main is a thin wrapper.
Outcome run_args(const std::vector<std::string>& args);

/// Help text of the whole tool, or of one verb.
std::string usage(const std::string& verb = "");

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<SuiteResult> paper_suite(const ZeroTest& zt);
std::vector<SuiteResult> random_suite(std::uint64_t seed, int trials, const ZeroTest& zt);

}  // namespace lpdo::cli
