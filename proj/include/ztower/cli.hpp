#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace ztower {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;  // verify mismatch, guardrail refusal, internal errors
inline constexpr int parse = 2;
inline constexpr int disconnected = 3;
inline constexpr int non_torsion = 4;
inline constexpr int inconsistent = 5;
inline constexpr int dual_failure = 6;
}  // namespace exit_code

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One line per leaf: "a.b[0]: value".
std::string flatten_text(const nlohmann::json& j);

struct ExampleResult {
  std::string name;
  bool pass = false;
  nlohmann::json checks;  // [{check, expected, actual, pass}]
};

/// Evaluates the "expect" block of a corpus fixture {name, spec, expect}.
ExampleResult verify_example(const nlohmann::json& fixture);

}  // namespace ztower
