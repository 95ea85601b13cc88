#pragma once

// Command-line front end: option schema, config/manifest merging and
// dispatch to the library modules.

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace smallgaps::cli {

inline constexpr const char* kVersion = SMALLGAPS_VERSION;

enum ExitCode : int { kOk = 0, kUsage = 2, kBudget = 3, kInternal = 4 };

struct RunConfig {
  std::string command;
  // Every resolved option for the command (defaults included), by long name.
  std::map<std::string, std::string> values;
  unsigned threads = 1;
  std::string output_path;    // empty: the provided stream
  std::string manifest_path;  // empty: embedded (json) or next to output
};

const std::vector<std::string>& commands();

// Parses argv (argv[0] is the program name). Handles --config merging:
// flags on the command line win over config values, which win over
// defaults. Throws UsageError on malformed input; a HelpRequest carries
// the text to print.
RunConfig parse_command_line(const std::vector<std::string>& args);

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct HelpRequest {
  std::string text;
};

// key=value lines replayable through --config.
std::string manifest_text(const RunConfig& config);

// Executes the command; results go to `out` unless an output path is set.
// Errors are reported as JSON on `err`; returns the exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_command_line + run with error handling.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smallgaps::cli
