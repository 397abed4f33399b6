#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace discdyn::cli {

enum class Command { extend, act, orbit, dense, periodic, arcflow, foliate, conjugate, projective, limit };
enum class Format { csv, json, pgm };

const char* to_string(Command c) noexcept;
const char* to_string(Format f) noexcept;

/// A run is a pure function of this record. Output paths are not part of the
/// echoed configuration, so moving a file does not change its bytes.
struct RunConfig {
  Command command = Command::extend;
  std::map<std::string, std::string> params;
  std::string output_path;  // empty: primary artifact goes to the output stream
  std::string report_path;  // companion artifact (extend CSV, foliate summary, periodic approximant)
  std::optional<Format> format;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Carries the help text for --help.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;

/// Throws UsageError for unknown commands, unknown keys, or a bad config file.
/// Flags given on the command line override values from --config.
RunConfig parse_command_line(const std::vector<std::string>& args);

/// Parameters of `c` with their defaults; an empty default means required.
const std::map<std::string, std::string>& parameter_defaults(Command c);

/// `{"command":…,"format":…,"params":{…}}` after defaults are filled in.
std::string config_echo(const RunConfig& config);

/// 0 on success, 2 when a certified inequality is violated, 1 on usage or
/// input errors (message on `err`).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_command_line + run, with --help handling.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace discdyn::cli
