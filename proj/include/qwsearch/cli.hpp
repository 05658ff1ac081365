#pragma once

// Command-line front end: subcommands, run manifests and output files.

#include <iosfwd>
#include <string>
#include <vector>

#include "qwsearch/format.hpp"

namespace qwsearch::cli {

inline constexpr const char* kToolName = "qwsearch";
inline constexpr const char* kToolVersion = "1.0.0";
/// Directory used for outputs when no --out is given.
inline constexpr const char* kOutDirVariable = "QWSEARCH_OUT_DIR";

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kValidationError = 2,
  kNumericalError = 3,
};

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Manifest embedded in an output file, from its "# key=value" block or the
/// "manifest" object of a JSON document.
Manifest read_manifest(const std::string& path);

/// Arguments that regenerate the file described by `manifest` into `out_path`.
std::vector<std::string> replay_arguments(const Manifest& manifest, const std::string& out_path);

/// Splices a JSON config file into `args`: every key becomes `--key value`
/// unless that flag is already present. Keys may sit at the top level or in
/// an object named after the subcommand.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace qwsearch::cli
