#pragma once

// Command-line front end: analyze, paths, cusps, simulate, verify.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace heteroswitch::cli {

/// Exit codes: 0 success, 1 internal error, 2 usage error. `verify` returns 1
/// when a criterion fails.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// HETEROSWITCH_FIXTURES if set, else the directory baked in at build time.
[[nodiscard]] std::filesystem::path fixture_dir();

/// Tries `name`, `name.json`, then the same under the fixture directory, then
/// fixtures/cusps/<file name>. Throws UsageError when nothing exists.
[[nodiscard]] std::filesystem::path resolve_input(const std::string& name);

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace heteroswitch::cli
