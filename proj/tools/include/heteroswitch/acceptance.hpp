#pragma once

// The acceptance suite: one pass/fail result per criterion, tolerances fixed here.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace heteroswitch::acceptance {

struct Options {
  std::filesystem::path fixtures;
  int pair_count = 1000;            // random two-region cases
  std::size_t oracle_samples = 100000;
  int families_per_size = 100;      // cyclic thin families for each N in 3..6
  int ensemble = 1000;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  int regression_samples = 100;
  int rescalings = 100;
  unsigned threads = 0;
  std::uint64_t seed = 20240611;    // drives every random generator except the simulation
};

struct Result {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Criterion {
  int id;
  std::string name;
  std::function<Result(const Options&)> run;
};

[[nodiscard]] std::vector<Criterion> criteria();

/// Runs the selected ids (all when empty) in order.
[[nodiscard]] std::vector<Result> run(const Options& options, const std::vector<int>& ids = {});

/// "[PASS] 3 name (1.2 s): detail"
[[nodiscard]] std::string format(const Result& r);

}  // namespace heteroswitch::acceptance
