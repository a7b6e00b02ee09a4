#pragma once

// Thin and thick cusps near the origin of the positive orthant.
//
//   thin   V_ij(a, alpha):  a*x_i < x_j^alpha
//   thick  V^c_ij(a, alpha): a*x_i > x_j^alpha
//
// Indices are 0-based in code and 1-based in documents and printed output.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heteroswitch/log_cone.hpp"

namespace heteroswitch {

enum class Orientation { thin, thick };

[[nodiscard]] inline Orientation flip(Orientation o) {
  return o == Orientation::thin ? Orientation::thick : Orientation::thin;
}
[[nodiscard]] const char* to_string(Orientation o);

struct PowerRegion {
  std::size_t i = 0;  // tangent axis
  std::size_t j = 1;  // symmetry axis
  double a = 1.0;
  double alpha = 2.0;
  Orientation orientation = Orientation::thin;

  /// alpha <= 1: not a cusp in the strict sense, still decidable.
  [[nodiscard]] bool generalized() const { return alpha <= 1.0; }
  [[nodiscard]] bool contains(std::span<const long double> x) const;
  [[nodiscard]] PowerRegion complement() const {
    PowerRegion r = *this;
    r.orientation = flip(orientation);
    return r;
  }
  /// Same boundary hypersurface S_ij(a, alpha).
  [[nodiscard]] bool same_boundary(const PowerRegion& o) const {
    return i == o.i && j == o.j && a == o.a && alpha == o.alpha;
  }
  bool operator==(const PowerRegion&) const = default;
};

[[nodiscard]] std::string describe(const PowerRegion& r);

/// thin -> eta_i - alpha*eta_j > ln a, thick -> same row with <.
/// Throws std::invalid_argument on i == j, an index outside `dimension`,
/// or non-positive a / alpha.
[[nodiscard]] LogConeSystem to_log_system(const std::vector<PowerRegion>& regions,
                                          std::size_t dimension);

/// Does the common intersection meet every neighbourhood of the origin?
[[nodiscard]] FeasibilityVerdict intersects_near_origin(const std::vector<PowerRegion>& regions,
                                                        std::size_t dimension);

struct PairwiseOutcome {
  enum class Relation { unrelated, nested, opposed } relation = Relation::unrelated;
  /// (orientation of r1, orientation of r2) combinations whose intersection is
  /// empty near the origin. Empty list: every combination intersects.
  std::vector<std::pair<Orientation, Orientation>> empty_combinations;

  [[nodiscard]] bool always_intersect() const { return empty_combinations.empty(); }
  /// Verdict for the orientations the regions actually carry.
  [[nodiscard]] bool intersects(Orientation o1, Orientation o2) const;
};

/// Closed-form two-region rule, independent of the elimination engine.
/// Orientations of r1 and r2 are ignored; only their boundaries matter.
[[nodiscard]] PairwiseOutcome pairwise_rule(const PowerRegion& r1, const PowerRegion& r2);

struct OracleResult {
  std::size_t samples = 0;
  std::size_t hits = 0;
  [[nodiscard]] double hit_fraction() const {
    return samples == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(samples);
  }
  [[nodiscard]] bool empirically_nonempty() const { return hits > 0; }
};

/// Uniform sampling of eta = -ln x over [eta0, span*eta0]^N with eta0 = -ln delta;
/// membership is evaluated on eta (log of the defining inequality). An empty list hits always.
[[nodiscard]] OracleResult sample_oracle(const std::vector<PowerRegion>& regions,
                                         std::size_t dimension, double delta, std::size_t count,
                                         std::uint64_t seed, double span = 64.0);

struct CountGuarantee {
  std::size_t hypersurfaces = 0;     // distinct (i, j, a, alpha)
  std::size_t pigeonhole_bound = 0;  // 1 + N(N-1)/2
  bool bound_exceeded = false;       // some pair of cusps is disjoint
  bool all_to_all_impossible = false;  // hypersurfaces >= N
};

[[nodiscard]] CountGuarantee count_guarantee(const std::vector<PowerRegion>& regions,
                                             std::size_t dimension);

struct AllToAllResult {
  bool all_intersect = true;
  /// First orientation assignment (in binary order, thin = 0) that fails.
  std::optional<std::vector<Orientation>> failing_assignment;
  std::optional<Certificate> certificate;
};

/// Tries every thin/thick assignment of the given boundaries. At most 20 regions.
[[nodiscard]] AllToAllResult all_to_all(const std::vector<PowerRegion>& boundaries,
                                        std::size_t dimension);

/// A cusp-list document: either a JSON list of {i, j, a, alpha, orientation}
/// (1-based indices) or {"dimension": N, "regions": [...]}.
struct CuspDocument {
  std::size_t dimension = 0;
  std::vector<PowerRegion> regions;
  std::string name;
  std::optional<bool> expected;  // optional "expect" field
};

[[nodiscard]] CuspDocument parse_cusp_document(const std::string& text);
[[nodiscard]] CuspDocument load_cusp_file(const std::filesystem::path& path);
[[nodiscard]] std::string serialize_cusps(const CuspDocument& doc);

}  // namespace heteroswitch
