#pragma once

// Network-level switching verdicts: the counting criteria at nodes,
// connections and sequences, the distribution-node depth bound, and the
// constructive enumeration of followable paths.

#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "heteroswitch/map_algebra.hpp"
#include "heteroswitch/network.hpp"

namespace heteroswitch {

enum class Verdict { no_switching, switching_possible_bounded, inconclusive };
enum class Scope { node, connection, sequence, network };

[[nodiscard]] const char* to_string(Verdict v);
[[nodiscard]] const char* to_string(Scope s);

struct SwitchingVerdict {
  Scope scope = Scope::network;
  std::vector<std::string> subject;  // node id, connection endpoints or sequence
  Verdict verdict = Verdict::inconclusive;
  std::string rationale;
};

/// Fires when n_c = N or n_e = N at the node.
[[nodiscard]] SwitchingVerdict node_criterion(const HeteroclinicNetwork& net, const std::string& j);

/// Fires when N = 2 or n_c(from) + n_e(to) >= N, for a connection shared by
/// at least two cycles.
[[nodiscard]] SwitchingVerdict connection_criterion(const HeteroclinicNetwork& net,
                                                    const std::string& from, const std::string& to);

/// The connection criterion with the end nodes of a shared directed chain.
[[nodiscard]] SwitchingVerdict sequence_criterion(const HeteroclinicNetwork& net,
                                                  const std::vector<std::string>& seq);

/// Number of cycles containing seq as consecutive nodes.
[[nodiscard]] std::size_t cycles_through(const HeteroclinicNetwork& net,
                                         const std::vector<std::string>& seq);

struct DepthSequence {
  std::vector<std::string> distribution_nodes;  // j_0, j_1, ..., j_k
  std::vector<std::string> path;                // full node path realising them
  std::vector<int> partial_sums;                // after each j_i, i >= 1
  int k = 0;                                    // smallest count reaching N, or -1
};

struct DepthBound {
  std::string start;
  int k = 0;            // maximum over sequences
  int sum_at_k = 0;     // partial sum reached by a sequence attaining k
  int N = 0;
  int cycle_bound = 0;  // most distribution nodes on one cycle through start
  std::vector<DepthSequence> sequences;
};

/// Throws NetworkError when start is not a distribution node.
[[nodiscard]] DepthBound depth_bound(const HeteroclinicNetwork& net, const std::string& start,
                                     int max_steps = 16);

/// Thread-safe memo of path verdicts for one network.
class FollowableCache {
 public:
  explicit FollowableCache(const HeteroclinicNetwork& net) : net_(net) {}
  bool operator()(const std::vector<std::string>& path);
  FeasibilityVerdict verdict(const std::vector<std::string>& path);

 private:
  const HeteroclinicNetwork& net_;
  std::mutex mu_;
  std::map<std::vector<std::string>, FeasibilityVerdict> memo_;
};

struct PathVerdict {
  std::vector<std::string> path;
  FeasibilityVerdict verdict;
};

/// Directed paths from start with exactly `depth` connections, in
/// lexicographic order of node indices, each with its followable verdict.
/// Throws NetworkError past `cap` paths.
[[nodiscard]] std::vector<PathVerdict> enumerate_followable(const HeteroclinicNetwork& net,
                                                            const std::string& start, int depth,
                                                            std::size_t cap = 100000,
                                                            unsigned threads = 0);

/// Same, for paths beginning with the connection from -> to.
[[nodiscard]] std::vector<PathVerdict> enumerate_from_connection(const HeteroclinicNetwork& net,
                                                                 const std::string& from,
                                                                 const std::string& to, int depth,
                                                                 std::size_t cap = 100000,
                                                                 unsigned threads = 0);

/// Exits after the first return to a distribution node.
struct ReturnDeterminism {
  std::string node;
  std::string entered_from;
  /// Feasible path ending with the return to `node`, and the feasible exits from there.
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> returns;
  bool predetermined = true;  // every feasible return has at most one feasible exit
  int first_exits_feasible = 0;
};

[[nodiscard]] ReturnDeterminism return_determinism(const HeteroclinicNetwork& net,
                                                   const std::string& from, const std::string& node,
                                                   int max_depth = 12);

struct NetworkReport {
  std::string network;
  int N = 0;
  ValidationReport validation;
  std::vector<std::string> distribution;
  std::vector<SwitchingVerdict> node_verdicts;
  std::vector<SwitchingVerdict> connection_verdicts;
  std::vector<DepthBound> depth_bounds;
  std::vector<ReturnDeterminism> returns;
  std::vector<DepartureSet> departures;
  /// Shortest non-followable path found (constructive absence of infinite switching).
  std::optional<std::vector<std::string>> finite_witness;
  std::string headline;
  std::vector<std::string> findings;
};

struct ReportOptions {
  int witness_depth = 8;
  int return_depth = 12;
};

[[nodiscard]] NetworkReport network_report(const HeteroclinicNetwork& net,
                                           const ReportOptions& options = {});

}  // namespace heteroswitch
