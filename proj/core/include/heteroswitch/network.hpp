#pragma once

// Heteroclinic networks: saddle nodes with real eigenvalues joined by
// one-dimensional connections. Eigenvalue classes are declared in the input
// document and only checked for combinatorial consistency.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace heteroswitch {

enum class EigenClass { radial, contracting, expanding, transverse };

[[nodiscard]] const char* to_string(EigenClass k);
[[nodiscard]] EigenClass eigen_class_from_string(const std::string& s);

struct Eigenvalue {
  double value = 0.0;
  EigenClass klass = EigenClass::transverse;
  std::string label;

  bool operator==(const Eigenvalue&) const = default;
};

struct Node {
  std::string id;
  std::vector<Eigenvalue> eigenvalues;
  int n_c = 0;
  int n_e = 0;
  int n_t = 0;

  /// n_c + n_e + n_t - 1
  [[nodiscard]] int section_dimension() const { return n_c + n_e + n_t - 1; }
  [[nodiscard]] const Eigenvalue* find(const std::string& label) const;
  /// Labels of non-radial eigenvalues, in declaration order.
  [[nodiscard]] std::vector<std::string> non_radial_labels() const;

  bool operator==(const Node&) const = default;
};

/// One axis of a global map: out-section axis at `from` sent to in-section
/// axis at `to`, multiplied by `rescale`.
struct AxisPair {
  std::string out_label;
  std::string in_label;
  double rescale = 1.0;

  bool operator==(const AxisPair&) const = default;
};

struct Connection {
  std::string from;
  std::string to;
  /// Exactly one entry each for a valid (one-dimensional) connection.
  std::vector<std::string> expanding_labels;
  std::vector<std::string> contracting_labels;
  /// Empty means label identity with unit rescale.
  std::vector<AxisPair> permutation;

  [[nodiscard]] const std::string& expanding_label() const { return expanding_labels.front(); }
  [[nodiscard]] const std::string& contracting_label() const { return contracting_labels.front(); }

  bool operator==(const Connection&) const = default;
};

struct HeteroclinicNetwork {
  std::string name;
  int ambient_dimension = 0;
  std::vector<Node> nodes;
  std::vector<Connection> connections;
  /// Common section dimension, or nullopt when nodes disagree.
  std::optional<int> cross_section_dimension;

  [[nodiscard]] std::size_t node_index(const std::string& id) const;  // throws
  [[nodiscard]] const Node& node(const std::string& id) const { return nodes[node_index(id)]; }
  [[nodiscard]] std::optional<std::size_t> connection_index(const std::string& from,
                                                            const std::string& to) const;
  [[nodiscard]] const Connection& connection(const std::string& from, const std::string& to) const;
  [[nodiscard]] std::vector<std::size_t> successors(std::size_t node) const;
  [[nodiscard]] std::vector<std::size_t> predecessors(std::size_t node) const;
  [[nodiscard]] int section_dimension() const;  // throws when not uniform

  /// Axes of H_to^{in,from}: non-radial labels at `to` minus the contracting label.
  [[nodiscard]] std::vector<std::string> incoming_axes(const Connection& c) const;
  /// Axes of H_from^{out,to}: non-radial labels at `from` minus the expanding label.
  [[nodiscard]] std::vector<std::string> outgoing_axes(const Connection& c) const;
  /// Complete axis map of the global map along c (identity filled in when absent).
  /// Throws when an explicit permutation is not a bijection between the two sections.
  [[nodiscard]] std::vector<AxisPair> resolved_permutation(const Connection& c) const;

  bool operator==(const HeteroclinicNetwork&) const = default;
};

struct NetworkError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses a network document. Throws NetworkError on schema violations,
/// dangling endpoints, duplicate node ids and parallel connections.
[[nodiscard]] HeteroclinicNetwork load_network(const std::string& document);
[[nodiscard]] HeteroclinicNetwork load_network_file(const std::filesystem::path& path);
/// Like load_network, but parallel connections (several trajectories between
/// the same pair of nodes) split the document into one network per choice.
[[nodiscard]] std::vector<HeteroclinicNetwork> load_networks(const std::string& document);
[[nodiscard]] std::vector<HeteroclinicNetwork> load_networks_file(const std::filesystem::path& path);
[[nodiscard]] std::string serialize(const HeteroclinicNetwork& net);

/// Recomputes n_c, n_e, n_t and the common section dimension.
void derive_counts(HeteroclinicNetwork& net);

enum class Severity { info, warning, error };

struct Finding {
  Severity severity = Severity::info;
  std::string subject;  // node id, "from->to", or "network"
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;
  [[nodiscard]] bool ok() const;
};

[[nodiscard]] ValidationReport validate_quasi_simple(const HeteroclinicNetwork& net);

/// A simple directed cycle as node indices, starting at its smallest index.
using Cycle = std::vector<std::size_t>;

/// All simple cycles, lexicographically ordered. Throws past `cap`.
[[nodiscard]] std::vector<Cycle> enumerate_cycles(const HeteroclinicNetwork& net,
                                                  std::size_t cap = 10000);

struct GlobalClassification {
  std::vector<std::string> contracting;
  std::vector<std::string> expanding;
  std::vector<std::string> transverse;
  std::vector<std::string> radial;
};

/// Throws NetworkError when the node lies on no cycle.
[[nodiscard]] GlobalClassification classify_global(const HeteroclinicNetwork& net,
                                                   const std::string& node_id);

/// Nodes with at least two outgoing connections, in declaration order.
[[nodiscard]] std::vector<std::string> distribution_nodes(const HeteroclinicNetwork& net);

}  // namespace heteroswitch
