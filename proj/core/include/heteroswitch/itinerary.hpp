#pragma once

// Node-neighbourhood itineraries of simulated trajectories and the ensemble
// check of observed paths against the cone engine.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "heteroswitch/fields.hpp"
#include "heteroswitch/network.hpp"
#include "heteroswitch/ode.hpp"

namespace heteroswitch {

struct ItineraryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EventType { entered_node, traversed_connection };
enum class Terminal { still_near_network, departed, time_exhausted, integration_failed };

[[nodiscard]] std::string to_string(EventType e);
[[nodiscard]] std::string to_string(Terminal t);

struct ItineraryEvent {
  EventType type = EventType::entered_node;
  std::string node;  // entered node, or the source of a connection
  std::string to;    // target of a connection
  double time = 0.0;
  Eigen::VectorXd state;  // sample at which the event was recorded
  [[nodiscard]] std::string where() const { return type == EventType::entered_node ? node : node + "->" + to; }
};

struct Itinerary {
  std::vector<ItineraryEvent> events;
  Terminal terminal = Terminal::time_exhausted;
  double end_time = 0.0;
  /// Entered nodes in order.
  [[nodiscard]] std::vector<std::string> node_path() const;
};

/// Online detector: feed samples in time order.
class ItineraryRecorder {
 public:
  /// Throws ItineraryError when the 2*node_radius neighbourhoods of two nodes overlap.
  ItineraryRecorder(const VectorField& field, const HeteroclinicNetwork& net, const SimConfig& config);
  /// Returns false once the itinerary is finished (departure or max_visits).
  bool feed(double t, const Eigen::VectorXd& x);
  /// Closes the itinerary; `exhausted` marks a run that hit max_time.
  Itinerary finish(double t, bool exhausted, bool failed = false);

 private:
  /// Connection whose support leaves the smallest off-support coordinate.
  [[nodiscard]] std::pair<int, double> nearest_connection(const Eigen::VectorXd& x) const;
  void enter(int node, double t, const Eigen::VectorXd& x);

  const VectorField& field_;
  const HeteroclinicNetwork& net_;
  SimConfig config_;
  Itinerary it_;
  int current_ = -1;  // index of the node whose neighbourhood we are in
  int last_ = -1;     // last node entered
  int conn_ = -1;     // nearest connection while outside every ball
  int visits_ = 0;
  bool departed_ = false;
};

/// Post-hoc detection on stored samples.
[[nodiscard]] Itinerary record_itinerary(const Trajectory& traj, const VectorField& field,
                                         const HeteroclinicNetwork& net, const SimConfig& config);

/// Seed point near the node `from`, pushed along from->to by half a node radius.
[[nodiscard]] Eigen::VectorXd seed_near_connection(const VectorField& field, const HeteroclinicNetwork& net,
                                                   const std::string& from, const std::string& to,
                                                   const SimConfig& config, std::uint64_t member);

struct MemberResult {
  int member = 0;
  std::string seeded_from, seeded_to;
  Itinerary itinerary;
};

struct EmpiricalResult {
  std::vector<MemberResult> members;  // sorted by member index
  std::map<std::vector<std::string>, int> path_counts;
  /// Observed node paths the cone engine declares not followable.
  std::vector<std::vector<std::string>> violations;
  int departed = 0;
  int failed = 0;
};

/// Runs config.ensemble members in parallel, members cycling through the
/// connections leaving config.start (all connections when unset).
[[nodiscard]] EmpiricalResult empirical_switching_test(const VectorField& field,
                                                       const HeteroclinicNetwork& net,
                                                       const SimConfig& config);

}  // namespace heteroswitch
