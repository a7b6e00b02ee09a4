#pragma once

// Adaptive integration of Kolmogorov fields in logarithmic coordinates.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "heteroswitch/fields.hpp"
#include "heteroswitch/network.hpp"

namespace heteroswitch {

struct SimConfig {
  double node_radius = 1e-2;    // enter a node neighbourhood below this distance
  double max_time = 400.0;
  double abs_tol = 1e-10;       // on log coordinates
  double rel_tol = 1e-8;
  std::uint64_t seed = 1;
  int ensemble = 1000;
  double shell = 1e-3;          // initial distance of off-connection coordinates
  int max_visits = 10;          // stop after this many node entries
  double departure = 0.1;       // distance from every connection counting as escape
  double sample_dt = 0.05;
  unsigned threads = 0;         // 0: hardware concurrency
  std::optional<std::string> start;  // seed near connections leaving this node
  std::size_t max_steps = 2000000;

  /// Throws std::invalid_argument on nonpositive or inconsistent values.
  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  bool underflow = false;  // the step size collapsed; message explains where
  std::string message;
};

/// Called on each dense-output sample; return false to stop.
using SampleObserver = std::function<bool(double t, const Eigen::VectorXd& x)>;

/// Integrates x' = x * g(x) from x0 (nonnegative) with Dormand-Prince 5(4)
/// on u = ln x for the positive coordinates; zero coordinates stay zero.
/// Samples every config.sample_dt up to config.max_time or until the
/// observer declines. Stores the samples unless `keep` is false.
Trajectory integrate(const VectorField& field, const Eigen::VectorXd& x0, const SimConfig& config,
                     const SampleObserver& observer = {}, bool keep = true);

struct SectionHit {
  double time = 0.0;
  Eigen::VectorXd state;
};

/// First time x[axis] reaches `level` from below, located by bisection on the
/// dense output to within 1e-12 in ln x[axis].
std::optional<SectionHit> integrate_to_level(const VectorField& field, const Eigen::VectorXd& x0,
                                             int axis, double level, const SimConfig& config);

/// Diagonal linear field x_l' = lambda_l x_l with one axis per eigenvalue of `node`
/// (in declaration order); the node sits at the origin.
VectorField linear_node_field(const HeteroclinicNetwork& net, const std::string& node);

struct ExponentFit {
  std::string label;  // "principal" for the contracting exit coordinate
  double expected = 0.0;
  double fitted = 0.0;
  [[nodiscard]] double relative_error() const;
};

struct LocalMapFit {
  std::string incoming, node, outgoing;
  std::vector<ExponentFit> fits;
  [[nodiscard]] double worst_relative_error() const;
};

/// Flows `samples` random points of H_node^{in,incoming} under the linear node
/// field to H_node^{out,outgoing} and fits exponents by least squares in log-log.
LocalMapFit local_map_regression(const HeteroclinicNetwork& net, const std::string& incoming,
                                 const std::string& node, const std::string& outgoing,
                                 int samples = 100, std::uint64_t seed = 1);

}  // namespace heteroswitch
