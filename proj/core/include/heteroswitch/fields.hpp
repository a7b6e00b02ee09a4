#pragma once

// Built-in Kolmogorov vector fields f_i(x) = x_i * g_i(x) carrying the
// fixture networks on their invariant coordinate subspaces.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "heteroswitch/network.hpp"

namespace heteroswitch {

struct FieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Where a network node sits and how its eigenvalue labels map to coordinates.
struct NodeEmbedding {
  std::string id;
  Eigen::VectorXd position;
  std::map<std::string, int> label_axis;
};

struct VectorField {
  std::string name;
  int dimension = 0;
  std::map<std::string, double> parameters;
  /// Per-coordinate growth rates g(x).
  std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& g)> growth;
  /// Jacobian of g.
  std::function<void(const Eigen::VectorXd& x, Eigen::MatrixXd& dg)> growth_jacobian;
  std::vector<NodeEmbedding> nodes;
  /// Coordinates that may be nonzero on each connection, keyed "from->to".
  std::map<std::string, std::vector<int>> connection_support;
  /// Coordinate blocks constrained to a simplex (sum one), if any.
  std::vector<std::vector<int>> simplex_blocks;

  [[nodiscard]] Eigen::VectorXd rhs(const Eigen::VectorXd& x) const;
  /// Analytic Jacobian diag(g) + diag(x) Dg.
  [[nodiscard]] Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;
  /// Central differences of rhs with step h.
  [[nodiscard]] Eigen::MatrixXd numeric_jacobian(const Eigen::VectorXd& x, double h = 1e-6) const;
  [[nodiscard]] const NodeEmbedding& embedding(const std::string& id) const;
};

/// Names accepted by build_field.
[[nodiscard]] std::vector<std::string> field_names();
/// Fixture file stem whose network the field carries.
[[nodiscard]] std::string fixture_for_field(const std::string& name);

/// Builds the named field for the given network and checks that every node is
/// an equilibrium whose Jacobian spectrum contains the declared eigenvalues.
///   Lotka-Volterra families (kirk_silber, bowtie, house, ac_network, r6_simplex):
///     g_i = 1 - sum_l M_il x_l, with M derived from the declared eigenvalues.
///   rsp_replicator: two populations on a product of triangles in R^6,
///     parameters eps_x, eps_y in (-1, 1).
///   rspls_replicator: one population on the 4-simplex in R^5, parameters
///     payoff_k_i (k != i, 1-based) override the default payoff matrix.
/// Throws FieldError on unknown names, bad parameters or eigenvalue mismatch.
[[nodiscard]] VectorField build_field(const std::string& name, const HeteroclinicNetwork& net,
                                      const std::map<std::string, double>& params = {});

/// Declared eigenvalues at `node` not matched by the Jacobian spectrum within tol.
[[nodiscard]] std::vector<std::string> eigenvalue_mismatches(const VectorField& field,
                                                             const HeteroclinicNetwork& net,
                                                             const std::string& node,
                                                             double tol = 1e-8);

}  // namespace heteroswitch
