#pragma once

// Leading-order local and global maps between cross sections, their exact
// composition in -log coordinates, and the region of a starting section whose
// points follow a given finite path.
//
// A section point has coordinates in [0,1) keyed by eigenvalue labels. In
// eta = -ln(x) the local map at xi_j (entering from xi_i, leaving to xi_k)
// reads
//   eta'_l = eta_l - (lambda_l / e1) * eta_w     for every axis l != w
//   eta'_v = (c1 / e1) * eta_w
// where w is the expanding label of j->k (eigenvalue e1), v the contracting
// label of i->j (eigenvalue -c1) and lambda_l the eigenvalue of label l.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "heteroswitch/cusp.hpp"
#include "heteroswitch/log_cone.hpp"
#include "heteroswitch/network.hpp"

namespace heteroswitch {

enum class SectionKind { incoming, outgoing };

/// H_node^{in,neighbor} or H_node^{out,neighbor}.
struct CrossSection {
  std::string node;
  SectionKind kind = SectionKind::incoming;
  std::string neighbor;
  std::vector<std::string> axes;

  [[nodiscard]] std::size_t axis(const std::string& label) const;  // throws
  [[nodiscard]] std::string name() const;
  bool operator==(const CrossSection&) const = default;
};

[[nodiscard]] CrossSection incoming_section(const HeteroclinicNetwork& net, const std::string& from,
                                            const std::string& node);
[[nodiscard]] CrossSection outgoing_section(const HeteroclinicNetwork& net, const std::string& node,
                                            const std::string& to);

struct CrossSectionPoint {
  CrossSection section;
  std::vector<double> coordinates;  // ordered as section.axes
};

/// eta' = matrix * eta + offset
struct LogAffineMap {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd offset;
  std::vector<std::string> domain_axes;
  std::vector<std::string> range_axes;

  [[nodiscard]] static LogAffineMap identity(const std::vector<std::string>& axes);
  [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& eta) const;
  /// (*this) after `first`.
  [[nodiscard]] LogAffineMap after(const LogAffineMap& first) const;
  [[nodiscard]] LogAffineMap inverse() const;
};

struct LocalMap {
  std::string incoming;
  std::string node;
  std::string outgoing;
  CrossSection domain;  // H_node^{in,incoming}
  CrossSection range;   // H_node^{out,outgoing}
  std::string w_label;  // principal expanding direction
  std::string v_label;  // principal contracting direction
  double c1 = 0.0;
  double e1 = 0.0;
  /// Label l != w of the domain and the exponent of w multiplying z_l:
  /// z'_l = z_l * w^exponent, exponent = -lambda_l / e1.
  std::vector<std::pair<std::string, double>> exponents;

  [[nodiscard]] double principal_exponent() const { return c1 / e1; }
  /// Pointwise evaluation on section coordinates (domain order in, range order out).
  [[nodiscard]] std::vector<double> apply(std::span<const double> in) const;
  [[nodiscard]] LogAffineMap log_form() const;
};

/// Throws NetworkError when i->j or j->k is missing.
[[nodiscard]] LocalMap local_map(const HeteroclinicNetwork& net, const std::string& i,
                                 const std::string& j, const std::string& k);

/// Rescaled permutation H_j^{out,k} -> H_k^{in,j} in log form: x_in = r * x_out.
[[nodiscard]] LogAffineMap global_map(const HeteroclinicNetwork& net, const std::string& j,
                                      const std::string& k);

struct RegionSystem {
  CrossSection section;
  std::vector<PowerRegion> regions;
  /// Constraints that do not reduce to two coordinates, kept as eta rows.
  std::vector<LinearInequality> general_rows;

  [[nodiscard]] LogConeSystem log_system() const;
  [[nodiscard]] bool empty_constraints() const { return regions.empty() && general_rows.empty(); }
};

/// Points of H_j^{in,i} that leave through H_j^{out,k}: one thin region
/// z_l < w^(lambda_l/e1) per other unstable direction l.
[[nodiscard]] RegionSystem domain_C(const HeteroclinicNetwork& net, const std::string& i,
                                    const std::string& j, const std::string& k);

/// Image of the local map in H_j^{out,k}: one thin region
/// z_l < v^(-lambda_l/c1) per other stable direction l.
[[nodiscard]] RegionSystem image_F(const HeteroclinicNetwork& net, const std::string& i,
                                   const std::string& j, const std::string& k);

/// Row a . eta > c with exactly two nonzero coefficients of opposite sign,
/// as a thin region; nullopt otherwise.
[[nodiscard]] std::optional<PowerRegion> as_power_region(const LinearInequality& row);

struct PathTransfer {
  std::vector<std::string> path;
  CrossSection start;  // H_{p1}^{in,p0}
  CrossSection end;    // H_{last}^{in,previous}
  LogAffineMap map;
  RegionSystem pulled_back;
  /// Every constraint on the starting section, including the unit box.
  LogConeSystem system;
};

/// Throws NetworkError on a broken path or a path of fewer than two nodes.
[[nodiscard]] PathTransfer compose_path(const HeteroclinicNetwork& net,
                                        const std::vector<std::string>& path);

[[nodiscard]] FeasibilityVerdict followable(const HeteroclinicNetwork& net,
                                            const std::vector<std::string>& path);

struct DepartureSet {
  CrossSection section;           // H_j^{out,k}
  std::vector<RegionSystem> images;  // F_ijk for each incoming i
  bool nonempty = false;          // points outside every F_ijk near the origin
  /// One thick region per image whose intersection witnesses the departure set.
  std::vector<PowerRegion> witness_regions;
};

/// Points of H_j^{out,k} outside the union of the images F_ijk.
[[nodiscard]] DepartureSet departure_set(const HeteroclinicNetwork& net, const std::string& j,
                                         const std::string& k);

}  // namespace heteroswitch
