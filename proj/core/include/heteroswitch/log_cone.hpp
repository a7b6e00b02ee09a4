#pragma once

// Feasibility of strict linear inequality systems in -log coordinates.
//
// A point x of the open unit box (0,1)^N is written eta = -log(x), so that
// eta > 0 componentwise and "close to the origin" means "every eta_k large".
// Power-type regions a*x_i < x_j^alpha become linear rows in eta, and the
// question "does the region meet every ball around the origin?" becomes a
// question about rays of the polyhedron that point into the positive orthant.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace heteroswitch {

enum class Sense { greater, less };

/// coefficients . eta  (> or <)  constant
struct LinearInequality {
  std::vector<double> coefficients;
  Sense sense = Sense::greater;
  double constant = 0.0;

  /// Signed margin, positive iff the row holds strictly at eta.
  [[nodiscard]] double margin(std::span<const double> eta) const;
  [[nodiscard]] bool satisfied_by(std::span<const double> eta) const {
    return margin(eta) > 0.0;
  }
  [[nodiscard]] std::size_t support_size() const;
};

struct LogConeSystem {
  std::size_t dimension = 0;
  std::vector<LinearInequality> rows;

  /// Same rows with every constant set to zero.
  [[nodiscard]] LogConeSystem homogeneous() const;
  /// Throws std::invalid_argument if a row has the wrong length.
  void check() const;
};

/// Points base + t*direction satisfy every row and lie in the open positive
/// orthant for all sufficiently large t. direction is strictly positive.
struct WitnessRay {
  std::vector<double> base;
  std::vector<double> direction;

  [[nodiscard]] std::vector<double> at(double t) const;
};

enum class CertificateKind {
  /// The rows have no common solution anywhere: a nonnegative combination of
  /// the strict rows reads 0 > c with c >= 0.
  empty_region,
  /// Solutions exist but none escapes to infinity inside the positive
  /// orthant: a nonnegative combination of the recession rows a.d >= 0 and
  /// the normalisation rows d_k >= 1 reads 0 >= c with c > 0.
  no_positive_direction,
};

struct Certificate {
  CertificateKind kind = CertificateKind::empty_region;
  /// One multiplier per system row (row sense already folded in).
  std::vector<double> row_multipliers;
  /// One multiplier per coordinate bound d_k >= 1 (no_positive_direction only).
  std::vector<double> positivity_multipliers;
  /// Variables in the order the elimination removed them.
  std::vector<std::size_t> elimination_order;
  /// Right-hand side of the final contradictory row 0 (> or >=) residual.
  double residual = 0.0;
};

struct FeasibilityVerdict {
  bool intersects_near_origin = false;
  std::optional<WitnessRay> witness;
  std::optional<Certificate> certificate;
};

/// Decides whether {eta : rows hold} contains points with every coordinate
/// arbitrarily large. Exact up to floating-point tolerance; ties between
/// constants are honoured (e.g. ln a < g < ln b is nonempty for a < b).
[[nodiscard]] FeasibilityVerdict decide_near_origin(const LogConeSystem& system);

/// Re-derives the contradiction from the original rows using only the
/// multipliers. Does not consult the elimination.
[[nodiscard]] bool replay_certificate(const LogConeSystem& system, const Certificate& certificate,
                                      double tolerance = 1e-9);

/// Checks the ray against every row and the orthant for large t.
[[nodiscard]] bool verify_witness(const LogConeSystem& system, const WitnessRay& witness);

[[nodiscard]] std::string describe(const Certificate& certificate, const LogConeSystem& system);
[[nodiscard]] std::string describe(const LinearInequality& row);

namespace detail {

/// One row of a Fourier-Motzkin system: a . x  (> if strict, else >=)  rhs.
struct FmRow {
  std::vector<double> a;
  double rhs = 0.0;
  bool strict = false;
};

struct FmResult {
  bool feasible = false;
  std::vector<double> point;                 // when feasible
  std::vector<double> multipliers;           // when infeasible, one per input row
  std::vector<std::size_t> elimination_order;
  double residual = 0.0;
};

/// Fourier-Motzkin elimination with multiplier tracking and Chernikov
/// redundancy pruning. Throws std::length_error past max_rows.
[[nodiscard]] FmResult fourier_motzkin(const std::vector<FmRow>& rows, std::size_t dimension,
                                       std::size_t max_rows = 200000);

}  // namespace detail
}  // namespace heteroswitch
