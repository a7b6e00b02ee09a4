#include "heteroswitch/log_cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace heteroswitch {

namespace {

constexpr double kCoefficientZero = 1e-12;
constexpr double kResidualZero = 1e-9;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Row sense folded into the coefficients: a' . eta > c'.
std::vector<double> folded_coefficients(const LinearInequality& row) {
  std::vector<double> a = row.coefficients;
  if (row.sense == Sense::less)
    for (double& v : a) v = -v;
  return a;
}

double folded_constant(const LinearInequality& row) {
  return row.sense == Sense::less ? -row.constant : row.constant;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double LinearInequality::margin(std::span<const double> eta) const {
  const double lhs = dot(coefficients, eta);
  return sense == Sense::greater ? lhs - constant : constant - lhs;
}

std::size_t LinearInequality::support_size() const {
  return static_cast<std::size_t>(
      std::count_if(coefficients.begin(), coefficients.end(), [](double v) { return v != 0.0; }));
}

LogConeSystem LogConeSystem::homogeneous() const {
  LogConeSystem out = *this;
  for (auto& r : out.rows) r.constant = 0.0;
  return out;
}

void LogConeSystem::check() const {
  for (const auto& r : rows) {
    if (r.coefficients.size() != dimension)
      throw std::invalid_argument("log-cone row has " + std::to_string(r.coefficients.size()) +
                                  " coefficients, system dimension is " +
                                  std::to_string(dimension));
    for (double v : r.coefficients)
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite log-cone coefficient");
    if (!std::isfinite(r.constant)) throw std::invalid_argument("non-finite log-cone constant");
  }
}

std::vector<double> WitnessRay::at(double t) const {
  std::vector<double> p(direction.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = (base.empty() ? 0.0 : base[i]) + t * direction[i];
  return p;
}

namespace detail {

namespace {

struct WorkRow {
  std::vector<double> a;
  double rhs = 0.0;
  bool strict = false;
  std::vector<double> lambda;
  std::size_t support = 0;
};

void normalise(WorkRow& r) {
  double s = max_abs(r.a);
  if (s == 0.0) s = std::abs(r.rhs);
  if (s == 0.0 || !std::isfinite(s)) return;
  for (double& v : r.a) v /= s;
  r.rhs /= s;
  for (double& v : r.lambda) v /= s;
  for (double& v : r.a)
    if (std::abs(v) < kCoefficientZero) v = 0.0;
}

bool all_zero(const WorkRow& r) {
  return std::all_of(r.a.begin(), r.a.end(), [](double v) { return v == 0.0; });
}

bool contradicts(const WorkRow& r) {
  return r.strict ? r.rhs >= -kResidualZero : r.rhs > kResidualZero;
}

// Keeps the tightest of rows with identical coefficient vectors.
void deduplicate(std::vector<WorkRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const WorkRow& x, const WorkRow& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.rhs != y.rhs) return x.rhs > y.rhs;
    return x.strict && !y.strict;
  });
  std::vector<WorkRow> kept;
  kept.reserve(rows.size());
  for (auto& r : rows) {
    if (!kept.empty()) {
      const auto& last = kept.back();
      bool same = true;
      for (std::size_t i = 0; i < r.a.size() && same; ++i)
        same = std::abs(r.a[i] - last.a[i]) <= 1e-12;
      if (same) continue;
    }
    kept.push_back(std::move(r));
  }
  rows = std::move(kept);
}

}  // namespace

namespace {

FmResult eliminate(const std::vector<FmRow>& input, std::size_t dimension, std::size_t max_rows,
                   bool prune) {
  const std::size_t m = input.size();
  FmResult result;

  std::vector<WorkRow> rows;
  rows.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (input[i].a.size() != dimension)
      throw std::invalid_argument("Fourier-Motzkin row has wrong dimension");
    WorkRow r{input[i].a, input[i].rhs, input[i].strict, std::vector<double>(m, 0.0), 1};
    r.lambda[i] = 1.0;
    normalise(r);
    rows.push_back(std::move(r));
  }

  auto fail_on = [&](const WorkRow& r) {
    result.feasible = false;
    result.multipliers = r.lambda;
    result.residual = r.rhs;
    return result;
  };

  // Zero rows at the outset are either tautologies or contradictions.
  auto sweep_zero_rows = [&](std::vector<WorkRow>& rs) -> const WorkRow* {
    for (const auto& r : rs)
      if (all_zero(r) && contradicts(r)) return &r;
    rs.erase(std::remove_if(rs.begin(), rs.end(), [](const WorkRow& r) { return all_zero(r); }),
             rs.end());
    return nullptr;
  };
  if (const WorkRow* bad = sweep_zero_rows(rows)) return fail_on(*bad);

  std::vector<std::vector<WorkRow>> levels;  // system before each elimination
  std::vector<bool> eliminated(dimension, false);

  for (std::size_t step = 0; step < dimension; ++step) {
    // Pick the variable producing the fewest combinations.
    std::size_t best = dimension;
    long long best_cost = std::numeric_limits<long long>::max();
    for (std::size_t k = 0; k < dimension; ++k) {
      if (eliminated[k]) continue;
      long long pos = 0, neg = 0;
      for (const auto& r : rows) {
        if (r.a[k] > 0.0) ++pos;
        else if (r.a[k] < 0.0) ++neg;
      }
      const long long cost = pos * neg - pos - neg;
      if (cost < best_cost) {
        best_cost = cost;
        best = k;
      }
    }
    const std::size_t k = best;
    eliminated[k] = true;
    result.elimination_order.push_back(k);
    levels.push_back(rows);

    std::vector<const WorkRow*> pos, neg;
    std::vector<WorkRow> next;
    for (const auto& r : rows) {
      if (r.a[k] > 0.0) pos.push_back(&r);
      else if (r.a[k] < 0.0) neg.push_back(&r);
      else next.push_back(r);
    }
    const std::size_t support_cap = step + 2;  // Chernikov: at most s+1 originals after s steps
    for (const WorkRow* p : pos) {
      for (const WorkRow* q : neg) {
        const double wp = -q->a[k];
        const double wq = p->a[k];
        WorkRow c;
        c.a.resize(dimension);
        for (std::size_t i = 0; i < dimension; ++i) c.a[i] = wp * p->a[i] + wq * q->a[i];
        c.a[k] = 0.0;
        c.rhs = wp * p->rhs + wq * q->rhs;
        c.strict = p->strict || q->strict;
        c.lambda.resize(m);
        std::size_t support = 0;
        for (std::size_t i = 0; i < m; ++i) {
          c.lambda[i] = wp * p->lambda[i] + wq * q->lambda[i];
          if (c.lambda[i] > 0.0) ++support;
        }
        c.support = support;
        if (prune && support > support_cap) continue;
        normalise(c);
        if (all_zero(c)) {
          if (contradicts(c)) return fail_on(c);
          continue;
        }
        next.push_back(std::move(c));
        if (next.size() > max_rows)
          throw std::length_error("Fourier-Motzkin elimination exceeded row cap");
      }
    }
    deduplicate(next);
    rows = std::move(next);
  }

  // Every variable eliminated without contradiction: back-substitute.
  std::vector<double> x(dimension, 0.0);
  for (std::size_t idx = dimension; idx-- > 0;) {
    const std::size_t k = result.elimination_order[idx];
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& r : levels[idx]) {
      if (r.a[k] == 0.0) continue;
      double rest = r.rhs;
      for (std::size_t i = 0; i < dimension; ++i)
        if (i != k) rest -= r.a[i] * x[i];
      const double bound = rest / r.a[k];
      if (r.a[k] > 0.0) lo = std::max(lo, bound);
      else hi = std::min(hi, bound);
    }
    double v;
    if (std::isfinite(lo) && std::isfinite(hi)) v = 0.5 * (lo + hi);
    else if (std::isfinite(lo)) v = lo + std::max(1.0, std::abs(lo));
    else if (std::isfinite(hi)) v = hi - std::max(1.0, std::abs(hi));
    else v = 0.0;
    x[k] = v;
  }
  result.feasible = true;
  result.point = std::move(x);
  return result;
}

bool satisfies(const std::vector<FmRow>& input, const std::vector<double>& x) {
  for (const auto& r : input) {
    double lhs = 0.0, size = std::abs(r.rhs);
    for (std::size_t i = 0; i < x.size(); ++i) {
      lhs += r.a[i] * x[i];
      size += std::abs(r.a[i] * x[i]);
    }
    if (lhs - r.rhs < -1e-9 * std::max(1.0, size)) return false;
  }
  return true;
}

}  // namespace

FmResult fourier_motzkin(const std::vector<FmRow>& input, std::size_t dimension,
                         std::size_t max_rows) {
  // Chernikov pruning combined with deduplication can drop a constraint the
  // projection needs; contradictions stay valid, so only a feasible answer is
  // rechecked, and redone exhaustively when its point misses a row.
  FmResult fast = eliminate(input, dimension, max_rows, true);
  if (!fast.feasible || satisfies(input, fast.point)) return fast;
  return eliminate(input, dimension, max_rows, false);
}

}  // namespace detail

namespace {

using detail::FmRow;

// rows a'.d >= 0 (or >= 1 when strict_cone) together with d_k >= 1.
std::vector<FmRow> cone_rows(const LogConeSystem& s, bool strict_cone,
                             std::vector<std::size_t>& kept) {
  std::vector<FmRow> rows;
  kept.clear();
  for (std::size_t r = 0; r < s.rows.size(); ++r) {
    auto a = folded_coefficients(s.rows[r]);
    const double scale = max_abs(a);
    if (scale == 0.0) {
      // 0 > c: a zero row constrains only through its constant.
      if (strict_cone) {
        rows.push_back({a, 1.0, false});
        kept.push_back(r);
      }
      continue;
    }
    for (double& v : a) v /= scale;
    // Rows with nonnegative coefficients are implied by d >= 1.
    if (std::all_of(a.begin(), a.end(), [](double v) { return v >= 0.0; })) continue;
    rows.push_back({a, strict_cone ? 1.0 : 0.0, false});
    kept.push_back(r);
  }
  for (std::size_t k = 0; k < s.dimension; ++k) {
    std::vector<double> e(s.dimension, 0.0);
    e[k] = 1.0;
    rows.push_back({e, 1.0, false});
  }
  return rows;
}

}  // namespace

namespace {

// Positive rescaling keeps a direction valid; smallest entry 1 reads best.
std::vector<double> normalized(std::vector<double> d) {
  const double lo = *std::min_element(d.begin(), d.end());
  if (lo > 0.0)
    for (double& v : d) v /= lo;
  return d;
}

}  // namespace

FeasibilityVerdict decide_near_origin(const LogConeSystem& system) {
  system.check();
  const std::size_t n = system.dimension;
  FeasibilityVerdict verdict;

  // Strictly interior direction: every row grows without bound along it.
  {
    std::vector<std::size_t> kept;
    auto rows = cone_rows(system, true, kept);
    auto fm = detail::fourier_motzkin(rows, n);
    if (fm.feasible) {
      verdict.intersects_near_origin = true;
      verdict.witness = WitnessRay{std::vector<double>(n, 0.0), normalized(fm.point)};
      return verdict;
    }
  }

  // Recession directions a'.d >= 0 inside the open orthant.
  std::vector<double> direction;
  {
    std::vector<std::size_t> kept;
    auto rows = cone_rows(system, false, kept);
    auto fm = detail::fourier_motzkin(rows, n);
    if (!fm.feasible) {
      Certificate cert;
      cert.kind = CertificateKind::no_positive_direction;
      cert.row_multipliers.assign(system.rows.size(), 0.0);
      // Undo the per-row scaling so multipliers act on the original rows.
      for (std::size_t i = 0; i < kept.size(); ++i) {
        const double scale = max_abs(system.rows[kept[i]].coefficients);
        cert.row_multipliers[kept[i]] = fm.multipliers[i] / (scale == 0.0 ? 1.0 : scale);
      }
      cert.positivity_multipliers.assign(fm.multipliers.begin() + static_cast<long>(kept.size()),
                                         fm.multipliers.end());
      cert.elimination_order = fm.elimination_order;
      cert.residual = fm.residual;
      verdict.certificate = std::move(cert);
      return verdict;
    }
    direction = normalized(fm.point);
  }

  // Some positive recession direction exists; the region itself must be nonempty.
  std::vector<FmRow> rows;
  rows.reserve(system.rows.size());
  for (const auto& r : system.rows) rows.push_back({folded_coefficients(r), folded_constant(r), true});
  auto fm = detail::fourier_motzkin(rows, n);
  if (!fm.feasible) {
    Certificate cert;
    cert.kind = CertificateKind::empty_region;
    cert.row_multipliers = fm.multipliers;
    cert.elimination_order = fm.elimination_order;
    cert.residual = fm.residual;
    verdict.certificate = std::move(cert);
    return verdict;
  }
  verdict.intersects_near_origin = true;
  verdict.witness = WitnessRay{fm.point, direction};
  return verdict;
}

bool replay_certificate(const LogConeSystem& system, const Certificate& cert, double tolerance) {
  const std::size_t n = system.dimension;
  if (cert.row_multipliers.size() != system.rows.size()) return false;
  std::vector<double> sum(n, 0.0);
  double constant = 0.0;
  double total = 0.0;
  for (std::size_t r = 0; r < system.rows.size(); ++r) {
    const double l = cert.row_multipliers[r];
    if (l < 0.0 || !std::isfinite(l)) return false;
    if (l == 0.0) continue;
    const auto a = folded_coefficients(system.rows[r]);
    for (std::size_t i = 0; i < n; ++i) sum[i] += l * a[i];
    constant += l * folded_constant(system.rows[r]);
    total += l * std::max(1.0, max_abs(a));
  }
  if (cert.kind == CertificateKind::empty_region) {
    // sum . eta > constant with sum == 0 and constant >= 0.
    if (total <= 0.0) return false;
    for (double v : sum)
      if (std::abs(v) > tolerance * total) return false;
    return constant >= -tolerance * total;
  }
  // no_positive_direction: sum(lambda a') + mu == 0 and sum(mu) > 0.
  if (cert.positivity_multipliers.size() != n) return false;
  double mu_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = cert.positivity_multipliers[i];
    if (mu < 0.0 || !std::isfinite(mu)) return false;
    sum[i] += mu;
    mu_total += mu;
  }
  const double scale = total + mu_total;
  if (mu_total <= tolerance * scale) return false;
  for (double v : sum)
    if (std::abs(v) > tolerance * scale) return false;
  return true;
}

bool verify_witness(const LogConeSystem& system, const WitnessRay& w) {
  const std::size_t n = system.dimension;
  if (w.direction.size() != n || (!w.base.empty() && w.base.size() != n)) return false;
  for (double d : w.direction)
    if (!(d > 0.0)) return false;
  // margin(t) = m0 + t*m1 must become and stay positive.
  double t_needed = 0.0;
  const std::vector<double> base = w.base.empty() ? std::vector<double>(n, 0.0) : w.base;
  auto require = [&](double m0, double m1) {
    if (m1 < -1e-12) return false;
    if (m1 <= 1e-12) return m0 > 0.0;
    t_needed = std::max(t_needed, -m0 / m1);
    return true;
  };
  for (const auto& r : system.rows) {
    const double m0 = r.margin(base);
    LinearInequality hr = r;
    hr.constant = 0.0;
    const double m1 = hr.margin(w.direction);
    if (!require(m0, m1)) return false;
  }
  for (std::size_t k = 0; k < n; ++k)
    if (!require(base[k], w.direction[k])) return false;
  for (double t : {t_needed + 1.0, 10.0 * (t_needed + 1.0)}) {
    const auto p = w.at(t);
    for (const auto& r : system.rows)
      if (!r.satisfied_by(p)) return false;
    for (double v : p)
      if (!(v > 0.0)) return false;
  }
  return true;
}

std::string describe(const LinearInequality& row) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < row.coefficients.size(); ++i) {
    const double c = row.coefficients[i];
    if (c == 0.0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    const double mag = std::abs(c);
    if (mag != 1.0) os << mag << "*";
    os << "eta" << (i + 1);
    first = false;
  }
  if (first) os << "0";
  os << (row.sense == Sense::greater ? " > " : " < ") << row.constant;
  return os.str();
}

std::string describe(const Certificate& cert, const LogConeSystem& system) {
  std::ostringstream os;
  os << (cert.kind == CertificateKind::empty_region ? "empty region" : "no positive direction")
     << "; elimination order:";
  for (auto k : cert.elimination_order) os << " eta" << (k + 1);
  os << "\n";
  for (std::size_t r = 0; r < cert.row_multipliers.size() && r < system.rows.size(); ++r) {
    if (cert.row_multipliers[r] == 0.0) continue;
    os << "  " << cert.row_multipliers[r] << " x [" << describe(system.rows[r]) << "]\n";
  }
  for (std::size_t k = 0; k < cert.positivity_multipliers.size(); ++k) {
    if (cert.positivity_multipliers[k] == 0.0) continue;
    os << "  " << cert.positivity_multipliers[k] << " x [d" << (k + 1) << " >= 1]\n";
  }
  if (cert.kind == CertificateKind::empty_region)
    os << "  => 0 > " << cert.residual << " (contradiction)";
  else
    os << "  => 0 >= " << cert.residual << " (contradiction)";
  return os.str();
}

}  // namespace heteroswitch
