#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "heteroswitch/log_cone.hpp"

using namespace heteroswitch;

namespace {
#include "oracle_values.inc"

LogConeSystem system_of(const OracleCase& oc) {
  LogConeSystem s;
  s.dimension = oc.n;
  for (const auto& r : oc.rows) s.rows.push_back({r.a, r.greater ? Sense::greater : Sense::less, r.c});
  return s;
}

LinearInequality row(std::vector<double> a, Sense s, double c = 0.0) { return {std::move(a), s, c}; }

}  // namespace

TEST_CASE("decision agrees with the linear-programming oracle") {
  int feasible = 0;
  for (std::size_t k = 0; k < kLogConeOracle.size(); ++k) {
    CAPTURE(k);
    const auto sys = system_of(kLogConeOracle[k]);
    const auto v = decide_near_origin(sys);
    CHECK(v.intersects_near_origin == kLogConeOracle[k].feasible);
    CHECK(v.witness.has_value() != v.certificate.has_value());
    if (v.witness) CHECK(verify_witness(sys, *v.witness));
    if (v.certificate) CHECK(replay_certificate(sys, *v.certificate));
    feasible += v.intersects_near_origin;
  }
  // the table exercises both outcomes
  CHECK(feasible > 5);
  CHECK(feasible < static_cast<int>(kLogConeOracle.size()) - 5);
}

TEST_CASE("opposed cusps have no positive direction") {
  LogConeSystem s{2, {row({1, -2}, Sense::greater), row({-2, 1}, Sense::greater)}};
  const auto v = decide_near_origin(s);
  CHECK_FALSE(v.intersects_near_origin);
  REQUIRE(v.certificate);
  CHECK(v.certificate->kind == CertificateKind::no_positive_direction);
  CHECK(replay_certificate(s, *v.certificate));
}

TEST_CASE("constants decide ties of the homogeneous system") {
  // ln a < eta1 - eta2 < ln b
  LogConeSystem open{2, {row({1, -1}, Sense::greater, std::log(0.5)), row({1, -1}, Sense::less, std::log(2.0))}};
  const auto v = decide_near_origin(open);
  CHECK(v.intersects_near_origin);
  REQUIRE(v.witness);
  CHECK(verify_witness(open, *v.witness));

  LogConeSystem closed{2, {row({1, -1}, Sense::greater, std::log(2.0)), row({1, -1}, Sense::less, std::log(0.5))}};
  const auto w = decide_near_origin(closed);
  CHECK_FALSE(w.intersects_near_origin);
  REQUIRE(w.certificate);
  CHECK(w.certificate->kind == CertificateKind::empty_region);
  CHECK(replay_certificate(closed, *w.certificate));
}

TEST_CASE("a certificate for one system does not replay on a feasible one") {
  LogConeSystem bad{2, {row({1, -2}, Sense::greater), row({-2, 1}, Sense::greater)}};
  const auto cert = *decide_near_origin(bad).certificate;
  LogConeSystem good{2, {row({1, -2}, Sense::greater), row({-0.25, 1}, Sense::greater)}};
  CHECK(decide_near_origin(good).intersects_near_origin);
  CHECK_FALSE(replay_certificate(good, cert));
}

TEST_CASE("witness rays are strictly positive and hold for large t") {
  LogConeSystem s{3, {row({1, -2, 0}, Sense::greater, 1.0), row({0, 1, -1.5}, Sense::greater, -2.0)}};
  const auto v = decide_near_origin(s);
  REQUIRE(v.witness);
  for (double d : v.witness->direction) CHECK(d > 0.0);
  for (double t : {1e3, 1e6}) {
    const auto eta = v.witness->at(t);
    for (const auto& r : s.rows) CHECK(r.satisfied_by(eta));
  }
}

TEST_CASE("empty system is feasible") {
  LogConeSystem s{3, {}};
  CHECK(decide_near_origin(s).intersects_near_origin);
}

TEST_CASE("row length is checked") {
  LogConeSystem s{3, {row({1, -1}, Sense::greater)}};
  CHECK_THROWS_AS(s.check(), std::invalid_argument);
}

TEST_CASE("homogeneous drops constants") {
  LogConeSystem s{2, {row({1, -1}, Sense::greater, 3.0)}};
  CHECK(s.homogeneous().rows.front().constant == 0.0);
}

TEST_CASE("Fourier-Motzkin points satisfy the input rows") {
  for (const auto& oc : kLogConeOracle) {
    std::vector<detail::FmRow> rows;
    for (const auto& r : oc.rows) {
      detail::FmRow fr{r.a, r.c, true};
      if (!r.greater) {
        for (auto& x : fr.a) x = -x;
        fr.rhs = -fr.rhs;
      }
      rows.push_back(fr);
    }
    const auto res = detail::fourier_motzkin(rows, oc.n);
    if (!res.feasible) continue;
    for (const auto& fr : rows) {
      double lhs = 0.0;
      for (std::size_t k = 0; k < oc.n; ++k) lhs += fr.a[k] * res.point[k];
      CHECK(lhs > fr.rhs);
    }
  }
}

TEST_CASE("Fourier-Motzkin multipliers combine to a contradiction") {
  // x > 1, -x > 0
  std::vector<detail::FmRow> rows{{{1.0}, 1.0, true}, {{-1.0}, 0.0, true}};
  const auto res = detail::fourier_motzkin(rows, 1);
  REQUIRE_FALSE(res.feasible);
  REQUIRE(res.multipliers.size() == 2);
  const double combo = res.multipliers[0] * 1.0 + res.multipliers[1] * -1.0;
  CHECK(std::abs(combo) < 1e-12);
  const double rhs = res.multipliers[0] * 1.0;
  CHECK(rhs >= 0.0);
}
