#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "heteroswitch/fields.hpp"
#include "heteroswitch/ode.hpp"
#include "support.hpp"

using namespace heteroswitch;
using testing::fixture;

namespace {

SimConfig short_run(double t = 20.0) {
  SimConfig c;
  c.max_time = t;
  return c;
}

}  // namespace

TEST_CASE("equilibria stay put") {
  const auto net = fixture("bowtie");
  const auto f = build_field("bowtie", net);
  const auto& x0 = f.embedding("xi3").position;
  const auto tr = integrate(f, x0, short_run(5.0));
  REQUIRE(tr.states.size() > 10);
  CHECK_FALSE(tr.underflow);
  for (const auto& x : tr.states) CHECK((x - x0).norm() < 1e-12);
}

TEST_CASE("a point on a connection converges to its target") {
  const auto net = fixture("bowtie");
  const auto f = build_field("bowtie", net);
  const auto& a = f.embedding("xi1").position;
  const auto& b = f.embedding("xi2").position;
  const Eigen::VectorXd x0 = 0.9 * a + 0.1 * b;
  const auto tr = integrate(f, x0, short_run(30.0));
  CHECK((tr.states.back() - b).norm() < 1e-6);
  // off-support coordinates stay exactly zero
  for (int k = 0; k < f.dimension; ++k)
    if (a(k) == 0.0 && b(k) == 0.0) CHECK(tr.states.back()(k) == 0.0);
  // distance to the target decreases once it starts decreasing
  std::size_t k = 1;
  while (k < tr.states.size() && (tr.states[k] - b).norm() >= (tr.states[k - 1] - b).norm()) ++k;
  for (; k + 1 < tr.states.size() && (tr.states[k] - b).norm() > 1e-9; ++k)
    CHECK((tr.states[k + 1] - b).norm() <= (tr.states[k] - b).norm());
}

TEST_CASE("section crossings converge under tolerance refinement") {
  const auto net = fixture("kirk_silber");
  const auto f = build_field("kirk_silber", net);
  Eigen::VectorXd x0 = f.embedding("xi1").position;
  x0(1) = 1e-3;  // along xi1 -> xi2
  x0(2) = 1e-4;
  x0(3) = 2e-4;
  SimConfig coarse = short_run(200.0);
  SimConfig fine = coarse;
  fine.abs_tol /= 2;
  fine.rel_tol /= 2;
  const auto a = integrate_to_level(f, x0, 1, 0.5, coarse);
  const auto b = integrate_to_level(f, x0, 1, 0.5, fine);
  REQUIRE(a);
  REQUIRE(b);
  CHECK(a->state(1) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK((a->state - b->state).cwiseAbs().maxCoeff() < 1e-4);
  CHECK(std::abs(a->time - b->time) < 1e-4);
}

TEST_CASE("integration is deterministic") {
  const auto net = fixture("rspls");
  const auto f = build_field("rspls_replicator", net);
  Eigen::VectorXd x0(5);
  x0 << 0.9, 0.02, 0.03, 0.04, 0.01;
  const auto a = integrate(f, x0, short_run(10.0));
  const auto b = integrate(f, x0, short_run(10.0));
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k) CHECK(a.states[k] == b.states[k]);
}

TEST_CASE("the observer stops the run") {
  const auto f = build_field("bowtie", fixture("bowtie"));
  int calls = 0;
  const auto tr = integrate(f, f.embedding("xi1").position, short_run(10.0),
                            [&](double, const Eigen::VectorXd&) { return ++calls < 5; });
  CHECK(calls == 5);
  CHECK(tr.times.size() <= 5);
}

TEST_CASE("simplex blocks are preserved") {
  const auto f = build_field("rsp_replicator", fixture("rsp"));
  Eigen::VectorXd x0(6);
  x0 << 0.7, 0.2, 0.1, 0.5, 0.3, 0.2;
  const auto tr = integrate(f, x0, short_run(20.0));
  for (const auto& x : tr.states) {
    CHECK(x.head(3).sum() == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(x.tail(3).sum() == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("config validation") {
  SimConfig c;
  c.node_radius = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SimConfig{};
  c.departure = c.node_radius;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SimConfig{};
  c.ensemble = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("linear flow recovers local map exponents") {
  const auto net = fixture("bowtie");
  const auto fit = local_map_regression(net, "xi1", "xi2", "xi3", 30, 5);
  CHECK(fit.worst_relative_error() <= 0.05);
  bool principal = false;
  for (const auto& e : fit.fits)
    if (e.label == "principal") {
      principal = true;
      CHECK(e.fitted == doctest::Approx(1.0).epsilon(0.05));
    }
  CHECK(principal);
}

TEST_CASE("linear node field has one axis per eigenvalue") {
  const auto net = fixture("r6_simplex");
  const auto f = linear_node_field(net, "xi2");
  CHECK(f.dimension == static_cast<int>(net.node("xi2").eigenvalues.size()));
  Eigen::VectorXd x = Eigen::VectorXd::Constant(f.dimension, 0.1);
  const auto J = f.jacobian(Eigen::VectorXd::Zero(f.dimension));
  for (int k = 0; k < f.dimension; ++k) CHECK(J(k, k) == net.node("xi2").eigenvalues[static_cast<std::size_t>(k)].value);
  CHECK(f.rhs(x).size() == f.dimension);
}
