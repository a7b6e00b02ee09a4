#include <doctest.h>

#include <string>

#include "heteroswitch/fields.hpp"
#include "heteroswitch/network.hpp"
#include "support.hpp"

using namespace heteroswitch;
using testing::fixture;

TEST_CASE("every built-in field carries its fixture") {
  for (const auto& name : field_names()) {
    CAPTURE(name);
    const auto net = fixture(fixture_for_field(name));
    const auto f = build_field(name, net);
    CHECK(f.nodes.size() == net.nodes.size());
    for (const auto& n : net.nodes) {
      CAPTURE(n.id);
      const auto& x = f.embedding(n.id).position;
      CHECK(f.rhs(x).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(eigenvalue_mismatches(f, net, n.id).empty());
      const Eigen::MatrixXd J = f.jacobian(x);
      const Eigen::MatrixXd Jn = f.numeric_jacobian(x);
      CHECK((J - Jn).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, J.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("analytic and numeric Jacobians agree away from the nodes") {
  const auto net = fixture("rspls");
  const auto f = build_field("rspls_replicator", net);
  Eigen::VectorXd x(5);
  x << 0.1, 0.3, 0.2, 0.15, 0.25;
  CHECK((f.jacobian(x) - f.numeric_jacobian(x)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("replicator networks") {
  const auto rsp = fixture("rsp");
  const auto f = build_field("rsp_replicator", rsp);
  CHECK(f.dimension == 6);
  CHECK(f.simplex_blocks.size() == 2);
  CHECK(distribution_nodes(rsp).size() == rsp.nodes.size());
  CHECK(build_field("r6_simplex", fixture("r6_simplex")).dimension == 6);
}

TEST_CASE("connection supports contain both endpoints") {
  const auto net = fixture("bowtie");
  const auto f = build_field("bowtie", net);
  for (const auto& c : net.connections) {
    const auto& s = f.connection_support.at(c.from + "->" + c.to);
    CHECK(s.size() == 2);
  }
}

TEST_CASE("build errors") {
  const auto rsp = fixture("rsp");
  CHECK_THROWS_AS((void)build_field("lorenz", rsp), FieldError);
  CHECK_THROWS_AS((void)build_field("rsp_replicator", rsp, {{"eps_x", 1.5}}), FieldError);
  CHECK_THROWS_AS((void)build_field("bowtie", fixture("bowtie"), {{"anything", 1.0}}), FieldError);
}

TEST_CASE("parameters that break the declared spectrum are rejected") {
  // eps changes the transverse eigenvalues away from the fixture
  CHECK_THROWS_AS((void)build_field("rsp_replicator", fixture("rsp"), {{"eps_x", 0.5}}), FieldError);
}

TEST_CASE("a declared eigenvalue the Jacobian does not have is reported") {
  auto net = fixture("bowtie");
  const auto f = build_field("bowtie", net);
  net.nodes[0].eigenvalues[1].value = 3.0;
  CHECK_FALSE(eigenvalue_mismatches(f, net, net.nodes[0].id).empty());
}
