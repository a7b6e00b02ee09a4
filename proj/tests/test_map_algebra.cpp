#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "heteroswitch/map_algebra.hpp"
#include "support.hpp"

using namespace heteroswitch;
using testing::fixture;

namespace {
#include "oracle_values.inc"

// Node a has incoming contracting x1 (-c1), expanding x2 (e1) towards b and a
// second expanding direction x3 (e2) that carries no connection.
HeteroclinicNetwork one_choice_node(double c1, double e1, double e2) {
  nlohmann::json doc;
  doc["ambient_dimension"] = 3;
  doc["nodes"] = {
      {{"id", "a"},
       {"eigenvalues",
        {{{"value", -c1}, {"klass", "contracting"}, {"label", "x1"}},
         {{"value", e1}, {"klass", "expanding"}, {"label", "x2"}},
         {{"value", e2}, {"klass", "expanding"}, {"label", "x3"}}}}},
      {{"id", "b"},
       {"eigenvalues",
        {{{"value", -1.0}, {"klass", "contracting"}, {"label", "x2"}},
         {{"value", 1.0}, {"klass", "expanding"}, {"label", "x1"}},
         {{"value", -1.0}, {"klass", "transverse"}, {"label", "x3"}}}}}};
  doc["connections"] = {{{"from", "a"}, {"to", "b"}, {"expanding_label", "x2"}, {"contracting_label", "x2"}},
                        {{"from", "b"}, {"to", "a"}, {"expanding_label", "x1"}, {"contracting_label", "x1"}}};
  return load_network(doc.dump());
}

std::vector<double> eta_of(const std::vector<double>& x) {
  std::vector<double> e;
  for (double v : x) e.push_back(-std::log(v));
  return e;
}

}  // namespace

TEST_CASE("principal exponent 1 when c1 = e1") {
  const auto m = local_map(one_choice_node(1.0, 1.0, 0.5), "b", "a", "b");
  CHECK(m.principal_exponent() == 1.0);
  const std::vector<double> in{0.2, 0.3};  // w = x2, z = x3
  CHECK(m.apply(in)[m.range.axis("x1")] == doctest::Approx(0.2));
}

TEST_CASE("c1 = 2, e1 = 1, w = 0.25 gives v = 0.0625") {
  const auto m = local_map(one_choice_node(2.0, 1.0, 0.5), "b", "a", "b");
  const std::vector<double> in{0.25, 0.0};
  CHECK(m.apply(in)[m.range.axis("x1")] == doctest::Approx(0.0625));
}

TEST_CASE("secondary expanding direction grows as w^(-e2/e1)") {
  const auto m = local_map(one_choice_node(1.0, 2.0, 1.0), "b", "a", "b");
  const std::vector<double> in{0.01, 1e-5};
  const auto out = m.apply(in);
  CHECK(out[m.range.axis("x3")] == doctest::Approx(1e-4).epsilon(1e-12));
}

TEST_CASE("bowtie local map matches the independent evaluation") {
  const auto net = fixture("bowtie");
  const auto m = local_map(net, "xi1", "xi2", "xi3");
  REQUIRE(m.domain.axes == std::vector<std::string>{"x3", "x4", "x5"});
  const std::vector<double> in{0.02, 0.004, 0.5};
  const auto out = m.apply(in);
  for (const auto& [label, value] : kBowtieLocalMap) {
    CAPTURE(label);
    CHECK(out[m.range.axis(label)] == doctest::Approx(value).epsilon(1e-12));
  }
}

TEST_CASE("local map errors on missing connections") {
  const auto net = fixture("bowtie");
  CHECK_THROWS_AS((void)local_map(net, "xi3", "xi2", "xi4"), NetworkError);
  CHECK_THROWS_AS((void)local_map(net, "xi1", "xi2", "xi1"), NetworkError);
}

TEST_CASE("log form agrees with pointwise evaluation") {
  const auto net = fixture("r6_simplex");
  const auto m = local_map(net, "xi1", "xi2", "xi5");
  const auto lf = m.log_form();
  const std::vector<double> x{0.03, 0.2, 0.001, 0.4};
  const auto y = m.apply(x);
  const auto e = eta_of(x);
  const Eigen::VectorXd eta = Eigen::Map<const Eigen::VectorXd>(e.data(), static_cast<Eigen::Index>(e.size()));
  const Eigen::VectorXd out = lf.apply(eta);
  for (std::size_t k = 0; k < y.size(); ++k) CHECK(out(static_cast<Eigen::Index>(k)) == doctest::Approx(-std::log(y[k])));
}

TEST_CASE("C at the bowtie distribution node") {
  const auto net = fixture("bowtie");
  const auto c3 = domain_C(net, "xi1", "xi2", "xi3");
  const auto c4 = domain_C(net, "xi1", "xi2", "xi4");
  REQUIRE(c3.regions.size() == 1);
  REQUIRE(c4.regions.size() == 1);
  // the two regions share a boundary and are complementary
  const auto& a = c3.regions.front();
  const auto& b = c4.regions.front();
  CHECK(a.i == b.j);
  CHECK(a.j == b.i);
  CHECK(a.alpha * b.alpha == doctest::Approx(1.0));
  CHECK_FALSE(intersects_near_origin({a, b}, 3).intersects_near_origin);
  CHECK(intersects_near_origin({a.complement(), b.complement()}, 3).intersects_near_origin == false);
}

TEST_CASE("C is the whole section when n_e = 1") {
  const auto net = fixture("bowtie");
  CHECK(domain_C(net, "xi3", "xi1", "xi2").empty_constraints());
}

TEST_CASE("C at an RSP node has one region with exponent e2/e1") {
  const auto net = fixture("rsp");
  const auto c = domain_C(net, "SR", "RR", "PR");
  REQUIRE(c.regions.size() == 1);
  CHECK(c.regions.front().alpha == doctest::Approx(kRspDomainExponent).epsilon(1e-12));
  CHECK(c.section.axes[c.regions.front().i] == "yP");
  CHECK(c.section.axes[c.regions.front().j] == "xP");
}

TEST_CASE("F at the bowtie distribution node") {
  const auto net = fixture("bowtie");
  const auto f1 = image_F(net, "xi1", "xi2", "xi3");
  const auto f5 = image_F(net, "xi5", "xi2", "xi3");
  REQUIRE(f1.regions.size() == 1);
  REQUIRE(f5.regions.size() == 1);
  CHECK(f1.section == f5.section);
  CHECK_FALSE(intersects_near_origin({f1.regions[0], f5.regions[0]}, 3).intersects_near_origin);
  CHECK_FALSE(intersects_near_origin({f1.regions[0].complement(), f5.regions[0].complement()}, 3)
                  .intersects_near_origin);
}

TEST_CASE("F is the whole section when n_c = 1 and n_t = 0") {
  const auto net = fixture("kirk_silber");
  CHECK(image_F(net, "xi1", "xi2", "xi3").empty_constraints());
}

TEST_CASE("House: the images do not cover the outgoing section") {
  const auto d = departure_set(fixture("house"), "xi1", "xi2");
  CHECK(d.images.size() == 2);
  CHECK(d.nonempty);
  CHECK_FALSE(d.witness_regions.empty());
}

TEST_CASE("Bowtie: the images cover the outgoing section") {
  CHECK_FALSE(departure_set(fixture("bowtie"), "xi2", "xi3").nonempty);
}

TEST_CASE("global maps") {
  auto doc = nlohmann::json::parse(serialize(fixture("bowtie")));
  SUBCASE("identity") {
    const auto g = global_map(load_network(doc.dump()), "xi1", "xi2");
    CHECK(g.matrix.isIdentity());
    CHECK(g.offset.isZero());
  }
  SUBCASE("rescale and swap") {
    for (auto& c : doc["connections"])
      if (c["from"] == "xi1" && c["to"] == "xi2") {
        c["permutation"] = nlohmann::json::array({nlohmann::json::array({"x3", "x3"}), nlohmann::json::array({"x4", "x5"}),
                                                  nlohmann::json::array({"x5", "x4"})});
        c["rescale"] = {2.0, 1.0, 1.0};
      }
    const auto g = global_map(load_network(doc.dump()), "xi1", "xi2");
    CHECK(g.offset(0) == doctest::Approx(-std::log(2.0)));
    CHECK(g.offset(1) == 0.0);
    CHECK(g.matrix(1, 2) == 1.0);
    CHECK(g.matrix(2, 1) == 1.0);
    CHECK(g.matrix(0, 0) == 1.0);
  }
  SUBCASE("missing permutation entry") {
    for (auto& c : doc["connections"])
      if (c["from"] == "xi1" && c["to"] == "xi2") c["permutation"] = nlohmann::json::array({nlohmann::json::array({"x3", "x3"}), nlohmann::json::array({"x4", "x4"})});
    CHECK_THROWS_AS((void)global_map(load_network(doc.dump()), "xi1", "xi2"), NetworkError);
  }
}

TEST_CASE("log-affine maps compose and invert") {
  const auto net = fixture("bowtie");
  const auto m = local_map(net, "xi1", "xi2", "xi3").log_form();
  const auto g = global_map(net, "xi2", "xi3");
  const auto both = g.after(m);
  const auto id = both.inverse().after(both);
  CHECK(id.matrix.isIdentity(1e-12));
  CHECK(id.offset.isZero(1e-12));
}

TEST_CASE("compose_path") {
  SUBCASE("single interior node with n_e = 1 pulls back nothing") {
    const auto t = compose_path(fixture("bowtie"), {"xi3", "xi1", "xi2"});
    CHECK(t.pulled_back.empty_constraints());
  }
  SUBCASE("bowtie return to the distribution node") {
    const auto t = compose_path(fixture("bowtie"), {"xi1", "xi2", "xi3", "xi1", "xi2", "xi4"});
    CHECK(t.pulled_back.regions.size() + t.pulled_back.general_rows.size() >= 2);
    CHECK(t.start.node == "xi2");
  }
  SUBCASE("broken path") { CHECK_THROWS_AS((void)compose_path(fixture("bowtie"), {"xi1", "xi3"}), NetworkError); }
}

TEST_CASE("followable") {
  SUBCASE("every connection") {
    for (const char* stem : testing::kFixtureStems) {
      const auto net = fixture(stem);
      for (const auto& c : net.connections) CHECK(followable(net, {c.from, c.to}).intersects_near_origin);
    }
  }
  SUBCASE("R^6 path through two distribution nodes") {
    CHECK(followable(fixture("r6_simplex"), {"xi1", "xi2", "xi5", "xi6"}).intersects_near_origin);
  }
  SUBCASE("RSP: a wrong exit after one return is not followable") {
    const auto net = fixture("rsp");
    CHECK(followable(net, {"RR", "PR", "PS"}).intersects_near_origin);
    CHECK_FALSE(followable(net, {"RR", "PR", "PS", "SS"}).intersects_near_origin);
  }
}
