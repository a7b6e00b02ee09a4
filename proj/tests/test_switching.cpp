#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "heteroswitch/switching.hpp"
#include "support.hpp"

using namespace heteroswitch;
using testing::fixture;

namespace {

using Path = std::vector<std::string>;

// a->b->c is shared by the cycles a->b->c->d->a and a->b->c->e->a.
HeteroclinicNetwork shared_chain() {
  return testing::axis_network({"a", "b", "c", "d", "e"}, {{0, 1}, {1, 2}, {2, 3}, {2, 4}, {3, 0}, {4, 0}});
}

std::set<Path> feasible(const std::vector<PathVerdict>& pv) {
  std::set<Path> out;
  for (const auto& p : pv)
    if (p.verdict.intersects_near_origin) out.insert(p.path);
  return out;
}

}  // namespace

TEST_CASE("node criterion") {
  CHECK(node_criterion(fixture("kirk_silber"), "xi1").verdict == Verdict::no_switching);
  CHECK(node_criterion(fixture("ac_network"), "xi3").verdict == Verdict::no_switching);
  const auto b = node_criterion(fixture("bowtie"), "xi2");
  CHECK(b.verdict == Verdict::inconclusive);
  CHECK(b.rationale.find("n_c=2") != std::string::npos);
}

TEST_CASE("connection criterion") {
  const auto rsp = fixture("rsp");
  for (const auto& c : rsp.connections)
    CHECK(connection_criterion(rsp, c.from, c.to).verdict == Verdict::no_switching);
  CHECK(connection_criterion(fixture("kirk_silber"), "xi1", "xi2").verdict == Verdict::no_switching);
  // 1 + 2 < N = 4
  CHECK(connection_criterion(fixture("r6_simplex"), "xi1", "xi2").verdict == Verdict::inconclusive);
  // on a single cycle the criterion does not apply
  CHECK(connection_criterion(fixture("bowtie"), "xi1", "xi2").verdict == Verdict::inconclusive);
}

TEST_CASE("sequence criterion") {
  const auto net = shared_chain();
  REQUIRE(validate_quasi_simple(net).ok());
  CHECK(cycles_through(net, {"a", "b", "c"}) == 2);
  CHECK(sequence_criterion(net, {"a", "b", "c"}).verdict == Verdict::no_switching);
  const auto ks = fixture("kirk_silber");
  CHECK(sequence_criterion(ks, {"xi1", "xi2"}).verdict == connection_criterion(ks, "xi1", "xi2").verdict);
  CHECK(sequence_criterion(fixture("r6_simplex"), {"xi1", "xi2"}).verdict == Verdict::inconclusive);
}

TEST_CASE("depth bound") {
  const auto rsp = fixture("rsp");
  for (const auto& n : rsp.nodes) CHECK(depth_bound(rsp, n.id).k == 1);
  const auto r6 = depth_bound(fixture("r6_simplex"), "xi1");
  CHECK(r6.k == 2);
  CHECK(r6.sum_at_k == 6);
  CHECK(r6.N == 4);
  CHECK(depth_bound(fixture("bowtie"), "xi2").k == 1);
  CHECK_THROWS_AS((void)depth_bound(fixture("bowtie"), "xi1"), NetworkError);
}

TEST_CASE("depth bound sums are recomputable from the counts") {
  const auto net = fixture("r6_simplex");
  const auto b = depth_bound(net, "xi1");
  for (const auto& s : b.sequences) {
    int sum = 0;
    for (std::size_t i = 1; i < s.distribution_nodes.size(); ++i) {
      sum += net.node(s.distribution_nodes[i]).n_c + net.node(s.distribution_nodes[i - 1]).n_e;
      REQUIRE(i - 1 < s.partial_sums.size());
      CHECK(s.partial_sums[i - 1] == sum);
    }
  }
}

TEST_CASE("R^6 paths from xi1 through two distribution nodes") {
  const auto got = feasible(enumerate_followable(fixture("r6_simplex"), "xi1", 3));
  const std::set<Path> want{{"xi1", "xi2", "xi5", "xi6"}, {"xi1", "xi2", "xi3", "xi1"}, {"xi1", "xi4", "xi5", "xi6"}};
  CHECK(got == want);
}

TEST_CASE("depth 1: every outgoing connection is followable") {
  for (const char* stem : testing::kFixtureStems) {
    const auto net = fixture(stem);
    for (const auto& n : net.nodes) {
      const auto pv = enumerate_followable(net, n.id, 1);
      CHECK(pv.size() == net.successors(net.node_index(n.id)).size());
      for (const auto& p : pv) CHECK(p.verdict.intersects_near_origin);
    }
  }
}

TEST_CASE("enumeration is lexicographic and capped") {
  const auto net = fixture("rsp");
  const auto pv = enumerate_followable(net, "RR", 4);
  for (std::size_t k = 1; k < pv.size(); ++k) {
    std::vector<std::size_t> a, b;
    for (const auto& s : pv[k - 1].path) a.push_back(net.node_index(s));
    for (const auto& s : pv[k].path) b.push_back(net.node_index(s));
    CHECK(a < b);
  }
  CHECK_THROWS_AS((void)enumerate_followable(net, "RR", 6, 10), NetworkError);
}

TEST_CASE("Kirk-Silber: not every incoming/outgoing combination is followable") {
  const auto net = fixture("kirk_silber");
  int ok = 0;
  for (const char* in : {"xi3", "xi4"})
    for (const char* out : {"xi3", "xi4"}) ok += followable(net, {in, "xi1", "xi2", out}).intersects_near_origin;
  CHECK(ok < 4);
}

TEST_CASE("bowtie: one return to xi2 predetermines the exit") {
  const auto net = fixture("bowtie");
  for (const char* from : {"xi1", "xi5"}) {
    const auto r = return_determinism(net, from, "xi2");
    CHECK(r.predetermined);
    CHECK_FALSE(r.returns.empty());
    for (const auto& [path, exits] : r.returns) CHECK(exits.size() == 1);
  }
}

TEST_CASE("followable cache agrees with direct evaluation") {
  const auto net = fixture("house");
  FollowableCache cache(net);
  for (const auto& pv : enumerate_followable(net, "xi2", 4))
    CHECK(cache(pv.path) == pv.verdict.intersects_near_origin);
}

TEST_CASE("network reports") {
  const auto rsp = network_report(fixture("rsp"));
  auto has = [](const NetworkReport& r, const std::string& s) {
    return std::any_of(r.findings.begin(), r.findings.end(),
                       [&](const std::string& f) { return f.find(s) != std::string::npos; });
  };
  CHECK(has(rsp, "no switching along any connection"));
  CHECK(has(rsp, "k=1 everywhere"));
  CHECK(rsp.headline.find("no infinite switching") != std::string::npos);
  CHECK(has(network_report(fixture("bowtie")), "predetermined outgoing cross section after one return"));
  const auto house = network_report(fixture("house"));
  CHECK(std::any_of(house.departures.begin(), house.departures.end(), [](const DepartureSet& d) { return d.nonempty; }));
}
