// Randomised checks of the invariants each module promises.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "heteroswitch/cusp.hpp"
#include "heteroswitch/map_algebra.hpp"
#include "heteroswitch/network.hpp"
#include "heteroswitch/switching.hpp"
#include "support.hpp"

using namespace heteroswitch;
using testing::fixture;

namespace {

using Path = std::vector<std::string>;

std::mt19937_64& rng() {
  static std::mt19937_64 g(0x5eed);
  return g;
}

double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }
int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

// A Hamiltonian cycle plus random chords, so every node lies on a cycle.
std::vector<std::pair<int, int>> random_edges(int n) {
  std::set<std::pair<int, int>> e;
  for (int k = 0; k < n; ++k) e.insert({k, (k + 1) % n});
  const int extra = pick(0, n);
  for (int k = 0; k < extra; ++k) {
    const int a = pick(0, n - 1), b = pick(0, n - 1);
    if (a != b) e.insert({a, b});
  }
  return {e.begin(), e.end()};
}

std::vector<std::string> ids(int n) {
  std::vector<std::string> out;
  for (int k = 0; k < n; ++k) out.push_back("v" + std::to_string(k));
  return out;
}

PowerRegion random_region(std::size_t n) {
  PowerRegion r;
  r.i = static_cast<std::size_t>(pick(0, static_cast<int>(n) - 1));
  do r.j = static_cast<std::size_t>(pick(0, static_cast<int>(n) - 1));
  while (r.j == r.i);
  r.a = uniform(0.5, 2.0);
  r.alpha = uniform(0.3, 3.0);
  r.orientation = pick(0, 1) ? Orientation::thin : Orientation::thick;
  return r;
}

std::vector<Path> paths_from(const HeteroclinicNetwork& net, const std::string& start, int depth) {
  std::vector<Path> out{{start}};
  for (int d = 0; d < depth; ++d) {
    std::vector<Path> next;
    for (const auto& p : out)
      for (auto s : net.successors(net.node_index(p.back()))) {
        auto q = p;
        q.push_back(net.nodes[s].id);
        next.push_back(q);
      }
    out = std::move(next);
  }
  return out;
}

// x-space chain of local and global maps from H_{p1}^{in,p0} to the last incoming section.
std::vector<double> chain(const HeteroclinicNetwork& net, const Path& p, std::vector<double> x) {
  for (std::size_t k = 1; k + 1 < p.size(); ++k) {
    const auto m = local_map(net, p[k - 1], p[k], p[k + 1]);
    const auto y = m.apply(x);
    const auto& c = net.connection(p[k], p[k + 1]);
    const auto out = outgoing_section(net, p[k], p[k + 1]);
    const auto in = incoming_section(net, p[k], p[k + 1]);
    x.assign(in.axes.size(), 0.0);
    for (const auto& ap : net.resolved_permutation(c)) x[in.axis(ap.in_label)] = ap.rescale * y[out.axis(ap.out_label)];
  }
  return x;
}

HeteroclinicNetwork random_rescale(const HeteroclinicNetwork& net) {
  auto doc = nlohmann::json::parse(serialize(net));
  for (auto& c : doc["connections"]) {
    const auto& conn = net.connection(c["from"], c["to"]);
    nlohmann::json perm = nlohmann::json::array(), scale = nlohmann::json::array();
    for (const auto& ap : net.resolved_permutation(conn)) {
      perm.push_back({ap.out_label, ap.in_label});
      scale.push_back(std::exp(uniform(-3.0, 3.0)));
    }
    c["permutation"] = perm;
    c["rescale"] = scale;
  }
  return load_network(doc.dump());
}

}  // namespace

TEST_CASE("network: N is uniform and classes partition the non-radial eigenvalues") {
  for (const char* stem : testing::kFixtureStems) {
    const auto net = fixture(stem);
    for (const auto& n : net.nodes) {
      CHECK(n.section_dimension() == net.section_dimension());
      const auto g = classify_global(net, n.id);
      std::vector<std::string> all;
      for (const auto* part : {&g.contracting, &g.expanding, &g.transverse}) all.insert(all.end(), part->begin(), part->end());
      auto labels = n.non_radial_labels();
      std::sort(all.begin(), all.end());
      std::sort(labels.begin(), labels.end());
      CHECK(all == labels);  // equal as sorted lists: no label twice, none missing
    }
  }
}

TEST_CASE("network: distribution nodes are exactly the nodes of out-degree two or more") {
  for (int trial = 0; trial < 200; ++trial) {
    const int n = pick(4, 7);
    const auto edges = random_edges(n);
    const auto net = testing::axis_network(ids(n), edges);
    std::vector<std::string> want;
    for (int v = 0; v < n; ++v)
      if (std::count_if(edges.begin(), edges.end(), [&](auto e) { return e.first == v; }) >= 2)
        want.push_back("v" + std::to_string(v));
    CHECK(distribution_nodes(net) == want);
  }
}

TEST_CASE("network: load, serialise, load is the identity") {
  for (const char* stem : testing::kFixtureStems) {
    const auto net = fixture(stem);
    CHECK(load_network(serialize(net)) == net);
  }
  for (int trial = 0; trial < 50; ++trial) {
    const int n = pick(4, 7);
    const auto net = random_rescale(testing::axis_network(ids(n), random_edges(n)));
    CHECK(load_network(serialize(net)) == net);
  }
}

TEST_CASE("cusps: the pairwise rule agrees with the engine on every pair") {
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = static_cast<std::size_t>(pick(2, 4));
    auto a = random_region(n), b = random_region(n);
    const int mode = pick(0, 2);
    if (mode == 0) b.i = a.i, b.j = a.j;
    if (mode == 1) b.i = a.j, b.j = a.i;
    if (std::abs(a.alpha - b.alpha) < 0.05 || std::abs(a.alpha * b.alpha - 1.0) < 0.05) continue;
    const bool engine = intersects_near_origin({a, b}, n).intersects_near_origin;
    CHECK(pairwise_rule(a, b).intersects(a.orientation, b.orientation) == engine);
  }
}

TEST_CASE("cusps: adding a region never turns false into true") {
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = static_cast<std::size_t>(pick(2, 5));
    std::vector<PowerRegion> rs;
    bool prev = true;
    for (int k = 0; k < 6; ++k) {
      rs.push_back(random_region(n));
      const bool now = intersects_near_origin(rs, n).intersects_near_origin;
      CHECK((prev || !now));
      prev = now;
    }
  }
}

TEST_CASE("cusps: witnesses hold and certificates replay") {
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = static_cast<std::size_t>(pick(2, 6));
    std::vector<PowerRegion> rs;
    for (int k = pick(1, 7); k > 0; --k) rs.push_back(random_region(n));
    const auto sys = to_log_system(rs, n);
    const auto v = intersects_near_origin(rs, n);
    REQUIRE(v.witness.has_value() != v.certificate.has_value());
    if (v.witness) {
      CHECK(verify_witness(sys, *v.witness));
      // far along the ray the x-space point lies in every region
      double t = 1.0;
      while (!std::all_of(sys.rows.begin(), sys.rows.end(), [&](const LinearInequality& r) { return r.satisfied_by(v.witness->at(t)); }))
        t *= 2.0;
      const auto eta = v.witness->at(t);
      std::vector<long double> x;
      for (double e : eta) x.push_back(std::exp(-static_cast<long double>(e)));
      for (const auto& r : rs) CHECK(r.contains(x));
    } else {
      CHECK(replay_certificate(sys, *v.certificate));
    }
  }
}

TEST_CASE("cusps: cyclic chains of thin cusps never meet") {
  for (std::size_t n = 2; n <= 6; ++n)
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<std::size_t> order(n);
      for (std::size_t k = 0; k < n; ++k) order[k] = k;
      std::shuffle(order.begin(), order.end(), rng());
      std::vector<PowerRegion> rs;
      for (std::size_t k = 0; k < n; ++k)
        rs.push_back({order[(k + 1) % n], order[k], uniform(0.5, 2.0), uniform(1.05, 3.0), Orientation::thin});
      const auto v = intersects_near_origin(rs, n);
      CHECK_FALSE(v.intersects_near_origin);
      REQUIRE(v.certificate);
      CHECK(replay_certificate(to_log_system(rs, n), *v.certificate));
    }
}

TEST_CASE("maps: composed log-affine maps equal chained evaluation") {
  for (const char* stem : {"bowtie", "rsp", "r6_simplex", "house"}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto net = random_rescale(fixture(stem));
      const auto& first = net.connections[static_cast<std::size_t>(pick(0, static_cast<int>(net.connections.size()) - 1))];
      Path p{first.from, first.to};
      for (int k = pick(1, 4); k > 0; --k) {
        const auto succ = net.successors(net.node_index(p.back()));
        p.push_back(net.nodes[succ[static_cast<std::size_t>(pick(0, static_cast<int>(succ.size()) - 1))]].id);
      }
      const auto t = compose_path(net, p);
      std::vector<double> x;
      Eigen::VectorXd eta(static_cast<Eigen::Index>(t.start.axes.size()));
      for (std::size_t k = 0; k < t.start.axes.size(); ++k) {
        x.push_back(std::pow(10.0, uniform(-3.0, -0.5)));
        eta(static_cast<Eigen::Index>(k)) = -std::log(x.back());
      }
      const auto y = chain(net, p, x);
      const Eigen::VectorXd z = t.map.apply(eta);
      for (std::size_t k = 0; k < y.size(); ++k) {
        const double want = -std::log(y[k]);
        CHECK(std::abs(z(static_cast<Eigen::Index>(k)) - want) <= 1e-9 * std::max(1.0, std::abs(want)));
      }
    }
  }
}

TEST_CASE("maps: without transverse directions the sets C partition the incoming section") {
  for (const auto& [stem, node] : std::vector<std::pair<std::string, std::string>>{{"bowtie", "xi2"}, {"kirk_silber", "xi2"}}) {
    const auto net = fixture(stem);
    REQUIRE(net.node(node).n_t == 0);
    const auto j = net.node_index(node);
    for (auto i : net.predecessors(j)) {
      std::vector<RegionSystem> cs;
      for (auto k : net.successors(j)) cs.push_back(domain_C(net, net.nodes[i].id, node, net.nodes[k].id));
      const std::size_t n = cs.front().section.axes.size();
      for (int s = 0; s < 2000; ++s) {
        std::vector<long double> x;
        for (std::size_t k = 0; k < n; ++k) x.push_back(std::pow(10.0L, static_cast<long double>(uniform(-8.0, -1.0))));
        int inside = 0;
        for (const auto& c : cs)
          inside += std::all_of(c.regions.begin(), c.regions.end(), [&](const PowerRegion& r) { return r.contains(x); });
        CHECK(inside == 1);
      }
    }
  }
}

TEST_CASE("maps: with transverse directions the images F leave points uncovered") {
  const auto net = fixture("house");
  const auto j = net.node_index("xi1");
  std::vector<RegionSystem> fs;
  for (auto i : net.predecessors(j)) fs.push_back(image_F(net, net.nodes[i].id, "xi1", "xi2"));
  const std::size_t n = fs.front().section.axes.size();
  int outside = 0;
  for (int s = 0; s < 2000; ++s) {
    std::vector<long double> x;
    for (std::size_t k = 0; k < n; ++k) x.push_back(std::pow(10.0L, static_cast<long double>(uniform(-8.0, -1.0))));
    bool covered = false;
    for (const auto& f : fs)
      covered = covered || std::all_of(f.regions.begin(), f.regions.end(), [&](const PowerRegion& r) { return r.contains(x); });
    outside += !covered;
  }
  CHECK(outside > 0);
}

TEST_CASE("maps: followable paths have followable prefixes") {
  for (const char* stem : testing::kFixtureStems) {
    const auto net = fixture(stem);
    FollowableCache cache(net);
    for (const auto& n : net.nodes)
      for (const auto& p : paths_from(net, n.id, 4))
        if (cache(p))
          for (std::size_t len = 2; len < p.size(); ++len) CHECK(cache(Path(p.begin(), p.begin() + static_cast<long>(len))));
  }
}

TEST_CASE("switching: a firing criterion is matched by an infeasible path") {
  for (const char* stem : testing::kFixtureStems) {
    const auto net = fixture(stem);
    FollowableCache cache(net);
    // some path of at most five connections with history before `core` is infeasible
    auto some_infeasible_through = [&](const Path& core) {
      for (const auto& n : net.nodes)
        for (const auto& p : paths_from(net, n.id, 5))
          for (std::size_t at = 1; at + core.size() <= p.size(); ++at)
            if (std::equal(core.begin(), core.end(), p.begin() + static_cast<long>(at))) {
              for (std::size_t len = at + core.size() + 1; len <= p.size(); ++len)
                if (!cache(Path(p.begin(), p.begin() + static_cast<long>(len)))) return true;
            }
      return false;
    };
    for (const auto& n : net.nodes)
      if (node_criterion(net, n.id).verdict == Verdict::no_switching) {
        CAPTURE(n.id);
        CHECK(some_infeasible_through({n.id}));
      }
    for (const auto& c : net.connections)
      if (connection_criterion(net, c.from, c.to).verdict == Verdict::no_switching) {
        CAPTURE(c.from + "->" + c.to);
        CHECK(some_infeasible_through({c.from, c.to}));
      }
  }
}

TEST_CASE("switching: beyond the depth bound some paths are not followable") {
  for (const char* stem : testing::kFixtureStems) {
    const auto net = fixture(stem);
    for (const auto& d : distribution_nodes(net)) {
      const auto b = depth_bound(net, d);
      const std::string where = std::string(stem) + " " + d;
      CAPTURE(where);
      // two connections past the longest sequence realising the bound
      std::size_t depth = 1;
      for (const auto& seq : b.sequences) depth = std::max(depth, seq.path.size() + 1);
      ++depth;
      const auto pv = enumerate_followable(net, d, static_cast<int>(depth));
      const auto ok = std::count_if(pv.begin(), pv.end(), [](const PathVerdict& p) { return p.verdict.intersects_near_origin; });
      CHECK(b.k >= 1);
      CHECK(static_cast<std::size_t>(ok) < pv.size());
    }
  }
}

TEST_CASE("switching: every fixture has a finite path that cannot be followed") {
  for (const char* stem : testing::kFixtureStems) {
    const auto net = fixture(stem);
    const auto r = network_report(net);
    REQUIRE(r.finite_witness);
    CHECK_FALSE(followable(net, *r.finite_witness).intersects_near_origin);
  }
}

TEST_CASE("switching: verdicts do not depend on global-map rescaling") {
  for (const char* stem : {"bowtie", "kirk_silber", "house"}) {
    const auto net = fixture(stem);
    for (int trial = 0; trial < 5; ++trial) {
      const auto scaled = random_rescale(net);
      for (const auto& n : net.nodes)
        for (const auto& p : paths_from(net, n.id, 4))
          CHECK(followable(net, p).intersects_near_origin == followable(scaled, p).intersects_near_origin);
    }
  }
}
