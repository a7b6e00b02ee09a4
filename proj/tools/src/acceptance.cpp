#include "heteroswitch/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "heteroswitch/cusp.hpp"
#include "heteroswitch/fields.hpp"
#include "heteroswitch/itinerary.hpp"
#include "heteroswitch/ode.hpp"
#include "heteroswitch/report.hpp"
#include "heteroswitch/switching.hpp"

namespace heteroswitch::acceptance {

namespace {

// Pinned tolerances and budgets.
constexpr double kOracleBudgetSeconds = 60.0;
constexpr double kSimulationBudgetSeconds = 600.0;
constexpr double kExponentTolerance = 0.05;
constexpr double kSeparation = 0.05;
constexpr double kEigenTolerance = 1e-8;

const std::vector<std::string> kNetworks = {"kirk_silber", "bowtie",     "house", "ac_network",
                                            "r6_simplex",  "rsp",        "rspls"};

HeteroclinicNetwork fixture(const Options& o, const std::string& stem) {
  return load_network_file(o.fixtures / (stem + ".json"));
}

std::string path_list(const std::vector<std::vector<std::string>>& paths) {
  std::string s;
  for (const auto& p : paths) s += (s.empty() ? "" : ", ") + join_path(p);
  return s;
}

// Two power regions with a separated relation; indices drawn in R^N.
std::vector<PowerRegion> random_pair(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> coef(0.95, 1.05), expo(0.25, 3.0), unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> axis(0, n - 1);
  auto orient = [&] { return unit(rng) < 0.5 ? Orientation::thin : Orientation::thick; };
  for (;;) {
    PowerRegion r1, r2;
    r1.i = axis(rng);
    do r1.j = axis(rng); while (r1.j == r1.i);
    const double kind = unit(rng);
    if (kind < 0.35) {
      r2.i = r1.i;
      r2.j = r1.j;
    } else if (kind < 0.7) {
      r2.i = r1.j;
      r2.j = r1.i;
    } else {
      r2.i = axis(rng);
      do r2.j = axis(rng); while (r2.j == r2.i);
    }
    r1.a = coef(rng);
    r2.a = coef(rng);
    r1.alpha = expo(rng);
    r2.alpha = expo(rng);
    r1.orientation = orient();
    r2.orientation = orient();
    if (r1.i == r2.i && r1.j == r2.j && std::abs(r1.alpha - r2.alpha) < kSeparation) continue;
    if (r1.i == r2.j && r1.j == r2.i && std::abs(r1.alpha * r2.alpha - 1.0) < kSeparation) continue;
    return {r1, r2};
  }
}

Result two_region_oracle(const Options& o) {
  Result r{1, "two-region decision vs sampling oracle", false, {}, 0.0};
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<std::size_t> dim(2, 6);
  int agree = 0, total = 0, rule_disagree = 0;
  std::string first_bad;
  const auto start = std::chrono::steady_clock::now();
  for (int c = 0; c < o.pair_count; ++c) {
    const std::size_t n = dim(rng);
    const auto regions = random_pair(rng, n);
    const bool decided = intersects_near_origin(regions, n).intersects_near_origin;
    if (pairwise_rule(regions[0], regions[1]).intersects(regions[0].orientation, regions[1].orientation) != decided)
      ++rule_disagree;
    for (double delta : {1e-2, 1e-3}) {
      ++total;
      const auto oracle = sample_oracle(regions, n, delta, o.oracle_samples, o.seed + static_cast<std::uint64_t>(c));
      if (oracle.empirically_nonempty() == decided) ++agree;
      else if (first_bad.empty())
        first_bad = "; first disagreement: " + describe(regions[0]) + " & " + describe(regions[1]) +
                    " delta=" + std::to_string(delta);
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = agree == total && rule_disagree == 0 && r.seconds < kOracleBudgetSeconds;
  r.detail = std::to_string(agree) + "/" + std::to_string(total) + " oracle agreements, " +
             std::to_string(rule_disagree) + " closed-form disagreements, budget " +
             std::to_string(static_cast<int>(kOracleBudgetSeconds)) + " s" + first_bad;
  return r;
}

Result figure_cases(const Options& o) {
  Result r{2, "figure configurations", true, {}, 0.0};
  const std::vector<std::string> files = {"fig3", "fig3_thin", "fig4", "fig5", "fig6",
                                          "fig7a", "fig7a_control", "fig7b", "fig7b_control"};
  int ok = 0;
  std::string bad;
  for (const auto& f : files) {
    const auto doc = load_cusp_file(o.fixtures / "cusps" / (f + ".cusps"));
    const bool got = intersects_near_origin(doc.regions, doc.dimension).intersects_near_origin;
    if (doc.expected && *doc.expected == got) ++ok;
    else {
      r.passed = false;
      bad += " " + f;
    }
  }
  r.detail = std::to_string(ok) + "/" + std::to_string(files.size()) + " verdicts reproduced" +
             (bad.empty() ? "" : "; wrong:" + bad);
  return r;
}

Result cyclic_families(const Options& o) {
  Result r{3, "cyclic thin families never all intersect", true, {}, 0.0};
  std::mt19937_64 rng(o.seed + 3);
  std::uniform_real_distribution<double> coef(0.5, 2.0), expo(1.05, 3.0);
  int ok = 0, total = 0;
  for (std::size_t n = 3; n <= 6; ++n) {
    for (int f = 0; f < o.families_per_size; ++f) {
      std::vector<std::size_t> sigma(n);
      std::iota(sigma.begin(), sigma.end(), 0);
      std::shuffle(sigma.begin(), sigma.end(), rng);
      std::vector<PowerRegion> family;
      for (std::size_t k = 0; k < n; ++k)
        family.push_back({sigma[k], sigma[(k + 1) % n], coef(rng), expo(rng), Orientation::thin});
      ++total;
      const auto v = intersects_near_origin(family, n);
      if (!v.intersects_near_origin && v.certificate &&
          replay_certificate(to_log_system(family, n), *v.certificate))
        ++ok;
    }
  }
  r.passed = ok == total;
  r.detail = std::to_string(ok) + "/" + std::to_string(total) + " empty with a replayed certificate";
  return r;
}

Result rsp_verdict(const Options& o) {
  Result r{4, "RSP: no switching along connections, k=1", false, {}, 0.0};
  const auto net = fixture(o, "rsp");
  const auto report = network_report(net);
  const bool all_conn =
      report.connection_verdicts.size() == net.connections.size() &&
      std::all_of(report.connection_verdicts.begin(), report.connection_verdicts.end(),
                  [](const SwitchingVerdict& v) { return v.verdict == Verdict::no_switching; });
  const bool all_k1 = report.depth_bounds.size() == net.nodes.size() &&
                      std::all_of(report.depth_bounds.begin(), report.depth_bounds.end(),
                                  [](const DepthBound& b) { return b.k == 1; });
  const bool finding = std::find(report.findings.begin(), report.findings.end(),
                                 "no switching along any connection") != report.findings.end();
  r.passed = all_conn && all_k1 && finding;
  r.detail = std::to_string(report.connection_verdicts.size()) + " connection verdicts, " +
             std::to_string(report.depth_bounds.size()) + "/" + std::to_string(net.nodes.size()) +
             " distribution nodes" + (all_k1 ? " all with k=1" : " not all k=1") +
             (finding ? "" : "; finding missing");
  return r;
}

Result bowtie_verdict(const Options& o) {
  Result r{5, "bowtie: predetermined exit after one return to xi2", false, {}, 0.0};
  const auto net = fixture(o, "bowtie");
  const auto node = net.node_index("xi2");
  int returns = 0, exact = 0;
  bool predetermined = true;
  for (auto p : net.predecessors(node)) {
    const auto rd = return_determinism(net, net.nodes[p].id, "xi2");
    predetermined = predetermined && rd.predetermined;
    for (const auto& [path, exits] : rd.returns) {
      ++returns;
      if (exits.size() == 1) ++exact;
    }
  }
  r.passed = predetermined && returns > 0 && exact == returns;
  r.detail = std::to_string(returns) + " feasible returns, " + std::to_string(exact) +
             " with exactly one feasible exit";
  return r;
}

Result r6_verdict(const Options& o) {
  Result r{6, "R^6: listed sequences and k=2", false, {}, 0.0};
  const auto net = fixture(o, "r6_simplex");
  const std::set<std::vector<std::string>> listed = {{"xi1", "xi2", "xi5", "xi6"},
                                                     {"xi1", "xi2", "xi3", "xi1"},
                                                     {"xi1", "xi4", "xi5", "xi6"}};
  std::set<std::vector<std::string>> feasible;
  for (const auto& p : enumerate_followable(net, "xi1", 3))
    if (p.verdict.intersects_near_origin) feasible.insert(p.path);
  const auto b = depth_bound(net, "xi1");
  r.passed = feasible == listed && b.k == 2 && b.sum_at_k == 6 && b.N == 4;
  r.detail = "feasible: " + path_list({feasible.begin(), feasible.end()}) + "; k=" + std::to_string(b.k) +
             " sum=" + std::to_string(b.sum_at_k) + " N=" + std::to_string(b.N);
  return r;
}

Result kirk_silber_verdict(const Options& o) {
  Result r{7, "Kirk-Silber: node and connection criteria", false, {}, 0.0};
  const auto net = fixture(o, "kirk_silber");
  const bool node = node_criterion(net, "xi1").verdict == Verdict::no_switching &&
                    node_criterion(net, "xi2").verdict == Verdict::no_switching;
  const bool conn = connection_criterion(net, "xi1", "xi2").verdict == Verdict::no_switching;
  int feasible = 0, combos = 0;
  for (auto in : net.predecessors(net.node_index("xi1")))
    for (auto out : net.successors(net.node_index("xi2"))) {
      ++combos;
      if (followable(net, {net.nodes[in].id, "xi1", "xi2", net.nodes[out].id}).intersects_near_origin) ++feasible;
    }
  r.passed = node && conn && combos == 4 && feasible < combos;
  r.detail = std::string("node criterion ") + (node ? "fires" : "silent") + ", connection criterion " +
             (conn ? "fires" : "silent") + ", " + std::to_string(feasible) + "/" + std::to_string(combos) +
             " combinations feasible";
  return r;
}

Result simulation(const Options& o) {
  Result r{8, "simulation soundness", false, {}, 0.0};
  const auto start = std::chrono::steady_clock::now();
  int violations = 0, members = 0;
  std::string bad;
  for (const auto& name : field_names()) {
    const auto net = fixture(o, fixture_for_field(name));
    const auto field = build_field(name, net);
    for (auto seed : o.seeds) {
      SimConfig cfg;
      cfg.ensemble = o.ensemble;
      cfg.seed = seed;
      cfg.threads = o.threads;
      const auto res = empirical_switching_test(field, net, cfg);
      members += static_cast<int>(res.members.size());
      violations += static_cast<int>(res.violations.size());
      for (const auto& v : res.violations) bad += " " + name + ":" + join_path(v);
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = violations == 0 && r.seconds < kSimulationBudgetSeconds;
  r.detail = std::to_string(members) + " trajectories, " + std::to_string(violations) +
             " infeasible observed paths, budget " + std::to_string(static_cast<int>(kSimulationBudgetSeconds)) +
             " s" + bad;
  return r;
}

Result local_map_fidelity(const Options& o) {
  Result r{9, "local map exponents by regression", false, {}, 0.0};
  double worst = 0.0;
  int maps = 0;
  std::string where;
  std::uint64_t seed = o.seed + 9;
  for (const auto& stem : kNetworks) {
    const auto net = fixture(o, stem);
    for (std::size_t j = 0; j < net.nodes.size(); ++j)
      for (auto i : net.predecessors(j))
        for (auto k : net.successors(j)) {
          const auto fit = local_map_regression(net, net.nodes[i].id, net.nodes[j].id, net.nodes[k].id,
                                                o.regression_samples, seed++);
          ++maps;
          if (fit.worst_relative_error() > worst) {
            worst = fit.worst_relative_error();
            where = stem + ":" + fit.incoming + "->" + fit.node + "->" + fit.outgoing;
          }
        }
  }
  // Exact eigenvalues are also a precondition of the regression: check the fields.
  int mismatched = 0;
  for (const auto& name : field_names()) {
    const auto net = fixture(o, fixture_for_field(name));
    const auto field = build_field(name, net);
    for (const auto& n : net.nodes) mismatched += static_cast<int>(eigenvalue_mismatches(field, net, n.id, kEigenTolerance).size());
  }
  r.passed = worst <= kExponentTolerance && maps > 0 && mismatched == 0;
  std::ostringstream s;
  s << maps << " local maps, worst relative error " << std::setprecision(3) << worst << " at " << where
    << " (tolerance " << kExponentTolerance << "), " << mismatched << " field eigenvalue mismatches";
  r.detail = s.str();
  return r;
}

std::string verdict_signature(const HeteroclinicNetwork& net, unsigned threads) {
  std::ostringstream s;
  for (const auto& n : net.nodes) s << to_string(node_criterion(net, n.id).verdict) << ';';
  for (const auto& c : net.connections) s << to_string(connection_criterion(net, c.from, c.to).verdict) << ';';
  for (const auto& n : net.nodes) {
    try {
      const auto b = depth_bound(net, n.id);
      s << b.k << '/' << b.sum_at_k << ';';
    } catch (const NetworkError&) {
      s << "-;";
    }
    for (int depth = 2; depth <= 4; ++depth)
      for (const auto& p : enumerate_followable(net, n.id, depth, 100000, threads))
        s << (p.verdict.intersects_near_origin ? '1' : '0');
    s << ';';
  }
  return s.str();
}

Result rescale_invariance(const Options& o) {
  Result r{10, "verdicts invariant under rescaled global maps", true, {}, 0.0};
  std::mt19937_64 rng(o.seed + 10);
  std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
  int checked = 0, changed = 0;
  std::string bad;
  for (const auto& stem : kNetworks) {
    const auto net = fixture(o, stem);
    const auto base = verdict_signature(net, o.threads);
    for (int k = 0; k < o.rescalings; ++k) {
      auto scaled = net;
      for (auto& c : scaled.connections) {
        c.permutation = net.resolved_permutation(c);
        for (auto& pair : c.permutation) pair.rescale = std::exp(log_scale(rng));
      }
      ++checked;
      if (verdict_signature(scaled, o.threads) != base) {
        ++changed;
        if (bad.find(stem) == std::string::npos) bad += " " + stem;
      }
    }
  }
  r.passed = changed == 0;
  r.detail = std::to_string(checked) + " rescaled networks, " + std::to_string(changed) + " with changed verdicts" +
             (bad.empty() ? "" : ":" + bad);
  return r;
}

}  // namespace

std::vector<Criterion> criteria() {
  return {{1, "two-region decision vs sampling oracle", two_region_oracle},
          {2, "figure configurations", figure_cases},
          {3, "cyclic thin families never all intersect", cyclic_families},
          {4, "RSP: no switching along connections, k=1", rsp_verdict},
          {5, "bowtie: predetermined exit after one return to xi2", bowtie_verdict},
          {6, "R^6: listed sequences and k=2", r6_verdict},
          {7, "Kirk-Silber: node and connection criteria", kirk_silber_verdict},
          {8, "simulation soundness", simulation},
          {9, "local map exponents by regression", local_map_fidelity},
          {10, "verdicts invariant under rescaled global maps", rescale_invariance}};
}

std::vector<Result> run(const Options& options, const std::vector<int>& ids) {
  std::vector<Result> out;
  for (const auto& c : criteria()) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run(options);
    } catch (const std::exception& e) {
      r = {c.id, c.name, false, std::string("error: ") + e.what(), 0.0};
    }
    if (r.seconds == 0.0)
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
  return out;
}

std::string format(const Result& r) {
  std::ostringstream s;
  s << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << " (" << std::fixed << std::setprecision(1)
    << r.seconds << " s): " << r.detail;
  return s.str();
}

}  // namespace heteroswitch::acceptance
