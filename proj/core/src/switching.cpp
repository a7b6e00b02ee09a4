#include "heteroswitch/switching.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace heteroswitch {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::no_switching: return "no_switching";
    case Verdict::switching_possible_bounded: return "switching_possible_bounded";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(Scope s) {
  switch (s) {
    case Scope::node: return "node";
    case Scope::connection: return "connection";
    case Scope::sequence: return "sequence";
    case Scope::network: return "network";
  }
  return "?";
}

SwitchingVerdict node_criterion(const HeteroclinicNetwork& net, const std::string& j) {
  const Node& n = net.node(j);
  const int N = net.section_dimension();
  SwitchingVerdict v{Scope::node, {j}, Verdict::inconclusive, {}};
  std::ostringstream os;
  os << "n_c=" << n.n_c << ", n_e=" << n.n_e << ", N=" << N;
  if (n.n_e == N) {
    v.verdict = Verdict::no_switching;
    os << "; n_e=N: the " << n.n_e << " exits split each incoming section into 2n_e=" << 2 * N
       << " > N cusp pairs that cannot all meet";
  } else if (n.n_c == N) {
    v.verdict = Verdict::no_switching;
    os << "; n_c=N: the images of the " << n.n_c << " entries form 2n_c=" << 2 * N
       << " > N cusp pairs in each outgoing section that cannot all meet";
  } else {
    os << "; neither count equals N";
  }
  v.rationale = os.str();
  return v;
}

std::size_t cycles_through(const HeteroclinicNetwork& net, const std::vector<std::string>& seq) {
  if (seq.empty()) return 0;
  std::vector<std::size_t> idx;
  for (const auto& id : seq) idx.push_back(net.node_index(id));
  std::size_t count = 0;
  for (const auto& cyc : enumerate_cycles(net)) {
    const std::size_t L = cyc.size();
    if (idx.size() > L + 1) continue;
    for (std::size_t s = 0; s < L; ++s) {
      bool match = true;
      for (std::size_t t = 0; t < idx.size() && match; ++t) match = cyc[(s + t) % L] == idx[t];
      if (match) {
        ++count;
        break;
      }
    }
  }
  return count;
}

namespace {

SwitchingVerdict chain_criterion(const HeteroclinicNetwork& net, const std::vector<std::string>& seq,
                                 Scope scope) {
  SwitchingVerdict v{scope, seq, Verdict::inconclusive, {}};
  for (std::size_t t = 0; t + 1 < seq.size(); ++t)
    if (!net.connection_index(seq[t], seq[t + 1]))
      throw NetworkError("no connection " + seq[t] + "->" + seq[t + 1]);
  const int N = net.section_dimension();
  const std::size_t shared = cycles_through(net, seq);
  const Node& first = net.node(seq.front());
  const Node& last = net.node(seq.back());
  std::ostringstream os;
  os << "shared by " << shared << " cycle" << (shared == 1 ? "" : "s");
  if (shared < 2) {
    os << "; criterion needs two cycles through the chain";
    v.rationale = os.str();
    return v;
  }
  os << "; n_c(" << first.id << ")+n_e(" << last.id << ")=" << first.n_c << "+" << last.n_e << "="
     << first.n_c + last.n_e << ", N=" << N;
  if (N == 2) {
    v.verdict = Verdict::no_switching;
    os << "; N=2";
  } else if (first.n_c + last.n_e >= N) {
    v.verdict = Verdict::no_switching;
    os << " >= N";
  } else {
    os << " < N";
  }
  v.rationale = os.str();
  return v;
}

}  // namespace

SwitchingVerdict connection_criterion(const HeteroclinicNetwork& net, const std::string& from,
                                      const std::string& to) {
  return chain_criterion(net, {from, to}, Scope::connection);
}

SwitchingVerdict sequence_criterion(const HeteroclinicNetwork& net,
                                    const std::vector<std::string>& seq) {
  if (seq.size() < 2) throw NetworkError("a sequence needs at least two nodes");
  return chain_criterion(net, seq, seq.size() == 2 ? Scope::connection : Scope::sequence);
}

DepthBound depth_bound(const HeteroclinicNetwork& net, const std::string& start, int max_steps) {
  const std::size_t s = net.node_index(start);
  if (net.successors(s).size() < 2)
    throw NetworkError("'" + start + "' is not a distribution node");
  DepthBound db;
  db.start = start;
  db.N = net.section_dimension();
  const std::size_t n = net.nodes.size();
  auto is_distribution = [&](std::size_t v) { return net.successors(v).size() >= 2; };

  // Chains from a distribution node to the next one along single exits.
  auto chain = [&](std::size_t from, std::size_t first) {
    std::vector<std::size_t> p{first};
    while (!is_distribution(p.back()) && p.size() <= n) {
      auto succ = net.successors(p.back());
      if (succ.empty()) break;
      p.push_back(succ.front());
    }
    (void)from;
    return p;
  };

  struct Partial {
    std::vector<std::size_t> dist;
    std::vector<std::size_t> path;
    std::vector<int> sums;
  };
  std::vector<Partial> frontier{{{s}, {s}, {}}};
  for (int step = 0; step < max_steps && !frontier.empty(); ++step) {
    std::vector<Partial> next;
    for (const auto& p : frontier) {
      const std::size_t j_prev = p.dist.back();
      for (std::size_t first : net.successors(j_prev)) {
        auto c = chain(j_prev, first);
        Partial q = p;
        q.path.insert(q.path.end(), c.begin(), c.end());
        const std::size_t j_next = c.back();
        if (!is_distribution(j_next)) continue;  // dead end: no further choices
        q.dist.push_back(j_next);
        const int term = net.nodes[j_next].n_c + net.nodes[j_prev].n_e;
        q.sums.push_back((q.sums.empty() ? 0 : q.sums.back()) + term);
        if (q.sums.back() >= db.N) {
          DepthSequence seq;
          for (auto v : q.dist) seq.distribution_nodes.push_back(net.nodes[v].id);
          for (auto v : q.path) seq.path.push_back(net.nodes[v].id);
          seq.partial_sums = q.sums;
          seq.k = static_cast<int>(q.sums.size());
          db.sequences.push_back(std::move(seq));
        } else {
          next.push_back(std::move(q));
        }
      }
    }
    frontier = std::move(next);
  }
  for (const auto& p : frontier) {  // never reached N within max_steps
    DepthSequence seq;
    for (auto v : p.dist) seq.distribution_nodes.push_back(net.nodes[v].id);
    for (auto v : p.path) seq.path.push_back(net.nodes[v].id);
    seq.partial_sums = p.sums;
    seq.k = -1;
    db.sequences.push_back(std::move(seq));
  }
  for (const auto& seq : db.sequences) {
    if (seq.k < 0) {
      db.k = -1;
      break;
    }
    if (seq.k > db.k) {
      db.k = seq.k;
      db.sum_at_k = seq.partial_sums.back();
    }
  }
  for (const auto& cyc : enumerate_cycles(net)) {
    if (std::find(cyc.begin(), cyc.end(), s) == cyc.end()) continue;
    const int count = static_cast<int>(std::count_if(cyc.begin(), cyc.end(), is_distribution));
    db.cycle_bound = std::max(db.cycle_bound, count);
  }
  return db;
}

FeasibilityVerdict FollowableCache::verdict(const std::vector<std::string>& path) {
  {
    std::lock_guard lock(mu_);
    auto it = memo_.find(path);
    if (it != memo_.end()) return it->second;
  }
  FeasibilityVerdict v = followable(net_, path);
  std::lock_guard lock(mu_);
  memo_.emplace(path, v);
  return v;
}

bool FollowableCache::operator()(const std::vector<std::string>& path) {
  return verdict(path).intersects_near_origin;
}

namespace {

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

std::vector<PathVerdict> evaluate_paths(const HeteroclinicNetwork& net,
                                        std::vector<std::vector<std::string>> paths,
                                        unsigned threads) {
  std::vector<PathVerdict> out(paths.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < paths.size(); i = next++)
      out[i] = {paths[i], followable(net, paths[i])};
  };
  const unsigned t = worker_count(threads, paths.size());
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < t; ++k) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return out;
}

void extend_paths(const HeteroclinicNetwork& net, std::vector<std::size_t>& cur, int remaining,
                  std::size_t cap, std::vector<std::vector<std::string>>& out) {
  if (remaining == 0) {
    std::vector<std::string> ids;
    for (auto v : cur) ids.push_back(net.nodes[v].id);
    out.push_back(std::move(ids));
    if (out.size() > cap)
      throw NetworkError("path enumeration exceeded the cap of " + std::to_string(cap));
    return;
  }
  for (std::size_t w : net.successors(cur.back())) {
    cur.push_back(w);
    extend_paths(net, cur, remaining - 1, cap, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<PathVerdict> enumerate_followable(const HeteroclinicNetwork& net,
                                              const std::string& start, int depth, std::size_t cap,
                                              unsigned threads) {
  if (depth < 1) throw NetworkError("depth must be at least 1");
  std::vector<std::size_t> cur{net.node_index(start)};
  std::vector<std::vector<std::string>> paths;
  extend_paths(net, cur, depth, cap, paths);
  return evaluate_paths(net, std::move(paths), threads);
}

std::vector<PathVerdict> enumerate_from_connection(const HeteroclinicNetwork& net,
                                                   const std::string& from, const std::string& to,
                                                   int depth, std::size_t cap, unsigned threads) {
  if (depth < 1) throw NetworkError("depth must be at least 1");
  (void)net.connection(from, to);
  std::vector<std::size_t> cur{net.node_index(from), net.node_index(to)};
  std::vector<std::vector<std::string>> paths;
  extend_paths(net, cur, depth - 1, cap, paths);
  return evaluate_paths(net, std::move(paths), threads);
}

ReturnDeterminism return_determinism(const HeteroclinicNetwork& net, const std::string& from,
                                     const std::string& node, int max_depth) {
  ReturnDeterminism rd;
  rd.node = node;
  rd.entered_from = from;
  FollowableCache ok(net);
  const std::size_t target = net.node_index(node);
  for (std::size_t x : net.successors(target))
    if (ok({from, node, net.nodes[x].id})) ++rd.first_exits_feasible;

  std::function<void(std::vector<std::string>&)> dfs = [&](std::vector<std::string>& p) {
    if (static_cast<int>(p.size()) - 1 > max_depth) return;
    if (!ok(p)) return;
    if (p.size() > 2 && p.back() == node) {
      std::vector<std::string> exits;
      for (std::size_t x : net.successors(target)) {
        p.push_back(net.nodes[x].id);
        if (ok(p)) exits.push_back(p.back());
        p.pop_back();
      }
      if (exits.size() > 1) rd.predetermined = false;
      rd.returns.emplace_back(p, std::move(exits));
      return;
    }
    for (std::size_t w : net.successors(net.node_index(p.back()))) {
      p.push_back(net.nodes[w].id);
      dfs(p);
      p.pop_back();
    }
  };
  std::vector<std::string> p{from, node};
  dfs(p);
  return rd;
}

NetworkReport network_report(const HeteroclinicNetwork& net, const ReportOptions& options) {
  NetworkReport rep;
  rep.network = net.name;
  rep.validation = validate_quasi_simple(net);
  if (!rep.validation.ok()) {
    rep.headline = "network is not a valid quasi-simple network; no verdicts";
    return rep;
  }
  rep.N = net.section_dimension();
  rep.distribution = distribution_nodes(net);
  for (const auto& n : net.nodes) rep.node_verdicts.push_back(node_criterion(net, n.id));
  for (const auto& c : net.connections)
    rep.connection_verdicts.push_back(connection_criterion(net, c.from, c.to));
  for (const auto& d : rep.distribution) rep.depth_bounds.push_back(depth_bound(net, d));

  for (const auto& d : rep.distribution) {
    const std::size_t j = net.node_index(d);
    for (std::size_t i : net.predecessors(j))
      rep.returns.push_back(return_determinism(net, net.nodes[i].id, d, options.return_depth));
  }
  for (const auto& n : net.nodes) {
    if (n.n_t == 0) continue;
    const std::size_t j = net.node_index(n.id);
    for (std::size_t k : net.successors(j)) rep.departures.push_back(departure_set(net, n.id, net.nodes[k].id));
  }

  // Shortest non-followable path, breadth first over followable prefixes.
  {
    FollowableCache ok(net);
    std::vector<std::vector<std::string>> frontier;
    for (const auto& c : net.connections) frontier.push_back({c.from, c.to});
    for (int depth = 1; depth <= options.witness_depth && !rep.finite_witness; ++depth) {
      std::vector<std::vector<std::string>> next;
      for (const auto& p : frontier) {
        if (!ok(p)) {
          rep.finite_witness = p;
          break;
        }
        for (std::size_t w : net.successors(net.node_index(p.back()))) {
          auto q = p;
          q.push_back(net.nodes[w].id);
          next.push_back(std::move(q));
        }
      }
      frontier = std::move(next);
    }
  }

  rep.headline = "no infinite switching: every node has real eigenvalues";
  if (rep.finite_witness) {
    std::string w;
    for (const auto& id : *rep.finite_witness) w += (w.empty() ? "" : "->") + id;
    rep.headline += "; path " + w + " is not followable";
  }

  const bool all_connections = std::all_of(
      rep.connection_verdicts.begin(), rep.connection_verdicts.end(),
      [](const SwitchingVerdict& v) { return v.verdict == Verdict::no_switching; });
  if (all_connections && !rep.connection_verdicts.empty())
    rep.findings.push_back("no switching along any connection");
  else
    for (const auto& v : rep.connection_verdicts)
      if (v.verdict == Verdict::no_switching)
        rep.findings.push_back("no switching along " + v.subject[0] + "->" + v.subject[1]);
  for (const auto& v : rep.node_verdicts)
    if (v.verdict == Verdict::no_switching)
      rep.findings.push_back("no switching at node " + v.subject[0]);
  if (!rep.depth_bounds.empty()) {
    const int k0 = rep.depth_bounds.front().k;
    const bool same = std::all_of(rep.depth_bounds.begin(), rep.depth_bounds.end(),
                                  [&](const DepthBound& d) { return d.k == k0; });
    if (same && rep.depth_bounds.size() == net.nodes.size())
      rep.findings.push_back("k=" + std::to_string(k0) + " everywhere");
    else
      for (const auto& d : rep.depth_bounds)
        rep.findings.push_back("k=" + std::to_string(d.k) + " at " + d.start);
  }
  std::set<std::string> predetermined;
  for (const auto& r : rep.returns)
    if (r.predetermined && !r.returns.empty()) predetermined.insert(r.node);
  for (const auto& r : rep.returns)
    if (!r.predetermined) predetermined.erase(r.node);
  for (const auto& node : predetermined)
    rep.findings.push_back("predetermined outgoing cross section after one return to " + node);
  for (const auto& d : rep.departures)
    if (d.nonempty)
      rep.findings.push_back("points of " + d.section.name() +
                             " outside every image F depart from the network");
  return rep;
}

}  // namespace heteroswitch
