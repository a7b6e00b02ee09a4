#include "heteroswitch/itinerary.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "heteroswitch/switching.hpp"

namespace heteroswitch {

std::string to_string(EventType e) {
  return e == EventType::entered_node ? "entered_node" : "traversed_connection";
}

std::string to_string(Terminal t) {
  switch (t) {
    case Terminal::still_near_network: return "still_near_network";
    case Terminal::departed: return "departed";
    case Terminal::time_exhausted: return "time_exhausted";
    case Terminal::integration_failed: return "integration_failed";
  }
  return "?";
}

std::vector<std::string> Itinerary::node_path() const {
  std::vector<std::string> p;
  for (const auto& e : events)
    if (e.type == EventType::entered_node) p.push_back(e.node);
  return p;
}

ItineraryRecorder::ItineraryRecorder(const VectorField& field, const HeteroclinicNetwork& net,
                                     const SimConfig& config)
    : field_(field), net_(net), config_(config) {
  config_.validate();
  for (std::size_t a = 0; a < net.nodes.size(); ++a)
    for (std::size_t b = a + 1; b < net.nodes.size(); ++b) {
      const double d = (field.embedding(net.nodes[a].id).position - field.embedding(net.nodes[b].id).position).norm();
      if (d <= 4.0 * config.node_radius)
        throw ItineraryError("neighbourhoods of " + net.nodes[a].id + " and " + net.nodes[b].id +
                             " overlap; use a smaller node_radius");
    }
}

std::pair<int, double> ItineraryRecorder::nearest_connection(const Eigen::VectorXd& x) const {
  int best = -1;
  double best_off = INFINITY;
  for (std::size_t c = 0; c < net_.connections.size(); ++c) {
    const auto& conn = net_.connections[c];
    const auto& support = field_.connection_support.at(conn.from + "->" + conn.to);
    double off = 0.0;
    for (int k = 0; k < field_.dimension; ++k)
      if (std::find(support.begin(), support.end(), k) == support.end()) off = std::max(off, std::abs(x(k)));
    if (off < best_off) {
      best_off = off;
      best = static_cast<int>(c);
    }
  }
  return {best, best_off};
}

void ItineraryRecorder::enter(int node, double t, const Eigen::VectorXd& x) {
  const auto& id = net_.nodes[static_cast<std::size_t>(node)].id;
  if (last_ >= 0) it_.events.push_back({EventType::traversed_connection, net_.nodes[static_cast<std::size_t>(last_)].id, id, t, x});
  it_.events.push_back({EventType::entered_node, id, {}, t, x});
  last_ = node;
  ++visits_;
}

bool ItineraryRecorder::feed(double t, const Eigen::VectorXd& x) {
  if (departed_ || visits_ >= config_.max_visits) return false;
  it_.end_time = t;
  if (current_ >= 0) {
    const double d = (x - field_.embedding(net_.nodes[static_cast<std::size_t>(current_)].id).position).norm();
    if (d <= 2.0 * config_.node_radius) return true;
    current_ = -1;
  }
  int hit = -1;
  for (std::size_t n = 0; n < net_.nodes.size(); ++n) {
    const double d = (x - field_.embedding(net_.nodes[n].id).position).norm();
    if (d < config_.node_radius) {
      if (hit >= 0) throw ItineraryError("sample within node_radius of two nodes; use a smaller node_radius");
      hit = static_cast<int>(n);
    }
  }
  if (hit < 0) {
    const auto [conn, off] = nearest_connection(x);
    if (off > config_.departure) {
      departed_ = true;
      return false;
    }
    // A switch between consecutive connections outside every ball means the
    // trajectory passed their shared node at a distance above node_radius.
    if (conn != conn_ && conn_ >= 0 && last_ >= 0) {
      const auto& p = net_.connections[static_cast<std::size_t>(conn_)];
      const auto& c = net_.connections[static_cast<std::size_t>(conn)];
      const int shared = static_cast<int>(net_.node_index(c.from));
      if (p.to == c.from && net_.nodes[static_cast<std::size_t>(last_)].id == p.from) enter(shared, t, x);
    }
    conn_ = conn;
    return visits_ < config_.max_visits;
  }
  conn_ = -1;
  const auto& id = net_.nodes[static_cast<std::size_t>(hit)].id;
  if (last_ >= 0) {
    const auto& prev = net_.nodes[static_cast<std::size_t>(last_)].id;
    if (prev == id) {
      // Left and came back without reaching another node.
      current_ = hit;
      return true;
    }
    if (!net_.connection_index(prev, id)) {
      departed_ = true;
      return false;
    }
  }
  enter(hit, t, x);
  current_ = hit;
  return visits_ < config_.max_visits;
}

Itinerary ItineraryRecorder::finish(double t, bool exhausted, bool failed) {
  Itinerary out = it_;
  out.end_time = std::max(out.end_time, t);
  if (failed) out.terminal = Terminal::integration_failed;
  else if (departed_) out.terminal = Terminal::departed;
  else if (exhausted && visits_ < config_.max_visits) out.terminal = Terminal::time_exhausted;
  else out.terminal = Terminal::still_near_network;
  return out;
}

Itinerary record_itinerary(const Trajectory& traj, const VectorField& field, const HeteroclinicNetwork& net,
                           const SimConfig& config) {
  ItineraryRecorder rec(field, net, config);
  bool stopped = false;
  double last = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    last = traj.times[k];
    if (!rec.feed(traj.times[k], traj.states[k])) {
      stopped = true;
      break;
    }
  }
  return rec.finish(last, !stopped, traj.underflow);
}

Eigen::VectorXd seed_near_connection(const VectorField& field, const HeteroclinicNetwork& net,
                                     const std::string& from, const std::string& to, const SimConfig& config,
                                     std::uint64_t member) {
  const Connection& c = net.connection(from, to);
  const auto& emb = field.embedding(from);
  const auto& target = field.embedding(to).position;
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(member), static_cast<std::uint32_t>(member >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> expo(-1.0, 0.0);
  Eigen::VectorXd x = emb.position;
  for (int k = 0; k < field.dimension; ++k)
    if (x(k) == 0.0) x(k) = config.shell * std::pow(10.0, expo(rng));
  // Push along the connection: coordinates the target has and the source lacks.
  for (const auto& label : c.expanding_labels) {
    auto it = emb.label_axis.find(label);
    if (it != emb.label_axis.end()) x(it->second) = 0.5 * config.node_radius;
  }
  for (int k = 0; k < field.dimension; ++k)
    if (target(k) != 0.0 && emb.position(k) == 0.0) x(k) = 0.5 * config.node_radius;
  for (const auto& block : field.simplex_blocks) {
    double s = 0.0;
    for (int k : block) s += x(k);
    for (int k : block) x(k) /= s;
  }
  return x;
}

EmpiricalResult empirical_switching_test(const VectorField& field, const HeteroclinicNetwork& net,
                                         const SimConfig& config) {
  config.validate();
  std::vector<const Connection*> starts;
  for (const auto& c : net.connections)
    if (!config.start || c.from == *config.start) starts.push_back(&c);
  if (starts.empty()) throw ItineraryError("no connection leaves the start node");
  // Validates the radius before any thread starts.
  { ItineraryRecorder probe(field, net, config); }

  EmpiricalResult result;
  result.members.resize(static_cast<std::size_t>(config.ensemble));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int m = next++; m < config.ensemble; m = next++) {
      const Connection& c = *starts[static_cast<std::size_t>(m) % starts.size()];
      const Eigen::VectorXd x0 = seed_near_connection(field, net, c.from, c.to, config, static_cast<std::uint64_t>(m));
      ItineraryRecorder rec(field, net, config);
      bool stopped = false;
      double last = 0.0;
      const Trajectory tr = integrate(
          field, x0, config,
          [&](double t, const Eigen::VectorXd& x) {
            last = t;
            stopped = !rec.feed(t, x);
            return !stopped;
          },
          false);
      auto& out = result.members[static_cast<std::size_t>(m)];
      out.member = m;
      out.seeded_from = c.from;
      out.seeded_to = c.to;
      out.itinerary = rec.finish(last, !stopped, tr.underflow);
    }
  };
  unsigned n = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(config.ensemble));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  FollowableCache cache(net);
  for (const auto& m : result.members) {
    if (m.itinerary.terminal == Terminal::departed) ++result.departed;
    if (m.itinerary.terminal == Terminal::integration_failed) ++result.failed;
    const auto path = m.itinerary.node_path();
    if (path.empty()) continue;
    ++result.path_counts[path];
  }
  for (const auto& [path, count] : result.path_counts)
    if (path.size() >= 3 && !cache(path)) result.violations.push_back(path);
  return result;
}

}  // namespace heteroswitch
