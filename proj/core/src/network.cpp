#include "heteroswitch/network.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace heteroswitch {

using nlohmann::json;

const char* to_string(EigenClass k) {
  switch (k) {
    case EigenClass::radial: return "radial";
    case EigenClass::contracting: return "contracting";
    case EigenClass::expanding: return "expanding";
    case EigenClass::transverse: return "transverse";
  }
  return "?";
}

EigenClass eigen_class_from_string(const std::string& s) {
  if (s == "radial") return EigenClass::radial;
  if (s == "contracting") return EigenClass::contracting;
  if (s == "expanding") return EigenClass::expanding;
  if (s == "transverse") return EigenClass::transverse;
  throw NetworkError("unknown eigenvalue class '" + s + "'");
}

const Eigenvalue* Node::find(const std::string& label) const {
  for (const auto& e : eigenvalues)
    if (e.label == label) return &e;
  return nullptr;
}

std::vector<std::string> Node::non_radial_labels() const {
  std::vector<std::string> out;
  for (const auto& e : eigenvalues)
    if (e.klass != EigenClass::radial) out.push_back(e.label);
  return out;
}

std::size_t HeteroclinicNetwork::node_index(const std::string& id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return i;
  throw NetworkError("unknown node '" + id + "'");
}

std::optional<std::size_t> HeteroclinicNetwork::connection_index(const std::string& from,
                                                                 const std::string& to) const {
  for (std::size_t i = 0; i < connections.size(); ++i)
    if (connections[i].from == from && connections[i].to == to) return i;
  return std::nullopt;
}

const Connection& HeteroclinicNetwork::connection(const std::string& from,
                                                  const std::string& to) const {
  auto idx = connection_index(from, to);
  if (!idx) throw NetworkError("no connection " + from + "->" + to);
  return connections[*idx];
}

std::vector<std::size_t> HeteroclinicNetwork::successors(std::size_t n) const {
  std::vector<std::size_t> out;
  for (const auto& c : connections)
    if (c.from == nodes[n].id) out.push_back(node_index(c.to));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> HeteroclinicNetwork::predecessors(std::size_t n) const {
  std::vector<std::size_t> out;
  for (const auto& c : connections)
    if (c.to == nodes[n].id) out.push_back(node_index(c.from));
  std::sort(out.begin(), out.end());
  return out;
}

int HeteroclinicNetwork::section_dimension() const {
  if (!cross_section_dimension)
    throw NetworkError("nodes of network '" + name + "' disagree on the cross-section dimension");
  return *cross_section_dimension;
}

std::vector<std::string> HeteroclinicNetwork::incoming_axes(const Connection& c) const {
  auto labels = node(c.to).non_radial_labels();
  std::erase(labels, c.contracting_labels.empty() ? std::string{} : c.contracting_label());
  return labels;
}

std::vector<std::string> HeteroclinicNetwork::outgoing_axes(const Connection& c) const {
  auto labels = node(c.from).non_radial_labels();
  std::erase(labels, c.expanding_labels.empty() ? std::string{} : c.expanding_label());
  return labels;
}

std::vector<AxisPair> HeteroclinicNetwork::resolved_permutation(const Connection& c) const {
  const auto out_axes = outgoing_axes(c);
  const auto in_axes = incoming_axes(c);
  const std::string where = c.from + "->" + c.to;
  if (out_axes.size() != in_axes.size())
    throw NetworkError("global map " + where + ": sections have different dimensions");
  std::vector<AxisPair> result;
  if (c.permutation.empty()) {
    for (const auto& l : out_axes) {
      if (std::find(in_axes.begin(), in_axes.end(), l) == in_axes.end())
        throw NetworkError("global map " + where + ": no permutation given and axis '" + l +
                           "' has no namesake in the incoming section");
      result.push_back({l, l, 1.0});
    }
    return result;
  }
  std::set<std::string> seen_out, seen_in;
  for (const auto& p : c.permutation) {
    if (std::find(out_axes.begin(), out_axes.end(), p.out_label) == out_axes.end())
      throw NetworkError("global map " + where + ": '" + p.out_label +
                         "' is not an outgoing section axis");
    if (std::find(in_axes.begin(), in_axes.end(), p.in_label) == in_axes.end())
      throw NetworkError("global map " + where + ": '" + p.in_label +
                         "' is not an incoming section axis");
    if (!(p.rescale > 0.0))
      throw NetworkError("global map " + where + ": rescale coefficients must be positive");
    if (!seen_out.insert(p.out_label).second || !seen_in.insert(p.in_label).second)
      throw NetworkError("global map " + where + ": permutation is not a bijection");
  }
  if (seen_out.size() != out_axes.size())
    throw NetworkError("global map " + where + ": missing permutation entry");
  return c.permutation;
}

namespace {

std::vector<std::string> label_list(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw NetworkError(where + ": missing '" + key + "'");
  const auto& v = j.at(key);
  if (v.is_string()) return {v.get<std::string>()};
  if (v.is_array()) {
    std::vector<std::string> out;
    for (const auto& e : v) {
      if (!e.is_string()) throw NetworkError(where + ": '" + key + "' entries must be strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }
  throw NetworkError(where + ": '" + key + "' must be a string or a list of strings");
}

Connection parse_connection(const json& jc, std::size_t index) {
  const std::string where = "connection #" + std::to_string(index);
  if (!jc.is_object()) throw NetworkError(where + ": expected an object");
  Connection c;
  try {
    c.from = jc.at("from").get<std::string>();
    c.to = jc.at("to").get<std::string>();
  } catch (const json::exception&) {
    throw NetworkError(where + ": 'from' and 'to' must be node ids");
  }
  c.expanding_labels = label_list(jc, "expanding_label", where);
  c.contracting_labels = label_list(jc, "contracting_label", where);
  if (jc.contains("permutation")) {
    for (const auto& p : jc.at("permutation")) {
      if (p.is_array() && p.size() == 2 && p[0].is_string() && p[1].is_string())
        c.permutation.push_back({p[0].get<std::string>(), p[1].get<std::string>(), 1.0});
      else if (p.is_object() && p.contains("out") && p.contains("in"))
        c.permutation.push_back({p.at("out").get<std::string>(), p.at("in").get<std::string>(), 1.0});
      else
        throw NetworkError(where + ": permutation entries are [out_label, in_label] pairs");
    }
  }
  if (jc.contains("rescale")) {
    const auto& r = jc.at("rescale");
    if (!r.is_array() || r.size() != c.permutation.size())
      throw NetworkError(where + ": 'rescale' needs one entry per permutation pair");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!r[i].is_number()) throw NetworkError(where + ": rescale entries must be numbers");
      c.permutation[i].rescale = r[i].get<double>();
      if (!(c.permutation[i].rescale > 0.0))
        throw NetworkError(where + ": rescale entries must be positive");
    }
  }
  return c;
}

struct RawDocument {
  HeteroclinicNetwork skeleton;  // without connections
  std::vector<Connection> connections;
};

RawDocument parse_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw NetworkError(std::string("network document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw NetworkError("network document must be an object");
  RawDocument raw;
  auto& net = raw.skeleton;
  net.name = doc.value("name", std::string{});
  if (!doc.contains("ambient_dimension") || !doc.at("ambient_dimension").is_number_integer())
    throw NetworkError("'ambient_dimension' must be an integer");
  net.ambient_dimension = doc.at("ambient_dimension").get<int>();
  if (net.ambient_dimension < 1) throw NetworkError("'ambient_dimension' must be positive");
  if (!doc.contains("nodes") || !doc.at("nodes").is_array())
    throw NetworkError("'nodes' must be a list");
  std::set<std::string> ids;
  for (const auto& jn : doc.at("nodes")) {
    Node n;
    if (!jn.is_object() || !jn.contains("id") || !jn.at("id").is_string())
      throw NetworkError("every node needs a string 'id'");
    n.id = jn.at("id").get<std::string>();
    if (!ids.insert(n.id).second) throw NetworkError("duplicate node id '" + n.id + "'");
    if (!jn.contains("eigenvalues") || !jn.at("eigenvalues").is_array())
      throw NetworkError("node '" + n.id + "': 'eigenvalues' must be a list");
    std::set<std::string> labels;
    for (const auto& je : jn.at("eigenvalues")) {
      Eigenvalue e;
      try {
        e.value = je.at("value").get<double>();
        e.klass = eigen_class_from_string(je.at("klass").get<std::string>());
        e.label = je.at("label").get<std::string>();
      } catch (const json::exception&) {
        throw NetworkError("node '" + n.id + "': eigenvalues need value, klass and label");
      }
      if (!labels.insert(e.label).second)
        throw NetworkError("node '" + n.id + "': duplicate eigenvalue label '" + e.label + "'");
      n.eigenvalues.push_back(std::move(e));
    }
    net.nodes.push_back(std::move(n));
  }
  if (!doc.contains("connections") || !doc.at("connections").is_array())
    throw NetworkError("'connections' must be a list");
  std::size_t index = 0;
  for (const auto& jc : doc.at("connections")) {
    Connection c = parse_connection(jc, index++);
    if (!ids.count(c.from) || !ids.count(c.to))
      throw NetworkError("connection " + c.from + "->" + c.to + " has a dangling endpoint");
    raw.connections.push_back(std::move(c));
  }
  return raw;
}

}  // namespace

void derive_counts(HeteroclinicNetwork& net) {
  std::optional<int> common;
  bool uniform = true;
  for (auto& n : net.nodes) {
    n.n_c = n.n_e = n.n_t = 0;
    for (const auto& e : n.eigenvalues) {
      if (e.klass == EigenClass::contracting) ++n.n_c;
      else if (e.klass == EigenClass::expanding) ++n.n_e;
      else if (e.klass == EigenClass::transverse) ++n.n_t;
    }
    if (!common) common = n.section_dimension();
    else if (*common != n.section_dimension()) uniform = false;
  }
  net.cross_section_dimension = uniform ? common : std::nullopt;
}

HeteroclinicNetwork load_network(const std::string& document) {
  RawDocument raw = parse_document(document);
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& c : raw.connections)
    if (!pairs.insert({c.from, c.to}).second)
      throw NetworkError("parallel connections " + c.from + "->" + c.to +
                         "; load them as sub-networks");
  HeteroclinicNetwork net = std::move(raw.skeleton);
  net.connections = std::move(raw.connections);
  derive_counts(net);
  return net;
}

HeteroclinicNetwork load_network_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NetworkError("cannot open network file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto net = load_network(ss.str());
  if (net.name.empty()) net.name = path.stem().string();
  return net;
}

std::vector<HeteroclinicNetwork> load_networks(const std::string& document) {
  RawDocument raw = parse_document(document);
  // Groups of parallel connections, in order of first appearance.
  std::vector<std::vector<Connection>> groups;
  std::map<std::pair<std::string, std::string>, std::size_t> where;
  for (auto& c : raw.connections) {
    auto key = std::make_pair(c.from, c.to);
    auto it = where.find(key);
    if (it == where.end()) {
      where.emplace(key, groups.size());
      groups.push_back({std::move(c)});
    } else {
      groups[it->second].push_back(std::move(c));
    }
  }
  std::vector<HeteroclinicNetwork> out;
  std::vector<std::size_t> choice(groups.size(), 0);
  while (true) {
    HeteroclinicNetwork net = raw.skeleton;
    for (std::size_t g = 0; g < groups.size(); ++g) net.connections.push_back(groups[g][choice[g]]);
    derive_counts(net);
    if (out.size() > 0 || groups.end() != std::find_if(groups.begin(), groups.end(),
                                                       [](const auto& g) { return g.size() > 1; }))
      net.name += "#" + std::to_string(out.size());
    out.push_back(std::move(net));
    std::size_t g = groups.size();
    while (g > 0) {
      --g;
      if (++choice[g] < groups[g].size()) break;
      choice[g] = 0;
      if (g == 0) return out;
    }
    if (groups.empty()) return out;
  }
}

std::vector<HeteroclinicNetwork> load_networks_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NetworkError("cannot open network file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto nets = load_networks(ss.str());
  for (auto& n : nets)
    if (n.name.empty() || n.name.front() == '#') n.name = path.stem().string() + n.name;
  return nets;
}

std::string serialize(const HeteroclinicNetwork& net) {
  json doc;
  if (!net.name.empty()) doc["name"] = net.name;
  doc["ambient_dimension"] = net.ambient_dimension;
  doc["nodes"] = json::array();
  for (const auto& n : net.nodes) {
    json jn{{"id", n.id}, {"eigenvalues", json::array()}};
    for (const auto& e : n.eigenvalues)
      jn["eigenvalues"].push_back({{"value", e.value}, {"klass", to_string(e.klass)}, {"label", e.label}});
    doc["nodes"].push_back(std::move(jn));
  }
  doc["connections"] = json::array();
  auto labels = [](const std::vector<std::string>& v) {
    return v.size() == 1 ? json(v.front()) : json(v);
  };
  for (const auto& c : net.connections) {
    json jc{{"from", c.from},
            {"to", c.to},
            {"expanding_label", labels(c.expanding_labels)},
            {"contracting_label", labels(c.contracting_labels)}};
    if (!c.permutation.empty()) {
      jc["permutation"] = json::array();
      bool unit = true;
      for (const auto& p : c.permutation) {
        jc["permutation"].push_back({p.out_label, p.in_label});
        unit = unit && p.rescale == 1.0;
      }
      if (!unit) {
        jc["rescale"] = json::array();
        for (const auto& p : c.permutation) jc["rescale"].push_back(p.rescale);
      }
    }
    doc["connections"].push_back(std::move(jc));
  }
  return doc.dump(2);
}

bool ValidationReport::ok() const {
  return std::none_of(findings.begin(), findings.end(),
                      [](const Finding& f) { return f.severity == Severity::error; });
}

ValidationReport validate_quasi_simple(const HeteroclinicNetwork& net) {
  ValidationReport rep;
  auto add = [&](Severity s, std::string subject, std::string msg) {
    rep.findings.push_back({s, std::move(subject), std::move(msg)});
  };

  if (net.nodes.empty()) add(Severity::error, "network", "network has no nodes");

  std::map<int, std::vector<std::string>> by_dimension;
  for (const auto& n : net.nodes) {
    if (n.n_c < 1) add(Severity::error, n.id, "no contracting eigenvalue (n_c = 0)");
    if (n.n_e < 1) add(Severity::error, n.id, "no expanding eigenvalue (n_e = 0)");
    if (static_cast<int>(n.eigenvalues.size()) != net.ambient_dimension)
      add(Severity::error, n.id,
          std::to_string(n.eigenvalues.size()) + " eigenvalues declared in ambient dimension " +
              std::to_string(net.ambient_dimension));
    for (const auto& e : n.eigenvalues) {
      if (e.klass == EigenClass::contracting && !(e.value < 0.0))
        add(Severity::error, n.id, "contracting eigenvalue '" + e.label + "' is not negative");
      if (e.klass == EigenClass::expanding && !(e.value > 0.0))
        add(Severity::error, n.id, "expanding eigenvalue '" + e.label + "' is not positive");
      if (e.klass == EigenClass::transverse && e.value > 0.0)
        add(Severity::warning, n.id,
            "positive transverse eigenvalue '" + e.label +
                "': the network cannot be asymptotically stable");
      if (e.value == 0.0) add(Severity::error, n.id, "zero eigenvalue '" + e.label + "'");
    }
    by_dimension[n.section_dimension()].push_back(n.id);
  }
  if (by_dimension.size() > 1) {
    std::ostringstream os;
    os << "cross-section dimension differs between nodes:";
    for (const auto& [d, ids] : by_dimension) {
      os << " N=" << d << " at";
      for (const auto& id : ids) os << " " << id;
      os << ";";
    }
    add(Severity::error, "network", os.str());
  } else if (by_dimension.size() == 1 && by_dimension.begin()->first <= 1) {
    add(Severity::error, "network",
        "cross sections of dimension N=" + std::to_string(by_dimension.begin()->first) +
            " leave no room for switching; N must exceed 1");
  }

  std::map<std::string, std::set<std::string>> used_expanding, used_contracting;
  for (const auto& c : net.connections) {
    const std::string subj = c.from + "->" + c.to;
    if (c.from == c.to) add(Severity::error, subj, "connection from a node to itself");
    if (c.expanding_labels.size() != 1)
      add(Severity::error, subj,
          std::to_string(c.expanding_labels.size()) +
              " expanding labels; a one-dimensional connection has exactly one");
    if (c.contracting_labels.size() != 1)
      add(Severity::error, subj,
          std::to_string(c.contracting_labels.size()) +
              " contracting labels; a one-dimensional connection has exactly one");
    if (c.expanding_labels.size() != 1 || c.contracting_labels.size() != 1) continue;
    const auto& src = net.node(c.from);
    const auto& dst = net.node(c.to);
    const auto* e = src.find(c.expanding_label());
    const auto* k = dst.find(c.contracting_label());
    if (!e || e->klass != EigenClass::expanding)
      add(Severity::error, subj,
          "'" + c.expanding_label() + "' is not an expanding eigenvalue at " + c.from);
    else if (!used_expanding[c.from].insert(c.expanding_label()).second)
      add(Severity::error, subj,
          "expanding direction '" + c.expanding_label() + "' at " + c.from +
              " is shared by two connections");
    if (!k || k->klass != EigenClass::contracting)
      add(Severity::error, subj,
          "'" + c.contracting_label() + "' is not a contracting eigenvalue at " + c.to);
    else if (!used_contracting[c.to].insert(c.contracting_label()).second)
      add(Severity::error, subj,
          "contracting direction '" + c.contracting_label() + "' at " + c.to +
              " is shared by two connections");
    if (e && k) {
      try {
        (void)net.resolved_permutation(c);
      } catch (const NetworkError& err) {
        add(Severity::error, subj, err.what());
      }
    }
  }
  for (const auto& n : net.nodes)
    for (const auto& e : n.eigenvalues) {
      if (e.klass == EigenClass::expanding && !used_expanding[n.id].count(e.label))
        add(Severity::info, n.id, "expanding direction '" + e.label + "' carries no connection");
      if (e.klass == EigenClass::contracting && !used_contracting[n.id].count(e.label))
        add(Severity::info, n.id, "contracting direction '" + e.label + "' carries no connection");
    }

  // Every node on a cycle; the union of cycles connected.
  if (!net.nodes.empty()) {
    std::vector<Cycle> cycles;
    try {
      cycles = enumerate_cycles(net);
    } catch (const NetworkError& err) {
      add(Severity::warning, "network", err.what());
    }
    std::vector<int> component(net.nodes.size(), -1);
    std::function<int(int)> root = [&](int x) { return component[x] < 0 ? x : component[x] = root(component[x]); };
    std::vector<bool> on_cycle(net.nodes.size(), false);
    for (const auto& cyc : cycles)
      for (std::size_t i = 0; i < cyc.size(); ++i) {
        on_cycle[cyc[i]] = true;
        int a = root(static_cast<int>(cyc[i]));
        int b = root(static_cast<int>(cyc[(i + 1) % cyc.size()]));
        if (a != b) component[a] = b;
      }
    for (std::size_t i = 0; i < net.nodes.size(); ++i)
      if (!on_cycle[i] && !cycles.empty())
        add(Severity::error, net.nodes[i].id, "node lies on no heteroclinic cycle");
    std::set<int> roots;
    for (std::size_t i = 0; i < net.nodes.size(); ++i) roots.insert(root(static_cast<int>(i)));
    if (cycles.empty()) add(Severity::error, "network", "network contains no cycle");
    else if (roots.size() > 1) add(Severity::error, "network", "network is not connected");
  }
  return rep;
}

std::vector<Cycle> enumerate_cycles(const HeteroclinicNetwork& net, std::size_t cap) {
  const std::size_t n = net.nodes.size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t i = 0; i < n; ++i) succ[i] = net.successors(i);
  std::vector<Cycle> cycles;
  std::vector<std::size_t> stack;
  std::vector<bool> on_stack(n, false);
  // Each cycle is found once, from its smallest node.
  std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t start, std::size_t v) {
    for (std::size_t w : succ[v]) {
      if (w < start) continue;
      if (w == start) {
        cycles.push_back(stack);
        if (cycles.size() > cap)
          throw NetworkError("more than " + std::to_string(cap) + " simple cycles");
      } else if (!on_stack[w]) {
        on_stack[w] = true;
        stack.push_back(w);
        dfs(start, w);
        stack.pop_back();
        on_stack[w] = false;
      }
    }
  };
  for (std::size_t s = 0; s < n; ++s) {
    stack = {s};
    on_stack.assign(n, false);
    on_stack[s] = true;
    dfs(s, s);
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

GlobalClassification classify_global(const HeteroclinicNetwork& net, const std::string& node_id) {
  const std::size_t j = net.node_index(node_id);
  const Node& node = net.nodes[j];
  std::set<std::string> contracting, expanding;
  bool found = false;
  for (const auto& cyc : enumerate_cycles(net)) {
    auto it = std::find(cyc.begin(), cyc.end(), j);
    if (it == cyc.end()) continue;
    found = true;
    const std::size_t pos = static_cast<std::size_t>(it - cyc.begin());
    const auto& prev = net.nodes[cyc[(pos + cyc.size() - 1) % cyc.size()]].id;
    const auto& next = net.nodes[cyc[(pos + 1) % cyc.size()]].id;
    const auto& cin = net.connection(prev, node_id);
    const auto& cout = net.connection(node_id, next);
    for (const auto& l : cin.contracting_labels) contracting.insert(l);
    for (const auto& l : cout.expanding_labels) expanding.insert(l);
  }
  if (!found) throw NetworkError("node '" + node_id + "' lies on no cycle");
  GlobalClassification g;
  for (const auto& e : node.eigenvalues) {
    if (e.klass == EigenClass::radial) g.radial.push_back(e.label);
    else if (expanding.count(e.label)) g.expanding.push_back(e.label);
    else if (contracting.count(e.label)) g.contracting.push_back(e.label);
    else g.transverse.push_back(e.label);
  }
  return g;
}

std::vector<std::string> distribution_nodes(const HeteroclinicNetwork& net) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < net.nodes.size(); ++i)
    if (net.successors(i).size() >= 2) out.push_back(net.nodes[i].id);
  return out;
}

}  // namespace heteroswitch
