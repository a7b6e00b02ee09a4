#include "heteroswitch/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "heteroswitch/acceptance.hpp"
#include "heteroswitch/cusp.hpp"
#include "heteroswitch/fields.hpp"
#include "heteroswitch/itinerary.hpp"
#include "heteroswitch/report.hpp"
#include "heteroswitch/switching.hpp"

#ifndef HETEROSWITCH_FIXTURE_DIR
#define HETEROSWITCH_FIXTURE_DIR "fixtures"
#endif

namespace heteroswitch::cli {

namespace fs = std::filesystem;

fs::path fixture_dir() {
  if (const char* env = std::getenv("HETEROSWITCH_FIXTURES"); env && *env) return env;
  return HETEROSWITCH_FIXTURE_DIR;
}

fs::path resolve_input(const std::string& name) {
  const fs::path p(name);
  std::vector<fs::path> tries = {p, fs::path(name + ".json")};
  const fs::path dir = fixture_dir();
  if (p.is_relative()) {
    // "fixtures/rsp" should also resolve against a relocated fixture directory.
    fs::path tail = p;
    if (!p.empty() && p.begin()->string() == "fixtures") tail = p.lexically_relative("fixtures");
    tries.push_back(dir / tail);
    tries.push_back(dir / fs::path(tail.string() + ".json"));
  }
  tries.push_back(dir / "cusps" / p.filename());
  for (const auto& t : tries)
    if (fs::is_regular_file(t)) return t;
  throw UsageError("cannot find input '" + name + "' (fixture directory " + dir.string() + ")");
}

namespace {

enum class Format { text, json };

struct Common {
  std::string format = "text";
  bool json = false;
  [[nodiscard]] Format resolved() const { return json || format == "json" ? Format::json : Format::text; }
};

void add_format(CLI::App* cmd, Common& c) {
  auto* f = cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  auto* j = cmd->add_flag("--json", c.json, "Same as --format json");
  f->excludes(j);
}

int analyze(const std::string& input, const Common& c, std::ostream& out) {
  const auto nets = load_networks_file(resolve_input(input));
  if (c.resolved() == Format::json) {
    if (nets.size() == 1) out << to_json(network_report(nets.front())).dump(2) << '\n';
    else {
      Json all = Json::array();
      for (const auto& n : nets) all.push_back(to_json(network_report(n)));
      out << all.dump(2) << '\n';
    }
  } else {
    for (std::size_t k = 0; k < nets.size(); ++k) {
      if (k) out << '\n';
      out << render_text(network_report(nets[k]));
    }
  }
  return 0;
}

int paths(const std::string& input, const std::string& start, const std::string& from_connection, int depth,
          const Common& c, std::ostream& out) {
  const auto net = load_network_file(resolve_input(input));
  std::vector<PathVerdict> found;
  if (!from_connection.empty()) {
    const auto arrow = from_connection.find("->");
    if (arrow == std::string::npos) throw UsageError("--connection expects FROM->TO");
    found = enumerate_from_connection(net, from_connection.substr(0, arrow), from_connection.substr(arrow + 2), depth);
  } else {
    if (start.empty()) throw UsageError("paths needs --start or --connection");
    (void)net.node_index(start);
    found = enumerate_followable(net, start, depth);
  }
  if (c.resolved() == Format::json) out << to_json(found).dump(2) << '\n';
  else out << render_text(found);
  return 0;
}

int cusps(const std::string& input, const Common& c, std::ostream& out) {
  const auto doc = load_cusp_file(resolve_input(input));
  const auto system = to_log_system(doc.regions, doc.dimension);
  const auto v = decide_near_origin(system);
  const auto guarantee = count_guarantee(doc.regions, doc.dimension);
  if (c.resolved() == Format::json) {
    Json j;
    j["name"] = doc.name;
    j["dimension"] = doc.dimension;
    j["verdict"] = to_json(v);
    j["hypersurfaces"] = guarantee.hypersurfaces;
    j["pigeonhole_bound"] = guarantee.pigeonhole_bound;
    if (doc.expected) j["expected"] = *doc.expected;
    out << j.dump(2) << '\n';
    return 0;
  }
  out << (doc.name.empty() ? input : doc.name) << " in R^" << doc.dimension << '\n';
  for (const auto& r : doc.regions) out << "  " << describe(r) << '\n';
  out << "intersect near origin: " << (v.intersects_near_origin ? "true" : "false") << '\n';
  if (v.certificate) out << describe(*v.certificate, system) << '\n';
  if (v.witness) {
    out << "witness ray: eta = base + t*(";
    for (std::size_t k = 0; k < v.witness->direction.size(); ++k)
      out << (k ? ", " : "") << v.witness->direction[k];
    out << ")\n";
  }
  if (doc.expected && *doc.expected != v.intersects_near_origin) out << "note: document expects " << *doc.expected << '\n';
  return 0;
}

void apply_config(const fs::path& file, SimConfig& cfg, std::map<std::string, double>& params) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot read config " + file.string());
  const Json j = Json::parse(in);
  for (const auto& [key, value] : j.items()) {
    if (key == "node_radius") cfg.node_radius = value.get<double>();
    else if (key == "max_time") cfg.max_time = value.get<double>();
    else if (key == "abs_tol") cfg.abs_tol = value.get<double>();
    else if (key == "rel_tol") cfg.rel_tol = value.get<double>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else if (key == "ensemble") cfg.ensemble = value.get<int>();
    else if (key == "shell") cfg.shell = value.get<double>();
    else if (key == "max_visits") cfg.max_visits = value.get<int>();
    else if (key == "departure") cfg.departure = value.get<double>();
    else if (key == "sample_dt") cfg.sample_dt = value.get<double>();
    else if (key == "threads") cfg.threads = value.get<unsigned>();
    else if (key == "start") cfg.start = value.get<std::string>();
    else if (key == "parameters") params = value.get<std::map<std::string, double>>();
    else throw UsageError("unknown config key '" + key + "'");
  }
}

struct SimulateArgs {
  std::string field;
  std::string config;
  std::string out;
  std::string timeseries;
  std::string sections;
  std::string start;
  int samples = -1;
  long long seed = -1;
};

int simulate(const SimulateArgs& a, const Common& c, std::ostream& out) {
  const auto names = field_names();
  if (std::find(names.begin(), names.end(), a.field) == names.end()) {
    std::string all;
    for (const auto& n : names) all += " " + n;
    throw UsageError("unknown field '" + a.field + "'; choose one of" + all);
  }
  SimConfig cfg;
  std::map<std::string, double> params;
  if (!a.config.empty()) apply_config(a.config, cfg, params);
  if (a.samples >= 0) cfg.ensemble = a.samples;
  if (a.seed >= 0) cfg.seed = static_cast<std::uint64_t>(a.seed);
  if (!a.start.empty()) cfg.start = a.start;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto net = load_network_file(resolve_input(fixture_for_field(a.field)));
  const auto field = build_field(a.field, net, params);
  if (cfg.start) (void)net.node_index(*cfg.start);
  const auto res = empirical_switching_test(field, net, cfg);

  if (!a.out.empty()) {
    std::ofstream csv(a.out);
    if (!csv) throw UsageError("cannot write " + a.out);
    csv << "member,event_index,event_type,node_edge,time\n" << std::setprecision(10);
    for (const auto& m : res.members)
      for (std::size_t k = 0; k < m.itinerary.events.size(); ++k) {
        const auto& e = m.itinerary.events[k];
        csv << m.member << ',' << k << ',' << to_string(e.type) << ',' << e.where() << ',' << e.time << '\n';
      }
  }
  if (!a.sections.empty()) {
    std::ofstream csv(a.sections);
    if (!csv) throw UsageError("cannot write " + a.sections);
    csv << "member,node,time";
    for (int k = 0; k < field.dimension; ++k) csv << ",x" << k + 1;
    csv << '\n' << std::setprecision(10);
    for (const auto& m : res.members)
      for (const auto& e : m.itinerary.events) {
        if (e.type != EventType::entered_node) continue;
        csv << m.member << ',' << e.node << ',' << e.time;
        for (int k = 0; k < e.state.size(); ++k) csv << ',' << e.state(k);
        csv << '\n';
      }
  }
  if (!a.timeseries.empty()) {
    const auto& m0 = res.members.front();
    const auto x0 = seed_near_connection(field, net, m0.seeded_from, m0.seeded_to, cfg, 0);
    const auto tr = integrate(field, x0, cfg);
    std::ofstream csv(a.timeseries);
    if (!csv) throw UsageError("cannot write " + a.timeseries);
    csv << "time";
    for (int k = 0; k < field.dimension; ++k) csv << ",x" << k + 1;
    csv << '\n' << std::setprecision(10);
    for (std::size_t s = 0; s < tr.times.size(); ++s) {
      csv << tr.times[s];
      for (int k = 0; k < field.dimension; ++k) csv << ',' << tr.states[s](k);
      csv << '\n';
    }
  }

  std::map<std::string, int> terminals;
  for (const auto& m : res.members) ++terminals[to_string(m.itinerary.terminal)];
  if (c.resolved() == Format::json) {
    Json j;
    j["field"] = a.field;
    j["members"] = res.members.size();
    j["seed"] = cfg.seed;
    j["terminals"] = terminals;
    Json counts = Json::array();
    for (const auto& [path, n] : res.path_counts) counts.push_back({{"path", path}, {"count", n}});
    j["paths"] = counts;
    j["violations"] = res.violations;
    out << j.dump(2) << '\n';
    return 0;
  }
  out << a.field << ": " << res.members.size() << " trajectories, seed " << cfg.seed << '\n';
  for (const auto& [t, n] : terminals) out << "  " << t << ": " << n << '\n';
  out << "observed paths:\n";
  for (const auto& [path, n] : res.path_counts) out << "  " << std::setw(5) << n << "  " << join_path(path) << '\n';
  out << "violations: " << res.violations.size() << '\n';
  for (const auto& v : res.violations) out << "  " << join_path(v) << '\n';
  return 0;
}

int verify(const std::vector<int>& only, int samples, const Common& c, std::ostream& out) {
  acceptance::Options o;
  o.fixtures = fixture_dir();
  if (samples > 0) o.ensemble = samples;
  const auto results = acceptance::run(o, only);
  bool ok = true;
  Json j = Json::array();
  for (const auto& r : results) {
    ok = ok && r.passed;
    if (c.resolved() == Format::json)
      j.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
    else
      out << acceptance::format(r) << '\n';
  }
  if (c.resolved() == Format::json) out << j.dump(2) << '\n';
  else out << (ok ? "all criteria passed" : "some criteria failed") << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite switching near heteroclinic networks"};
  app.name(args.empty() ? "heteroswitch" : args.front());
  app.require_subcommand(1);

  Common common;
  std::string input, start, connection;
  int depth = 3;

  auto* an = app.add_subcommand("analyze", "Switching report for a network");
  an->add_option("network", input, "Network file or fixture name")->required();
  add_format(an, common);

  auto* pa = app.add_subcommand("paths", "Followable paths of a given length");
  pa->add_option("network", input, "Network file or fixture name")->required();
  pa->add_option("--start", start, "Start node");
  pa->add_option("--connection", connection, "Start connection FROM->TO");
  pa->add_option("--depth", depth, "Number of connections")->check(CLI::Range(1, 30));
  add_format(pa, common);

  auto* cu = app.add_subcommand("cusps", "Do the listed cusps intersect near the origin?");
  cu->add_option("file", input, "Cusp document")->required();
  add_format(cu, common);

  SimulateArgs sim;
  auto* si = app.add_subcommand("simulate", "Ensemble simulation of a built-in field");
  si->add_option("field", sim.field, "Field name")->required();
  si->add_option("--samples", sim.samples, "Ensemble size")->check(CLI::PositiveNumber);
  si->add_option("--seed", sim.seed, "Random seed")->check(CLI::NonNegativeNumber);
  si->add_option("--config", sim.config, "JSON simulation settings");
  si->add_option("--out", sim.out, "Itinerary CSV");
  si->add_option("--timeseries", sim.timeseries, "Time series CSV of member 0");
  si->add_option("--sections", sim.sections, "Node-entry points CSV");
  si->add_option("--start", sim.start, "Seed near connections leaving this node");
  add_format(si, common);

  std::vector<int> only;
  int verify_samples = 0;
  auto* ve = app.add_subcommand("verify", "Run the acceptance suite");
  ve->add_option("--only", only, "Criterion ids")->delimiter(',')->check(CLI::Range(1, 10));
  ve->add_option("--samples", verify_samples, "Ensemble size for the simulation criterion")
      ->check(CLI::PositiveNumber);
  add_format(ve, common);

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());  // CLI11 consumes from the back
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (an->parsed()) return analyze(input, common, out);
    if (pa->parsed()) return paths(input, start, connection, depth, common, out);
    if (cu->parsed()) return cusps(input, common, out);
    if (si->parsed()) return simulate(sim, common, out);
    if (ve->parsed()) return verify(only, verify_samples, common, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace heteroswitch::cli
