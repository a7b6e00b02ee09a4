#include "heteroswitch/report.hpp"

#include <iomanip>
#include <sstream>

namespace heteroswitch {

std::string join_path(const std::vector<std::string>& path) {
  std::string s;
  for (const auto& p : path) s += (s.empty() ? "" : "->") + p;
  return s;
}

namespace {

const char* severity_name(Severity s) {
  switch (s) {
    case Severity::info: return "info";
    case Severity::warning: return "warning";
    case Severity::error: return "error";
  }
  return "?";
}

Severity severity_from(const std::string& s) {
  if (s == "info") return Severity::info;
  if (s == "warning") return Severity::warning;
  if (s == "error") return Severity::error;
  throw std::invalid_argument("unknown severity " + s);
}

Verdict verdict_from(const std::string& s) {
  if (s == "no_switching") return Verdict::no_switching;
  if (s == "switching_possible_bounded") return Verdict::switching_possible_bounded;
  if (s == "inconclusive") return Verdict::inconclusive;
  throw std::invalid_argument("unknown verdict " + s);
}

Scope scope_from(const std::string& s) {
  if (s == "node") return Scope::node;
  if (s == "connection") return Scope::connection;
  if (s == "sequence") return Scope::sequence;
  if (s == "network") return Scope::network;
  throw std::invalid_argument("unknown scope " + s);
}

Json section_json(const CrossSection& s) {
  return {{"node", s.node},
          {"kind", s.kind == SectionKind::incoming ? "in" : "out"},
          {"neighbor", s.neighbor},
          {"axes", s.axes}};
}

CrossSection section_from(const Json& j) {
  return {j.at("node").get<std::string>(),
          j.at("kind").get<std::string>() == "in" ? SectionKind::incoming : SectionKind::outgoing,
          j.at("neighbor").get<std::string>(), j.at("axes").get<std::vector<std::string>>()};
}

Json region_json(const PowerRegion& r) {
  return {{"i", r.i + 1}, {"j", r.j + 1}, {"a", r.a}, {"alpha", r.alpha},
          {"orientation", to_string(r.orientation)}};
}

PowerRegion region_from(const Json& j) {
  return {j.at("i").get<std::size_t>() - 1, j.at("j").get<std::size_t>() - 1,
          j.at("a").get<double>(), j.at("alpha").get<double>(),
          j.at("orientation").get<std::string>() == "thin" ? Orientation::thin : Orientation::thick};
}

Json row_json(const LinearInequality& r) {
  return {{"coefficients", r.coefficients},
          {"sense", r.sense == Sense::greater ? ">" : "<"},
          {"constant", r.constant}};
}

LinearInequality row_from(const Json& j) {
  return {j.at("coefficients").get<std::vector<double>>(),
          j.at("sense").get<std::string>() == ">" ? Sense::greater : Sense::less,
          j.at("constant").get<double>()};
}

RegionSystem region_system_from(const Json& j) {
  RegionSystem s;
  s.section = section_from(j.at("section"));
  for (const auto& r : j.at("regions")) s.regions.push_back(region_from(r));
  for (const auto& r : j.at("general_rows")) s.general_rows.push_back(row_from(r));
  return s;
}

Json verdict_json(const SwitchingVerdict& v) {
  return {{"scope", to_string(v.scope)},
          {"subject", v.subject},
          {"verdict", to_string(v.verdict)},
          {"rationale", v.rationale}};
}

SwitchingVerdict switching_from(const Json& j) {
  return {scope_from(j.at("scope").get<std::string>()),
          j.at("subject").get<std::vector<std::string>>(),
          verdict_from(j.at("verdict").get<std::string>()), j.at("rationale").get<std::string>()};
}

}  // namespace

Json to_json(const FeasibilityVerdict& v) {
  Json j{{"intersects_near_origin", v.intersects_near_origin}};
  if (v.witness) j["witness"] = {{"base", v.witness->base}, {"direction", v.witness->direction}};
  if (v.certificate) {
    const auto& c = *v.certificate;
    j["certificate"] = {
        {"kind", c.kind == CertificateKind::empty_region ? "empty_region" : "no_positive_direction"},
        {"row_multipliers", c.row_multipliers},
        {"positivity_multipliers", c.positivity_multipliers},
        {"elimination_order", c.elimination_order},
        {"residual", c.residual}};
  }
  return j;
}

FeasibilityVerdict verdict_from_json(const Json& j) {
  FeasibilityVerdict v;
  v.intersects_near_origin = j.at("intersects_near_origin").get<bool>();
  if (j.contains("witness"))
    v.witness = WitnessRay{j.at("witness").at("base").get<std::vector<double>>(),
                           j.at("witness").at("direction").get<std::vector<double>>()};
  if (j.contains("certificate")) {
    const auto& jc = j.at("certificate");
    Certificate c;
    c.kind = jc.at("kind").get<std::string>() == "empty_region"
                 ? CertificateKind::empty_region
                 : CertificateKind::no_positive_direction;
    c.row_multipliers = jc.at("row_multipliers").get<std::vector<double>>();
    c.positivity_multipliers = jc.at("positivity_multipliers").get<std::vector<double>>();
    c.elimination_order = jc.at("elimination_order").get<std::vector<std::size_t>>();
    c.residual = jc.at("residual").get<double>();
    v.certificate = std::move(c);
  }
  return v;
}

Json to_json(const LogAffineMap& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.matrix.rows(); ++r) {
    std::vector<double> row;
    for (Eigen::Index c = 0; c < m.matrix.cols(); ++c) row.push_back(m.matrix(r, c));
    rows.push_back(row);
  }
  std::vector<double> off(m.offset.data(), m.offset.data() + m.offset.size());
  return {{"domain_axes", m.domain_axes}, {"range_axes", m.range_axes}, {"matrix", rows},
          {"offset", off}};
}

Json to_json(const RegionSystem& s) {
  Json j{{"section", section_json(s.section)}, {"regions", Json::array()},
         {"general_rows", Json::array()}};
  for (const auto& r : s.regions) j["regions"].push_back(region_json(r));
  for (const auto& r : s.general_rows) j["general_rows"].push_back(row_json(r));
  return j;
}

Json to_json(const NetworkReport& r) {
  Json j;
  j["network"] = r.network;
  j["N"] = r.N;
  j["headline"] = r.headline;
  j["findings"] = r.findings;
  j["valid"] = r.validation.ok();
  j["validation"] = Json::array();
  for (const auto& f : r.validation.findings)
    j["validation"].push_back(
        {{"severity", severity_name(f.severity)}, {"subject", f.subject}, {"message", f.message}});
  j["distribution_nodes"] = r.distribution;
  j["node_verdicts"] = Json::array();
  for (const auto& v : r.node_verdicts) j["node_verdicts"].push_back(verdict_json(v));
  j["connection_verdicts"] = Json::array();
  for (const auto& v : r.connection_verdicts) j["connection_verdicts"].push_back(verdict_json(v));
  j["depth_bounds"] = Json::array();
  for (const auto& d : r.depth_bounds) {
    Json jd{{"start", d.start}, {"k", d.k}, {"sum_at_k", d.sum_at_k}, {"N", d.N},
            {"cycle_bound", d.cycle_bound}, {"sequences", Json::array()}};
    for (const auto& s : d.sequences)
      jd["sequences"].push_back({{"distribution_nodes", s.distribution_nodes},
                                 {"path", s.path},
                                 {"partial_sums", s.partial_sums},
                                 {"k", s.k}});
    j["depth_bounds"].push_back(std::move(jd));
  }
  j["returns"] = Json::array();
  for (const auto& rd : r.returns) {
    Json jr{{"node", rd.node}, {"entered_from", rd.entered_from},
            {"predetermined", rd.predetermined}, {"first_exits_feasible", rd.first_exits_feasible},
            {"returns", Json::array()}};
    for (const auto& [path, exits] : rd.returns)
      jr["returns"].push_back({{"path", path}, {"feasible_exits", exits}});
    j["returns"].push_back(std::move(jr));
  }
  j["departures"] = Json::array();
  for (const auto& d : r.departures) {
    Json jd{{"section", section_json(d.section)}, {"nonempty", d.nonempty},
            {"images", Json::array()}, {"witness_regions", Json::array()}};
    for (const auto& img : d.images) jd["images"].push_back(to_json(img));
    for (const auto& w : d.witness_regions) jd["witness_regions"].push_back(region_json(w));
    j["departures"].push_back(std::move(jd));
  }
  j["finite_witness"] = r.finite_witness ? Json(*r.finite_witness) : Json(nullptr);
  return j;
}

NetworkReport report_from_json(const Json& j) {
  NetworkReport r;
  r.network = j.at("network").get<std::string>();
  r.N = j.at("N").get<int>();
  r.headline = j.at("headline").get<std::string>();
  r.findings = j.at("findings").get<std::vector<std::string>>();
  for (const auto& f : j.at("validation"))
    r.validation.findings.push_back({severity_from(f.at("severity").get<std::string>()),
                                     f.at("subject").get<std::string>(),
                                     f.at("message").get<std::string>()});
  r.distribution = j.at("distribution_nodes").get<std::vector<std::string>>();
  for (const auto& v : j.at("node_verdicts")) r.node_verdicts.push_back(switching_from(v));
  for (const auto& v : j.at("connection_verdicts")) r.connection_verdicts.push_back(switching_from(v));
  for (const auto& jd : j.at("depth_bounds")) {
    DepthBound d;
    d.start = jd.at("start").get<std::string>();
    d.k = jd.at("k").get<int>();
    d.sum_at_k = jd.at("sum_at_k").get<int>();
    d.N = jd.at("N").get<int>();
    d.cycle_bound = jd.at("cycle_bound").get<int>();
    for (const auto& s : jd.at("sequences"))
      d.sequences.push_back({s.at("distribution_nodes").get<std::vector<std::string>>(),
                             s.at("path").get<std::vector<std::string>>(),
                             s.at("partial_sums").get<std::vector<int>>(), s.at("k").get<int>()});
    r.depth_bounds.push_back(std::move(d));
  }
  for (const auto& jr : j.at("returns")) {
    ReturnDeterminism rd;
    rd.node = jr.at("node").get<std::string>();
    rd.entered_from = jr.at("entered_from").get<std::string>();
    rd.predetermined = jr.at("predetermined").get<bool>();
    rd.first_exits_feasible = jr.at("first_exits_feasible").get<int>();
    for (const auto& x : jr.at("returns"))
      rd.returns.emplace_back(x.at("path").get<std::vector<std::string>>(),
                              x.at("feasible_exits").get<std::vector<std::string>>());
    r.returns.push_back(std::move(rd));
  }
  for (const auto& jd : j.at("departures")) {
    DepartureSet d;
    d.section = section_from(jd.at("section"));
    d.nonempty = jd.at("nonempty").get<bool>();
    for (const auto& img : jd.at("images")) d.images.push_back(region_system_from(img));
    for (const auto& w : jd.at("witness_regions")) d.witness_regions.push_back(region_from(w));
    r.departures.push_back(std::move(d));
  }
  if (!j.at("finite_witness").is_null())
    r.finite_witness = j.at("finite_witness").get<std::vector<std::string>>();
  return r;
}

std::string render_text(const NetworkReport& r) {
  std::ostringstream os;
  os << "network " << r.network << " (N=" << r.N << ")\n";
  os << r.headline << "\n";
  for (const auto& f : r.validation.findings)
    if (f.severity != Severity::info)
      os << "  " << severity_name(f.severity) << " " << f.subject << ": " << f.message << "\n";
  if (!r.validation.ok()) return os.str();
  for (const auto& f : r.findings) os << "  - " << f << "\n";
  os << "distribution nodes:";
  for (const auto& d : r.distribution) os << " " << d;
  os << "\nnode criteria:\n";
  for (const auto& v : r.node_verdicts)
    os << "  " << v.subject[0] << ": " << to_string(v.verdict) << " (" << v.rationale << ")\n";
  os << "connection criteria:\n";
  for (const auto& v : r.connection_verdicts)
    os << "  " << join_path(v.subject) << ": " << to_string(v.verdict) << " (" << v.rationale
       << ")\n";
  os << "depth bounds:\n";
  for (const auto& d : r.depth_bounds) {
    os << "  " << d.start << ": k=" << d.k << " (sum " << d.sum_at_k << " >= N=" << d.N
       << "), cycle bound " << d.cycle_bound << "\n";
    for (const auto& s : d.sequences) {
      os << "    " << join_path(s.path) << "  sums";
      for (int v : s.partial_sums) os << " " << v;
      os << "\n";
    }
  }
  if (!r.returns.empty()) {
    os << "exits after one return:\n";
    for (const auto& rd : r.returns) {
      os << "  entering " << rd.node << " from " << rd.entered_from << ": "
         << (rd.predetermined ? "predetermined" : "not predetermined") << " ("
         << rd.returns.size() << " feasible returns)\n";
    }
  }
  if (!r.departures.empty()) {
    os << "departure sets:\n";
    for (const auto& d : r.departures) {
      os << "  " << d.section.name() << ": "
         << (d.nonempty ? "nonempty" : "empty near the origin");
      if (d.nonempty) {
        os << ", e.g.";
        for (const auto& w : d.witness_regions) os << " " << describe(w);
      }
      os << "\n";
    }
  }
  return os.str();
}

Json to_json(const std::vector<PathVerdict>& paths) {
  Json j{{"paths", Json::array()}};
  std::size_t feasible = 0;
  for (const auto& p : paths) {
    feasible += p.verdict.intersects_near_origin ? 1 : 0;
    j["paths"].push_back({{"path", p.path}, {"verdict", to_json(p.verdict)}});
  }
  j["total"] = paths.size();
  j["feasible"] = feasible;
  return j;
}

std::string render_text(const std::vector<PathVerdict>& paths) {
  std::ostringstream os;
  std::size_t feasible = 0;
  for (const auto& p : paths) {
    feasible += p.verdict.intersects_near_origin ? 1 : 0;
    os << (p.verdict.intersects_near_origin ? "followable     " : "not followable ")
       << join_path(p.path) << "\n";
  }
  os << feasible << " of " << paths.size() << " paths followable\n";
  return os.str();
}

}  // namespace heteroswitch
