#include "heteroswitch/cusp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace heteroswitch {

using nlohmann::json;

const char* to_string(Orientation o) { return o == Orientation::thin ? "thin" : "thick"; }

bool PowerRegion::contains(std::span<const long double> x) const {
  const long double lhs = static_cast<long double>(a) * x[i];
  const long double rhs = std::pow(x[j], static_cast<long double>(alpha));
  return orientation == Orientation::thin ? lhs < rhs : lhs > rhs;
}

std::string describe(const PowerRegion& r) {
  std::ostringstream os;
  os << (r.orientation == Orientation::thin ? "V_" : "V^c_") << (r.i + 1) << (r.j + 1) << "(" << r.a
     << ", " << r.alpha << ")";
  return os.str();
}

LogConeSystem to_log_system(const std::vector<PowerRegion>& regions, std::size_t dimension) {
  LogConeSystem sys;
  sys.dimension = dimension;
  for (const auto& r : regions) {
    if (r.i == r.j) throw std::invalid_argument("region " + describe(r) + " has i == j");
    if (r.i >= dimension || r.j >= dimension)
      throw std::invalid_argument("region " + describe(r) + " does not fit dimension " +
                                  std::to_string(dimension));
    if (!(r.a > 0.0) || !(r.alpha > 0.0) || !std::isfinite(r.a) || !std::isfinite(r.alpha))
      throw std::invalid_argument("region " + describe(r) + " needs a > 0 and alpha > 0");
    LinearInequality row;
    row.coefficients.assign(dimension, 0.0);
    row.coefficients[r.i] = 1.0;
    row.coefficients[r.j] = -r.alpha;
    row.sense = r.orientation == Orientation::thin ? Sense::greater : Sense::less;
    row.constant = std::log(r.a);
    sys.rows.push_back(std::move(row));
  }
  return sys;
}

FeasibilityVerdict intersects_near_origin(const std::vector<PowerRegion>& regions,
                                          std::size_t dimension) {
  return decide_near_origin(to_log_system(regions, dimension));
}

bool PairwiseOutcome::intersects(Orientation o1, Orientation o2) const {
  return std::find(empty_combinations.begin(), empty_combinations.end(), std::make_pair(o1, o2)) ==
         empty_combinations.end();
}

PairwiseOutcome pairwise_rule(const PowerRegion& r1, const PowerRegion& r2) {
  using O = Orientation;
  PairwiseOutcome out;
  if (r1.i == r2.i && r1.j == r2.j) {
    out.relation = PairwiseOutcome::Relation::nested;
    if (r1.alpha == r2.alpha && r1.a == r2.a) {
      out.empty_combinations = {{O::thin, O::thick}, {O::thick, O::thin}};
    } else if (r1.alpha > r2.alpha || (r1.alpha == r2.alpha && r1.a > r2.a)) {
      // thin r1 lies inside thin r2
      out.empty_combinations = {{O::thin, O::thick}};
    } else {
      out.empty_combinations = {{O::thick, O::thin}};
    }
  } else if (r1.i == r2.j && r1.j == r2.i) {
    out.relation = PairwiseOutcome::Relation::opposed;
    const double product = r1.alpha * r2.alpha;
    if (product > 1.0) {
      out.empty_combinations = {{O::thin, O::thin}};
    } else if (product < 1.0) {
      out.empty_combinations = {{O::thick, O::thick}};
    } else {
      // eta_i - a1 eta_j > ln a and eta_j - a2 eta_i > ln b add up to 0 > ln a + a1 ln b.
      const double s = std::log(r1.a) + r1.alpha * std::log(r2.a);
      if (s >= 0.0) out.empty_combinations.push_back({O::thin, O::thin});
      if (s <= 0.0) out.empty_combinations.push_back({O::thick, O::thick});
    }
  }
  return out;
}

OracleResult sample_oracle(const std::vector<PowerRegion>& regions, std::size_t dimension,
                           double delta, std::size_t count, std::uint64_t seed, double span) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (count == 0) throw std::invalid_argument("sample count must be positive");
  OracleResult res;
  res.samples = count;
  if (regions.empty()) {
    res.hits = count;
    return res;
  }
  for (const auto& r : regions)
    if (r.i >= dimension || r.j >= dimension || r.i == r.j)
      throw std::invalid_argument("region " + describe(r) + " does not fit dimension");
  const double eta0 = -std::log(delta);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(eta0, span * eta0);
  // Membership a*x_i < x_j^alpha is tested as ln a - eta_i < -alpha*eta_j: the
  // same inequality, without underflow at eta ~ 10^2..10^3.
  std::vector<double> eta(dimension, 0.0), log_a(regions.size());
  for (std::size_t r = 0; r < regions.size(); ++r) log_a[r] = std::log(regions[r].a);
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t k = 0; k < dimension; ++k) eta[k] = u(rng);  // every axis, so streams do not depend on usage
    bool inside = true;
    for (std::size_t r = 0; r < regions.size() && inside; ++r) {
      const auto& reg = regions[r];
      const double lhs = log_a[r] - eta[reg.i];
      const double rhs = -reg.alpha * eta[reg.j];
      inside = reg.orientation == Orientation::thin ? lhs < rhs : lhs > rhs;
    }
    if (inside) ++res.hits;
  }
  return res;
}

CountGuarantee count_guarantee(const std::vector<PowerRegion>& regions, std::size_t dimension) {
  std::set<std::tuple<std::size_t, std::size_t, double, double>> distinct;
  for (const auto& r : regions) distinct.insert({r.i, r.j, r.a, r.alpha});
  CountGuarantee g;
  g.hypersurfaces = distinct.size();
  g.pigeonhole_bound = 1 + dimension * (dimension - 1) / 2;
  g.bound_exceeded = g.hypersurfaces >= g.pigeonhole_bound;
  g.all_to_all_impossible = dimension > 0 && g.hypersurfaces >= dimension;
  return g;
}

AllToAllResult all_to_all(const std::vector<PowerRegion>& boundaries, std::size_t dimension) {
  if (boundaries.size() > 20) throw std::invalid_argument("all_to_all accepts at most 20 regions");
  AllToAllResult res;
  const std::size_t n = boundaries.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<PowerRegion> regs = boundaries;
    std::vector<Orientation> assignment(n);
    for (std::size_t k = 0; k < n; ++k) {
      assignment[k] = (mask >> (n - 1 - k)) & 1 ? Orientation::thick : Orientation::thin;
      regs[k].orientation = assignment[k];
    }
    auto v = intersects_near_origin(regs, dimension);
    if (!v.intersects_near_origin) {
      res.all_intersect = false;
      res.failing_assignment = std::move(assignment);
      res.certificate = std::move(v.certificate);
      return res;
    }
  }
  return res;
}

namespace {

PowerRegion parse_region(const json& j, std::size_t index) {
  const std::string where = "region #" + std::to_string(index);
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  PowerRegion r;
  try {
    const int i = j.at("i").get<int>();
    const int jj = j.at("j").get<int>();
    if (i < 1 || jj < 1) throw std::invalid_argument(where + ": indices are 1-based");
    r.i = static_cast<std::size_t>(i - 1);
    r.j = static_cast<std::size_t>(jj - 1);
    r.a = j.value("a", 1.0);
    r.alpha = j.at("alpha").get<double>();
    const std::string o = j.value("orientation", std::string("thin"));
    if (o == "thin") r.orientation = Orientation::thin;
    else if (o == "thick") r.orientation = Orientation::thick;
    else throw std::invalid_argument(where + ": orientation must be thin or thick");
  } catch (const json::exception& e) {
    throw std::invalid_argument(where + ": " + e.what());
  }
  if (r.i == r.j) throw std::invalid_argument(where + ": i == j");
  if (!(r.a > 0.0) || !(r.alpha > 0.0))
    throw std::invalid_argument(where + ": a and alpha must be positive");
  return r;
}

}  // namespace

CuspDocument parse_cusp_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("cusp document is not valid JSON: ") + e.what());
  }
  CuspDocument out;
  const json* list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("regions")) throw std::invalid_argument("cusp document lacks 'regions'");
    list = &doc.at("regions");
    out.dimension = doc.value("dimension", std::size_t{0});
    out.name = doc.value("name", std::string{});
    if (doc.contains("expect")) out.expected = doc.at("expect").get<bool>();
  }
  if (!list->is_array()) throw std::invalid_argument("cusp regions must be a list");
  std::size_t index = 0;
  std::size_t needed = 0;
  for (const auto& j : *list) {
    out.regions.push_back(parse_region(j, index++));
    needed = std::max({needed, out.regions.back().i + 1, out.regions.back().j + 1});
  }
  if (out.dimension == 0) out.dimension = needed;
  if (out.dimension < needed)
    throw std::invalid_argument("cusp document dimension " + std::to_string(out.dimension) +
                                " is too small for its indices");
  return out;
}

CuspDocument load_cusp_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open cusp file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto doc = parse_cusp_document(ss.str());
  if (doc.name.empty()) doc.name = path.stem().string();
  return doc;
}

std::string serialize_cusps(const CuspDocument& doc) {
  json j;
  if (!doc.name.empty()) j["name"] = doc.name;
  j["dimension"] = doc.dimension;
  if (doc.expected) j["expect"] = *doc.expected;
  j["regions"] = json::array();
  for (const auto& r : doc.regions)
    j["regions"].push_back({{"i", r.i + 1},
                            {"j", r.j + 1},
                            {"a", r.a},
                            {"alpha", r.alpha},
                            {"orientation", to_string(r.orientation)}});
  return j.dump(2);
}

}  // namespace heteroswitch
