#include "heteroswitch/map_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace heteroswitch {

std::size_t CrossSection::axis(const std::string& label) const {
  auto it = std::find(axes.begin(), axes.end(), label);
  if (it == axes.end()) throw NetworkError("section " + name() + " has no axis '" + label + "'");
  return static_cast<std::size_t>(it - axes.begin());
}

std::string CrossSection::name() const {
  return "H_" + node + (kind == SectionKind::incoming ? "^{in," : "^{out,") + neighbor + "}";
}

CrossSection incoming_section(const HeteroclinicNetwork& net, const std::string& from,
                              const std::string& node) {
  const auto& c = net.connection(from, node);
  return {node, SectionKind::incoming, from, net.incoming_axes(c)};
}

CrossSection outgoing_section(const HeteroclinicNetwork& net, const std::string& node,
                              const std::string& to) {
  const auto& c = net.connection(node, to);
  return {node, SectionKind::outgoing, to, net.outgoing_axes(c)};
}

LogAffineMap LogAffineMap::identity(const std::vector<std::string>& axes) {
  const auto n = static_cast<Eigen::Index>(axes.size());
  return {Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n), axes, axes};
}

Eigen::VectorXd LogAffineMap::apply(const Eigen::VectorXd& eta) const {
  return matrix * eta + offset;
}

LogAffineMap LogAffineMap::after(const LogAffineMap& first) const {
  if (first.range_axes != domain_axes)
    throw std::invalid_argument("composing log-affine maps over mismatched sections");
  return {matrix * first.matrix, matrix * first.offset + offset, first.domain_axes, range_axes};
}

LogAffineMap LogAffineMap::inverse() const {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(matrix);
  if (!lu.isInvertible()) throw std::logic_error("log-affine map is not invertible");
  Eigen::MatrixXd inv = lu.inverse();
  return {inv, -inv * offset, range_axes, domain_axes};
}

std::vector<double> LocalMap::apply(std::span<const double> in) const {
  if (in.size() != domain.axes.size())
    throw std::invalid_argument("local map input has wrong dimension");
  const double w = in[domain.axis(w_label)];
  std::vector<double> out(range.axes.size(), 0.0);
  for (const auto& [label, exponent] : exponents)
    out[range.axis(label)] = in[domain.axis(label)] * std::pow(w, exponent);
  out[range.axis(v_label)] = std::pow(w, c1 / e1);
  return out;
}

LogAffineMap LocalMap::log_form() const {
  const auto n = static_cast<Eigen::Index>(domain.axes.size());
  LogAffineMap m{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n), domain.axes, range.axes};
  const auto w = static_cast<Eigen::Index>(domain.axis(w_label));
  for (const auto& [label, exponent] : exponents) {
    const auto r = static_cast<Eigen::Index>(range.axis(label));
    m.matrix(r, static_cast<Eigen::Index>(domain.axis(label))) = 1.0;
    m.matrix(r, w) += exponent;
  }
  m.matrix(static_cast<Eigen::Index>(range.axis(v_label)), w) = c1 / e1;
  return m;
}

LocalMap local_map(const HeteroclinicNetwork& net, const std::string& i, const std::string& j,
                   const std::string& k) {
  const auto& cin = net.connection(i, j);
  const auto& cout = net.connection(j, k);
  const Node& node = net.node(j);
  LocalMap m;
  m.incoming = i;
  m.node = j;
  m.outgoing = k;
  m.domain = incoming_section(net, i, j);
  m.range = outgoing_section(net, j, k);
  m.w_label = cout.expanding_label();
  m.v_label = cin.contracting_label();
  const auto* w = node.find(m.w_label);
  const auto* v = node.find(m.v_label);
  if (!w || !(w->value > 0.0))
    throw NetworkError("local map at " + j + ": '" + m.w_label + "' is not an unstable direction");
  if (!v || !(v->value < 0.0))
    throw NetworkError("local map at " + j + ": '" + m.v_label + "' is not a stable direction");
  m.e1 = w->value;
  m.c1 = -v->value;
  for (const auto& label : m.domain.axes) {
    if (label == m.w_label) continue;
    m.exponents.emplace_back(label, -node.find(label)->value / m.e1);
  }
  // Range axes are the domain axes with w exchanged for v.
  auto expected = m.domain.axes;
  std::erase(expected, m.w_label);
  expected.push_back(m.v_label);
  auto got = m.range.axes;
  std::sort(expected.begin(), expected.end());
  std::sort(got.begin(), got.end());
  if (expected != got)
    throw NetworkError("local map at " + j + ": sections " + m.domain.name() + " and " +
                       m.range.name() + " do not match");
  return m;
}

LogAffineMap global_map(const HeteroclinicNetwork& net, const std::string& j, const std::string& k) {
  const auto& c = net.connection(j, k);
  const auto out = outgoing_section(net, j, k);
  const auto in = incoming_section(net, j, k);
  const auto n = static_cast<Eigen::Index>(out.axes.size());
  LogAffineMap m{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n), out.axes, in.axes};
  for (const auto& p : net.resolved_permutation(c)) {
    const auto r = static_cast<Eigen::Index>(in.axis(p.in_label));
    m.matrix(r, static_cast<Eigen::Index>(out.axis(p.out_label))) = 1.0;
    m.offset(r) = -std::log(p.rescale);
  }
  return m;
}

LogConeSystem RegionSystem::log_system() const {
  LogConeSystem sys = to_log_system(regions, section.axes.size());
  for (const auto& r : general_rows) sys.rows.push_back(r);
  return sys;
}

RegionSystem domain_C(const HeteroclinicNetwork& net, const std::string& i, const std::string& j,
                      const std::string& k) {
  const LocalMap m = local_map(net, i, j, k);
  RegionSystem sys{m.domain, {}, {}};
  const std::size_t w = m.domain.axis(m.w_label);
  for (const auto& [label, exponent] : m.exponents) {
    if (exponent >= 0.0) continue;  // stable directions impose nothing
    sys.regions.push_back({m.domain.axis(label), w, 1.0, -exponent, Orientation::thin});
  }
  return sys;
}

RegionSystem image_F(const HeteroclinicNetwork& net, const std::string& i, const std::string& j,
                     const std::string& k) {
  const LocalMap m = local_map(net, i, j, k);
  const Node& node = net.node(j);
  RegionSystem sys{m.range, {}, {}};
  const std::size_t v = m.range.axis(m.v_label);
  for (const auto& label : m.range.axes) {
    if (label == m.v_label) continue;
    const double lambda = node.find(label)->value;
    if (lambda >= 0.0) continue;
    // z'_l = z_l * w^(-lambda/e1) = z_l * v^(-lambda/c1) with z_l < 1.
    sys.regions.push_back({m.range.axis(label), v, 1.0, -lambda / m.c1, Orientation::thin});
  }
  return sys;
}

std::optional<PowerRegion> as_power_region(const LinearInequality& row) {
  std::vector<std::size_t> nz;
  for (std::size_t k = 0; k < row.coefficients.size(); ++k)
    if (row.coefficients[k] != 0.0) nz.push_back(k);
  if (nz.size() != 2) return std::nullopt;
  double p = row.coefficients[nz[0]];
  double q = row.coefficients[nz[1]];
  if ((p > 0.0) == (q > 0.0)) return std::nullopt;
  std::size_t ip = nz[0], iq = nz[1];
  if (p < 0.0) {
    std::swap(p, q);
    std::swap(ip, iq);
  }
  // p*eta_ip + q*eta_iq (>|<) c  with p > 0 > q
  const double c = row.constant / p;
  return PowerRegion{ip, iq, std::exp(c), -q / p,
                     row.sense == Sense::greater ? Orientation::thin : Orientation::thick};
}

namespace {

void add_positivity_rows(const LogAffineMap& m, std::vector<LinearInequality>& rows) {
  for (Eigen::Index r = 0; r < m.matrix.rows(); ++r) {
    LinearInequality row;
    row.coefficients.resize(static_cast<std::size_t>(m.matrix.cols()));
    for (Eigen::Index c = 0; c < m.matrix.cols(); ++c)
      row.coefficients[static_cast<std::size_t>(c)] = m.matrix(r, c);
    row.sense = Sense::greater;
    row.constant = -m.offset(r);
    const bool duplicate = std::any_of(rows.begin(), rows.end(), [&](const LinearInequality& o) {
      return o.coefficients == row.coefficients && o.constant == row.constant;
    });
    if (!duplicate) rows.push_back(std::move(row));
  }
}

}  // namespace

PathTransfer compose_path(const HeteroclinicNetwork& net, const std::vector<std::string>& path) {
  if (path.size() < 2) throw NetworkError("a path needs at least one connection");
  for (std::size_t t = 0; t + 1 < path.size(); ++t)
    if (!net.connection_index(path[t], path[t + 1]))
      throw NetworkError("broken path: no connection " + path[t] + "->" + path[t + 1]);

  PathTransfer pt;
  pt.path = path;
  pt.start = incoming_section(net, path[0], path[1]);
  pt.map = LogAffineMap::identity(pt.start.axes);
  std::vector<LinearInequality> rows;
  add_positivity_rows(pt.map, rows);  // the unit box of the starting section
  for (std::size_t t = 1; t + 1 < path.size(); ++t) {
    const LocalMap lm = local_map(net, path[t - 1], path[t], path[t + 1]);
    pt.map = lm.log_form().after(pt.map);
    add_positivity_rows(pt.map, rows);  // inside the domain of the local map
    pt.map = global_map(net, path[t], path[t + 1]).after(pt.map);
    add_positivity_rows(pt.map, rows);  // lands in the next incoming section
  }
  pt.end = incoming_section(net, path[path.size() - 2], path.back());
  pt.system.dimension = pt.start.axes.size();
  pt.system.rows = rows;

  pt.pulled_back.section = pt.start;
  for (const auto& row : rows) {
    const bool implied_by_box =
        std::all_of(row.coefficients.begin(), row.coefficients.end(),
                    [](double v) { return v >= 0.0; }) &&
        row.constant <= 0.0;
    if (implied_by_box) continue;
    if (auto r = as_power_region(row)) pt.pulled_back.regions.push_back(*r);
    else pt.pulled_back.general_rows.push_back(row);
  }
  return pt;
}

FeasibilityVerdict followable(const HeteroclinicNetwork& net, const std::vector<std::string>& path) {
  return decide_near_origin(compose_path(net, path).system);
}

DepartureSet departure_set(const HeteroclinicNetwork& net, const std::string& j,
                           const std::string& k) {
  DepartureSet out;
  out.section = outgoing_section(net, j, k);
  const std::size_t jj = net.node_index(j);
  for (std::size_t p : net.predecessors(jj)) out.images.push_back(image_F(net, net.nodes[p].id, j, k));
  for (const auto& img : out.images)
    if (img.regions.empty()) return out;  // some image is the whole section

  // Outside every image: pick one violated region per image.
  std::vector<std::size_t> choice(out.images.size(), 0);
  while (true) {
    std::vector<PowerRegion> regs;
    for (std::size_t m = 0; m < choice.size(); ++m)
      regs.push_back(out.images[m].regions[choice[m]].complement());
    if (intersects_near_origin(regs, out.section.axes.size()).intersects_near_origin) {
      out.nonempty = true;
      out.witness_regions = std::move(regs);
      return out;
    }
    std::size_t m = choice.size();
    while (m > 0) {
      --m;
      if (++choice[m] < out.images[m].regions.size()) break;
      choice[m] = 0;
      if (m == 0) return out;
    }
    if (choice.empty()) return out;
  }
}

}  // namespace heteroswitch
