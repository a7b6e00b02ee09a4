#include "heteroswitch/fields.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace heteroswitch {

Eigen::VectorXd VectorField::rhs(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g(dimension);
  growth(x, g);
  return x.cwiseProduct(g);
}

Eigen::MatrixXd VectorField::jacobian(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g(dimension);
  Eigen::MatrixXd dg(dimension, dimension);
  growth(x, g);
  growth_jacobian(x, dg);
  Eigen::MatrixXd j = x.asDiagonal() * dg;
  j.diagonal() += g;
  return j;
}

Eigen::MatrixXd VectorField::numeric_jacobian(const Eigen::VectorXd& x, double h) const {
  Eigen::MatrixXd j(dimension, dimension);
  for (int c = 0; c < dimension; ++c) {
    Eigen::VectorXd xp = x, xm = x;
    xp(c) += h;
    xm(c) -= h;
    j.col(c) = (rhs(xp) - rhs(xm)) / (2.0 * h);
  }
  return j;
}

const NodeEmbedding& VectorField::embedding(const std::string& id) const {
  for (const auto& n : nodes)
    if (n.id == id) return n;
  throw FieldError("field " + name + " has no node '" + id + "'");
}

std::vector<std::string> field_names() {
  return {"kirk_silber", "bowtie", "house", "ac_network", "r6_simplex", "rsp_replicator",
          "rspls_replicator"};
}

std::string fixture_for_field(const std::string& name) {
  if (name == "rsp_replicator") return "rsp";
  if (name == "rspls_replicator") return "rspls";
  const auto names = field_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw FieldError("unknown field '" + name + "'");
  return name;
}

namespace {

int axis_of_x_label(const std::string& label, int dimension) {
  if (label.size() < 2 || label[0] != 'x') throw FieldError("label '" + label + "' is not x<k>");
  int k = 0;
  try {
    k = std::stoi(label.substr(1));
  } catch (const std::exception&) {
    throw FieldError("label '" + label + "' is not x<k>");
  }
  if (k < 1 || k > dimension) throw FieldError("label '" + label + "' outside the ambient space");
  return k - 1;
}

void set_supports(VectorField& f, const HeteroclinicNetwork& net) {
  for (const auto& c : net.connections) {
    const auto& a = f.embedding(c.from).position;
    const auto& b = f.embedding(c.to).position;
    std::vector<int> s;
    for (int k = 0; k < f.dimension; ++k)
      if (a(k) != 0.0 || b(k) != 0.0) s.push_back(k);
    f.connection_support[c.from + "->" + c.to] = s;
  }
}

VectorField lotka_volterra(const std::string& name, const HeteroclinicNetwork& net) {
  const int n = net.ambient_dimension;
  VectorField f;
  f.name = name;
  f.dimension = n;
  Eigen::MatrixXd M = Eigen::MatrixXd::Constant(n, n, std::nan(""));
  for (const auto& node : net.nodes) {
    const Eigenvalue* radial = nullptr;
    for (const auto& e : node.eigenvalues)
      if (e.klass == EigenClass::radial) radial = &e;
    if (!radial) throw FieldError("node " + node.id + " declares no radial direction");
    if (std::abs(radial->value + 1.0) > 1e-12)
      throw FieldError("node " + node.id + ": radial eigenvalue must be -1");
    const int j = axis_of_x_label(radial->label, n);
    NodeEmbedding emb{node.id, Eigen::VectorXd::Zero(n), {}};
    emb.position(j) = 1.0;
    for (const auto& e : node.eigenvalues) {
      const int l = axis_of_x_label(e.label, n);
      emb.label_axis[e.label] = l;
      M(l, j) = l == j ? 1.0 : 1.0 - e.value;
    }
    f.nodes.push_back(std::move(emb));
  }
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      if (std::isnan(M(r, c)))
        throw FieldError("no node on axis " + std::to_string(c + 1) + " to fix the interaction matrix");
      f.parameters["M_" + std::to_string(r + 1) + "_" + std::to_string(c + 1)] = M(r, c);
    }
  f.growth = [M](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g = Eigen::VectorXd::Ones(x.size()) - M * x;
  };
  f.growth_jacobian = [M](const Eigen::VectorXd&, Eigen::MatrixXd& dg) { dg = -M; };
  set_supports(f, net);
  return f;
}

Eigen::Matrix3d rsp_payoff(double eps) {
  Eigen::Matrix3d a;
  a << eps, 1, -1, -1, eps, 1, 1, -1, eps;
  return a;
}

VectorField rsp_replicator(const HeteroclinicNetwork& net, const std::map<std::string, double>& p) {
  const double ex = p.count("eps_x") ? p.at("eps_x") : -0.2;
  const double ey = p.count("eps_y") ? p.at("eps_y") : -0.3;
  for (const auto& [k, v] : p)
    if (k != "eps_x" && k != "eps_y") throw FieldError("rsp_replicator has no parameter '" + k + "'");
  if (!(std::abs(ex) < 1.0) || !(std::abs(ey) < 1.0))
    throw FieldError("rsp_replicator needs |eps_x|, |eps_y| < 1");
  const Eigen::Matrix3d A = rsp_payoff(ex);
  const Eigen::Matrix3d B = rsp_payoff(ey);
  VectorField f;
  f.name = "rsp_replicator";
  f.dimension = 6;
  f.parameters = {{"eps_x", ex}, {"eps_y", ey}};
  f.simplex_blocks = {{0, 1, 2}, {3, 4, 5}};
  const std::string S = "RSP";
  for (const auto& node : net.nodes) {
    if (node.id.size() != 2 || S.find(node.id[0]) == std::string::npos ||
        S.find(node.id[1]) == std::string::npos)
      throw FieldError("rsp_replicator expects node ids like 'RS', got '" + node.id + "'");
    NodeEmbedding emb{node.id, Eigen::VectorXd::Zero(6), {}};
    emb.position(static_cast<int>(S.find(node.id[0]))) = 1.0;
    emb.position(3 + static_cast<int>(S.find(node.id[1]))) = 1.0;
    for (int k = 0; k < 3; ++k) {
      emb.label_axis[std::string("x") + S[k]] = k;
      emb.label_axis[std::string("y") + S[k]] = 3 + k;
    }
    f.nodes.push_back(std::move(emb));
  }
  // g = payoff - mean payoff, plus (1 - sum)(1 - mean payoff) off the simplex.
  f.growth = [A, B](const Eigen::VectorXd& z, Eigen::VectorXd& g) {
    const Eigen::Vector3d x = z.head<3>(), y = z.tail<3>();
    const Eigen::Vector3d ay = A * y, bx = B * x;
    const double phi = x.dot(ay), psi = y.dot(bx);
    const double sx = 1.0 - x.sum(), sy = 1.0 - y.sum();
    g.resize(6);
    g.head<3>() = (ay.array() - phi + sx * (1.0 - phi)).matrix();
    g.tail<3>() = (bx.array() - psi + sy * (1.0 - psi)).matrix();
  };
  f.growth_jacobian = [A, B](const Eigen::VectorXd& z, Eigen::MatrixXd& dg) {
    const Eigen::Vector3d x = z.head<3>(), y = z.tail<3>();
    const Eigen::Vector3d ay = A * y, bx = B * x;
    const Eigen::RowVector3d xa = x.transpose() * A, yb = y.transpose() * B;
    const double phi = x.dot(ay), psi = y.dot(bx);
    const double tx = 2.0 - x.sum(), ty = 2.0 - y.sum();
    dg.setZero(6, 6);
    for (int k = 0; k < 3; ++k)
      for (int m = 0; m < 3; ++m) {
        dg(k, m) = -ay(m) * tx - (1.0 - phi);
        dg(k, 3 + m) = A(k, m) - xa(m) * tx;
        dg(3 + k, 3 + m) = -bx(m) * ty - (1.0 - psi);
        dg(3 + k, m) = B(k, m) - yb(m) * ty;
      }
  };
  set_supports(f, net);
  return f;
}

Eigen::MatrixXd rspls_default_payoff() {
  // i beats i+1 and i+2 (mod 5); magnitudes generic.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(5, 5);
  for (int k = 0; k < 5; ++k)
    for (int i = 0; i < 5; ++i) {
      if (k == i) continue;
      const int d = ((i - k) % 5 + 5) % 5;
      const bool wins = d == 1 || d == 2;
      a(k, i) = wins ? 0.8 + 0.1 * ((3 * k + i) % 5) : -(1.4 + 0.1 * ((k + 2 * i) % 5));
    }
  return a;
}

VectorField rspls_replicator(const HeteroclinicNetwork& net, const std::map<std::string, double>& p) {
  Eigen::MatrixXd A = rspls_default_payoff();
  for (const auto& [key, v] : p) {
    int k = 0, i = 0;
    if (std::sscanf(key.c_str(), "payoff_%d_%d", &k, &i) != 2 || k < 1 || k > 5 || i < 1 || i > 5 ||
        k == i)
      throw FieldError("rspls_replicator has no parameter '" + key + "'");
    A(k - 1, i - 1) = v;
  }
  VectorField f;
  f.name = "rspls_replicator";
  f.dimension = 5;
  for (int k = 0; k < 5; ++k)
    for (int i = 0; i < 5; ++i)
      if (k != i) f.parameters["payoff_" + std::to_string(k + 1) + "_" + std::to_string(i + 1)] = A(k, i);
  f.simplex_blocks = {{0, 1, 2, 3, 4}};
  for (const auto& node : net.nodes) {
    const Eigenvalue* radial = nullptr;
    for (const auto& e : node.eigenvalues)
      if (e.klass == EigenClass::radial) radial = &e;
    if (!radial) throw FieldError("node " + node.id + " declares no radial direction");
    NodeEmbedding emb{node.id, Eigen::VectorXd::Zero(5), {}};
    emb.position(axis_of_x_label(radial->label, 5)) = 1.0;
    for (const auto& e : node.eigenvalues) emb.label_axis[e.label] = axis_of_x_label(e.label, 5);
    f.nodes.push_back(std::move(emb));
  }
  f.growth = [A](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    const Eigen::VectorXd ax = A * x;
    const double phi = x.dot(ax);
    g = (ax.array() - phi + (1.0 - x.sum()) * (1.0 - phi)).matrix();
  };
  f.growth_jacobian = [A](const Eigen::VectorXd& x, Eigen::MatrixXd& dg) {
    const Eigen::VectorXd ax = A * x;
    const Eigen::VectorXd pm = ax + A.transpose() * x;  // gradient of x.Ax
    const double phi = x.dot(ax);
    const double t = 2.0 - x.sum();
    dg = A;
    for (int m = 0; m < x.size(); ++m) dg.col(m).array() -= pm(m) * t + (1.0 - phi);
  };
  set_supports(f, net);
  return f;
}

}  // namespace

std::vector<std::string> eigenvalue_mismatches(const VectorField& field,
                                               const HeteroclinicNetwork& net,
                                               const std::string& node, double tol) {
  const auto& emb = field.embedding(node);
  const Eigen::MatrixXd J = field.jacobian(emb.position);
  Eigen::EigenSolver<Eigen::MatrixXd> es(J, false);
  std::vector<std::complex<double>> spectrum;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) spectrum.push_back(es.eigenvalues()(k));
  std::vector<bool> used(spectrum.size(), false);
  std::vector<std::string> bad;
  for (const auto& e : net.node(node).eigenvalues) {
    // Diagonal entry of the label's axis must carry the eigenvalue too, which
    // ties each value to its direction and not only to the spectrum.
    auto it = emb.label_axis.find(e.label);
    const bool axis_ok = it != emb.label_axis.end() &&
                         std::abs(J(it->second, it->second) - e.value) <= tol * std::max(1.0, std::abs(e.value));
    std::size_t best = spectrum.size();
    double best_err = tol * std::max(1.0, std::abs(e.value));
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
      if (used[k]) continue;
      const double err = std::abs(spectrum[k] - std::complex<double>(e.value, 0.0));
      if (err <= best_err) {
        best_err = err;
        best = k;
      }
    }
    if (best == spectrum.size() || !axis_ok) bad.push_back(e.label);
    else used[best] = true;
  }
  return bad;
}

VectorField build_field(const std::string& name, const HeteroclinicNetwork& net,
                        const std::map<std::string, double>& params) {
  VectorField f;
  if (name == "rsp_replicator") {
    f = rsp_replicator(net, params);
  } else if (name == "rspls_replicator") {
    f = rspls_replicator(net, params);
  } else {
    (void)fixture_for_field(name);  // throws on unknown names
    if (!params.empty()) throw FieldError(name + " takes its coefficients from the network");
    f = lotka_volterra(name, net);
  }
  for (const auto& node : net.nodes) {
    const auto& x = f.embedding(node.id).position;
    if (f.rhs(x).cwiseAbs().maxCoeff() > 1e-12)
      throw FieldError(name + ": node " + node.id + " is not an equilibrium");
    const auto bad = eigenvalue_mismatches(f, net, node.id);
    if (!bad.empty()) {
      std::string labels;
      for (const auto& b : bad) labels += " " + b;
      throw FieldError(name + ": Jacobian at " + node.id + " does not match declared eigenvalues:" +
                       labels);
    }
  }
  return f;
}

}  // namespace heteroswitch
