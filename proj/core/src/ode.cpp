#include "heteroswitch/ode.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "heteroswitch/map_algebra.hpp"

namespace heteroswitch {

namespace odeint = boost::numeric::odeint;

void SimConfig::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
  };
  positive(node_radius, "node_radius");
  positive(max_time, "max_time");
  positive(abs_tol, "abs_tol");
  positive(rel_tol, "rel_tol");
  positive(shell, "shell");
  positive(departure, "departure");
  positive(sample_dt, "sample_dt");
  if (ensemble < 1) throw std::invalid_argument("ensemble must be at least 1");
  if (max_visits < 1) throw std::invalid_argument("max_visits must be at least 1");
  if (departure <= 2.0 * node_radius) throw std::invalid_argument("departure must exceed 2*node_radius");
}

namespace {

using State = std::vector<double>;
using Stepper = odeint::runge_kutta_dopri5<State>;
using Dense = odeint::result_of::make_dense_output<Stepper>::type;

// Log-coordinate system over the positive coordinates of x0.
class LogRun {
 public:
  LogRun(const VectorField& f, const Eigen::VectorXd& x0, const SimConfig& c)
      : field_(f), x_(x0), g_(f.dimension),
        dense_(odeint::make_dense_output(c.abs_tol, c.rel_tol, Stepper())) {
    if (x0.size() != f.dimension) throw std::invalid_argument("initial state has wrong dimension");
    State u;
    for (int i = 0; i < f.dimension; ++i) {
      if (x0(i) < 0.0 || !std::isfinite(x0(i)))
        throw std::invalid_argument("initial state must be finite and nonnegative");
      if (x0(i) > 0.0) {
        active_.push_back(i);
        u.push_back(std::log(x0(i)));
      }
    }
    u_ = u;
    if (!active_.empty()) dense_.initialize(u, 0.0, std::min(0.01, c.sample_dt));
  }

  [[nodiscard]] bool frozen() const { return active_.empty(); }
  [[nodiscard]] double time() const { return frozen() ? INFINITY : dense_.current_time(); }
  [[nodiscard]] double step_size() const { return dense_.current_time_step(); }

  void step() {
    auto sys = [this](const State& u, State& du, double) {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(field_.dimension);
      for (std::size_t k = 0; k < active_.size(); ++k) x(active_[k]) = std::exp(u[k]);
      field_.growth(x, g_);
      du.resize(u.size());
      for (std::size_t k = 0; k < active_.size(); ++k) du[k] = g_(active_[k]);
    };
    dense_.do_step(sys);
    stepped_ = true;
  }

  // Dense-output state at t in the last step interval (or x0 when frozen).
  Eigen::VectorXd at(double t) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(field_.dimension);
    if (frozen() || !stepped_) return x_;
    dense_.calc_state(t, u_);
    for (std::size_t k = 0; k < active_.size(); ++k) x(active_[k]) = std::exp(u_[k]);
    return x;
  }

  [[nodiscard]] double log_at(double t, int axis) {
    const auto it = std::find(active_.begin(), active_.end(), axis);
    if (it == active_.end()) return -INFINITY;
    dense_.calc_state(t, u_);
    return u_[static_cast<std::size_t>(it - active_.begin())];
  }

 private:
  const VectorField& field_;
  Eigen::VectorXd x_;
  Eigen::VectorXd g_;
  std::vector<int> active_;
  State u_;
  Dense dense_;
  bool stepped_ = false;
};

constexpr double kMinStep = 1e-12;

}  // namespace

Trajectory integrate(const VectorField& field, const Eigen::VectorXd& x0, const SimConfig& config,
                     const SampleObserver& observer, bool keep) {
  config.validate();
  Trajectory traj;
  LogRun run(field, x0, config);
  std::size_t steps = 0;
  for (long n = 0;; ++n) {
    const double t = static_cast<double>(n) * config.sample_dt;
    if (t > config.max_time + 1e-12) break;
    try {
      while (!run.frozen() && run.time() < t) {
        run.step();
        if (++steps > config.max_steps) {
          traj.underflow = true;
          traj.message = "step budget exhausted at t=" + std::to_string(run.time());
          return traj;
        }
        if (run.step_size() < kMinStep) {
          traj.underflow = true;
          traj.message = "step size underflow at t=" + std::to_string(run.time());
          return traj;
        }
      }
    } catch (const std::exception& e) {
      traj.underflow = true;
      traj.message = std::string("integration failed: ") + e.what();
      return traj;
    }
    const Eigen::VectorXd x = run.at(t);
    if (keep) {
      traj.times.push_back(t);
      traj.states.push_back(x);
    }
    if (observer && !observer(t, x)) break;
  }
  return traj;
}

std::optional<SectionHit> integrate_to_level(const VectorField& field, const Eigen::VectorXd& x0,
                                             int axis, double level, const SimConfig& config) {
  config.validate();
  if (axis < 0 || axis >= field.dimension) throw std::invalid_argument("axis out of range");
  if (!(level > 0.0)) throw std::invalid_argument("level must be positive");
  const double target = std::log(level);
  if (x0(axis) >= level) return SectionHit{0.0, x0};
  LogRun run(field, x0, config);
  if (run.frozen() || x0(axis) == 0.0) return std::nullopt;
  double t0 = 0.0;
  std::size_t steps = 0;
  while (run.time() < config.max_time) {
    t0 = run.time();
    run.step();
    if (++steps > config.max_steps || run.step_size() < kMinStep) return std::nullopt;
    double lo = t0, hi = run.time();
    if (run.log_at(hi, axis) < target) continue;
    while (hi - lo > 1e-14 * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      const double v = run.log_at(mid, axis);
      if (std::abs(v - target) < 1e-12) {
        lo = hi = mid;
        break;
      }
      (v < target ? lo : hi) = mid;
    }
    return SectionHit{hi, run.at(hi)};
  }
  return std::nullopt;
}

VectorField linear_node_field(const HeteroclinicNetwork& net, const std::string& node) {
  const Node& nd = net.node(node);
  VectorField f;
  f.name = "linear_" + node;
  f.dimension = static_cast<int>(nd.eigenvalues.size());
  Eigen::VectorXd lambda(f.dimension);
  NodeEmbedding emb{node, Eigen::VectorXd::Zero(f.dimension), {}};
  for (int k = 0; k < f.dimension; ++k) {
    lambda(k) = nd.eigenvalues[static_cast<std::size_t>(k)].value;
    emb.label_axis[nd.eigenvalues[static_cast<std::size_t>(k)].label] = k;
    f.parameters["lambda_" + nd.eigenvalues[static_cast<std::size_t>(k)].label] = lambda(k);
  }
  f.nodes.push_back(std::move(emb));
  f.growth = [lambda](const Eigen::VectorXd&, Eigen::VectorXd& g) { g = lambda; };
  f.growth_jacobian = [lambda](const Eigen::VectorXd&, Eigen::MatrixXd& dg) {
    dg = Eigen::MatrixXd::Zero(lambda.size(), lambda.size());
  };
  return f;
}

double ExponentFit::relative_error() const {
  return std::abs(fitted - expected) / std::max(std::abs(expected), 1e-12);
}

double LocalMapFit::worst_relative_error() const {
  double w = 0.0;
  for (const auto& f : fits) w = std::max(w, f.relative_error());
  return w;
}

namespace {

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return sxy / sxx;
}

}  // namespace

LocalMapFit local_map_regression(const HeteroclinicNetwork& net, const std::string& incoming,
                                 const std::string& node, const std::string& outgoing, int samples,
                                 std::uint64_t seed) {
  if (samples < 3) throw std::invalid_argument("regression needs at least 3 samples");
  const LocalMap lm = local_map(net, incoming, node, outgoing);
  const VectorField field = linear_node_field(net, node);
  const auto& axes = field.nodes.front().label_axis;
  const int w = axes.at(lm.w_label), v = axes.at(lm.v_label);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_w(-6.0, -2.0), log_z(-3.0, -1.0);
  SimConfig cfg;
  cfg.max_time = 1e4;
  cfg.abs_tol = 1e-12;
  cfg.rel_tol = 1e-12;

  std::vector<double> lw, lv;
  std::map<std::string, std::vector<double>> ratio;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x0(field.dimension);
    for (int k = 0; k < field.dimension; ++k) x0(k) = std::pow(10.0, log_z(rng));
    x0(v) = 1.0;
    x0(w) = std::pow(10.0, log_w(rng));
    const auto hit = integrate_to_level(field, x0, w, 1.0, cfg);
    if (!hit) throw std::runtime_error("trajectory did not reach the outgoing section");
    lw.push_back(std::log(x0(w)));
    lv.push_back(std::log(hit->state(v)));
    for (const auto& [label, e] : lm.exponents) {
      const int a = axes.at(label);
      ratio[label].push_back(std::log(hit->state(a) / x0(a)));
    }
  }
  LocalMapFit fit{incoming, node, outgoing, {}};
  fit.fits.push_back({"principal", lm.principal_exponent(), slope(lw, lv)});
  for (const auto& [label, e] : lm.exponents) fit.fits.push_back({label, e, slope(lw, ratio[label])});
  return fit;
}

}  // namespace heteroswitch
