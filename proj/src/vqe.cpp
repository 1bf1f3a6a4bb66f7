#include "ucc/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace ucc {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kCurvature = 0.9;
constexpr double kMaxStep = 0.5;  // largest single-parameter change per line search

struct Point {
  std::vector<double> x;
  double f = 0.0;
  std::vector<double> g;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

class Objective {
 public:
  Objective(const CompiledAnsatz& ansatz, const SectorOperator& h, const VqeConfig& cfg)
      : ansatz_(ansatz), h_(h), cfg_(cfg) {}

  Point eval(std::vector<double> x) const {
    Point p;
    p.g.assign(x.size(), 0.0);
    if (cfg_.gradient == GradientMode::Analytic) {
      p.f = ansatz_.energy(x, h_, p.g);
    } else {
      p.f = ansatz_.energy(x, h_);
      p.g = finite_difference_gradient(ansatz_, h_, x, cfg_.fd_step);
    }
    p.x = std::move(x);
    return p;
  }

 private:
  const CompiledAnsatz& ansatz_;
  const SectorOperator& h_;
  const VqeConfig& cfg_;
};

std::vector<double> along(const std::vector<double>& x, const std::vector<double>& p, double alpha) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + alpha * p[i];
  return out;
}

// Minimiser of the cubic interpolating (a, fa, da) and (b, fb, db), kept
// inside the interval; falls back to bisection.
double cubic_step(double a, double fa, double da, double b, double fb, double db) {
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  double t = 0.5 * (a + b);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = db - da + 2.0 * d2;
    if (denom != 0.0) t = b - (b - a) * (db + d2 - d1) / denom;
  }
  const double lo = std::min(a, b), hi = std::max(a, b), w = hi - lo;
  if (!(t > lo + 0.1 * w && t < hi - 0.1 * w)) t = 0.5 * (a + b);
  return t;
}

// Strong Wolfe line search. Returns nothing when no acceptable step exists.
std::optional<Point> line_search(const Objective& obj, const Point& x0, const std::vector<double>& p) {
  const double dphi0 = dot(x0.g, p);
  if (!(dphi0 < 0.0)) return std::nullopt;
  const double pmax = inf_norm(p);
  const double alpha_max = pmax > 0.0 ? std::max(1.0, kMaxStep / pmax) * 4.0 : 1.0;
  double alpha = pmax > kMaxStep ? kMaxStep / pmax : 1.0;

  struct Trial {
    double alpha;
    Point pt;
    double dphi;
  };
  auto trial = [&](double a) {
    Point pt = obj.eval(along(x0.x, p, a));
    const double d = dot(pt.g, p);
    return Trial{a, std::move(pt), d};
  };
  auto sufficient = [&](const Trial& t) { return t.pt.f <= x0.f + kArmijo * t.alpha * dphi0; };
  auto curvature = [&](const Trial& t) { return std::abs(t.dphi) <= -kCurvature * dphi0; };

  auto zoom = [&](Trial lo, Trial hi) -> std::optional<Point> {
    for (int k = 0; k < 30; ++k) {
      const double a = cubic_step(lo.alpha, lo.pt.f, lo.dphi, hi.alpha, hi.pt.f, hi.dphi);
      Trial t = trial(a);
      if (!sufficient(t) || t.pt.f >= lo.pt.f) {
        hi = std::move(t);
      } else {
        if (curvature(t)) return std::move(t.pt);
        if (t.dphi * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = std::move(t);
      }
      if (std::abs(hi.alpha - lo.alpha) < 1e-14 * std::max(1.0, lo.alpha)) break;
    }
    // Accept the best sufficient-decrease point if curvature never held.
    if (lo.alpha > 0.0 && sufficient(lo)) return std::move(lo.pt);
    return std::nullopt;
  };

  Trial prev{0.0, x0, dphi0};
  for (int k = 0; k < 30; ++k) {
    Trial t = trial(alpha);
    if (!sufficient(t) || (k > 0 && t.pt.f >= prev.pt.f)) return zoom(std::move(prev), std::move(t));
    if (curvature(t)) return std::move(t.pt);
    if (t.dphi >= 0.0) return zoom(std::move(t), std::move(prev));
    prev = std::move(t);
    alpha = std::min(2.0 * alpha, alpha_max);
    if (prev.alpha >= alpha_max) return std::move(prev.pt);
  }
  return std::move(prev.pt);
}

}  // namespace

void VqeConfig::validate() const {
  if (!(energy_tol > 0.0 && grad_tol > 0.0 && fd_step > 0.0) || max_iter <= 0)
    throw std::invalid_argument("VqeConfig: tolerances and iteration limit must be positive");
}

double energy(const GeneratorSet& gens, std::span<const double> params, const SectorOperator& hamiltonian,
              const DeterminantSector& sector) {
  return CompiledAnsatz(gens, sector).energy(params, hamiltonian);
}

std::vector<double> initial_parameters(const GeneratorSet& gens, const SpinOrbitalHamiltonian& h, VqeInit init) {
  if (init == VqeInit::Zeros) return std::vector<double>(gens.param_count(), 0.0);
  // First-order state: |0> + t2 a+a a+b a_j a_i |0> = |0> - theta E|0>.
  std::vector<double> p = amplitudes_to_params(gens, mp2(h).amplitudes);
  for (double& x : p) x = -x;
  return p;
}

std::vector<double> finite_difference_gradient(const CompiledAnsatz& ansatz, const SectorOperator& hamiltonian,
                                               std::span<const double> params, double step) {
  std::vector<double> x(params.begin(), params.end()), g(params.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double x0 = x[k];
    x[k] = x0 + step;
    const double fp = ansatz.energy(x, hamiltonian);
    x[k] = x0 - step;
    const double fm = ansatz.energy(x, hamiltonian);
    x[k] = x0;
    g[k] = (fp - fm) / (2.0 * step);
  }
  return g;
}

VqeResult minimize(const CompiledAnsatz& ansatz, const SectorOperator& hamiltonian, const VqeConfig& cfg,
                   std::span<const double> start) {
  cfg.validate();
  const std::size_t n = ansatz.generators().param_count();
  if (!start.empty() && start.size() != n) throw std::invalid_argument("minimize: start vector length mismatch");
  const Objective obj(ansatz, hamiltonian, cfg);

  VqeResult res;
  Point cur = obj.eval(start.empty() ? std::vector<double>(n, 0.0) : std::vector<double>(start.begin(), start.end()));
  res.energy_trace.push_back(cur.f);

  auto finish = [&](bool converged) {
    res.params = cur.x;
    res.energy = cur.f;
    res.grad_norm = inf_norm(cur.g);
    res.converged = converged;
    return res;
  };
  if (n == 0 || inf_norm(cur.g) < cfg.grad_tol) return finish(true);

  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    Eigen::Map<const Eigen::VectorXd> g(cur.g.data(), n);
    Eigen::VectorXd dir = -(hinv * g);
    if (dir.dot(g) >= 0.0) {
      hinv.setIdentity();
      dir = -g;
    }
    std::vector<double> p(dir.data(), dir.data() + n);
    auto next = line_search(obj, cur, p);
    if (!next && !hinv.isIdentity()) {
      hinv.setIdentity();
      p.assign(cur.g.size(), 0.0);
      for (std::size_t k = 0; k < n; ++k) p[k] = -cur.g[k];
      next = line_search(obj, cur, p);
    }
    if (!next) {
      // No further decrease representable: converged only if already flat.
      return finish(inf_norm(cur.g) < cfg.grad_tol);
    }

    Eigen::VectorXd s(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = next->x[k] - cur.x[k];
      y[k] = next->g[k] - cur.g[k];
    }
    const double sy = s.dot(y);
    if (sy > 1e-16 * s.norm() * y.norm() && sy > 0.0) {
      if (!scaled) {
        hinv *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = hinv * y;
      hinv -= rho * (hy * s.transpose() + s * hy.transpose());
      hinv += (rho * rho * y.dot(hy) + rho) * (s * s.transpose());
    }

    const double df = next->f - cur.f;
    cur = std::move(*next);
    res.iterations = it;
    res.energy_trace.push_back(cur.f);
    if (std::abs(df) < cfg.energy_tol && inf_norm(cur.g) < cfg.grad_tol) return finish(true);
  }
  return finish(false);
}

VqeResult minimize(const GeneratorSet& gens, const SectorOperator& hamiltonian, const DeterminantSector& sector,
                   const VqeConfig& cfg, std::span<const double> start) {
  return minimize(CompiledAnsatz(gens, sector), hamiltonian, cfg, start);
}

}  // namespace ucc
