#include "ucc/cc_reference.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>
#include <vector>

namespace ucc {

namespace {

// Intermediates of the Stanton-Gauss formulation over occupied (i..) and
// virtual (a..) blocks. Virtual a lives at spin orbital no + a.
class CcsdEquations {
 public:
  CcsdEquations(const SpinOrbitalHamiltonian& h, const Amplitudes& t)
      : h_(h), t_(t), no_(h.n_occ), nv_(h.n_virt()) {}

  CcResiduals residuals(bool singles) {
    build_tau();
    build_f();
    build_w();
    CcResiduals r;
    r.r1 = singles ? t1_residual() : Eigen::MatrixXd::Zero(no_, nv_);
    r.r2 = t2_residual();
    return r;
  }

 private:
  double V(int p, int q, int r, int s) const { return h_.v_anti(p, q, r, s); }
  double f(int p, int q) const { return h_.fock(p, q); }
  int v(int a) const { return no_ + a; }
  double t1(int i, int a) const { return t_.t1(i, a); }
  double t2(int i, int j, int a, int b) const { return t_.t2(i, j, a, b); }

  void build_tau() {
    tau_ = Tensor4(no_, no_, nv_, nv_);
    taus_ = Tensor4(no_, no_, nv_, nv_);
    for (int i = 0; i < no_; ++i)
      for (int j = 0; j < no_; ++j)
        for (int a = 0; a < nv_; ++a)
          for (int b = 0; b < nv_; ++b) {
            const double x = t1(i, a) * t1(j, b) - t1(i, b) * t1(j, a);
            tau_(i, j, a, b) = t2(i, j, a, b) + x;
            taus_(i, j, a, b) = t2(i, j, a, b) + 0.5 * x;
          }
  }

  void build_f() {
    fae_ = Eigen::MatrixXd::Zero(nv_, nv_);
    fmi_ = Eigen::MatrixXd::Zero(no_, no_);
    fme_ = Eigen::MatrixXd::Zero(no_, nv_);
    for (int a = 0; a < nv_; ++a)
      for (int e = 0; e < nv_; ++e) {
        double s = (a == e) ? 0.0 : f(v(a), v(e));
        for (int m = 0; m < no_; ++m) {
          s -= 0.5 * f(m, v(e)) * t1(m, a);
          for (int ff = 0; ff < nv_; ++ff) s += t1(m, ff) * V(m, v(a), v(ff), v(e));
          for (int n = 0; n < no_; ++n)
            for (int ff = 0; ff < nv_; ++ff) s -= 0.5 * taus_(m, n, a, ff) * V(m, n, v(e), v(ff));
        }
        fae_(a, e) = s;
      }
    for (int m = 0; m < no_; ++m)
      for (int i = 0; i < no_; ++i) {
        double s = (m == i) ? 0.0 : f(m, i);
        for (int e = 0; e < nv_; ++e) {
          s += 0.5 * t1(i, e) * f(m, v(e));
          for (int n = 0; n < no_; ++n) {
            s += t1(n, e) * V(m, n, i, v(e));
            for (int ff = 0; ff < nv_; ++ff) s += 0.5 * taus_(i, n, e, ff) * V(m, n, v(e), v(ff));
          }
        }
        fmi_(m, i) = s;
      }
    for (int m = 0; m < no_; ++m)
      for (int e = 0; e < nv_; ++e) {
        double s = f(m, v(e));
        for (int n = 0; n < no_; ++n)
          for (int ff = 0; ff < nv_; ++ff) s += t1(n, ff) * V(m, n, v(e), v(ff));
        fme_(m, e) = s;
      }
  }

  void build_w() {
    wmnij_ = Tensor4(no_, no_, no_, no_);
    for (int m = 0; m < no_; ++m)
      for (int n = 0; n < no_; ++n)
        for (int i = 0; i < no_; ++i)
          for (int j = 0; j < no_; ++j) {
            double s = V(m, n, i, j);
            for (int e = 0; e < nv_; ++e) {
              s += t1(j, e) * V(m, n, i, v(e)) - t1(i, e) * V(m, n, j, v(e));
              for (int ff = 0; ff < nv_; ++ff) s += 0.25 * tau_(i, j, e, ff) * V(m, n, v(e), v(ff));
            }
            wmnij_(m, n, i, j) = s;
          }
    wabef_ = Tensor4(nv_, nv_, nv_, nv_);
    for (int a = 0; a < nv_; ++a)
      for (int b = 0; b < nv_; ++b)
        for (int e = 0; e < nv_; ++e)
          for (int ff = 0; ff < nv_; ++ff) {
            double s = V(v(a), v(b), v(e), v(ff));
            for (int m = 0; m < no_; ++m) {
              s -= t1(m, b) * V(v(a), m, v(e), v(ff)) - t1(m, a) * V(v(b), m, v(e), v(ff));
              for (int n = 0; n < no_; ++n) s += 0.25 * tau_(m, n, a, b) * V(m, n, v(e), v(ff));
            }
            wabef_(a, b, e, ff) = s;
          }
    wmbej_ = Tensor4(no_, nv_, nv_, no_);
    for (int m = 0; m < no_; ++m)
      for (int b = 0; b < nv_; ++b)
        for (int e = 0; e < nv_; ++e)
          for (int j = 0; j < no_; ++j) {
            double s = V(m, v(b), v(e), j);
            for (int ff = 0; ff < nv_; ++ff) s += t1(j, ff) * V(m, v(b), v(e), v(ff));
            for (int n = 0; n < no_; ++n) {
              s -= t1(n, b) * V(m, n, v(e), j);
              for (int ff = 0; ff < nv_; ++ff)
                s -= (0.5 * t2(j, n, ff, b) + t1(j, ff) * t1(n, b)) * V(m, n, v(e), v(ff));
            }
            wmbej_(m, b, e, j) = s;
          }
  }

  Eigen::MatrixXd t1_residual() const {
    Eigen::MatrixXd r(no_, nv_);
    for (int i = 0; i < no_; ++i)
      for (int a = 0; a < nv_; ++a) {
        double s = f(i, v(a));
        for (int e = 0; e < nv_; ++e) s += t1(i, e) * fae_(a, e);
        for (int m = 0; m < no_; ++m) s -= t1(m, a) * fmi_(m, i);
        for (int m = 0; m < no_; ++m)
          for (int e = 0; e < nv_; ++e) {
            s += t2(i, m, a, e) * fme_(m, e);
            s -= t1(m, e) * V(m, v(a), i, v(e));
            for (int ff = 0; ff < nv_; ++ff) s -= 0.5 * t2(i, m, e, ff) * V(m, v(a), v(e), v(ff));
            for (int n = 0; n < no_; ++n) s -= 0.5 * t2(m, n, a, e) * V(n, m, v(e), i);
          }
        r(i, a) = s - (f(i, i) - f(v(a), v(a))) * t1(i, a);
      }
    return r;
  }

  Tensor4 t2_residual() const {
    // Partially dressed Fock pieces entering the doubles equation.
    Eigen::MatrixXd fbe = fae_, fmj = fmi_;
    for (int b = 0; b < nv_; ++b)
      for (int e = 0; e < nv_; ++e)
        for (int m = 0; m < no_; ++m) fbe(b, e) -= 0.5 * t1(m, b) * fme_(m, e);
    for (int m = 0; m < no_; ++m)
      for (int j = 0; j < no_; ++j)
        for (int e = 0; e < nv_; ++e) fmj(m, j) += 0.5 * t1(j, e) * fme_(m, e);

    // Terms needing a P(ij)P(ab) antisymmetrizer are accumulated unpermuted.
    Tensor4 pp(no_, no_, nv_, nv_), pij(no_, no_, nv_, nv_), pab(no_, no_, nv_, nv_);
    Tensor4 r(no_, no_, nv_, nv_);
    for (int i = 0; i < no_; ++i)
      for (int j = 0; j < no_; ++j)
        for (int a = 0; a < nv_; ++a)
          for (int b = 0; b < nv_; ++b) {
            double s = V(i, j, v(a), v(b));
            for (int m = 0; m < no_; ++m)
              for (int n = 0; n < no_; ++n) s += 0.5 * tau_(m, n, a, b) * wmnij_(m, n, i, j);
            for (int e = 0; e < nv_; ++e)
              for (int ff = 0; ff < nv_; ++ff) s += 0.5 * tau_(i, j, e, ff) * wabef_(a, b, e, ff);
            r(i, j, a, b) = s;

            double sab = 0.0, sij = 0.0, sp = 0.0;
            for (int e = 0; e < nv_; ++e) sab += t2(i, j, a, e) * fbe(b, e);
            for (int m = 0; m < no_; ++m) sab -= t1(m, a) * V(m, v(b), i, j);
            for (int m = 0; m < no_; ++m) sij -= t2(i, m, a, b) * fmj(m, j);
            for (int e = 0; e < nv_; ++e) sij += t1(i, e) * V(v(a), v(b), v(e), j);
            for (int m = 0; m < no_; ++m)
              for (int e = 0; e < nv_; ++e)
                sp += t2(i, m, a, e) * wmbej_(m, b, e, j) - t1(i, e) * t1(m, a) * V(m, v(b), v(e), j);
            pab(i, j, a, b) = sab;
            pij(i, j, a, b) = sij;
            pp(i, j, a, b) = sp;
          }
    for (int i = 0; i < no_; ++i)
      for (int j = 0; j < no_; ++j)
        for (int a = 0; a < nv_; ++a)
          for (int b = 0; b < nv_; ++b) {
            double s = r(i, j, a, b);
            s += pab(i, j, a, b) - pab(i, j, b, a);
            s += pij(i, j, a, b) - pij(j, i, a, b);
            s += pp(i, j, a, b) - pp(j, i, a, b) - pp(i, j, b, a) + pp(j, i, b, a);
            const double d = f(i, i) + f(j, j) - f(v(a), v(a)) - f(v(b), v(b));
            r(i, j, a, b) = s - d * t2(i, j, a, b);
          }
    return r;
  }

  const SpinOrbitalHamiltonian& h_;
  const Amplitudes& t_;
  int no_, nv_;
  Tensor4 tau_, taus_, wmnij_, wabef_, wmbej_;
  Eigen::MatrixXd fae_, fmi_, fme_;
};

Eigen::VectorXd pack(const Eigen::MatrixXd& m1, const Tensor4& m2) {
  Eigen::VectorXd out(m1.size() + static_cast<Eigen::Index>(m2.size()));
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < m1.size(); ++c) out[k++] = m1.data()[c];
  for (double x : m2.data()) out[k++] = x;
  return out;
}

void unpack(const Eigen::VectorXd& v, Amplitudes& a) {
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < a.t1.size(); ++c) a.t1.data()[c] = v[k++];
  for (double& x : a.t2.data()) x = v[k++];
}

// Pulay extrapolation over stored amplitude vectors and error vectors.
class Diis {
 public:
  explicit Diis(int depth) : depth_(depth) {}

  Eigen::VectorXd extrapolate(Eigen::VectorXd amps, Eigen::VectorXd err) {
    if (depth_ < 2) return amps;
    amps_.push_back(std::move(amps));
    errs_.push_back(std::move(err));
    if (static_cast<int>(amps_.size()) > depth_) {
      amps_.pop_front();
      errs_.pop_front();
    }
    const int n = static_cast<int>(amps_.size());
    if (n < 2) return amps_.back();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) b(i, j) = b(j, i) = errs_[i].dot(errs_[j]);
    const double scale = b.topLeftCorner(n, n).diagonal().maxCoeff();
    if (scale > 0.0) b.topLeftCorner(n, n) /= scale;
    b.row(n).head(n).setConstant(-1.0);
    b.col(n).head(n).setConstant(-1.0);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs[n] = -1.0;
    const Eigen::VectorXd c = b.colPivHouseholderQr().solve(rhs);
    if (!c.allFinite()) return amps_.back();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(amps_.back().size());
    for (int i = 0; i < n; ++i) out += c[i] * amps_[i];
    return out;
  }

 private:
  int depth_;
  std::deque<Eigen::VectorXd> amps_, errs_;
};

double max_abs(const CcResiduals& r) {
  double m = r.r1.size() ? r.r1.cwiseAbs().maxCoeff() : 0.0;
  for (double x : r.r2.data()) m = std::max(m, std::abs(x));
  return m;
}

CcResult solve(const SpinOrbitalHamiltonian& h, const CcConfig& cfg, bool singles) {
  cfg.validate();
  const int no = h.n_occ, nv = h.n_virt();
  const Denominators d = denominators(h);
  CcResult res;
  res.amplitudes = Amplitudes(no, nv);
  Amplitudes& t = res.amplitudes;
  if (no == 0 || nv == 0) {
    res.converged = true;
    res.e_total = h.e_hf;
    return res;
  }

  Diis diis(cfg.diis_depth);
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const CcResiduals r = cc_residuals(h, t, singles);
    res.residual_norm = max_abs(r);
    if (res.residual_norm < cfg.residual_tol) {
      res.converged = true;
      break;
    }
    // Jacobi step t += R / D, with forbidden (zero-amplitude) slots left alone.
    Amplitudes step(no, nv);
    if (singles)
      for (int i = 0; i < no; ++i)
        for (int a = 0; a < nv; ++a)
          if (std::abs(d.d1(i, a)) > 1e-12) step.t1(i, a) = r.r1(i, a) / d.d1(i, a);
    for (std::size_t k = 0; k < step.t2.size(); ++k)
      if (std::abs(d.d2.data()[k]) > 1e-12) step.t2.data()[k] = r.r2.data()[k] / d.d2.data()[k];
    Eigen::VectorXd next = pack(t.t1, t.t2) + pack(step.t1, step.t2);
    next = diis.extrapolate(next, pack(step.t1, step.t2));
    unpack(next, t);
    res.iterations = it;
    if (it == 1) res.first_iteration_energy = cc_energy(h, t);
    if (!t.t2.data().empty() && !std::isfinite(next.norm())) break;
  }
  res.e_corr = cc_energy(h, t);
  res.e_total = h.e_hf + res.e_corr;
  if (!std::isfinite(res.e_corr)) res.converged = false;
  return res;
}

}  // namespace

void CcConfig::validate() const {
  if (!(residual_tol > 0.0) || max_iter <= 0 || diis_depth < 0)
    throw std::invalid_argument("CcConfig: tolerance and iteration limit must be positive");
}

CcResiduals cc_residuals(const SpinOrbitalHamiltonian& h, const Amplitudes& amps, bool singles) {
  if (singles) return CcsdEquations(h, amps).residuals(true);
  Amplitudes doubles_only = amps;
  doubles_only.t1.setZero();
  return CcsdEquations(h, doubles_only).residuals(false);
}

double cc_energy(const SpinOrbitalHamiltonian& h, const Amplitudes& amps) {
  const int no = h.n_occ, nv = h.n_virt();
  double e = 0.0;
  for (int i = 0; i < no; ++i)
    for (int a = 0; a < nv; ++a) e += h.fock(i, no + a) * amps.t1(i, a);
  for (int i = 0; i < no; ++i)
    for (int j = 0; j < no; ++j)
      for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b) {
          const double v = h.v_anti(i, j, no + a, no + b);
          e += 0.25 * v * amps.t2(i, j, a, b) + 0.5 * v * amps.t1(i, a) * amps.t1(j, b);
        }
  return e;
}

CcResult ccd_solve(const SpinOrbitalHamiltonian& h, const CcConfig& cfg) { return solve(h, cfg, false); }
CcResult ccsd_solve(const SpinOrbitalHamiltonian& h, const CcConfig& cfg) { return solve(h, cfg, true); }

}  // namespace ucc
