#include "ucc/singles_corr.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace ucc {

namespace {

constexpr double kDegenerateTol = 1e-10;

void require_canonical(const SpinOrbitalHamiltonian& h) {
  const double f = h.max_ov_fock();
  if (f > kCanonicalTol)
    throw ContractViolation("singles corrections need canonical orbitals; max |f_ia| = " + std::to_string(f));
}

void divide_by_d1(Eigen::MatrixXd& x, const Denominators& d) {
  for (int i = 0; i < x.rows(); ++i)
    for (int a = 0; a < x.cols(); ++a) {
      if (x(i, a) == 0.0) continue;
      if (std::abs(d.d1(i, a)) < kDegenerateTol)
        throw DegeneracyError("vanishing singles denominator at (" + std::to_string(i) + "," + std::to_string(a) +
                              ")");
      x(i, a) /= d.d1(i, a);
    }
}

// Dense o^3 v^3 buffer for connected triples.
class Triples {
 public:
  Triples(int no, int nv) : no_(no), nv_(nv), data_(static_cast<std::size_t>(no) * no * no * nv * nv * nv, 0.0) {}
  double& operator()(int i, int j, int k, int a, int b, int c) { return data_[idx(i, j, k, a, b, c)]; }
  double operator()(int i, int j, int k, int a, int b, int c) const { return data_[idx(i, j, k, a, b, c)]; }

 private:
  std::size_t idx(int i, int j, int k, int a, int b, int c) const {
    return ((((static_cast<std::size_t>(i) * no_ + j) * no_ + k) * nv_ + a) * nv_ + b) * nv_ + c;
  }
  int no_, nv_;
  std::vector<double> data_;
};

}  // namespace

Eigen::MatrixXd t1_second_order(const SpinOrbitalHamiltonian& h, const Amplitudes& amps, const Denominators& d) {
  require_canonical(h);
  const int no = h.n_occ, nv = h.n_virt();
  const Tensor4& t = amps.t2;
  const Tensor4& v = h.v_anti;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(no, nv);
  for (int i = 0; i < no; ++i)
    for (int a = 0; a < nv; ++a) {
      double s = 0.0;
      for (int k = 0; k < no; ++k)
        for (int c = 0; c < nv; ++c) {
          s += h.fock(k, no + c) * t(i, k, a, c);
          for (int e = 0; e < nv; ++e) s += 0.5 * v(no + a, k, no + c, no + e) * t(i, k, c, e);
          for (int l = 0; l < no; ++l) s -= 0.5 * v(k, l, i, no + c) * t(k, l, a, c);
        }
      x(i, a) = s;
    }
  divide_by_d1(x, d);
  return x;
}

Eigen::MatrixXd t1_third_order(const SpinOrbitalHamiltonian& h, const Amplitudes& amps, const Denominators& d) {
  require_canonical(h);
  const int no = h.n_occ, nv = h.n_virt();
  const Tensor4& t = amps.t2;
  const Tensor4& v = h.v_anti;

  // raw(i,j,k,a,b,c) = sum_e t_jk^ae <ei||bc> - sum_m t_im^bc <ma||jk>
  Triples raw(no, nv);
  for (int i = 0; i < no; ++i)
    for (int j = 0; j < no; ++j)
      for (int k = 0; k < no; ++k)
        for (int a = 0; a < nv; ++a)
          for (int b = 0; b < nv; ++b)
            for (int c = 0; c < nv; ++c) {
              double s = 0.0;
              for (int e = 0; e < nv; ++e) s += t(j, k, a, e) * v(no + e, i, no + b, no + c);
              for (int m = 0; m < no; ++m) s -= t(i, m, b, c) * v(m, no + a, j, k);
              raw(i, j, k, a, b, c) = s;
            }

  // Antisymmetrize over i/jk and a/bc, then close with t2 onto singles.
  auto perm_occ = [&](int i, int j, int k, int a, int b, int c) {
    return raw(i, j, k, a, b, c) - raw(j, i, k, a, b, c) - raw(k, j, i, a, b, c);
  };
  auto full = [&](int i, int j, int k, int a, int b, int c) {
    return perm_occ(i, j, k, a, b, c) - perm_occ(i, j, k, b, a, c) - perm_occ(i, j, k, c, b, a);
  };

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(no, nv);
  for (int i = 0; i < no; ++i)
    for (int a = 0; a < nv; ++a) {
      double s = 0.0;
      for (int j = 0; j < no; ++j)
        for (int k = 0; k < no; ++k)
          for (int b = 0; b < nv; ++b)
            for (int c = 0; c < nv; ++c) {
              const double tt = t(j, k, b, c);
              if (tt != 0.0) s += tt * full(i, j, k, a, b, c);
            }
      x(i, a) = 0.25 * s;
    }
  divide_by_d1(x, d);
  return x;
}

SinglesCorrection singles_corrections(const SpinOrbitalHamiltonian& h, const Amplitudes& amps,
                                      const Denominators& d) {
  SinglesCorrection r;
  r.t1_2 = t1_second_order(h, amps, d);
  r.t1_3 = t1_third_order(h, amps, d);
  r.e4s = (d.d1.array() * r.t1_2.array().square()).sum();
  r.e5 = 2.0 * (d.d1.array() * r.t1_2.array() * r.t1_3.array()).sum();
  r.e6 = (d.d1.array() * r.t1_3.array().square()).sum();
  r.e6s = r.e4s + r.e5 + r.e6;
  return r;
}

Eigen::MatrixXd oracle_singles_projection(const DeterminantSector& sector, const SectorVector& v, int n_occ) {
  const int nv = sector.n_so() - n_occ;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_occ, nv);
  const Det hf = sector.hf_det();
  for (int i = 0; i < n_occ; ++i)
    for (int a = 0; a < nv; ++a) {
      const int c[1] = {n_occ + a}, an[1] = {i};
      const auto e = apply_string(hf, c, an);
      if (!e) continue;
      const auto idx = sector.index_of(e->det);
      if (idx) out(i, a) = e->sign * v[static_cast<Eigen::Index>(*idx)];
    }
  return out;
}

Eigen::MatrixXd oracle_singles_projection(const DeterminantSector& sector, const SectorOperator& op, int n_occ) {
  const SectorVector col = op.matrix().col(static_cast<Eigen::Index>(sector.hf_index()));
  return oracle_singles_projection(sector, col, n_occ);
}

}  // namespace ucc
