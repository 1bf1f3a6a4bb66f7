#include "ucc/hamiltonian.hpp"

#include <cmath>

namespace ucc {

namespace {
constexpr double kDegenerateTol = 1e-10;
}

double SpinOrbitalHamiltonian::max_ov_fock() const {
  double m = 0.0;
  for (int i = 0; i < n_occ; ++i)
    for (int a = n_occ; a < n_so; ++a) m = std::max(m, std::abs(fock(i, a)));
  return m;
}

SpinOrbitalHamiltonian to_spin_orbital(const SpatialIntegrals& ints) {
  if (ints.n_electrons % 2 != 0 || ints.ms2 != 0)
    throw UnsupportedReference("closed-shell RHF reference requires an even electron count and MS2=0");
  const int n = ints.n_orb;
  SpinOrbitalHamiltonian h;
  h.n_so = 2 * n;
  h.n_occ = ints.n_electrons;
  h.e_core = ints.e_core;
  h.hcore = Eigen::MatrixXd::Zero(h.n_so, h.n_so);
  for (int p = 0; p < h.n_so; ++p)
    for (int q = 0; q < h.n_so; ++q)
      if (spin_of(p) == spin_of(q)) h.hcore(p, q) = ints.h(p / 2, q / 2);

  h.v_anti = Tensor4(h.n_so, h.n_so, h.n_so, h.n_so);
  for (int p = 0; p < h.n_so; ++p)
    for (int q = 0; q < h.n_so; ++q)
      for (int r = 0; r < h.n_so; ++r)
        for (int s = 0; s < h.n_so; ++s) {
          double v = 0.0;
          if (spin_of(p) == spin_of(r) && spin_of(q) == spin_of(s)) v += ints.g(p / 2, r / 2, q / 2, s / 2);
          if (spin_of(p) == spin_of(s) && spin_of(q) == spin_of(r)) v -= ints.g(p / 2, s / 2, q / 2, r / 2);
          h.v_anti(p, q, r, s) = v;
        }

  h.fock = h.hcore;
  for (int p = 0; p < h.n_so; ++p)
    for (int q = 0; q < h.n_so; ++q)
      for (int i = 0; i < h.n_occ; ++i) h.fock(p, q) += h.v_anti(p, i, q, i);

  double e = h.e_core;
  for (int i = 0; i < h.n_occ; ++i) {
    e += h.hcore(i, i);
    for (int j = 0; j < h.n_occ; ++j) e += 0.5 * h.v_anti(i, j, i, j);
  }
  h.e_hf = e;
  return h;
}

Denominators denominators(const SpinOrbitalHamiltonian& h) {
  const int no = h.n_occ, nv = h.n_virt();
  Denominators d;
  d.d1 = Eigen::MatrixXd(no, nv);
  d.d2 = Tensor4(no, no, nv, nv);
  for (int i = 0; i < no; ++i)
    for (int a = 0; a < nv; ++a) d.d1(i, a) = h.fock(i, i) - h.fock(no + a, no + a);
  for (int i = 0; i < no; ++i)
    for (int j = 0; j < no; ++j)
      for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b) d.d2(i, j, a, b) = d.d1(i, a) + d.d1(j, b);
  return d;
}

Mp2Result mp2(const SpinOrbitalHamiltonian& h) {
  const int no = h.n_occ, nv = h.n_virt();
  const Denominators d = denominators(h);
  Mp2Result r{Amplitudes(no, nv), 0.0};
  for (int i = 0; i < no; ++i)
    for (int j = 0; j < no; ++j)
      for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b) {
          const double v = h.v_anti(i, j, no + a, no + b);
          if (i == j || a == b || spin_of(i) + spin_of(j) != spin_of(no + a) + spin_of(no + b)) continue;
          if (std::abs(d.d2(i, j, a, b)) < kDegenerateTol)
            throw DegeneracyError("mp2: vanishing doubles denominator at (" + std::to_string(i) + "," +
                                  std::to_string(j) + "," + std::to_string(a) + "," + std::to_string(b) + ")");
          const double t = v / d.d2(i, j, a, b);
          r.amplitudes.t2(i, j, a, b) = t;
          r.energy += 0.25 * v * t;
        }
  return r;
}

}  // namespace ucc
