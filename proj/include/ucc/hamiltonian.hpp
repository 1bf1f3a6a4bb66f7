#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

#include "ucc/fcidump.hpp"
#include "ucc/tensor.hpp"

namespace ucc {

/// Spin-orbital Hamiltonian over interleaved spin orbitals p = 2P + sigma
/// (even alpha, odd beta). The lowest `n_occ` spin orbitals form the closed
/// shell reference.
///
/// The normal-ordered split is H_N = f_N + W_N with f_N the diagonal of
/// `fock`, and W_N the occupied/virtual Fock blocks plus `v_anti`.
struct SpinOrbitalHamiltonian {
  int n_so = 0;
  int n_occ = 0;
  double e_core = 0.0;
  double e_hf = 0.0;
  Eigen::MatrixXd hcore;  // one-electron integrals in the spin-orbital basis
  Eigen::MatrixXd fock;
  Tensor4 v_anti;  // <pq||rs>

  int n_virt() const { return n_so - n_occ; }
  double orbital_energy(int p) const { return fock(p, p); }
  /// max |f_ia| over occupied i, virtual a.
  double max_ov_fock() const;
};

/// Moller-Plesset denominators. Virtual indices are offset by n_occ.
struct Denominators {
  Eigen::MatrixXd d1;  // [i][a] = f_ii - f_aa
  Tensor4 d2;          // [i][j][a][b] = f_ii + f_jj - f_aa - f_bb
};

/// Cluster amplitudes with occupied-first, virtual-second indices;
/// virtual a corresponds to spin orbital n_occ + a.
struct Amplitudes {
  Eigen::MatrixXd t1;
  Tensor4 t2;

  Amplitudes() = default;
  Amplitudes(int n_occ, int n_virt)
      : t1(Eigen::MatrixXd::Zero(n_occ, n_virt)), t2(n_occ, n_occ, n_virt, n_virt) {}
  int n_occ() const { return static_cast<int>(t1.rows()); }
  int n_virt() const { return static_cast<int>(t1.cols()); }
};

class UnsupportedReference : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class DegeneracyError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

SpinOrbitalHamiltonian to_spin_orbital(const SpatialIntegrals& ints);

Denominators denominators(const SpinOrbitalHamiltonian& h);

struct Mp2Result {
  Amplitudes amplitudes;
  double energy = 0.0;
};

Mp2Result mp2(const SpinOrbitalHamiltonian& h);

inline int spin_of(int p) { return p & 1; }

}  // namespace ucc
