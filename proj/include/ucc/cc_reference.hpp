#pragma once

#include "ucc/hamiltonian.hpp"

namespace ucc {

struct CcConfig {
  double residual_tol = 1e-8;  // infinity norm of the amplitude residuals
  int max_iter = 200;
  int diis_depth = 8;

  void validate() const;
};

struct CcResult {
  Amplitudes amplitudes;
  double e_corr = 0.0;
  double e_total = 0.0;
  double first_iteration_energy = 0.0;  // correlation energy after one update from zero
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Projections <Phi_mu| e^{-T} H e^{T} |0> for the current amplitudes.
struct CcResiduals {
  Eigen::MatrixXd r1;
  Tensor4 r2;
};

/// Singles and doubles residuals. With `singles` false the t1 block is
/// ignored (treated as zero) and r1 is returned as zeros.
CcResiduals cc_residuals(const SpinOrbitalHamiltonian& h, const Amplitudes& amps, bool singles = true);

/// f_ia t_ia + 1/4 <ij||ab> t_ijab + 1/2 <ij||ab> t_ia t_jb
double cc_energy(const SpinOrbitalHamiltonian& h, const Amplitudes& amps);

CcResult ccd_solve(const SpinOrbitalHamiltonian& h, const CcConfig& cfg = {});
CcResult ccsd_solve(const SpinOrbitalHamiltonian& h, const CcConfig& cfg = {});

}  // namespace ucc
