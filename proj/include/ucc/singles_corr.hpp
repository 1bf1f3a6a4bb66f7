#pragma once

#include <Eigen/Dense>

#include "ucc/fock_sector.hpp"
#include "ucc/hamiltonian.hpp"

namespace ucc {

/// Perturbative singles recovered from doubles amplitudes, and the energy
/// corrections built from them.
struct SinglesCorrection {
  Eigen::MatrixXd t1_2;  // [i][a], second order
  Eigen::MatrixXd t1_3;  // [i][a], third order
  double e4s = 0.0;
  double e5 = 0.0;
  double e6 = 0.0;
  double e6s = 0.0;  // e4s + e5 + e6
};

/// Largest |f_ia| tolerated before the singles formulas refuse to run.
inline constexpr double kCanonicalTol = 1e-8;

/// <Phi_i^a| W_N T2 |0> / D1[i][a]. Only t2 of `amps` is read.
Eigen::MatrixXd t1_second_order(const SpinOrbitalHamiltonian& h, const Amplitudes& amps, const Denominators& d);

/// <Phi_i^a| T2^+ W_N T2 |0> / D1[i][a], evaluated through the connected
/// triples W_N T2 produces.
Eigen::MatrixXd t1_third_order(const SpinOrbitalHamiltonian& h, const Amplitudes& amps, const Denominators& d);

SinglesCorrection singles_corrections(const SpinOrbitalHamiltonian& h, const Amplitudes& amps,
                                      const Denominators& d);

/// Singles block of op|0>: entry [i][a] is <Phi_i^a|op|0> with
/// |Phi_i^a> = a+_a a_i |0>, read from the HF column of `op`.
Eigen::MatrixXd oracle_singles_projection(const DeterminantSector& sector, const SectorOperator& op, int n_occ);

/// Same projection applied to an explicit state vector.
Eigen::MatrixXd oracle_singles_projection(const DeterminantSector& sector, const SectorVector& v, int n_occ);

}  // namespace ucc
