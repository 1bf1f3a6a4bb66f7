#pragma once

#include <stdexcept>

#include "ucc/fock_sector.hpp"

namespace ucc {

struct FciResult {
  double energy = 0.0;
  SectorVector ground_vector;
  std::size_t dimension = 0;
  int iterations = 0;    // Davidson iterations, 0 for the dense path
  bool refined = false;  // dense vector failed the residual check and was polished
  double s2 = 0.0;       // <S^2> of ground_vector, when spin was targeted
};

/// Which eigenstate of the sector counts as the ground state.
enum class FciSpin {
  /// Lowest eigenvalue in the sector regardless of total spin.
  Any,
  /// Lowest state with S = |M_s|, i.e. the singlet for a closed-shell
  /// sector. Found by shifting other multiplets up by penalty * (S^2 - S(S+1)).
  LowestCompatible,
};

struct FciOptions {
  FciSpin spin = FciSpin::LowestCompatible;
  double spin_penalty = 1.0;  // Hartree
};

class FciConvergenceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bound on max |H v - E v| that every returned eigenpair satisfies.
inline constexpr double kEigenResidualTol = 1e-9;

double eigen_residual(const SectorOperator& hamiltonian, const FciResult& r);

/// Dimension up to which the dense eigensolver is used.
inline constexpr std::size_t kDenseFciLimit = 4096;

/// Lowest eigenpair of `hamiltonian` (dense for dim <= kDenseFciLimit,
/// Davidson above), restricted in spin according to `opt`.
FciResult fci_ground_state(const DeterminantSector& sector, const SectorOperator& hamiltonian,
                           const FciOptions& opt = {});

/// Dense lowest eigenpair. The LAPACK vector is checked against
/// kEigenResidualTol; failing vectors are polished by Davidson and, if that
/// stalls, recomputed with Eigen's dense solver.
FciResult fci_dense(const SectorOperator& hamiltonian);

struct DavidsonOptions {
  double tol = 1e-10;
  int max_iter = 200;
  int max_subspace = 48;
};

/// Lowest eigenpair by Davidson iteration from the unit vector at `start`
/// with a diagonal preconditioner.
FciResult fci_davidson(const SectorOperator& hamiltonian, std::size_t start, const DavidsonOptions& opt = {});
FciResult fci_davidson(const SectorOperator& hamiltonian, const SectorVector& guess, const DavidsonOptions& opt = {});

}  // namespace ucc
