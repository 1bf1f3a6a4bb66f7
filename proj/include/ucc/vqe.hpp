#pragma once

#include <span>
#include <vector>

#include "ucc/ansatz.hpp"

namespace ucc {

enum class VqeInit { Zeros, Mp2Scaled };
enum class GradientMode { Analytic, FiniteDifference };

struct VqeConfig {
  VqeInit init = VqeInit::Zeros;
  double energy_tol = 1e-9;
  double grad_tol = 1e-6;
  int max_iter = 500;
  double fd_step = 1e-5;
  GradientMode gradient = GradientMode::Analytic;

  void validate() const;
};

struct VqeResult {
  std::vector<double> params;
  double energy = 0.0;
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;  // infinity norm at the returned parameters
  std::vector<double> energy_trace;  // accepted-step energies
};

/// <Psi(params)|H|Psi(params)> including the scalar core energy carried by H.
double energy(const GeneratorSet& gens, std::span<const double> params, const SectorOperator& hamiltonian,
              const DeterminantSector& sector);

/// Starting point for `minimize`: zeros, or MP2 doubles mapped onto the
/// generators (singles start at zero).
std::vector<double> initial_parameters(const GeneratorSet& gens, const SpinOrbitalHamiltonian& h, VqeInit init);

/// BFGS minimisation of the ansatz energy. `start` overrides cfg.init
/// (used for warm starts along scans); empty means zeros.
VqeResult minimize(const CompiledAnsatz& ansatz, const SectorOperator& hamiltonian, const VqeConfig& cfg,
                   std::span<const double> start = {});

VqeResult minimize(const GeneratorSet& gens, const SectorOperator& hamiltonian, const DeterminantSector& sector,
                   const VqeConfig& cfg, std::span<const double> start = {});

/// Central-difference gradient, used for cross-checks and GradientMode::FiniteDifference.
std::vector<double> finite_difference_gradient(const CompiledAnsatz& ansatz, const SectorOperator& hamiltonian,
                                               std::span<const double> params, double step);

}  // namespace ucc
