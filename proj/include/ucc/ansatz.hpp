#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ucc/fock_sector.hpp"
#include "ucc/hamiltonian.hpp"

namespace ucc {

enum class GeneratorKind { DoublesFull, DoublesPaired, SinglesDoublesFull };

/// a+(creators[0]) a+(creators[1]) a(annihilators[0]) a(annihilators[1]) for
/// rank 2, a+(creators[0]) a(annihilators[0]) for rank 1. Indices are spin
/// orbitals in canonical order i < j, a < b. Note the rank-2 string is
/// a+a a+b a_i a_j, which is minus the usual cluster-operator string
/// a+a a+b a_j a_i; the parameter of this generator is used as t2_ijab as is.
struct Excitation {
  int rank = 2;
  std::array<int, 2> creators{};
  std::array<int, 2> annihilators{};

  std::span<const int> c() const { return {creators.data(), static_cast<std::size_t>(rank)}; }
  std::span<const int> a() const { return {annihilators.data(), static_cast<std::size_t>(rank)}; }
};

/// Ordered anti-Hermitian generators tau = E - E+. For the Trotterized
/// product the list order is the application order on the reference:
/// mixed-spin doubles, alpha-alpha doubles, beta-beta doubles, then singles.
/// This is the written factor order read as an operator acting on |0>, so
/// the rightmost (mixed-spin) product acts first.
struct GeneratorSet {
  GeneratorKind kind = GeneratorKind::DoublesFull;
  bool trotterized = false;
  int n_so = 0;
  int n_occ = 0;
  std::vector<Excitation> generators;

  std::size_t param_count() const { return generators.size(); }
  std::string label() const;
};

GeneratorSet build_generators(const SpinOrbitalHamiltonian& h, GeneratorKind kind, bool trotterized);

/// A generator set bound to a sector: precomputed determinant couplings for
/// each generator and, for the single-exponential form, the sparsity pattern
/// of the summed generator.
class CompiledAnsatz {
 public:
  CompiledAnsatz(GeneratorSet gens, const DeterminantSector& sector);

  const GeneratorSet& generators() const { return gens_; }
  std::size_t dim() const { return dim_; }
  std::size_t hf_index() const { return hf_index_; }

  SectorVector prepare(std::span<const double> params) const;

  /// <psi|H|psi>; fills `grad` with the analytic gradient when non-empty.
  double energy(std::span<const double> params, const SectorOperator& hamiltonian,
                std::span<double> grad = {}) const;

  /// tau_mu as an explicit anti-Hermitian matrix.
  SectorOperator generator_matrix(std::size_t mu) const;
  /// sum_mu theta_mu tau_mu
  SectorOperator summed_generator(std::span<const double> params) const;
  /// In-place Trotter factor exp(theta tau_mu) on `v`.
  void apply_factor(std::size_t mu, double theta, std::span<double> v) const;

 private:
  struct Coupling {
    int src;
    int dst;
    double sign;
  };

  void check(std::span<const double> params) const;
  double trotter_energy(std::span<const double> params, const SectorOperator& h, std::span<double> grad) const;
  double exponential_energy(std::span<const double> params, const SectorOperator& h, std::span<double> grad) const;
  std::vector<double> pattern_values(std::span<const double> params, double& norm1) const;

  GeneratorSet gens_;
  std::size_t dim_ = 0;
  std::size_t hf_index_ = 0;
  std::vector<std::vector<Coupling>> couplings_;
  // CSR pattern of sum_mu theta_mu tau_mu
  std::vector<int> row_ptr_, col_, gen_;
  std::vector<double> sign_;
};

SectorVector prepare_state(const GeneratorSet& gens, std::span<const double> params, const DeterminantSector& sector);

/// Reads optimized parameters as T2 amplitudes (doubles kinds only).
Amplitudes params_to_t2(const GeneratorSet& gens, std::span<const double> params);

/// Inverse map: picks t2[i][j][a][b] for each generator (singles from t1).
std::vector<double> amplitudes_to_params(const GeneratorSet& gens, const Amplitudes& amps);

/// Plain-text table "i j a b value" over unique i<j, a<b, 0-based spin
/// orbitals (virtuals carry their absolute spin-orbital index).
void write_amplitudes(std::ostream& out, const Amplitudes& amps);
Amplitudes read_amplitudes(std::istream& in, int n_occ, int n_virt);

}  // namespace ucc
