#pragma once

// Exact determinant-basis representation of states and second-quantized
// operators at fixed (N_alpha, N_beta).
//
// Phase convention: a determinant with occupied spin orbitals p1 < p2 < ...
// is a+_{p1} a+_{p2} ... |vac>, so a+_p / a_p pick up (-1)^(number of
// occupied orbitals below p).

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ucc/hamiltonian.hpp"
#include "ucc/kernels.hpp"

namespace ucc {

using Det = std::uint64_t;
using SectorVector = Eigen::VectorXd;

inline bool occupied(Det d, int p) { return (d >> p) & 1u; }

class DeterminantSector {
 public:
  DeterminantSector() = default;
  DeterminantSector(int n_so, int n_alpha, int n_beta);

  int n_so() const { return n_so_; }
  int n_alpha() const { return n_alpha_; }
  int n_beta() const { return n_beta_; }
  std::size_t size() const { return dets_.size(); }
  const std::vector<Det>& dets() const { return dets_; }
  Det det(std::size_t k) const { return dets_[k]; }
  std::optional<std::size_t> index_of(Det d) const;
  std::size_t hf_index() const { return hf_index_; }
  Det hf_det() const { return dets_[hf_index_]; }

 private:
  int n_so_ = 0, n_alpha_ = 0, n_beta_ = 0;
  std::vector<Det> dets_;
  std::size_t hf_index_ = 0;
};

DeterminantSector enumerate_sector(int n_so, int n_alpha, int n_beta);

/// Result of acting with an operator string on a determinant.
struct PhasedDet {
  Det det;
  int sign;
};

/// Applies a+(c_1) ... a+(c_n) a(a_m) ... a(a_1) to `d`, i.e. annihilators
/// act first in list order, then creators from last to first. Returns
/// nothing when the string annihilates the determinant.
std::optional<PhasedDet> apply_string(Det d, std::span<const int> creators, std::span<const int> annihilators);

enum class OperatorSymmetry { Hermitian, AntiHermitian, General };

class ContractViolation : public std::logic_error {
  using std::logic_error::logic_error;
};

/// Sparse real operator over a sector basis. The symmetry flag is verified
/// on construction to 1e-12.
class SectorOperator {
 public:
  using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

  SectorOperator() = default;
  SectorOperator(Sparse m, OperatorSymmetry sym);

  const Sparse& matrix() const { return m_; }
  OperatorSymmetry symmetry() const { return sym_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  kernels::CsrView csr() const;

  SectorVector apply(const SectorVector& v) const;
  void apply(std::span<const double> x, std::span<double> y) const;
  SectorOperator adjoint() const;
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(m_); }
  /// max column absolute sum
  double norm1() const;
  /// max |M - M^T| or max |M + M^T| depending on the requested symmetry
  double symmetry_residual(OperatorSymmetry sym) const;

 private:
  Sparse m_;
  OperatorSymmetry sym_ = OperatorSymmetry::General;
};

SectorOperator product(const SectorOperator& a, const SectorOperator& b);
/// alpha * a + beta * b with the given symmetry flag
SectorOperator combine(double alpha, const SectorOperator& a, double beta, const SectorOperator& b,
                       OperatorSymmetry sym);
SectorOperator identity_operator(std::size_t dim);

/// Matrix of a+(creators...) a(annihilators reversed...) over the sector.
SectorOperator excitation_matrix(const DeterminantSector& sector, std::span<const int> creators,
                                 std::span<const int> annihilators);

/// Hamiltonian matrix by Slater-Condon rules.
SectorOperator hamiltonian_matrix(const DeterminantSector& sector, const SpinOrbitalHamiltonian& h);

/// Hamiltonian assembled term by term from operator strings
/// e_core + sum h_pq p+q + 1/4 sum <pq||rs> p+q+sr. Independent of the
/// Slater-Condon path; cost grows as n_so^4 * dim, meant for small sectors.
SectorOperator hamiltonian_matrix_from_strings(const DeterminantSector& sector, const SpinOrbitalHamiltonian& h);

/// f_N = sum_p eps_p {p+ p}: diagonal, sum_p eps_p (n_p - n_p^HF).
SectorOperator fock_diagonal_matrix(const DeterminantSector& sector, const SpinOrbitalHamiltonian& h);

/// Total spin S^2 over the sector.
SectorOperator spin_squared_matrix(const DeterminantSector& sector);

/// W_N = H - e_hf - f_N.
SectorOperator perturbation_matrix(const DeterminantSector& sector, const SpinOrbitalHamiltonian& h,
                                   const SectorOperator& hamiltonian);

/// T = sum t1_ia a+a i + sum_{i<j,a<b} t2_ijab a+ b+ j i.
SectorOperator cluster_matrix(const DeterminantSector& sector, const Amplitudes& amps);

/// e^{gen} v for anti-Hermitian `gen`; scaled Taylor summation.
SectorVector apply_exponential(const SectorOperator& gen, const SectorVector& v);

namespace detail {
/// e^{t A} v by Taylor summation with sub-stepping so each step has
/// |t A|_1 <= 1. Term-norm stopping at 1e-15 relative.
void expv(const kernels::CsrView& a, double norm1, double t, std::span<double> v);
}  // namespace detail

}  // namespace ucc
