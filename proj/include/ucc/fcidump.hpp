#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ucc/tensor.hpp"

namespace ucc {

/// One- and two-electron integrals over spatial molecular orbitals.
///
/// `g` holds chemists' notation (pq|rs) with the full 8-fold symmetry
/// replicated. `e_core` is the nuclear repulsion plus any folded core energy.
struct SpatialIntegrals {
  int n_orb = 0;
  int n_electrons = 0;
  int ms2 = 0;
  double e_core = 0.0;
  Eigen::MatrixXd h;
  Tensor4 g;
  std::vector<double> orbital_energies;  // optional
  std::vector<int> orbsym;               // parsed, unused

  SpatialIntegrals() = default;
  SpatialIntegrals(int norb, int nelec, int ms2_value = 0);

  /// Largest violation of h and g permutational symmetry.
  double symmetry_residual() const;
};

class FcidumpError : public std::runtime_error {
 public:
  FcidumpError(const std::string& what, int line = 0);
  int line() const { return line_; }

 private:
  int line_;
};

SpatialIntegrals parse_fcidump(std::istream& in);
SpatialIntegrals parse_fcidump_string(const std::string& text);
SpatialIntegrals read_fcidump(const std::filesystem::path& path);

void write_fcidump(std::ostream& out, const SpatialIntegrals& ints);
std::string write_fcidump_string(const SpatialIntegrals& ints);

/// Fold the lowest `n_frozen` doubly occupied orbitals into an effective
/// valence Hamiltonian.
SpatialIntegrals freeze_core(const SpatialIntegrals& ints, int n_frozen);

}  // namespace ucc
