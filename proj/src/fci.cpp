#include "ucc/fci.hpp"

#include <lapacke.h>

#include <cmath>
#include <string>

namespace ucc {

double eigen_residual(const SectorOperator& hamiltonian, const FciResult& r) {
  return (hamiltonian.apply(r.ground_vector) - r.energy * r.ground_vector).cwiseAbs().maxCoeff();
}

FciResult fci_ground_state(const DeterminantSector& sector, const SectorOperator& hamiltonian, const FciOptions& opt) {
  if (hamiltonian.symmetry() != OperatorSymmetry::Hermitian)
    throw ContractViolation("fci_ground_state requires a Hermitian operator");
  if (hamiltonian.dim() != sector.size()) throw std::invalid_argument("fci_ground_state: dimension mismatch");
  auto solve = [&](const SectorOperator& op) {
    return sector.size() <= kDenseFciLimit ? fci_dense(op) : fci_davidson(op, sector.hf_index());
  };
  if (opt.spin == FciSpin::Any) return solve(hamiltonian);

  if (!(opt.spin_penalty > 0.0)) throw std::invalid_argument("fci_ground_state: spin penalty must be positive");
  const double s = 0.5 * std::abs(sector.n_alpha() - sector.n_beta());
  const double target = s * (s + 1.0);
  const SectorOperator s2 = spin_squared_matrix(sector);
  const SectorOperator shifted = combine(1.0, s2, -target, identity_operator(sector.size()), OperatorSymmetry::Hermitian);
  FciResult r = solve(combine(1.0, hamiltonian, opt.spin_penalty, shifted, OperatorSymmetry::Hermitian));
  r.s2 = r.ground_vector.dot(s2.apply(r.ground_vector));
  if (std::abs(r.s2 - target) > 1e-6)
    throw FciConvergenceError("fci_ground_state: spin penalty too small, <S^2> = " + std::to_string(r.s2));
  return r;
}

FciResult fci_dense(const SectorOperator& hamiltonian) {
  const lapack_int n = static_cast<lapack_int>(hamiltonian.dim());
  Eigen::MatrixXd a = hamiltonian.dense();
  FciResult r;
  r.dimension = static_cast<std::size_t>(n);
  if (n == 1) {
    r.energy = a(0, 0);
    r.ground_vector = SectorVector::Ones(1);
    return r;
  }
  lapack_int found = 0;
  std::vector<double> w(static_cast<std::size_t>(n));
  Eigen::VectorXd z(n);
  std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_dsyevx(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1, 1, abstol,
                                         &found, w.data(), z.data(), n, ifail.data());
  if (info != 0 || found != 1) throw FciConvergenceError("dsyevx failed with info " + std::to_string(info));
  r.energy = w[0];
  // Fix the sign so the largest component is positive.
  Eigen::Index imax = 0;
  z.cwiseAbs().maxCoeff(&imax);
  if (z[imax] < 0) z = -z;
  r.ground_vector = z;
  // Some optimized BLAS builds return inaccurate eigenvectors for larger
  // matrices; the eigen-residual is checked and a bad vector is polished by
  // Davidson iteration seeded with it.
  if (eigen_residual(hamiltonian, r) > kEigenResidualTol) {
    try {
      FciResult polished = fci_davidson(hamiltonian, z);
      polished.refined = true;
      return polished;
    } catch (const FciConvergenceError&) {
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian.dense());
    if (es.info() != Eigen::Success) throw FciConvergenceError("dense eigensolver failed");
    r.energy = es.eigenvalues()[0];
    z = es.eigenvectors().col(0);
    z.cwiseAbs().maxCoeff(&imax);
    r.ground_vector = z[imax] < 0 ? Eigen::VectorXd(-z) : z;
    r.refined = true;
  }
  return r;
}

FciResult fci_davidson(const SectorOperator& hamiltonian, std::size_t start, const DavidsonOptions& opt) {
  SectorVector guess = SectorVector::Zero(static_cast<Eigen::Index>(hamiltonian.dim()));
  guess[static_cast<Eigen::Index>(start)] = 1.0;
  return fci_davidson(hamiltonian, guess, opt);
}

FciResult fci_davidson(const SectorOperator& hamiltonian, const SectorVector& guess, const DavidsonOptions& opt) {
  const std::size_t n = hamiltonian.dim();
  if (static_cast<std::size_t>(guess.size()) != n || !(guess.norm() > 0.0))
    throw std::invalid_argument("fci_davidson: guess must be a nonzero vector of the operator dimension");
  const Eigen::VectorXd diag = hamiltonian.matrix().diagonal();
  FciResult r;
  r.dimension = n;

  const int maxs = std::min<int>(opt.max_subspace, static_cast<int>(n));
  const int keep = std::min(8, std::max(1, maxs / 4));
  Eigen::MatrixXd basis(n, maxs), sigma(n, maxs);
  int m = 0;
  Eigen::VectorXd v = guess.normalized();

  Eigen::MatrixXd ritz;  // eigenvectors of the projected matrix
  double theta = 0.0;
  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    if (m == maxs) {
      // Thick restart on the lowest few Ritz vectors.
      const Eigen::MatrixXd c = ritz.leftCols(keep);
      const Eigen::MatrixXd b = basis.leftCols(m) * c, sg = sigma.leftCols(m) * c;
      basis.leftCols(keep) = b;
      sigma.leftCols(keep) = sg;
      m = keep;
    }
    // Orthogonalise the new direction twice against the current basis.
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < m; ++k) v -= basis.col(k).dot(v) * basis.col(k);
    const double nv = v.norm();
    if (nv < 1e-14 && m > 0) {
      r.iterations = iter;
      break;
    }
    basis.col(m) = v / nv;
    sigma.col(m) = hamiltonian.apply(basis.col(m));
    ++m;

    const Eigen::MatrixXd proj = basis.leftCols(m).transpose() * sigma.leftCols(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (proj + proj.transpose()));
    ritz = es.eigenvectors();
    theta = es.eigenvalues()[0];
    const Eigen::VectorXd c = ritz.col(0);
    const Eigen::VectorXd x = basis.leftCols(m) * c;
    const Eigen::VectorXd res = sigma.leftCols(m) * c - theta * x;
    r.iterations = iter;
    if (res.norm() < opt.tol) {
      r.energy = theta;
      Eigen::Index imax = 0;
      x.cwiseAbs().maxCoeff(&imax);
      r.ground_vector = x[imax] < 0 ? Eigen::VectorXd(-x) : x;
      return r;
    }
    v = res;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      double d = theta - diag[i];
      if (std::abs(d) < 1e-8) d = d < 0 ? -1e-8 : 1e-8;
      v[i] /= d;
    }
  }
  throw FciConvergenceError("Davidson did not converge in " + std::to_string(opt.max_iter) + " iterations");
}

}  // namespace ucc
