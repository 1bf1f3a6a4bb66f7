#include "ucc/fock_sector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace ucc {

namespace {

constexpr double kSymmetryTol = 1e-12;

std::vector<Det> spin_strings(int n_orb, int n_el, int spin) {
  std::vector<Det> out;
  if (n_el > n_orb) return out;
  std::vector<int> pick(n_el);
  for (int k = 0; k < n_el; ++k) pick[k] = k;
  while (true) {
    Det d = 0;
    for (int p : pick) d |= Det{1} << (2 * p + spin);
    out.push_back(d);
    int k = n_el - 1;
    while (k >= 0 && pick[k] == n_orb - n_el + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int m = k + 1; m < n_el; ++m) pick[m] = pick[m - 1] + 1;
  }
  return out;
}

inline int parity_below(Det d, int p) {
  return std::popcount(d & ((Det{1} << p) - 1)) & 1;
}

}  // namespace

DeterminantSector::DeterminantSector(int n_so, int n_alpha, int n_beta)
    : n_so_(n_so), n_alpha_(n_alpha), n_beta_(n_beta) {
  if (n_so <= 0 || n_so % 2 != 0 || n_so > 64) throw std::invalid_argument("sector: n_so must be even and <= 64");
  if (n_alpha < 0 || n_beta < 0 || n_alpha > n_so / 2 || n_beta > n_so / 2)
    throw std::invalid_argument("sector: impossible occupation");
  const auto alpha = spin_strings(n_so / 2, n_alpha, 0);
  const auto beta = spin_strings(n_so / 2, n_beta, 1);
  dets_.reserve(alpha.size() * beta.size());
  for (Det a : alpha)
    for (Det b : beta) dets_.push_back(a | b);
  std::sort(dets_.begin(), dets_.end());
  Det hf = 0;
  for (int p = 0; p < n_alpha; ++p) hf |= Det{1} << (2 * p);
  for (int p = 0; p < n_beta; ++p) hf |= Det{1} << (2 * p + 1);
  hf_index_ = *index_of(hf);
}

std::optional<std::size_t> DeterminantSector::index_of(Det d) const {
  const auto it = std::lower_bound(dets_.begin(), dets_.end(), d);
  if (it == dets_.end() || *it != d) return std::nullopt;
  return static_cast<std::size_t>(it - dets_.begin());
}

DeterminantSector enumerate_sector(int n_so, int n_alpha, int n_beta) {
  if (n_alpha + n_beta > n_so) throw std::invalid_argument("sector: more electrons than spin orbitals");
  return DeterminantSector(n_so, n_alpha, n_beta);
}

std::optional<PhasedDet> apply_string(Det d, std::span<const int> creators, std::span<const int> annihilators) {
  int sign = 1;
  for (int p : annihilators) {
    if (!occupied(d, p)) return std::nullopt;
    if (parity_below(d, p)) sign = -sign;
    d &= ~(Det{1} << p);
  }
  for (auto it = creators.rbegin(); it != creators.rend(); ++it) {
    const int p = *it;
    if (occupied(d, p)) return std::nullopt;
    if (parity_below(d, p)) sign = -sign;
    d |= Det{1} << p;
  }
  return PhasedDet{d, sign};
}

SectorOperator::SectorOperator(Sparse m, OperatorSymmetry sym) : m_(std::move(m)), sym_(sym) {
  m_.makeCompressed();
  if (m_.rows() != m_.cols()) throw std::invalid_argument("SectorOperator: matrix must be square");
  if (sym != OperatorSymmetry::General && symmetry_residual(sym) > kSymmetryTol)
    throw ContractViolation(sym == OperatorSymmetry::Hermitian ? "operator is not Hermitian"
                                                                : "operator is not anti-Hermitian");
}

double SectorOperator::symmetry_residual(OperatorSymmetry sym) const {
  const Sparse t = m_.transpose();
  const Sparse r = sym == OperatorSymmetry::AntiHermitian ? Sparse(m_ + t) : Sparse(m_ - t);
  double worst = 0.0;
  for (int k = 0; k < r.nonZeros(); ++k) worst = std::max(worst, std::abs(r.valuePtr()[k]));
  return worst;
}

kernels::CsrView SectorOperator::csr() const {
  return {static_cast<std::size_t>(m_.rows()), m_.outerIndexPtr(), m_.innerIndexPtr(), m_.valuePtr()};
}

SectorVector SectorOperator::apply(const SectorVector& v) const {
  SectorVector out(m_.rows());
  apply(std::span<const double>(v.data(), v.size()), std::span<double>(out.data(), out.size()));
  return out;
}

void SectorOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != dim()) throw std::invalid_argument("SectorOperator::apply: dimension mismatch");
  kernels::spmv(csr(), x, y);
}

SectorOperator SectorOperator::adjoint() const { return SectorOperator(Sparse(m_.transpose()), sym_); }

double SectorOperator::norm1() const {
  Eigen::VectorXd col = Eigen::VectorXd::Zero(m_.cols());
  for (int k = 0; k < m_.nonZeros(); ++k) col[m_.innerIndexPtr()[k]] += std::abs(m_.valuePtr()[k]);
  return m_.cols() ? col.maxCoeff() : 0.0;
}

SectorOperator product(const SectorOperator& a, const SectorOperator& b) {
  return SectorOperator(SectorOperator::Sparse(a.matrix() * b.matrix()), OperatorSymmetry::General);
}

SectorOperator combine(double alpha, const SectorOperator& a, double beta, const SectorOperator& b,
                       OperatorSymmetry sym) {
  return SectorOperator(SectorOperator::Sparse(alpha * a.matrix() + beta * b.matrix()), sym);
}

SectorOperator identity_operator(std::size_t dim) {
  SectorOperator::Sparse m(dim, dim);
  m.setIdentity();
  return SectorOperator(std::move(m), OperatorSymmetry::Hermitian);
}

SectorOperator excitation_matrix(const DeterminantSector& sector, std::span<const int> creators,
                                 std::span<const int> annihilators) {
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t col = 0; col < sector.size(); ++col) {
    const auto r = apply_string(sector.det(col), creators, annihilators);
    if (!r) continue;
    const auto row = sector.index_of(r->det);
    if (!row) continue;
    trip.emplace_back(static_cast<int>(*row), static_cast<int>(col), r->sign);
  }
  SectorOperator::Sparse m(sector.size(), sector.size());
  m.setFromTriplets(trip.begin(), trip.end());
  return SectorOperator(std::move(m), OperatorSymmetry::General);
}

SectorOperator hamiltonian_matrix(const DeterminantSector& sector, const SpinOrbitalHamiltonian& h) {
  if (sector.n_so() != h.n_so || sector.n_alpha() + sector.n_beta() != h.n_occ)
    throw std::invalid_argument("hamiltonian_matrix: sector does not match Hamiltonian");
  const int n = h.n_so;
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<int> occ, vir;
  for (std::size_t col = 0; col < sector.size(); ++col) {
    const Det d = sector.det(col);
    occ.clear();
    vir.clear();
    for (int p = 0; p < n; ++p) (occupied(d, p) ? occ : vir).push_back(p);

    double diag = h.e_core;
    for (int k : occ) {
      diag += h.hcore(k, k);
      for (int l : occ) diag += 0.5 * h.v_anti(k, l, k, l);
    }
    trip.emplace_back(static_cast<int>(col), static_cast<int>(col), diag);

    for (int i : occ)
      for (int a : vir) {
        if (spin_of(i) != spin_of(a)) continue;
        double v = h.hcore(a, i);
        for (int k : occ) v += h.v_anti(a, k, i, k);
        if (v == 0.0) continue;
        const int c[1] = {a}, an[1] = {i};
        const auto r = apply_string(d, c, an);
        trip.emplace_back(static_cast<int>(*sector.index_of(r->det)), static_cast<int>(col), r->sign * v);
      }

    for (std::size_t x = 0; x < occ.size(); ++x)
      for (std::size_t y = x + 1; y < occ.size(); ++y)
        for (std::size_t u = 0; u < vir.size(); ++u)
          for (std::size_t w = u + 1; w < vir.size(); ++w) {
            const int i = occ[x], j = occ[y], a = vir[u], b = vir[w];
            if (spin_of(i) + spin_of(j) != spin_of(a) + spin_of(b)) continue;
            const double v = h.v_anti(a, b, i, j);
            if (v == 0.0) continue;
            const int c[2] = {a, b}, an[2] = {i, j};
            const auto r = apply_string(d, c, an);
            trip.emplace_back(static_cast<int>(*sector.index_of(r->det)), static_cast<int>(col), r->sign * v);
          }
  }
  SectorOperator::Sparse m(sector.size(), sector.size());
  m.setFromTriplets(trip.begin(), trip.end());
  return SectorOperator(std::move(m), OperatorSymmetry::Hermitian);
}

SectorOperator hamiltonian_matrix_from_strings(const DeterminantSector& sector, const SpinOrbitalHamiltonian& h) {
  if (sector.n_so() != h.n_so) throw std::invalid_argument("hamiltonian_matrix_from_strings: dimension mismatch");
  const int n = h.n_so;
  std::vector<Eigen::Triplet<double>> trip;
  auto add = [&](std::size_t col, std::span<const int> c, std::span<const int> an, double coef) {
    const auto r = apply_string(sector.det(col), c, an);
    if (!r) return;
    const auto row = sector.index_of(r->det);
    if (!row) return;
    trip.emplace_back(static_cast<int>(*row), static_cast<int>(col), r->sign * coef);
  };
  for (std::size_t col = 0; col < sector.size(); ++col) {
    trip.emplace_back(static_cast<int>(col), static_cast<int>(col), h.e_core);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        if (h.hcore(p, q) == 0.0) continue;
        const int c[1] = {p}, an[1] = {q};
        add(col, c, an, h.hcore(p, q));
      }
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s) {
            const double v = h.v_anti(p, q, r, s);
            if (v == 0.0) continue;
            const int c[2] = {p, q}, an[2] = {r, s};
            add(col, c, an, 0.25 * v);
          }
  }
  SectorOperator::Sparse m(sector.size(), sector.size());
  m.setFromTriplets(trip.begin(), trip.end());
  m.prune(0.0);
  return SectorOperator(std::move(m), OperatorSymmetry::Hermitian);
}

SectorOperator fock_diagonal_matrix(const DeterminantSector& sector, const SpinOrbitalHamiltonian& h) {
  const Det hf = sector.hf_det();
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t k = 0; k < sector.size(); ++k) {
    const Det d = sector.det(k);
    double v = 0.0;
    for (int p = 0; p < h.n_so; ++p) v += h.fock(p, p) * (int(occupied(d, p)) - int(occupied(hf, p)));
    if (v != 0.0) trip.emplace_back(static_cast<int>(k), static_cast<int>(k), v);
  }
  SectorOperator::Sparse m(sector.size(), sector.size());
  m.setFromTriplets(trip.begin(), trip.end());
  return SectorOperator(std::move(m), OperatorSymmetry::Hermitian);
}

SectorOperator spin_squared_matrix(const DeterminantSector& sector) {
  // S^2 = Sz^2 + Sz + S- S+, with S+ = sum_P a+(P alpha) a(P beta).
  const int norb = sector.n_so() / 2;
  const double sz = 0.5 * (sector.n_alpha() - sector.n_beta());
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t col = 0; col < sector.size(); ++col) {
    trip.emplace_back(static_cast<int>(col), static_cast<int>(col), sz * sz + sz);
    for (int P = 0; P < norb; ++P) {
      const int up_c[1] = {2 * P}, up_a[1] = {2 * P + 1};
      const auto raised = apply_string(sector.det(col), up_c, up_a);
      if (!raised) continue;
      for (int Q = 0; Q < norb; ++Q) {
        const int dn_c[1] = {2 * Q + 1}, dn_a[1] = {2 * Q};
        const auto r = apply_string(raised->det, dn_c, dn_a);
        if (!r) continue;
        trip.emplace_back(static_cast<int>(*sector.index_of(r->det)), static_cast<int>(col),
                          double(raised->sign * r->sign));
      }
    }
  }
  SectorOperator::Sparse m(sector.size(), sector.size());
  m.setFromTriplets(trip.begin(), trip.end());
  m.prune(0.0);
  return SectorOperator(std::move(m), OperatorSymmetry::Hermitian);
}

SectorOperator perturbation_matrix(const DeterminantSector& sector, const SpinOrbitalHamiltonian& h,
                                   const SectorOperator& hamiltonian) {
  const SectorOperator fn = fock_diagonal_matrix(sector, h);
  SectorOperator::Sparse w = hamiltonian.matrix() - fn.matrix();
  for (std::size_t k = 0; k < sector.size(); ++k) w.coeffRef(static_cast<int>(k), static_cast<int>(k)) -= h.e_hf;
  return SectorOperator(std::move(w), OperatorSymmetry::Hermitian);
}

SectorOperator cluster_matrix(const DeterminantSector& sector, const Amplitudes& amps) {
  const int no = amps.n_occ(), nv = amps.n_virt();
  std::vector<Eigen::Triplet<double>> trip;
  auto add_string = [&](std::span<const int> c, std::span<const int> an, double coef) {
    for (std::size_t col = 0; col < sector.size(); ++col) {
      const auto r = apply_string(sector.det(col), c, an);
      if (!r) continue;
      const auto row = sector.index_of(r->det);
      if (row) trip.emplace_back(static_cast<int>(*row), static_cast<int>(col), r->sign * coef);
    }
  };
  for (int i = 0; i < no; ++i)
    for (int a = 0; a < nv; ++a)
      if (amps.t1(i, a) != 0.0) {
        const int c[1] = {no + a}, an[1] = {i};
        add_string(c, an, amps.t1(i, a));
      }
  for (int i = 0; i < no; ++i)
    for (int j = i + 1; j < no; ++j)
      for (int a = 0; a < nv; ++a)
        for (int b = a + 1; b < nv; ++b)
          if (amps.t2(i, j, a, b) != 0.0) {
            const int c[2] = {no + a, no + b}, an[2] = {i, j};
            add_string(c, an, amps.t2(i, j, a, b));
          }
  SectorOperator::Sparse m(sector.size(), sector.size());
  m.setFromTriplets(trip.begin(), trip.end());
  return SectorOperator(std::move(m), OperatorSymmetry::General);
}

namespace detail {

void expv(const kernels::CsrView& a, double norm1, double t, std::span<double> v) {
  const std::size_t n = v.size();
  if (n == 0 || t == 0.0 || norm1 == 0.0) return;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) * norm1)));
  const double h = t / steps;
  std::vector<double> term(n), next(n);
  for (int s = 0; s < steps; ++s) {
    const double vnorm = std::sqrt(kernels::dot(v, v));
    if (vnorm == 0.0) return;
    std::copy(v.begin(), v.end(), term.begin());
    for (int k = 1; k < 200; ++k) {
      kernels::spmv(a, term, next);
      const double c = h / k;
      for (std::size_t i = 0; i < n; ++i) term[i] = c * next[i];
      kernels::axpy(1.0, term, v);
      if (std::sqrt(kernels::dot(term, term)) < 1e-15 * vnorm) break;
    }
  }
}

}  // namespace detail

SectorVector apply_exponential(const SectorOperator& gen, const SectorVector& v) {
  if (gen.symmetry() != OperatorSymmetry::AntiHermitian)
    throw ContractViolation("apply_exponential requires an anti-Hermitian generator");
  if (static_cast<std::size_t>(v.size()) != gen.dim())
    throw std::invalid_argument("apply_exponential: dimension mismatch");
  SectorVector out = v;
  detail::expv(gen.csr(), gen.norm1(), 1.0, std::span<double>(out.data(), out.size()));
  return out;
}

}  // namespace ucc
