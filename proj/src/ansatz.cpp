#include "ucc/ansatz.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ucc {

std::string GeneratorSet::label() const {
  std::string base;
  switch (kind) {
    case GeneratorKind::DoublesFull: base = "UCCD"; break;
    case GeneratorKind::DoublesPaired: base = "pUCCD"; break;
    case GeneratorKind::SinglesDoublesFull: base = "UCCSD"; break;
  }
  return trotterized ? "t" + base : base;
}

GeneratorSet build_generators(const SpinOrbitalHamiltonian& h, GeneratorKind kind, bool trotterized) {
  GeneratorSet gs;
  gs.kind = kind;
  gs.trotterized = trotterized;
  gs.n_so = h.n_so;
  gs.n_occ = h.n_occ;
  const int nocc = h.n_occ / 2;
  const int norb = h.n_so / 2;

  auto double_exc = [](int i, int j, int a, int b) {
    Excitation e;
    e.rank = 2;
    e.annihilators = {std::min(i, j), std::max(i, j)};
    e.creators = {std::min(a, b), std::max(a, b)};
    return e;
  };

  if (kind == GeneratorKind::DoublesPaired) {
    for (int I = 0; I < nocc; ++I)
      for (int A = nocc; A < norb; ++A) gs.generators.push_back(double_exc(2 * I, 2 * I + 1, 2 * A, 2 * A + 1));
    return gs;
  }

  for (int I = 0; I < nocc; ++I)
    for (int J = 0; J < nocc; ++J)
      for (int A = nocc; A < norb; ++A)
        for (int B = nocc; B < norb; ++B) gs.generators.push_back(double_exc(2 * I, 2 * J + 1, 2 * A, 2 * B + 1));
  for (int spin = 0; spin < 2; ++spin)
    for (int I = 0; I < nocc; ++I)
      for (int J = I + 1; J < nocc; ++J)
        for (int A = nocc; A < norb; ++A)
          for (int B = A + 1; B < norb; ++B)
            gs.generators.push_back(double_exc(2 * I + spin, 2 * J + spin, 2 * A + spin, 2 * B + spin));

  if (kind == GeneratorKind::SinglesDoublesFull) {
    for (int spin = 0; spin < 2; ++spin)
      for (int I = 0; I < nocc; ++I)
        for (int A = nocc; A < norb; ++A) {
          Excitation e;
          e.rank = 1;
          e.annihilators = {2 * I + spin, 0};
          e.creators = {2 * A + spin, 0};
          gs.generators.push_back(e);
        }
  }
  return gs;
}

CompiledAnsatz::CompiledAnsatz(GeneratorSet gens, const DeterminantSector& sector)
    : gens_(std::move(gens)), dim_(sector.size()), hf_index_(sector.hf_index()) {
  if (sector.n_so() != gens_.n_so) throw std::invalid_argument("CompiledAnsatz: sector/generator mismatch");
  couplings_.resize(gens_.generators.size());
  struct Entry {
    int row, col, gen;
    double sign;
  };
  std::vector<Entry> entries;
  for (std::size_t mu = 0; mu < gens_.generators.size(); ++mu) {
    const Excitation& e = gens_.generators[mu];
    for (std::size_t k = 0; k < sector.size(); ++k) {
      const std::array<int, 2> ann{e.annihilators[e.rank - 1], e.annihilators[0]};
      const auto r = apply_string(sector.det(k), e.c(), std::span<const int>(ann.data(), e.rank));
      if (!r) continue;
      const auto dst = sector.index_of(r->det);
      if (!dst) continue;
      const Coupling c{static_cast<int>(k), static_cast<int>(*dst), static_cast<double>(r->sign)};
      couplings_[mu].push_back(c);
      entries.push_back({c.dst, c.src, static_cast<int>(mu), c.sign});
      entries.push_back({c.src, c.dst, static_cast<int>(mu), -c.sign});
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  for (std::size_t k = 1; k < entries.size(); ++k)
    if (entries[k].row == entries[k - 1].row && entries[k].col == entries[k - 1].col)
      throw std::logic_error("CompiledAnsatz: two generators couple the same determinant pair");
  row_ptr_.assign(dim_ + 1, 0);
  col_.reserve(entries.size());
  gen_.reserve(entries.size());
  sign_.reserve(entries.size());
  for (const Entry& e : entries) {
    ++row_ptr_[e.row + 1];
    col_.push_back(e.col);
    gen_.push_back(e.gen);
    sign_.push_back(e.sign);
  }
  std::partial_sum(row_ptr_.begin(), row_ptr_.end(), row_ptr_.begin());
}

void CompiledAnsatz::check(std::span<const double> params) const {
  if (params.size() != gens_.param_count())
    throw std::invalid_argument("parameter count " + std::to_string(params.size()) + " does not match " +
                                std::to_string(gens_.param_count()) + " generators");
}

void CompiledAnsatz::apply_factor(std::size_t mu, double theta, std::span<double> v) const {
  if (theta == 0.0) return;
  const double c = std::cos(theta), s = std::sin(theta);
  for (const Coupling& p : couplings_[mu]) {
    const double x = v[p.src], y = v[p.dst];
    v[p.src] = c * x - s * p.sign * y;
    v[p.dst] = c * y + s * p.sign * x;
  }
}

std::vector<double> CompiledAnsatz::pattern_values(std::span<const double> params, double& norm1) const {
  std::vector<double> val(col_.size());
  norm1 = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    double rowsum = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      val[k] = sign_[k] * params[gen_[k]];
      rowsum += std::abs(val[k]);
    }
    norm1 = std::max(norm1, rowsum);
  }
  return val;
}

SectorVector CompiledAnsatz::prepare(std::span<const double> params) const {
  check(params);
  SectorVector v = SectorVector::Zero(static_cast<Eigen::Index>(dim_));
  v[static_cast<Eigen::Index>(hf_index_)] = 1.0;
  std::span<double> sv(v.data(), dim_);
  if (gens_.trotterized) {
    for (std::size_t mu = 0; mu < params.size(); ++mu) apply_factor(mu, params[mu], sv);
  } else {
    double norm1 = 0.0;
    const auto val = pattern_values(params, norm1);
    const kernels::CsrView a{dim_, row_ptr_.data(), col_.data(), val.data()};
    detail::expv(a, norm1, 1.0, sv);
  }
  return v;
}

double CompiledAnsatz::energy(std::span<const double> params, const SectorOperator& hamiltonian,
                              std::span<double> grad) const {
  check(params);
  if (hamiltonian.dim() != dim_) throw std::invalid_argument("CompiledAnsatz::energy: dimension mismatch");
  if (!grad.empty() && grad.size() != params.size())
    throw std::invalid_argument("CompiledAnsatz::energy: gradient length mismatch");
  return gens_.trotterized ? trotter_energy(params, hamiltonian, grad)
                           : exponential_energy(params, hamiltonian, grad);
}

double CompiledAnsatz::trotter_energy(std::span<const double> params, const SectorOperator& h,
                                      std::span<double> grad) const {
  SectorVector psi = prepare(params);
  SectorVector lam = h.apply(psi);
  const double e = kernels::dot({psi.data(), dim_}, {lam.data(), dim_});
  if (grad.empty()) return e;
  std::span<double> ps(psi.data(), dim_), ls(lam.data(), dim_);
  // Backward sweep: peel factors off psi and H psi from the last one.
  for (std::size_t mu = params.size(); mu-- > 0;) {
    double g = 0.0;
    for (const Coupling& p : couplings_[mu]) g += p.sign * (lam[p.dst] * psi[p.src] - lam[p.src] * psi[p.dst]);
    grad[mu] = 2.0 * g;
    apply_factor(mu, -params[mu], ps);
    apply_factor(mu, -params[mu], ls);
  }
  return e;
}

double CompiledAnsatz::exponential_energy(std::span<const double> params, const SectorOperator& h,
                                          std::span<double> grad) const {
  double norm1 = 0.0;
  const auto val = pattern_values(params, norm1);
  const kernels::CsrView a{dim_, row_ptr_.data(), col_.data(), val.data()};
  SectorVector psi = SectorVector::Zero(static_cast<Eigen::Index>(dim_));
  psi[static_cast<Eigen::Index>(hf_index_)] = 1.0;
  detail::expv(a, norm1, 1.0, {psi.data(), dim_});
  SectorVector lam = h.apply(psi);
  const double e = kernels::dot({psi.data(), dim_}, {lam.data(), dim_});
  if (grad.empty()) return e;

  // dE/dtheta_mu = 2 int_0^1 <e^{-sA} H psi | tau_mu | e^{-sA} psi> ds,
  // evaluated by Gauss-Legendre quadrature while propagating both vectors.
  const int nodes = std::min(64, 8 + 2 * static_cast<int>(std::ceil(norm1)));
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
      gsl_integration_glfixed_table_alloc(nodes), &gsl_integration_glfixed_table_free);
  std::vector<std::pair<double, double>> pts(nodes);
  for (int k = 0; k < nodes; ++k) gsl_integration_glfixed_point(0.0, 1.0, k, &pts[k].first, &pts[k].second, table.get());
  std::sort(pts.begin(), pts.end());

  std::fill(grad.begin(), grad.end(), 0.0);
  double s_prev = 0.0;
  for (const auto& [s, w] : pts) {
    detail::expv(a, norm1, -(s - s_prev), {lam.data(), dim_});
    detail::expv(a, norm1, -(s - s_prev), {psi.data(), dim_});
    s_prev = s;
    for (std::size_t r = 0; r < dim_; ++r) {
      const double lr = w * lam[static_cast<Eigen::Index>(r)];
      if (lr == 0.0) continue;
      for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) grad[gen_[k]] += lr * sign_[k] * psi[col_[k]];
    }
  }
  for (double& g : grad) g *= 2.0;
  return e;
}

SectorOperator CompiledAnsatz::generator_matrix(std::size_t mu) const {
  std::vector<Eigen::Triplet<double>> trip;
  for (const Coupling& p : couplings_.at(mu)) {
    trip.emplace_back(p.dst, p.src, p.sign);
    trip.emplace_back(p.src, p.dst, -p.sign);
  }
  SectorOperator::Sparse m(dim_, dim_);
  m.setFromTriplets(trip.begin(), trip.end());
  return SectorOperator(std::move(m), OperatorSymmetry::AntiHermitian);
}

SectorOperator CompiledAnsatz::summed_generator(std::span<const double> params) const {
  check(params);
  double norm1 = 0.0;
  const auto val = pattern_values(params, norm1);
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t r = 0; r < dim_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) trip.emplace_back(static_cast<int>(r), col_[k], val[k]);
  SectorOperator::Sparse m(dim_, dim_);
  m.setFromTriplets(trip.begin(), trip.end());
  return SectorOperator(std::move(m), OperatorSymmetry::AntiHermitian);
}

SectorVector prepare_state(const GeneratorSet& gens, std::span<const double> params, const DeterminantSector& sector) {
  return CompiledAnsatz(gens, sector).prepare(params);
}

Amplitudes params_to_t2(const GeneratorSet& gens, std::span<const double> params) {
  if (gens.kind == GeneratorKind::SinglesDoublesFull)
    throw std::invalid_argument("params_to_t2: singles-bearing generator sets are not supported");
  if (params.size() != gens.param_count()) throw std::invalid_argument("params_to_t2: parameter count mismatch");
  const int no = gens.n_occ, nv = gens.n_so - gens.n_occ;
  Amplitudes amps(no, nv);
  for (std::size_t mu = 0; mu < params.size(); ++mu) {
    const Excitation& e = gens.generators[mu];
    const int i = e.annihilators[0], j = e.annihilators[1];
    const int a = e.creators[0] - no, b = e.creators[1] - no;
    const double t = params[mu];
    amps.t2(i, j, a, b) = t;
    amps.t2(j, i, a, b) = -t;
    amps.t2(i, j, b, a) = -t;
    amps.t2(j, i, b, a) = t;
  }
  return amps;
}

std::vector<double> amplitudes_to_params(const GeneratorSet& gens, const Amplitudes& amps) {
  const int no = gens.n_occ;
  std::vector<double> p;
  p.reserve(gens.param_count());
  for (const Excitation& e : gens.generators) {
    if (e.rank == 1)
      p.push_back(amps.t1(e.annihilators[0], e.creators[0] - no));
    else
      p.push_back(amps.t2(e.annihilators[0], e.annihilators[1], e.creators[0] - no, e.creators[1] - no));
  }
  return p;
}

void write_amplitudes(std::ostream& out, const Amplitudes& amps) {
  const int no = amps.n_occ(), nv = amps.n_virt();
  out << "# i j a b value  (0-based spin orbitals, i<j, a<b)\n";
  char buf[128];
  for (int i = 0; i < no; ++i)
    for (int j = i + 1; j < no; ++j)
      for (int a = 0; a < nv; ++a)
        for (int b = a + 1; b < nv; ++b) {
          const double t = amps.t2(i, j, a, b);
          if (t == 0.0) continue;
          std::snprintf(buf, sizeof buf, "%d %d %d %d %.17g\n", i, j, no + a, no + b, t);
          out << buf;
        }
}

Amplitudes read_amplitudes(std::istream& in, int n_occ, int n_virt) {
  Amplitudes amps(n_occ, n_virt);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    int i, j, a, b;
    double t;
    if (!(is >> i)) continue;
    if (!(is >> j >> a >> b >> t))
      throw std::runtime_error("amplitude line " + std::to_string(lineno) + ": expected 'i j a b value'");
    a -= n_occ;
    b -= n_occ;
    if (i < 0 || j < 0 || i >= n_occ || j >= n_occ || a < 0 || b < 0 || a >= n_virt || b >= n_virt || i == j ||
        a == b)
      throw std::runtime_error("amplitude line " + std::to_string(lineno) + ": index out of range");
    amps.t2(i, j, a, b) = t;
    amps.t2(j, i, a, b) = -t;
    amps.t2(i, j, b, a) = -t;
    amps.t2(j, i, b, a) = t;
  }
  return amps;
}

}  // namespace ucc
