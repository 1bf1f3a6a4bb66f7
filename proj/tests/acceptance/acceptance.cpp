// Acceptance suite. Prints one PASS/FAIL line per criterion, preceded by the
// measurements it was judged on. Usage: acceptance [criterion ...]; with no
// arguments every criterion runs. Exit status is nonzero if any selected
// criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/test_util.hpp"
#include "ucc/bench.hpp"
#include "ucc/fock_sector.hpp"
#include "ucc/singles_corr.hpp"

using namespace ucc;
using ucc::testing::fixture;
using ucc::testing::load_system;

namespace {

struct Preset {
  const char* stem;
  int frozen;
};

const std::vector<Preset> kPresets = {
    {"h2_eq", 0},        {"h4_chain", 0},     {"c2_eq", 2},        {"co_eq", 2},        {"n2_eq", 2},
    {"o2_eq", 2},        {"h2o_eq", 1},       {"c2_stretched", 2}, {"co_stretched", 2}, {"n2_stretched", 2},
    {"o2_stretched", 2}, {"h2o_s", 1},        {"h2o_d", 1},
};

const std::vector<std::string> kUccFamily = {"UCCD", "tUCCD", "pUCCD", "tpUCCD", "UCCSD", "tUCCSD"};
const std::vector<std::string> kDoublesOnly = {"UCCD", "tUCCD", "pUCCD", "tpUCCD"};

using Clock = std::chrono::steady_clock;

class Criterion {
 public:
  explicit Criterion(std::string name) : name_(std::move(name)), t0_(Clock::now()) {}

  void detail(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    std::printf("  ");
    va_list ap;
    va_start(ap, fmt);
    std::vprintf(fmt, ap);
    va_end(ap);
    std::printf("\n");
  }

  double seconds() const { return std::chrono::duration<double>(Clock::now() - t0_).count(); }

  bool verdict(bool ok, double budget_s, const std::string& summary) {
    const double t = seconds();
    const bool in_time = t <= budget_s;
    const bool pass = ok && in_time;
    std::printf("%s %s: %s [%.1f s of %.0f s budget%s]\n", pass ? "PASS" : "FAIL", name_.c_str(), summary.c_str(), t,
                budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
    return pass;
  }

 private:
  std::string name_;
  Clock::time_point t0_;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// e^A for real antisymmetric A through the Hermitian matrix iA.
Eigen::MatrixXd dense_exp_antisymmetric(const Eigen::MatrixXd& a) {
  const Eigen::MatrixXcd herm = std::complex<double>(0.0, 1.0) * a.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  const Eigen::VectorXcd phases =
      (es.eigenvalues().cast<std::complex<double>>() * std::complex<double>(0.0, -1.0)).array().exp();
  return (es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint()).real();
}

bool oracle_equivalence() {
  Criterion c("oracle-equivalence");
  const auto h = load_system("h4_chain");
  const auto sector = enumerate_sector(h.n_so, h.n_occ / 2, h.n_occ / 2);
  const auto w = perturbation_matrix(sector, h, hamiltonian_matrix(sector, h));
  const auto d = denominators(h);
  const auto hf = static_cast<Eigen::Index>(sector.hf_index());

  std::mt19937 rng(20240601);
  double dev2 = 0.0, dev3 = 0.0, dev4 = 0.0, smallest_signal = 1e300;
  for (int trial = 0; trial < 20; ++trial) {
    const Amplitudes amps = ucc::testing::random_t2(h, rng);
    const SectorOperator t = cluster_matrix(sector, amps);
    const Eigen::MatrixXd ref2 =
        (oracle_singles_projection(sector, product(w, t), h.n_occ).array() / d.d1.array()).matrix();
    const Eigen::MatrixXd ref3 =
        (oracle_singles_projection(sector, product(t.adjoint(), product(w, t)), h.n_occ).array() / d.d1.array())
            .matrix();
    const auto r = singles_corrections(h, amps, d);
    dev2 = std::max(dev2, max_abs(r.t1_2 - ref2));
    dev3 = std::max(dev3, max_abs(r.t1_3 - ref3));
    smallest_signal = std::min({smallest_signal, max_abs(ref2), max_abs(ref3)});

    Amplitudes singles(h.n_occ, h.n_virt());
    singles.t1 = r.t1_2;
    const SectorOperator t1 = cluster_matrix(sector, singles);
    const double e4s_direct = product(t1.adjoint(), product(w, t)).matrix().coeff(hf, hf);
    dev4 = std::max(dev4, std::abs(r.e4s - e4s_direct));
  }
  c.detail("H4/STO-6G, 20 random antisymmetric t2 tensors");
  c.detail("max |T1[2] - oracle| = %.2e", dev2);
  c.detail("max |T1[3] - oracle| = %.2e", dev3);
  c.detail("max |e4s - <0|T1[2]+ W_N T2|0>| = %.2e", dev4);
  c.detail("smallest oracle magnitude compared = %.2e", smallest_signal);
  const bool ok = dev2 < 1e-10 && dev3 < 1e-10 && dev4 < 1e-10 && smallest_signal > 1e-6;
  return c.verdict(ok, 10.0, "singles amplitudes and e4s match the determinant-space oracle to 1e-10");
}

bool h2_exactness() {
  Criterion c("h2-exactness");
  auto ctx = SystemContext::from_file(fixture("h2_eq"), 0);
  const BenchConfig cfg;
  const double e_fci = run_method(ctx, parse_method("FCI"), cfg).e_total;
  const auto uccd = run_method(ctx, parse_method("UCCD"), cfg);
  const auto ccsd = run_method(ctx, parse_method("CCSD"), cfg);
  c.detail("E_FCI  = %.12f", e_fci);
  c.detail("E_UCCD = %.12f (diff %.2e)", uccd.e_total, uccd.e_total - e_fci);
  c.detail("E_CCSD = %.12f (diff %.2e)", ccsd.e_total, ccsd.e_total - e_fci);
  const bool ok = uccd.converged && ccsd.converged && std::abs(uccd.e_total - e_fci) < 1e-8 &&
                  std::abs(ccsd.e_total - e_fci) < 1e-8;
  return c.verdict(ok, 1.0, "E_UCCD = E_CCSD = E_FCI for H2/STO-6G to 1e-8");
}

// One pass over the presets feeds both the variational-bound and the
// attractiveness criteria.
bool variational_and_attractive() {
  Criterion cv("variational-bound");
  const BenchConfig cfg;
  bool bound_ok = true, attractive_ok = true;
  double worst_bound = 1e300;
  int checked_bound = 0, checked_attr = 0, skipped_gap = 0;
  std::vector<std::string> attr_lines;
  for (const auto& p : kPresets) {
    auto ctx = SystemContext::from_file(fixture(p.stem), p.frozen);
    const double e_fci = ctx.fci().energy;
    const auto& h = ctx.hamiltonian();
    const double gap = h.n_occ < h.n_so ? h.fock(h.n_occ, h.n_occ) - h.fock(h.n_occ - 1, h.n_occ - 1) : 0.0;
    for (const auto& m : kUccFamily) {
      const auto r = run_method(ctx, parse_method(m), cfg);
      const double margin = r.e_total - e_fci;
      worst_bound = std::min(worst_bound, margin);
      const bool ok = r.error.empty() && margin >= -1e-9;
      bound_ok = bound_ok && ok;
      ++checked_bound;
      cv.detail("%-13s %-7s E - E_FCI = %+.3e%s%s", p.stem, m.c_str(), margin, r.converged ? "" : " (unconverged)",
                ok ? "" : "  <-- violates bound");
    }
    if (!(gap > 0.0)) {
      ++skipped_gap;
      continue;
    }
    for (const auto& m : kDoublesOnly) {
      const auto r = run_method(ctx, parse_method(m + "[6S]"), cfg);
      if (!r.correction) {
        attractive_ok = false;
        attr_lines.push_back(std::string(p.stem) + " " + m + ": no correction computed (" + r.error + ")");
        continue;
      }
      const bool ok = r.correction->e4s <= 0.0 && r.correction->e6 <= 0.0;
      attractive_ok = attractive_ok && ok;
      ++checked_attr;
      char buf[160];
      std::snprintf(buf, sizeof buf, "%-13s %-7s e4s = %+.3e  e6 = %+.3e%s", p.stem, m.c_str(), r.correction->e4s,
                    r.correction->e6, ok ? "" : "  <-- positive");
      attr_lines.push_back(buf);
    }
  }
  const bool v = cv.verdict(bound_ok, 600.0,
                            std::to_string(checked_bound) + " UCC-family energies satisfy E >= E_FCI - 1e-9 (tightest " +
                                fmt("%+.2e", worst_bound) + ")");
  Criterion ca("attractiveness");
  ca.detail("corrections from the converged doubles of the variational-bound pass");
  for (const auto& l : attr_lines) ca.detail("%s", l.c_str());
  if (skipped_gap) ca.detail("%d presets without a positive HOMO-LUMO gap skipped", skipped_gap);
  const bool a = ca.verdict(attractive_ok, 600.0,
                            "e4s <= 0 and e6 <= 0 for " + std::to_string(checked_attr) + " doubles runs");
  return v && a;
}

// Lowest eigenvalue of H restricted to seniority-zero determinants. No
// pair-restricted wavefunction in these orbitals can go below it.
double seniority_zero_bound(SystemContext& ctx) {
  const auto& sec = ctx.sector();
  std::vector<Eigen::Index> idx;
  for (std::size_t k = 0; k < sec.size(); ++k) {
    const Det d = sec.det(k);
    bool paired = true;
    for (int p = 0; p < sec.n_so(); p += 2) paired = paired && occupied(d, p) == occupied(d, p + 1);
    if (paired) idx.push_back(static_cast<Eigen::Index>(k));
  }
  const auto& m = ctx.matrix().matrix();
  Eigen::MatrixXd h(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) h(a, b) = m.coeff(idx[a], idx[b]);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h, Eigen::EigenvaluesOnly).eigenvalues()[0];
}

bool table(const std::string& name, const std::string& config, double tol, double cc_tol, double budget) {
  Criterion c(name);
  const RunConfig cfg = load_run_config(std::string(UCC_CONFIG_DIR) + "/" + config);
  std::vector<MethodSpec> methods;
  for (const auto& m : cfg.methods) methods.push_back(parse_method(m));

  int cells = 0, failed = 0;
  for (const auto& sys : cfg.systems) {
    const auto col = correlation_table({sys}, methods, cfg.bench).front();
    const auto& ref = cfg.reference.at(sys.name);
    auto ctx = SystemContext::from_file(sys.fcidump, sys.n_frozen);
    const double e_hf = ctx.hamiltonian().e_hf;
    const double doci = percent_correlation(seniority_zero_bound(ctx), e_hf, ctx.fci().energy);
    double worst = 0.0;
    for (const auto& r : col.results) {
      const auto it = ref.find(r.method);
      if (it == ref.end()) continue;
      const bool is_cc = r.method == "CCD" || r.method == "CCSD";
      const double t = is_cc && cc_tol > 0.0 ? cc_tol : tol;
      const double ours = r.pct_corr.value_or(std::nan(""));
      const double dev = ours - it->second;
      const bool ok = r.converged && std::abs(dev) <= t;
      ++cells;
      failed += !ok;
      if (std::abs(dev) > std::abs(worst) || std::isnan(dev)) worst = dev;
      std::string note = r.converged ? "" : " (unconverged)";
      const bool paired = parse_method(r.method).kind == GeneratorKind::DoublesPaired &&
                          parse_method(r.method).correction == SinglesCorrectionOrder::None;
      if (paired)
        note += fmt(it->second > doci + 0.005 ? "  [reference above seniority-zero bound %.2f]"
                                              : "  [seniority-zero bound %.2f]",
                    doci);
      c.detail("%-7s %-11s ours %8.2f  reference %8.2f  dev %+6.2f  tol %.2f  %s%s", sys.name.c_str(),
               r.method.c_str(), ours, it->second, dev, t, ok ? "ok" : "OUT", note.c_str());
    }
    c.detail("%-7s largest deviation %+.2f", sys.name.c_str(), worst);
  }
  return c.verdict(failed == 0, budget,
                   std::to_string(cells - failed) + "/" + std::to_string(cells) + " cells within " + fmt("%.2f", tol) +
                       (cc_tol > 0.0 ? " (CCD/CCSD within " + fmt("%.2f", cc_tol) + ")" : ""));
}

double tag_radius(const std::string& tag) { return std::stod(tag.substr(1)); }

bool pec_shape() {
  Criterion c("pec-shape");
  bool ok = true;

  {
    const RunConfig cfg = load_run_config(std::string(UCC_CONFIG_DIR) + "/lif_scan.json");
    std::vector<MethodSpec> methods = {parse_method("UCCD[4S]"), parse_method("FCI")};
    const auto rows = scan_pec(cfg.scan, cfg.scan_frozen, methods, cfg.bench);
    for (const auto& row : rows) {
      if (row.result.method != "UCCD[4S]") continue;
      const double r = tag_radius(row.geometry_tag);
      const double err = row.error_vs_fci.value_or(std::nan(""));
      std::string expect = "-";
      bool good = true;
      if (r <= 2.2 + 1e-9) {
        expect = ">= 0";
        good = err >= 0.0;
      } else if (r >= 3.2 - 1e-9) {
        expect = "< 0";
        good = err < 0.0;
      }
      good = good && row.result.converged;
      ok = ok && good;
      c.detail("LiF %s UCCD[4S] error vs FCI %+.6f  expected %s  %s", row.geometry_tag.c_str(), err, expect.c_str(),
               good ? "ok" : "OUT");
    }
  }

  {
    const RunConfig cfg = load_run_config(std::string(UCC_CONFIG_DIR) + "/h8_scan.json");
    const std::vector<std::string> ucc = {"UCCD", "UCCSD"};
    std::vector<MethodSpec> methods;
    for (const auto& m : {"UCCD", "UCCSD", "CCD", "CCSD", "FCI"}) methods.push_back(parse_method(m));
    const auto rows = scan_pec(cfg.scan, cfg.scan_frozen, methods, cfg.bench);
    std::map<std::string, std::vector<double>> err;
    bool cc_fails = false;
    for (const auto& row : rows) {
      const auto& m = row.result.method;
      const double e = row.error_vs_fci.value_or(std::nan(""));
      if (m == "FCI") continue;
      if (m == "UCCD" || m == "UCCSD") {
        err[m].push_back(e);
        continue;
      }
      const bool flagged = !row.result.converged;
      const bool overshoot = e < -1e-3;
      if (tag_radius(row.geometry_tag) >= 1.8 - 1e-9 && (flagged || overshoot)) cc_fails = true;
      c.detail("H8 %s %-4s error vs FCI %+.6f%s", row.geometry_tag.c_str(), m.c_str(), e,
               flagged ? "  unconverged (flagged)" : (overshoot ? "  overshoots FCI" : ""));
    }
    for (const auto& m : ucc) {
      const auto& v = err[m];
      double worst = 0.0, jump = 0.0;
      bool finite = !v.empty();
      for (std::size_t k = 0; k < v.size(); ++k) {
        finite = finite && std::isfinite(v[k]) && v[k] >= -1e-9;
        worst = std::max(worst, std::abs(v[k]));
        if (k > 0) jump = std::max(jump, std::abs(v[k] - v[k - 1]));
      }
      const bool good = finite && worst < 0.05 && jump < 0.01;
      ok = ok && good;
      c.detail("H8 %-5s max error %.4f Eh, max step-to-step change %.4f Eh  %s", m.c_str(), worst, jump,
               good ? "bounded and smooth" : "OUT");
    }
    c.detail("H8 projective CC at r >= 1.8 A: %s", cc_fails ? "flagged or overshooting" : "well behaved (unexpected)");
    ok = ok && cc_fails;
  }
  return c.verdict(ok, 1800.0,
                   "LiF [4S] error sign structure and H8 UCC-bounded / projective-CC-failure ordering reproduced");
}

bool unitarity_determinism() {
  Criterion c("unitarity-determinism");
  const auto h = load_system("h4_chain");
  const auto sector = enumerate_sector(h.n_so, h.n_occ / 2, h.n_occ / 2);
  bool ok = true;

  std::mt19937 rng(99);
  double norm_dev = 0.0;
  for (auto kind : {GeneratorKind::DoublesFull, GeneratorKind::DoublesPaired, GeneratorKind::SinglesDoublesFull})
    for (bool trot : {false, true}) {
      const CompiledAnsatz an(build_generators(h, kind, trot), sector);
      std::normal_distribution<double> nd(0.0, 0.7);
      for (int k = 0; k < 100; ++k) {
        std::vector<double> p(an.generators().param_count());
        for (auto& x : p) x = nd(rng);
        norm_dev = std::max(norm_dev, std::abs(an.prepare(p).norm() - 1.0));
      }
    }
  c.detail("max | |psi| - 1 | over 6 ansatz variants x 100 random parameter vectors = %.2e", norm_dev);
  ok = ok && norm_dev < 1e-12;

  double factor_dev = 0.0;
  const CompiledAnsatz an(build_generators(h, GeneratorKind::SinglesDoublesFull, true), sector);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  for (std::size_t mu = 0; mu < an.generators().param_count(); ++mu) {
    const Eigen::MatrixXd tau = an.generator_matrix(mu).dense();
    const double theta = ang(rng);
    SectorVector v = SectorVector::Zero(static_cast<Eigen::Index>(sector.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = ang(rng);
    const SectorVector want = dense_exp_antisymmetric(theta * tau) * v;
    an.apply_factor(mu, theta, {v.data(), static_cast<std::size_t>(v.size())});
    factor_dev = std::max(factor_dev, max_abs(v - want));
  }
  c.detail("max |closed-form Trotter factor - dense exponential| over %zu generators = %.2e",
           an.generators().param_count(), factor_dev);
  ok = ok && factor_dev < 1e-12;

  auto run_once = [] {
    std::ostringstream out;
    const std::vector<ScanPoint> pts = {{"h4", fixture("h4_chain")}, {"h2o", fixture("h2o_eq")}};
    std::vector<MethodSpec> methods;
    for (const auto& m : {"UCCD[6S]", "tUCCD[6S]", "tpUCCD[4S]", "UCCSD", "CCSD", "FCI"})
      methods.push_back(parse_method(m));
    write_scan_csv(out, scan_pec(pts, 0, methods, BenchConfig{}));
    return out.str();
  };
  const std::string first = run_once(), second = run_once();
  const bool same = first == second;
  c.detail("rerun of a 2-point, 6-method scan: CSV output %s (%zu bytes)", same ? "bit-identical" : "DIFFERS",
           first.size());
  ok = ok && same;
  return c.verdict(ok, 600.0, "norm preservation 1e-12, Trotter factor vs dense 1e-12, bit-identical reruns");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<bool()>>> all = {
      {"oracle-equivalence", oracle_equivalence},
      {"h2-exactness", h2_exactness},
      {"variational-attractiveness", variational_and_attractive},
      {"table2", [] { return table("table2-reproduction", "table2.json", 0.3, 0.05, 1800.0); }},
      {"table1", [] { return table("table1-reproduction", "table1.json", 0.5, 0.0, 1800.0); }},
      {"pec-shape", pec_shape},
      {"unitarity-determinism", unitarity_determinism},
  };
  std::set<std::string> wanted(argv + 1, argv + argc);
  for (const auto& w : wanted) {
    bool known = false;
    for (const auto& [name, fn] : all) known = known || name == w;
    if (!known) {
      std::fprintf(stderr, "unknown criterion '%s'; available:", w.c_str());
      for (const auto& [name, fn] : all) std::fprintf(stderr, " %s", name.c_str());
      std::fprintf(stderr, "\n");
      return 2;
    }
  }
  bool all_ok = true;
  for (const auto& [name, fn] : all) {
    if (!wanted.empty() && !wanted.count(name)) continue;
    try {
      all_ok = fn() && all_ok;
    } catch (const std::exception& e) {
      std::printf("FAIL %s: threw %s\n", name.c_str(), e.what());
      all_ok = false;
    }
  }
  return all_ok ? 0 : 1;
}
