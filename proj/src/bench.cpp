#include "ucc/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ucc/fcidump.hpp"

namespace ucc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string csv_number(const std::optional<double>& x, const char* f) {
  return x && std::isfinite(*x) ? fmt(f, *x) : std::string();
}

}  // namespace

std::string MethodSpec::base_label() const {
  const auto pos = label.find('[');
  return pos == std::string::npos ? label : label.substr(0, pos);
}

MethodSpec parse_method(const std::string& label) {
  MethodSpec m;
  m.label = label;
  std::string base = label;
  if (const auto pos = label.find('['); pos != std::string::npos) {
    const std::string suffix = label.substr(pos);
    base = label.substr(0, pos);
    if (suffix == "[4S]")
      m.correction = SinglesCorrectionOrder::Fourth;
    else if (suffix == "[6S]")
      m.correction = SinglesCorrectionOrder::Sixth;
    else
      throw std::invalid_argument("unknown correction suffix in method '" + label + "'");
  }

  static const std::map<std::string, std::pair<GeneratorKind, bool>> ucc = {
      {"UCCD", {GeneratorKind::DoublesFull, false}},          {"tUCCD", {GeneratorKind::DoublesFull, true}},
      {"pUCCD", {GeneratorKind::DoublesPaired, false}},       {"tpUCCD", {GeneratorKind::DoublesPaired, true}},
      {"UCCSD", {GeneratorKind::SinglesDoublesFull, false}},  {"tUCCSD", {GeneratorKind::SinglesDoublesFull, true}},
  };
  if (const auto it = ucc.find(base); it != ucc.end()) {
    m.family = MethodFamily::Ucc;
    m.kind = it->second.first;
    m.trotterized = it->second.second;
  } else if (base == "CCD" || base == "CCSD") {
    m.family = MethodFamily::Cc;
    m.cc_singles = base == "CCSD";
  } else if (base == "MP2") {
    m.family = MethodFamily::Mp2;
  } else if (base == "FCI") {
    m.family = MethodFamily::Fci;
  } else {
    throw std::invalid_argument("unknown method '" + label + "'");
  }
  if (m.correction != SinglesCorrectionOrder::None &&
      (m.family != MethodFamily::Ucc || m.kind == GeneratorKind::SinglesDoublesFull))
    throw std::invalid_argument("singles corrections apply only to doubles-only UCC methods: '" + label + "'");
  return m;
}

double percent_correlation(double e_method, double e_hf, double e_fci) {
  if (!(e_fci < e_hf)) throw std::domain_error("percent_correlation: FCI energy is not below the reference");
  return 100.0 * (e_method - e_hf) / (e_fci - e_hf);
}

SystemContext::SystemContext(const SpatialIntegrals& ints, int n_frozen)
    : h_(to_spin_orbital(freeze_core(ints, n_frozen))),
      sector_(enumerate_sector(h_.n_so, h_.n_occ / 2, h_.n_occ / 2)),
      ham_(std::make_unique<SectorOperator>(hamiltonian_matrix(sector_, h_))) {}

SystemContext SystemContext::from_file(const std::filesystem::path& fcidump, int n_frozen) {
  return SystemContext(read_fcidump(fcidump), n_frozen);
}

const FciResult& SystemContext::fci() {
  if (!fci_) fci_ = fci_ground_state(sector_, *ham_);
  return *fci_;
}

SystemContext::UccEntry& SystemContext::entry(GeneratorKind kind, bool trotterized) {
  const auto key = std::make_pair(static_cast<int>(kind), trotterized);
  auto it = ucc_.find(key);
  if (it == ucc_.end()) it = ucc_.emplace(key, UccEntry{build_generators(h_, kind, trotterized), {}}).first;
  return it->second;
}

const GeneratorSet& SystemContext::generators(GeneratorKind kind, bool trotterized) {
  return entry(kind, trotterized).gens;
}

const VqeResult& SystemContext::vqe(GeneratorKind kind, bool trotterized, const VqeConfig& cfg,
                                    const std::vector<double>* start) {
  UccEntry& e = entry(kind, trotterized);
  if (!e.result) {
    std::vector<double> x0;
    if (start && start->size() == e.gens.param_count())
      x0 = *start;
    else
      x0 = initial_parameters(e.gens, h_, cfg.init);
    e.result = minimize(CompiledAnsatz(e.gens, sector_), *ham_, cfg, x0);
  }
  return *e.result;
}

MethodResult run_method(SystemContext& ctx, const MethodSpec& method, const BenchConfig& cfg,
                        const std::vector<double>* warm_start) {
  MethodResult r;
  r.method = method.label;
  const auto t0 = Clock::now();
  const SpinOrbitalHamiltonian& h = ctx.hamiltonian();
  try {
    switch (method.family) {
      case MethodFamily::Fci: {
        const FciResult& f = ctx.fci();
        r.e_total = f.energy;
        r.iterations = f.iterations;
        r.converged = true;
        break;
      }
      case MethodFamily::Mp2:
        r.e_total = h.e_hf + mp2(h).energy;
        r.converged = true;
        break;
      case MethodFamily::Cc: {
        const CcResult c = method.cc_singles ? ccsd_solve(h, cfg.cc) : ccd_solve(h, cfg.cc);
        r.e_total = c.e_total;
        r.iterations = c.iterations;
        r.converged = c.converged;
        break;
      }
      case MethodFamily::Ucc: {
        const VqeResult& v = ctx.vqe(method.kind, method.trotterized, cfg.vqe, warm_start);
        r.e_total = v.energy;
        r.iterations = v.iterations;
        r.converged = v.converged;
        if (method.correction != SinglesCorrectionOrder::None) {
          const GeneratorSet& gens = ctx.generators(method.kind, method.trotterized);
          const SinglesCorrection s = singles_corrections(h, params_to_t2(gens, v.params), denominators(h));
          r.correction = CorrectionBreakdown{s.e4s, s.e5, s.e6};
          r.e_total += method.correction == SinglesCorrectionOrder::Fourth ? s.e4s : s.e6s;
        }
        break;
      }
    }
  } catch (const std::exception& ex) {
    r.error = ex.what();
    r.converged = false;
    r.e_total = std::numeric_limits<double>::quiet_NaN();
  }
  r.e_corr = r.e_total - h.e_hf;
  try {
    if (std::isfinite(r.e_total)) r.pct_corr = percent_correlation(r.e_total, h.e_hf, ctx.fci().energy);
  } catch (const std::exception&) {
    r.pct_corr.reset();
  }
  r.wall_time += seconds_since(t0);
  return r;
}

std::vector<ScanRow> scan_pec(const std::vector<ScanPoint>& points, int n_frozen,
                              const std::vector<MethodSpec>& methods, const BenchConfig& cfg) {
  std::vector<ScanRow> rows;
  std::map<std::pair<int, bool>, std::vector<double>> previous;
  for (const ScanPoint& p : points) {
    std::optional<SystemContext> ctx;
    try {
      ctx.emplace(SystemContext::from_file(p.fcidump, n_frozen));
    } catch (const std::exception& ex) {
      for (const MethodSpec& m : methods) {
        ScanRow row{p.tag, {}, std::nullopt};
        row.result.method = m.label;
        row.result.error = ex.what();
        row.result.e_total = row.result.e_corr = std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
      }
      continue;
    }
    std::optional<double> e_fci;
    try {
      e_fci = ctx->fci().energy;
    } catch (const std::exception&) {
    }
    for (const MethodSpec& m : methods) {
      const auto key = std::make_pair(static_cast<int>(m.kind), m.trotterized);
      const std::vector<double>* warm = nullptr;
      if (m.family == MethodFamily::Ucc)
        if (auto it = previous.find(key); it != previous.end()) warm = &it->second;
      ScanRow row{p.tag, run_method(*ctx, m, cfg, warm), std::nullopt};
      if (m.family == MethodFamily::Ucc && row.result.error.empty())
        previous[key] = ctx->vqe(m.kind, m.trotterized, cfg.vqe).params;
      if (e_fci && std::isfinite(row.result.e_total)) row.error_vs_fci = row.result.e_total - *e_fci;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << "geometry_tag,method,e_total,e_corr,pct_corr,error_vs_fci,converged\n";
  for (const ScanRow& r : rows) {
    const MethodResult& m = r.result;
    out << r.geometry_tag << ',' << m.method << ',' << csv_number(m.e_total, "%.12f") << ','
        << csv_number(m.e_corr, "%.12f") << ',' << csv_number(m.pct_corr, "%.4f") << ','
        << csv_number(r.error_vs_fci, "%.12f") << ',' << (m.converged ? 1 : 0) << '\n';
  }
}

std::vector<TableColumn> correlation_table(const std::vector<TableSystem>& systems,
                                           const std::vector<MethodSpec>& methods, const BenchConfig& cfg) {
  std::vector<TableColumn> out;
  for (const TableSystem& s : systems) {
    TableColumn col{s.name, {}};
    try {
      SystemContext ctx = SystemContext::from_file(s.fcidump, s.n_frozen);
      for (const MethodSpec& m : methods) col.results.push_back(run_method(ctx, m, cfg));
    } catch (const std::exception& ex) {
      for (const MethodSpec& m : methods) {
        MethodResult r;
        r.method = m.label;
        r.error = ex.what();
        r.e_total = r.e_corr = std::numeric_limits<double>::quiet_NaN();
        col.results.push_back(r);
      }
    }
    out.push_back(std::move(col));
  }
  return out;
}

void write_table_csv(std::ostream& out, const std::vector<TableColumn>& table,
                     const std::vector<MethodSpec>& methods) {
  out << "method";
  for (const TableColumn& c : table) out << ',' << c.system;
  out << '\n';
  for (std::size_t k = 0; k < methods.size(); ++k) {
    out << methods[k].label;
    for (const TableColumn& c : table) out << ',' << csv_number(c.results[k].pct_corr, "%.2f");
    out << '\n';
  }
}

std::string results_json(const std::vector<std::pair<std::string, MethodResult>>& tagged) {
  nlohmann::json arr = nlohmann::json::array();
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  for (const auto& [tag, r] : tagged) {
    nlohmann::json j = {{"tag", tag},
                        {"method", r.method},
                        {"e_total", num(r.e_total)},
                        {"e_corr", num(r.e_corr)},
                        {"pct_corr", r.pct_corr ? num(*r.pct_corr) : nlohmann::json(nullptr)},
                        {"converged", r.converged},
                        {"iterations", r.iterations},
                        {"wall_time", r.wall_time}};
    if (r.correction) j["correction"] = {{"e4s", r.correction->e4s}, {"e5", r.correction->e5}, {"e6", r.correction->e6}};
    if (!r.error.empty()) j["error"] = r.error;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw std::runtime_error("config " + path.string() + ": " + ex.what());
  }
  const std::filesystem::path base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path q(p);
    return q.is_absolute() ? q : base / q;
  };

  RunConfig cfg;
  for (const auto& s : j.value("systems", nlohmann::json::array()))
    cfg.systems.push_back({s.at("name").get<std::string>(), resolve(s.at("fcidump").get<std::string>()),
                           s.value("frozen", 0)});
  if (j.contains("scan")) {
    const auto& sc = j.at("scan");
    cfg.scan_name = sc.value("name", std::string("scan"));
    cfg.scan_frozen = sc.value("frozen", 0);
    for (const auto& p : sc.at("points"))
      cfg.scan.push_back({p.at("tag").get<std::string>(), resolve(p.at("fcidump").get<std::string>())});
  }
  for (const auto& m : j.value("methods", nlohmann::json::array())) cfg.methods.push_back(m.get<std::string>());

  if (j.contains("vqe")) {
    const auto& v = j.at("vqe");
    VqeConfig& q = cfg.bench.vqe;
    q.energy_tol = v.value("energy_tol", q.energy_tol);
    q.grad_tol = v.value("grad_tol", q.grad_tol);
    q.max_iter = v.value("max_iter", q.max_iter);
    q.fd_step = v.value("fd_step", q.fd_step);
    const std::string init = v.value("init", std::string("zeros"));
    if (init == "zeros")
      q.init = VqeInit::Zeros;
    else if (init == "mp2")
      q.init = VqeInit::Mp2Scaled;
    else
      throw std::runtime_error("config: vqe.init must be 'zeros' or 'mp2'");
    const std::string grad = v.value("gradient", std::string("analytic"));
    if (grad == "analytic")
      q.gradient = GradientMode::Analytic;
    else if (grad == "finite-difference")
      q.gradient = GradientMode::FiniteDifference;
    else
      throw std::runtime_error("config: vqe.gradient must be 'analytic' or 'finite-difference'");
    q.validate();
  }
  if (j.contains("cc")) {
    const auto& c = j.at("cc");
    CcConfig& q = cfg.bench.cc;
    q.residual_tol = c.value("residual_tol", q.residual_tol);
    q.max_iter = c.value("max_iter", q.max_iter);
    q.diis_depth = c.value("diis_depth", q.diis_depth);
    q.validate();
  }
  if (j.contains("reference"))
    for (const auto& [sys, row] : j.at("reference").items())
      for (const auto& [method, value] : row.items()) cfg.reference[sys][method] = value.get<double>();
  for (const std::string& m : cfg.methods) parse_method(m);
  return cfg;
}

}  // namespace ucc
