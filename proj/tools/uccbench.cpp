// Command-line driver for single-point runs, potential-energy scans and
// percent-correlation tables. See README.md for the config schema.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ucc/bench.hpp"

namespace fs = std::filesystem;
using namespace ucc;

namespace {

struct Options {
  std::string fcidump;
  std::string config;
  std::vector<std::string> methods;
  int frozen = -1;
  std::string out;
  std::string tag;
};

std::vector<MethodSpec> resolve_methods(const Options& o, const RunConfig* cfg) {
  std::vector<std::string> labels = o.methods;
  if (labels.empty() && cfg) labels = cfg->methods;
  if (labels.empty()) throw CLI::ValidationError("--method", "no methods requested");
  std::vector<MethodSpec> specs;
  for (const auto& l : labels) specs.push_back(parse_method(l));
  return specs;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

// Writes the CSV to `out` (or stdout) and the JSON summary next to it.
void emit(const Options& o, const std::string& csv, const std::string& json) {
  if (o.out.empty()) {
    std::cout << csv;
    return;
  }
  write_text(o.out, csv);
  write_text(fs::path(o.out).replace_extension(".json").string(), json);
  std::cerr << "wrote " << o.out << " and " << fs::path(o.out).replace_extension(".json").string() << "\n";
}

void report(const std::string& tag, const MethodResult& r) {
  std::fprintf(stderr, "  %-12s %-12s E = %.10f", tag.c_str(), r.method.c_str(), r.e_total);
  if (r.pct_corr) std::fprintf(stderr, "  %%corr = %7.2f", *r.pct_corr);
  std::fprintf(stderr, "  %s", r.converged ? "converged" : "NOT CONVERGED");
  if (!r.error.empty()) std::fprintf(stderr, "  (%s)", r.error.c_str());
  std::fprintf(stderr, "\n");
}

int finish(bool all_converged) {
  if (!all_converged) std::cerr << "some results did not converge\n";
  return all_converged ? 0 : 1;
}

int cmd_run(const Options& o) {
  std::optional<RunConfig> cfg;
  if (!o.config.empty()) cfg = load_run_config(o.config);
  if (o.fcidump.empty()) throw CLI::ValidationError("--fcidump", "required for 'run'");
  const int frozen = o.frozen >= 0 ? o.frozen : 0;
  const auto methods = resolve_methods(o, cfg ? &*cfg : nullptr);
  const BenchConfig bench = cfg ? cfg->bench : BenchConfig{};
  const std::string tag = o.tag.empty() ? fs::path(o.fcidump).stem().string() : o.tag;

  const auto rows = scan_pec({{tag, o.fcidump}}, frozen, methods, bench);
  bool ok = true;
  std::vector<std::pair<std::string, MethodResult>> tagged;
  for (const auto& r : rows) {
    report(r.geometry_tag, r.result);
    ok = ok && r.result.converged;
    tagged.emplace_back(r.geometry_tag, r.result);
  }
  std::ostringstream csv;
  write_scan_csv(csv, rows);
  emit(o, csv.str(), results_json(tagged));
  return finish(ok);
}

int cmd_scan(const Options& o) {
  if (o.config.empty()) throw CLI::ValidationError("--config", "required for 'scan'");
  const RunConfig cfg = load_run_config(o.config);
  if (cfg.scan.empty()) throw CLI::ValidationError("--config", "config has no scan section");
  const int frozen = o.frozen >= 0 ? o.frozen : cfg.scan_frozen;
  const auto methods = resolve_methods(o, &cfg);

  std::cerr << "scan " << cfg.scan_name << ": " << cfg.scan.size() << " points, " << methods.size() << " methods\n";
  const auto rows = scan_pec(cfg.scan, frozen, methods, cfg.bench);
  bool ok = true;
  std::vector<std::pair<std::string, MethodResult>> tagged;
  for (const auto& r : rows) {
    report(r.geometry_tag, r.result);
    ok = ok && r.result.converged;
    tagged.emplace_back(r.geometry_tag, r.result);
  }
  std::ostringstream csv;
  write_scan_csv(csv, rows);
  emit(o, csv.str(), results_json(tagged));
  return finish(ok);
}

int cmd_table(const Options& o) {
  if (o.config.empty()) throw CLI::ValidationError("--config", "required for 'table'");
  RunConfig cfg = load_run_config(o.config);
  if (cfg.systems.empty()) throw CLI::ValidationError("--config", "config has no systems");
  if (o.frozen >= 0)
    for (auto& s : cfg.systems) s.n_frozen = o.frozen;
  const auto methods = resolve_methods(o, &cfg);

  std::vector<TableColumn> table;
  for (const auto& sys : cfg.systems) {
    std::cerr << "system " << sys.name << "\n";
    auto col = correlation_table({sys}, methods, cfg.bench);
    for (const auto& r : col.front().results) report(sys.name, r);
    table.push_back(std::move(col.front()));
  }

  bool ok = true;
  std::vector<std::pair<std::string, MethodResult>> tagged;
  for (const auto& col : table)
    for (const auto& r : col.results) {
      ok = ok && r.converged;
      tagged.emplace_back(col.system, r);
    }

  if (!cfg.reference.empty()) {
    std::fprintf(stderr, "\n%-12s", "deviation");
    for (const auto& col : table) std::fprintf(stderr, " %9s", col.system.c_str());
    std::fprintf(stderr, "\n");
    for (std::size_t m = 0; m < methods.size(); ++m) {
      std::fprintf(stderr, "%-12s", methods[m].label.c_str());
      for (const auto& col : table) {
        const auto sys = cfg.reference.find(col.system);
        const auto& r = col.results[m];
        if (sys == cfg.reference.end() || !sys->second.count(r.method) || !r.pct_corr)
          std::fprintf(stderr, " %9s", "-");
        else
          std::fprintf(stderr, " %+9.2f", *r.pct_corr - sys->second.at(r.method));
      }
      std::fprintf(stderr, "\n");
    }
  }

  std::ostringstream csv;
  write_table_csv(csv, table, methods);
  emit(o, csv.str(), results_json(tagged));
  return finish(ok);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UCC doubles benchmarks with perturbative singles corrections"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run description")->check(CLI::ExistingFile);
    sub->add_option("--method", o.methods, "method label, e.g. UCCD[6S]; repeatable (overrides the config)");
    sub->add_option("--frozen", o.frozen, "number of frozen core spatial orbitals")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", o.out, "CSV output path; a .json summary is written beside it");
  };

  auto* run = app.add_subcommand("run", "single-point calculation");
  add_common(run);
  run->add_option("--fcidump", o.fcidump, "integral file")->check(CLI::ExistingFile);
  run->add_option("--tag", o.tag, "geometry tag for the output row (default: file stem)");
  auto* scan = app.add_subcommand("scan", "potential energy curve from a config scan section");
  add_common(scan);
  auto* table = app.add_subcommand("table", "percent-correlation table over the config systems");
  add_common(table);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(o);
    if (*scan) return cmd_scan(o);
    return cmd_table(o);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
