#include "ucc/fcidump.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace ucc {

namespace {

constexpr double kDuplicateTol = 1e-10;
constexpr double kWriteThreshold = 1e-12;
const double kUnset = std::numeric_limits<double>::quiet_NaN();

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Parses "KEY=value, KEY2=v1,v2,..." into a map of upper-case keys to raw
// comma/space separated value text.
std::map<std::string, std::string> parse_namelist(const std::string& body) {
  std::map<std::string, std::string> out;
  std::vector<std::size_t> eq;
  for (std::size_t i = 0; i < body.size(); ++i)
    if (body[i] == '=') eq.push_back(i);
  auto key_start = [&](std::size_t pos) {
    std::size_t e = pos;
    while (e > 0 && std::isspace(static_cast<unsigned char>(body[e - 1]))) --e;
    std::size_t b = e;
    while (b > 0 && (std::isalnum(static_cast<unsigned char>(body[b - 1])) || body[b - 1] == '_')) --b;
    return std::pair{b, e};
  };
  for (std::size_t n = 0; n < eq.size(); ++n) {
    const auto [kb, ke] = key_start(eq[n]);
    if (kb == ke) throw FcidumpError("malformed namelist: '=' without a key");
    const std::size_t vend = n + 1 < eq.size() ? key_start(eq[n + 1]).first : body.size();
    std::string value = body.substr(eq[n] + 1, vend - eq[n] - 1);
    std::replace(value.begin(), value.end(), ',', ' ');
    out[upper(body.substr(kb, ke - kb))] = trim(value);
  }
  return out;
}

int parse_int(const std::string& text, const std::string& key) {
  std::istringstream is(text);
  long v = 0;
  if (!(is >> v)) throw FcidumpError("malformed namelist: bad value for " + key);
  return static_cast<int>(v);
}

double parse_real(std::string tok, int line) {
  for (char& c : tok)
    if (c == 'D' || c == 'd') c = 'E';
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') throw FcidumpError("malformed value '" + tok + "'", line);
  return v;
}

void set_checked(double& slot, double value, int line, const char* what) {
  if (!std::isnan(slot) && std::abs(slot - value) > kDuplicateTol)
    throw FcidumpError(std::string("inconsistent duplicate ") + what + " entry", line);
  slot = value;
}

}  // namespace

FcidumpError::FcidumpError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "FCIDUMP line " + std::to_string(line) + ": " + what
                                  : "FCIDUMP: " + what),
      line_(line) {}

SpatialIntegrals::SpatialIntegrals(int norb, int nelec, int ms2_value)
    : n_orb(norb),
      n_electrons(nelec),
      ms2(ms2_value),
      h(Eigen::MatrixXd::Zero(norb, norb)),
      g(norb, norb, norb, norb) {}

double SpatialIntegrals::symmetry_residual() const {
  double r = (h - h.transpose()).cwiseAbs().maxCoeff();
  const int n = n_orb;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
          const double v = g(p, q, s, t);
          r = std::max({r, std::abs(v - g(q, p, s, t)), std::abs(v - g(p, q, t, s)),
                        std::abs(v - g(s, t, p, q))});
        }
  return r;
}

SpatialIntegrals parse_fcidump(std::istream& in) {
  std::string line;
  int lineno = 0;
  std::string header;
  bool started = false;
  bool ended = false;
  while (!ended && std::getline(in, line)) {
    ++lineno;
    std::string u = upper(line);
    if (!started) {
      if (trim(u).empty()) continue;
      const auto pos = u.find("&FCI");
      if (pos == std::string::npos) throw FcidumpError("missing &FCI namelist header", lineno);
      started = true;
      u = u.substr(pos + 4);
    }
    auto stop = u.find("&END");
    if (stop == std::string::npos && trim(u) == "/") stop = u.find('/');
    if (stop == std::string::npos) {
      const std::string t = trim(u);
      if (!t.empty() && t.back() == '/') stop = u.rfind('/');
    }
    if (stop != std::string::npos) {
      header += " " + u.substr(0, stop);
      ended = true;
    } else {
      header += " " + u;
    }
  }
  if (!started) throw FcidumpError("empty input");
  if (!ended) throw FcidumpError("unterminated &FCI namelist");

  const auto keys = parse_namelist(header);
  if (!keys.count("NORB") || !keys.count("NELEC"))
    throw FcidumpError("malformed namelist: NORB and NELEC are required");
  const int norb = parse_int(keys.at("NORB"), "NORB");
  const int nelec = parse_int(keys.at("NELEC"), "NELEC");
  const int ms2 = keys.count("MS2") ? parse_int(keys.at("MS2"), "MS2") : 0;
  if (norb <= 0) throw FcidumpError("NORB must be positive");
  if (nelec <= 0 || nelec > 2 * norb) throw FcidumpError("NELEC out of range for NORB");

  SpatialIntegrals ints(norb, nelec, ms2);
  if (keys.count("ORBSYM")) {
    std::istringstream is(keys.at("ORBSYM"));
    int s = 0;
    while (is >> s) ints.orbsym.push_back(s);
  }
  ints.g.fill(kUnset);
  ints.h.fill(kUnset);
  double core = kUnset;
  std::vector<double> eps(norb, kUnset);
  bool any_eps = false;

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream is(line);
    std::string tok;
    if (!(is >> tok)) continue;
    const double v = parse_real(tok, lineno);
    long idx[4];
    for (long& x : idx)
      if (!(is >> x)) throw FcidumpError("expected four orbital indices", lineno);
    for (long x : idx)
      if (x < 0 || x > norb) throw FcidumpError("orbital index out of range [0, NORB]", lineno);
    const int i = static_cast<int>(idx[0]) - 1, j = static_cast<int>(idx[1]) - 1;
    const int k = static_cast<int>(idx[2]) - 1, l = static_cast<int>(idx[3]) - 1;
    if (i >= 0 && j >= 0 && k >= 0 && l >= 0) {
      set_checked(ints.g(i, j, k, l), v, lineno, "two-electron");
      for (auto [a, b, c, d] : {std::array{i, j, k, l}, {j, i, k, l}, {i, j, l, k}, {j, i, l, k},
                                {k, l, i, j}, {l, k, i, j}, {k, l, j, i}, {l, k, j, i}})
        ints.g(a, b, c, d) = v;
    } else if (i >= 0 && j >= 0 && k < 0 && l < 0) {
      set_checked(ints.h(i, j), v, lineno, "one-electron");
      ints.h(j, i) = v;
    } else if (i >= 0 && j < 0 && k < 0 && l < 0) {
      set_checked(eps[i], v, lineno, "orbital-energy");
      any_eps = true;
    } else if (i < 0 && j < 0 && k < 0 && l < 0) {
      set_checked(core, v, lineno, "core-energy");
    } else {
      throw FcidumpError("unrecognised index pattern", lineno);
    }
  }

  for (double& x : ints.g.data())
    if (std::isnan(x)) x = 0.0;
  ints.h = ints.h.unaryExpr([](double x) { return std::isnan(x) ? 0.0 : x; });
  ints.e_core = std::isnan(core) ? 0.0 : core;
  if (any_eps) {
    for (double& x : eps)
      if (std::isnan(x)) x = 0.0;
    ints.orbital_energies = std::move(eps);
  }
  return ints;
}

SpatialIntegrals parse_fcidump_string(const std::string& text) {
  std::istringstream is(text);
  return parse_fcidump(is);
}

SpatialIntegrals read_fcidump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FcidumpError("cannot open " + path.string());
  return parse_fcidump(in);
}

void write_fcidump(std::ostream& out, const SpatialIntegrals& ints) {
  const int n = ints.n_orb;
  out << " &FCI NORB=" << n << ",NELEC=" << ints.n_electrons << ",MS2=" << ints.ms2 << ",\n";
  out << "  ORBSYM=";
  for (int p = 0; p < n; ++p) out << (p < static_cast<int>(ints.orbsym.size()) ? ints.orbsym[p] : 1) << ",";
  out << "\n  ISYM=1,\n &END\n";
  char buf[96];
  auto emit = [&](double v, int i, int j, int k, int l) {
    std::snprintf(buf, sizeof buf, "%24.16E %4d %4d %4d %4d\n", v, i, j, k, l);
    out << buf;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          const double v = ints.g(i, j, k, l);
          if (std::abs(v) > kWriteThreshold) emit(v, i + 1, j + 1, k + 1, l + 1);
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      if (std::abs(ints.h(i, j)) > kWriteThreshold) emit(ints.h(i, j), i + 1, j + 1, 0, 0);
  for (int i = 0; i < static_cast<int>(ints.orbital_energies.size()); ++i)
    if (std::abs(ints.orbital_energies[i]) > kWriteThreshold) emit(ints.orbital_energies[i], i + 1, 0, 0, 0);
  emit(ints.e_core, 0, 0, 0, 0);
}

std::string write_fcidump_string(const SpatialIntegrals& ints) {
  std::ostringstream os;
  write_fcidump(os, ints);
  return os.str();
}

SpatialIntegrals freeze_core(const SpatialIntegrals& ints, int n_frozen) {
  if (n_frozen < 0) throw std::invalid_argument("freeze_core: negative frozen count");
  if (n_frozen >= ints.n_orb) throw std::invalid_argument("freeze_core: n_frozen must be below n_orb");
  if (2 * n_frozen > ints.n_electrons)
    throw std::invalid_argument("freeze_core: more frozen electrons than electrons");
  if (n_frozen == 0) return ints;

  const int nc = n_frozen;
  const int nv = ints.n_orb - nc;
  SpatialIntegrals out(nv, ints.n_electrons - 2 * nc, ints.ms2);

  double e = ints.e_core;
  for (int c = 0; c < nc; ++c) {
    e += 2.0 * ints.h(c, c);
    for (int d = 0; d < nc; ++d) e += 2.0 * ints.g(c, c, d, d) - ints.g(c, d, d, c);
  }
  out.e_core = e;

  for (int p = 0; p < nv; ++p)
    for (int q = 0; q < nv; ++q) {
      double v = ints.h(p + nc, q + nc);
      for (int c = 0; c < nc; ++c) v += 2.0 * ints.g(p + nc, q + nc, c, c) - ints.g(p + nc, c, c, q + nc);
      out.h(p, q) = v;
    }
  for (int p = 0; p < nv; ++p)
    for (int q = 0; q < nv; ++q)
      for (int r = 0; r < nv; ++r)
        for (int s = 0; s < nv; ++s) out.g(p, q, r, s) = ints.g(p + nc, q + nc, r + nc, s + nc);

  if (!ints.orbital_energies.empty())
    out.orbital_energies.assign(ints.orbital_energies.begin() + nc, ints.orbital_energies.end());
  if (static_cast<int>(ints.orbsym.size()) == ints.n_orb)
    out.orbsym.assign(ints.orbsym.begin() + nc, ints.orbsym.end());
  return out;
}

}  // namespace ucc
