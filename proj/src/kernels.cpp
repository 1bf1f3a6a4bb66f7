#include "ucc/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace ucc::kernels {

namespace scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void spmv(const CsrView& m, const double* x, double* y) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    double s = 0.0;
    for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) s += m.val[k] * x[m.col[k]];
    y[r] = s;
  }
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

}  // namespace scalar

namespace {

struct Table {
  Isa isa;
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*spmv)(const CsrView&, const double*, double*);
  double (*max_abs)(const double*, std::size_t);
};

constexpr Table kScalar{Isa::Scalar, scalar::dot, scalar::axpy, scalar::spmv, scalar::max_abs};
constexpr Table kAvx2{Isa::Avx2, avx2::dot, avx2::axpy, avx2::spmv, avx2::max_abs};

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table* select_default() {
  if (const char* env = std::getenv("UCC_ISA")) {
    std::string_view v(env);
    if (v == "scalar") return &kScalar;
    if (v == "avx2" && cpu_has_avx2()) return &kAvx2;
  }
  return cpu_has_avx2() ? &kAvx2 : &kScalar;
}

const Table*& table() {
  static const Table* t = select_default();
  return t;
}

}  // namespace

Isa active_isa() { return table()->isa; }

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

void set_isa(Isa isa) {
  if (!isa_available(isa)) throw std::invalid_argument("requested ISA not supported by this CPU");
  table() = isa == Isa::Avx2 ? &kAvx2 : &kScalar;
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: length mismatch");
  return table()->dot(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: length mismatch");
  table()->axpy(a, x.data(), y.data(), x.size());
}

void spmv(const CsrView& m, std::span<const double> x, std::span<double> y) {
  if (y.size() != m.rows) throw std::invalid_argument("spmv: output length mismatch");
  table()->spmv(m, x.data(), y.data());
}

double max_abs(std::span<const double> x) { return table()->max_abs(x.data(), x.size()); }

}  // namespace ucc::kernels
