#pragma once

// Data-parallel inner loops shared by the statevector, exponential and
// eigensolver code. Every kernel has a portable scalar reference version and
// an AVX2+FMA version; the active one is chosen once at runtime from the CPU
// feature flags (override with UCC_ISA=scalar|avx2).

#include <cstddef>
#include <cstdint>
#include <span>

namespace ucc::kernels {

enum class Isa { Scalar, Avx2 };

/// Compressed sparse row view; column indices are 32-bit as in Eigen.
struct CsrView {
  std::size_t rows = 0;
  const int* row_ptr = nullptr;
  const int* col = nullptr;
  const double* val = nullptr;
};

Isa active_isa();
bool isa_available(Isa isa);
/// Switch the dispatch table. Throws std::invalid_argument if unavailable.
void set_isa(Isa isa);
const char* isa_name(Isa isa);

double dot(std::span<const double> x, std::span<const double> y);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
/// y = M x
void spmv(const CsrView& m, std::span<const double> x, std::span<double> y);
/// max_i |x_i|
double max_abs(std::span<const double> x);

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void spmv(const CsrView& m, const double* x, double* y);
double max_abs(const double* x, std::size_t n);
}  // namespace scalar

namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void spmv(const CsrView& m, const double* x, double* y);
double max_abs(const double* x, std::size_t n);
}  // namespace avx2

}  // namespace ucc::kernels
