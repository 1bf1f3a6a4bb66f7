#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "ucc/kernels.hpp"

namespace ucc::kernels {
namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!isa_available(Isa::Avx2)) GTEST_SKIP() << "AVX2 not available on this CPU";
  }
};

TEST_F(KernelEquivalence, Dot) {
  std::mt19937 rng(1);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 16u, 33u, 1001u}) {
    const auto x = random_vector(n, rng), y = random_vector(n, rng);
    EXPECT_NEAR(avx2::dot(x.data(), y.data(), n), scalar::dot(x.data(), y.data(), n), 1e-13 * (1.0 + n)) << n;
  }
}

TEST_F(KernelEquivalence, Axpy) {
  std::mt19937 rng(2);
  for (std::size_t n : {0u, 1u, 5u, 8u, 31u, 257u}) {
    const auto x = random_vector(n, rng);
    auto y1 = random_vector(n, rng);
    auto y2 = y1;
    scalar::axpy(0.37, x.data(), y1.data(), n);
    avx2::axpy(0.37, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15);
  }
}

TEST_F(KernelEquivalence, MaxAbs) {
  std::mt19937 rng(3);
  for (std::size_t n : {1u, 2u, 6u, 9u, 100u}) {
    auto x = random_vector(n, rng);
    x[n / 2] = -3.5;
    EXPECT_EQ(avx2::max_abs(x.data(), n), scalar::max_abs(x.data(), n));
  }
}

TEST_F(KernelEquivalence, Spmv) {
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> nnz(0, 11);
  const std::size_t rows = 97;
  std::vector<int> row_ptr{0}, col;
  std::vector<double> val;
  for (std::size_t r = 0; r < rows; ++r) {
    const int k = nnz(rng);
    for (int j = 0; j < k; ++j) {
      col.push_back(static_cast<int>(rng() % rows));
      val.push_back(std::uniform_real_distribution<double>(-1, 1)(rng));
    }
    row_ptr.push_back(static_cast<int>(col.size()));
  }
  const CsrView m{rows, row_ptr.data(), col.data(), val.data()};
  const auto x = random_vector(rows, rng);
  std::vector<double> y1(rows), y2(rows);
  scalar::spmv(m, x.data(), y1.data());
  avx2::spmv(m, x.data(), y2.data());
  for (std::size_t i = 0; i < rows; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-14);
}

TEST(KernelDispatch, SwitchesAndRestores) {
  const Isa start = active_isa();
  set_isa(Isa::Scalar);
  EXPECT_EQ(active_isa(), Isa::Scalar);
  std::vector<double> x{1, 2, 3}, y{4, 5, 6};
  EXPECT_DOUBLE_EQ(dot(x, y), 32.0);
  axpy(2.0, x, y);
  EXPECT_DOUBLE_EQ(y[2], 12.0);
  EXPECT_DOUBLE_EQ(max_abs(std::vector<double>{-7, 2}), 7.0);
  set_isa(start);
  EXPECT_STREQ(isa_name(Isa::Scalar), "scalar");
}

}  // namespace
}  // namespace ucc::kernels
