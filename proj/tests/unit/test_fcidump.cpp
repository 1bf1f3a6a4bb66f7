#include <gtest/gtest.h>

#include <sstream>

#include "test_util.hpp"
#include "ucc/fcidump.hpp"
#include "ucc/hamiltonian.hpp"

namespace ucc {
namespace {

const char* kOneOrbital =
    " &FCI NORB=1,NELEC=2,MS2=0,\n"
    "  ORBSYM=1,\n"
    "  ISYM=1,\n"
    " &END\n"
    "  0.6250 1 1 1 1\n"
    " -1.2520 1 1 0 0\n"
    "  0.7130 0 0 0 0\n";

SpatialIntegrals two_orbital_diagonal() {
  SpatialIntegrals s(2, 4);
  s.h(0, 0) = -2.0;
  s.h(1, 1) = -1.0;
  s.g(0, 0, 0, 0) = 1.0;
  s.g(0, 0, 1, 1) = s.g(1, 1, 0, 0) = 0.5;
  s.g(0, 1, 1, 0) = s.g(1, 0, 0, 1) = s.g(0, 1, 0, 1) = s.g(1, 0, 1, 0) = 0.1;
  return s;
}

TEST(Fcidump, ParsesOneOrbitalExample) {
  const auto s = parse_fcidump_string(kOneOrbital);
  EXPECT_EQ(s.n_orb, 1);
  EXPECT_EQ(s.n_electrons, 2);
  EXPECT_EQ(s.ms2, 0);
  EXPECT_DOUBLE_EQ(s.g(0, 0, 0, 0), 0.625);
  EXPECT_DOUBLE_EQ(s.h(0, 0), -1.252);
  EXPECT_DOUBLE_EQ(s.e_core, 0.713);
}

TEST(Fcidump, ReplicatesSymmetricEntries) {
  const auto s = parse_fcidump_string(" &FCI NORB=2,NELEC=2,MS2=0 &END\n 0.5 1 2 0 0\n 0.25 1 2 1 1\n");
  EXPECT_DOUBLE_EQ(s.h(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(s.h(1, 0), 0.5);
  for (auto [p, q, r, t] : {std::array{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}})
    EXPECT_DOUBLE_EQ(s.g(p, q, r, t), 0.25);
  EXPECT_LT(s.symmetry_residual(), 1e-15);
}

TEST(Fcidump, AcceptsFortranExponentsAndSlashTerminator) {
  const auto s = parse_fcidump_string("&FCI NORB=1, NELEC=2, MS2=0\n/\n 1.5D-01 1 1 1 1\n");
  EXPECT_DOUBLE_EQ(s.g(0, 0, 0, 0), 0.15);
}

TEST(Fcidump, RejectsBadInput) {
  EXPECT_THROW(parse_fcidump_string("NORB=1\n"), FcidumpError);
  EXPECT_THROW(parse_fcidump_string(" &FCI NORB=1,NELEC=2,MS2=0 &END\n 1.0 2 1 1 1\n"), FcidumpError);
  try {
    parse_fcidump_string(" &FCI NORB=2,NELEC=2,MS2=0 &END\n 0.5 1 2 0 0\n 0.6 2 1 0 0\n");
    FAIL() << "inconsistent duplicate accepted";
  } catch (const FcidumpError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  // Consistent duplicates are fine.
  EXPECT_NO_THROW(parse_fcidump_string(" &FCI NORB=2,NELEC=2,MS2=0 &END\n 0.5 1 2 0 0\n 0.5 2 1 0 0\n"));
}

TEST(Fcidump, RoundTripOnGeneratedFixture) {
  const auto a = read_fcidump(testing::fixture("h2o_eq"));
  const auto b = parse_fcidump_string(write_fcidump_string(a));
  EXPECT_EQ(a.n_orb, b.n_orb);
  EXPECT_EQ(a.n_electrons, b.n_electrons);
  EXPECT_NEAR(a.e_core, b.e_core, 1e-12);
  EXPECT_LT((a.h - b.h).cwiseAbs().maxCoeff(), 1e-12);
  double m = 0.0;
  for (std::size_t k = 0; k < a.g.size(); ++k) m = std::max(m, std::abs(a.g.data()[k] - b.g.data()[k]));
  EXPECT_LT(m, 1e-12);
  EXPECT_LT(a.symmetry_residual(), 1e-12);
}

int body_lines(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool body = false;
  int n = 0;
  while (std::getline(in, line)) {
    if (body && line.find_first_not_of(" \t") != std::string::npos) ++n;
    if (line.find("&END") != std::string::npos) body = true;
  }
  return n;
}

TEST(Fcidump, WriterEmitsCanonicalEntriesOnly) {
  const auto one = parse_fcidump_string(kOneOrbital);
  EXPECT_EQ(body_lines(write_fcidump_string(one)), 3);
  const SpatialIntegrals zero(2, 2);
  EXPECT_EQ(body_lines(write_fcidump_string(zero)), 1);
}

TEST(Fcidump, FreezeCoreHandExample) {
  const auto f = freeze_core(two_orbital_diagonal(), 1);
  EXPECT_EQ(f.n_orb, 1);
  EXPECT_EQ(f.n_electrons, 2);
  EXPECT_NEAR(f.e_core, -3.0, 1e-14);
  EXPECT_NEAR(f.h(0, 0), -0.1, 1e-14);
}

TEST(Fcidump, FreezeZeroIsIdentity) {
  const auto a = read_fcidump(testing::fixture("h2o_eq"));
  const auto b = freeze_core(a, 0);
  EXPECT_EQ(a.n_orb, b.n_orb);
  EXPECT_EQ(a.e_core, b.e_core);
  EXPECT_EQ((a.h - b.h).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Fcidump, FreezeCorePreservesHfEnergy) {
  const auto a = read_fcidump(testing::fixture("h2o_eq"));
  const double e0 = to_spin_orbital(a).e_hf;
  for (int k = 1; k <= 3; ++k) {
    const auto f = freeze_core(a, k);
    EXPECT_NEAR(to_spin_orbital(f).e_hf, e0, 1e-10) << k;
    EXPECT_LT(f.symmetry_residual(), 1e-12);
  }
}

TEST(Fcidump, FreezeCoreRejectsBadCounts) {
  const auto a = read_fcidump(testing::fixture("h2_eq"));
  EXPECT_THROW(freeze_core(a, 2), std::invalid_argument);
  EXPECT_THROW(freeze_core(a, -1), std::invalid_argument);
  const auto w = read_fcidump(testing::fixture("h2o_eq"));
  EXPECT_THROW(freeze_core(w, 6), std::invalid_argument);
}

}  // namespace
}  // namespace ucc
