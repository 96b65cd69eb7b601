#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "primeset/codebook.hpp"

using namespace primeset;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         ("primeset_codebook_test_" + name);
}

}  // namespace

TEST(Codebook, InterningIsIdempotent) {
  PrimeCodebook cb;
  ElementId x = cb.intern("x");
  ElementId y = cb.intern("y");
  EXPECT_NE(x, y);
  EXPECT_EQ(cb.intern("x"), x);
  EXPECT_EQ(cb.size(), 2u);
}

TEST(Codebook, BetaAssignsPrimesInIdOrder) {
  PrimeCodebook cb;
  ElementId first = cb.intern("first");
  cb.intern("second");
  ElementId third = cb.intern("third");
  EXPECT_EQ(cb.beta(first), 2u);
  EXPECT_EQ(cb.beta(third), 5u);
}

TEST(Codebook, BetaIsInjectiveAndStrictlyIncreasing) {
  PrimeCodebook cb;
  for (int i = 0; i < 1000; ++i) cb.intern("s" + std::to_string(i));
  for (std::uint32_t i = 1; i < 1000; ++i) {
    ASSERT_LT(cb.beta(ElementId{i - 1}), cb.beta(ElementId{i}));
  }
}

TEST(Codebook, BetaRejectsForeignIds) {
  PrimeCodebook cb;
  cb.intern("a");
  try {
    cb.beta(ElementId{5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unknown_symbol);
  }
}

TEST(Codebook, BetaInverseDistinguishesCases) {
  PrimeCodebook cb;
  cb.intern("a");
  cb.intern("b");
  ElementId c = cb.intern("c");

  auto hit = cb.beta_inverse(5);
  ASSERT_TRUE(hit.assigned());
  EXPECT_EQ(hit.id, c);
  EXPECT_EQ(cb.beta_inverse(4).status, BetaInverse::Status::not_prime);
  EXPECT_EQ(cb.beta_inverse(1).status, BetaInverse::Status::not_prime);
  EXPECT_EQ(cb.beta_inverse(7).status, BetaInverse::Status::prime_unassigned);

  for (std::uint32_t i = 0; i < cb.size(); ++i) {
    EXPECT_EQ(cb.beta_inverse(cb.beta(ElementId{i})).id, ElementId{i});
  }
}

TEST(Codebook, RejectsSymbolsThatBreakTheTextFormats) {
  PrimeCodebook cb;
  EXPECT_THROW(cb.intern(""), Error);
  EXPECT_THROW(cb.intern("two words"), Error);
  EXPECT_THROW(cb.intern("#tag"), Error);
  EXPECT_EQ(cb.size(), 0u);
}

TEST(Codebook, SaveLoadRoundTripAndAppendOnlyGrowth) {
  PrimeCodebook cb;
  for (const char* s : {"apple", "pear", "fig", "plum"}) cb.intern(s);
  auto path = temp_path("roundtrip.txt");
  cb.save(path);

  PrimeCodebook loaded = PrimeCodebook::load(path);
  ASSERT_EQ(loaded.size(), cb.size());
  for (const char* s : {"apple", "pear", "fig", "plum"}) {
    EXPECT_EQ(loaded.beta(*loaded.find(s)), cb.beta(*cb.find(s)));
  }

  ElementId fresh = loaded.intern("kiwi");
  EXPECT_EQ(loaded.beta(fresh), 11u);

  // Serializing before and after growth: the old text is a prefix.
  const std::string before = cb.serialize();
  const std::string after = loaded.serialize();
  EXPECT_EQ(after.compare(0, before.size(), before), 0);
  std::filesystem::remove(path);
}

TEST(Codebook, CorruptFilesFailWithLineNumbers) {
  try {
    PrimeCodebook::parse("primeset-codebook v1\na 2\nb 4\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    PrimeCodebook::parse("primeset-codebook v1\na 2\nb\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    PrimeCodebook::parse("primeset-codebook v1\na 2\na 3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(PrimeCodebook::parse("a 2\n"), ParseError);
  EXPECT_THROW(PrimeCodebook::parse(""), ParseError);
  EXPECT_THROW(PrimeCodebook::parse("primeset-codebook v1\na 2x\n"), ParseError);
}

TEST(Codebook, VersionMismatch) {
  try {
    PrimeCodebook::parse("primeset-codebook v2\na 2\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::version_mismatch);
  }
}

TEST(Codebook, LoadOfMissingFileIsAnIoError) {
  try {
    PrimeCodebook::load(temp_path("does_not_exist.txt"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
  }
}

TEST(Codebook, SnapshotIsIndependent) {
  PrimeCodebook cb;
  cb.intern("a");
  PrimeCodebook snap = cb.snapshot();
  cb.intern("b");
  EXPECT_EQ(snap.size(), 1u);
  EXPECT_EQ(cb.size(), 2u);
}
