#include <gtest/gtest.h>

#include <cmath>

#include "cinesent/errors.hpp"
#include "cinesent/util.hpp"
#include "generators.hpp"

using namespace cinesent;

TEST(Strings, TrimSplitJoin) {
  EXPECT_EQ(trim("  a b\t\r\n"), "a b");
  EXPECT_EQ(trim(""), "");
  EXPECT_EQ(split("a,,b", ',').size(), 3u);
  EXPECT_EQ(split("", ',').size(), 1u);
  const std::vector<std::string> parts = {"x", "y", "z"};
  EXPECT_EQ(join(parts, "|"), "x|y|z");
  EXPECT_EQ(to_lower_ascii("AbC é"), "abc é");
}

TEST(Format, Reals) {
  EXPECT_EQ(format_real(0.5), "0.500000");
  EXPECT_EQ(format_real(-1e-9), "0.000000");
  EXPECT_EQ(format_real(-0.25, 2), "-0.25");
  EXPECT_EQ(format_real(NAN), "nan");
}

TEST(Format, ExactRoundTrips) {
  gen::Rng rng(51);
  for (int i = 0; i < 1000; ++i) {
    const double v = (gen::unit(rng) - 0.5) * std::pow(10.0, static_cast<double>(gen::uniform(rng, 0, 40)) - 20);
    ASSERT_EQ(std::stod(format_exact(v)), v);
  }
}

TEST(Hash, KnownVectors) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
}

TEST(Csv, QuotingRoundTrip) {
  gen::Rng rng(52);
  const std::string alphabet = "ab ,\"\n\r\xC3\xA9";
  for (int i = 0; i < 300; ++i) {
    std::vector<std::vector<std::string>> rows(gen::uniform(rng, 1, 5));
    std::string text;
    for (auto& row : rows) {
      row.resize(gen::uniform(rng, 1, 4));
      for (auto& f : row) {
        for (std::size_t k = gen::uniform(rng, 1, 6); k > 0; --k) f += alphabet[gen::uniform(rng, 0, alphabet.size() - 1)];
      }
      text += csv_row(row);
    }
    CsvReader reader(text);
    std::vector<std::string> fields;
    for (const auto& row : rows) {
      ASSERT_TRUE(reader.next(fields));
      ASSERT_EQ(fields, row);
    }
    ASSERT_FALSE(reader.next(fields));
  }
}

TEST(Csv, Reader) {
  CsvReader reader("\xEF\xBB\xBFh1,h2\r\n\r\n\"a\nb\",c\nlast");
  std::vector<std::string> f;
  ASSERT_TRUE(reader.next(f));
  EXPECT_EQ(f, (std::vector<std::string>{"h1", "h2"}));
  ASSERT_TRUE(reader.next(f));
  EXPECT_EQ(f, (std::vector<std::string>{"a\nb", "c"}));
  ASSERT_TRUE(reader.next(f));
  EXPECT_EQ(f, (std::vector<std::string>{"last"}));
  EXPECT_EQ(reader.line(), 5u);
  EXPECT_FALSE(reader.next(f));
  CsvReader bad("\"open");
  EXPECT_THROW(bad.next(f), FormatError);
}

TEST(Shuffle, SeededPermutation) {
  std::vector<int> a(100), b;
  for (int i = 0; i < 100; ++i) a[i] = i;
  b = a;
  std::mt19937_64 r1(42), r2(42);
  seeded_shuffle(a, r1);
  seeded_shuffle(b, r2);
  EXPECT_EQ(a, b);
  std::vector<int> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Files, ReadWrite) {
  const auto dir = gen::temp_dir("util");
  write_file(dir / "nested" / "f.txt", "content");
  EXPECT_EQ(read_file(dir / "nested" / "f.txt"), "content");
  EXPECT_THROW(read_file(dir / "missing"), IoError);
}
