#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "ffd/catalog.hpp"

using namespace ffd;

namespace {

CatalogEntry sample() {
  CatalogEntry e;
  e.q = 5;
  e.n = 3;
  e.runs = 25;
  e.family = "williams";
  e.generators = {{1, 1}};
  e.b = {4};
  e.beta3 = 0;
  e.beta4 = 0.027045;
  e.provenance = {"ffd searchq2 --q 5 --n 3", kVersion, "2024-01-01T00:00:00Z"};
  return e;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ffd_test_" + name)).string();
}

}  // namespace

TEST(Catalog, LineRoundTrip) {
  CatalogEntry e = sample();
  EXPECT_EQ(entry_from_line(entry_to_line(e)), e);
  e.pattern = std::vector<double>{0, 0, 0, 0.1 + 0.2, 1.0 / 3.0};
  EXPECT_EQ(entry_from_line(entry_to_line(e)), e);
  EXPECT_EQ(entry_to_line(e).find('\n'), std::string::npos);
}

TEST(Catalog, MalformedFieldNamed) {
  try {
    entry_from_line(R"({"q":5,"n":3,"runs":25,"family":"williams","generators":[[1,1]],"b":"x"})");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("b"), std::string::npos);
  }
  EXPECT_THROW(entry_from_line("not json"), FormatError);
  CatalogEntry bad = sample();
  bad.family = "cubic";
  EXPECT_THROW(entry_from_line(entry_to_line(bad)), FormatError);
}

TEST(Catalog, StreamReportsLine) {
  std::stringstream s;
  s << entry_to_line(sample()) << '\n' << "{broken\n";
  try {
    read_catalog(s, "cat.jsonl");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("cat.jsonl: line 2"), std::string::npos) << e.what();
  }
}

TEST(Catalog, EmptyAndBlankLines) {
  std::stringstream empty;
  EXPECT_TRUE(read_catalog(empty).empty());
  std::stringstream blank("\n\n" + entry_to_line(sample()) + "\n\n");
  EXPECT_EQ(read_catalog(blank).size(), 1u);
}

TEST(Catalog, FileRoundTripAndMissingFile) {
  const std::string path = temp_path("roundtrip.jsonl");
  const std::vector<CatalogEntry> entries = {sample()};
  write_catalog(entries, path);
  EXPECT_EQ(read_catalog(path), entries);
  std::remove(path.c_str());
  EXPECT_THROW(read_catalog(temp_path("does_not_exist.jsonl")), IoError);
}

TEST(Catalog, Upsert) {
  std::vector<CatalogEntry> entries = {sample()};
  CatalogEntry e = sample();
  e.b = {1};
  upsert(entries, e);
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].b, std::vector<int>{1});
  e.family = "linear";
  upsert(entries, e);
  EXPECT_EQ(entries.size(), 2u);
}

TEST(Catalog, RegeneratesWithinTolerance) {
  const Q2Report r = search_q2(PrimeLevel(5), 4);
  const auto entries = catalog_entries(r, make_provenance("test"));
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_EQ(entries[0].family, "standard");
  for (const auto& e : entries) {
    EXPECT_LE(regeneration_error(e), 1e-6) << e.family;
    EXPECT_EQ(entry_design(e).runs(), 25);
    EXPECT_EQ(entry_from_line(entry_to_line(e)), e);
  }
  CatalogEntry tampered = entries[2];
  tampered.beta4 += 0.01;
  EXPECT_GT(regeneration_error(tampered), 1e-3);
}

TEST(Catalog, Provenance) {
  const Provenance p = make_provenance("cmd");
  EXPECT_EQ(p.version, kVersion);
  ASSERT_EQ(p.timestamp.size(), 20u);
  EXPECT_EQ(p.timestamp.back(), 'Z');
}

TEST(Reproduce, ThreeColumnShifts) {
  const Reproduction r = reproduce("example1");
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.failures(), 0);
  EXPECT_EQ(r.checks.size(), 20u);
  for (const auto& c : r.checks) EXPECT_FALSE(c.source.empty());
}

TEST(Reproduce, InfoMatrices) {
  EXPECT_TRUE(reproduce("info-matrix-D").passed());
  EXPECT_TRUE(reproduce("info-matrix-compare").passed());
}

TEST(Reproduce, UnknownId) {
  EXPECT_THROW(reproduce("table99"), InvalidInput);
  EXPECT_FALSE(table_ids().empty());
}

TEST(Reproduce, CsvRendering) {
  const Reproduction r = reproduce("example5-scan");
  std::ostringstream os;
  render_csv(os, r);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "table,row,column,value,golden,tolerance,ok,source");
  std::size_t cells = 0;
  for (const auto& row : r.grid)
    for (double v : row) cells += std::isnan(v) ? 0 : 1;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    EXPECT_EQ(line.rfind("example5-scan,", 0), 0u) << line;
  }
  EXPECT_EQ(lines, cells);
}
