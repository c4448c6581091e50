#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ffd/design.hpp"
#include "ffd/optimal.hpp"

namespace ffd {

struct Provenance {
  std::string command;
  std::string version;
  std::string timestamp;  // ISO 8601, UTC

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// One catalogued design. `family` is "standard", "linear" or "williams";
/// (q, n, family) is unique within a catalog file.
struct CatalogEntry {
  int q = 0;
  int n = 0;
  std::int64_t runs = 0;
  std::string family;
  std::vector<std::vector<int>> generators;  // m rows of n-m coefficients
  std::vector<int> b;
  double beta3 = 0;
  double beta4 = 0;
  std::optional<std::vector<double>> pattern;
  Provenance provenance;

  friend bool operator==(const CatalogEntry&, const CatalogEntry&) = default;
};

inline constexpr const char* kVersion = "1.0.0";

/// Provenance stamped with the current UTC time.
Provenance make_provenance(std::string command);

/// One JSON object per line, keys in a fixed order.
std::string entry_to_line(const CatalogEntry& e);
/// Throws FormatError naming the offending field.
CatalogEntry entry_from_line(const std::string& line);

void write_catalog(std::ostream& os, const std::vector<CatalogEntry>& entries);
std::vector<CatalogEntry> read_catalog(std::istream& is, const std::string& source = "<stream>");
void write_catalog(const std::vector<CatalogEntry>& entries, const std::string& path);
std::vector<CatalogEntry> read_catalog(const std::string& path);

/// Replaces the entry with the same (q, n, family), or appends.
void upsert(std::vector<CatalogEntry>& entries, CatalogEntry entry);

/// Rebuilds the entry's design (D, D_b or E_b).
Design entry_design(const CatalogEntry& e);
/// Largest |stored - recomputed| over beta3, beta4 and the stored pattern.
double regeneration_error(const CatalogEntry& e);

/// The three designs of a q^2-run comparison as catalog entries.
std::vector<CatalogEntry> catalog_entries(const Q2Report& r, const Provenance& p);

// ---------------------------------------------------------------------------
// Reproduction of published tables against embedded goldens.

struct GoldenCheck {
  std::string row;
  std::string column;
  double value = 0;   // recomputed
  double golden = 0;  // as printed
  double tol = 0;     // 0: exact
  std::string source;
  bool ok = false;
};

struct Reproduction {
  std::string table_id;
  std::string caption;
  std::vector<std::string> columns;
  std::vector<std::string> rows;
  std::vector<std::vector<double>> grid;  // rows x columns, NaN where empty
  std::vector<GoldenCheck> checks;  // row-major over (rows, columns) where a golden exists
  std::vector<std::string> notes;   // e.g. which k decided each selection
  double seconds = 0;

  bool passed() const;
  std::int64_t failures() const;
};

struct ReproduceOptions {
  int jobs = default_jobs();
};

const std::vector<std::string>& table_ids();

/// Recomputes `table_id` from scratch and compares with its goldens. Throws
/// InvalidInput for an unknown id.
Reproduction reproduce(const std::string& table_id, const ReproduceOptions& opt = {});

void render_text(std::ostream& os, const Reproduction& r);
void render_csv(std::ostream& os, const Reproduction& r);

}  // namespace ffd
