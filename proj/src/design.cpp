#include "ffd/design.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ffd {

namespace {

std::vector<std::vector<int>> sorted_rows(const LevelMatrix& m) {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) rows[i].assign(m.row(i).data(), m.row(i).data() + m.cols());
  std::sort(rows.begin(), rows.end());
  return rows;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<int> parse_int_list(std::string_view text, std::string_view what) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view tok = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    int v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw InvalidInput("malformed " + std::string(what) + " entry '" + std::string(tok) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void check_runs(const PrimeLevel& q, int k, std::int64_t max_runs) {
  const std::int64_t runs = checked_power(q.value(), k);
  if (runs > max_runs) {
    throw CapExceeded("design would have " + std::to_string(q.value()) + "^" + std::to_string(k) +
                      " runs, above the cap of " + std::to_string(max_runs));
  }
}

}  // namespace

Design::Design(PrimeLevel q, LevelMatrix levels) : q_(q), levels_(std::move(levels)) {
  if (levels_.rows() < 1 || levels_.cols() < 1) throw InvalidInput("a design needs at least one run and one factor");
  if (levels_.minCoeff() < 0 || levels_.maxCoeff() >= q_.value()) {
    throw InvalidInput("design levels must lie in {0,...," + std::to_string(q_.value() - 1) + "}");
  }
}

GeneratorSet::GeneratorSet(PrimeLevel q, LevelMatrix coefficients) : q_(q), c_(reduce_mod(coefficients, q)) {
  if (c_.rows() < 1 || c_.cols() < 1) throw InvalidInput("generator set needs m >= 1 and n - m >= 1");
  for (Index i = 0; i < c_.rows(); ++i) {
    if ((c_.row(i).array() == 0).all()) {
      throw InvalidInput("generator " + std::to_string(i + 1) + " is the zero vector");
    }
  }
  const LevelMatrix cols = column_vectors();
  for (Index a = 0; a < cols.rows(); ++a) {
    for (Index b = a + 1; b < cols.rows(); ++b) {
      LevelMatrix pair(2, cols.cols());
      pair << cols.row(a), cols.row(b);
      if (rank_mod(pair, q_) < 2) {
        throw InvalidInput("columns " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                           " are proportional mod " + std::to_string(q_.value()) + "; strength would be below 2");
      }
    }
  }
}

LevelMatrix GeneratorSet::column_vectors() const {
  const Index k = c_.cols();
  LevelMatrix v(k + c_.rows(), k);
  v.topRows(k).setIdentity();
  v.bottomRows(c_.rows()) = c_;
  return v;
}

std::string GeneratorSet::to_string() const {
  std::ostringstream os;
  for (Index i = 0; i < c_.rows(); ++i) {
    if (i) os << ';';
    for (Index j = 0; j < c_.cols(); ++j) os << (j ? "," : "") << c_(i, j);
  }
  return os.str();
}

GeneratorSet parse_generators(std::string_view text, const PrimeLevel& q) {
  std::vector<std::vector<int>> rows;
  std::size_t start = 0;
  while (true) {
    const std::size_t semi = text.find(';', start);
    const std::string_view row = text.substr(start, semi == std::string_view::npos ? text.npos : semi - start);
    rows.push_back(parse_int_list(row, "generator"));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  const std::size_t width = rows.front().size();
  LevelMatrix c(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != width) {
      throw InvalidInput("generator row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                         " coefficients, expected " + std::to_string(width));
    }
    for (std::size_t j = 0; j < width; ++j) c(i, j) = rows[i][j];
  }
  return GeneratorSet(q, c);
}

PermutationVector::PermutationVector(const PrimeLevel& q, LevelVector shifts) : b_(std::move(shifts)) {
  for (Index i = 0; i < b_.size(); ++i) {
    if (b_(i) < 0 || b_(i) >= q.value()) {
      throw InvalidInput("permutation entry " + std::to_string(b_(i)) + " outside Z_" + std::to_string(q.value()));
    }
  }
}

PermutationVector PermutationVector::zeros(const PrimeLevel& q, int m) {
  return PermutationVector(q, LevelVector::Zero(m));
}

PermutationVector parse_permutation(std::string_view text, const PrimeLevel& q) {
  const std::vector<int> v = parse_int_list(text, "permutation");
  return PermutationVector(q, Eigen::Map<const LevelVector>(v.data(), static_cast<Index>(v.size())));
}

Design expand(const GeneratorSet& gen, std::int64_t max_runs) {
  return linear_permute(gen, PermutationVector::zeros(gen.level(), gen.dependent()), max_runs);
}

Design linear_permute(const GeneratorSet& gen, const PermutationVector& b, std::int64_t max_runs) {
  if (b.size() != gen.dependent()) {
    throw InvalidInput("permutation has length " + std::to_string(b.size()) + ", expected m=" +
                       std::to_string(gen.dependent()));
  }
  const PrimeLevel& q = gen.level();
  const int k = gen.independent();
  check_runs(q, k, max_runs);
  const LevelMatrix base = enumerate_tuples(q, k, max_runs);
  LevelMatrix levels(base.rows(), gen.factors());
  levels.leftCols(k) = base;
  // Integer products stay far below INT_MAX for q^(n-m) <= 1e6 and q < 2^15.
  const LevelMatrix dep = base * gen.coefficients().transpose();
  for (Index r = 0; r < base.rows(); ++r) {
    for (Index i = 0; i < dep.cols(); ++i) levels(r, k + i) = q.reduce(std::int64_t{dep(r, i)} + b[i]);
  }
  return Design(q, std::move(levels));
}

int williams_value(int x, const PrimeLevel& q) {
  const int n = q.value();
  if (x < 0 || x >= n) throw InvalidInput("level " + std::to_string(x) + " outside Z_" + std::to_string(n));
  return 2 * x < n ? 2 * x : 2 * (n - x) - 1;
}

int williams_inverse(int x, const PrimeLevel& q) {
  const int n = q.value();
  if (x < 0 || x >= n) throw InvalidInput("level " + std::to_string(x) + " outside Z_" + std::to_string(n));
  return x % 2 == 0 ? x / 2 : n - (x + 1) / 2;
}

Design williams(const Design& d) {
  const PrimeLevel& q = d.level();
  LevelVector table(q.value());
  for (int x = 0; x < q.value(); ++x) table(x) = williams_value(x, q);
  return Design(q, d.levels().unaryExpr([&table](int x) { return table(x); }));
}

Design shift(const Design& d, int delta) {
  const PrimeLevel& q = d.level();
  return Design(q, d.levels().unaryExpr([&q, delta](int x) { return q.add(x, delta); }));
}

Design reflect(const Design& d) {
  return Design(d.level(), ((d.q() - 1) - d.levels().array()).matrix());
}

int strength(const Design& d, int t_max) {
  const int n = static_cast<int>(d.factors());
  const int q = d.q();
  t_max = std::min(t_max, n);
  int achieved = 0;
  for (int t = 1; t <= t_max; ++t) {
    const std::int64_t cells = checked_power(q, t);
    if (cells > d.runs() || d.runs() % cells != 0) return achieved;
    const std::int64_t expected = d.runs() / cells;
    std::vector<int> subset(t);
    for (int i = 0; i < t; ++i) subset[i] = i;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(cells));
    while (true) {
      std::fill(counts.begin(), counts.end(), 0);
      for (Index r = 0; r < d.runs(); ++r) {
        std::int64_t cell = 0;
        for (int c : subset) cell = cell * q + d(r, c);
        ++counts[static_cast<std::size_t>(cell)];
      }
      if (std::any_of(counts.begin(), counts.end(), [expected](std::int64_t c) { return c != expected; })) {
        return achieved;
      }
      int i = t - 1;
      while (i >= 0 && subset[i] == n - t + i) --i;
      if (i < 0) break;
      ++subset[i];
      for (int j = i + 1; j < t; ++j) subset[j] = subset[j - 1] + 1;
    }
    achieved = t;
  }
  return achieved;
}

bool is_mirror_symmetric(const Design& d) {
  return sorted_rows(d.levels()) == sorted_rows(reflect(d).levels());
}

bool same_design(const Design& a, const Design& b) {
  if (a.q() != b.q() || a.runs() != b.runs() || a.factors() != b.factors()) {
    throw InvalidInput("designs differ in shape or level count");
  }
  return sorted_rows(a.levels()) == sorted_rows(b.levels());
}

void write_design(std::ostream& os, const Design& d) {
  os << "# q=" << d.q() << " N=" << d.runs() << " n=" << d.factors() << '\n';
  for (Index i = 0; i < d.runs(); ++i) {
    for (Index j = 0; j < d.factors(); ++j) os << (j ? " " : "") << d(i, j);
    os << '\n';
  }
}

Design read_design(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("design file is empty");
  int q = 0;
  long long runs = 0, factors = 0;
  {
    std::istringstream hs(line);
    std::string hash, qs, ns, fs;
    hs >> hash >> qs >> ns >> fs;
    try {
      if (hash != "#" || qs.rfind("q=", 0) != 0 || ns.rfind("N=", 0) != 0 || fs.rfind("n=", 0) != 0) {
        throw std::invalid_argument("header");
      }
      q = std::stoi(qs.substr(2));
      runs = std::stoll(ns.substr(2));
      factors = std::stoll(fs.substr(2));
    } catch (const std::exception&) {
      throw FormatError("line 1: expected header '# q=<q> N=<N> n=<n>', got '" + line + "'");
    }
  }
  if (runs < 1 || factors < 1) throw FormatError("line 1: N and n must be positive");
  const PrimeLevel level(q);
  LevelMatrix m(runs, factors);
  for (long long i = 0; i < runs; ++i) {
    if (!std::getline(is, line)) {
      throw FormatError("line " + std::to_string(i + 2) + ": expected " + std::to_string(runs) + " runs, file ended");
    }
    std::istringstream rs(line);
    for (long long j = 0; j < factors; ++j) {
      if (!(rs >> m(i, j))) {
        throw FormatError("line " + std::to_string(i + 2) + ": expected " + std::to_string(factors) + " levels");
      }
    }
    std::string extra;
    if (rs >> extra) throw FormatError("line " + std::to_string(i + 2) + ": trailing data '" + extra + "'");
  }
  return Design(level, std::move(m));
}

void save_design(const std::string& path, const Design& d) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_design(os, d);
  if (!os) throw IoError("write to '" + path + "' failed");
}

Design load_design(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  try {
    return read_design(is);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace ffd
