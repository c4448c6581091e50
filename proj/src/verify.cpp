#include "ffd/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ffd/aberration.hpp"
#include "ffd/optimal.hpp"
#include "ffd/parallel.hpp"
#include "ffd/recursion.hpp"

namespace ffd {

namespace {

constexpr std::size_t kMaxReported = 10;

void record(TheoremCheck& check, std::string message) {
  ++check.failure_count;
  if (check.failures.size() < kMaxReported) check.failures.push_back(std::move(message));
}

int resolve_nmax(int theorem, const PrimeLevel& q, int n_max) {
  if (n_max <= 0) return default_direct_nmax(theorem, q);
  if (n_max < 3 || n_max > q.value() + 1) {
    throw InvalidInput("nmax=" + std::to_string(n_max) + " outside 3.." + std::to_string(q.value() + 1));
  }
  return n_max;
}

TheoremCheck start(int theorem, const PrimeLevel& q, int n_max) {
  TheoremCheck c;
  c.theorem = theorem;
  c.q = q.value();
  c.n_max = n_max;
  return c;
}

std::string describe(const GeneratorSet& g, const PermutationVector& b) {
  std::string s = "generators " + g.to_string() + ", b=";
  for (Index i = 0; i < b.size(); ++i) s += (i ? "," : "") + std::to_string(b[i]);
  return s;
}

// Every column a reduced q^2-run design can contain, as (c1, c2).
std::vector<std::pair<int, int>> q2_columns(const PrimeLevel& q) {
  std::vector<std::pair<int, int>> cols{{1, 0}, {0, 1}};
  for (int c1 = 1; c1 <= q.center(); ++c1)
    for (int c2 = 1; c2 < q.value(); ++c2) cols.emplace_back(c1, c2);
  return cols;
}

// Column c of E_{b*} over the full factorial z in Z_q^2: W(c.z + b*(c)).
// The shift depends on c alone, so all designs in the space draw their
// columns from this one pool.
std::vector<int> williams_column(const PrimeLevel& q, std::pair<int, int> c) {
  const int v = q.value();
  const int shift = q.mul(q.reduce(1 - c.first - c.second), gamma(q));
  std::vector<int> col(static_cast<std::size_t>(v * v));
  for (int z1 = 0; z1 < v; ++z1)
    for (int z2 = 0; z2 < v; ++z2)
      col[static_cast<std::size_t>(z1 * v + z2)] =
          williams_value(q.reduce(std::int64_t{c.first} * z1 + std::int64_t{c.second} * z2 + shift), q);
  return col;
}

bool proportional(const PrimeLevel& q, std::pair<int, int> a, std::pair<int, int> b) {
  return q.reduce(std::int64_t{a.first} * b.second - std::int64_t{a.second} * b.first) == 0;
}

}  // namespace

int default_direct_nmax(int theorem, const PrimeLevel& q) {
  const int v = q.value();
  if (theorem == 2) return std::min(4, v + 1);
  // The zero-beta3 check needs beta3 only; mirror symmetry needs full patterns, costed as the
  // cheaper of the two exact routes.
  const double runs = double(v) * v;
  int n = 3;
  while (n < v + 1) {
    const int next = n + 1;
    const double count = double(count_q2_generators(q, next));
    bool ok;
    if (theorem == 1) {
      ok = count <= 1e6;
    } else {
      const double direct = std::pow(double(v), next) * runs;
      const double pairs = runs * runs / 2 * next * next * (v - 1) * v;
      ok = count * std::min(direct, pairs) <= 2e10;
    }
    if (!ok) break;
    n = next;
  }
  return n;
}

double projected_beta3(const Design& d) {
  const Index n = d.factors();
  double total = 0;
  LevelMatrix sub(d.runs(), 3);
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b)
      for (Index c = b + 1; c < n; ++c) {
        sub.col(0) = d.levels().col(a);
        sub.col(1) = d.levels().col(b);
        sub.col(2) = d.levels().col(c);
        total += beta_k<double>(Design(d.level(), sub), 3);
      }
  return total;
}

TheoremCheck verify_zero_beta3(const PrimeLevel& q, int n_max, int jobs, double tol) {
  TheoremCheck check = start(1, q, resolve_nmax(1, q, n_max));
  for (int n = 3; n <= check.n_max; ++n) {
    const std::vector<GeneratorSet> space = enumerate_q2_generators(q, n);
    std::vector<double> beta3(space.size());
    parallel_for(space.size(), jobs, [&](std::size_t i) {
      beta3[i] = beta_k<double>(build(space[i], b_star(space[i]), Family::Williams), 3);
    });
    for (std::size_t i = 0; i < space.size(); ++i) {
      if (beta3[i] > tol) {
        record(check, describe(space[i], b_star(space[i])) + ": beta3=" + std::to_string(beta3[i]));
      }
    }
    check.direct += static_cast<std::int64_t>(space.size());
    check.scope.push_back("n=" + std::to_string(n) + ": " + std::to_string(space.size()) + " designs");
  }

  // Triples of pairwise non-proportional pool columns.
  const auto cols = q2_columns(q);
  std::vector<std::vector<int>> pool;
  for (const auto& c : cols) pool.push_back(williams_column(q, c));
  std::vector<std::array<std::size_t, 3>> triples;
  for (std::size_t a = 0; a < cols.size(); ++a)
    for (std::size_t b = a + 1; b < cols.size(); ++b) {
      if (proportional(q, cols[a], cols[b])) continue;
      for (std::size_t c = b + 1; c < cols.size(); ++c) {
        if (proportional(q, cols[a], cols[c]) || proportional(q, cols[b], cols[c])) continue;
        triples.push_back({a, b, c});
      }
    }
  const auto runs = static_cast<Index>(pool.front().size());
  std::vector<double> beta3(triples.size());
  parallel_for(triples.size(), jobs, [&](std::size_t t) {
    LevelMatrix m(runs, 3);
    for (int j = 0; j < 3; ++j)
      for (Index i = 0; i < runs; ++i) m(i, j) = pool[triples[t][static_cast<std::size_t>(j)]][static_cast<std::size_t>(i)];
    beta3[t] = beta_k<double>(Design(q, std::move(m)), 3);
  });
  for (std::size_t t = 0; t < triples.size(); ++t) {
    if (beta3[t] > tol) {
      const auto& [a, b, c] = triples[t];
      record(check, "column triple (" + std::to_string(cols[a].first) + "," + std::to_string(cols[a].second) + ")(" +
                        std::to_string(cols[b].first) + "," + std::to_string(cols[b].second) + ")(" +
                        std::to_string(cols[c].first) + "," + std::to_string(cols[c].second) +
                        "): beta3=" + std::to_string(beta3[t]));
    }
  }
  check.certificates = static_cast<std::int64_t>(triples.size());
  check.scope.push_back("all n<=" + std::to_string(q.value() + 1) + ": " + std::to_string(triples.size()) +
                        " column-triple projections");
  return check;
}

TheoremCheck verify_unique_zero_shift(const PrimeLevel& q, int n_max, int jobs, double tol) {
  TheoremCheck check = start(2, q, std::min(4, resolve_nmax(2, q, n_max)));

  auto run = [&](const std::vector<GeneratorSet>& space, const std::string& label) {
    std::vector<RecursiveType> types(space.size());
    std::vector<std::vector<int>> zeros(space.size());
    parallel_for(space.size(), jobs, [&](std::size_t i) {
      types[i] = classify(space[i]);
      if (types[i] < RecursiveType::TypeII) return;
      const LevelMatrix shifts = enumerate_tuples(space[i].level(), space[i].dependent());
      for (Index r = 0; r < shifts.rows(); ++r) {
        const PermutationVector b(space[i].level(), shifts.row(r).transpose());
        if (beta_k<double>(build(space[i], b, Family::Williams), 3) <= tol) zeros[i].push_back(static_cast<int>(r));
      }
    });
    std::int64_t checked = 0;
    for (std::size_t i = 0; i < space.size(); ++i) {
      if (types[i] < RecursiveType::TypeII) continue;
      ++checked;
      const PermutationVector star = b_star(space[i]);
      const LevelMatrix shifts = enumerate_tuples(space[i].level(), space[i].dependent());
      const bool unique = zeros[i].size() == 1 &&
                          PermutationVector(q, shifts.row(zeros[i].front()).transpose()) == star;
      if (!unique) {
        record(check, describe(space[i], star) + ": " + std::to_string(zeros[i].size()) + " shifts with beta3=0");
      }
    }
    check.direct += checked;
    check.scope.push_back(label + ": " + std::to_string(checked) + " type-II designs of " +
                          std::to_string(space.size()));
  };

  for (int n = 3; n <= check.n_max; ++n) run(enumerate_q2_generators(q, n), "q^2 runs, n=" + std::to_string(n));

  if (check.n_max >= 4) {
    // q^3 runs, one generator: every row with at least two nonzero entries.
    std::vector<GeneratorSet> space;
    const LevelMatrix rows = enumerate_tuples(q, 3);
    for (Index r = 0; r < rows.rows(); ++r) {
      if ((rows.row(r).array() != 0).count() < 2) continue;
      space.emplace_back(q, LevelMatrix(rows.row(r)));
    }
    run(space, "q^3 runs, n=4");
  }
  return check;
}

TheoremCheck verify_mirror_symmetry(const PrimeLevel& q, int n_max, int jobs, double tol) {
  TheoremCheck check = start(4, q, resolve_nmax(4, q, n_max));
  for (int n = 3; n <= check.n_max; ++n) {
    const std::vector<GeneratorSet> space = enumerate_q2_generators(q, n);
    std::vector<std::string> problems(space.size());
    parallel_for(space.size(), jobs, [&](std::size_t i) {
      const Design e = build(space[i], b_star(space[i]), Family::Williams);
      if (!is_mirror_symmetric(e)) {
        problems[i] = "not mirror-symmetric";
        return;
      }
      const BetaPattern<double> beta = beta_pattern<double>(e);
      for (int k = 1; k <= beta.size(); k += 2) {
        if (beta[k] > tol) {
          problems[i] = "beta" + std::to_string(k) + "=" + std::to_string(beta[k]);
          return;
        }
      }
    });
    for (std::size_t i = 0; i < space.size(); ++i) {
      if (!problems[i].empty()) record(check, describe(space[i], b_star(space[i])) + ": " + problems[i]);
    }
    check.direct += static_cast<std::int64_t>(space.size());
    check.scope.push_back("n=" + std::to_string(n) + ": " + std::to_string(space.size()) + " designs");
  }

  // With z'_k = W^{-1}(q-1-W(z_k)) on the independent columns, every pool
  // column must satisfy f(z') = q-1-f(z). The map z -> z' permutes the runs,
  // so any column subset is then mirror-symmetric.
  const int v = q.value();
  std::vector<int> flip(static_cast<std::size_t>(v));
  for (int x = 0; x < v; ++x) flip[static_cast<std::size_t>(x)] = williams_inverse(v - 1 - williams_value(x, q), q);
  const auto cols = q2_columns(q);
  for (const auto& c : cols) {
    const std::vector<int> f = williams_column(q, c);
    for (int z1 = 0; z1 < v; ++z1)
      for (int z2 = 0; z2 < v; ++z2) {
        const int image = flip[static_cast<std::size_t>(z1)] * v + flip[static_cast<std::size_t>(z2)];
        if (f[static_cast<std::size_t>(image)] != v - 1 - f[static_cast<std::size_t>(z1 * v + z2)]) {
          record(check, "column (" + std::to_string(c.first) + "," + std::to_string(c.second) +
                            ") breaks the reflection at z=(" + std::to_string(z1) + "," + std::to_string(z2) + ")");
          z1 = v;
          break;
        }
      }
  }
  check.certificates = static_cast<std::int64_t>(cols.size());
  check.scope.push_back("all n<=" + std::to_string(v + 1) + ": " + std::to_string(cols.size()) +
                        " columns under the run reflection");
  return check;
}

TheoremCheck verify_theorem(int theorem, const PrimeLevel& q, int n_max, int jobs) {
  switch (theorem) {
    case 1: return verify_zero_beta3(q, n_max, jobs);
    case 2: return verify_unique_zero_shift(q, n_max, jobs);
    case 4: return verify_mirror_symmetry(q, n_max, jobs);
    default: throw InvalidInput("theorem must be 1, 2 or 4 (got " + std::to_string(theorem) + ")");
  }
}

}  // namespace ffd
