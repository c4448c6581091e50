#include "ffd/optimal.hpp"

#include <algorithm>
#include <functional>

#include <json.hpp>

namespace ffd {

int gamma(const PrimeLevel& q) {
  const int v = q.value();
  return v % 4 == 1 ? (v - 1) / 4 : (3 * v - 1) / 4;
}

namespace {

PermutationVector row_sum_shift(const GeneratorSet& gen, int factor) {
  const PrimeLevel& q = gen.level();
  const LevelMatrix& c = gen.coefficients();
  LevelVector b(c.rows());
  for (Index i = 0; i < c.rows(); ++i) {
    std::int64_t s = 1;
    for (Index j = 0; j < c.cols(); ++j) s -= c(i, j);
    b(i) = q.mul(q.reduce(s), factor);
  }
  return PermutationVector(q, std::move(b));
}

}  // namespace

PermutationVector b_star(const GeneratorSet& gen) { return row_sum_shift(gen, gamma(gen.level())); }

PermutationVector b_tilde(const GeneratorSet& gen) { return row_sum_shift(gen, gen.level().center()); }

std::string_view to_string(Family f) { return f == Family::Williams ? "williams" : "linear"; }

Family parse_family(std::string_view text) {
  if (text == "linear") return Family::Linear;
  if (text == "williams") return Family::Williams;
  throw InvalidInput("unknown family '" + std::string(text) + "' (expected linear or williams)");
}

Design build(const GeneratorSet& gen, const PermutationVector& b, Family family, std::int64_t max_runs) {
  Design d = linear_permute(gen, b, max_runs);
  return family == Family::Williams ? williams(d) : d;
}

SearchReport search_candidates(const std::vector<Candidate>& candidates, Family family, const SearchOptions& opt) {
  if (candidates.empty()) throw InvalidInput("no candidates to search");
  const GeneratorSet& first = candidates.front().generators;
  const int q = first.q();
  const int n = first.factors();
  const int top = n * (q - 1);
  const int k_max = opt.k_max <= 0 ? top : opt.k_max;
  if (k_max > top) {
    throw InvalidInput("k_max " + std::to_string(k_max) + " exceeds K=" + std::to_string(top));
  }
  const auto count = static_cast<std::int64_t>(candidates.size());
  const std::int64_t runs = checked_power(q, first.independent());
  if (!opt.force) {
    if (count > opt.max_evaluations) {
      throw CapExceeded(std::to_string(count) + " candidates exceed the cap of " +
                        std::to_string(opt.max_evaluations) + "; use --force to run anyway");
    }
    if (count > opt.max_work / std::max<std::int64_t>(runs * n, 1)) {
      throw CapExceeded(std::to_string(count) + " candidates of " + std::to_string(runs) + "x" + std::to_string(n) +
                        " exceed the work cap of " + std::to_string(opt.max_work) +
                        " cells; use --force to run anyway");
    }
  }

  const auto& basis = cached_basis<double>(first.level());
  auto design_of = [&](std::size_t i) {
    return build(candidates[i].generators, candidates[i].b, family, opt.force ? INT64_MAX : kDefaultMaxRuns);
  };

  // Phase 1: a short prefix for everyone. Anything behind the best prefix is
  // already decided.
  const int prefix_len = std::min(3, k_max);
  std::vector<BetaPattern<double>> prefix(candidates.size());
  parallel_for(candidates.size(), opt.jobs, [&](std::size_t i) {
    prefix[i] = beta_pattern<double>(design_of(i), prefix_len, basis, BetaMethod::Direct);
  });
  std::size_t lead = 0;
  for (std::size_t i = 1; i < prefix.size(); ++i) {
    if (compare_patterns(prefix[i], prefix[lead], opt.tol) < 0) lead = i;
  }
  std::vector<std::size_t> finalists;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (compare_patterns(prefix[i], prefix[lead], opt.tol) == 0) finalists.push_back(i);
  }

  // Phase 2: full depth for the finalists only.
  std::vector<BetaPattern<double>> full(finalists.size());
  parallel_for(finalists.size(), opt.jobs, [&](std::size_t f) {
    full[f] = k_max == prefix_len ? prefix[finalists[f]]
                                  : beta_pattern<double>(design_of(finalists[f]), k_max, basis);
  });
  std::size_t best = 0;
  for (std::size_t f = 1; f < full.size(); ++f) {
    if (compare_patterns(full[f], full[best], opt.tol) < 0) best = f;
  }

  SearchReport r{.q = q,
                 .n = n,
                 .family = family,
                 .winner = candidates[finalists[best]],
                 .beta = full[best],
                 .ties = {},
                 .evaluations = count,
                 .deciding_k = 0};
  std::vector<char> finalist(candidates.size(), 0);
  for (std::size_t f = 0; f < full.size(); ++f) {
    finalist[finalists[f]] = 1;
    const int k = first_difference(full[f], full[best], opt.tol);
    if (k == 0) {
      r.ties.push_back(candidates[finalists[f]]);
    } else {
      r.deciding_k = std::max(r.deciding_k, k);
    }
  }
  const BetaPattern<double>& winner_prefix = prefix[finalists[best]];
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!finalist[i]) r.deciding_k = std::max(r.deciding_k, first_difference(prefix[i], winner_prefix, opt.tol));
  }
  return r;
}

SearchReport best_b(const GeneratorSet& gen, Family family, const SearchOptions& opt) {
  const int m = gen.dependent();
  const std::int64_t count = checked_power(gen.q(), m);
  if (!opt.force && count > opt.max_evaluations) {
    throw CapExceeded(std::to_string(count) + " permutations exceed the cap of " +
                      std::to_string(opt.max_evaluations) + "; use --force to run anyway");
  }
  const LevelMatrix shifts = enumerate_tuples(gen.level(), m, opt.force ? INT64_MAX : opt.max_evaluations);
  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(shifts.rows()));
  for (Index r = 0; r < shifts.rows(); ++r) {
    candidates.push_back({gen, PermutationVector(gen.level(), shifts.row(r).transpose())});
  }
  return search_candidates(candidates, family, opt);
}

std::int64_t count_q2_generators(const PrimeLevel& q, int n) {
  const int v = q.value();
  if (n < 3 || n > v + 1) {
    throw InvalidInput("n=" + std::to_string(n) + " outside 3.." + std::to_string(v + 1) + " for q=" +
                       std::to_string(v));
  }
  const int k = n - 2;
  std::int64_t binom = 1;
  for (int i = 1; i <= k; ++i) binom = binom * (v - 1 - k + i) / i;
  const std::int64_t scale = checked_power((v - 1) / 2, k);
  return scale > INT64_MAX / binom ? INT64_MAX : binom * scale;
}

std::vector<GeneratorSet> enumerate_q2_generators(const PrimeLevel& q, int n, std::int64_t max_count) {
  const std::int64_t total = count_q2_generators(q, n);
  if (total > max_count) {
    throw CapExceeded("q=" + std::to_string(q.value()) + ", n=" + std::to_string(n) + " has " +
                      std::to_string(total) + " generator sets, above the cap of " + std::to_string(max_count));
  }
  const int v = q.value();
  struct Column {
    int c1, c2, slope;
  };
  std::vector<Column> columns;
  for (int c1 = 1; c1 <= (v - 1) / 2; ++c1)
    for (int c2 = 1; c2 < v; ++c2) columns.push_back({c1, c2, q.mul(c2, q.inverse(c1))});

  const int k = n - 2;
  std::vector<GeneratorSet> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<int> chosen;
  std::vector<char> used(static_cast<std::size_t>(v), 0);
  std::function<void(std::size_t)> extend = [&](std::size_t start) {
    if (static_cast<int>(chosen.size()) == k) {
      LevelMatrix c(k, 2);
      for (int i = 0; i < k; ++i) {
        c(i, 0) = columns[static_cast<std::size_t>(chosen[static_cast<std::size_t>(i)])].c1;
        c(i, 1) = columns[static_cast<std::size_t>(chosen[static_cast<std::size_t>(i)])].c2;
      }
      out.emplace_back(q, std::move(c));
      return;
    }
    for (std::size_t i = start; i < columns.size(); ++i) {
      const auto slope = static_cast<std::size_t>(columns[i].slope);
      if (used[slope]) continue;
      used[slope] = 1;
      chosen.push_back(static_cast<int>(i));
      extend(i + 1);
      chosen.pop_back();
      used[slope] = 0;
    }
  };
  extend(0);
  return out;
}

GeneratorSet standard_q2_generators(const PrimeLevel& q, int n) {
  count_q2_generators(q, n);  // range check
  LevelMatrix c(n - 2, 2);
  for (int i = 0; i < n - 2; ++i) {
    c(i, 0) = 1;
    c(i, 1) = i + 1;
  }
  return GeneratorSet(q, std::move(c));
}

Q2Report search_q2(const PrimeLevel& q, int n, const SearchOptions& opt) {
  const std::vector<GeneratorSet> space = enumerate_q2_generators(q, n);
  std::vector<Candidate> linear, williams_family;
  linear.reserve(space.size());
  williams_family.reserve(space.size());
  for (const GeneratorSet& g : space) {
    linear.push_back({g, b_tilde(g)});
    williams_family.push_back({g, b_star(g)});
  }
  GeneratorSet standard = standard_q2_generators(q, n);
  BetaPattern<double> standard_beta =
      beta_pattern<double>(expand(standard), opt.k_max <= 0 ? 0 : opt.k_max);
  return Q2Report{.q = q.value(),
                  .n = n,
                  .standard = std::move(standard),
                  .standard_beta = std::move(standard_beta),
                  .linear = search_candidates(linear, Family::Linear, opt),
                  .williams = search_candidates(williams_family, Family::Williams, opt)};
}

namespace {

using Json = nlohmann::ordered_json;

Json generators_json(const GeneratorSet& g) {
  Json rows = Json::array();
  const LevelMatrix& c = g.coefficients();
  for (Index i = 0; i < c.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < c.cols(); ++j) row.push_back(c(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json report_json(const SearchReport& r) {
  Json j;
  j["q"] = r.q;
  j["n"] = r.n;
  j["family"] = std::string(to_string(r.family));
  j["generators"] = generators_json(r.winner.generators);
  j["b"] = r.winner.b.to_vector();
  j["beta"] = r.beta.to_vector();
  Json ties = Json::array();
  for (const Candidate& c : r.ties) {
    ties.push_back(Json{{"generators", generators_json(c.generators)}, {"b", c.b.to_vector()}});
  }
  j["ties"] = std::move(ties);
  j["evaluations"] = r.evaluations;
  j["deciding_k"] = r.deciding_k;
  return j;
}

}  // namespace

std::string to_json(const SearchReport& r, int indent) { return report_json(r).dump(indent); }

std::string to_json(const Q2Report& r, int indent) {
  Json j;
  j["q"] = r.q;
  j["n"] = r.n;
  j["standard"] = Json{{"generators", generators_json(r.standard)}, {"beta", r.standard_beta.to_vector()}};
  j["linear"] = report_json(r.linear);
  j["williams"] = report_json(r.williams);
  return j.dump(indent);
}

}  // namespace ffd
