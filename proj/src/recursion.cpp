#include "ffd/recursion.hpp"

#include <unordered_map>

#include "ffd/optimal.hpp"
#include "ffd/parallel.hpp"

namespace ffd {

namespace {

std::int64_t encode(const LevelMatrix& v, Index row, int q) {
  std::int64_t code = 0;
  for (Index j = 0; j < v.cols(); ++j) code = code * q + v(row, j);
  return code;
}

std::vector<int> coefficient_set(RecursiveType regime, bool first, int q) {
  const bool restricted = regime == RecursiveType::TypeI || (regime == RecursiveType::TypeII && first);
  if (restricted) return {1, q - 1};
  std::vector<int> all(static_cast<std::size_t>(q));
  for (int c = 0; c < q; ++c) all[static_cast<std::size_t>(c)] = c;
  return all;
}

bool next_subset(std::vector<int>& s, int n) {
  const int k = static_cast<int>(s.size());
  int i = k - 1;
  while (i >= 0 && s[i] == n - k + i) --i;
  if (i < 0) return false;
  ++s[i];
  for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  return true;
}

}  // namespace

std::string_view to_string(RecursiveType t) {
  switch (t) {
    case RecursiveType::TypeI: return "TypeI";
    case RecursiveType::TypeII: return "TypeII";
    case RecursiveType::TypeIII: return "TypeIII";
    case RecursiveType::NotRecursive: break;
  }
  return "NotRecursive";
}

bool closes_under(const GeneratorSet& gen, RecursiveType regime, RecursionWitness* witness) {
  if (regime == RecursiveType::NotRecursive) throw InvalidInput("NotRecursive is not a closure regime");
  const PrimeLevel& q = gen.level();
  const LevelMatrix cols = gen.column_vectors();
  const int n = static_cast<int>(cols.rows());
  const int k = static_cast<int>(cols.cols());

  std::unordered_map<std::int64_t, int> index_of;
  for (int c = 0; c < n; ++c) index_of.emplace(encode(cols, c, q.value()), c);

  const std::vector<int> first = coefficient_set(regime, true, q.value());
  const std::vector<int> second = coefficient_set(regime, false, q.value());

  std::vector<int> subset(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = i;
  LevelMatrix w(1, k);
  do {
    LevelMatrix basis(k, k);
    for (int i = 0; i < k; ++i) basis.row(i) = cols.row(subset[static_cast<std::size_t>(i)]);
    if (rank_mod(basis, q) < k) continue;

    std::vector<char> in_t(static_cast<std::size_t>(n), 0);
    std::vector<int> members(subset);
    for (int c : subset) in_t[static_cast<std::size_t>(c)] = 1;
    std::vector<std::vector<int>> steps;
    while (true) {
      std::vector<int> added;
      for (int a : members) {
        for (int b : members) {
          if (a == b) continue;
          for (int c1 : first) {
            for (int c2 : second) {
              for (int j = 0; j < k; ++j) w(0, j) = q.reduce(std::int64_t{c1} * cols(a, j) + std::int64_t{c2} * cols(b, j));
              const auto hit = index_of.find(encode(w, 0, q.value()));
              if (hit == index_of.end() || in_t[static_cast<std::size_t>(hit->second)]) continue;
              in_t[static_cast<std::size_t>(hit->second)] = 1;
              added.push_back(hit->second);
            }
          }
        }
      }
      if (added.empty()) break;
      members.insert(members.end(), added.begin(), added.end());
      steps.push_back(std::move(added));
    }
    if (static_cast<int>(members.size()) == n) {
      if (witness) {
        witness->type = regime;
        witness->initial = subset;
        witness->steps = std::move(steps);
        for (auto& s : witness->steps) std::sort(s.begin(), s.end());
      }
      return true;
    }
  } while (next_subset(subset, n));
  return false;
}

RecursionWitness classify_with_witness(const GeneratorSet& gen) {
  RecursionWitness w;
  for (RecursiveType t : {RecursiveType::TypeI, RecursiveType::TypeII, RecursiveType::TypeIII}) {
    if (closes_under(gen, t, &w)) return w;
  }
  return w;
}

RecursiveType classify(const GeneratorSet& gen) { return classify_with_witness(gen).type; }

RecursiveCounts count_recursive(const PrimeLevel& q, int n, int jobs) {
  const std::vector<GeneratorSet> space = enumerate_q2_generators(q, n);
  std::vector<RecursiveType> types(space.size());
  parallel_for(space.size(), jobs, [&](std::size_t i) { types[i] = classify(space[i]); });
  RecursiveCounts counts;
  counts.q = q.value();
  counts.n = n;
  counts.total = static_cast<std::int64_t>(space.size());
  for (RecursiveType t : types) {
    if (t >= RecursiveType::TypeI) ++counts.type_i;
    if (t >= RecursiveType::TypeII) ++counts.type_ii;
    if (t >= RecursiveType::TypeIII) ++counts.type_iii;
  }
  return counts;
}

}  // namespace ffd
