// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ffd/aberration.hpp"
#include "ffd/models.hpp"
#include "ffd/optimal.hpp"
#include "ffd/orthopoly.hpp"
#include "ffd/recursion.hpp"
#include "ffd/verify.hpp"

using namespace ffd;

namespace {

constexpr double kTol3 = 5e-4;     // values printed to 3 decimals
constexpr double kTol4 = 5e-5;     // values printed to 4 decimals
constexpr double kTol2 = 5e-3;     // values printed to 2 decimals / mixed-rounding matrices
constexpr double kZero = 1e-9;     // a printed 0 for a permuted winner
constexpr double kSumTol = 1e-6;   // beta sum identity
constexpr double kBasisTol = 1e-9;
constexpr double kSlack = 1e-12;   // 0.0625 vs 0.063 sits exactly on the boundary

bool near(double v, double golden, double tol) { return std::abs(v - golden) <= tol + kSlack; }

struct Outcome {
  bool ok = true;
  std::string detail;
  std::vector<std::string> misses;

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (misses.size() < 8) misses.push_back(what);
    }
  }
};

std::string num(double v, int decimals = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

GeneratorSet gens(int q, const std::string& text) { return parse_generators(text, PrimeLevel(q)); }
PermutationVector shift1(int q, int b) { return PermutationVector(PrimeLevel(q), LevelVector::Constant(1, b)); }

// ---------------------------------------------------------------------------

Outcome shift_table() {
  Outcome o;
  const double golden[5][4] = {{0.125, 0.525, 0.442, 0.004},
                               {0.125, 0.525, 0.168, 0.021},
                               {0.125, 0.096, 0.168, 0.021},
                               {0.000, 0.686, 0.442, 0.004},
                               {0.125, 0.096, 0.000, 0.027}};
  const GeneratorSet g = gens(5, "1,1");
  for (int b = 0; b < 5; ++b) {
    const auto d = beta_pattern(build(g, shift1(5, b), Family::Linear), 4);
    const auto e = beta_pattern(build(g, shift1(5, b), Family::Williams), 4);
    const double got[4] = {d[3], d[4], e[3], e[4]};
    for (int c = 0; c < 4; ++c)
      o.check(near(got[c], golden[b][c], kTol3), "b=" + std::to_string(b) + " col " + std::to_string(c) + ": " +
                                                     num(got[c]) + " vs " + num(golden[b][c], 3));
  }
  o.detail = "10 (beta3, beta4) pairs";
  return o;
}

Outcome seven_level_scan() {
  Outcome o;
  const GeneratorSet g = gens(7, "2,2");
  o.check(b_star(g) == shift1(7, 6), "b* != 6");
  const double golden[7] = {0.0009, 0.0031, 0.0047, 0.0047, 0.0031, 0.0009, 0};
  for (int b = 0; b < 7; ++b) {
    const double v = beta_k(build(g, shift1(7, b), Family::Williams), 3);
    o.check(near(v, golden[b], kTol4), "beta3(E_" + std::to_string(b) + ")=" + num(v));
  }
  const double b4 = beta_k(build(g, b_star(g), Family::Williams), 4);
  o.check(near(b4, 0.0196, kTol4), "beta4(E_b*)=" + num(b4));
  o.detail = "b*=" + std::to_string(b_star(g)[0]) + ", beta4(E_b*)=" + num(b4);
  return o;
}

Outcome recursive_counts() {
  Outcome o;
  struct Row {
    int q, n;
    std::int64_t i, ii, iii;
  };
  const Row rows[] = {{5, 3, 2, 6, 8},      {5, 4, 6, 22, 24},     {5, 5, 20, 32, 32},    {5, 6, 16, 16, 16},
                      {7, 3, 2, 10, 18},    {7, 4, 6, 99, 135},    {7, 5, 20, 517, 540},  {7, 6, 70, 1214, 1215},
                      {7, 7, 252, 1458, 1458}, {7, 8, 267, 729, 729}};
  int matched = 0;
  for (const Row& r : rows) {
    const RecursiveCounts c = count_recursive(PrimeLevel(r.q), r.n, default_jobs());
    const std::int64_t got[3] = {c.type_i, c.type_ii, c.type_iii};
    const std::int64_t want[3] = {r.i, r.ii, r.iii};
    for (int t = 0; t < 3; ++t) {
      const bool ok = got[t] == want[t];
      matched += ok;
      o.check(ok, std::to_string(r.q * r.q) + "-run n=" + std::to_string(r.n) + " type " + std::string(t + 1, 'I') +
                      ": " + std::to_string(got[t]) + " vs " + std::to_string(want[t]));
    }
  }
  o.detail = std::to_string(matched) + "/30 cells exact";
  return o;
}

Outcome q2_searches() {
  Outcome o;
  // per n: D beta3, D beta4, D_b~ beta4, E_b* beta4 (the permuted beta3 are 0)
  const std::vector<std::array<double, 4>> t25 = {
      {0.125, 0.525, 0.271, 0.027}, {0.375, 1.361, 1.336, 1.037}, {0.750, 3.029, 3.793, 3.768}, {1.250, 6.786, 8.250, 8.250}};
  const std::vector<std::array<double, 4>> t49 = {{0.063, 0.563, 0.063, 0.003}, {0.188, 1.354, 0.250, 0.055},
                                                  {0.375, 2.440, 1.135, 0.836}, {0.625, 4.313, 3.094, 2.368},
                                                  {0.938, 7.401, 6.438, 4.928}, {1.312, 12.78, 11.23, 9.677}};
  SearchOptions opt;
  opt.k_max = 4;
  for (int q : {5, 7}) {
    const auto& table = q == 5 ? t25 : t49;
    for (std::size_t r = 0; r < table.size(); ++r) {
      const int n = 3 + static_cast<int>(r);
      const Q2Report rep = search_q2(PrimeLevel(q), n, opt);
      const std::string tag = std::to_string(q * q) + "-run n=" + std::to_string(n);
      // two-decimal printing in the last 49-run row
      const double wide = q == 7 && n == 8 ? kTol2 : kTol3;
      o.check(near(rep.standard_beta[3], table[r][0], kTol3), tag + " D beta3 " + num(rep.standard_beta[3]));
      o.check(near(rep.standard_beta[4], table[r][1], wide), tag + " D beta4 " + num(rep.standard_beta[4]));
      o.check(rep.linear.beta[3] <= kZero, tag + " D_b~ beta3 " + num(rep.linear.beta[3], 12));
      o.check(near(rep.linear.beta[4], table[r][2], wide), tag + " D_b~ beta4 " + num(rep.linear.beta[4]));
      o.check(rep.williams.beta[3] <= kZero, tag + " E_b* beta3 " + num(rep.williams.beta[3], 12));
      o.check(near(rep.williams.beta[4], table[r][3], kTol3), tag + " E_b* beta4 " + num(rep.williams.beta[4]));
    }
  }
  o.detail = "10 rows x (D, best D_b~, best E_b*)";
  return o;
}

Outcome linear_zero_shifts() {
  Outcome o;
  const GeneratorSet g = gens(7, "2,2");
  std::vector<int> zeros;
  std::vector<double> beta4;
  for (int b = 0; b < 7; ++b) {
    const auto p = beta_pattern(build(g, shift1(7, b), Family::Linear), 4);
    if (p[3] <= kZero) {
      zeros.push_back(b);
      beta4.push_back(p[4]);
    }
  }
  o.check(zeros == std::vector<int>{0, 3, 5}, "zero-beta3 shifts differ");
  const double golden[3] = {0.0417, 0.0417, 0.0625};
  for (std::size_t i = 0; i < std::min<std::size_t>(3, beta4.size()); ++i)
    o.check(near(beta4[i], golden[i], kTol4), "beta4 " + num(beta4[i]));
  o.check(b_tilde(g) == shift1(7, 5), "b~ != 5");
  o.detail = std::to_string(zeros.size()) + " linear shifts with beta3=0";
  return o;
}

Outcome eight_factor_scan() {
  Outcome o;
  const GeneratorSet g = gens(7, "1,1;1,2;1,4;1,5;2,5;2,6");
  const PermutationVector star = b_star(g);
  o.check(star == parse_permutation("2,4,1,3,5,0", g.level()), "b* differs");
  SearchOptions opt;
  opt.force = true;
  opt.k_max = 4;
  const SearchReport r = best_b(g, Family::Williams, opt);
  o.check(r.evaluations == 117649, "evaluations " + std::to_string(r.evaluations));
  o.check(r.winner.b == star, "winner is not b*");
  o.check(r.beta[3] <= kZero, "beta3 " + num(r.beta[3], 12));
  o.check(near(r.beta[4], 9.677, kTol3), "beta4 " + num(r.beta[4]));
  // uniqueness: no other shift reaches beta3 = 0
  const LevelMatrix all = enumerate_tuples(g.level(), 6);
  std::vector<char> zero(static_cast<std::size_t>(all.rows()), 0);
  parallel_for(zero.size(), opt.jobs, [&](std::size_t i) {
    const PermutationVector b(g.level(), all.row(static_cast<Index>(i)).transpose());
    zero[i] = beta_k(build(g, b, Family::Williams), 3) <= kZero;
  });
  const auto zeros = std::count(zero.begin(), zero.end(), 1);
  o.check(zeros == 1, std::to_string(zeros) + " shifts with beta3=0");
  o.detail = "7^6 shifts scanned, " + std::to_string(zeros) + " with beta3=0, beta4(E_b*)=" + num(r.beta[4]);
  return o;
}

Outcome q17_second_zero() {
  Outcome o;
  const GeneratorSet g = gens(17, "2,4");
  o.check(b_star(g) == shift1(17, 14), "b* != 14");
  std::vector<int> zeros;
  for (int b = 0; b < 17; ++b)
    if (beta_k(build(g, shift1(17, b), Family::Williams), 3) <= kZero) zeros.push_back(b);
  const auto has = [&](int b) { return std::find(zeros.begin(), zeros.end(), b) != zeros.end(); };
  o.check(has(14) && has(4), "b=14 and b=4 not both zero");
  std::string list;
  for (int b : zeros) list += (list.empty() ? "" : ",") + std::to_string(b);
  o.detail = "zero-beta3 shifts {" + list + "}";
  return o;
}

Outcome models() {
  Outcome o;
  const std::vector<std::string> t = {"a0", "a1", "a2", "a3", "a11", "a22", "a33", "a12", "a13", "a23"};
  const double d_golden[10][10] = {{1, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                                   {0, 1, 0, 0, 0, 0, 0, 0, 0, -0.354},
                                   {0, 0, 1, 0, 0, 0, 0, 0, -0.354, 0},
                                   {0, 0, 0, 1, 0, 0, 0, -0.354, 0, 0},
                                   {0, 0, 0, 0, 1, 0, 0, 0, 0, 0.418},
                                   {0, 0, 0, 0, 0, 1, 0, 0, 0.418, 0},
                                   {0, 0, 0, 0, 0, 0, 1, -0.418, 0, 0},
                                   {0, 0, 0, -0.354, 0, 0, -0.418, 1, 0.35, 0.35},
                                   {0, 0, -0.354, 0, 0, 0.418, 0, 0.35, 1, -0.35},
                                   {0, -0.354, 0, 0, 0.418, 0, 0, 0.35, -0.35, 1}};
  const auto info_d = information_matrix<double>(expand(gens(5, "1,1")));
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      o.check(near(info_d(t[i], t[j]), d_golden[i][j], kTol2), "D " + t[i] + "," + t[j]);

  const std::vector<std::string> blk = {"a11", "a22", "a33", "a12", "a13", "a23"};
  const double db_golden[6][6] = {{1, 0, 0, 0, 0, 0.359},     {0, 1, 0, 0, -0.12, 0},      {0, 0, 1, -0.359, 0, 0},
                                  {0, 0, -0.359, 1, 0.3, -0.1}, {0, -0.12, 0, 0.3, 1, -0.3}, {0.359, 0, 0, -0.1, -0.3, 1}};
  const double eb_golden[6][6] = {{1, 0, 0, 0, 0, 0.096},       {0, 1, 0, 0, 0.096, 0},       {0, 0, 1, -0.096, 0, 0},
                                  {0, 0, -0.096, 1, 0.08, 0.08}, {0, 0.096, 0, 0.08, 1, -0.08}, {0.096, 0, 0, 0.08, -0.08, 1}};
  const GeneratorSet dg = gens(5, "1,2");
  const GeneratorSet eg = gens(5, "1,1");
  const Design db = build(dg, b_tilde(dg), Family::Linear);
  const Design eb = build(eg, b_star(eg), Family::Williams);
  const auto info_db = information_matrix<double>(db);
  const auto info_eb = information_matrix<double>(eb);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      o.check(near(info_db(blk[i], blk[j]), db_golden[i][j], kTol2), "D_b~ " + blk[i] + "," + blk[j]);
      o.check(near(info_eb(blk[i], blk[j]), eb_golden[i][j], kTol2), "E_b* " + blk[i] + "," + blk[j]);
    }

  const auto var = [](const Design& d, const std::string& label) {
    for (const auto& [l, v] : estimate_variances<double>(d))
      if (l == label) return v;
    return std::nan("");
  };
  const double vd[6] = {0.047, 0.041, 0.047, 0.051, 0.050, 0.051};
  const double ve[6] = {0.040, 0.040, 0.040, 0.041, 0.041, 0.041};
  for (int i = 0; i < 6; ++i) {
    o.check(near(var(db, blk[i]), vd[i], kTol3), "var D_b~ " + blk[i] + " " + num(var(db, blk[i])));
    o.check(near(var(eb, blk[i]), ve[i], kTol3), "var E_b* " + blk[i] + " " + num(var(eb, blk[i])));
  }
  o.detail = "100 + 72 matrix entries, 12 variances";
  return o;
}

Outcome properties() {
  Outcome o;
  std::int64_t designs = 0;
  for (int q : {3, 5, 7, 11, 13, 17}) {
    const PrimeLevel level(q);
    const auto& basis = cached_basis<double>(level);
    const Eigen::MatrixXd g = basis.values * basis.values.transpose() / double(q);
    o.check((g - Eigen::MatrixXd::Identity(q, q)).cwiseAbs().maxCoeff() <= kBasisTol, "orthonormality q=" + std::to_string(q));
    const Eigen::MatrixXd c = basis.values.transpose() * basis.values / double(q);
    o.check((c - Eigen::MatrixXd::Identity(q, q)).cwiseAbs().maxCoeff() <= kBasisTol, "completeness q=" + std::to_string(q));
    for (int x = 0; x < q; ++x) {
      o.check(std::abs(linear_poly_cosine<double>(level, x) - basis(1, x)) <= kBasisTol, "cosine q=" + std::to_string(q));
      o.check(williams_inverse(williams_value(x, level), level) == x, "W^-1 W q=" + std::to_string(q));
      o.check(williams_value(williams_inverse(x, level), level) == x, "W W^-1 q=" + std::to_string(q));
    }
  }
  for (int q : {3, 5, 7}) {
    const PrimeLevel level(q);
    for (int n = 3; n <= std::min(q + 1, 6); ++n) {
      for (const GeneratorSet& g : enumerate_q2_generators(level, n)) {
        const Design d = expand(g);
        const double expected = std::pow(double(q), n) / double(d.runs()) - 1.0;
        o.check(std::abs(beta_sum_check(d) - expected) <= kSumTol * std::max(1.0, expected), "sum " + g.to_string());
        const Design e = build(g, b_star(g), Family::Williams);
        o.check(strength(e, 3) == strength(d, 3), "strength " + g.to_string());
        ++designs;
      }
    }
  }
  const int jobs = default_jobs();
  std::string theorems;
  for (int q : {5, 7, 11, 13}) {
    for (int th : {1, 4}) {
      const TheoremCheck c = verify_theorem(th, PrimeLevel(q), 0, jobs);
      o.check(c.passed(), std::string(th == 1 ? "zero beta3" : "mirror symmetry") + " q=" + std::to_string(q));
      designs += c.direct;
    }
  }
  for (int q : {5, 7}) {
    const TheoremCheck c = verify_unique_zero_shift(PrimeLevel(q), 0, jobs);
    o.check(c.passed(), "unique zero shift q=" + std::to_string(q));
    designs += c.direct;
  }
  o.detail = "bases q<=17, " + std::to_string(designs) + " designs checked directly";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "three-column shift table", 1, shift_table},
      {2, "single-generator 7-level scan", 1, seven_level_scan},
      {3, "recursive-type counts", 120, recursive_counts},
      {4, "q^2-run comparison tables", 300, q2_searches},
      {5, "linear shifts with zero beta3", 60, linear_zero_shifts},
      {6, "7^(8-6) exhaustive scan", 600, eight_factor_scan},
      {7, "q=17 second zero shift", 60, q17_second_zero},
      {8, "model diagnostics", 60, models},
      {9, "property suites", 600, properties},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (s > c.budget_s) {
      o.ok = false;
      o.misses.push_back("runtime " + num(s, 2) + " s over budget " + num(c.budget_s, 0) + " s");
    }
    std::printf("%s criterion %d: %s -- %s (%.2f s)\n", o.ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), s);
    for (const auto& m : o.misses) std::printf("    mismatch: %s\n", m.c_str());
    std::fflush(stdout);
    failed += !o.ok;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
