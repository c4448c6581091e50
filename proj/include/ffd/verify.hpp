#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ffd/design.hpp"

namespace ffd {

/// Outcome of an exhaustive theorem check. `direct` counts designs built and
/// checked whole; `certificates` counts column-projection checks that cover
/// every n up to q+1 at once.
struct TheoremCheck {
  int theorem = 0;
  int q = 0;
  int n_max = 0;
  std::int64_t direct = 0;
  std::int64_t certificates = 0;
  std::vector<std::string> scope;
  std::vector<std::string> failures;  // first few only
  std::int64_t failure_count = 0;

  bool passed() const noexcept { return failure_count == 0; }
};

/// Largest n checked design-by-design when no bound is given.
int default_direct_nmax(int theorem, const PrimeLevel& q);

/// beta_3(E_{b*}) <= tol for every reduced q^2-run generator set, n = 3..n_max
/// directly; plus the triple certificate for q^2-run designs of any n.
TheoremCheck verify_zero_beta3(const PrimeLevel& q, int n_max = 0, int jobs = 1, double tol = 1e-9);

/// For every type-II (or type-I) design with m <= 2 dependent columns among
/// the reduced q^2-run sets (n = 3, 4) and the q^3-run sets with one
/// generator: exactly one b gives beta_3(E_b) <= tol, and it is b*.
TheoremCheck verify_unique_zero_shift(const PrimeLevel& q, int n_max = 0, int jobs = 1, double tol = 1e-9);

/// E_{b*} mirror-symmetric with every odd-order beta <= tol, n = 3..n_max
/// directly; plus the per-column reflection certificate for any n.
TheoremCheck verify_mirror_symmetry(const PrimeLevel& q, int n_max = 0, int jobs = 1, double tol = 1e-9);

TheoremCheck verify_theorem(int theorem, const PrimeLevel& q, int n_max = 0, int jobs = 1);

/// Sum of beta_3 over all 3-column projections; equals beta_3 for strength-2
/// designs since every order-3 u touches at most three columns.
double projected_beta3(const Design& d);

}  // namespace ffd
