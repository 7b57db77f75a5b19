#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "trxy/spectral_curve.hpp"

namespace trxy {

inline constexpr const char* kEngineVersion = "trxy-engine-1";

// 1/(a - b)^2; the dz factors are accounted for by the W normalization.
RationalFunction bergman(Var a, Var b);

// x'(z) written in variable v (or y'(z) for Branch::Y).
RationalFunction derivative_in(const SpectralCurve& curve, Branch b, Var v);

// W_{0,2}(x(a), x(b)) - 1/(x(a) - x(b))^2 as a rational function of (a, b);
// regular on the diagonal.
RationalFunction regularized_w02_two_point(const SpectralCurve& curve, Var a, Var b);

// lim_{z'->z} [1/((z-z')^2 x'(z) x'(z')) - 1/(x(z)-x(z'))^2] in variable `at`,
// computed from the Taylor expansion of both terms in z' - z.
RationalFunction regularized_diagonal_w02(const SpectralCurve& curve, Var at);

SpectralCurve swap_roles(const SpectralCurve& curve);

// W_{g,n}(x(z_1), ..., x(z_n)) on the z-plane, in variables z1..zn.
// Conventions: W_{0,1} = y(z1), W_{0,2} = 1/((z1 - z2)^2 x'(z1) x'(z2)).
class CorrelatorTable {
 public:
  explicit CorrelatorTable(SpectralCurve curve);
  CorrelatorTable(const CorrelatorTable&) = delete;
  CorrelatorTable& operator=(const CorrelatorTable&) = delete;

  const SpectralCurve& curve() const { return curve_; }
  const std::vector<RamificationPoint>& ramification() const { return ram_; }

  // Computes missing entries recursively; stable results are memoized.
  RationalFunction get(int g, int n);
  std::optional<RationalFunction> find(int g, int n) const;
  void store(int g, int n, RationalFunction w);
  std::vector<std::pair<int, int>> keys() const;

  // One evaluation of the recursion, bypassing the memo, with the residue
  // window raised by `extra_order` above the default 6g + 2n + 4.
  RationalFunction compute_direct(int g, int n, int extra_order = 0);
  // Window actually used for the memoized entry (after any retries).
  std::optional<int> working_order(int g, int n) const;

  // Persistent cache: one file per curve inside `dir`.
  void attach_cache(const std::filesystem::path& dir);
  static std::filesystem::path cache_file(const std::filesystem::path& dir, const SpectralCurve& curve);
  void save_cache() const;

 private:
  struct Local;
  const Local& local(std::size_t point, int order);
  RationalFunction compute(int g, int n, int order);
  void load_cache();

  SpectralCurve curve_;
  std::vector<RamificationPoint> ram_;
  std::map<std::pair<int, int>, RationalFunction> entries_;
  std::map<std::pair<int, int>, int> orders_;
  std::map<std::pair<std::size_t, int>, std::shared_ptr<Local>> locals_;
  std::optional<std::filesystem::path> cache_dir_;
  mutable std::recursive_mutex mu_;
};

}  // namespace trxy
