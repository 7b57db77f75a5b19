#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trxy/laurent_series.hpp"
#include "trxy/rational_function.hpp"

namespace trxy {

enum class Branch { X, Y };
enum class InvolutionMode { ExactGlobal, NewtonLocal };

const char* to_string(Branch b);
const char* to_string(InvolutionMode m);

// Genus-zero spectral curve given parametrically by rational x(z), y(z).
class SpectralCurve {
 public:
  SpectralCurve(RationalFunction x, RationalFunction y, std::string name = {});

  const RationalFunction& x() const { return x_; }
  const RationalFunction& y() const { return y_; }
  const RationalFunction& function(Branch b) const { return b == Branch::X ? x_ : y_; }
  const RationalFunction& other(Branch b) const { return b == Branch::X ? y_ : x_; }
  const std::string& name() const { return name_; }

  // (x, y) -> (y, x). Swapping twice returns an equal curve.
  SpectralCurve swapped() const;

  // "x=<canonical>;y=<canonical>", the identity used for caching.
  std::string canonical_key() const;

  friend bool operator==(const SpectralCurve& a, const SpectralCurve& b) { return a.x_ == b.x_ && a.y_ == b.y_; }

 private:
  RationalFunction x_;
  RationalFunction y_;
  std::string name_;
};

struct RamificationPoint {
  Rational location;
  Branch branch = Branch::X;
  InvolutionMode mode = InvolutionMode::NewtonLocal;
  // Closed form of sigma(z) when mode == ExactGlobal.
  std::optional<RationalFunction> global_involution;
};

// Finite zeros of d(function(branch)), validated simple, rational, and
// distinct from the other branch's ramification.
std::vector<RamificationPoint> ramification_points(const SpectralCurve& curve, Branch branch);

// sigma(alpha + t) through t^order. `mode` forces a mechanism; by default the
// exact global involution is used when available.
LaurentSeries local_involution(const SpectralCurve& curve, const RamificationPoint& point, int order,
                               std::optional<InvolutionMode> mode = std::nullopt);

// Taylor coefficients f(alpha + t) = sum_k c_k t^k, k = 0..order.
std::vector<Rational> taylor_coefficients(const RationalFunction& f, const Rational& alpha, int order);

// Rational roots of a polynomial in z with multiplicities, ascending.
std::vector<std::pair<Rational, int>> rational_roots_of(const Polynomial& p);

std::vector<std::string> catalog_names();
// Named curves: "airy", "gaussian", "two-sided". Throws Error for unknown names.
SpectralCurve catalog_curve(std::string_view name);

}  // namespace trxy
