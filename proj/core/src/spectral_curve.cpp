#include "trxy/spectral_curve.hpp"

#include <algorithm>

#include "trxy/errors.hpp"

namespace trxy {

const char* to_string(Branch b) { return b == Branch::X ? "x" : "y"; }
const char* to_string(InvolutionMode m) { return m == InvolutionMode::ExactGlobal ? "exact-global" : "newton-local"; }

namespace {

bool only_z(const RationalFunction& f) { return (f.var_mask() & ~(VarMask(1) << var_z())) == 0; }

using Dense = std::vector<Rational>;

Dense to_dense(const Polynomial& p) {
  Dense d(static_cast<std::size_t>(std::max(0, p.degree(var_z()))) + 1);
  for (const auto& t : p.terms()) d[t.m.e[static_cast<std::size_t>(var_z())]] = t.c;
  return d;
}

Polynomial from_dense(const Dense& d) {
  std::vector<Term> terms;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (d[k] == 0) continue;
    Monomial m;
    m.e[static_cast<std::size_t>(var_z())] = static_cast<std::uint16_t>(k);
    m.deg = static_cast<std::uint32_t>(k);
    terms.push_back(Term{m, d[k]});
  }
  return Polynomial::from_terms(std::move(terms));
}

Rational horner(const Dense& d, const Rational& x) {
  Rational r = 0;
  for (std::size_t k = d.size(); k-- > 0;) r = r * x + d[k];
  return r;
}

// Divide by (z - r); the remainder is dropped (caller ensures it is zero).
Dense deflate(const Dense& d, const Rational& r) {
  Dense q(d.size() - 1);
  Rational carry = 0;
  for (std::size_t k = d.size(); k-- > 1;) {
    carry = carry * r + d[k];
    q[k - 1] = carry;
  }
  return q;
}

std::vector<Integer> divisors(Integer n) {
  n = abs(n);
  if (n == 0) return {};
  std::vector<std::pair<Integer, unsigned>> primes;
  Integer m = n;
  unsigned long steps = 0;
  for (Integer p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
    if (++steps > 20'000'000UL) throw Error("coefficient too large for the rational-root search");
    unsigned e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e) primes.emplace_back(p, e);
  }
  if (m > 1) primes.emplace_back(m, 1);
  std::vector<Integer> divs{1};
  for (const auto& [p, e] : primes) {
    std::size_t base = divs.size();
    Integer pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  return divs;
}

struct RootSearch {
  std::vector<std::pair<Rational, int>> roots;  // sorted ascending
  Dense leftover;
};

RootSearch rational_roots(const Polynomial& p) {
  Dense d = to_dense(p);
  RootSearch out;
  int zero_mult = 0;
  while (d.size() > 1 && d[0] == 0) {
    d.erase(d.begin());
    ++zero_mult;
  }
  if (zero_mult) out.roots.emplace_back(Rational(0), zero_mult);
  if (d.size() > 1) {
    Integer lcm = 1;
    for (const auto& c : d) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
    Integer a0 = Rational(d.front() * lcm).get_num();
    Integer an = Rational(d.back() * lcm).get_num();
    std::vector<Rational> candidates;
    for (const auto& num : divisors(a0)) {
      for (const auto& den : divisors(an)) {
        Rational c(num, den);
        c.canonicalize();
        candidates.push_back(c);
        candidates.push_back(-c);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (const auto& c : candidates) {
      int mult = 0;
      while (d.size() > 1 && horner(d, c) == 0) {
        d = deflate(d, c);
        ++mult;
      }
      if (mult) out.roots.emplace_back(c, mult);
    }
  }
  std::sort(out.roots.begin(), out.roots.end());
  out.leftover = d;
  return out;
}

Dense ps_mul(const Dense& a, const Dense& b, std::size_t n) {
  Dense r(n);
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

Dense ps_inverse(const Dense& a, std::size_t n) {
  Dense r(n);
  Rational inv = Rational(1) / a[0];
  r[0] = inv;
  for (std::size_t k = 1; k < n; ++k) {
    Rational s = 0;
    for (std::size_t i = 1; i <= k && i < a.size(); ++i) s += a[i] * r[k - i];
    r[k] = -s * inv;
  }
  return r;
}

// G(v, t) = sum_{k>=2} X_k t^{k-2} (1 + v + ... + v^{k-1}) and dG/dv, mod t^n.
std::pair<Dense, Dense> newton_residual(const Dense& X, const Dense& v, std::size_t n) {
  Dense g(n), gv(n);
  Dense vpow{Rational(1)};  // v^j
  Dense geo{Rational(0)};   // 1 + ... + v^{j-1}
  Dense dgeo{Rational(0)};  // derivative of geo in v
  Dense vpow_prev{Rational(0)};
  for (std::size_t k = 1; k < X.size(); ++k) {
    // geo_k = geo_{k-1} + v^{k-1}; dgeo_k = dgeo_{k-1} + (k-1) v^{k-2}
    Dense ng(n), nd(n);
    for (std::size_t i = 0; i < n; ++i) {
      ng[i] = (i < geo.size() ? geo[i] : 0) + (i < vpow.size() ? vpow[i] : 0);
      nd[i] = (i < dgeo.size() ? dgeo[i] : 0) +
              (i < vpow_prev.size() ? vpow_prev[i] * static_cast<long>(k - 1) : Rational(0));
    }
    geo = ng;
    dgeo = nd;
    vpow_prev = vpow;
    vpow = ps_mul(vpow, v, n);
    if (k < 2) continue;
    std::size_t shift = k - 2;
    if (shift >= n) break;
    for (std::size_t i = 0; i + shift < n; ++i) {
      g[i + shift] += X[k] * geo[i];
      gv[i + shift] += X[k] * dgeo[i];
    }
  }
  return {g, gv};
}

LaurentSeries newton_involution(const RationalFunction& f, const Rational& alpha, int order) {
  const auto n_final = static_cast<std::size_t>(std::max(order, 1));  // v mod t^order
  Dense X = taylor_coefficients(f, alpha, order + 2);
  if (X[2] == 0) throw Error("internal: ramification point is not simple");
  Dense v{Rational(-1)};
  std::size_t p = 1;
  while (p < n_final) {
    std::size_t p2 = std::min(2 * p, n_final);
    v.resize(p2);
    auto [g, gv] = newton_residual(X, v, p2);
    Dense step = ps_mul(g, ps_inverse(gv, p2), p2);
    for (std::size_t i = 0; i < p2; ++i) v[i] -= step[i];
    auto check = newton_residual(X, v, p2).first;
    for (const auto& c : check) {
      if (c != 0) throw Error("internal: Newton iteration for the local involution did not converge quadratically");
    }
    p = p2;
  }
  v.resize(n_final);
  std::vector<Rational> coeffs;
  coeffs.push_back(alpha);
  for (const auto& c : v) coeffs.push_back(c);
  return LaurentSeries::from_rationals(0, order, coeffs).set_origin(var_z(), alpha);
}

RationalFunction z_fn() { return RationalFunction::variable(var_z()); }

std::optional<RationalFunction> detect_global_involution(const RationalFunction& f, const Rational& alpha) {
  RationalFunction refl = RationalFunction(alpha * 2) - z_fn();
  if (f.substitute(var_z(), refl) == f) return refl;
  if (alpha != 0) {
    RationalFunction inv = z_fn().inverse().scaled(alpha * alpha);
    if (f.substitute(var_z(), inv) == f) return inv;
  }
  return std::nullopt;
}

void check_infinity(const RationalFunction& f, Branch b) {
  RationalFunction h = f.substitute(var_z(), z_fn().inverse());
  auto coeffs_den = h.den().substitute(var_z(), Rational(0));
  if (coeffs_den.is_zero()) return;  // pole at infinity: not a zero of the differential
  RationalFunction dh = h.derivative(var_z());
  if (dh.substitute(var_z(), Rational(0)).is_zero()) {
    throw AssumptionViolated(std::string("d") + to_string(b) + " vanishes at z = infinity; ramification at infinity is not supported");
  }
}

}  // namespace

std::vector<std::pair<Rational, int>> rational_roots_of(const Polynomial& p) {
  if (p.is_zero()) throw ContractViolation("roots of the zero polynomial");
  return rational_roots(p).roots;
}

SpectralCurve::SpectralCurve(RationalFunction x, RationalFunction y, std::string name)
    : x_(std::move(x)), y_(std::move(y)), name_(std::move(name)) {
  if (!only_z(x_) || !only_z(y_)) throw CurveError("curve functions must depend on z only");
  if (x_.derivative(var_z()).is_zero()) throw CurveError("x is constant");
  if (y_.derivative(var_z()).is_zero()) throw CurveError("y is constant");
}

SpectralCurve SpectralCurve::swapped() const {
  std::string n = name_.empty() ? std::string() : name_ + "-swapped";
  if (name_.size() > 8 && name_.compare(name_.size() - 8, 8, "-swapped") == 0) n = name_.substr(0, name_.size() - 8);
  return SpectralCurve(y_, x_, n);
}

std::string SpectralCurve::canonical_key() const { return "x=" + x_.to_string() + ";y=" + y_.to_string(); }

std::vector<Rational> taylor_coefficients(const RationalFunction& f, const Rational& alpha, int order) {
  auto s = series_expand(f, var_z(), alpha, 0, order);
  if (s.valuation() < 0) throw ContractViolation("function has a pole at the expansion point");
  std::vector<Rational> out;
  for (int k = 0; k <= order; ++k) out.push_back(s.coeff(k).constant_value());
  return out;
}

std::vector<RamificationPoint> ramification_points(const SpectralCurve& curve, Branch branch) {
  const RationalFunction& f = curve.function(branch);
  const RationalFunction& g = curve.other(branch);
  check_infinity(f, branch);
  RationalFunction df = f.derivative(var_z());
  RootSearch rs = rational_roots(df.num());
  if (rs.leftover.size() > 1) {
    Polynomial left = from_dense(rs.leftover).monic();
    throw NonRationalRamification(std::string("d") + to_string(branch) + " has zeros that are not rational; factor " +
                                      left.to_string() + " has no rational root",
                                  left.to_string());
  }
  std::vector<RamificationPoint> out;
  RationalFunction dg = g.derivative(var_z());
  for (const auto& [alpha, mult] : rs.roots) {
    if (mult > 1) {
      throw UnsupportedRamificationProfile(std::string("d") + to_string(branch) + " has a zero of order " +
                                           std::to_string(mult) + " at z = " + trxy::to_string(alpha));
    }
    if (g.den().substitute(var_z(), alpha).is_zero()) {
      throw AssumptionViolated(std::string(to_string(branch == Branch::X ? Branch::Y : Branch::X)) +
                               " has a pole at the ramification point z = " + trxy::to_string(alpha));
    }
    if (dg.substitute(var_z(), alpha).is_zero()) {
      throw AssumptionViolated("x and y ramify at the same point z = " + trxy::to_string(alpha));
    }
    RamificationPoint pt;
    pt.location = alpha;
    pt.branch = branch;
    pt.global_involution = detect_global_involution(f, alpha);
    pt.mode = pt.global_involution ? InvolutionMode::ExactGlobal : InvolutionMode::NewtonLocal;
    out.push_back(std::move(pt));
  }
  return out;
}

LaurentSeries local_involution(const SpectralCurve& curve, const RamificationPoint& point, int order,
                               std::optional<InvolutionMode> mode) {
  InvolutionMode m = mode.value_or(point.mode);
  if (m == InvolutionMode::ExactGlobal) {
    if (!point.global_involution) throw ContractViolation("no exact global involution at this point");
    return series_expand(*point.global_involution, var_z(), point.location, 0, order);
  }
  return newton_involution(curve.function(point.branch), point.location, order);
}

std::vector<std::string> catalog_names() { return {"airy", "gaussian", "two-sided"}; }

SpectralCurve catalog_curve(std::string_view name) {
  RationalFunction z = z_fn();
  auto validated = [](SpectralCurve c) {
    ramification_points(c, Branch::X);
    ramification_points(c, Branch::Y);
    return c;
  };
  if (name == "airy") return validated(SpectralCurve(z.pow(2), z, "airy"));
  if (name == "gaussian") return validated(SpectralCurve(z + z.inverse(), z, "gaussian"));
  if (name == "two-sided") return validated(SpectralCurve(z.pow(2), z.pow(3).scaled(ratio(1, 3)) - z, "two-sided"));
  throw Error("unknown catalog curve '" + std::string(name) + "'");
}

}  // namespace trxy
