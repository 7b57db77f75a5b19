#include "trxy/laurent_series.hpp"

#include <algorithm>
#include <limits>

#include "trxy/errors.hpp"

namespace trxy {

LaurentSeries::LaurentSeries(int valuation, int precision, std::vector<RationalFunction> coeffs)
    : val_(valuation), prec_(precision), c_(std::move(coeffs)) {
  int keep = std::max(0, prec_ - val_ + 1);
  if (static_cast<int>(c_.size()) > keep) c_.resize(static_cast<std::size_t>(keep));
  normalize();
}

void LaurentSeries::normalize() {
  std::size_t lead = 0;
  while (lead < c_.size() && c_[lead].is_zero()) ++lead;
  if (lead == c_.size()) {
    c_.clear();
    val_ = prec_ + 1;
    return;
  }
  if (lead) {
    c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
    val_ += static_cast<int>(lead);
  }
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

LaurentSeries LaurentSeries::zero(int precision) { return LaurentSeries(precision + 1, precision, {}); }

LaurentSeries LaurentSeries::monomial(const RationalFunction& c, int k, int precision) {
  return LaurentSeries(k, precision, {c});
}

LaurentSeries LaurentSeries::from_rationals(int valuation, int precision, const std::vector<Rational>& coeffs) {
  std::vector<RationalFunction> c;
  c.reserve(coeffs.size());
  for (const auto& r : coeffs) c.emplace_back(r);
  return LaurentSeries(valuation, precision, std::move(c));
}

RationalFunction LaurentSeries::coeff(int k) const {
  if (k > prec_) throw TruncationError("coefficient beyond series precision", prec_);
  if (k < val_) return RationalFunction();
  auto i = static_cast<std::size_t>(k - val_);
  return i < c_.size() ? c_[i] : RationalFunction();
}

LaurentSeries LaurentSeries::operator-() const {
  LaurentSeries r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
  int prec = std::min(a.prec_, b.prec_);
  int val = std::min(a.val_, b.val_);
  if (val > prec) return LaurentSeries::zero(prec);
  std::vector<RationalFunction> c(static_cast<std::size_t>(prec - val + 1));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    int k = a.val_ + static_cast<int>(i);
    if (k > prec) break;
    c[static_cast<std::size_t>(k - val)] += a.c_[i];
  }
  for (std::size_t i = 0; i < b.c_.size(); ++i) {
    int k = b.val_ + static_cast<int>(i);
    if (k > prec) break;
    c[static_cast<std::size_t>(k - val)] += b.c_[i];
  }
  return LaurentSeries(val, prec, std::move(c));
}

LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
  int prec = std::min(a.prec_ + b.val_, b.prec_ + a.val_);
  if (a.is_zero() || b.is_zero()) return LaurentSeries::zero(prec);
  int val = a.val_ + b.val_;
  if (val > prec) return LaurentSeries::zero(prec);
  std::vector<RationalFunction> c(static_cast<std::size_t>(prec - val + 1));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      std::size_t k = i + j;
      if (k >= c.size()) break;
      if (b.c_[j].is_zero()) continue;
      c[k] += a.c_[i] * b.c_[j];
    }
  }
  return LaurentSeries(val, prec, std::move(c));
}

LaurentSeries LaurentSeries::inverse() const {
  if (is_zero()) throw TruncationError("inverse of a series with no known nonzero coefficient", prec_);
  int rel = prec_ - val_;  // relative precision
  int val = -val_;
  std::size_t n = static_cast<std::size_t>(rel) + 1;
  std::vector<RationalFunction> r(n);
  RationalFunction inv0 = c_[0].inverse();
  r[0] = inv0;
  for (std::size_t k = 1; k < n; ++k) {
    RationalFunction s;
    for (std::size_t i = 1; i <= k && i < c_.size(); ++i) {
      if (c_[i].is_zero() || r[k - i].is_zero()) continue;
      s += c_[i] * r[k - i];
    }
    r[k] = -(s * inv0);
  }
  return LaurentSeries(val, val + rel, std::move(r));
}

LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b) { return a * b.inverse(); }

LaurentSeries LaurentSeries::scaled(const RationalFunction& c) const {
  if (c.is_zero()) return zero(prec_);
  LaurentSeries r = *this;
  for (auto& x : r.c_) x = x * c;
  return r;
}

LaurentSeries LaurentSeries::shifted(int k) const {
  LaurentSeries r = *this;
  r.val_ += k;
  r.prec_ += k;
  return r;
}

LaurentSeries LaurentSeries::truncated(int precision) const {
  if (precision >= prec_) return *this;
  return LaurentSeries(val_, precision, c_);
}

LaurentSeries LaurentSeries::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  LaurentSeries result = LaurentSeries::monomial(RationalFunction(1), 0, std::numeric_limits<int>::max() / 4);
  if (k == 0) return result.truncated(prec_ - val_);
  LaurentSeries base = *this;
  bool first = true;
  while (k) {
    if (k & 1) {
      result = first ? base : result * base;
      first = false;
    }
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

LaurentSeries LaurentSeries::derivative() const {
  std::vector<RationalFunction> c;
  c.reserve(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c.push_back(c_[i].scaled(val_ + static_cast<int>(i)));
  LaurentSeries r(val_ - 1, prec_ - 1, std::move(c));
  return r;
}

LaurentSeries LaurentSeries::map_coeffs(const std::function<RationalFunction(const RationalFunction&)>& f) const {
  std::vector<RationalFunction> c;
  c.reserve(c_.size());
  for (const auto& x : c_) c.push_back(f(x));
  return LaurentSeries(val_, prec_, std::move(c));
}

bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
  return a.prec_ == b.prec_ && a.val_ == b.val_ && a.c_ == b.c_;
}

std::string LaurentSeries::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += "(" + c_[i].to_string() + ")*t^" + std::to_string(val_ + static_cast<int>(i));
  }
  if (!s.empty()) s += " + ";
  s += "O(t^" + std::to_string(prec_ + 1) + ")";
  return s;
}

LaurentSeries series_expand(const RationalFunction& f, Var v, const Rational& center, int min_deg, int max_deg) {
  if (f.is_zero()) return LaurentSeries::zero(max_deg).set_origin(v, center);
  auto n = f.num().taylor_shift(v, center).coefficients_in(v);
  auto d = f.den().taylor_shift(v, center).coefficients_in(v);
  if (n.empty()) n.emplace_back();
  if (d.empty()) d.emplace_back();
  std::size_t j = 0, m = 0;
  while (n[j].is_zero()) ++j;
  while (d[m].is_zero()) ++m;
  int lead = static_cast<int>(j) - static_cast<int>(m);
  if (max_deg < lead) {
    throw EmptySeriesError("requested degree " + std::to_string(max_deg) + " is below the leading order " +
                           std::to_string(lead));
  }
  if (min_deg > lead) {
    throw ContractViolation("requested window starts at " + std::to_string(min_deg) + " above the leading order " +
                            std::to_string(lead));
  }
  auto count = static_cast<std::size_t>(max_deg - lead + 1);
  auto nk = [&](std::size_t k) { return j + k < n.size() ? n[j + k] : Polynomial(); };
  auto dk = [&](std::size_t k) { return m + k < d.size() ? d[m + k] : Polynomial(); };
  const Polynomial d0 = dk(0);
  // p_k = q_k * d0^{k+1}; p_k = n_k d0^k - sum_{i>=1} d_i p_{k-i} d0^{i-1}.
  std::vector<Polynomial> p(count);
  std::vector<Polynomial> d0pow{Polynomial(1)};
  std::vector<RationalFunction> q(count);
  for (std::size_t k = 0; k < count; ++k) {
    while (d0pow.size() <= k + 1) d0pow.push_back(d0pow.back() * d0);
    Polynomial acc = nk(k) * d0pow[k];
    for (std::size_t i = 1; i <= k; ++i) {
      Polynomial di = dk(i);
      if (di.is_zero() || p[k - i].is_zero()) continue;
      acc -= di * p[k - i] * d0pow[i - 1];
    }
    p[k] = std::move(acc);
    q[k] = RationalFunction(p[k], d0pow[k + 1]);
  }
  return LaurentSeries(lead, max_deg, std::move(q)).set_origin(v, center);
}

RationalFunction series_residue(const LaurentSeries& s) {
  if (s.precision() < -1) {
    throw ContractViolation("truncation window excludes degree -1 (precision " + std::to_string(s.precision()) + ")");
  }
  return s.coeff(-1);
}

LaurentSeries series_compose(const LaurentSeries& outer, const LaurentSeries& inner, int required) {
  if (inner.is_zero()) throw TruncationError("inner series has no known nonzero coefficient", inner.precision());
  int w = inner.valuation();
  if (w < 1) throw ContractViolation("inner series must vanish at the center");
  if (outer.is_zero()) return LaurentSeries::zero(w * (outer.precision() + 1) - 1);
  int v = outer.valuation();
  int prec = std::min(w * (outer.precision() + 1) - 1, w * (v - 1) + inner.precision());
  if (prec < w * v || prec < required) {
    throw TruncationError("composition cannot reach the requested order", prec);
  }
  LaurentSeries u = inner.truncated(prec - w * (v - 1));
  LaurentSeries power = u.pow(v).truncated(prec);
  LaurentSeries acc = LaurentSeries::zero(prec);
  for (int k = v; k <= outer.precision() && w * k <= prec; ++k) {
    RationalFunction c = outer.coeff(k);
    if (!c.is_zero()) acc = acc + power.scaled(c);
    if (w * (k + 1) > prec) break;
    power = (power * u).truncated(prec);
  }
  return acc.truncated(prec);
}

}  // namespace trxy
