#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trxy/correlators.hpp"
#include "trxy/factored.hpp"
#include "trxy/graphs.hpp"

namespace trxy {

enum class SwapMethod { Graphs, Operator, Tree, Exponential, Hand };

std::string to_string(SwapMethod m);
std::optional<SwapMethod> parse_swap_method(std::string_view s);

struct TermEntry {
  DecoratedGraph graph;
  std::string group;  // canonical form of the undecorated shadow
  Rational inverse_aut;
  RationalFunction contribution;
  RationalFunction running_total;
};

struct TermReport {
  std::vector<TermEntry> entries;
  RationalFunction total;
  // Subtotals per shadow graph, keyed by its canonical form.
  std::map<std::string, RationalFunction> group_totals() const;
};

// 1/(2^{2h} (2h+1)!), the coefficient of w^{2h} in (e^{w/2} - e^{-w/2})/w.
Rational s_coefficient(int h);

// Evaluates the dual correlators of the curve with x and y exchanged from the
// correlators of `table`, all on the z-plane.
class SwapEngine {
 public:
  // With compute_missing = false every needed table entry must already be
  // present; otherwise a DependencyError lists the missing ones.
  explicit SwapEngine(CorrelatorTable& table, bool compute_missing = true);

  const SpectralCurve& curve() const { return table_.curve(); }
  CorrelatorTable& table() { return table_; }

  // d/dx = (1/x'(z)) d/dz and d/dy = (1/y'(z)) d/dz acting on variable v.
  RationalFunction d_x(const RationalFunction& f, Var v, int times = 1);
  RationalFunction d_y(const RationalFunction& f, Var v, int times = 1);
  // dx/dy = x'(z)/y'(z) in variable v.
  RationalFunction xprime_y(Var v) const;
  // Table entry W_{g,n} in z1..zn.
  RationalFunction correlator(int g, int n);

  RationalFunction weight(const BlackVertex& b);

  RationalFunction swap_correlator(int g, int n, TermReport* report = nullptr);
  RationalFunction via_operator_series(int g, int n, int* used_nu = nullptr);
  RationalFunction genus0_tree(int n);
  RationalFunction n1_exponential(int g);
  // Term-by-term transcription of the printed low-order formulas; `parts`
  // receives the individual printed groups.
  RationalFunction hand_coded(int g, int n, std::vector<RationalFunction>* parts = nullptr);

  RationalFunction compute(int g, int n, SwapMethod method);
  static bool applies(SwapMethod method, int g, int n);

  // Table entries needed by the graph form at (g, n).
  std::vector<std::pair<int, int>> dependencies(int g, int n) const;

 private:
  friend class HatSeries;

  void require(const std::vector<std::pair<int, int>>& deps);
  const FactoredFunction& inv_xprime(Var v);
  const FactoredFunction& inv_yprime(Var v);
  const FactoredFunction& xprime_y_factored(Var v);
  FactoredFunction dx(FactoredFunction f, Var v, int times = 1);
  FactoredFunction dy(FactoredFunction f, Var v, int times = 1);
  const FactoredFunction& weight_factored(const BlackVertex& b);
  RationalFunction unstable(int g, int n);
  FactoredFunction apply_dual_operators(FactoredFunction f, const std::vector<int>& powers);

  CorrelatorTable& table_;
  bool compute_missing_;
  std::map<Var, FactoredFunction> inv_xp_, inv_yp_, xp_y_;
  std::map<BlackVertex, FactoredFunction> weights_;
};

}  // namespace trxy
