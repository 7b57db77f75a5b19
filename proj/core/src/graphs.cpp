#include "trxy/graphs.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "trxy/errors.hpp"

namespace trxy {

namespace {

std::int64_t factorial64(int k) {
  std::int64_t r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

template <typename T>
std::int64_t multiplicity_product(const std::vector<T>& sorted) {
  std::int64_t r = 1;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    r *= factorial64(static_cast<int>(j - i));
    i = j;
  }
  return r;
}

int find_root(std::vector<int>& parent, int a) {
  while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
  return a;
}

}  // namespace

int DecoratedGraph::edge_count() const {
  int e = 0;
  for (const auto& b : blacks) e += static_cast<int>(b.edges.size());
  return e;
}

int DecoratedGraph::betti1() const { return edge_count() - (n + static_cast<int>(blacks.size())) + 1; }

int DecoratedGraph::genus() const {
  int g = betti1();
  for (const auto& b : blacks) {
    g += b.genus;
    for (const auto& e : b.edges) g += e.h;
  }
  return g;
}

std::vector<int> DecoratedGraph::valences() const {
  std::vector<int> r(static_cast<std::size_t>(n), 0);
  for (const auto& b : blacks) {
    for (const auto& e : b.edges) ++r[static_cast<std::size_t>(e.label - 1)];
  }
  return r;
}

std::vector<int> DecoratedGraph::edge_genera() const {
  std::vector<int> r(static_cast<std::size_t>(n), 0);
  for (const auto& b : blacks) {
    for (const auto& e : b.edges) r[static_cast<std::size_t>(e.label - 1)] += e.h;
  }
  return r;
}

std::string DecoratedGraph::canonical() const {
  std::ostringstream os;
  os << "g=" << genus() << ", b1=" << betti1() << ", aut=" << automorphism_count(*this) << ", blacks=[";
  for (std::size_t i = 0; i < blacks.size(); ++i) {
    if (i) os << ",";
    os << "(" << blacks[i].genus << ",[";
    for (std::size_t j = 0; j < blacks[i].edges.size(); ++j) {
      if (j) os << ",";
      os << "(" << blacks[i].edges[j].label << "," << blacks[i].edges[j].h << ")";
    }
    os << "])";
  }
  os << "]";
  return os.str();
}

int PlainGraph::edge_count() const {
  int e = 0;
  for (const auto& b : blacks) e += static_cast<int>(b.size());
  return e;
}

int PlainGraph::betti1() const { return edge_count() - (n + static_cast<int>(blacks.size())) + 1; }

std::vector<int> PlainGraph::valences() const {
  std::vector<int> r(static_cast<std::size_t>(n), 0);
  for (const auto& b : blacks) {
    for (int l : b) ++r[static_cast<std::size_t>(l - 1)];
  }
  return r;
}

std::string PlainGraph::canonical() const {
  std::ostringstream os;
  os << "b1=" << betti1() << ", aut=" << automorphism_count(*this) << ", blacks=[";
  for (std::size_t i = 0; i < blacks.size(); ++i) {
    if (i) os << ",";
    os << "[";
    for (std::size_t j = 0; j < blacks[i].size(); ++j) {
      if (j) os << ",";
      os << blacks[i][j];
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

DecoratedGraph normalized(DecoratedGraph g) {
  for (auto& b : g.blacks) std::sort(b.edges.begin(), b.edges.end());
  std::sort(g.blacks.begin(), g.blacks.end());
  return g;
}

PlainGraph normalized(PlainGraph g) {
  for (auto& b : g.blacks) std::sort(b.begin(), b.end());
  std::sort(g.blacks.begin(), g.blacks.end());
  return g;
}

PlainGraph shadow(const DecoratedGraph& g) {
  PlainGraph p;
  p.n = g.n;
  for (const auto& b : g.blacks) {
    if (b.edges.size() < 2) continue;
    std::vector<int> labels;
    for (const auto& e : b.edges) labels.push_back(e.label);
    p.blacks.push_back(std::move(labels));
  }
  return normalized(std::move(p));
}

DecoratedGraph undecorated(const PlainGraph& g) {
  DecoratedGraph d;
  d.n = g.n;
  for (const auto& b : g.blacks) {
    BlackVertex v;
    for (int l : b) v.edges.push_back({l, 0});
    d.blacks.push_back(std::move(v));
  }
  return normalized(std::move(d));
}

bool is_connected(const DecoratedGraph& g) {
  if (g.n < 1) return false;
  std::vector<int> parent(static_cast<std::size_t>(g.n));
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& b : g.blacks) {
    if (b.edges.empty()) return false;
    int first = find_root(parent, b.edges.front().label - 1);
    for (const auto& e : b.edges) parent[static_cast<std::size_t>(find_root(parent, e.label - 1))] = first;
  }
  int root = find_root(parent, 0);
  for (int i = 1; i < g.n; ++i) {
    if (find_root(parent, i) != root) return false;
  }
  return true;
}

bool satisfies_conditions(const DecoratedGraph& g, int genus) {
  if (!is_connected(g)) return false;
  for (const auto& b : g.blacks) {
    int chi = 2 - b.genus;
    for (const auto& e : b.edges) {
      if (e.label < 1 || e.label > g.n || e.h < 0) return false;
      chi -= e.h + 1;
    }
    if (b.genus < 0 || chi > 0) return false;
    if (b.edges.size() == 1 && b.genus == 0 && b.edges[0].h == 0) return false;
  }
  return g.betti1() >= 0 && g.genus() == genus;
}

std::vector<DecoratedGraph> enumerate_decorated(int n, int g) {
  if (n < 1 || g < 0) throw ContractViolation("enumeration needs n >= 1 and g >= 0");
  // Each black vertex v contributes t_v = g_v + sum h + valence - 1 >= 1, and
  // the t_v sum to g + n - 1.
  const int budget = g + n - 1;
  std::vector<std::pair<int, BlackVertex>> types;
  std::vector<EdgeEnd> current;
  auto add_types = [&](const std::vector<EdgeEnd>& edges) {
    int k = static_cast<int>(edges.size());
    int hs = 0;
    for (const auto& e : edges) hs += e.h;
    for (int gv = 0; gv + hs + k - 1 <= budget; ++gv) {
      int t = gv + hs + k - 1;
      if (t < 1) continue;
      types.push_back({t, BlackVertex{gv, edges}});
    }
  };
  // Non-decreasing edge sequences with valence k and sum h bounded by the budget.
  auto extend = [&](auto&& self, int hs) -> void {
    int k = static_cast<int>(current.size());
    if (k >= 1) add_types(current);
    if (k + 1 - 1 + hs > budget) return;
    EdgeEnd start = current.empty() ? EdgeEnd{1, 0} : current.back();
    for (int label = start.label; label <= n; ++label) {
      for (int h = (label == start.label ? start.h : 0); k + hs + h <= budget; ++h) {
        current.push_back({label, h});
        self(self, hs + h);
        current.pop_back();
      }
    }
  };
  extend(extend, 0);
  std::sort(types.begin(), types.end(), [](const auto& a, const auto& b) { return a.second < b.second; });

  std::set<std::vector<BlackVertex>> seen;
  std::vector<DecoratedGraph> out;
  std::vector<BlackVertex> chosen;
  auto choose = [&](auto&& self, std::size_t from, int left) -> void {
    if (left == 0) {
      DecoratedGraph dg{n, chosen};
      dg = normalized(std::move(dg));
      if (satisfies_conditions(dg, g) && seen.insert(dg.blacks).second) out.push_back(std::move(dg));
      return;
    }
    for (std::size_t i = from; i < types.size(); ++i) {
      if (types[i].first > left) continue;
      chosen.push_back(types[i].second);
      self(self, i, left - types[i].first);
      chosen.pop_back();
    }
  };
  choose(choose, 0, budget);
  std::sort(out.begin(), out.end(), [](const DecoratedGraph& a, const DecoratedGraph& b) {
    return std::make_tuple(a.betti1(), a.blacks.size(), a.blacks) < std::make_tuple(b.betti1(), b.blacks.size(), b.blacks);
  });
  return out;
}

std::vector<PlainGraph> enumerate_plain(int n, int max_euler) {
  if (n < 1) throw ContractViolation("enumeration needs n >= 1");
  std::set<std::vector<std::vector<int>>> seen;
  std::vector<PlainGraph> out;
  for (int g = 0; 2 * g - 2 + n <= max_euler; ++g) {
    for (const auto& d : enumerate_decorated(n, g)) {
      PlainGraph p = shadow(d);
      if (2 * p.betti1() - 2 + n > max_euler) continue;
      if (seen.insert(p.blacks).second) out.push_back(std::move(p));
    }
  }
  std::sort(out.begin(), out.end(), [](const PlainGraph& a, const PlainGraph& b) {
    return std::make_tuple(a.betti1(), a.blacks.size(), a.blacks) < std::make_tuple(b.betti1(), b.blacks.size(), b.blacks);
  });
  return out;
}

std::int64_t automorphism_count(const DecoratedGraph& g) {
  std::int64_t r = multiplicity_product(g.blacks);
  for (const auto& b : g.blacks) r *= multiplicity_product(b.edges);
  return r;
}

std::int64_t automorphism_count(const PlainGraph& g) { return automorphism_count(undecorated(g)); }

std::int64_t brute_force_automorphisms(const DecoratedGraph& g) {
  struct Edge {
    std::size_t black;
    EdgeEnd end;
  };
  std::vector<Edge> edges;
  for (std::size_t b = 0; b < g.blacks.size(); ++b) {
    for (const auto& e : g.blacks[b].edges) edges.push_back({b, e});
  }
  if (edges.size() > 8) throw ContractViolation("brute-force automorphism count limited to 8 edges");
  std::vector<std::size_t> perm(edges.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t count = 0;
  do {
    std::map<std::size_t, std::size_t> black_map;
    std::set<std::size_t> image;
    bool ok = true;
    for (std::size_t i = 0; i < edges.size() && ok; ++i) {
      const Edge& a = edges[i];
      const Edge& b = edges[perm[i]];
      if (a.end != b.end || g.blacks[a.black].genus != g.blacks[b.black].genus) {
        ok = false;
        break;
      }
      auto it = black_map.find(a.black);
      if (it == black_map.end()) {
        if (!image.insert(b.black).second) ok = false;
        black_map[a.black] = b.black;
      } else if (it->second != b.black) {
        ok = false;
      }
    }
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

}  // namespace trxy
