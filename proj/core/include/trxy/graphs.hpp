#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace trxy {

// One edge end at a black vertex: the white label (1-based) and the edge genus h.
struct EdgeEnd {
  int label = 1;
  int h = 0;
  friend auto operator<=>(const EdgeEnd&, const EdgeEnd&) = default;
};

struct BlackVertex {
  int genus = 0;
  std::vector<EdgeEnd> edges;  // sorted
  friend auto operator<=>(const BlackVertex&, const BlackVertex&) = default;
};

// A decorated bicoloured graph, determined up to isomorphism by its sorted
// multiset of black vertices.
struct DecoratedGraph {
  int n = 1;
  std::vector<BlackVertex> blacks;  // sorted

  int edge_count() const;
  int betti1() const;
  int genus() const;                    // sum g_i + sum h + b1
  std::vector<int> valences() const;    // r_i, index i - 1
  std::vector<int> edge_genera() const; // H_i, index i - 1
  std::string canonical() const;
  friend bool operator==(const DecoratedGraph&, const DecoratedGraph&) = default;
};

// Undecorated graph: each black vertex is the multiset of white labels it touches.
struct PlainGraph {
  int n = 1;
  std::vector<std::vector<int>> blacks;  // each sorted, outer sorted

  int edge_count() const;
  int betti1() const;
  std::vector<int> valences() const;
  std::string canonical() const;
  friend bool operator==(const PlainGraph&, const PlainGraph&) = default;
};

DecoratedGraph normalized(DecoratedGraph g);
PlainGraph normalized(PlainGraph g);

// Drops decorations and the one-valent black vertices.
PlainGraph shadow(const DecoratedGraph& g);
DecoratedGraph undecorated(const PlainGraph& g);

bool is_connected(const DecoratedGraph& g);
// Checks every defining condition of the decorated family at total genus `genus`.
bool satisfies_conditions(const DecoratedGraph& g, int genus);

// All decorated graphs with n white vertices and total genus g, in canonical order.
std::vector<DecoratedGraph> enumerate_decorated(int n, int g);

// Plain graphs whose lowest order 2 b1 - 2 + n is at most max_euler.
std::vector<PlainGraph> enumerate_plain(int n, int max_euler);

std::int64_t automorphism_count(const DecoratedGraph& g);
std::int64_t automorphism_count(const PlainGraph& g);

// Counts edge permutations preserving endpoints and decorations directly.
std::int64_t brute_force_automorphisms(const DecoratedGraph& g);

}  // namespace trxy
