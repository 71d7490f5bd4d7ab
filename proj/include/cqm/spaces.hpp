#ifndef CQM_SPACES_HPP_
#define CQM_SPACES_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cqm/words.hpp"

// Metric-space substrate beyond the tree: finite graph spaces, the
// four-point hyperbolicity constant, all-pairs BFS distances, and the
// augmented least-cost path engine (unit edges plus discounted shortcut
// edges) shared with the quasimorphism module.
namespace cqm::spaces {

using words::Letter;
using words::ReducedWord;

struct Disconnected : Error {
  explicit Disconnected(const std::string& what) : Error(what) {}
};
struct RadiusTooSmall : Error {
  explicit RadiusTooSmall(const std::string& what) : Error(what) {}
};

struct FiniteGraphSpace {
  int n = 0;
  std::vector<std::vector<int>> adj;  // symmetric, no multi-edges

  void add_edge(int u, int v);
  static FiniteGraphSpace path(int n);
  static FiniteGraphSpace cycle(int n);
  // One "u v" pair per line, 0-indexed; '#' starts a comment.
  static FiniteGraphSpace from_edge_list(std::string_view text);
};

// Exact BFS metric; throws Disconnected.
std::vector<std::vector<int>> all_pairs_distances(const FiniteGraphSpace& g);

// Minimal delta such that for every vertex quadruple the largest of the
// three pair-sums d(x,y)+d(z,w), d(x,z)+d(y,w), d(x,w)+d(y,z) exceeds the
// median by at most 2*delta; equivalently the Gromov-product form of the
// four-point condition. Half-integral on graphs; 0 exactly on trees.
double delta_four_point(const FiniteGraphSpace& g);

// Ball of radius r about the identity in the Cayley tree of the given rank,
// with the vertex <-> word correspondence retained. Vertex 0 is the
// identity and vertices are ordered by (length, letters).
struct TreeBall {
  FiniteGraphSpace graph;
  int radius = 0;
  int rank = 0;
  std::vector<ReducedWord> word_of;
  int index_of(const ReducedWord& w) const;  // -1 if outside the ball

 private:
  friend TreeBall tree_ball(int radius, int rank);
  std::unordered_map<std::string, int> index_;
};

TreeBall tree_ball(int radius, int rank);

// --- Augmented least-cost search -------------------------------------------
//
// A search problem over a base space with unit edges plus shortcut edges of
// pre-discounted cost. Every shortcut cost must be >= 1, which keeps the
// uniform-cost frontier ordering valid.

struct GraphShortcut {
  int from = 0;
  int to = 0;
  long long cost = 1;
};

struct GraphSearchProblem {
  const FiniteGraphSpace* graph = nullptr;
  int source = 0;
  int target = 0;
  std::vector<GraphShortcut> shortcuts;
};

// Tree flavor: the implicit Cayley tree, restricted to a region. Shortcut
// edges jump from any region vertex u to u * label at the given cost.
struct TreeShortcut {
  ReducedWord label;
  long long cost = 1;
};

struct TreeRegion {
  enum class Kind { BallAroundIdentity, TubeAroundGeodesic };
  Kind kind = Kind::TubeAroundGeodesic;
  long long radius = 0;
  // Tube parameters (distance to the source-target geodesic <= radius).
  ReducedWord source;
  ReducedWord target;

  static TreeRegion ball(long long radius, int rank);
  static TreeRegion tube(const ReducedWord& source, const ReducedWord& target, long long radius);
  bool contains(const ReducedWord& v) const;
};

struct TreeSearchProblem {
  int rank = 2;
  ReducedWord source;
  ReducedWord target;
  std::vector<TreeShortcut> shortcuts;
  TreeRegion region;
};

struct SearchResult {
  long long cost = 0;
  // Length of the optimal path measured in base edges, counting |label|
  // for each shortcut traversed.
  long long base_edge_length = 0;
  long long expanded = 0;  // statistics
};

// Exact least cost over paths mixing unit edges and shortcut edges within
// the region; throws RadiusTooSmall if the target is unreachable there.
SearchResult min_cost_path(const GraphSearchProblem& p);
SearchResult min_cost_path(const TreeSearchProblem& p);

}  // namespace cqm::spaces

#endif  // CQM_SPACES_HPP_
