#ifndef CQM_TREE_HPP_
#define CQM_TREE_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cqm/words.hpp"

// Geometry of the Cayley tree T of a free group and of isometric actions on
// it: geodesics, axes, boundary rays, closest-point projections, the
// equivalence "same translation direction up to the group" on loxodromics,
// Schottky certification via Stallings foldings, and stabilizer predicates.
//
// Vertices of T are freely reduced words; every nontrivial left translation
// is loxodromic (trees admit no parabolic isometries), and an action factor
// with trivial image is elliptic.
namespace cqm::tree {

using words::CyclicWord;
using words::Letter;
using words::NElement;
using words::ReducedWord;

struct NotLoxodromic : Error {
  explicit NotLoxodromic(const std::string& what) : Error(what) {}
};
struct SearchExhausted : Error {
  explicit SearchExhausted(const std::string& what) : Error(what) {}
};
struct NotFreeBasis : Error {
  explicit NotFreeBasis(const std::string& what) : Error(what) {}
};

// An isometric action of N on the Cayley tree of rank `rank`: every n acts
// by left multiplication by image(n). A trivial image word means n acts as
// the identity (elliptic). All actions built here have vertex-transitive
// image (the image subgroup is the whole free group), which the counting
// machinery in cqm::qm relies on.
struct TreeAction {
  std::string name;
  int rank = 2;
  std::function<ReducedWord(const NElement&)> image;

  ReducedWord apply(const NElement& n, const ReducedWord& vertex) const {
    return words::multiply(image(n), vertex);
  }
};

// N = the free group itself, acting by left multiplication.
TreeAction left_multiplication_action(int rank);
// N = a direct product; the chosen factor acts by left multiplication, the
// others act trivially.
TreeAction factor_projection_action(std::size_t which_factor, int rank, std::string name);
// The action n |-> base(aut(n)); used for the twisted actions of a finite
// quotient's outer representatives.
TreeAction composed_action(const TreeAction& base,
                           std::function<NElement(const NElement&)> automorphism,
                           std::string name);

// Unique vertex path from x to y; length |x^-1 y|.
std::vector<ReducedWord> geodesic(const ReducedWord& x, const ReducedWord& y);
long long tree_distance(const ReducedWord& x, const ReducedWord& y);

// A boundary ray written as prefix . repeat^inf, freely reduced as an
// infinite word. Normal form: the repeat is primitive and the prefix is the
// shortest word from which the periodic tail starts, so two rays describe
// the same end iff their normal forms are identical. Textual form:
// "prefix|(repeat)^inf".
class Ray {
 public:
  // Requires: repeat nonempty and cyclically reduced; prefix . repeat^inf
  // freely reduced at the junction.
  Ray(ReducedWord prefix, ReducedWord repeat);

  const ReducedWord& prefix() const { return prefix_; }
  const ReducedWord& repeat() const { return repeat_; }
  int rank() const { return repeat_.rank(); }
  Letter letter_at(std::size_t i) const {
    return i < prefix_.size() ? prefix_.at(i)
                              : repeat_.at((i - prefix_.size()) % repeat_.size());
  }
  std::string str() const;

  friend bool operator==(const Ray& a, const Ray& b) {
    return a.prefix_ == b.prefix_ && a.repeat_ == b.repeat_;
  }
  friend bool operator!=(const Ray& a, const Ray& b) { return !(a == b); }

 private:
  ReducedWord prefix_;
  ReducedWord repeat_;
};

// The image of a ray under left multiplication, renormalized.
Ray translate_ray(const ReducedWord& by, const Ray& ray);

// Ordered pair of distinct boundary points of a loxodromic isometry.
struct BoundaryPair {
  Ray minus;
  Ray plus;
};

bool pairs_share_end(const BoundaryPair& a, const BoundaryPair& b);

// The axis of a loxodromic tree isometry g = conjugator . period . conjugator^-1
// (left multiplication by the acting word). Its vertex set is
// { conjugator . p : p a prefix of period^inf or of (period^-1)^inf }, a
// bi-infinite geodesic parameterized here by a signed integer position with
// vertex_at(0) = conjugator.
class Axis {
 public:
  Axis(ReducedWord conjugator, ReducedWord period_word);

  const ReducedWord& conjugator() const { return conjugator_; }
  const ReducedWord& period_word() const { return period_word_; }
  CyclicWord period() const;
  long long translation_length() const { return static_cast<long long>(period_word_.size()); }

  ReducedWord vertex_at(long long i) const;
  Letter direction_letter(long long i) const;  // label of the edge vertex_at(i) -> vertex_at(i+1)
  Ray minus_ray() const;
  Ray plus_ray() const;

 private:
  ReducedWord conjugator_;
  ReducedWord period_word_;  // the specific rotation fixing the parameterization
  ReducedWord period_inverse_;
};

Axis axis_of(const NElement& g, const TreeAction& act);
BoundaryPair boundary_pair(const NElement& g, const TreeAction& act);

// Unique closest axis vertex (projections in trees are single points).
ReducedWord project_to_axis(const ReducedWord& x, const Axis& axis);
// Signed axis position of the projection.
long long project_to_axis_position(const ReducedWord& x, const Axis& axis);

// Diameter of the closest-point projection of B onto A: the length of the
// overlap segment, 0 for a point, unbounded iff the two axes share an end.
struct ProjectionDiameter {
  bool unbounded = false;
  long long diameter = 0;
};
ProjectionDiameter projection_diameter(const Axis& a, const Axis& b);

// Decides whether two loxodromics translate along group-equivalent oriented
// directions, i.e. whether their oriented primitive-root cyclic words are
// conjugate. On a tree this is exact: two segments that stay L-Hausdorff
// close rel endpoints share a common subsegment of length >= len - 2L, and
// arbitrarily long oriented common subwords of two periodic bi-infinite
// words force conjugate primitive periods (Fine and Wilf). A brute-force
// common-subword oracle cross-checks this criterion in the test suite.
bool sim_equivalent(const NElement& g, const NElement& h, const TreeAction& act);
// Same criterion with the two elements acting through different actions
// (used for certificates about twisted actions).
bool sim_equivalent(const NElement& g, const TreeAction& act_g, const NElement& h,
                    const TreeAction& act_h);

// Stallings-folded core graph of the subgroup generated by the given words,
// with basepoint membership reading and first-betti-number rank.
class SubgroupGraph {
 public:
  static SubgroupGraph fold(const std::vector<ReducedWord>& generators);

  int rank() const { return rank_; }
  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edge_count_; }
  bool contains(const ReducedWord& w) const;

 private:
  SubgroupGraph() = default;
  int word_rank_ = 0;
  int rank_ = 0;
  std::size_t vertex_count_ = 0;
  std::size_t edge_count_ = 0;
  // adj_[v][slot] = target vertex or -1; slot encodes the signed letter.
  std::vector<std::vector<int>> adj_;
  int basepoint_ = 0;
};

// True iff the action of n fixes both boundary points of P (rays compare by
// eventual coincidence, i.e. equality of normal forms).
bool stab_membership(const NElement& n, const BoundaryPair& p, const TreeAction& act);

// True iff the endpoint pairs of h and k h k^-1 are disjoint as unordered
// pairs, i.e. the two loxodromics are independent.
bool independence_check(const NElement& h, const NElement& k, const TreeAction& act);

// Searches for the least a >= 1 such that h1' = g1^a h1 g1^-a h1^-1 together
// with g1 stays a rank-2 free pair and is direction-inequivalent to g1 (in
// both orientations) under every listed action that is not elliptic on the
// pair. Elliptic actions (trivial images) are skipped.
struct GoodBasis {
  NElement g1;
  NElement h1;
  long long a = 0;
};
constexpr long long default_good_basis_bound = 64;
GoodBasis good_basis(const NElement& g1, const NElement& h1,
                     const std::vector<TreeAction>& actions,
                     long long a_max = default_good_basis_bound);

}  // namespace cqm::tree

#endif  // CQM_TREE_HPP_
