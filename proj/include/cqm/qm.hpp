#ifndef CQM_QM_HPP_
#define CQM_QM_HPP_

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cqm/spaces.hpp"
#include "cqm/tree.hpp"
#include "cqm/words.hpp"

// Counting quasimorphisms on tree models. For a fixed oriented edge path w
// with weight W < |w|, paths are rewarded for traversing nonoverlapping
// translated copies of w:
//
//     c_w(x, y) = d(x, y) - inf over paths alpha from x to y of
//                 (|alpha| - W * #nonoverlapping copies of w in alpha)
//     h_w(g)    = c_w(x0, g x0) - c_wbar(x0, g x0)
//
// where wbar is the reversed path. Copies are translates of w under the
// acting group; every action built by this library has vertex-transitive
// image on its tree, so copies of w are exactly the subpaths reading w's
// label, and copies of wbar those reading the inverse label.
namespace cqm::qm {

using words::Letter;
using words::NElement;
using words::ReducedWord;

struct PowerTooSmall : Error {
  explicit PowerTooSmall(const std::string& what) : Error(what) {}
};
struct PowerSearchExhausted : Error {
  explicit PowerSearchExhausted(const std::string& what) : Error(what) {}
};

// The data (w, W, x0) of one counting quasimorphism. The label is the
// letter sequence of w read from the start vertex; |w| >= 2W and |w| > W.
struct QmSpec {
  tree::TreeAction action;
  ReducedWord x0;
  ReducedWord start;
  ReducedWord label;
  int weight = 1;

  static QmSpec make(tree::TreeAction action, ReducedWord start, ReducedWord label, int weight,
                     std::optional<ReducedWord> x0 = std::nullopt);
  QmSpec reversed() const;
};

// Maximal number of nonoverlapping copies of w in a path with the given
// label: earliest-end greedy over the occurrence list, which is optimal for
// same-length interval scheduling.
long long count_copies(std::span<const Letter> alpha_label, const ReducedWord& w);

enum class Engine {
  Auto,           // geodesic counting when valid, otherwise search
  GeodesicCount,  // W * (copies on the geodesic); exact for W <= 2 on trees
  Search,         // augmented uniform-cost search with radius stabilization
};

struct EvalStats {
  long long evaluations = 0;
  long long searches = 0;
  // Optimal-path length certificates: counts paths longer than the
  // 2 d(x,y) + 12 W + 4 quasigeodesic budget (reported, not fatal).
  long long quasigeodesic_violations = 0;
};

struct EvalOptions {
  Engine engine = Engine::Auto;
  // When set, the search is confined to exactly this region and no radius
  // stabilization loop runs (used to compare against region-exact oracles).
  const spaces::TreeRegion* region = nullptr;
  EvalStats* stats = nullptr;
  int max_doublings = 6;
};

// Exact c_w between tree vertices. Throws RadiusTooSmall only if the
// stabilization loop hits its doubling cap without two equal results.
long long c_w(const ReducedWord& x, const ReducedWord& y, const QmSpec& spec,
              const EvalOptions& opts = {});

// h_w(g) = c_w(x0, g x0) - c_wbar(x0, g x0); antisymmetric in the label
// orientation by construction.
long long h_w(const NElement& gamma, const QmSpec& spec, const EvalOptions& opts = {});

// A counting quasimorphism with an evaluation cache keyed by the reduced
// word the argument acts by. Purely a performance measure; results match
// h_w exactly.
class QmFunction {
 public:
  QmFunction(QmSpec spec, EvalOptions opts = {});

  long long operator()(const NElement& gamma) const;
  long long value_on_word(const ReducedWord& acting_word) const;
  const QmSpec& spec() const { return spec_; }

 private:
  QmSpec spec_;
  QmSpec reversed_;
  EvalOptions opts_;
  mutable std::unordered_map<std::string, long long> cache_;
};

// Builds the QmSpec of the axis word of f^d: the label read along the axis
// of f starting at the projection of x0, of length d * L_f. Requires
// d * L_f >= 2W (PowerTooSmall otherwise) and f loxodromic.
QmSpec make_axis_word(const NElement& f, long long d, const tree::TreeAction& act, int weight,
                      std::optional<ReducedWord> x0 = std::nullopt);

struct PowerSearchConfig {
  int probe_cap = 20;
  long long d_cap = 16;
  int weight = 1;
};

// Smallest d_i >= ceil(2W / L_i) for which the empirical probe checks pass
// (nonnegativity and growth on own powers, nonnegativity or exact vanishing
// on twisted powers, exact vanishing against all earlier list entries).
// Throws PowerSearchExhausted when the cap is hit.
std::vector<long long> choose_powers(const std::vector<NElement>& fs,
                                     const std::vector<tree::TreeAction>& actions,
                                     const PowerSearchConfig& cfg);

using PairSampler = std::function<std::pair<NElement, NElement>(std::size_t index)>;

struct DefectEstimate {
  long long value = 0;
  NElement witness_g0;
  NElement witness_g1;
};

// Max of |h(g0) - h(g0 g1) + h(g1)| over sampled pairs: a lower bound for
// the true defect, reported as such.
DefectEstimate empirical_defect(const QmFunction& h, const PairSampler& sampler,
                                std::size_t budget);

}  // namespace cqm::qm

#endif  // CQM_QM_HPP_
