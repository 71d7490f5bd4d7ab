#include "cqm/tree.hpp"

#include <algorithm>
#include <cassert>
#include <utility>

namespace cqm::tree {

using words::inverse_letter;

TreeAction left_multiplication_action(int rank) {
  TreeAction act;
  act.name = "left-multiplication";
  act.rank = rank;
  act.image = [](const NElement& n) { return n.factor(0); };
  return act;
}

TreeAction factor_projection_action(std::size_t which_factor, int rank, std::string name) {
  TreeAction act;
  act.name = std::move(name);
  act.rank = rank;
  act.image = [which_factor](const NElement& n) { return n.factor(which_factor); };
  return act;
}

TreeAction composed_action(const TreeAction& base,
                           std::function<NElement(const NElement&)> automorphism,
                           std::string name) {
  TreeAction act;
  act.name = std::move(name);
  act.rank = base.rank;
  auto base_image = base.image;
  act.image = [base_image, automorphism](const NElement& n) { return base_image(automorphism(n)); };
  return act;
}

std::vector<ReducedWord> geodesic(const ReducedWord& x, const ReducedWord& y) {
  words::require_same_rank(x, y);
  ReducedWord step = words::multiply(words::inverse(x), y);
  std::vector<ReducedWord> path;
  path.reserve(step.size() + 1);
  path.push_back(x);
  std::vector<Letter> cur(x.letters());
  for (Letter l : step.letters()) {
    if (!cur.empty() && cur.back() == inverse_letter(l)) {
      cur.pop_back();
    } else {
      cur.push_back(l);
    }
    path.push_back(ReducedWord::from_reduced(x.rank(), cur));
  }
  return path;
}

long long tree_distance(const ReducedWord& x, const ReducedWord& y) {
  words::require_same_rank(x, y);
  std::size_t lcp = 0;
  while (lcp < x.size() && lcp < y.size() && x.at(lcp) == y.at(lcp)) ++lcp;
  return static_cast<long long>(x.size() + y.size() - 2 * lcp);
}

namespace {

std::vector<Letter> rotate_left(const std::vector<Letter>& v, std::size_t s) {
  std::vector<Letter> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(v[(i + s) % v.size()]);
  return out;
}

}  // namespace

Ray::Ray(ReducedWord prefix, ReducedWord repeat) {
  words::require_same_rank(prefix, repeat);
  if (repeat.empty()) throw words::EmptyWord("ray repeat must be nonempty");
  if (!words::is_cyclically_reduced(repeat)) {
    throw Error("ray repeat must be cyclically reduced: " + repeat.str());
  }
  if (!prefix.empty() && prefix.at(prefix.size() - 1) == inverse_letter(repeat.at(0))) {
    throw Error("ray prefix does not read reduced into its repeat");
  }
  // Normal form: primitive repeat, then absorb trailing prefix letters that
  // extend the periodic tail leftwards (rotating the repeat as we go).
  words::PrimitiveRoot pr = words::primitive_root_letters(repeat.rank(), repeat.letters());
  std::vector<Letter> rep = std::move(pr.root_letters);
  std::vector<Letter> pre(prefix.letters());
  while (!pre.empty() && pre.back() == rep.back()) {
    pre.pop_back();
    std::rotate(rep.rbegin(), rep.rbegin() + 1, rep.rend());
  }
  prefix_ = ReducedWord::from_reduced(prefix.rank(), std::move(pre));
  repeat_ = ReducedWord::from_reduced(repeat.rank(), std::move(rep));
}

std::string Ray::str() const { return prefix_.str() + "|(" + repeat_.str() + ")^inf"; }

Ray translate_ray(const ReducedWord& by, const Ray& ray) {
  if (by.rank() != ray.rank()) throw words::RankMismatch("translate_ray: rank mismatch");
  // Cancel the suffix of `by` against the head of the infinite word.
  std::size_t t = 0;
  while (t < by.size() && by.at(by.size() - 1 - t) == inverse_letter(ray.letter_at(t))) ++t;
  std::vector<Letter> left(by.letters().begin(),
                           by.letters().begin() + static_cast<std::ptrdiff_t>(by.size() - t));
  const std::size_t p = ray.prefix().size();
  if (t <= p) {
    left.insert(left.end(), ray.prefix().letters().begin() + static_cast<std::ptrdiff_t>(t),
                ray.prefix().letters().end());
    return Ray(ReducedWord::from_reduced(by.rank(), std::move(left)), ray.repeat());
  }
  const std::size_t s = (t - p) % ray.repeat().size();
  return Ray(ReducedWord::from_reduced(by.rank(), std::move(left)),
             ReducedWord::from_reduced(by.rank(), rotate_left(ray.repeat().letters(), s)));
}

bool pairs_share_end(const BoundaryPair& a, const BoundaryPair& b) {
  return a.minus == b.minus || a.minus == b.plus || a.plus == b.minus || a.plus == b.plus;
}

Axis::Axis(ReducedWord conjugator, ReducedWord period_word)
    : conjugator_(std::move(conjugator)),
      period_word_(std::move(period_word)),
      period_inverse_(words::inverse(period_word_)) {
  words::require_same_rank(conjugator_, period_word_);
  if (period_word_.empty()) throw NotLoxodromic("axis period must be nonempty");
  if (!words::is_cyclically_reduced(period_word_)) {
    throw Error("axis period must be cyclically reduced: " + period_word_.str());
  }
  if (!conjugator_.empty()) {
    Letter last = conjugator_.at(conjugator_.size() - 1);
    if (last == inverse_letter(period_word_.at(0)) || last == period_word_.at(period_word_.size() - 1)) {
      throw Error("axis conjugator does not read reduced into the period");
    }
  }
}

CyclicWord Axis::period() const {
  return CyclicWord::from_cyclically_reduced(period_word_.rank(), period_word_.letters());
}

ReducedWord Axis::vertex_at(long long i) const {
  std::vector<Letter> letters(conjugator_.letters());
  const std::size_t L = period_word_.size();
  if (i >= 0) {
    letters.reserve(letters.size() + static_cast<std::size_t>(i));
    for (long long k = 0; k < i; ++k) {
      letters.push_back(period_word_.at(static_cast<std::size_t>(k) % L));
    }
  } else {
    letters.reserve(letters.size() + static_cast<std::size_t>(-i));
    for (long long k = 0; k < -i; ++k) {
      letters.push_back(period_inverse_.at(static_cast<std::size_t>(k) % L));
    }
  }
  return ReducedWord::from_reduced(period_word_.rank(), std::move(letters));
}

Letter Axis::direction_letter(long long i) const {
  const long long L = translation_length();
  long long m = i % L;
  if (m < 0) m += L;
  return period_word_.at(static_cast<std::size_t>(m));
}

Ray Axis::minus_ray() const { return Ray(conjugator_, period_inverse_); }
Ray Axis::plus_ray() const { return Ray(conjugator_, period_word_); }

Axis axis_of(const NElement& g, const TreeAction& act) {
  ReducedWord m = act.image(g);
  if (m.empty()) {
    throw NotLoxodromic("element acts elliptically (trivial image) under action " + act.name);
  }
  words::CyclicReduction cr = words::cyclic_reduce(m);
  return Axis(cr.conjugator, cr.core);
}

BoundaryPair boundary_pair(const NElement& g, const TreeAction& act) {
  Axis a = axis_of(g, act);
  return BoundaryPair{a.minus_ray(), a.plus_ray()};
}

long long project_to_axis_position(const ReducedWord& x, const Axis& axis) {
  ReducedWord y = words::multiply(words::inverse(axis.conjugator()), x);
  const std::size_t L = axis.period_word().size();
  std::size_t plus = 0;
  while (plus < y.size() && y.at(plus) == axis.period_word().at(plus % L)) ++plus;
  std::size_t minus = 0;
  const ReducedWord pinv = words::inverse(axis.period_word());
  while (minus < y.size() && y.at(minus) == pinv.at(minus % L)) ++minus;
  return plus >= minus ? static_cast<long long>(plus) : -static_cast<long long>(minus);
}

ReducedWord project_to_axis(const ReducedWord& x, const Axis& axis) {
  return axis.vertex_at(project_to_axis_position(x, axis));
}

namespace {

// Signed axis position of the entry point of a boundary ray that is not an
// end of the axis.
long long project_end_position(const Ray& end, const Axis& axis) {
  Ray r = translate_ray(words::inverse(axis.conjugator()), end);
  const std::size_t L = axis.period_word().size();
  const ReducedWord pinv = words::inverse(axis.period_word());
  // Beyond this many agreeing letters two eventually periodic reduced words
  // coincide, which is excluded by the shared-end check in the caller.
  const std::size_t cap = r.prefix().size() + 2 * (r.repeat().size() + L) + 8;
  std::size_t plus = 0;
  while (plus < cap && r.letter_at(plus) == axis.period_word().at(plus % L)) ++plus;
  std::size_t minus = 0;
  while (minus < cap && r.letter_at(minus) == pinv.at(minus % L)) ++minus;
  assert(plus < cap && minus < cap);
  return plus >= minus ? static_cast<long long>(plus) : -static_cast<long long>(minus);
}

}  // namespace

ProjectionDiameter projection_diameter(const Axis& a, const Axis& b) {
  BoundaryPair ends_a{a.minus_ray(), a.plus_ray()};
  BoundaryPair ends_b{b.minus_ray(), b.plus_ray()};
  if (pairs_share_end(ends_a, ends_b)) return ProjectionDiameter{true, 0};
  long long lo = project_end_position(ends_b.minus, a);
  long long hi = project_end_position(ends_b.plus, a);
  return ProjectionDiameter{false, hi >= lo ? hi - lo : lo - hi};
}

bool sim_equivalent(const NElement& g, const NElement& h, const TreeAction& act) {
  return sim_equivalent(g, act, h, act);
}

bool sim_equivalent(const NElement& g, const TreeAction& act_g, const NElement& h,
                    const TreeAction& act_h) {
  Axis ag = axis_of(g, act_g);
  Axis ah = axis_of(h, act_h);
  auto [root_g, eg] = words::primitive_root(ag.period());
  auto [root_h, eh] = words::primitive_root(ah.period());
  (void)eg;
  (void)eh;
  return words::cyclic_equal(root_g, root_h);
}

namespace {

class Dsu {
 public:
  explicit Dsu(std::size_t n) : parent_(n) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<int>(i);
  }
  int find(int v) {
    while (parent_[static_cast<std::size_t>(v)] != v) {
      parent_[static_cast<std::size_t>(v)] =
          parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])];
      v = parent_[static_cast<std::size_t>(v)];
    }
    return v;
  }
  // Keeps the smaller index as representative (so the basepoint 0 survives).
  int unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (a > b) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    return a;
  }

 private:
  std::vector<int> parent_;
};

std::size_t slot_of(Letter l) {
  return l > 0 ? 2 * static_cast<std::size_t>(l - 1) : 2 * static_cast<std::size_t>(-l - 1) + 1;
}

Letter letter_of_slot(std::size_t s) {
  int idx = static_cast<int>(s / 2) + 1;
  return s % 2 == 0 ? static_cast<Letter>(idx) : static_cast<Letter>(-idx);
}

struct PendingEdge {
  int u;
  Letter l;
  int v;
};

}  // namespace

SubgroupGraph SubgroupGraph::fold(const std::vector<ReducedWord>& generators) {
  if (generators.empty()) throw Error("fold_subgroup: empty generator list");
  const int rank = generators.front().rank();
  for (const auto& g : generators) {
    if (g.rank() != rank) throw words::RankMismatch("fold_subgroup: mixed ranks");
  }
  const std::size_t slots = 2 * static_cast<std::size_t>(rank);

  std::size_t vertex_budget = 1;
  for (const auto& g : generators) vertex_budget += g.size();
  std::vector<std::vector<int>> adj(vertex_budget, std::vector<int>(slots, -1));
  Dsu dsu(vertex_budget);
  std::vector<PendingEdge> pending;
  int next_vertex = 1;
  for (const auto& g : generators) {
    if (g.empty()) continue;
    int cur = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      int nxt = (i + 1 == g.size()) ? 0 : next_vertex++;
      pending.push_back(PendingEdge{cur, g.at(i), nxt});
      cur = nxt;
    }
  }

  auto wipe_into_pending = [&](int loser) {
    for (std::size_t s = 0; s < slots; ++s) {
      int t = adj[static_cast<std::size_t>(loser)][s];
      if (t != -1) {
        pending.push_back(PendingEdge{loser, letter_of_slot(s), t});
        adj[static_cast<std::size_t>(loser)][s] = -1;
      }
    }
  };

  while (!pending.empty()) {
    PendingEdge e = pending.back();
    pending.pop_back();
    int u = dsu.find(e.u);
    int v = dsu.find(e.v);
    std::size_t s = slot_of(e.l);
    std::size_t s2 = slot_of(inverse_letter(e.l));
    int tu = adj[static_cast<std::size_t>(u)][s];
    if (tu != -1) tu = dsu.find(tu);
    adj[static_cast<std::size_t>(u)][s] = tu;
    if (tu != -1 && tu != v) {
      // Two outgoing edges with the same label: fold their targets together.
      int winner = dsu.unite(tu, v);
      int loser = winner == tu ? v : tu;
      wipe_into_pending(loser);
      pending.push_back(PendingEdge{u, e.l, winner});
      continue;
    }
    int tv = adj[static_cast<std::size_t>(v)][s2];
    if (tv != -1) tv = dsu.find(tv);
    adj[static_cast<std::size_t>(v)][s2] = tv;
    if (tv != -1 && tv != u) {
      int winner = dsu.unite(tv, u);
      int loser = winner == tv ? u : tv;
      wipe_into_pending(loser);
      pending.push_back(PendingEdge{winner, e.l, v});
      continue;
    }
    adj[static_cast<std::size_t>(u)][s] = v;
    adj[static_cast<std::size_t>(v)][s2] = u;
  }

  // Gather the folded component of the basepoint with resolved indices.
  int base = dsu.find(0);
  std::vector<int> order;
  std::vector<int> index(vertex_budget, -1);
  order.push_back(base);
  index[static_cast<std::size_t>(base)] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    int v = order[head];
    for (std::size_t s = 0; s < slots; ++s) {
      int t = adj[static_cast<std::size_t>(v)][s];
      if (t == -1) continue;
      t = dsu.find(t);
      adj[static_cast<std::size_t>(v)][s] = t;
      if (index[static_cast<std::size_t>(t)] == -1) {
        index[static_cast<std::size_t>(t)] = static_cast<int>(order.size());
        order.push_back(t);
      }
    }
  }

  std::vector<std::vector<int>> compact(order.size(), std::vector<int>(slots, -1));
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t s = 0; s < slots; ++s) {
      int t = adj[static_cast<std::size_t>(order[i])][s];
      if (t != -1) compact[i][s] = index[static_cast<std::size_t>(t)];
    }
  }

  // Trim hanging trees: reduced words cannot enter and leave a valence-1
  // vertex, so membership reading is unaffected and the core carries the rank.
  std::vector<bool> removed(compact.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t v = 1; v < compact.size(); ++v) {
      if (removed[v]) continue;
      int degree = 0;
      std::size_t last_slot = 0;
      for (std::size_t s = 0; s < slots; ++s) {
        if (compact[v][s] != -1) {
          ++degree;
          last_slot = s;
        }
      }
      if (degree == 1) {
        int t = compact[v][last_slot];
        compact[v][last_slot] = -1;
        compact[static_cast<std::size_t>(t)][slot_of(inverse_letter(letter_of_slot(last_slot)))] = -1;
        removed[v] = true;
        changed = true;
      }
    }
  }

  SubgroupGraph out;
  out.word_rank_ = rank;
  out.basepoint_ = 0;
  out.adj_ = std::move(compact);
  std::size_t vcount = 0, half_edges = 0;
  for (std::size_t v = 0; v < out.adj_.size(); ++v) {
    if (removed[v]) continue;
    ++vcount;
    for (std::size_t s = 0; s < slots; ++s) {
      if (out.adj_[v][s] != -1) ++half_edges;
    }
  }
  out.vertex_count_ = vcount;
  out.edge_count_ = half_edges / 2;
  out.rank_ = static_cast<int>(out.edge_count_) - static_cast<int>(out.vertex_count_) + 1;
  return out;
}

bool SubgroupGraph::contains(const ReducedWord& w) const {
  if (w.rank() != word_rank_) throw words::RankMismatch("SubgroupGraph::contains: rank mismatch");
  int cur = basepoint_;
  for (Letter l : w.letters()) {
    int t = adj_[static_cast<std::size_t>(cur)][slot_of(l)];
    if (t == -1) return false;
    cur = t;
  }
  return cur == basepoint_;
}

bool stab_membership(const NElement& n, const BoundaryPair& p, const TreeAction& act) {
  ReducedWord m = act.image(n);
  if (m.empty()) return true;  // trivial action fixes every end
  return translate_ray(m, p.minus) == p.minus && translate_ray(m, p.plus) == p.plus;
}

bool independence_check(const NElement& h, const NElement& k, const TreeAction& act) {
  BoundaryPair ph = boundary_pair(h, act);
  NElement conj = words::multiply(words::multiply(k, h), words::inverse(k));
  BoundaryPair pc = boundary_pair(conj, act);
  return !pairs_share_end(ph, pc);
}

GoodBasis good_basis(const NElement& g1, const NElement& h1,
                     const std::vector<TreeAction>& actions, long long a_max) {
  const TreeAction* faithful = nullptr;
  for (const auto& act : actions) {
    if (!act.image(g1).empty() && !act.image(h1).empty()) {
      faithful = &act;
      break;
    }
  }
  if (faithful == nullptr) {
    throw NotFreeBasis("good_basis: no listed action sees the pair");
  }
  if (SubgroupGraph::fold({faithful->image(g1), faithful->image(h1)}).rank() != 2) {
    throw NotFreeBasis("good_basis: the input pair is not a rank-2 free basis");
  }

  for (long long a = 1; a <= a_max; ++a) {
    NElement ga = words::power(g1, a);
    NElement h1p = words::multiply(words::multiply(ga, h1),
                                   words::multiply(words::inverse(ga), words::inverse(h1)));
    bool ok = true;
    for (const auto& act : actions) {
      ReducedWord img_g = act.image(g1);
      ReducedWord img_h = act.image(h1p);
      if (img_g.empty() && img_h.empty()) continue;  // elliptic on the pair
      if (img_g.empty() || img_h.empty()) {
        throw NotLoxodromic("good_basis: action " + act.name +
                            " is neither Schottky nor elliptic on the pair");
      }
      if (sim_equivalent(g1, h1p, act) || sim_equivalent(g1, words::inverse(h1p), act) ||
          SubgroupGraph::fold({img_g, img_h}).rank() != 2) {
        ok = false;
        break;
      }
    }
    if (ok) return GoodBasis{g1, h1p, a};
  }
  throw SearchExhausted("good_basis: no admissible exponent up to " + std::to_string(a_max));
}

}  // namespace cqm::tree
