#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include "cqm/spaces.hpp"
#include "cqm/tree.hpp"

using namespace cqm;
using namespace cqm::words;
using namespace cqm::tree;

namespace {

ReducedWord w2(const std::string& s) { return ReducedWord::parse(2, s); }
NElement n2(const std::string& s) { return NElement::single(w2(s)); }

TreeAction act2() { return left_multiplication_action(2); }

// Model-A style twist at the tree level: the automorphism swapping a and b.
NElement swap_ab(const NElement& n) {
  std::vector<Letter> out;
  out.reserve(n.factor(0).size());
  for (Letter l : n.factor(0).letters()) {
    out.push_back(l > 0 ? static_cast<Letter>(3 - l) : static_cast<Letter>(-3 - l));
  }
  return NElement::single(ReducedWord::from_reduced(2, std::move(out)));
}

std::vector<ReducedWord> ball_words(int radius) {
  return spaces::tree_ball(radius, 2).word_of;
}

long long brute_projection_position(const ReducedWord& x, const Axis& axis, long long window) {
  long long best_pos = -window;
  long long best_dist = tree_distance(x, axis.vertex_at(-window));
  for (long long i = -window + 1; i <= window; ++i) {
    long long d = tree_distance(x, axis.vertex_at(i));
    if (d < best_dist) {
      best_dist = d;
      best_pos = i;
    }
  }
  return best_pos;
}

// Brute-force projection diameter: project sampled axis points of B onto A
// by distance minimization over a window, then take the diameter.
long long brute_projection_diameter(const Axis& a, const Axis& b, long long window) {
  long long lo = 0, hi = 0;
  bool first = true;
  for (long long i = -window; i <= window; ++i) {
    long long p = brute_projection_position(b.vertex_at(i), a, 4 * window + 8);
    if (first) {
      lo = hi = p;
      first = false;
    } else {
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
  }
  return hi - lo;
}

// Oriented common-subword oracle for the direction equivalence: true iff a
// 60-letter window of one periodic bi-infinite word occurs in the other.
bool sim_oracle(const ReducedWord& img_g, const ReducedWord& img_h) {
  ReducedWord pg = cyclic_reduce(img_g).core;
  ReducedWord ph = cyclic_reduce(img_h).core;
  REQUIRE(!pg.empty());
  REQUIRE(!ph.empty());
  constexpr std::size_t window_len = 60;
  std::vector<Letter> text;
  while (text.size() < window_len + 2 * ph.size()) {
    text.insert(text.end(), ph.letters().begin(), ph.letters().end());
  }
  std::vector<Letter> stream;
  while (stream.size() < window_len + pg.size()) {
    stream.insert(stream.end(), pg.letters().begin(), pg.letters().end());
  }
  for (std::size_t shift = 0; shift < pg.size(); ++shift) {
    auto begin = stream.begin() + static_cast<std::ptrdiff_t>(shift);
    if (std::search(text.begin(), text.end(), begin,
                    begin + static_cast<std::ptrdiff_t>(window_len)) != text.end()) {
      return true;
    }
  }
  return false;
}

std::vector<ReducedWord> cyclically_reduced_words(int max_len) {
  std::vector<ReducedWord> out;
  for (const ReducedWord& w : ball_words(max_len)) {
    if (!w.empty() && is_cyclically_reduced(w)) out.push_back(w);
  }
  return out;
}

std::size_t ray_lcp(const Ray& r1, const Ray& r2, std::size_t cap) {
  std::size_t i = 0;
  while (i < cap && r1.letter_at(i) == r2.letter_at(i)) ++i;
  return i;
}

}  // namespace

TEST_SUITE("tree") {

TEST_CASE("geodesic examples") {
  auto path = geodesic(w2(""), w2("aB"));
  REQUIRE(path.size() == 3);
  CHECK(path[0] == w2(""));
  CHECK(path[1] == w2("a"));
  CHECK(path[2] == w2("aB"));
  CHECK(geodesic(w2("a"), w2("a")).size() == 1);
  auto through_e = geodesic(w2("b"), w2("a"));
  REQUIRE(through_e.size() == 3);
  CHECK(through_e[1] == w2(""));
  CHECK(tree_distance(w2("b"), w2("a")) == 2);
}

TEST_CASE("axis examples") {
  Axis a1 = axis_of(n2("baB"), act2());
  CHECK(a1.conjugator() == w2("b"));
  CHECK(a1.period_word() == w2("a"));
  CHECK(a1.translation_length() == 1);
  Axis a2 = axis_of(n2("ab"), act2());
  CHECK(a2.conjugator().empty());
  CHECK(a2.translation_length() == 2);
  CHECK_THROWS_AS(axis_of(n2(""), act2()), NotLoxodromic);
}

TEST_CASE("axis parameterization is a geodesic line") {
  for (const char* g : {"ab", "baB", "aabAB", "bbaBA"}) {
    Axis axis = axis_of(n2(g), act2());
    for (long long i = -6; i <= 6; ++i) {
      for (long long j = i; j <= 6; ++j) {
        CHECK(tree_distance(axis.vertex_at(i), axis.vertex_at(j)) == j - i);
      }
    }
  }
}

TEST_CASE("boundary pairs") {
  BoundaryPair pa = boundary_pair(n2("a"), act2());
  CHECK(pa.minus.str() == "|(A)^inf");
  CHECK(pa.plus.str() == "|(a)^inf");
  BoundaryPair pc = boundary_pair(n2("baB"), act2());
  CHECK(pc.minus.str() == "b|(A)^inf");
  CHECK(pc.plus.str() == "b|(a)^inf");
  BoundaryPair p1 = boundary_pair(n2("ab"), act2());
  BoundaryPair p2 = boundary_pair(n2("abab"), act2());
  CHECK(p1.minus == p2.minus);
  CHECK(p1.plus == p2.plus);
}

TEST_CASE("ray normal form and translation") {
  Ray r(w2("ab"), w2("ab"));
  CHECK(r.prefix().empty());
  CHECK(r.repeat() == w2("ab"));
  Ray r2(w2(""), w2("abab"));
  CHECK(r2.repeat() == w2("ab"));
  CHECK(translate_ray(w2("ba"), Ray(w2("b"), w2("a"))).str() == "bab|(a)^inf");
  CHECK(translate_ray(w2("A"), Ray(w2("a"), w2("b"))).str() == "|(b)^inf");

  SeededRng rng(21);
  for (int i = 0; i < 500; ++i) {
    ReducedWord g = random_reduced_word(2, 1 + rng.below(6), rng);
    if (g.empty()) continue;
    BoundaryPair ends = boundary_pair(NElement::single(g), act2());
    ReducedWord m = random_reduced_word(2, rng.below(8), rng);
    CHECK(translate_ray(inverse(m), translate_ray(m, ends.plus)) == ends.plus);
    // The element translates its own axis, fixing both ends.
    CHECK(translate_ray(g, ends.plus) == ends.plus);
    CHECK(translate_ray(g, ends.minus) == ends.minus);
  }
}

TEST_CASE("projection to axis matches brute force") {
  Axis axis_a = axis_of(n2("a"), act2());
  CHECK(project_to_axis(w2(""), axis_a) == w2(""));
  CHECK(project_to_axis(w2("baa"), axis_a) == w2(""));
  CHECK(project_to_axis(w2("aaaaab"), axis_a) == w2("aaaaa"));

  SeededRng rng(22);
  for (int i = 0; i < 400; ++i) {
    ReducedWord g = random_reduced_word(2, 1 + rng.below(5), rng);
    if (g.empty()) continue;
    Axis axis = axis_of(NElement::single(g), act2());
    ReducedWord x = random_reduced_word(2, rng.below(9), rng);
    long long pos = project_to_axis_position(x, axis);
    long long brute = brute_projection_position(x, axis, 12);
    CHECK(pos == brute);
    CHECK(project_to_axis(x, axis) == axis.vertex_at(brute));
  }
}

TEST_CASE("projection diameter worked examples with oracle") {
  Axis axis_a = axis_of(n2("a"), act2());
  Axis moved = axis_of(n2("baB"), act2());
  ProjectionDiameter pd = projection_diameter(axis_a, moved);
  REQUIRE_FALSE(pd.unbounded);
  CHECK(pd.diameter == 0);
  CHECK(brute_projection_diameter(axis_a, moved, 24) == 0);

  Axis axis_aaab = axis_of(n2("aaab"), act2());
  pd = projection_diameter(axis_a, axis_aaab);
  REQUIRE_FALSE(pd.unbounded);
  CHECK(pd.diameter == 3);
  CHECK(brute_projection_diameter(axis_a, axis_aaab, 24) == 3);

  CHECK(projection_diameter(axis_a, axis_a).unbounded);
  Axis axis_aa = axis_of(n2("aa"), act2());
  CHECK(projection_diameter(axis_a, axis_aa).unbounded);
}

TEST_CASE("projection diameter agrees with brute force on random pairs") {
  SeededRng rng(23);
  int checked = 0;
  while (checked < 200) {
    ReducedWord g = random_reduced_word(2, 1 + rng.below(5), rng);
    ReducedWord h = random_reduced_word(2, 1 + rng.below(5), rng);
    if (g.empty() || h.empty()) continue;
    Axis ag = axis_of(NElement::single(g), act2());
    Axis ah = axis_of(NElement::single(h), act2());
    ProjectionDiameter pd = projection_diameter(ag, ah);
    if (pd.unbounded) {
      // Shared end: the overlap grows with the window.
      CHECK(brute_projection_diameter(ag, ah, 30) > brute_projection_diameter(ag, ah, 15));
    } else {
      long long b24 = brute_projection_diameter(ag, ah, 24);
      long long b36 = brute_projection_diameter(ag, ah, 36);
      CHECK(b24 == b36);
      CHECK(pd.diameter == b24);
    }
    ++checked;
  }
}

TEST_CASE("direction equivalence examples") {
  CHECK(sim_equivalent(n2("a"), n2("baaB"), act2()));
  CHECK_FALSE(sim_equivalent(n2("a"), n2("A"), act2()));
  CHECK(sim_equivalent(n2("ab"), n2("ba"), act2()));
  CHECK(sim_equivalent(n2("ab"), n2("abab"), act2()));
  CHECK_THROWS_AS(sim_equivalent(n2(""), n2("a"), act2()), NotLoxodromic);
}

TEST_CASE("direction equivalence agrees with the common-subword oracle") {
  auto wordsList = cyclically_reduced_words(4);
  for (const ReducedWord& g : wordsList) {
    for (const ReducedWord& h : wordsList) {
      CHECK(sim_equivalent(NElement::single(g), NElement::single(h), act2()) ==
            sim_oracle(g, h));
    }
  }
}

TEST_CASE("direction equivalence is an equivalence relation") {
  SeededRng rng(24);
  auto acts = act2();
  for (int i = 0; i < 1000; ++i) {
    ReducedWord g = random_reduced_word(2, 1 + rng.below(5), rng);
    if (g.empty()) continue;
    NElement eg = NElement::single(g);
    CHECK(sim_equivalent(eg, eg, acts));
    // Conjugates and powers build an equivalent chain.
    ReducedWord c = random_reduced_word(2, rng.below(5), rng);
    NElement h = NElement::single(multiply(multiply(c, power(g, 1 + rng.below(3))), inverse(c)));
    NElement k = NElement::single(power(g, 2));
    CHECK(sim_equivalent(eg, h, acts));
    CHECK(sim_equivalent(h, eg, acts));
    CHECK(sim_equivalent(h, k, acts));
    CHECK(sim_equivalent(eg, k, acts));
  }
}

TEST_CASE("sharing the backward endpoint forces equivalence") {
  SeededRng rng(25);
  int built = 0;
  while (built < 200) {
    ReducedWord g = random_reduced_word(2, 1 + rng.below(5), rng);
    if (g.empty()) continue;
    Axis axis = axis_of(NElement::single(g), act2());
    // h = g^k * (a stabilizer move of the backward end): a power of the
    // primitive root keeps the minus ray fixed.
    auto pr = primitive_root_letters(2, axis.period_word().letters());
    ReducedWord root = multiply(multiply(axis.conjugator(),
                                         ReducedWord::from_reduced(2, pr.root_letters)),
                                inverse(axis.conjugator()));
    long long k = 1 + static_cast<long long>(rng.below(3));
    long long m = static_cast<long long>(rng.range(-3, 3));
    ReducedWord h = multiply(power(g, k), power(root, m));
    if (h.empty()) continue;
    BoundaryPair pg = boundary_pair(NElement::single(g), act2());
    BoundaryPair ph = boundary_pair(NElement::single(h), act2());
    if (pg.minus == ph.minus) {
      CHECK(sim_equivalent(NElement::single(g), NElement::single(h), act2()));
      ++built;
    }
  }
}

TEST_CASE("subgroup folding examples") {
  SubgroupGraph g1 = SubgroupGraph::fold({w2("aa"), w2("ab")});
  CHECK(g1.rank() == 2);
  CHECK(g1.contains(w2("aaab")));
  CHECK_FALSE(g1.contains(w2("b")));
  CHECK(SubgroupGraph::fold({w2("a"), w2("A")}).rank() == 1);
  CHECK(SubgroupGraph::fold({w2("abAB"), w2("a")}).rank() == 2);
  CHECK(SubgroupGraph::fold({w2("a"), w2("a")}).rank() == 1);
  CHECK_THROWS_AS(SubgroupGraph::fold({}), Error);
}

TEST_CASE("subgroup membership agrees with naive enumeration") {
  const int max_len = 8;
  const int margin = 12;
  for (const auto& gens : std::vector<std::vector<ReducedWord>>{
           {w2("aa"), w2("ab")}, {w2("abAB"), w2("a")}, {w2("aab"), w2("ba")}}) {
    SubgroupGraph folded = SubgroupGraph::fold(gens);
    std::set<std::string> members;
    std::vector<ReducedWord> frontier{ReducedWord(2)};
    members.insert("");
    std::vector<ReducedWord> steps;
    for (const auto& g : gens) {
      steps.push_back(g);
      steps.push_back(inverse(g));
    }
    while (!frontier.empty()) {
      ReducedWord cur = frontier.back();
      frontier.pop_back();
      for (const auto& s : steps) {
        ReducedWord nxt = multiply(cur, s);
        if (static_cast<int>(nxt.size()) > margin) continue;
        if (members.insert(nxt.str()).second) frontier.push_back(nxt);
      }
    }
    for (const ReducedWord& w : ball_words(max_len)) {
      CHECK(folded.contains(w) == (members.count(w.str()) > 0));
    }
  }
}

TEST_CASE("stabilizer membership examples") {
  BoundaryPair pa = boundary_pair(n2("a"), act2());
  CHECK(stab_membership(n2("aaa"), pa, act2()));
  CHECK_FALSE(stab_membership(n2("b"), pa, act2()));
  // A trivially-acting factor fixes every end.
  TreeAction first = factor_projection_action(0, 2, "first-factor");
  NElement second_only({w2(""), w2("bab")});
  BoundaryPair pf = boundary_pair(NElement({w2("a"), w2("")}), first);
  CHECK(stab_membership(second_only, pf, first));
}

TEST_CASE("endpoint stabilizers of a loxodromic coincide for both ends") {
  BoundaryPair p = boundary_pair(n2("ab"), act2());
  for (const ReducedWord& g : ball_words(6)) {
    ReducedWord img = g;
    bool minus_fixed = translate_ray(img, p.minus) == p.minus;
    bool plus_fixed = translate_ray(img, p.plus) == p.plus;
    CHECK(minus_fixed == plus_fixed);
    CHECK(stab_membership(NElement::single(g), p, act2()) == (minus_fixed && plus_fixed));
  }
}

TEST_CASE("independence examples and exhaustive check") {
  CHECK(independence_check(n2("a"), n2("b"), act2()));
  CHECK_FALSE(independence_check(n2("a"), n2("aa"), act2()));
  CHECK(independence_check(n2("ab"), n2("B"), act2()));

  BoundaryPair p = boundary_pair(n2("ab"), act2());
  for (const ReducedWord& k : ball_words(6)) {
    if (stab_membership(NElement::single(k), p, act2())) continue;
    CHECK(independence_check(n2("ab"), NElement::single(k), act2()));
  }
}

TEST_CASE("bounded projections and discrete endpoint orbit") {
  for (const char* hs : {"a", "ab", "abAB"}) {
    NElement h = n2(hs);
    Axis axis = axis_of(h, act2());
    BoundaryPair ends = boundary_pair(h, act2());
    long long dh = 0;
    std::size_t depth0 = std::max(ends.minus.prefix().size() + ends.minus.repeat().size(),
                                  ends.plus.prefix().size() + ends.plus.repeat().size());
    std::vector<BoundaryPair> orbit;
    for (const ReducedWord& g : ball_words(6)) {
      if (stab_membership(NElement::single(g), ends, act2())) continue;
      NElement conj = words::multiply(words::multiply(NElement::single(g), h),
                                      words::inverse(NElement::single(g)));
      ProjectionDiameter pd = projection_diameter(axis, axis_of(conj, act2()));
      REQUIRE_FALSE(pd.unbounded);
      dh = std::max(dh, pd.diameter);
      orbit.push_back(boundary_pair(conj, act2()));
    }
    // Translated endpoint pairs approach the original pair only to bounded
    // ray-agreement depth: the orbit is discrete around it.
    const std::size_t cap = 64;
    for (const BoundaryPair& q : orbit) {
      std::size_t depth = std::min(ray_lcp(ends.minus, q.minus, cap),
                                   ray_lcp(ends.plus, q.plus, cap));
      CHECK(depth <= depth0 + static_cast<std::size_t>(dh));
    }
  }
}

TEST_CASE("pullback to a product factor preserves the predicates") {
  TreeAction first = factor_projection_action(0, 2, "first-factor");
  TreeAction plain = act2();
  SeededRng rng(26);
  for (int i = 0; i < 200; ++i) {
    ReducedWord u = random_reduced_word(2, 1 + rng.below(5), rng);
    ReducedWord v = random_reduced_word(2, rng.below(5), rng);
    if (u.empty()) continue;
    NElement pulled({u, v});
    NElement direct = NElement::single(u);
    ReducedWord k = random_reduced_word(2, 1 + rng.below(5), rng);
    NElement k_pulled({k, inverse(v)});
    NElement k_direct = NElement::single(k);
    CHECK(sim_equivalent(pulled, k_pulled.is_identity() ? pulled : k_pulled, first) ==
          sim_equivalent(direct, k_pulled.is_identity() ? direct : k_direct, plain));
    BoundaryPair p_pulled = boundary_pair(pulled, first);
    BoundaryPair p_direct = boundary_pair(direct, plain);
    CHECK(p_pulled.minus == p_direct.minus);
    CHECK(p_pulled.plus == p_direct.plus);
    CHECK(stab_membership(k_pulled, p_pulled, first) ==
          stab_membership(k_direct, p_direct, plain));
  }
}

TEST_CASE("Schottky certification backed by cylinder ping-pong") {
  SeededRng rng(27);
  int sampled = 0;
  while (sampled < 20) {
    ReducedWord u = random_reduced_word(2, 1 + rng.below(4), rng);
    ReducedWord v = random_reduced_word(2, 1 + rng.below(4), rng);
    if (u.empty() || v.empty()) continue;
    if (SubgroupGraph::fold({u, v}).rank() != 2) continue;
    ++sampled;

    // Sample boundary points: the four ends plus short translates of them.
    BoundaryPair pu = boundary_pair(NElement::single(u), act2());
    BoundaryPair pv = boundary_pair(NElement::single(v), act2());
    std::vector<Ray> samples{pu.minus, pu.plus, pv.minus, pv.plus};
    for (const ReducedWord& g : ball_words(2)) {
      samples.push_back(translate_ray(g, pu.plus));
      samples.push_back(translate_ray(g, pv.minus));
    }

    auto in_cylinder = [&](const Ray& end, const Ray& point, std::size_t depth) {
      return ray_lcp(end, point, depth) >= depth;
    };
    bool found_power = false;
    for (int m = 1; m <= 8 && !found_power; ++m) {
      ReducedWord um = power(u, m);
      ReducedWord vm = power(v, m);
      std::size_t du = pu.plus.prefix().size() + pu.plus.repeat().size();
      std::size_t dv = pv.plus.prefix().size() + pv.plus.repeat().size();
      bool ok = true;
      for (const Ray& s : samples) {
        if (!in_cylinder(pu.minus, s, du)) ok = ok && in_cylinder(pu.plus, translate_ray(um, s), du);
        if (!in_cylinder(pv.minus, s, dv)) ok = ok && in_cylinder(pv.plus, translate_ray(vm, s), dv);
      }
      found_power = ok;
    }
    CHECK(found_power);
  }
}

TEST_CASE("good basis examples") {
  std::vector<TreeAction> acts{act2(), composed_action(act2(), swap_ab, "swap")};
  GoodBasis gb = good_basis(n2("a"), n2("b"), acts);
  CHECK(gb.a == 1);
  CHECK(gb.h1.factor(0) == w2("abAB"));
  CHECK_THROWS_AS(good_basis(n2("a"), n2("a"), acts), NotFreeBasis);
  GoodBasis single = good_basis(n2("a"), n2("b"), {act2()});
  CHECK(single.a == 1);
}

TEST_CASE("good basis output satisfies its contract") {
  std::vector<TreeAction> acts{act2(), composed_action(act2(), swap_ab, "swap")};
  GoodBasis gb = good_basis(n2("abAB"), n2("aBAb"), acts);
  for (const auto& act : acts) {
    CHECK_FALSE(sim_equivalent(gb.g1, gb.h1, act));
    CHECK_FALSE(sim_equivalent(gb.g1, words::inverse(gb.h1), act));
    CHECK(SubgroupGraph::fold({act.image(gb.g1), act.image(gb.h1)}).rank() == 2);
  }
}

}  // TEST_SUITE
