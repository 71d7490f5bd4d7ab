#include <algorithm>

#include "cqm/pipeline.hpp"

namespace cqm::pipeline {

using words::CyclicWord;
using words::Letter;

NElement Model::lift_word(const ReducedWord& w) const {
  std::vector<ReducedWord> factors;
  factors.reserve(static_cast<std::size_t>(quotient.factor_count()));
  for (int f = 0; f < quotient.factor_count(); ++f) {
    if (f == acting_factor) {
      factors.push_back(w);
    } else {
      factors.emplace_back(quotient.factor_rank(static_cast<std::size_t>(f)));
    }
  }
  return NElement(std::move(factors));
}

NElement Model::parse_acting(const std::string& text) const {
  std::string t = text == "1" ? "" : text;
  return lift_word(ReducedWord::parse(tree_rank(), t));
}

tree::TreeAction Model::action(int kappa, const wreath::KKEmbedding& kk) const {
  tree::TreeAction base = tree::factor_projection_action(
      static_cast<std::size_t>(acting_factor), tree_rank(), id + ":factor");
  if (kappa == 0) {
    base.name = id + ":kappa1";
    return base;
  }
  const wreath::KKEmbedding* kkp = &kk;
  return tree::composed_action(
      base, [kkp, kappa](const NElement& n) { return kkp->outer_rep(kappa, n); },
      id + ":kappa" + std::to_string(kappa + 1));
}

namespace {

ReducedWord parse_or_identity(int rank, const std::string& text) {
  return ReducedWord::parse(rank, text == "1" ? "" : text);
}

NElement one_factor(int rank, const std::string& text) {
  return NElement::single(parse_or_identity(rank, text));
}

NElement two_factor(int rank, const std::string& first, const std::string& second) {
  return NElement({parse_or_identity(rank, first), parse_or_identity(rank, second)});
}

}  // namespace

Model model_A() {
  // Q = Z/2 = {1, sigma}, sigma swapping the generators a and b of N = F2.
  std::vector<std::vector<int>> table = {{0, 1}, {1, 0}};
  std::vector<std::vector<std::vector<NElement>>> images = {
      {{one_factor(2, "a"), one_factor(2, "b")}},
      {{one_factor(2, "b"), one_factor(2, "a")}},
  };
  wreath::FiniteQuotient q(std::move(table), std::move(images), {2});
  return Model("A", std::move(q), 0, one_factor(2, "a"), one_factor(2, "b"));
}

Model model_B() {
  // Q = Z/2 swapping the two factors of N = F2 x F2; the tree belongs to
  // the first factor, so the twisted action of F = F2 x {1} is elliptic.
  std::vector<std::vector<int>> table = {{0, 1}, {1, 0}};
  std::vector<std::vector<std::vector<NElement>>> images = {
      {{two_factor(2, "a", "1"), two_factor(2, "b", "1")},
       {two_factor(2, "1", "a"), two_factor(2, "1", "b")}},
      {{two_factor(2, "1", "a"), two_factor(2, "1", "b")},
       {two_factor(2, "a", "1"), two_factor(2, "b", "1")}},
  };
  wreath::FiniteQuotient q(std::move(table), std::move(images), {2, 2});
  return Model("B", std::move(q), 0, two_factor(2, "a", "1"), two_factor(2, "b", "1"));
}

Model model_custom(std::string name, std::vector<std::vector<int>> table,
                   std::vector<std::vector<ReducedWord>> images_per_q, int rank) {
  const int K = static_cast<int>(table.size());
  if (static_cast<int>(images_per_q.size()) != K) {
    throw ConfigError("custom model: need one image row per quotient element");
  }
  std::vector<std::vector<std::vector<NElement>>> images;
  images.reserve(static_cast<std::size_t>(K));
  for (int q = 0; q < K; ++q) {
    std::vector<NElement> gens;
    gens.reserve(static_cast<std::size_t>(rank));
    for (const ReducedWord& w : images_per_q[static_cast<std::size_t>(q)]) {
      gens.push_back(NElement::single(w));
    }
    images.push_back({std::move(gens)});
  }
  wreath::FiniteQuotient quotient(std::move(table), std::move(images), {rank});
  return Model("custom:" + name, std::move(quotient), 0,
               one_factor(rank, "a"), one_factor(rank, "b"));
}

ExponentSchedule ExponentSchedule::build(const ScheduleRow& row1, long long growth, int rows) {
  ExponentSchedule s;
  s.growth = growth;
  if (rows < 0) throw ConfigError("schedule: row count must be >= 0");
  ScheduleRow row = row1;
  for (int j = 0; j < rows; ++j) {
    if (j > 0) {
      long long base = s.rows.back().t * growth;
      row = ScheduleRow{base,          base * growth,
                        base * growth * growth, base * growth * growth * growth,
                        base * growth * growth * growth * growth,
                        base * growth * growth * growth * growth * growth};
    }
    s.rows.push_back(row);
  }
  s.validate();
  return s;
}

void ExponentSchedule::validate() const {
  if (growth < 2) throw ConfigError("schedule: growth factor must be >= 2");
  for (std::size_t j = 0; j < rows.size(); ++j) {
    auto v = rows[j].as_vector();
    if (v[0] < 1) throw ConfigError("schedule: exponents must be positive");
    for (std::size_t p = 1; p < v.size(); ++p) {
      if (v[p] < growth * v[p - 1]) {
        throw ConfigError("schedule: row " + std::to_string(j + 1) +
                          " violates m < n < k < l < s < t with factor >= " +
                          std::to_string(growth));
      }
    }
    if (j > 0 && rows[j].m < growth * rows[j - 1].t) {
      throw ConfigError("schedule: row " + std::to_string(j + 1) +
                        " does not start past growth * previous t");
    }
  }
}

void ExponentSchedule::escalate() {
  for (auto& r : rows) {
    r.m *= growth;
    r.n *= growth;
    r.k *= growth;
    r.l *= growth;
    r.s *= growth;
    r.t *= growth;
  }
}

void PipelineConfig::validate() const {
  if (model_id != "A" && model_id != "B" && model_id != "custom") {
    throw ConfigError("model must be A, B or custom; got '" + model_id + "'");
  }
  if (J < 0) throw ConfigError("J must be >= 0");
  if (W < 1) throw ConfigError("W must be >= 1");
  if (probe_cap < 2) throw ConfigError("probe_cap must be >= 2");
  if (budget < 1) throw ConfigError("budget must be >= 1");
  if (a_max < 1) throw ConfigError("a_max must be >= 1");
  if (d_cap < 1) throw ConfigError("d_cap must be >= 1");
  if (retry_cap < 0) throw ConfigError("retry_cap must be >= 0");
  ExponentSchedule::build(row1, growth, std::max(J, 1));  // validates the row invariants
  if (model_id == "custom") {
    if (custom_table.empty()) throw ConfigError("custom model needs a quotient table");
    if (custom_rank < 2) throw ConfigError("custom model rank must be >= 2");
  }
}

Model make_model(const PipelineConfig& config) {
  if (config.model_id == "A") return model_A();
  if (config.model_id == "B") return model_B();
  const int K = static_cast<int>(config.custom_table.size());
  std::vector<std::vector<ReducedWord>> images;
  images.reserve(static_cast<std::size_t>(K));
  for (int q = 0; q < K; ++q) {
    std::vector<ReducedWord> row;
    if (q == 0) {
      for (int g = 1; g <= config.custom_rank; ++g) {
        row.push_back(ReducedWord::parse(config.custom_rank,
                                         std::string(1, words::letter_to_char(static_cast<Letter>(g)))));
      }
    } else {
      if (static_cast<int>(config.custom_images.size()) < q ||
          static_cast<int>(config.custom_images[static_cast<std::size_t>(q - 1)].size()) !=
              config.custom_rank) {
        throw ConfigError("custom model: missing generator images for q" + std::to_string(q + 1));
      }
      for (const auto& text : config.custom_images[static_cast<std::size_t>(q - 1)]) {
        row.push_back(ReducedWord::parse(config.custom_rank, text == "1" ? "" : text));
      }
    }
    images.push_back(std::move(row));
  }
  return model_custom("config", config.custom_table, std::move(images), config.custom_rank);
}

std::pair<NElement, NElement> derive_commutator_basis(const Model& model,
                                                      const PipelineConfig& config) {
  NElement g1, h1;
  if (config.basis_override.has_value()) {
    g1 = model.parse_acting(config.basis_override->first);
    h1 = model.parse_acting(config.basis_override->second);
  } else {
    const NElement& a = model.basis_a;
    const NElement& b = model.basis_b;
    g1 = words::commutator(a, b);
    h1 = words::commutator(a, words::inverse(b));
  }
  if (config.require_commutator) {
    for (const auto* x : {&g1, &h1}) {
      for (long long s : words::exponent_sums(*x)) {
        if (s != 0) {
          throw BadBasis("basis element " + x->str() + " lies outside the commutator subgroup");
        }
      }
    }
  }
  ReducedWord wg = g1.factor(static_cast<std::size_t>(model.acting_factor));
  ReducedWord wh = h1.factor(static_cast<std::size_t>(model.acting_factor));
  if (wg.empty() || wh.empty() ||
      tree::SubgroupGraph::fold({wg, wh}).rank() != 2) {
    throw BadBasis("basis pair does not generate a rank-2 free subgroup");
  }
  return {g1, h1};
}

ActionClassification classify_actions(const Model& model, const wreath::KKEmbedding& kk,
                                      const NElement& g1, const NElement& h1) {
  const int K = model.quotient.order();
  ActionClassification out;
  out.tags.reserve(static_cast<std::size_t>(K));
  for (int kappa = 0; kappa < K; ++kappa) {
    tree::TreeAction act = model.action(kappa, kk);
    ReducedWord img_g = act.image(g1);
    ReducedWord img_h = act.image(h1);
    if (img_g.empty() && img_h.empty()) {
      out.tags.push_back(ActionClass::Elliptic);
      continue;
    }
    if (img_g.empty() || img_h.empty()) {
      throw HypothesisViolated("action kappa" + std::to_string(kappa + 1) +
                               " is neither Schottky nor elliptic on the pair");
    }
    if (tree::SubgroupGraph::fold({img_g, img_h}).rank() != 2) {
      throw HypothesisViolated("acting images under kappa" + std::to_string(kappa + 1) +
                               " do not generate a rank-2 free subgroup");
    }
    // Bounded-projection spot check: translates of the g1-axis by sample
    // elements off its stabilizer must project to bounded segments.
    tree::Axis axis = tree::axis_of(g1, act);
    for (const NElement* t : {&h1, &g1}) {
      NElement mover = t == &g1 ? words::multiply(g1, h1) : *t;
      NElement conj = words::multiply(words::multiply(mover, g1), words::inverse(mover));
      tree::Axis moved = tree::axis_of(conj, act);
      tree::ProjectionDiameter pd = tree::projection_diameter(axis, moved);
      if (pd.unbounded) {
        throw HypothesisViolated("bounded-projection spot check failed under kappa" +
                                 std::to_string(kappa + 1));
      }
    }
    out.tags.push_back(ActionClass::Schottky);
  }
  for (int kappa = 0; kappa + 1 < K; ++kappa) {
    if (out.tags[static_cast<std::size_t>(kappa)] == ActionClass::Elliptic &&
        out.tags[static_cast<std::size_t>(kappa + 1)] == ActionClass::Schottky) {
      throw HypothesisViolated("quotient enumeration must list Schottky twists first");
    }
  }
  if (out.tags.empty() || out.tags[0] != ActionClass::Schottky) {
    throw HypothesisViolated("the untwisted action must be Schottky on the pair");
  }
  out.k1 = static_cast<int>(
      std::count(out.tags.begin(), out.tags.end(), ActionClass::Schottky));
  return out;
}

}  // namespace cqm::pipeline
