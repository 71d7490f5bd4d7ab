#include "cqm/qm.hpp"

#include <algorithm>
#include <cassert>

namespace cqm::qm {

QmSpec QmSpec::make(tree::TreeAction action, ReducedWord start, ReducedWord label, int weight,
                    std::optional<ReducedWord> x0) {
  if (weight < 1) throw Error("weight W must be >= 1");
  if (static_cast<long long>(label.size()) < 2 * weight) {
    throw Error("counting word must satisfy |w| >= 2W; got |w| = " +
                std::to_string(label.size()) + ", W = " + std::to_string(weight));
  }
  QmSpec spec;
  spec.action = std::move(action);
  spec.start = std::move(start);
  spec.label = std::move(label);
  spec.weight = weight;
  spec.x0 = x0.value_or(ReducedWord(spec.label.rank()));
  return spec;
}

QmSpec QmSpec::reversed() const {
  QmSpec r = *this;
  r.start = words::multiply(start, label);
  r.label = words::inverse(label);
  return r;
}

namespace {

// KMP occurrence scan; returns match start positions in ascending order.
void occurrences(std::span<const Letter> text, const ReducedWord& pattern,
                 std::vector<std::size_t>& out) {
  out.clear();
  const std::size_t m = pattern.size();
  if (m == 0 || text.size() < m) return;
  std::vector<std::size_t> fail(m, 0);
  for (std::size_t i = 1; i < m; ++i) {
    std::size_t k = fail[i - 1];
    while (k > 0 && pattern.at(i) != pattern.at(k)) k = fail[k - 1];
    if (pattern.at(i) == pattern.at(k)) ++k;
    fail[i] = k;
  }
  std::size_t k = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    while (k > 0 && text[i] != pattern.at(k)) k = fail[k - 1];
    if (text[i] == pattern.at(k)) ++k;
    if (k == m) {
      out.push_back(i + 1 - m);
      k = fail[k - 1];
    }
  }
}

}  // namespace

long long count_copies(std::span<const Letter> alpha_label, const ReducedWord& w) {
  std::vector<std::size_t> occ;
  occurrences(alpha_label, w, occ);
  long long taken = 0;
  std::size_t free_from = 0;
  for (std::size_t start : occ) {
    if (start >= free_from) {
      ++taken;
      free_from = start + w.size();
    }
  }
  return taken;
}

namespace {

long long c_w_geodesic(const ReducedWord& x, const ReducedWord& y, const QmSpec& spec) {
  ReducedWord label = words::multiply(words::inverse(x), y);
  return spec.weight * count_copies(label.letters(), spec.label);
}

long long c_w_search(const ReducedWord& x, const ReducedWord& y, const QmSpec& spec,
                     const EvalOptions& opts, long long d) {
  spaces::TreeSearchProblem problem;
  problem.rank = spec.label.rank();
  problem.source = x;
  problem.target = y;
  problem.shortcuts.push_back(
      {spec.label, static_cast<long long>(spec.label.size()) - spec.weight});

  auto run = [&](const spaces::TreeRegion& region) {
    problem.region = region;
    spaces::SearchResult r = spaces::min_cost_path(problem);
    if (opts.stats != nullptr) {
      ++opts.stats->searches;
      if (r.base_edge_length > 2 * d + 12 * spec.weight + 4) {
        ++opts.stats->quasigeodesic_violations;
      }
    }
    return r.cost;
  };

  if (opts.region != nullptr) {
    return d - run(*opts.region);
  }
  long long radius = 2 * static_cast<long long>(spec.label.size()) + spec.weight + 4;
  long long prev = run(spaces::TreeRegion::tube(x, y, radius));
  for (int i = 0; i < opts.max_doublings; ++i) {
    radius *= 2;
    long long next = run(spaces::TreeRegion::tube(x, y, radius));
    if (next == prev) return d - next;
    prev = next;
  }
  throw spaces::RadiusTooSmall("c_w radius stabilization did not converge");
}

bool geodesic_route_valid(const QmSpec& spec) {
  if (spec.weight > 2) return false;
  if (spec.weight == 1) return true;
  return words::is_cyclically_reduced(spec.label);
}

}  // namespace

long long c_w(const ReducedWord& x, const ReducedWord& y, const QmSpec& spec,
              const EvalOptions& opts) {
  const long long d = tree::tree_distance(x, y);
  long long value = 0;
  Engine engine = opts.engine;
  if (engine == Engine::Auto) {
    engine = geodesic_route_valid(spec) ? Engine::GeodesicCount : Engine::Search;
  }
  if (engine == Engine::GeodesicCount) {
    value = c_w_geodesic(x, y, spec);
  } else {
    value = c_w_search(x, y, spec, opts, d);
  }
  if (opts.stats != nullptr) ++opts.stats->evaluations;
  // Structural bounds from the definition: 0 <= c_w <= W d / |w| + W.
  const long long len = static_cast<long long>(spec.label.size());
  if (value < 0 || value * len > spec.weight * d + spec.weight * len) {
    throw Error("c_w bound violated: value " + std::to_string(value) + " for d = " +
                std::to_string(d) + ", |w| = " + std::to_string(len) + ", W = " +
                std::to_string(spec.weight));
  }
  return value;
}

long long h_w(const NElement& gamma, const QmSpec& spec, const EvalOptions& opts) {
  ReducedWord y = spec.action.apply(gamma, spec.x0);
  long long plus = c_w(spec.x0, y, spec, opts);
  long long minus = c_w(spec.x0, y, spec.reversed(), opts);
  return plus - minus;
}

QmFunction::QmFunction(QmSpec spec, EvalOptions opts)
    : spec_(std::move(spec)), reversed_(spec_.reversed()), opts_(opts) {}

long long QmFunction::value_on_word(const ReducedWord& acting_word) const {
  constexpr std::size_t cache_key_limit = 1 << 16;
  std::string key;
  const bool use_cache = acting_word.size() <= cache_key_limit;
  if (use_cache) {
    key.assign(reinterpret_cast<const char*>(acting_word.letters().data()), acting_word.size());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  ReducedWord y = words::multiply(acting_word, spec_.x0);
  long long plus = c_w(spec_.x0, y, spec_, opts_);
  long long minus = c_w(spec_.x0, y, reversed_, opts_);
  long long value = plus - minus;
  if (use_cache) cache_.emplace(std::move(key), value);
  return value;
}

long long QmFunction::operator()(const NElement& gamma) const {
  return value_on_word(spec_.action.image(gamma));
}

QmSpec make_axis_word(const NElement& f, long long d, const tree::TreeAction& act, int weight,
                      std::optional<ReducedWord> x0) {
  if (d < 1) throw Error("make_axis_word: power d must be >= 1");
  tree::Axis axis = tree::axis_of(f, act);
  ReducedWord base = x0.value_or(ReducedWord(act.rank));
  const long long L = axis.translation_length();
  if (d * L < 2 * weight) {
    throw PowerTooSmall("axis word of f^" + std::to_string(d) + " has length " +
                        std::to_string(d * L) + " < 2W = " + std::to_string(2 * weight));
  }
  const long long pos = tree::project_to_axis_position(base, axis);
  std::vector<Letter> letters;
  letters.reserve(static_cast<std::size_t>(d * L));
  for (long long k = 0; k < d * L; ++k) letters.push_back(axis.direction_letter(pos + k));
  ReducedWord start = axis.vertex_at(pos);

  // The base vertex of the axis does not depend on the power taken.
  tree::Axis axis_pow = tree::axis_of(words::power(f, d), act);
  assert(tree::project_to_axis(base, axis_pow) == start);
  (void)axis_pow;

  return QmSpec::make(act, std::move(start),
                      ReducedWord::from_reduced(act.rank, std::move(letters)), weight, base);
}

namespace {

// Probe checks shared by choose_powers and the pipeline verdicts. `texts`
// are evaluated through the plain word route of a QmFunction.
bool own_growth_ok(const QmFunction& h, const ReducedWord& image, long long d, int cap,
                   int weight) {
  std::vector<long long> values;
  values.reserve(static_cast<std::size_t>(cap));
  for (int m = 1; m <= cap; ++m) {
    long long v = h.value_on_word(words::power(image, m));
    if (v < 0) return false;
    values.push_back(v);
  }
  for (std::size_t m = 0; m + static_cast<std::size_t>(d) < values.size(); ++m) {
    if (values[m + static_cast<std::size_t>(d)] <= values[m]) return false;
  }
  return values.back() >= values.front() + weight;
}

bool twisted_nonneg_ok(const QmFunction& h, const ReducedWord& image, int cap) {
  for (int m = 1; m <= cap; ++m) {
    if (h.value_on_word(words::power(image, m)) < 0) return false;
  }
  return true;
}

bool vanishes_ok(const QmFunction& h, const ReducedWord& image, int cap) {
  for (int m = -cap; m <= cap; ++m) {
    if (m == 0) continue;
    if (h.value_on_word(words::power(image, m)) != 0) return false;
  }
  return true;
}

}  // namespace

std::vector<long long> choose_powers(const std::vector<NElement>& fs,
                                     const std::vector<tree::TreeAction>& actions,
                                     const PowerSearchConfig& cfg) {
  if (actions.empty()) throw Error("choose_powers: need at least one action");
  std::vector<long long> ds;
  ds.reserve(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) {
    tree::Axis axis = tree::axis_of(fs[i], actions[0]);
    const long long L = axis.translation_length();
    long long d = std::max<long long>(1, (2 * cfg.weight + L - 1) / L);
    bool found = false;
    for (; d <= cfg.d_cap; ++d) {
      QmSpec spec = make_axis_word(fs[i], d, actions[0], cfg.weight);
      QmFunction h(spec);
      bool ok = own_growth_ok(h, actions[0].image(fs[i]), d, cfg.probe_cap, cfg.weight);
      for (std::size_t k = 1; ok && k < actions.size(); ++k) {
        ReducedWord img = actions[k].image(fs[i]);
        if (img.empty()) continue;  // elliptic twist: exact zero, nothing to probe
        ok = twisted_nonneg_ok(h, img, cfg.probe_cap);
      }
      for (std::size_t j = 0; ok && j < i; ++j) {
        for (std::size_t k = 0; ok && k < actions.size(); ++k) {
          ReducedWord img = actions[k].image(fs[j]);
          if (img.empty()) continue;
          ok = vanishes_ok(h, img, cfg.probe_cap);
        }
      }
      if (ok) {
        ds.push_back(d);
        found = true;
        break;
      }
    }
    if (!found) {
      throw PowerSearchExhausted("choose_powers: no admissible power for entry " +
                                 std::to_string(i + 1) + " up to d = " + std::to_string(cfg.d_cap));
    }
  }
  return ds;
}

DefectEstimate empirical_defect(const QmFunction& h, const PairSampler& sampler,
                                std::size_t budget) {
  if (budget < 1) throw Error("empirical_defect: budget must be >= 1");
  DefectEstimate best;
  for (std::size_t i = 0; i < budget; ++i) {
    auto [g0, g1] = sampler(i);
    long long v = h(g0) - h(words::multiply(g0, g1)) + h(g1);
    if (v < 0) v = -v;
    if (v > best.value) {
      best.value = v;
      best.witness_g0 = g0;
      best.witness_g1 = g1;
    }
  }
  return best;
}

}  // namespace cqm::qm
