#include "cqm/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "cqm/spaces.hpp"

namespace cqm::pipeline {

using wreath::GammaContext;
using wreath::KKEmbedding;

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return std::string(buf);
}

std::string sums_string(const NElement& n) {
  std::string out;
  for (long long s : words::exponent_sums(n)) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(s);
  }
  return out;
}

std::string row_string(const ScheduleRow& r) {
  std::string out;
  for (long long v : r.as_vector()) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(v);
  }
  return out;
}

}  // namespace

FSequence build_f_sequence(const NElement& g1, const NElement& h1,
                           const ExponentSchedule& schedule, int J,
                           const std::vector<tree::TreeAction>& actions, int retry_cap) {
  if (static_cast<int>(schedule.rows.size()) < J) {
    throw ConfigError("schedule has fewer rows than J");
  }
  if (actions.empty()) throw ConfigError("build_f_sequence: need at least one action");
  ExponentSchedule sched = schedule;

  for (int attempt = 0; attempt <= retry_cap; ++attempt) {
    FSequence out;
    out.schedule_used = sched;
    out.escalations = attempt;
    out.fs.reserve(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j) {
      const ScheduleRow& r = sched.rows[static_cast<std::size_t>(j)];
      NElement f = words::power(g1, -r.s);
      f = words::multiply(f, words::power(h1, -r.t));
      f = words::multiply(f, words::power(g1, r.m));
      f = words::multiply(f, words::power(h1, r.n));
      f = words::multiply(f, words::power(g1, r.k));
      f = words::multiply(f, words::power(h1, -r.l));
      out.fs.push_back(std::move(f));
    }

    out.certificates_pass = true;
    out.certificates.clear();
    for (int i = 0; i < J; ++i) {
      for (std::size_t kappa = 0; kappa < actions.size(); ++kappa) {
        const tree::TreeAction& act = actions[kappa];
        const bool elliptic = act.image(out.fs[static_cast<std::size_t>(i)]).empty();
        Certificate c9;
        c9.which = 9;
        c9.i = i + 1;
        c9.kappa = static_cast<int>(kappa) + 1;
        c9.automatic = elliptic;
        c9.pass = elliptic ||
                  !tree::sim_equivalent(out.fs[static_cast<std::size_t>(i)], actions[0],
                                        words::inverse(out.fs[static_cast<std::size_t>(i)]), act);
        out.certificates_pass = out.certificates_pass && c9.pass;
        out.certificates.push_back(c9);
        for (int j = 0; j < i; ++j) {
          for (int sign : {+1, -1}) {
            Certificate c10;
            c10.which = 10;
            c10.i = i + 1;
            c10.j = j + 1;
            c10.sign = sign;
            c10.kappa = static_cast<int>(kappa) + 1;
            c10.automatic = elliptic;
            c10.pass =
                elliptic ||
                !tree::sim_equivalent(
                    out.fs[static_cast<std::size_t>(i)], actions[0],
                    sign > 0 ? out.fs[static_cast<std::size_t>(j)]
                             : words::inverse(out.fs[static_cast<std::size_t>(j)]),
                    act);
            out.certificates_pass = out.certificates_pass && c10.pass;
            out.certificates.push_back(c10);
          }
        }
      }
    }
    if (out.certificates_pass) return out;
    sched.escalate();
  }
  throw ScheduleExhausted("certificates kept failing after " + std::to_string(retry_cap) +
                          " schedule escalations");
}

GammaQm::GammaQm(qm::QmFunction component, const wreath::KKEmbedding* kk)
    : component_(std::move(component)), kk_(kk) {}

long long GammaQm::operator()(const GammaElement& mu) const {
  wreath::WreathElement theta = kk_->embed(mu);
  long long sum = 0;
  for (const NElement& value : theta.rho) sum += component_(value);
  return sum;
}

long long GammaQm::on_n(const NElement& n) const {
  return (*this)(kk_->context().from_n(n));
}

GammaQm build_gamma_qm(std::size_t i, const std::vector<NElement>& fs,
                       const std::vector<long long>& ds, const Model& model,
                       const wreath::KKEmbedding& kk, int weight) {
  tree::TreeAction act1 = model.action(0, kk);
  qm::QmSpec spec = qm::make_axis_word(fs.at(i), ds.at(i), act1, weight);
  return GammaQm(qm::QmFunction(std::move(spec)), &kk);
}

std::vector<double> ell1_evaluate(const std::vector<double>& t, const std::vector<GammaQm>& hs,
                                  const std::vector<GammaElement>& probes) {
  std::vector<double> out;
  out.reserve(probes.size());
  for (const GammaElement& probe : probes) {
    double acc = 0;
    for (std::size_t i = 0; i < t.size() && i < hs.size(); ++i) {
      if (t[i] == 0) continue;
      acc += t[i] * static_cast<double>(hs[i](probe));
    }
    out.push_back(acc);
  }
  return out;
}

namespace {

std::string abbreviate(const NElement& n) {
  std::string s = n.str();
  constexpr std::size_t limit = 48;
  if (s.size() <= limit) return s;
  return s.substr(0, limit) + "..[" + std::to_string(s.size()) + " letters]";
}

struct DefectOutcome {
  std::vector<long long> per_gamma;  // per i
  long long component_max = 0;       // D-hat over the induced N-pairs
  std::string witness;
};

// Seeded Gamma-pair stream: a few deterministic heavy pairs built from the
// f-sequence, then a mix of small random elements, coset-mixed elements and
// f-power products kept under a letter budget.
class GammaSampler {
 public:
  GammaSampler(const Model& model, const GammaContext* ctx, const std::vector<NElement>& fs,
               std::uint64_t seed)
      : model_(&model), ctx_(ctx), fs_(&fs), rng_(SeededRng(seed).fork("defect-pairs")) {
    for (std::size_t j = 0; j < fs.size(); ++j) {
      if (fs[j].total_length() * 3 <= structured_letter_budget) allowed_.push_back(j);
    }
    for (std::size_t j = 0; j < fs.size(); ++j) {
      if (fs[j].total_length() <= heavy_letter_budget) {
        heavy_.push_back({ctx_->from_n(fs[j]), ctx_->from_n(words::inverse(fs[j]))});
        heavy_.push_back({ctx_->from_n(words::power(fs[j], 2)),
                          ctx_->from_n(words::inverse(fs[j]))});
      }
    }
  }

  std::pair<GammaElement, GammaElement> pair(std::size_t index) {
    if (index < heavy_.size()) return heavy_[index];
    return {draw(), draw()};
  }

 private:
  static constexpr std::size_t structured_letter_budget = 30000;
  static constexpr std::size_t heavy_letter_budget = 4000000;

  NElement random_n(std::size_t max_len) {
    std::vector<ReducedWord> factors;
    const auto& q = model_->quotient;
    for (int f = 0; f < q.factor_count(); ++f) {
      factors.push_back(words::random_reduced_word(q.factor_rank(static_cast<std::size_t>(f)),
                                                   rng_.below(max_len + 1), rng_));
    }
    return NElement(std::move(factors));
  }

  GammaElement draw() {
    const int K = model_->quotient.order();
    switch (rng_.below(4)) {
      case 0:
        return GammaElement{random_n(10), 0};
      case 1:
        return GammaElement{random_n(8), static_cast<int>(rng_.below(static_cast<std::uint64_t>(K)))};
      case 2: {
        if (allowed_.empty()) return GammaElement{random_n(10), 0};
        std::size_t j = allowed_[rng_.below(allowed_.size())];
        long long e = rng_.range(1, 3) * (rng_.chance(1, 2) ? 1 : -1);
        return GammaElement{words::power((*fs_)[j], e),
                            static_cast<int>(rng_.below(static_cast<std::uint64_t>(K)))};
      }
      default: {
        if (allowed_.empty()) return GammaElement{random_n(12), 0};
        std::size_t j = allowed_[rng_.below(allowed_.size())];
        long long e = rng_.range(1, 2) * (rng_.chance(1, 2) ? 1 : -1);
        NElement mid = words::power((*fs_)[j], e);
        NElement n = words::multiply(words::multiply(random_n(6), mid), random_n(6));
        return GammaElement{std::move(n), static_cast<int>(rng_.below(static_cast<std::uint64_t>(K)))};
      }
    }
  }

  const Model* model_;
  const GammaContext* ctx_;
  const std::vector<NElement>* fs_;
  SeededRng rng_;
  std::vector<std::size_t> allowed_;
  std::vector<std::pair<GammaElement, GammaElement>> heavy_;
};

DefectOutcome measure_defects(const Model& model, const GammaContext& ctx, const KKEmbedding& kk,
                              const std::vector<GammaQm>& hs, const std::vector<NElement>& fs,
                              std::size_t budget, std::uint64_t seed) {
  DefectOutcome out;
  out.per_gamma.assign(hs.size(), 0);
  GammaSampler sampler(model, &ctx, fs, seed);
  const int K = model.quotient.order();
  for (std::size_t index = 0; index < budget; ++index) {
    auto [mu, nu] = sampler.pair(index);
    GammaElement product = ctx.mul(mu, nu);
    wreath::WreathElement theta_mu = kk.embed(mu);
    wreath::WreathElement theta_nu = kk.embed(nu);
    wreath::WreathElement theta_prod = kk.embed(product);
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const qm::QmFunction& comp = hs[i].component();
      long long h_mu = 0, h_nu = 0, h_prod = 0;
      for (int k = 0; k < K; ++k) {
        h_mu += comp(theta_mu.rho[static_cast<std::size_t>(k)]);
        h_nu += comp(theta_nu.rho[static_cast<std::size_t>(k)]);
        h_prod += comp(theta_prod.rho[static_cast<std::size_t>(k)]);
      }
      long long delta = h_mu - h_prod + h_nu;
      if (delta < 0) delta = -delta;
      if (delta > out.per_gamma[i]) {
        out.per_gamma[i] = delta;
        out.witness = "i=" + std::to_string(i + 1) + " mu=(" + abbreviate(mu.n) + ";q" +
                      std::to_string(mu.q + 1) + ") nu=(" + abbreviate(nu.n) + ";q" +
                      std::to_string(nu.q + 1) + ")";
      }
      // The telescoping decomposition of delta h_i runs over the induced
      // coset pairs; feeding exactly those into the component estimate makes
      // the K * D-hat bound sound for the measured values.
      for (int k = 0; k < K; ++k) {
        const NElement& a = theta_mu.rho[static_cast<std::size_t>(k)];
        const NElement& b =
            theta_nu.rho[static_cast<std::size_t>(theta_mu.phi[static_cast<std::size_t>(k)])];
        long long comp_delta = comp(a) - comp(words::multiply(a, b)) + comp(b);
        if (comp_delta < 0) comp_delta = -comp_delta;
        out.component_max = std::max(out.component_max, comp_delta);
      }
    }
  }
  return out;
}

std::vector<ReducedWord> ball_words(int radius, int rank) {
  return spaces::tree_ball(radius, rank).word_of;
}

CheckVerdict wwpd_not_wpd_witness(const Model& model, const KKEmbedding& kk, const NElement& g1) {
  CheckVerdict v;
  tree::TreeAction act1 = model.action(0, kk);
  tree::BoundaryPair ends = tree::boundary_pair(g1, act1);
  tree::Axis axis = tree::axis_of(g1, act1);

  // Two non-commuting elements of the trivially-acting factor inside the
  // endpoint stabilizer: the stabilizer is not virtually cyclic.
  int other = model.acting_factor == 0 ? 1 : 0;
  if (model.quotient.factor_count() < 2) {
    v.pass = false;
    v.detail = "no trivially-acting factor available";
    return v;
  }
  auto lift_other = [&](const std::string& text) {
    std::vector<ReducedWord> factors;
    for (int f = 0; f < model.quotient.factor_count(); ++f) {
      int rank = model.quotient.factor_rank(static_cast<std::size_t>(f));
      factors.push_back(f == other ? ReducedWord::parse(rank, text) : ReducedWord(rank));
    }
    return NElement(std::move(factors));
  };
  NElement s1 = lift_other("ab");
  NElement s2 = lift_other("b");
  bool noncommuting = words::multiply(s1, s2) != words::multiply(s2, s1);
  bool both_stabilize =
      tree::stab_membership(s1, ends, act1) && tree::stab_membership(s2, ends, act1);

  // Bounded projections off the stabilizer, exhaustively over short movers.
  long long max_diameter = 0;
  long long stabilizer_hits = 0;
  ReducedWord img = act1.image(g1);
  for (const ReducedWord& u : ball_words(6, model.tree_rank())) {
    if (u.empty()) continue;
    ReducedWord conj = words::multiply(words::multiply(u, img), words::inverse(u));
    words::CyclicReduction cr = words::cyclic_reduce(conj);
    tree::Axis moved(cr.conjugator, cr.core);
    tree::ProjectionDiameter pd = tree::projection_diameter(axis, moved);
    if (pd.unbounded) {
      ++stabilizer_hits;
      continue;
    }
    max_diameter = std::max(max_diameter, pd.diameter);
  }

  v.pass = noncommuting && both_stabilize && max_diameter <= 1;
  v.detail = "stabilizer witnesses " + s1.str() + " and " + s2.str() +
             (both_stabilize ? " fix both ends" : " FAIL to fix both ends") +
             (noncommuting ? ", do not commute" : ", COMMUTE") +
             "; max projection diameter off the stabilizer = " + std::to_string(max_diameter) +
             " over movers of length <= 6 (" + std::to_string(stabilizer_hits) +
             " line-stabilizing movers skipped)";
  return v;
}

}  // namespace

QmReport run_report(const PipelineConfig& config) {
  config.validate();
  Model model = make_model(config);
  GammaContext ctx(&model.quotient);
  const int K = model.quotient.order();

  KKEmbedding kk = [&]() {
    if (config.conjugate_reps.empty()) return KKEmbedding(&ctx);
    if (static_cast<int>(config.conjugate_reps.size()) != K) {
      throw ConfigError("conjugate_reps needs exactly one word per coset");
    }
    std::vector<GammaElement> reps;
    for (int k = 0; k < K; ++k) {
      reps.push_back(GammaElement{model.parse_acting(config.conjugate_reps[static_cast<std::size_t>(k)]), k});
    }
    return KKEmbedding(&ctx, std::move(reps));
  }();

  QmReport rep;
  rep.model_id = model.id;
  rep.J = config.J;
  rep.W = config.W;
  rep.probe_cap = config.probe_cap;
  rep.budget = config.budget;
  rep.seed = config.seed;
  rep.growth = config.growth;
  rep.row1 = config.row1;
  rep.ell1_t = config.ell1_t;
  rep.conjugate_reps = config.conjugate_reps;
  rep.K = K;

  std::vector<tree::TreeAction> actions;
  actions.reserve(static_cast<std::size_t>(K));
  for (int kappa = 0; kappa < K; ++kappa) actions.push_back(model.action(kappa, kk));

  auto [basis_g, basis_h] = derive_commutator_basis(model, config);
  rep.input_g1 = basis_g.str();
  rep.input_h1 = basis_h.str();

  ActionClassification cls = classify_actions(model, kk, basis_g, basis_h);
  rep.K1 = cls.k1;
  rep.action_tags = cls.tags;

  tree::GoodBasis good = tree::good_basis(basis_g, basis_h, actions, config.a_max);
  rep.good_a = good.a;
  rep.g1 = good.g1.str();
  rep.h1 = good.h1.str();

  ExponentSchedule schedule = ExponentSchedule::build(config.row1, config.growth, config.J);
  FSequence fseq = build_f_sequence(good.g1, good.h1, schedule, config.J, actions,
                                    config.retry_cap);
  rep.schedule = fseq.schedule_used;
  rep.escalations = fseq.escalations;
  rep.certificates = fseq.certificates;
  for (const Certificate& c : fseq.certificates) {
    CheckVerdict& v = c.which == 9 ? rep.c9 : rep.c10;
    if (!c.pass) {
      v.pass = false;
      v.detail += " i" + std::to_string(c.i) +
                  (c.j > 0 ? ".j" + std::to_string(c.j) : std::string()) + ".k" +
                  std::to_string(c.kappa);
    }
  }
  if (rep.c9.pass) rep.c9.detail = "all inequivalences hold";
  if (rep.c10.pass) rep.c10.detail = "all inequivalences hold";

  tree::TreeAction& act1 = actions[0];
  for (const NElement& f : fseq.fs) {
    rep.f_lengths.push_back(static_cast<long long>(act1.image(f).size()));
    rep.translation_lengths.push_back(tree::axis_of(f, act1).translation_length());
    rep.f_exponent_sums.push_back(sums_string(f));
  }

  qm::PowerSearchConfig power_cfg;
  power_cfg.probe_cap = config.probe_cap;
  power_cfg.d_cap = config.d_cap;
  power_cfg.weight = config.W;
  rep.d_list = qm::choose_powers(fseq.fs, actions, power_cfg);

  qm::EvalStats stats;
  qm::EvalOptions opts;
  opts.stats = &stats;
  std::vector<GammaQm> hs;
  for (std::size_t i = 0; i < fseq.fs.size(); ++i) {
    qm::QmSpec spec = qm::make_axis_word(fseq.fs[i], rep.d_list[i], act1, config.W);
    hs.emplace_back(qm::QmFunction(std::move(spec), opts), &kk);
  }

  const int cap = config.probe_cap;
  // Growth of each component quasimorphism on its own positive powers.
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const qm::QmFunction& comp = hs[i].component();
    ReducedWord img = act1.image(fseq.fs[i]);
    std::vector<long long> values;
    for (int d = 1; d <= cap; ++d) {
      long long v = comp.value_on_word(words::power(img, d));
      values.push_back(v);
      rep.series.push_back(SeriesRow{static_cast<int>(i) + 1, static_cast<int>(i) + 1, 1, d, v});
      if (v < 0) {
        rep.c11.pass = false;
        rep.c11.detail += " negative at i" + std::to_string(i + 1) + ".d" + std::to_string(d);
      }
    }
    const long long di = rep.d_list[i];
    for (std::size_t m = 0; m + static_cast<std::size_t>(di) < values.size(); ++m) {
      if (values[m + static_cast<std::size_t>(di)] <= values[m]) {
        rep.c11.pass = false;
        rep.c11.detail += " window stalls at i" + std::to_string(i + 1) + ".d" +
                          std::to_string(m + 1);
        break;
      }
    }
    if (values.back() < values.front() + config.W) {
      rep.c11.pass = false;
      rep.c11.detail += " growth below W at i" + std::to_string(i + 1);
    }
  }
  if (rep.c11.pass) {
    rep.c11.detail = "nonnegative, windows increase, end-start >= W (verified on the probe "
                     "window; copies of the axis word accumulate along further powers)";
  }

  // Twisted powers: nonnegative on Schottky twists, exact zero on elliptic.
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const qm::QmFunction& comp = hs[i].component();
    for (int kappa = 1; kappa < K; ++kappa) {
      ReducedWord img = actions[static_cast<std::size_t>(kappa)].image(fseq.fs[i]);
      const bool elliptic = cls.tags[static_cast<std::size_t>(kappa)] == ActionClass::Elliptic;
      for (int d = 1; d <= cap; ++d) {
        long long v = comp.value_on_word(words::power(img, d));
        rep.series.push_back(
            SeriesRow{static_cast<int>(i) + 1, static_cast<int>(i) + 1, kappa + 1, d, v});
        bool ok = elliptic ? v == 0 : v >= 0;
        if (!ok) {
          rep.c12.pass = false;
          rep.c12.detail += " i" + std::to_string(i + 1) + ".k" + std::to_string(kappa + 1) +
                            ".d" + std::to_string(d) + "=" + std::to_string(v);
        }
      }
    }
  }
  if (rep.c12.pass) {
    rep.c12.detail = rep.K1 < K ? "nonnegative on Schottky twists, exact zeros on elliptic twists"
                                : "nonnegative on all twists";
  }

  // Vanishing on every earlier cyclic group, both orientations, all twists.
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const qm::QmFunction& comp = hs[i].component();
    for (std::size_t j = 0; j < i; ++j) {
      for (int kappa = 0; kappa < K; ++kappa) {
        ReducedWord img = actions[static_cast<std::size_t>(kappa)].image(fseq.fs[j]);
        for (int d = -cap; d <= cap; ++d) {
          if (d == 0) continue;
          long long v = comp.value_on_word(words::power(img, d));
          rep.series.push_back(SeriesRow{static_cast<int>(i) + 1, static_cast<int>(j) + 1,
                                         kappa + 1, d, v});
          if (v != 0) {
            rep.c14.pass = false;
            rep.c14.detail += " i" + std::to_string(i + 1) + ".j" + std::to_string(j + 1) +
                              ".k" + std::to_string(kappa + 1) + ".d" + std::to_string(d) + "=" +
                              std::to_string(v);
          }
        }
      }
    }
  }
  if (rep.c14.pass) rep.c14.detail = "exact zeros on all earlier cyclic groups";

  // Defects: measured Gamma-level defect against K times the component
  // defect over the induced coset pairs.
  if (!hs.empty()) {
    DefectOutcome defects =
        measure_defects(model, ctx, kk, hs, fseq.fs, config.budget, config.seed);
    rep.defect_gamma = defects.per_gamma;
    rep.component_defect = defects.component_max;
    for (std::size_t i = 0; i < defects.per_gamma.size(); ++i) {
      if (defects.per_gamma[i] > static_cast<long long>(K) * defects.component_max) {
        rep.c13.pass = false;
        rep.c13.detail += " defect bound fails at i" + std::to_string(i + 1);
      }
    }
    if (rep.c13.pass) {
      long long worst = 0;
      for (long long v : defects.per_gamma) worst = std::max(worst, v);
      rep.c13.detail = "max measured defect " + std::to_string(worst) + " <= K*Dhat = " +
                       std::to_string(K) + "*" + std::to_string(defects.component_max);
      if (!defects.witness.empty()) rep.c13.detail += "; witness " + defects.witness;
    }
  }

  // Finite ell^1 combination on powers of the least contributing f.
  std::size_t jstar = hs.size();
  for (std::size_t i = 0; i < config.ell1_t.size() && i < hs.size(); ++i) {
    if (config.ell1_t[i] != 0) {
      jstar = i;
      break;
    }
  }
  if (jstar < hs.size()) {
    std::vector<GammaElement> probes;
    for (int d = 1; d <= cap; ++d) {
      probes.push_back(ctx.from_n(words::power(fseq.fs[jstar], d)));
    }
    std::vector<double> series = ell1_evaluate(config.ell1_t, hs, probes);
    for (int d = 1; d <= cap; ++d) {
      rep.ell1_series.push_back(
          Ell1Row{static_cast<int>(jstar) + 1, d, series[static_cast<std::size_t>(d - 1)]});
    }
    double expected_growth = std::abs(config.ell1_t[jstar]) * config.W;
    if (!(series.back() > series.front() &&
          series.back() - series.front() >= expected_growth)) {
      rep.ell1.pass = false;
      rep.ell1.detail += " series growth too small";
    }
    for (std::size_t i = jstar + 1; i < hs.size(); ++i) {
      for (const GammaElement& probe : probes) {
        if (hs[i](probe) != 0) {
          rep.ell1.pass = false;
          rep.ell1.detail += " nonzero higher contribution at i" + std::to_string(i + 1);
          break;
        }
      }
    }
    for (std::size_t j = 0; j < fseq.fs.size(); ++j) {
      for (long long s : words::exponent_sums(fseq.fs[j])) {
        if (s != 0) {
          rep.ell1.pass = false;
          rep.ell1.detail += " f" + std::to_string(j + 1) + " has nonzero exponent sums";
          break;
        }
      }
    }
    if (rep.ell1.pass) {
      rep.ell1.detail = "h_(t) grows by " + fmt_double(series.back() - series.front()) +
                         " over the probe window (verified on the window, not a proof; "
                         "copies of the leading axis word accumulate along further powers), "
                         "higher contributions all zero, every f_j has vanishing exponent "
                         "sums (so every homomorphism to R vanishes on the probes)";
    }
  } else {
    rep.ell1.detail = "no nonzero coefficient within range";
  }

  if (rep.K1 < K) {
    rep.wwpd_witness = wwpd_not_wpd_witness(model, kk, good.g1);
  }

  rep.quasigeodesic_violations = stats.quasigeodesic_violations;
  rep.overall = rep.c9.pass && rep.c10.pass && rep.c11.pass && rep.c12.pass && rep.c13.pass &&
                rep.c14.pass && rep.ell1.pass &&
                (!rep.wwpd_witness.has_value() || rep.wwpd_witness->pass);
  return rep;
}

namespace {

const char* tag_name(ActionClass c) {
  return c == ActionClass::Schottky ? "schottky" : "elliptic";
}

void emit_check(std::ostringstream& out, const std::string& name, const CheckVerdict& v) {
  out << "check." << name << " = " << (v.pass ? "pass" : "FAIL") << "\n";
  if (!v.detail.empty()) out << "check." << name << ".detail = " << v.detail << "\n";
}

}  // namespace

std::string QmReport::report_text() const {
  std::ostringstream out;
  out << "cqm pipeline report\n";
  out << "format = 1\n\n";

  out << "[config]\n";
  out << "model = " << model_id << "\n";
  out << "J = " << J << "\n";
  out << "W = " << W << "\n";
  out << "probe_cap = " << probe_cap << "\n";
  out << "budget = " << budget << "\n";
  out << "seed = " << seed << "\n";
  out << "growth = " << growth << "\n";
  out << "schedule_row1 = " << row_string(row1) << "\n";
  out << "ell1_t =";
  for (double t : ell1_t) out << " " << fmt_double(t);
  out << "\n";
  if (!conjugate_reps.empty()) {
    out << "conjugate_reps =";
    for (const auto& w : conjugate_reps) out << " " << w;
    out << "\n";
  }
  out << "\n[model]\n";
  out << "K = " << K << "\n";
  out << "K1 = " << K1 << "\n";
  for (std::size_t k = 0; k < action_tags.size(); ++k) {
    out << "action." << (k + 1) << " = " << tag_name(action_tags[k]) << "\n";
  }

  out << "\n[basis]\n";
  out << "input.g1 = " << input_g1 << "\n";
  out << "input.h1 = " << input_h1 << "\n";
  out << "good_a = " << good_a << "\n";
  out << "g1 = " << g1 << "\n";
  out << "h1 = " << h1 << "\n";

  out << "\n[schedule]\n";
  for (std::size_t j = 0; j < schedule.rows.size(); ++j) {
    out << "row." << (j + 1) << " = " << row_string(schedule.rows[j]) << "\n";
  }
  out << "escalations = " << escalations << "\n";

  out << "\n[f]\n";
  for (std::size_t i = 0; i < f_lengths.size(); ++i) {
    out << "f." << (i + 1) << ".length = " << f_lengths[i] << "\n";
    out << "f." << (i + 1) << ".translation_length = " << translation_lengths[i] << "\n";
    out << "f." << (i + 1) << ".exponent_sums = " << f_exponent_sums[i] << "\n";
    out << "f." << (i + 1) << ".d = " << d_list[i] << "\n";
  }

  out << "\n[certificates]\n";
  for (const Certificate& c : certificates) {
    out << "cert." << c.which << ".i" << c.i;
    if (c.j > 0) out << ".j" << c.j << (c.sign > 0 ? "+" : "-");
    out << ".k" << c.kappa << " = " << (c.pass ? "pass" : "FAIL")
        << (c.automatic ? " (elliptic twist, automatic)" : "") << "\n";
  }
  emit_check(out, "9", c9);
  emit_check(out, "10", c10);

  out << "\n[properties]\n";
  emit_check(out, "11", c11);
  emit_check(out, "12", c12);
  emit_check(out, "13", c13);
  emit_check(out, "14", c14);
  out << "component_defect = " << component_defect << "\n";
  for (std::size_t i = 0; i < defect_gamma.size(); ++i) {
    out << "defect.gamma." << (i + 1) << " = " << defect_gamma[i] << "\n";
  }
  out << "quasigeodesic_violations = " << quasigeodesic_violations << "\n";

  out << "\n[ell1]\n";
  for (const Ell1Row& r : ell1_series) {
    out << "h_t.j" << r.j << ".d" << r.d << " = " << fmt_double(r.value) << "\n";
  }
  emit_check(out, "ell1", ell1);

  if (wwpd_witness.has_value()) {
    out << "\n[wwpd_witness]\n";
    emit_check(out, "wwpd_not_wpd", *wwpd_witness);
  }

  out << "\noverall = " << (overall ? "pass" : "FAIL") << "\n";
  return out.str();
}

std::string QmReport::csv_text() const {
  std::ostringstream out;
  out << "i,j,kappa,d,value\n";
  for (const SeriesRow& r : series) {
    out << r.i << "," << r.j << "," << r.kappa << "," << r.d << "," << r.value << "\n";
  }
  return out.str();
}

}  // namespace cqm::pipeline
