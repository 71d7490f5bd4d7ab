#include <doctest.h>

#include "cqm/config.hpp"
#include "cqm/pipeline.hpp"

using namespace cqm;
using namespace cqm::words;
using namespace cqm::pipeline;

namespace {

ReducedWord w2(const std::string& s) { return ReducedWord::parse(2, s); }
NElement n2(const std::string& s) { return NElement::single(w2(s)); }

PipelineConfig small_config(const std::string& model) {
  PipelineConfig cfg;
  cfg.model_id = model;
  cfg.J = 2;
  cfg.W = 1;
  cfg.probe_cap = 8;
  cfg.budget = 60;
  cfg.seed = 777;
  cfg.growth = 2;
  cfg.row1 = ScheduleRow{1, 2, 4, 8, 16, 32};
  return cfg;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("schedule construction and invariants") {
  ExponentSchedule s = ExponentSchedule::build(ScheduleRow{1, 2, 4, 8, 16, 32}, 2, 3);
  REQUIRE(s.rows.size() == 3);
  CHECK(s.rows[1].m == 64);
  CHECK(s.rows[1].t == 2048);
  CHECK(s.rows[2].m == 4096);
  s.escalate();
  CHECK(s.rows[0].m == 2);
  CHECK_NOTHROW(s.validate());

  CHECK_THROWS_AS(ExponentSchedule::build(ScheduleRow{1, 2, 3, 4, 5, 6}, 2, 1), ConfigError);
  CHECK_THROWS_AS(ExponentSchedule::build(ScheduleRow{2, 1, 4, 8, 16, 32}, 2, 1), ConfigError);
  CHECK_THROWS_AS(ExponentSchedule::build(ScheduleRow{0, 2, 4, 8, 16, 32}, 2, 1), ConfigError);
  ExponentSchedule g1;
  g1.growth = 1;
  g1.rows.push_back(ScheduleRow{1, 2, 4, 8, 16, 32});
  CHECK_THROWS_AS(g1.validate(), ConfigError);
}

TEST_CASE("commutator basis derivation") {
  Model model = model_A();
  PipelineConfig cfg = small_config("A");
  auto [g1, h1] = derive_commutator_basis(model, cfg);
  CHECK(g1 == n2("abAB"));
  CHECK(h1 == n2("aBAb"));

  cfg.basis_override = std::make_pair(std::string("a"), std::string("b"));
  cfg.require_commutator = false;
  auto [og, oh] = derive_commutator_basis(model, cfg);
  CHECK(og == n2("a"));
  CHECK(oh == n2("b"));

  cfg.require_commutator = true;
  CHECK_THROWS_AS(derive_commutator_basis(model, cfg), BadBasis);

  cfg.basis_override = std::make_pair(std::string("a"), std::string("aa"));
  cfg.require_commutator = false;
  CHECK_THROWS_AS(derive_commutator_basis(model, cfg), BadBasis);
}

TEST_CASE("action classification") {
  Model a = model_A();
  wreath::GammaContext ctx_a(&a.quotient);
  wreath::KKEmbedding kk_a(&ctx_a);
  ActionClassification ca = classify_actions(a, kk_a, n2("abAB"), n2("aBAb"));
  CHECK(ca.k1 == 2);
  REQUIRE(ca.tags.size() == 2);
  CHECK(ca.tags[0] == ActionClass::Schottky);
  CHECK(ca.tags[1] == ActionClass::Schottky);

  Model b = model_B();
  wreath::GammaContext ctx_b(&b.quotient);
  wreath::KKEmbedding kk_b(&ctx_b);
  NElement bg({w2("abAB"), w2("")});
  NElement bh({w2("aBAb"), w2("")});
  ActionClassification cb = classify_actions(b, kk_b, bg, bh);
  CHECK(cb.k1 == 1);
  CHECK(cb.tags[1] == ActionClass::Elliptic);

  // Negative control: a pair that is not free of rank 2.
  CHECK_THROWS_AS(classify_actions(a, kk_a, n2("a"), n2("aa")), HypothesisViolated);
}

TEST_CASE("f-sequence assembly formula") {
  // Exponent row taken literally (no growth constraints on this fixture).
  ExponentSchedule sched;
  sched.rows.push_back(ScheduleRow{1, 2, 3, 4, 5, 6});
  Model model = model_A();
  wreath::GammaContext ctx(&model.quotient);
  wreath::KKEmbedding kk(&ctx);
  std::vector<tree::TreeAction> acts{model.action(0, kk), model.action(1, kk)};
  FSequence fs = build_f_sequence(n2("a"), n2("b"), sched, 1, acts, 0);
  REQUIRE(fs.fs.size() == 1);
  CHECK(fs.fs[0] == n2("AAAAABBBBBBabbaaaBBBB"));
  CHECK(fs.certificates_pass);

  FSequence empty = build_f_sequence(n2("a"), n2("b"), sched, 0, acts, 0);
  CHECK(empty.fs.empty());
  CHECK(empty.certificates_pass);
}

TEST_CASE("gamma quasimorphism reduces to the coset sum on N") {
  PipelineConfig cfg = small_config("A");
  Model model = make_model(cfg);
  wreath::GammaContext ctx(&model.quotient);
  wreath::KKEmbedding kk(&ctx);
  std::vector<tree::TreeAction> acts{model.action(0, kk), model.action(1, kk)};
  ExponentSchedule sched = ExponentSchedule::build(cfg.row1, cfg.growth, cfg.J);
  FSequence fs = build_f_sequence(n2("abAB"), n2("aBAb"), sched, cfg.J, acts, cfg.retry_cap);
  std::vector<long long> ds(fs.fs.size(), 1);
  GammaQm h1 = build_gamma_qm(0, fs.fs, ds, model, kk, cfg.W);

  SeededRng rng(61);
  for (int i = 0; i < 40; ++i) {
    NElement n = NElement::single(random_reduced_word(2, rng.below(30), rng));
    long long direct = h1.on_n(n);
    long long by_hand = h1.component()(kk.outer_rep(0, n)) + h1.component()(kk.outer_rep(1, n));
    CHECK(direct == by_hand);
    // No dependence on the permutation part.
    CHECK(h1(wreath::GammaElement{n, 0}) == direct);
  }
  CHECK(h1(ctx.identity()) == 0);
}

TEST_CASE("ell1 evaluation") {
  PipelineConfig cfg = small_config("A");
  Model model = make_model(cfg);
  wreath::GammaContext ctx(&model.quotient);
  wreath::KKEmbedding kk(&ctx);
  std::vector<tree::TreeAction> acts{model.action(0, kk), model.action(1, kk)};
  ExponentSchedule sched = ExponentSchedule::build(cfg.row1, cfg.growth, cfg.J);
  FSequence fs = build_f_sequence(n2("abAB"), n2("aBAb"), sched, cfg.J, acts, cfg.retry_cap);
  qm::PowerSearchConfig pcfg;
  pcfg.probe_cap = cfg.probe_cap;
  pcfg.weight = cfg.W;
  auto ds = qm::choose_powers(fs.fs, acts, pcfg);
  std::vector<GammaQm> hs;
  for (std::size_t i = 0; i < fs.fs.size(); ++i) {
    hs.push_back(build_gamma_qm(i, fs.fs, ds, model, kk, cfg.W));
  }

  std::vector<wreath::GammaElement> probes;
  for (int d = 1; d <= 6; ++d) probes.push_back(ctx.from_n(power(fs.fs[0], d)));

  auto zeros = ell1_evaluate({0.0, 0.0}, hs, probes);
  for (double v : zeros) CHECK(v == 0.0);

  auto growing = ell1_evaluate({1.0}, hs, probes);
  for (std::size_t i = 1; i < growing.size(); ++i) CHECK(growing[i] >= growing[i - 1]);
  CHECK(growing.back() > growing.front());

  // t = (0, 1) never sees f_1 powers.
  auto skip_first = ell1_evaluate({0.0, 1.0}, hs, probes);
  for (double v : skip_first) CHECK(v == 0.0);
}

TEST_CASE("model A report passes and is reproducible") {
  PipelineConfig cfg = small_config("A");
  QmReport r1 = run_report(cfg);
  CHECK(r1.overall);
  CHECK(r1.K1 == 2);
  CHECK(r1.good_a == 1);
  CHECK(r1.escalations == 0);
  CHECK(r1.c9.pass);
  CHECK(r1.c10.pass);
  CHECK(r1.c11.pass);
  CHECK(r1.c12.pass);
  CHECK(r1.c13.pass);
  CHECK(r1.c14.pass);
  CHECK(r1.ell1.pass);
  CHECK_FALSE(r1.wwpd_witness.has_value());

  QmReport r2 = run_report(cfg);
  CHECK(r1.report_text() == r2.report_text());
  CHECK(r1.csv_text() == r2.csv_text());
}

TEST_CASE("model B exercises the elliptic branch") {
  PipelineConfig cfg = small_config("B");
  QmReport r = run_report(cfg);
  CHECK(r.overall);
  CHECK(r.K == 2);
  CHECK(r.K1 == 1);
  REQUIRE(r.wwpd_witness.has_value());
  CHECK(r.wwpd_witness->pass);
  // Twisted series rows for kappa = 2 are exactly zero.
  for (const SeriesRow& row : r.series) {
    if (row.kappa == 2 && row.i == row.j) CHECK(row.value == 0);
  }
}

TEST_CASE("verdicts are invariant under conjugated coset representatives") {
  PipelineConfig cfg = small_config("A");
  cfg.budget = 40;
  QmReport base = run_report(cfg);
  cfg.conjugate_reps = {"1", "ab"};
  QmReport twisted = run_report(cfg);
  CHECK(base.overall == twisted.overall);
  CHECK(base.c9.pass == twisted.c9.pass);
  CHECK(base.c10.pass == twisted.c10.pass);
  CHECK(base.c11.pass == twisted.c11.pass);
  CHECK(base.c12.pass == twisted.c12.pass);
  CHECK(base.c13.pass == twisted.c13.pass);
  CHECK(base.c14.pass == twisted.c14.pass);
  CHECK(base.ell1.pass == twisted.ell1.pass);
  CHECK(base.K1 == twisted.K1);
  CHECK(base.d_list == twisted.d_list);
}

TEST_CASE("config parsing") {
  auto cfg = config::parse_config_text(
      "# demo\n"
      "model = A\n"
      "J = 2\n"
      "W = 1\n"
      "probe_cap = 10\n"
      "budget = 50\n"
      "seed = 99\n"
      "growth = 2\n"
      "schedule = 1 2 4 8 16 32\n"
      "ell1 = 1 1/2 1/4\n");
  CHECK(cfg.model_id == "A");
  CHECK(cfg.J == 2);
  CHECK(cfg.seed == 99);
  CHECK(cfg.ell1_t == std::vector<double>{1.0, 0.5, 0.25});

  CHECK_THROWS_AS(config::parse_config_text("bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(config::parse_config_text("schedule = 3 2 4 8 16 32\n"), ConfigError);
  CHECK_THROWS_AS(config::parse_config_text("J\n"), ConfigError);
  CHECK_THROWS_AS(config::load_config_file("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("custom model round trip") {
  auto cfg = config::parse_config_text(
      "model = custom\n"
      "J = 1\n"
      "W = 1\n"
      "probe_cap = 6\n"
      "budget = 20\n"
      "seed = 5\n"
      "custom.rank = 2\n"
      "custom.table = 0 1 / 1 0\n"
      "custom.image.2 = b a\n");
  QmReport r = run_report(cfg);
  CHECK(r.overall);
  CHECK(r.K == 2);
  CHECK(r.K1 == 2);
}

}  // TEST_SUITE
