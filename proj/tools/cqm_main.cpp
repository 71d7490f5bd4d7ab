// cqm: word/axis/equivalence queries, counting-quasimorphism evaluation,
// graph hyperbolicity, and pipeline runs over the built-in group models.
//
// Exit codes: 0 success/pass, 1 check failure, 2 usage or config error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cqm/config.hpp"
#include "cqm/pipeline.hpp"
#include "cqm/qm.hpp"
#include "cqm/spaces.hpp"
#include "cqm/tree.hpp"
#include "cqm/words.hpp"
#include "cqm/wreath.hpp"

namespace {

using cqm::words::NElement;
using cqm::words::ReducedWord;

int infer_rank(std::string_view text) {
  int rank = 2;
  for (char c : text) {
    int idx = 0;
    if (c >= 'a' && c <= 'z') idx = c - 'a' + 1;
    if (c >= 'A' && c <= 'Z') idx = c - 'A' + 1;
    rank = std::max(rank, idx);
  }
  return rank;
}

ReducedWord parse_word(const std::string& text, int rank = 0) {
  std::string t = text == "1" ? "" : text;
  return ReducedWord::parse(rank > 0 ? rank : infer_rank(t), t);
}

cqm::pipeline::Model load_model(const std::string& spec) {
  if (spec == "A") return cqm::pipeline::model_A();
  if (spec == "B") return cqm::pipeline::model_B();
  return cqm::pipeline::make_model(cqm::config::load_config_file(spec));
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cqm::Error("cannot write file: " + path);
  out << content;
}

struct QueryContext {
  cqm::pipeline::Model model;
  cqm::wreath::GammaContext ctx;
  cqm::wreath::KKEmbedding kk;

  explicit QueryContext(const std::string& spec)
      : model(load_model(spec)), ctx(&model.quotient), kk(&ctx) {}

  cqm::tree::TreeAction action(int kappa1based) const {
    if (kappa1based < 1 || kappa1based > model.quotient.order()) {
      throw cqm::pipeline::ConfigError("kappa out of range for this model");
    }
    return model.action(kappa1based - 1, kk);
  }
};

int run(int argc, char** argv) {
  CLI::App app{"counting quasimorphisms on free-group Cayley trees"};
  app.require_subcommand(1);

  // word reduce / word sums
  auto* word = app.add_subcommand("word", "free-group word algebra");
  word->require_subcommand(1);
  std::string word_arg;
  auto* word_reduce = word->add_subcommand("reduce", "freely reduce a word");
  word_reduce->add_option("word", word_arg, "letter string, e.g. abAB")->required();
  auto* word_sums = word->add_subcommand("sums", "exponent sums per generator");
  word_sums->add_option("word", word_arg, "letter string")->required();

  // sim
  auto* sim = app.add_subcommand("sim", "direction equivalence of two loxodromics");
  std::string sim_g, sim_h, sim_model = "A";
  int sim_kappa = 1;
  sim->add_option("elem_g", sim_g)->required();
  sim->add_option("elem_h", sim_h)->required();
  sim->add_option("--kappa", sim_kappa, "twisted action index (1-based)");
  sim->add_option("--model", sim_model, "A, B or a config path");

  // axis
  auto* axis_cmd = app.add_subcommand("axis", "axis data and boundary pair");
  std::string axis_g, axis_model = "A";
  int axis_kappa = 1;
  axis_cmd->add_option("elem_g", axis_g)->required();
  axis_cmd->add_option("--kappa", axis_kappa);
  axis_cmd->add_option("--model", axis_model);

  // proj-diam
  auto* proj = app.add_subcommand("proj-diam", "projection diameter of two axes");
  std::string proj_g, proj_h, proj_model = "A";
  int proj_kappa = 1;
  proj->add_option("elem_g", proj_g)->required();
  proj->add_option("elem_h", proj_h)->required();
  proj->add_option("--kappa", proj_kappa);
  proj->add_option("--model", proj_model);

  // qm eval / qm defect
  auto* qm_cmd = app.add_subcommand("qm", "counting quasimorphisms");
  qm_cmd->require_subcommand(1);
  auto* qm_eval = qm_cmd->add_subcommand("eval", "evaluate h_w at a group element");
  std::string qm_w, qm_gamma, qm_engine = "auto", qm_csv;
  int qm_weight = 1;
  qm_eval->add_option("--w", qm_w, "counting word")->required();
  qm_eval->add_option("--W", qm_weight, "weight, |w| >= 2W")->required();
  qm_eval->add_option("gamma", qm_gamma)->required();
  qm_eval->add_option("--engine", qm_engine, "auto | count | search");
  qm_eval->add_option("--csv", qm_csv, "append a CSV row (gamma,d,c_w,c_wbar,h_w)");
  auto* qm_defect = qm_cmd->add_subcommand("defect", "empirical defect lower bound");
  long long qm_budget = 0;
  std::uint64_t qm_seed = 1;
  int qm_maxlen = 12;
  qm_defect->add_option("--w", qm_w)->required();
  qm_defect->add_option("--W", qm_weight)->required();
  qm_defect->add_option("--budget", qm_budget)->required();
  qm_defect->add_option("--seed", qm_seed)->required();
  qm_defect->add_option("--maxlen", qm_maxlen, "max sampled word length");

  // graph delta
  auto* graph = app.add_subcommand("graph", "finite graph spaces");
  graph->require_subcommand(1);
  auto* graph_delta = graph->add_subcommand("delta", "four-point hyperbolicity constant");
  std::string graph_path;
  graph_delta->add_option("edgelist", graph_path, "edge list file, one 'u v' per line")->required();

  // pipeline run
  auto* pipe = app.add_subcommand("pipeline", "full construction pipeline");
  pipe->require_subcommand(1);
  auto* pipe_run = pipe->add_subcommand("run", "run the pipeline from a config file");
  std::string pipe_config, pipe_report, pipe_csv;
  pipe_run->add_option("config", pipe_config)->required();
  pipe_run->add_option("--report", pipe_report, "write the report here (default: stdout)");
  pipe_run->add_option("--csv", pipe_csv, "write the probe series CSV here");

  CLI11_PARSE(app, argc, argv);

  if (word_reduce->parsed()) {
    std::cout << parse_word(word_arg).str() << "\n";
    return 0;
  }
  if (word_sums->parsed()) {
    ReducedWord w = parse_word(word_arg);
    std::string out;
    for (long long s : cqm::words::exponent_sums(w)) {
      if (!out.empty()) out.push_back(',');
      out += std::to_string(s);
    }
    std::cout << "(" << out << ")\n";
    return 0;
  }
  if (sim->parsed()) {
    QueryContext q(sim_model);
    NElement g = q.model.parse_acting(sim_g);
    NElement h = q.model.parse_acting(sim_h);
    bool eq = cqm::tree::sim_equivalent(g, h, q.action(sim_kappa));
    std::cout << (eq ? "equivalent" : "not equivalent") << "\n";
    return 0;
  }
  if (axis_cmd->parsed()) {
    QueryContext q(axis_model);
    cqm::tree::TreeAction act = q.action(axis_kappa);
    NElement g = q.model.parse_acting(axis_g);
    cqm::tree::Axis axis = cqm::tree::axis_of(g, act);
    cqm::tree::BoundaryPair ends = cqm::tree::boundary_pair(g, act);
    std::cout << "conjugator " << axis.conjugator().str() << "\n";
    std::cout << "period " << axis.period_word().str() << "\n";
    std::cout << "translation_length " << axis.translation_length() << "\n";
    std::cout << "boundary- " << ends.minus.str() << "\n";
    std::cout << "boundary+ " << ends.plus.str() << "\n";
    return 0;
  }
  if (proj->parsed()) {
    QueryContext q(proj_model);
    cqm::tree::TreeAction act = q.action(proj_kappa);
    cqm::tree::Axis a = cqm::tree::axis_of(q.model.parse_acting(proj_g), act);
    cqm::tree::Axis b = cqm::tree::axis_of(q.model.parse_acting(proj_h), act);
    cqm::tree::ProjectionDiameter pd = cqm::tree::projection_diameter(a, b);
    if (pd.unbounded) {
      std::cout << "unbounded\n";
    } else {
      std::cout << pd.diameter << "\n";
    }
    return 0;
  }
  if (qm_eval->parsed()) {
    int rank = std::max(infer_rank(qm_w), infer_rank(qm_gamma));
    ReducedWord w = parse_word(qm_w, rank);
    ReducedWord gamma = parse_word(qm_gamma, rank);
    cqm::qm::QmSpec spec = cqm::qm::QmSpec::make(cqm::tree::left_multiplication_action(rank),
                                                 ReducedWord(rank), w, qm_weight);
    cqm::qm::EvalOptions opts;
    if (qm_engine == "count") {
      opts.engine = cqm::qm::Engine::GeodesicCount;
    } else if (qm_engine == "search") {
      opts.engine = cqm::qm::Engine::Search;
    } else if (qm_engine != "auto") {
      throw cqm::pipeline::ConfigError("unknown engine: " + qm_engine);
    }
    long long cw = cqm::qm::c_w(spec.x0, gamma, spec, opts);
    long long cwbar = cqm::qm::c_w(spec.x0, gamma, spec.reversed(), opts);
    std::cout << "c_w " << cw << "\n";
    std::cout << "c_wbar " << cwbar << "\n";
    std::cout << "h " << (cw - cwbar) << "\n";
    if (!qm_csv.empty()) {
      std::ofstream csv(qm_csv, std::ios::binary | std::ios::app);
      if (!csv) throw cqm::Error("cannot write file: " + qm_csv);
      if (csv.tellp() == 0) csv << "gamma,d,c_w,c_wbar,h_w\n";
      csv << gamma.str() << "," << cqm::tree::tree_distance(spec.x0, gamma) << "," << cw << ","
          << cwbar << "," << (cw - cwbar) << "\n";
    }
    return 0;
  }
  if (qm_defect->parsed()) {
    int rank = infer_rank(qm_w);
    ReducedWord w = parse_word(qm_w, rank);
    cqm::qm::QmSpec spec = cqm::qm::QmSpec::make(cqm::tree::left_multiplication_action(rank),
                                                 ReducedWord(rank), w, qm_weight);
    cqm::qm::QmFunction h(spec);
    cqm::SeededRng rng(qm_seed);
    auto sampler = [&](std::size_t) {
      ReducedWord g0 = cqm::words::random_reduced_word(rank, rng.below(static_cast<std::uint64_t>(qm_maxlen) + 1), rng);
      ReducedWord g1 = cqm::words::random_reduced_word(rank, rng.below(static_cast<std::uint64_t>(qm_maxlen) + 1), rng);
      return std::make_pair(NElement::single(g0), NElement::single(g1));
    };
    cqm::qm::DefectEstimate est =
        cqm::qm::empirical_defect(h, sampler, static_cast<std::size_t>(qm_budget));
    std::cout << "defect_lower_bound " << est.value << "\n";
    std::cout << "witness_g0 " << est.witness_g0.str() << "\n";
    std::cout << "witness_g1 " << est.witness_g1.str() << "\n";
    return 0;
  }
  if (graph_delta->parsed()) {
    std::ifstream in(graph_path, std::ios::binary);
    if (!in) throw cqm::pipeline::ConfigError("cannot open edge list: " + graph_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    cqm::spaces::FiniteGraphSpace g = cqm::spaces::FiniteGraphSpace::from_edge_list(buf.str());
    char text[32];
    std::snprintf(text, sizeof(text), "%g", cqm::spaces::delta_four_point(g));
    std::cout << "delta " << text << "\n";
    return 0;
  }
  if (pipe_run->parsed()) {
    cqm::pipeline::PipelineConfig cfg = cqm::config::load_config_file(pipe_config);
    cqm::pipeline::QmReport report;
    try {
      report = cqm::pipeline::run_report(cfg);
    } catch (const cqm::pipeline::HypothesisViolated& e) {
      std::cerr << "pipeline check failed: " << e.what() << "\n";
      return 1;
    } catch (const cqm::pipeline::ScheduleExhausted& e) {
      std::cerr << "pipeline check failed: " << e.what() << "\n";
      return 1;
    } catch (const cqm::qm::PowerSearchExhausted& e) {
      std::cerr << "pipeline check failed: " << e.what() << "\n";
      return 1;
    }
    std::string text = report.report_text();
    if (pipe_report.empty()) {
      std::cout << text;
    } else {
      write_file(pipe_report, text);
    }
    if (!pipe_csv.empty()) write_file(pipe_csv, report.csv_text());
    return report.overall ? 0 : 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const cqm::pipeline::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const cqm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
