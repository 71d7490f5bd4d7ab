#ifndef CQM_PIPELINE_HPP_
#define CQM_PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cqm/qm.hpp"
#include "cqm/tree.hpp"
#include "cqm/wreath.hpp"

// Orchestrates the whole construction on a configured group model and
// produces a machine-checked report: a commutator-subgroup basis, a good
// free basis, the inequivalence certificates for the f-sequence, the power
// choices, the per-coset counting quasimorphisms, their assembly into
// quasimorphisms on Gamma, and the finite ell^1 evaluation, with every
// numbered property verified empirically and recorded with witnesses.
namespace cqm::pipeline {

using words::NElement;
using words::ReducedWord;
using wreath::GammaElement;

struct BadBasis : Error {
  explicit BadBasis(const std::string& what) : Error(what) {}
};
struct HypothesisViolated : Error {
  explicit HypothesisViolated(const std::string& what) : Error(what) {}
};
struct ScheduleExhausted : Error {
  explicit ScheduleExhausted(const std::string& what) : Error(what) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// A concrete split model Gamma = N x| Q together with the tree N acts on.
// N is a finite direct product of free groups; the tree is the Cayley tree
// of the factor `acting_factor`, on which N acts through projection.
struct Model {
  std::string id;
  wreath::FiniteQuotient quotient;
  int acting_factor = 0;
  NElement basis_a;  // designated free basis of the factor hosting F
  NElement basis_b;

  Model(std::string id_, wreath::FiniteQuotient quotient_, int acting_factor_,
        NElement basis_a_, NElement basis_b_)
      : id(std::move(id_)),
        quotient(std::move(quotient_)),
        acting_factor(acting_factor_),
        basis_a(std::move(basis_a_)),
        basis_b(std::move(basis_b_)) {}

  int tree_rank() const {
    return quotient.factor_rank(static_cast<std::size_t>(acting_factor));
  }
  // Embeds a word of the acting factor into N.
  NElement lift_word(const ReducedWord& w) const;
  NElement parse_acting(const std::string& text) const;
  // The action twisted by the outer representative i_kappa (kappa 0-based).
  tree::TreeAction action(int kappa, const wreath::KKEmbedding& kk) const;
};

// N = F2 acting on its own Cayley tree, Q = Z/2 swapping the two
// generators.
Model model_A();
// N = F2 x F2 acting on the first factor's tree through projection,
// Q = Z/2 swapping the factors; the twisted action is elliptic on F.
Model model_B();
// Split extension of a single free factor by an explicit quotient table
// with generator images per quotient element.
Model model_custom(std::string name, std::vector<std::vector<int>> table,
                   std::vector<std::vector<ReducedWord>> images_per_q, int rank);

struct ScheduleRow {
  long long m = 0, n = 0, k = 0, l = 0, s = 0, t = 0;
  std::vector<long long> as_vector() const { return {m, n, k, l, s, t}; }
};

// Exponent data of the f-sequence: six strictly growing exponents per row,
// each at least `growth` times its predecessor, and each row starting at
// least `growth` times past the previous row's end.
struct ExponentSchedule {
  std::vector<ScheduleRow> rows;
  long long growth = 2;

  static ExponentSchedule build(const ScheduleRow& row1, long long growth, int rows);
  void validate() const;  // ConfigError naming the violated invariant
  void escalate();        // multiply every exponent by the growth factor
};

enum class ActionClass { Schottky, Elliptic };

struct ActionClassification {
  std::vector<ActionClass> tags;  // per kappa, 0-based
  int k1 = 0;                     // number of Schottky actions (a prefix)
};

struct PipelineConfig {
  std::string model_id = "A";
  int J = 3;
  int W = 1;
  int probe_cap = 20;
  std::size_t budget = 2000;
  std::uint64_t seed = 1;
  long long growth = 2;
  ScheduleRow row1{1, 2, 4, 8, 16, 32};
  long long a_max = 64;
  long long d_cap = 16;
  int retry_cap = 3;
  bool require_commutator = true;
  std::optional<std::pair<std::string, std::string>> basis_override;
  // One word of the acting factor per coset (entry 0 must be "1"): replaces
  // the coset representative g_k by (word_k, q_k).
  std::vector<std::string> conjugate_reps;
  std::vector<double> ell1_t = {1.0, 0.5, 0.25};
  // Custom model data (used when model_id == "custom").
  int custom_rank = 2;
  std::vector<std::vector<int>> custom_table;
  std::vector<std::vector<std::string>> custom_images;  // per q >= 1, per generator

  void validate() const;  // ConfigError naming the violated invariant
};

Model make_model(const PipelineConfig& config);

// A rank-2 basis inside the commutator subgroup (or a configured
// override). Verifies vanishing exponent sums (unless require_commutator is
// off) and folded rank 2.
std::pair<NElement, NElement> derive_commutator_basis(const Model& model,
                                                      const PipelineConfig& config);

// Tags every twisted action as Schottky or elliptic on the given pair;
// Schottky requires folded rank 2 of the acting images plus a bounded
// closest-point-projection spot check, elliptic requires trivial images.
ActionClassification classify_actions(const Model& model, const wreath::KKEmbedding& kk,
                                      const NElement& g1, const NElement& h1);

struct Certificate {
  int which = 9;  // 9 or 10
  int i = 0;      // 1-based
  int j = 0;      // 0 for (9)
  int sign = 0;   // +1 / -1 orientation of f_j in (10), 0 for (9)
  int kappa = 0;  // 1-based
  bool automatic = false;  // elliptic twist, inequivalence holds by type
  bool pass = false;
};

struct FSequence {
  std::vector<NElement> fs;
  ExponentSchedule schedule_used;
  int escalations = 0;
  std::vector<Certificate> certificates;
  bool certificates_pass = true;
};

// The word sequence f_j = g^-s_j h^-t_j g^m_j h^n_j g^k_j h^-l_j with
// inequivalence
// certificates checked under every Schottky twist; on failure the whole
// schedule escalates, up to retry_cap times.
FSequence build_f_sequence(const NElement& g1, const NElement& h1,
                           const ExponentSchedule& schedule, int J,
                           const std::vector<tree::TreeAction>& actions, int retry_cap);

// A quasimorphism on Gamma: h_i(mu) = sum over cosets of
// h(f_i^{d_i})(rho_mu(B_kappa)); the value depends on rho_mu only.
class GammaQm {
 public:
  GammaQm(qm::QmFunction component, const wreath::KKEmbedding* kk);

  long long operator()(const GammaElement& mu) const;
  long long on_n(const NElement& n) const;  // mu = (n, 1)
  const qm::QmFunction& component() const { return component_; }

 private:
  qm::QmFunction component_;
  const wreath::KKEmbedding* kk_;
};

GammaQm build_gamma_qm(std::size_t i, const std::vector<NElement>& fs,
                       const std::vector<long long>& ds, const Model& model,
                       const wreath::KKEmbedding& kk, int weight);

// Evaluates the finite combination h_(t) = sum t_i h_i at the given probes.
std::vector<double> ell1_evaluate(const std::vector<double>& t,
                                  const std::vector<GammaQm>& hs,
                                  const std::vector<GammaElement>& probes);

struct CheckVerdict {
  bool pass = true;
  std::string detail;
};

struct SeriesRow {
  int i = 0;
  int j = 0;
  int kappa = 0;
  long long d = 0;
  long long value = 0;
};

struct Ell1Row {
  int j = 0;
  long long d = 0;
  double value = 0;
};

struct QmReport {
  // configuration echo
  std::string model_id;
  int J = 0;
  int W = 1;
  int probe_cap = 20;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  long long growth = 2;
  ScheduleRow row1;
  std::vector<double> ell1_t;
  std::vector<std::string> conjugate_reps;

  int K = 0;
  int K1 = 0;
  std::vector<ActionClass> action_tags;

  std::string input_g1, input_h1;
  long long good_a = 0;
  std::string g1, h1;

  ExponentSchedule schedule;
  int escalations = 0;
  std::vector<long long> f_lengths;
  std::vector<long long> translation_lengths;
  std::vector<std::string> f_exponent_sums;
  std::vector<long long> d_list;

  std::vector<Certificate> certificates;
  CheckVerdict c9, c10, c11, c12, c13, c14, ell1;
  std::optional<CheckVerdict> wwpd_witness;

  std::vector<long long> defect_gamma;        // per i
  long long component_defect = 0;             // D-hat
  long long quasigeodesic_violations = 0;

  std::vector<SeriesRow> series;
  std::vector<Ell1Row> ell1_series;

  bool overall = false;

  std::string report_text() const;
  std::string csv_text() const;
};

QmReport run_report(const PipelineConfig& config);

}  // namespace cqm::pipeline

#endif  // CQM_PIPELINE_HPP_
