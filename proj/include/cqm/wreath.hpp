#ifndef CQM_WREATH_HPP_
#define CQM_WREATH_HPP_

#include <string>
#include <vector>

#include "cqm/rng.hpp"
#include "cqm/words.hpp"

// The group Gamma = N x| Q for a finite quotient Q acting on N by
// automorphisms, coset bookkeeping, outer representatives, the
// Kaloujnin-Krasner embedding theta into N^Q x| Sym(Q), and wreath-product
// arithmetic.
//
// Conventions. Elements of the wreath product are pairs (rho, phi) with
// rho : Q -> N and phi a permutation of Q, multiplying as
//     (rho, phi) . (sigma, psi) = (rho . (sigma o phi), psi phi)
// (note the reversal of order in the second coordinate). With right cosets
// B = N g and representatives g_B (g_N = identity), the embedding is
//     rho_mu(B) = g_B mu g_{B mu}^-1,   phi_mu(B) = B mu.
namespace cqm::wreath {

using words::NElement;
using words::ReducedWord;

struct QuotientMismatch : Error {
  explicit QuotientMismatch(const std::string& what) : Error(what) {}
};
struct BadIndex : Error {
  explicit BadIndex(const std::string& what) : Error(what) {}
};
struct InvalidQuotient : Error {
  explicit InvalidQuotient(const std::string& what) : Error(what) {}
};

// A finite group Q given by its multiplication table, acting on N (a finite
// direct product of free groups) by automorphisms: per q, the image of each
// generator of each factor.
class FiniteQuotient {
 public:
  // table[i][j] = index of q_i q_j; identity must be index 0.
  // gen_images[q][factor][gen] = image of that generator under q's
  // automorphism. Validation checks the group axioms exhaustively and the
  // automorphism laws on deterministic random samples; pass validate=false
  // only to construct deliberately broken tables in negative tests.
  FiniteQuotient(std::vector<std::vector<int>> table,
                 std::vector<std::vector<std::vector<NElement>>> gen_images,
                 std::vector<int> factor_ranks, bool validate = true);

  int order() const { return order_; }
  int identity() const { return 0; }
  int mul(int a, int b) const;
  int inv(int a) const;
  int factor_count() const { return static_cast<int>(factor_ranks_.size()); }
  int factor_rank(std::size_t i) const { return factor_ranks_[i]; }
  NElement identity_element() const;

  // Applies q's automorphism letter by letter.
  NElement apply(int q, const NElement& n) const;

  void validate(SeededRng rng) const;

 private:
  int order_ = 0;
  std::vector<std::vector<int>> table_;
  std::vector<std::vector<std::vector<NElement>>> gen_images_;
  std::vector<int> factor_ranks_;
};

// An element (n, q) of Gamma = N x| Q with (n,q)(n',q') = (n . q(n'), qq').
struct GammaElement {
  NElement n;
  int q = 0;
};

class GammaContext {
 public:
  explicit GammaContext(const FiniteQuotient* quotient) : quotient_(quotient) {}

  const FiniteQuotient& quotient() const { return *quotient_; }
  GammaElement identity() const { return GammaElement{quotient_->identity_element(), 0}; }
  GammaElement from_n(const NElement& n) const { return GammaElement{n, 0}; }
  GammaElement mul(const GammaElement& a, const GammaElement& b) const;
  GammaElement inv(const GammaElement& a) const;
  bool equal(const GammaElement& a, const GammaElement& b) const {
    return a.q == b.q && a.n == b.n;
  }

 private:
  const FiniteQuotient* quotient_;
};

// An element (rho, phi) of N^Q x| Sym(Q); rho[k] is the value on the coset
// B_k and phi[k] the index of B_k's image.
struct WreathElement {
  std::vector<NElement> rho;
  std::vector<int> phi;
};

bool wreath_equal(const WreathElement& a, const WreathElement& b);
WreathElement wreath_mul(const WreathElement& x, const WreathElement& y);
WreathElement wreath_identity(const FiniteQuotient& q);

// The Kaloujnin-Krasner embedding for a fixed choice of coset
// representatives g_k (defaults to g_k = (identity, q_k), with g_1 = id).
// Replacing representatives changes each outer automorphism by an inner
// one; pipeline verdicts are invariant under that change.
class KKEmbedding {
 public:
  explicit KKEmbedding(const GammaContext* ctx);
  KKEmbedding(const GammaContext* ctx, std::vector<GammaElement> reps);

  const GammaContext& context() const { return *ctx_; }
  const GammaElement& rep(int kappa) const;

  WreathElement embed(const GammaElement& mu) const;
  // Outer representative i_k(n) = g_k n g_k^-1, an automorphism of N.
  NElement outer_rep(int kappa, const NElement& n) const;

 private:
  const GammaContext* ctx_;
  std::vector<GammaElement> reps_;
};

struct EmbeddingReport {
  bool pass = true;
  long long homomorphism_checks = 0;
  long long injectivity_checks = 0;
  long long kernel_checks = 0;
  std::string counterexample;  // empty when pass
};

// Checks theta(mu nu) = theta(mu) theta(nu) on sampled pairs, injectivity on
// sampled distinct pairs, and the kernel argument (phi_mu trivial iff mu in
// N, and then rho_mu(N) = mu) on sampled N-elements.
EmbeddingReport verify_embedding(const GammaContext& ctx, const KKEmbedding& kk,
                                 std::size_t sample_size, SeededRng rng);

}  // namespace cqm::wreath

#endif  // CQM_WREATH_HPP_
