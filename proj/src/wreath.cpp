#include "cqm/wreath.hpp"

#include <algorithm>

namespace cqm::wreath {

using words::Letter;

FiniteQuotient::FiniteQuotient(std::vector<std::vector<int>> table,
                               std::vector<std::vector<std::vector<NElement>>> gen_images,
                               std::vector<int> factor_ranks, bool validate)
    : order_(static_cast<int>(table.size())),
      table_(std::move(table)),
      gen_images_(std::move(gen_images)),
      factor_ranks_(std::move(factor_ranks)) {
  if (order_ < 1) throw InvalidQuotient("quotient must be nonempty");
  if (validate) this->validate(SeededRng(0x51f0a3d2u));
}

int FiniteQuotient::mul(int a, int b) const {
  if (a < 0 || b < 0 || a >= order_ || b >= order_) throw BadIndex("quotient index out of range");
  return table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

int FiniteQuotient::inv(int a) const {
  for (int b = 0; b < order_; ++b) {
    if (mul(a, b) == 0) return b;
  }
  throw InvalidQuotient("element has no inverse in the table");
}

NElement FiniteQuotient::identity_element() const {
  std::vector<ReducedWord> factors;
  factors.reserve(factor_ranks_.size());
  for (int r : factor_ranks_) factors.emplace_back(r);
  return NElement(std::move(factors));
}

NElement FiniteQuotient::apply(int q, const NElement& n) const {
  if (q < 0 || q >= order_) throw BadIndex("quotient index out of range");
  if (static_cast<int>(n.factor_count()) != factor_count()) {
    throw QuotientMismatch("element shape does not match the quotient's N");
  }
  if (q == 0) return n;
  // Letterwise with stack cancellation per target factor, linear overall.
  std::vector<std::vector<Letter>> acc(static_cast<std::size_t>(factor_count()));
  const auto& images = gen_images_[static_cast<std::size_t>(q)];
  auto push = [](std::vector<Letter>& stack, Letter l) {
    if (!stack.empty() && stack.back() == words::inverse_letter(l)) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  };
  for (std::size_t f = 0; f < n.factor_count(); ++f) {
    for (Letter l : n.factor(f).letters()) {
      std::size_t gen = static_cast<std::size_t>((l > 0 ? l : -l) - 1);
      const NElement& img = images[f][gen];
      for (std::size_t tf = 0; tf < acc.size(); ++tf) {
        const auto& w = img.factor(tf).letters();
        if (l > 0) {
          for (Letter x : w) push(acc[tf], x);
        } else {
          for (auto it = w.rbegin(); it != w.rend(); ++it) {
            push(acc[tf], words::inverse_letter(*it));
          }
        }
      }
    }
  }
  std::vector<ReducedWord> factors;
  factors.reserve(acc.size());
  for (std::size_t tf = 0; tf < acc.size(); ++tf) {
    factors.push_back(
        ReducedWord::from_reduced(factor_rank(tf), std::move(acc[tf])));
  }
  return NElement(std::move(factors));
}

void FiniteQuotient::validate(SeededRng rng) const {
  const int K = order_;
  if (static_cast<int>(table_.size()) != K) throw InvalidQuotient("table is not square");
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != K) throw InvalidQuotient("table is not square");
    for (int v : row) {
      if (v < 0 || v >= K) throw InvalidQuotient("table entry out of range");
    }
  }
  for (int a = 0; a < K; ++a) {
    if (mul(0, a) != a || mul(a, 0) != a) throw InvalidQuotient("index 0 is not an identity");
  }
  for (int a = 0; a < K; ++a) {
    bool has_inverse = false;
    for (int b = 0; b < K; ++b) has_inverse = has_inverse || mul(a, b) == 0;
    if (!has_inverse) throw InvalidQuotient("table has a non-invertible element");
  }
  for (int a = 0; a < K; ++a) {
    for (int b = 0; b < K; ++b) {
      for (int c = 0; c < K; ++c) {
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) {
          throw InvalidQuotient("table is not associative");
        }
      }
    }
  }

  if (static_cast<int>(gen_images_.size()) != K) {
    throw InvalidQuotient("need one image family per quotient element");
  }
  for (int q = 0; q < K; ++q) {
    const auto& fam = gen_images_[static_cast<std::size_t>(q)];
    if (static_cast<int>(fam.size()) != factor_count()) {
      throw InvalidQuotient("image family has wrong factor count");
    }
    for (int f = 0; f < factor_count(); ++f) {
      if (static_cast<int>(fam[static_cast<std::size_t>(f)].size()) !=
          factor_ranks_[static_cast<std::size_t>(f)]) {
        throw InvalidQuotient("image family has wrong generator count");
      }
    }
  }
  // q = 0 must act as the identity automorphism.
  for (int f = 0; f < factor_count(); ++f) {
    for (int g = 0; g < factor_ranks_[static_cast<std::size_t>(f)]; ++g) {
      NElement expect = identity_element();
      std::vector<ReducedWord> factors = expect.factors();
      factors[static_cast<std::size_t>(f)] = ReducedWord::parse(
          factor_ranks_[static_cast<std::size_t>(f)], std::string(1, words::letter_to_char(
                                                          static_cast<Letter>(g + 1))));
      if (gen_images_[0][static_cast<std::size_t>(f)][static_cast<std::size_t>(g)] !=
          NElement(factors)) {
        throw InvalidQuotient("index 0 must carry the identity automorphism");
      }
    }
  }

  // Each q-action is multiplicative (it is defined letterwise, so this is a
  // consistency check of apply), is invertible via the inverse table entry,
  // and q -> action is a homomorphism on all pairs of Q.
  auto random_element = [&](SeededRng& r) {
    std::vector<ReducedWord> factors;
    for (int rank : factor_ranks_) {
      factors.push_back(words::random_reduced_word(rank, r.below(7), r));
    }
    return NElement(std::move(factors));
  };
  constexpr int samples = 1000;
  for (int i = 0; i < samples; ++i) {
    NElement u = random_element(rng);
    NElement v = random_element(rng);
    for (int q = 0; q < K; ++q) {
      if (apply(q, words::multiply(u, v)) != words::multiply(apply(q, u), apply(q, v))) {
        throw InvalidQuotient("action of q is not multiplicative");
      }
      if (apply(inv(q), apply(q, u)) != u) {
        throw InvalidQuotient("action of q is not invertible by q^-1");
      }
    }
    for (int a = 0; a < K; ++a) {
      for (int b = 0; b < K; ++b) {
        if (apply(mul(a, b), u) != apply(a, apply(b, u))) {
          throw InvalidQuotient("q -> action is not a homomorphism");
        }
      }
    }
  }
}

GammaElement GammaContext::mul(const GammaElement& a, const GammaElement& b) const {
  return GammaElement{words::multiply(a.n, quotient_->apply(a.q, b.n)),
                      quotient_->mul(a.q, b.q)};
}

GammaElement GammaContext::inv(const GammaElement& a) const {
  int qi = quotient_->inv(a.q);
  return GammaElement{quotient_->apply(qi, words::inverse(a.n)), qi};
}

bool wreath_equal(const WreathElement& a, const WreathElement& b) {
  return a.rho == b.rho && a.phi == b.phi;
}

WreathElement wreath_mul(const WreathElement& x, const WreathElement& y) {
  if (x.phi.size() != y.phi.size()) {
    throw QuotientMismatch("wreath elements over different quotients");
  }
  const std::size_t K = x.phi.size();
  WreathElement out;
  out.rho.reserve(K);
  out.phi.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    out.rho.push_back(
        words::multiply(x.rho[k], y.rho[static_cast<std::size_t>(x.phi[k])]));
    out.phi[k] = y.phi[static_cast<std::size_t>(x.phi[k])];
  }
  return out;
}

WreathElement wreath_identity(const FiniteQuotient& q) {
  WreathElement e;
  e.rho.assign(static_cast<std::size_t>(q.order()), q.identity_element());
  e.phi.resize(static_cast<std::size_t>(q.order()));
  for (int k = 0; k < q.order(); ++k) e.phi[static_cast<std::size_t>(k)] = k;
  return e;
}

KKEmbedding::KKEmbedding(const GammaContext* ctx) : ctx_(ctx) {
  const FiniteQuotient& q = ctx->quotient();
  reps_.reserve(static_cast<std::size_t>(q.order()));
  for (int k = 0; k < q.order(); ++k) {
    reps_.push_back(GammaElement{q.identity_element(), k});
  }
}

KKEmbedding::KKEmbedding(const GammaContext* ctx, std::vector<GammaElement> reps)
    : ctx_(ctx), reps_(std::move(reps)) {
  const FiniteQuotient& q = ctx->quotient();
  if (static_cast<int>(reps_.size()) != q.order()) {
    throw BadIndex("need one representative per coset");
  }
  for (int k = 0; k < q.order(); ++k) {
    if (reps_[static_cast<std::size_t>(k)].q != k) {
      throw BadIndex("representative " + std::to_string(k) + " lies in the wrong coset");
    }
  }
  if (!reps_[0].n.is_identity()) {
    throw BadIndex("the representative of N itself must be the identity");
  }
}

const GammaElement& KKEmbedding::rep(int kappa) const {
  if (kappa < 0 || kappa >= static_cast<int>(reps_.size())) {
    throw BadIndex("coset index out of range: " + std::to_string(kappa));
  }
  return reps_[static_cast<std::size_t>(kappa)];
}

WreathElement KKEmbedding::embed(const GammaElement& mu) const {
  const FiniteQuotient& q = ctx_->quotient();
  const int K = q.order();
  WreathElement out;
  out.rho.reserve(static_cast<std::size_t>(K));
  out.phi.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    // B_k mu is the coset indexed by q_k q_mu.
    int img = q.mul(k, mu.q);
    out.phi[static_cast<std::size_t>(k)] = img;
    GammaElement r = ctx_->mul(ctx_->mul(rep(k), mu), ctx_->inv(rep(img)));
    if (r.q != 0) throw Error("kk_embed: rho value left N; inconsistent representatives");
    out.rho.push_back(r.n);
  }
  return out;
}

NElement KKEmbedding::outer_rep(int kappa, const NElement& n) const {
  const GammaElement& g = rep(kappa);
  GammaElement r = ctx_->mul(ctx_->mul(g, ctx_->from_n(n)), ctx_->inv(g));
  if (r.q != 0) throw Error("outer_rep: conjugate left N");
  return r.n;
}

EmbeddingReport verify_embedding(const GammaContext& ctx, const KKEmbedding& kk,
                                 std::size_t sample_size, SeededRng rng) {
  if (sample_size < 1) throw Error("verify_embedding: sample_size must be >= 1");
  const FiniteQuotient& q = ctx.quotient();
  EmbeddingReport report;

  auto random_gamma = [&](SeededRng& r) {
    std::vector<ReducedWord> factors;
    for (int f = 0; f < q.factor_count(); ++f) {
      factors.push_back(
          words::random_reduced_word(q.factor_rank(static_cast<std::size_t>(f)), r.below(6), r));
    }
    return GammaElement{NElement(std::move(factors)),
                        static_cast<int>(r.below(static_cast<std::uint64_t>(q.order())))};
  };

  for (std::size_t i = 0; i < sample_size && report.pass; ++i) {
    GammaElement mu = random_gamma(rng);
    GammaElement nu = random_gamma(rng);
    ++report.homomorphism_checks;
    if (!wreath_equal(kk.embed(ctx.mul(mu, nu)), wreath_mul(kk.embed(mu), kk.embed(nu)))) {
      report.pass = false;
      report.counterexample =
          "theta(mu nu) != theta(mu) theta(nu) for mu = (" + mu.n.str() + ", q" +
          std::to_string(mu.q) + "), nu = (" + nu.n.str() + ", q" + std::to_string(nu.q) + ")";
      break;
    }
    ++report.injectivity_checks;
    if (!ctx.equal(mu, nu) && wreath_equal(kk.embed(mu), kk.embed(nu))) {
      report.pass = false;
      report.counterexample = "theta collides on distinct elements (" + mu.n.str() + ", q" +
                              std::to_string(mu.q) + ") and (" + nu.n.str() + ", q" +
                              std::to_string(nu.q) + ")";
      break;
    }
    // Kernel argument: phi is trivial iff the element lies in N, and for
    // n in N the value rho(B_1) recovers n itself.
    ++report.kernel_checks;
    WreathElement theta_mu = kk.embed(mu);
    bool phi_trivial = true;
    for (int k = 0; k < q.order(); ++k) {
      phi_trivial = phi_trivial && theta_mu.phi[static_cast<std::size_t>(k)] == k;
    }
    if (phi_trivial != (mu.q == 0)) {
      report.pass = false;
      report.counterexample = "phi_mu triviality disagrees with mu in N for (" + mu.n.str() +
                              ", q" + std::to_string(mu.q) + ")";
      break;
    }
    GammaElement n_only = ctx.from_n(mu.n);
    if (kk.embed(n_only).rho[0] != mu.n) {
      report.pass = false;
      report.counterexample = "rho_n(B_1) != n for n = " + mu.n.str();
      break;
    }
  }
  return report;
}

}  // namespace cqm::wreath
