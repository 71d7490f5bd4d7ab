#ifndef CQM_WORDS_HPP_
#define CQM_WORDS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cqm/errors.hpp"
#include "cqm/rng.hpp"

// Exact free-group word algebra: reduction, multiplication, cyclic
// reduction, primitive roots, conjugacy of cyclic words, exponent sums.
//
// Textual convention: lowercase letters a, b, ... denote generators,
// the corresponding uppercase letters denote their inverses, and the
// empty string is the identity.
namespace cqm::words {

// Signed generator index: +i is the i-th generator (1-based), -i its inverse.
using Letter = std::int8_t;

constexpr int max_rank = 26;

inline Letter inverse_letter(Letter l) { return static_cast<Letter>(-l); }

struct InvalidLetter : Error {
  explicit InvalidLetter(const std::string& what) : Error(what) {}
};
struct RankMismatch : Error {
  explicit RankMismatch(const std::string& what) : Error(what) {}
};
struct EmptyWord : Error {
  explicit EmptyWord(const std::string& what) : Error(what) {}
};

// A freely reduced word in the free group of a fixed rank. Immutable.
class ReducedWord {
 public:
  ReducedWord() : rank_(0) {}
  explicit ReducedWord(int rank) : rank_(rank) {}

  // Applies maximal free cancellation to a raw letter sequence. Idempotent.
  static ReducedWord reduce(int rank, std::span<const Letter> raw);

  // Parses the textual convention above. Rank must cover every letter used.
  static ReducedWord parse(int rank, std::string_view text);

  // Wraps a sequence that is already freely reduced (checked).
  static ReducedWord from_reduced(int rank, std::vector<Letter> letters);

  int rank() const { return rank_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter at(std::size_t i) const { return letters_[i]; }
  const std::vector<Letter>& letters() const { return letters_; }

  std::string str() const;

  friend bool operator==(const ReducedWord& a, const ReducedWord& b) {
    return a.rank_ == b.rank_ && a.letters_ == b.letters_;
  }
  friend bool operator!=(const ReducedWord& a, const ReducedWord& b) { return !(a == b); }

 private:
  int rank_;
  std::vector<Letter> letters_;
};

char letter_to_char(Letter l);
Letter char_to_letter(char c, int rank);

void require_same_rank(const ReducedWord& u, const ReducedWord& v);

// result = reduce(u ++ v); cancellation happens only at the junction.
ReducedWord multiply(const ReducedWord& u, const ReducedWord& v);
ReducedWord inverse(const ReducedWord& u);
// u^e for any integer e, via cyclic decomposition (linear in the output).
ReducedWord power(const ReducedWord& u, long long e);

ReducedWord concat_all(std::span<const ReducedWord> parts);

// A conjugacy class of a nontrivial element, stored as the lexicographically
// least rotation of a cyclically reduced representative; equality of cyclic
// words is letter identity of those canonical rotations.
class CyclicWord {
 public:
  // `letters` must be nonempty and cyclically reduced.
  static CyclicWord from_cyclically_reduced(int rank, std::vector<Letter> letters);

  int rank() const { return rank_; }
  std::size_t size() const { return canon_.size(); }
  const std::vector<Letter>& canonical() const { return canon_; }
  std::string str() const;

  friend bool operator==(const CyclicWord& a, const CyclicWord& b) {
    return a.rank_ == b.rank_ && a.canon_ == b.canon_;
  }
  friend bool operator!=(const CyclicWord& a, const CyclicWord& b) { return !(a == b); }

 private:
  CyclicWord() : rank_(0) {}
  int rank_;
  std::vector<Letter> canon_;
};

// u = conjugator * core * conjugator^-1 with all products reduced as
// written; core is cyclically reduced (empty iff u is the identity) and the
// conjugator is the shortest possible. The core keeps the rotation the
// decomposition lands on; use core_cyclic() for the conjugacy class.
struct CyclicReduction {
  ReducedWord conjugator;
  ReducedWord core;
  bool is_identity() const { return core.empty(); }
  CyclicWord core_cyclic() const;
};

CyclicReduction cyclic_reduce(const ReducedWord& u);

bool is_cyclically_reduced(const ReducedWord& u);

// c = root^exponent with root of minimal length. Throws EmptyWord on the
// identity. The root keeps c's rotation at the cut, so root^exponent
// reassembles c letter for letter.
struct PrimitiveRoot {
  std::vector<Letter> root_letters;
  int exponent;
};
PrimitiveRoot primitive_root_letters(int rank, std::span<const Letter> cyc);
std::pair<CyclicWord, int> primitive_root(const CyclicWord& c);

bool cyclic_equal(const CyclicWord& a, const CyclicWord& b);

// Signed letter counts per generator; zero vector iff u lies in the
// commutator subgroup.
std::vector<long long> exponent_sums(const ReducedWord& u);

// Random reduced word of exactly the given length (no cancellations).
ReducedWord random_reduced_word(int rank, std::size_t length, SeededRng& rng);

// An element of a finite direct product of free groups; the carrier for N
// in the group models (one factor for a plain free group, two for a
// product such as F2 x F2). Group operations are componentwise.
class NElement {
 public:
  NElement() = default;
  explicit NElement(std::vector<ReducedWord> factors) : factors_(std::move(factors)) {}
  static NElement single(ReducedWord w) { return NElement({std::move(w)}); }
  static NElement identity_like(const NElement& shape);

  std::size_t factor_count() const { return factors_.size(); }
  const ReducedWord& factor(std::size_t i) const { return factors_[i]; }
  const std::vector<ReducedWord>& factors() const { return factors_; }
  bool is_identity() const;
  std::size_t total_length() const;
  std::string str() const;  // factors joined by ','; identity factor prints as 1

  friend bool operator==(const NElement& a, const NElement& b) {
    return a.factors_ == b.factors_;
  }
  friend bool operator!=(const NElement& a, const NElement& b) { return !(a == b); }

 private:
  std::vector<ReducedWord> factors_;
};

NElement multiply(const NElement& u, const NElement& v);
NElement inverse(const NElement& u);
NElement power(const NElement& u, long long e);
NElement commutator(const NElement& u, const NElement& v);
std::vector<long long> exponent_sums(const NElement& u);

}  // namespace cqm::words

#endif  // CQM_WORDS_HPP_
