#include "cqm/words.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace cqm::words {

namespace {

void check_rank(int rank) {
  if (rank < 1 || rank > max_rank) {
    throw InvalidLetter("rank must be between 1 and 26, got " + std::to_string(rank));
  }
}

void check_letter(Letter l, int rank) {
  int idx = l > 0 ? l : -l;
  if (idx < 1 || idx > rank) {
    throw InvalidLetter("letter index " + std::to_string(idx) + " outside rank " +
                        std::to_string(rank));
  }
}

}  // namespace

char letter_to_char(Letter l) {
  return l > 0 ? static_cast<char>('a' + l - 1) : static_cast<char>('A' - l - 1);
}

Letter char_to_letter(char c, int rank) {
  Letter l;
  if (c >= 'a' && c <= 'z') {
    l = static_cast<Letter>(c - 'a' + 1);
  } else if (c >= 'A' && c <= 'Z') {
    l = static_cast<Letter>(-(c - 'A' + 1));
  } else {
    throw InvalidLetter(std::string("invalid letter '") + c + "'");
  }
  check_letter(l, rank);
  return l;
}

ReducedWord ReducedWord::reduce(int rank, std::span<const Letter> raw) {
  check_rank(rank);
  ReducedWord w(rank);
  w.letters_.reserve(raw.size());
  for (Letter l : raw) {
    check_letter(l, rank);
    if (!w.letters_.empty() && w.letters_.back() == inverse_letter(l)) {
      w.letters_.pop_back();
    } else {
      w.letters_.push_back(l);
    }
  }
  return w;
}

ReducedWord ReducedWord::parse(int rank, std::string_view text) {
  std::vector<Letter> raw;
  raw.reserve(text.size());
  for (char c : text) raw.push_back(char_to_letter(c, rank));
  return reduce(rank, raw);
}

ReducedWord ReducedWord::from_reduced(int rank, std::vector<Letter> letters) {
  check_rank(rank);
  ReducedWord w(rank);
  for (std::size_t i = 0; i < letters.size(); ++i) {
    check_letter(letters[i], rank);
    if (i > 0 && letters[i] == inverse_letter(letters[i - 1])) {
      throw InvalidLetter("sequence is not freely reduced at position " + std::to_string(i));
    }
  }
  w.letters_ = std::move(letters);
  return w;
}

std::string ReducedWord::str() const {
  std::string s;
  s.reserve(letters_.size());
  for (Letter l : letters_) s.push_back(letter_to_char(l));
  return s;
}

void require_same_rank(const ReducedWord& u, const ReducedWord& v) {
  if (u.rank() != v.rank()) {
    throw RankMismatch("rank mismatch: " + std::to_string(u.rank()) + " vs " +
                       std::to_string(v.rank()));
  }
}

ReducedWord multiply(const ReducedWord& u, const ReducedWord& v) {
  require_same_rank(u, v);
  const auto& a = u.letters();
  const auto& b = v.letters();
  std::size_t i = a.size(), j = 0;
  while (i > 0 && j < b.size() && a[i - 1] == inverse_letter(b[j])) {
    --i;
    ++j;
  }
  std::vector<Letter> out;
  out.reserve(i + b.size() - j);
  out.insert(out.end(), a.begin(), a.begin() + static_cast<std::ptrdiff_t>(i));
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
  return ReducedWord::from_reduced(u.rank(), std::move(out));
}

ReducedWord inverse(const ReducedWord& u) {
  std::vector<Letter> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = inverse_letter(u.at(u.size() - 1 - i));
  }
  return ReducedWord::from_reduced(u.rank(), std::move(out));
}

ReducedWord power(const ReducedWord& u, long long e) {
  if (e == 0 || u.empty()) return ReducedWord(u.rank() == 0 ? 1 : u.rank());
  const bool neg = e < 0;
  const unsigned long long n = neg ? static_cast<unsigned long long>(-e)
                                   : static_cast<unsigned long long>(e);
  CyclicReduction cr = cyclic_reduce(u);
  const auto& core = cr.core.letters();
  std::vector<Letter> mid;
  mid.reserve(core.size() * n);
  for (unsigned long long i = 0; i < n; ++i) mid.insert(mid.end(), core.begin(), core.end());
  ReducedWord core_pow = ReducedWord::from_reduced(u.rank(), std::move(mid));
  if (neg) core_pow = inverse(core_pow);
  return multiply(multiply(cr.conjugator, core_pow), inverse(cr.conjugator));
}

ReducedWord concat_all(std::span<const ReducedWord> parts) {
  if (parts.empty()) return ReducedWord(1);
  ReducedWord acc = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) acc = multiply(acc, parts[i]);
  return acc;
}

namespace {

// Booth's least-rotation algorithm, O(n). Letters compare by their signed
// encoding, which is an arbitrary but fixed total order.
std::size_t least_rotation_index(std::span<const Letter> s) {
  const std::size_t n = s.size();
  auto at = [&](std::size_t i) { return s[i % n]; };
  std::vector<std::ptrdiff_t> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    Letter sj = at(j);
    std::ptrdiff_t i = f[j - k - 1];
    while (i != -1 && sj != at(k + static_cast<std::size_t>(i) + 1)) {
      if (sj < at(k + static_cast<std::size_t>(i) + 1)) k = j - static_cast<std::size_t>(i) - 1;
      i = f[static_cast<std::size_t>(i)];
    }
    if (i == -1 && sj != at(k + static_cast<std::size_t>(i) + 1)) {
      if (sj < at(k + static_cast<std::size_t>(i) + 1)) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  return k;
}

}  // namespace

CyclicWord CyclicWord::from_cyclically_reduced(int rank, std::vector<Letter> letters) {
  check_rank(rank);
  if (letters.empty()) throw EmptyWord("cyclic word must be nonempty");
  for (std::size_t i = 0; i < letters.size(); ++i) {
    check_letter(letters[i], rank);
    Letter next = letters[(i + 1) % letters.size()];
    if (letters.size() >= 2 && next == inverse_letter(letters[i])) {
      throw InvalidLetter("sequence is not cyclically reduced");
    }
  }
  CyclicWord c;
  c.rank_ = rank;
  std::size_t k = least_rotation_index(letters);
  c.canon_.reserve(letters.size());
  for (std::size_t i = 0; i < letters.size(); ++i) {
    c.canon_.push_back(letters[(k + i) % letters.size()]);
  }
  return c;
}

std::string CyclicWord::str() const {
  std::string s;
  s.reserve(canon_.size());
  for (Letter l : canon_) s.push_back(letter_to_char(l));
  return s;
}

CyclicWord CyclicReduction::core_cyclic() const {
  if (core.empty()) throw EmptyWord("identity has no cyclic core");
  return CyclicWord::from_cyclically_reduced(core.rank(), core.letters());
}

CyclicReduction cyclic_reduce(const ReducedWord& u) {
  const auto& a = u.letters();
  std::size_t lo = 0, hi = a.size();
  while (hi - lo >= 2 && a[lo] == inverse_letter(a[hi - 1])) {
    ++lo;
    --hi;
  }
  CyclicReduction out;
  out.conjugator = ReducedWord::from_reduced(
      u.rank(), std::vector<Letter>(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(lo)));
  out.core = ReducedWord::from_reduced(
      u.rank(), std::vector<Letter>(a.begin() + static_cast<std::ptrdiff_t>(lo),
                                    a.begin() + static_cast<std::ptrdiff_t>(hi)));
  return out;
}

bool is_cyclically_reduced(const ReducedWord& u) {
  if (u.size() < 2) return true;
  return u.at(0) != inverse_letter(u.at(u.size() - 1));
}

PrimitiveRoot primitive_root_letters(int rank, std::span<const Letter> cyc) {
  check_rank(rank);
  const std::size_t n = cyc.size();
  if (n == 0) throw EmptyWord("primitive root of the empty word");
  for (std::size_t p = 1; p <= n / 2; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n; ++i) {
      if (cyc[i] != cyc[i - p]) {
        periodic = false;
        break;
      }
    }
    if (periodic) {
      return PrimitiveRoot{std::vector<Letter>(cyc.begin(), cyc.begin() + static_cast<std::ptrdiff_t>(p)),
                           static_cast<int>(n / p)};
    }
  }
  return PrimitiveRoot{std::vector<Letter>(cyc.begin(), cyc.end()), 1};
}

std::pair<CyclicWord, int> primitive_root(const CyclicWord& c) {
  PrimitiveRoot pr = primitive_root_letters(c.rank(), c.canonical());
  return {CyclicWord::from_cyclically_reduced(c.rank(), std::move(pr.root_letters)), pr.exponent};
}

bool cyclic_equal(const CyclicWord& a, const CyclicWord& b) {
  if (a.rank() != b.rank()) {
    throw RankMismatch("cyclic_equal: rank mismatch");
  }
  return a.canonical() == b.canonical();
}

std::vector<long long> exponent_sums(const ReducedWord& u) {
  std::vector<long long> sums(static_cast<std::size_t>(u.rank()), 0);
  for (Letter l : u.letters()) {
    if (l > 0) {
      ++sums[static_cast<std::size_t>(l - 1)];
    } else {
      --sums[static_cast<std::size_t>(-l - 1)];
    }
  }
  return sums;
}

ReducedWord random_reduced_word(int rank, std::size_t length, SeededRng& rng) {
  check_rank(rank);
  std::vector<Letter> out;
  out.reserve(length);
  while (out.size() < length) {
    Letter candidates[2 * max_rank];
    int count = 0;
    for (int i = 1; i <= rank; ++i) {
      for (Letter l : {static_cast<Letter>(i), static_cast<Letter>(-i)}) {
        if (out.empty() || l != inverse_letter(out.back())) candidates[count++] = l;
      }
    }
    out.push_back(candidates[rng.below(static_cast<std::uint64_t>(count))]);
  }
  return ReducedWord::from_reduced(rank, std::move(out));
}

NElement NElement::identity_like(const NElement& shape) {
  std::vector<ReducedWord> f;
  f.reserve(shape.factor_count());
  for (const auto& w : shape.factors()) f.emplace_back(w.rank());
  return NElement(std::move(f));
}

bool NElement::is_identity() const {
  for (const auto& w : factors_) {
    if (!w.empty()) return false;
  }
  return true;
}

std::size_t NElement::total_length() const {
  std::size_t n = 0;
  for (const auto& w : factors_) n += w.size();
  return n;
}

std::string NElement::str() const {
  std::string s;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i > 0) s.push_back(',');
    s += factors_[i].empty() ? std::string("1") : factors_[i].str();
  }
  return s;
}

namespace {
void require_same_shape(const NElement& u, const NElement& v) {
  if (u.factor_count() != v.factor_count()) {
    throw RankMismatch("direct-product elements have different factor counts");
  }
}
}  // namespace

NElement multiply(const NElement& u, const NElement& v) {
  require_same_shape(u, v);
  std::vector<ReducedWord> f;
  f.reserve(u.factor_count());
  for (std::size_t i = 0; i < u.factor_count(); ++i) {
    f.push_back(multiply(u.factor(i), v.factor(i)));
  }
  return NElement(std::move(f));
}

NElement inverse(const NElement& u) {
  std::vector<ReducedWord> f;
  f.reserve(u.factor_count());
  for (const auto& w : u.factors()) f.push_back(inverse(w));
  return NElement(std::move(f));
}

NElement power(const NElement& u, long long e) {
  std::vector<ReducedWord> f;
  f.reserve(u.factor_count());
  for (const auto& w : u.factors()) f.push_back(power(w, e));
  return NElement(std::move(f));
}

NElement commutator(const NElement& u, const NElement& v) {
  return multiply(multiply(u, v), multiply(inverse(u), inverse(v)));
}

std::vector<long long> exponent_sums(const NElement& u) {
  std::vector<long long> all;
  for (const auto& w : u.factors()) {
    auto s = exponent_sums(w);
    all.insert(all.end(), s.begin(), s.end());
  }
  return all;
}

}  // namespace cqm::words
