#pragma once

// Cyclic words over the rank-2 alphabet {a, A, b, B} and canonical
// unoriented conjugacy-class keys.
//
// Letters are stored as 2-bit codes a=0, A=1, b=2, B=3 (one per byte), so the
// inverse of a letter is `code ^ 1` and byte-wise comparison of the storage
// string is the fixed letter order a < A < b < B.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curves/error.hpp"

namespace curves {

enum class Letter : std::uint8_t { a = 0, A = 1, b = 2, B = 3 };

constexpr Letter inverse(Letter x) { return static_cast<Letter>(static_cast<std::uint8_t>(x) ^ 1u); }
constexpr std::uint8_t code(Letter x) { return static_cast<std::uint8_t>(x); }

char to_char(Letter x);
/// Throws Error(parse) for anything outside {a, A, b, B}.
Letter letter_from_char(char c);
std::vector<Letter> parse_letters(std::string_view text);

/// A cyclically reduced word, read cyclically. Always nonempty.
class CyclicWord {
 public:
  /// Wraps letter codes that are already cyclically reduced; throws otherwise.
  static CyclicWord from_codes(std::string codes);

  std::size_t size() const { return codes_.size(); }
  Letter operator[](std::size_t i) const { return static_cast<Letter>(codes_[i]); }
  /// Letter at cyclic position i (any integer, wraps both ways).
  Letter at_cyclic(std::ptrdiff_t i) const;

  const std::string& codes() const { return codes_; }
  std::string str() const;

  auto operator<=>(const CyclicWord&) const = default;

 private:
  explicit CyclicWord(std::string codes) : codes_(std::move(codes)) {}
  friend CyclicWord reduce(std::span<const Letter> raw);
  friend CyclicWord reduce_codes(std::string_view raw);
  std::string codes_;
};

/// Free and cyclic reduction. Throws Error(empty_after_reduction) on the identity.
CyclicWord reduce(std::span<const Letter> raw);
/// Same as reduce() for a string of letter codes (0..3).
CyclicWord reduce_codes(std::string_view raw);
/// parse_letters + reduce.
CyclicWord parse_word(std::string_view text);

CyclicWord inverse(const CyclicWord& w);
CyclicWord rotate(const CyclicWord& w, std::size_t shift);

/// Canonical representative of an unoriented free homotopy class.
/// Ordered by length first, then lexicographically (a < A < b < B).
class ClassKey {
 public:
  const CyclicWord& word() const { return word_; }
  std::size_t size() const { return word_.size(); }
  const std::string& codes() const { return word_.codes(); }
  std::string str() const { return word_.str(); }

  bool operator==(const ClassKey&) const = default;
  std::strong_ordering operator<=>(const ClassKey& other) const;

 private:
  explicit ClassKey(CyclicWord w) : word_(std::move(w)) {}
  friend ClassKey canonical(const CyclicWord& w);
  CyclicWord word_;
};

ClassKey canonical(const CyclicWord& w);
/// parse_word + canonical.
ClassKey parse_class(std::string_view text);

/// Index of the lexicographically least rotation of `s` (Booth-style two-pointer scan).
std::size_t least_rotation(std::string_view s);

/// True iff w is not a proper power u^k, k >= 2.
bool is_primitive(const CyclicWord& w);
inline bool is_primitive(const ClassKey& k) { return is_primitive(k.word()); }

struct EnumerationLimits {
  /// Upper bound on how many classes an enumeration may produce or hold.
  std::uint64_t max_members = 50'000'000;
};

/// Approximate number of classes of word length <= max_len (used for budgeting).
double estimated_class_count(std::size_t max_len);

/// Emits every ClassKey of length <= max_len exactly once, length-then-lex order.
/// Non-primitive classes are included. Throws Error(cap_too_large) when the
/// estimate exceeds limits.max_members.
void enumerate_classes(std::size_t max_len, const std::function<void(const ClassKey&)>& emit,
                       const EnumerationLimits& limits = {});
std::vector<ClassKey> classes_up_to(std::size_t max_len, const EnumerationLimits& limits = {});

// Euler totient.

/// Sieved table of Phi(0..limit); Phi(1) = 1.
class TotientTable {
 public:
  explicit TotientTable(std::uint32_t limit);
  std::uint32_t limit() const { return static_cast<std::uint32_t>(phi_.size() - 1); }
  std::uint64_t operator()(std::int64_t n) const;

  /// Process-wide table (built once, read-only afterwards).
  static const TotientTable& shared();

 private:
  std::vector<std::uint32_t> phi_;
};

/// Phi(n) for n >= 1, 0 for n <= 0.
std::uint64_t totient(std::int64_t n);
/// Phi((num)/(den)): 0 unless the quotient is a positive integer.
std::uint64_t totient_of_quotient(std::int64_t num, std::int64_t den);
/// Sum over n = 1..l of 2 Phi(n).
std::uint64_t summatory(std::int64_t l);

}  // namespace curves

template <>
struct std::hash<curves::ClassKey> {
  std::size_t operator()(const curves::ClassKey& k) const noexcept {
    return std::hash<std::string>{}(k.codes());
  }
};
