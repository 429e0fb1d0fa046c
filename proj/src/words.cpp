#include "curves/words.hpp"

#include <algorithm>
#include <cmath>

namespace curves {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "ParseError";
    case ErrorCode::empty_after_reduction: return "EmptyAfterReduction";
    case ErrorCode::cap_too_large: return "CapTooLarge";
    case ErrorCode::equal_rays: return "EqualRays";
    case ErrorCode::degenerate_points: return "DegeneratePoints";
    case ErrorCode::non_primitive: return "NonPrimitive";
    case ErrorCode::seed_not_reduced: return "SeedNotReduced";
    case ErrorCode::no_formula_found: return "NoFormulaFound";
    case ErrorCode::no_pentagon: return "NoPentagon";
    case ErrorCode::non_convergence: return "NonConvergence";
    case ErrorCode::invalid_metric: return "InvalidMetric";
    case ErrorCode::elliptic_or_parabolic: return "EllipticOrParabolic";
    case ErrorCode::not_hyperbolic: return "NotHyperbolic";
    case ErrorCode::endpoint_collision: return "EndpointCollision";
    case ErrorCode::degenerate_spectrum: return "DegenerateSpectrum";
    case ErrorCode::unknown_seed: return "UnknownSeed";
    case ErrorCode::io: return "IOError";
    case ErrorCode::precondition: return "PreconditionFailed";
  }
  return "Error";
}

namespace {
constexpr char kLetterChars[4] = {'a', 'A', 'b', 'B'};

std::string inverse_codes(std::string_view s) {
  std::string out(s.rbegin(), s.rend());
  for (auto& c : out) c = static_cast<char>(c ^ 1);
  return out;
}

bool cyclically_reduced(std::string_view s) {
  if (s.empty()) return false;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if ((s[i] ^ 1) == s[i + 1]) return false;
  return s.size() == 1 || (s.back() ^ 1) != s.front();
}
}  // namespace

char to_char(Letter x) { return kLetterChars[code(x)]; }

Letter letter_from_char(char c) {
  switch (c) {
    case 'a': return Letter::a;
    case 'A': return Letter::A;
    case 'b': return Letter::b;
    case 'B': return Letter::B;
    default: throw Error(ErrorCode::parse, std::string("invalid letter '") + c + "' (alphabet is a, A, b, B)");
  }
}

std::vector<Letter> parse_letters(std::string_view text) {
  std::vector<Letter> out;
  out.reserve(text.size());
  for (char c : text) out.push_back(letter_from_char(c));
  return out;
}

CyclicWord CyclicWord::from_codes(std::string codes) {
  if (!cyclically_reduced(codes)) throw Error(ErrorCode::seed_not_reduced, "word is not cyclically reduced");
  return CyclicWord(std::move(codes));
}

Letter CyclicWord::at_cyclic(std::ptrdiff_t i) const {
  const auto n = static_cast<std::ptrdiff_t>(codes_.size());
  i %= n;
  if (i < 0) i += n;
  return static_cast<Letter>(codes_[static_cast<std::size_t>(i)]);
}

std::string CyclicWord::str() const {
  std::string out;
  out.reserve(codes_.size());
  for (char c : codes_) out.push_back(kLetterChars[static_cast<unsigned char>(c)]);
  return out;
}

CyclicWord reduce_codes(std::string_view raw) {
  std::string stack;
  stack.reserve(raw.size());
  for (char c : raw) {
    if (!stack.empty() && (stack.back() ^ 1) == c)
      stack.pop_back();
    else
      stack.push_back(c);
  }
  std::size_t lo = 0, hi = stack.size();
  while (hi - lo >= 2 && (stack[lo] ^ 1) == stack[hi - 1]) {
    ++lo;
    --hi;
  }
  if (lo >= hi) throw Error(ErrorCode::empty_after_reduction, "word reduces to the identity");
  return CyclicWord(stack.substr(lo, hi - lo));
}

CyclicWord reduce(std::span<const Letter> raw) {
  std::string codes;
  codes.reserve(raw.size());
  for (Letter x : raw) codes.push_back(static_cast<char>(code(x)));
  return reduce_codes(codes);
}

CyclicWord parse_word(std::string_view text) {
  auto letters = parse_letters(text);
  if (letters.empty()) throw Error(ErrorCode::parse, "empty word");
  return reduce(letters);
}

CyclicWord inverse(const CyclicWord& w) { return CyclicWord::from_codes(inverse_codes(w.codes())); }

CyclicWord rotate(const CyclicWord& w, std::size_t shift) {
  const auto& s = w.codes();
  shift %= s.size();
  return CyclicWord::from_codes(s.substr(shift) + s.substr(0, shift));
}

std::size_t least_rotation(std::string_view s) {
  const std::size_t n = s.size();
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    const char x = s[(i + k) % n];
    const char y = s[(j + k) % n];
    if (x == y) {
      ++k;
      continue;
    }
    if (x > y)
      i += k + 1;
    else
      j += k + 1;
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j);
}

namespace {
std::string rotated(std::string_view s, std::size_t r) {
  std::string out;
  out.reserve(s.size());
  out.append(s.substr(r));
  out.append(s.substr(0, r));
  return out;
}
}  // namespace

ClassKey canonical(const CyclicWord& w) {
  const auto& s = w.codes();
  std::string fwd = rotated(s, least_rotation(s));
  const std::string inv = inverse_codes(s);
  std::string bwd = rotated(inv, least_rotation(inv));
  return ClassKey(CyclicWord::from_codes(std::min(fwd, bwd)));
}

ClassKey parse_class(std::string_view text) { return canonical(parse_word(text)); }

std::strong_ordering ClassKey::operator<=>(const ClassKey& other) const {
  if (auto c = size() <=> other.size(); c != 0) return c;
  return codes().compare(other.codes()) <=> 0;
}

bool is_primitive(const CyclicWord& w) {
  // smallest period via the prefix function
  const auto& s = w.codes();
  const std::size_t n = s.size();
  std::vector<std::size_t> pi(n, 0);
  for (std::size_t q = 1; q < n; ++q) {
    std::size_t k = pi[q - 1];
    while (k > 0 && s[q] != s[k]) k = pi[k - 1];
    if (s[q] == s[k]) ++k;
    pi[q] = k;
  }
  const std::size_t period = n - pi[n - 1];
  return period == n || n % period != 0;
}

double estimated_class_count(std::size_t max_len) {
  double total = 0;
  for (std::size_t n = 1; n <= max_len; ++n) total += 4.0 * std::pow(3.0, double(n - 1)) / double(2 * n);
  return total;
}

void enumerate_classes(std::size_t max_len, const std::function<void(const ClassKey&)>& emit,
                       const EnumerationLimits& limits) {
  if (max_len == 0) throw Error(ErrorCode::parse, "max word length must be >= 1");
  if (estimated_class_count(max_len) > double(limits.max_members))
    throw Error(ErrorCode::cap_too_large,
                "enumerating classes up to length " + std::to_string(max_len) + " exceeds the member budget");
  std::string word;
  for (std::size_t n = 1; n <= max_len; ++n) {
    word.assign(n, 0);
    // depth-first over reduced linear words in lexicographic order
    std::vector<int> next(n, 0);
    std::size_t depth = 0;
    while (true) {
      if (next[depth] > 3) {
        if (depth == 0) break;
        next[depth] = 0;
        --depth;
        continue;
      }
      const char c = static_cast<char>(next[depth]++);
      if (depth > 0 && (word[depth - 1] ^ 1) == c) continue;
      word[depth] = c;
      if (depth + 1 < n) {
        ++depth;
        continue;
      }
      if (n > 1 && (word[n - 1] ^ 1) == word[0]) continue;
      if (least_rotation(word) != 0) continue;
      const auto key = canonical(CyclicWord::from_codes(word));
      if (key.codes() == word) emit(key);
    }
  }
}

std::vector<ClassKey> classes_up_to(std::size_t max_len, const EnumerationLimits& limits) {
  std::vector<ClassKey> out;
  enumerate_classes(max_len, [&](const ClassKey& k) { out.push_back(k); }, limits);
  return out;
}

// ---------------------------------------------------------------------------

TotientTable::TotientTable(std::uint32_t limit) : phi_(std::size_t(limit) + 1) {
  for (std::uint32_t i = 0; i <= limit; ++i) phi_[i] = i;
  for (std::uint32_t p = 2; p <= limit; ++p) {
    if (phi_[p] != p) continue;
    for (std::uint32_t m = p; m <= limit; m += p) phi_[m] -= phi_[m] / p;
  }
}

std::uint64_t TotientTable::operator()(std::int64_t n) const {
  if (n <= 0) return 0;
  if (static_cast<std::uint64_t>(n) < phi_.size()) return phi_[static_cast<std::size_t>(n)];
  std::uint64_t m = static_cast<std::uint64_t>(n), result = m;
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    while (m % p == 0) m /= p;
    result -= result / p;
  }
  if (m > 1) result -= result / m;
  return result;
}

const TotientTable& TotientTable::shared() {
  static const TotientTable table(1u << 20);
  return table;
}

std::uint64_t totient(std::int64_t n) { return TotientTable::shared()(n); }

std::uint64_t totient_of_quotient(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num % den != 0) return 0;
  return totient(num / den);
}

std::uint64_t summatory(std::int64_t l) {
  std::uint64_t total = 0;
  for (std::int64_t n = 1; n <= l; ++n) total += 2 * totient(n);
  return total;
}

}  // namespace curves
