#pragma once

// Mapping-class-group orbits of classes on the one-holed torus, enumerated by
// Whitehead/Nielsen moves under a word-length cap, and their count series.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "curves/words.hpp"

namespace curves {

/// Automorphism of F(a, b) given by the images of a and b (letter codes).
struct Automorphism {
  std::string name;
  std::string image_a;
  std::string image_b;
};

/// a->ab, a->aB, b->ba, b->bA, a<->b, a->A, b->B.
const std::vector<Automorphism>& whitehead_generators();
Automorphism identity_automorphism();
/// Builds an automorphism from printable images, e.g. ("ab", "b").
Automorphism make_automorphism(std::string name, std::string_view image_a, std::string_view image_b);

/// Substitute, freely and cyclically reduce, canonicalize.
ClassKey apply(const Automorphism& phi, const ClassKey& k);

struct Orbit {
  ClassKey seed;
  std::size_t cap = 0;
  /// Sorted in ClassKey order (length, then lexicographic).
  std::vector<ClassKey> members;
  bool complete = false;

  bool contains(const ClassKey& k) const;
  const ClassKey& minimal() const { return members.front(); }
};

struct OrbitOptions {
  unsigned workers = 1;
  EnumerationLimits limits{};
};

/// Breadth-first closure of the seed class under whitehead_generators(),
/// discarding images longer than `cap`. Whitehead peak reduction makes this
/// the whole orbit intersected with {wl <= cap}.
Orbit enumerate_orbit(const ClassKey& seed, std::size_t cap, const OrbitOptions& opts = {});
/// Parses and validates a seed: the text must already be cyclically reduced.
ClassKey parse_seed(std::string_view text);

struct CountSeries {
  /// count[l] = number of members of word length exactly l, l = 0..cap.
  std::vector<std::uint64_t> count;
  std::vector<std::uint64_t> cumulative;

  std::size_t cap() const { return count.empty() ? 0 : count.size() - 1; }
  std::uint64_t at(std::size_t l) const { return l < count.size() ? count[l] : 0; }
};

CountSeries count_series(const Orbit& o);
/// Series whose count[l] is given directly (index 0 ignored).
CountSeries make_series(std::vector<std::uint64_t> count);

/// Checks that every generator image of length <= cap stays in the orbit.
bool closure_holds(const Orbit& o);

/// Partition of the primitive classes of self-intersection k and word length
/// <= cap into orbits, sorted by minimal representative.
std::vector<Orbit> classify(std::uint64_t k, std::size_t cap, const OrbitOptions& opts = {});

}  // namespace curves
