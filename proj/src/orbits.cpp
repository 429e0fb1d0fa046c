#include "curves/orbits.hpp"

#include <algorithm>
#include <unordered_set>

#include "curves/intersect.hpp"
#include "curves/parallel.hpp"

namespace curves {

namespace {
std::string codes_of(std::string_view text) {
  std::string out;
  for (Letter x : parse_letters(text)) out.push_back(static_cast<char>(code(x)));
  return out;
}

std::string inverse_image(const std::string& img) {
  std::string out(img.rbegin(), img.rend());
  for (auto& c : out) c = static_cast<char>(c ^ 1);
  return out;
}
}  // namespace

Automorphism make_automorphism(std::string name, std::string_view image_a, std::string_view image_b) {
  return {std::move(name), codes_of(image_a), codes_of(image_b)};
}

const std::vector<Automorphism>& whitehead_generators() {
  static const std::vector<Automorphism> gens = {
      make_automorphism("a->ab", "ab", "b"), make_automorphism("a->aB", "aB", "b"),
      make_automorphism("b->ba", "a", "ba"), make_automorphism("b->bA", "a", "bA"),
      make_automorphism("a<->b", "b", "a"),  make_automorphism("a->A", "A", "b"),
      make_automorphism("b->B", "a", "B"),
  };
  return gens;
}

Automorphism identity_automorphism() { return make_automorphism("id", "a", "b"); }

ClassKey apply(const Automorphism& phi, const ClassKey& k) {
  const std::string images[4] = {phi.image_a, inverse_image(phi.image_a), phi.image_b, inverse_image(phi.image_b)};
  std::string raw;
  raw.reserve(k.size() * 2);
  for (char c : k.codes()) raw += images[static_cast<unsigned char>(c)];
  return canonical(reduce_codes(raw));
}

bool Orbit::contains(const ClassKey& k) const { return std::binary_search(members.begin(), members.end(), k); }

ClassKey parse_seed(std::string_view text) {
  auto letters = parse_letters(text);
  if (letters.empty()) throw Error(ErrorCode::parse, "empty seed");
  std::string codes;
  for (Letter x : letters) codes.push_back(static_cast<char>(code(x)));
  try {
    return canonical(CyclicWord::from_codes(codes));
  } catch (const Error&) {
    throw Error(ErrorCode::seed_not_reduced, "seed '" + std::string(text) + "' is not cyclically reduced");
  }
}

Orbit enumerate_orbit(const ClassKey& seed, std::size_t cap, const OrbitOptions& opts) {
  if (seed.size() > cap)
    throw Error(ErrorCode::cap_too_large, "seed " + seed.str() + " is longer than the cap " + std::to_string(cap));
  const auto& gens = whitehead_generators();
  std::unordered_set<ClassKey> seen{seed};
  std::vector<ClassKey> frontier{seed};
  std::vector<ClassKey> members{seed};

  while (!frontier.empty()) {
    std::vector<std::vector<ClassKey>> images(frontier.size());
    detail::parallel_for(frontier.size(), opts.workers, [&](std::size_t i) {
      auto& out = images[i];
      out.reserve(gens.size());
      for (const auto& g : gens) {
        auto img = apply(g, frontier[i]);
        if (img.size() <= cap) out.push_back(std::move(img));
      }
    });
    std::vector<ClassKey> next;
    for (auto& batch : images) {
      for (auto& img : batch) {
        if (!seen.insert(img).second) continue;
        members.push_back(img);
        next.push_back(std::move(img));
      }
    }
    if (members.size() > opts.limits.max_members)
      throw Error(ErrorCode::cap_too_large, "orbit of " + seed.str() + " exceeds the member budget at cap " +
                                                std::to_string(cap));
    frontier = std::move(next);
  }
  std::sort(members.begin(), members.end());
  return Orbit{seed, cap, std::move(members), true};
}

CountSeries make_series(std::vector<std::uint64_t> count) {
  CountSeries s;
  if (count.empty()) count.push_back(0);
  count[0] = 0;
  s.cumulative.resize(count.size());
  std::uint64_t run = 0;
  for (std::size_t l = 0; l < count.size(); ++l) s.cumulative[l] = (run += count[l]);
  s.count = std::move(count);
  return s;
}

CountSeries count_series(const Orbit& o) {
  std::vector<std::uint64_t> count(o.cap + 1, 0);
  for (const auto& m : o.members) ++count[m.size()];
  return make_series(std::move(count));
}

bool closure_holds(const Orbit& o) {
  for (const auto& m : o.members)
    for (const auto& g : whitehead_generators()) {
      const auto img = apply(g, m);
      if (img.size() <= o.cap && !o.contains(img)) return false;
    }
  return true;
}

std::vector<Orbit> classify(std::uint64_t k, std::size_t cap, const OrbitOptions& opts) {
  std::vector<ClassKey> candidates;
  enumerate_classes(
      cap, [&](const ClassKey& c) { if (is_primitive(c)) candidates.push_back(c); }, opts.limits);
  std::vector<std::uint64_t> si(candidates.size());
  detail::parallel_for(candidates.size(), opts.workers, [&](std::size_t i) { si[i] = self_intersection(candidates[i]); });

  std::unordered_set<ClassKey> assigned;
  std::vector<Orbit> orbits;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (si[i] != k || assigned.contains(candidates[i])) continue;
    auto orbit = enumerate_orbit(candidates[i], cap, opts);
    for (const auto& m : orbit.members) assigned.insert(m);
    orbits.push_back(std::move(orbit));
  }
  // candidates arrive in ClassKey order, so each orbit's seed is its minimal member
  std::sort(orbits.begin(), orbits.end(), [](const Orbit& x, const Orbit& y) { return x.minimal() < y.minimal(); });
  return orbits;
}

}  // namespace curves
