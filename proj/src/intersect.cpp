#include "curves/intersect.hpp"

#include <algorithm>
#include <numeric>

namespace curves {

namespace {
// position in the cyclic order a -> b -> A -> B
constexpr int kCyclicIndex[4] = {0, 2, 1, 3};  // indexed by letter code (a, A, b, B)
}  // namespace

Letter Ray::letter(std::size_t k) const {
  const auto n = static_cast<std::ptrdiff_t>(period_->size());
  const auto s = static_cast<std::ptrdiff_t>(shift_);
  const auto kk = static_cast<std::ptrdiff_t>(k % period_->size());
  if (dir_ == Direction::forward) return period_->at_cyclic(s + kk);
  return inverse(period_->at_cyclic(s - 1 - kk + n));
}

int first_turn(Letter x) { return kCyclicIndex[code(x)] + 1; }

int turn(Letter prev, Letter next) {
  const int back = kCyclicIndex[code(inverse(prev))];
  const int pos = kCyclicIndex[code(next)];
  const int t = (pos - back + 4) % 4;
  if (t == 0) throw Error(ErrorCode::parse, "ray is not reduced");
  return t;
}

std::vector<int> order_key(const Ray& r, std::size_t len) {
  std::vector<int> key;
  key.reserve(len);
  for (std::size_t k = 0; k < len; ++k)
    key.push_back(k == 0 ? first_turn(r.letter(0)) : turn(r.letter(k - 1), r.letter(k)));
  return key;
}

std::strong_ordering compare_rays(const Ray& r1, const Ray& r2) {
  // Two periodic words agreeing on n1 + n2 letters are equal (Fine-Wilf).
  const std::size_t horizon = r1.period_length() + r2.period_length();
  for (std::size_t k = 0; k < horizon; ++k) {
    const Letter x = r1.letter(k), y = r2.letter(k);
    if (x == y) continue;
    // turn sequences agree before k, so the first differing turn decides
    const int tx = k == 0 ? first_turn(x) : turn(r1.letter(k - 1), x);
    const int ty = k == 0 ? first_turn(y) : turn(r1.letter(k - 1), y);
    return tx <=> ty;
  }
  throw Error(ErrorCode::equal_rays, "rays coincide as infinite words");
}

std::vector<std::pair<std::size_t, std::size_t>> ray_positions(const CyclicWord& w) {
  const std::size_t n = w.size();
  std::vector<Ray> rays;
  rays.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    rays.emplace_back(w, i, Direction::forward);
    rays.emplace_back(w, i, Direction::backward);
  }
  std::vector<std::size_t> order(2 * n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return compare_rays(rays[x], rays[y]) < 0; });
  std::vector<std::pair<std::size_t, std::size_t>> pos(n);
  for (std::size_t p = 0; p < order.size(); ++p) {
    const std::size_t r = order[p];
    (r % 2 == 0 ? pos[r / 2].first : pos[r / 2].second) = p;
  }
  return pos;
}

std::uint64_t self_intersection(const CyclicWord& w) {
  if (!is_primitive(w)) throw Error(ErrorCode::non_primitive, w.str() + " is a proper power");
  const std::size_t n = w.size();
  if (n < 2) return 0;
  const auto pos = ray_positions(w);

  // edges at the base vertex used by the lift of shift i
  std::vector<std::array<Letter, 2>> edges(n);
  for (std::size_t i = 0; i < n; ++i)
    edges[i] = {w[i], inverse(w.at_cyclic(static_cast<std::ptrdiff_t>(i) - 1))};

  std::uint64_t weighted = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!linked(pos[i], pos[j])) continue;
      int shared = 0;
      for (Letter x : edges[i])
        for (Letter y : edges[j]) shared += (x == y);
      weighted += static_cast<std::uint64_t>(2 - shared);
    }
  }
  return weighted / 2;
}

std::uint64_t self_intersection(const ClassKey& k) { return self_intersection(k.word()); }

}  // namespace curves
