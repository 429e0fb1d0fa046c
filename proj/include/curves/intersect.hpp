#pragma once

// Self-intersection numbers from the circular order on ends of F(a, b).
//
// The ends of the Cayley tree are cyclically ordered by the ribbon structure
// a -> b -> A -> B at every vertex (the order forced by the boundary word abAB).
// Cut at the base vertex, this becomes a linear order on infinite reduced
// words, compared through their turn sequences (OrderKey).

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "curves/words.hpp"

namespace curves {

enum class Direction : std::uint8_t { forward, backward };

/// Periodic infinite reduced word starting at a cyclic shift of `period`.
/// forward:  (sigma^shift w)^inf
/// backward: ((sigma^shift w)^-1)^inf
/// Non-owning: the period word must outlive the ray.
class Ray {
 public:
  Ray(const CyclicWord& period, std::size_t shift, Direction dir)
      : period_(&period), shift_(shift % period.size()), dir_(dir) {}

  Letter letter(std::size_t k) const;
  std::size_t period_length() const { return period_->size(); }
  std::size_t shift() const { return shift_; }
  Direction direction() const { return dir_; }

 private:
  const CyclicWord* period_;
  std::size_t shift_;
  Direction dir_;
};

/// Position of x in the linear order [a, b, A, B], 1-based.
int first_turn(Letter x);
/// Position of `next` in D(prev) (the cyclic order a->b->A->B started after
/// inv(prev), inv(prev) removed), 1-based. `next` must not be inv(prev).
int turn(Letter prev, Letter next);

/// First `len` entries of the turn sequence of a ray.
std::vector<int> order_key(const Ray& r, std::size_t len);

/// Circular order at infinity cut at the base vertex. Never returns equal:
/// throws Error(equal_rays) when the rays agree past the comparison horizon.
std::strong_ordering compare_rays(const Ray& r1, const Ray& r2);

/// Chord alternation on a circle given by totally ordered positions.
/// Throws Error(degenerate_points) if any two of the four positions coincide.
template <class T>
bool linked(std::pair<T, T> c1, std::pair<T, T> c2) {
  const T pts[4] = {c1.first, c1.second, c2.first, c2.second};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (!(pts[i] < pts[j]) && !(pts[j] < pts[i])) throw Error(ErrorCode::degenerate_points, "chord endpoints coincide");
  const T lo = c1.first < c1.second ? c1.first : c1.second;
  const T hi = c1.first < c1.second ? c1.second : c1.first;
  const bool in1 = lo < c2.first && c2.first < hi;
  const bool in2 = lo < c2.second && c2.second < hi;
  return in1 != in2;
}

/// Positions of the 2n rays of a primitive word on the cut circle:
/// result[i] = {position of P_i, position of Q_i}, positions in 0..2n-1.
std::vector<std::pair<std::size_t, std::size_t>> ray_positions(const CyclicWord& w);

/// Self-intersection number of a primitive class.
///
/// The n shifts of w correspond to the n lifts of the curve through the base
/// vertex. Two crossing lifts share a (possibly trivial) path in the tree and
/// appear as a linked shift pair once per vertex of that path; a linked pair
/// is weighted 2 when the lifts share no edge at the base vertex, 1 when they
/// share exactly one, 0 when the base vertex is interior to the shared path.
/// Half the weighted total counts each crossing once.
/// Throws Error(non_primitive) for proper powers.
std::uint64_t self_intersection(const ClassKey& k);
std::uint64_t self_intersection(const CyclicWord& w);

}  // namespace curves
