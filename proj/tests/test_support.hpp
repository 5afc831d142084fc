#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "frx/cover.hpp"
#include "oracles.hpp"

namespace testing_support {

inline oracle::QBox to_qbox(const frx::Box& box) {
  oracle::QBox out;
  for (const frx::Interval& iv : box) out.push_back({iv.lo.rational(), iv.hi.rational()});
  return out;
}

inline std::vector<oracle::QBox> to_qboxes(const std::vector<frx::Box>& boxes) {
  std::vector<oracle::QBox> out;
  for (const frx::Box& b : boxes) out.push_back(to_qbox(b));
  return out;
}

inline bool all_rational(const std::vector<frx::Box>& boxes) {
  for (const frx::Box& b : boxes) {
    for (const frx::Interval& iv : b) {
      if (!iv.lo.is_rational() || !iv.hi.is_rational()) return false;
    }
  }
  return true;
}

/// Random rational p/q with 1 <= q <= max_den and lo < p/q < hi.
inline frx::Rational random_rational(std::mt19937_64& rng, const frx::Rational& lo, const frx::Rational& hi,
                                     int max_den) {
  std::uniform_int_distribution<int> den_dist(1, max_den);
  while (true) {
    const int q = den_dist(rng);
    const frx::Rational span = (hi - lo) * q;
    const long max_steps = static_cast<long>(span.get_d()) + 1;
    std::uniform_int_distribution<long> step(0, max_steps);
    frx::Rational x = lo + frx::Rational(step(rng), q);
    x.canonicalize();
    if (lo < x && x < hi) return x;
  }
}

/// Random geometric removing-sequence parameters with small denominators.
struct GeometricParams {
  int order;
  frx::Rational beta;
  frx::Rational l;
};

inline GeometricParams random_geometric(std::mt19937_64& rng, int max_order = 3) {
  std::uniform_int_distribution<int> order_dist(1, max_order);
  const int s = order_dist(rng);
  const frx::Rational beta = random_rational(rng, 0, frx::Rational(1, s + 1), 24);
  frx::Rational l = 0;
  if (std::uniform_int_distribution<int>(0, 1)(rng) == 1) l = random_rational(rng, 0, 1, 12);
  return {s, beta, l};
}

inline frx::CantorSpec to_spec(const GeometricParams& p) {
  return frx::CantorSpec{frx::RemovingSequence::geometric(p.order, frx::Scalar(p.beta), frx::Scalar(p.l))};
}

}  // namespace testing_support
