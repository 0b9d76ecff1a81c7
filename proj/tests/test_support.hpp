#pragma once

// Shared generators and error helpers for the suite. All randomness is
// seeded per test so failures replay.

#include <random>
#include <stdexcept>

#include <powerfact/powerfact.hpp>

namespace testsupport {

template <class F>
powerfact::Errc thrown_code(F&& f) {
  try {
    f();
  } catch (const powerfact::Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected a powerfact::Error");
}

// num/den with |num| <= num_max and 1 <= den <= den_max.
inline powerfact::Rational random_rational(std::mt19937_64& rng, long num_max, long den_max) {
  std::uniform_int_distribution<long> num(-num_max, num_max);
  std::uniform_int_distribution<long> den(1, den_max);
  return powerfact::Rational(num(rng), den(rng));
}

inline powerfact::C0Line<powerfact::Rational> random_line(std::mt19937_64& rng, long radius,
                                                          long width, long num_max,
                                                          long den_max) {
  std::uniform_int_distribution<long> site(-radius, radius);
  std::uniform_int_distribution<long> count(1, width);
  powerfact::C0Line<powerfact::Rational> f;
  long w = count(rng);
  for (long k = 0; k < w; ++k) f.set(site(rng), random_rational(rng, num_max, den_max));
  return f;
}

// Values and tail drawn from [-1, 1].
inline powerfact::EventuallyConstantLine<powerfact::Rational> random_contraction(
    std::mt19937_64& rng, long radius, long width) {
  std::uniform_int_distribution<long> den(1, 9);
  auto unit_ball = [&] {
    long d = den(rng);
    std::uniform_int_distribution<long> num(-d, d);
    return powerfact::Rational(num(rng), d);
  };
  powerfact::EventuallyConstantLine<powerfact::Rational> e(unit_ball());
  std::uniform_int_distribution<long> site(-radius, radius);
  std::uniform_int_distribution<long> count(1, width);
  long w = count(rng);
  for (long k = 0; k < w; ++k) e.set(site(rng), unit_ball());
  return e;
}

inline powerfact::MatrixAlgebra<powerfact::Rational> random_matrix(std::mt19937_64& rng,
                                                                   std::size_t dim,
                                                                   long num_max, long den_max) {
  powerfact::MatrixAlgebra<powerfact::Rational> m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m.at(i, j) = random_rational(rng, num_max, den_max);
  return m;
}

// The default envelope cut to a finite window; the standard probe element.
inline powerfact::C0Line<powerfact::Rational> envelope_window(
    const powerfact::Envelope<powerfact::Rational>& env, long radius) {
  powerfact::C0Line<powerfact::Rational> f;
  for (long t = -radius; t <= radius; ++t) f.set(t, env.at(t));
  return f;
}

}  // namespace testsupport
