#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "koopfilt/noise.hpp"

using namespace koopfilt;

TEST_SUITE("noise") {

TEST_CASE("zero steps yields an empty increment array") {
  const NoisePath path = generate_noise(7, 0.01, 0, 1);
  CHECK(path.increments.rows() == 0);
  CHECK(path.increments.cols() == 1);
  CHECK(path.dt == 0.01);
}

TEST_CASE("sample moments match N(0, dt)") {
  const double dt = 0.01;
  const std::int64_t steps = 100000;
  const NoisePath path = generate_noise(7, dt, steps, 1);
  REQUIRE(path.increments.rows() == steps);

  const double mean = path.increments.col(0).mean();
  CHECK(std::abs(mean) <= 3.0 * std::sqrt(dt / static_cast<double>(steps)));

  const double var =
      (path.increments.col(0).array() - mean).square().sum() / static_cast<double>(steps);
  CHECK(var == doctest::Approx(dt).epsilon(0.02));
}

TEST_CASE("per-dimension variance stays within two percent of dt") {
  const double dt = 0.5;
  const std::int64_t steps = 120000;
  const NoisePath path = generate_noise(99, dt, steps, 3);
  for (int dim = 0; dim < 3; ++dim) {
    const double mean = path.increments.col(dim).mean();
    const double var =
        (path.increments.col(dim).array() - mean).square().sum() / static_cast<double>(steps);
    CHECK(var == doctest::Approx(dt).epsilon(0.02));
  }
}

TEST_CASE("same seed regenerates bit-identical increments") {
  const NoisePath a = generate_noise(7, 0.01, 500, 2);
  const NoisePath b = generate_noise(7, 0.01, 500, 2);
  CHECK((a.increments.array() == b.increments.array()).all());
}

TEST_CASE("different seeds give different draws") {
  const NoisePath a = generate_noise(7, 0.01, 16, 1);
  const NoisePath b = generate_noise(8, 0.01, 16, 1);
  CHECK_FALSE((a.increments.array() == b.increments.array()).all());
}

TEST_CASE("standard_normal_draw matches the increments up to the sqrt(dt) scale") {
  const double dt = 0.04;
  const NoisePath path = generate_noise(11, dt, 6, 2);
  for (int k = 0; k < 12; ++k) {
    CHECK(path.increments(k / 2, k % 2) ==
          doctest::Approx(std::sqrt(dt) * standard_normal_draw(11, k)).epsilon(1e-15));
  }
}

TEST_CASE("nonpositive dt and negative sizes are rejected") {
  CHECK_THROWS_AS(generate_noise(1, 0.0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_noise(1, -0.5, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_noise(1, 0.1, -1, 1), std::invalid_argument);
}

}  // TEST_SUITE
