#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "sonorad/medium.hpp"

using namespace sonorad;

TEST_CASE("constant medium returns n for any frequency") {
  const auto m = MediumSpec::constant(1.3);
  CHECK(refractive_index(m, 1e12) == 1.3);
  CHECK(refractive_index(m, 5e15) == 1.3);
}

TEST_CASE("tabulated medium interpolates linearly and hits nodes exactly") {
  const auto m = MediumSpec::tabulated({{1e15, 1.30}, {2e15, 1.40}});
  CHECK(refractive_index(m, 1.5e15) == doctest::Approx(1.35).epsilon(1e-14));
  CHECK(refractive_index(m, 1e15) == 1.30);
  CHECK(refractive_index(m, 2e15) == 1.40);

  const auto m3 = MediumSpec::tabulated({{1e15, 1.30}, {2e15, 1.40}, {4e15, 1.34}});
  CHECK(refractive_index(m3, 2e15) == 1.40);
  CHECK(refractive_index(m3, 3e15) == doctest::Approx(1.37).epsilon(1e-14));
}

TEST_CASE("tabulated medium refuses extrapolation, names the interval") {
  const auto m = MediumSpec::tabulated({{1e15, 1.30}, {2e15, 1.40}});
  CHECK_THROWS_AS(refractive_index(m, 3e15), std::out_of_range);
  try {
    refractive_index(m, 3e15);
  } catch (const std::out_of_range& e) {
    const std::string msg = e.what();
    CHECK(msg.find("1e+15") != std::string::npos);
    CHECK(msg.find("2e+15") != std::string::npos);
  }
  CHECK_THROWS_AS(refractive_index(m, 0.5e15), std::out_of_range);
  CHECK_THROWS_AS(refractive_index(m, -1.0), std::domain_error);
}

TEST_CASE("medium construction invariants") {
  CHECK_THROWS_AS(MediumSpec::constant(1.0), std::invalid_argument);
  CHECK_THROWS_AS(MediumSpec::constant(0.9), std::invalid_argument);
  CHECK_THROWS_AS(MediumSpec::tabulated({{1e15, 1.3}}), std::invalid_argument);
  CHECK_THROWS_AS(MediumSpec::tabulated({{1e15, 1.3}, {1e15, 1.4}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MediumSpec::tabulated({{2e15, 1.3}, {1e15, 1.4}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MediumSpec::tabulated({{1e15, 1.0}, {2e15, 1.4}}),
                  std::invalid_argument);
}

TEST_CASE("reflection probability values") {
  CHECK(reflection_probability(1.0) == 0.0);
  CHECK(reflection_probability(1.3) ==
        doctest::Approx(0.09 / 5.29).epsilon(1e-15));
  CHECK(reflection_probability(1.3) < 0.02);  // below two percent
  CHECK(reflection_probability(3.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(reflection_probability(0.99), std::domain_error);
}

TEST_CASE("reflection probability is monotone increasing in n") {
  double prev = -1.0;
  for (double n = 1.0; n <= 5.0; n += 0.01) {
    const double r = reflection_probability(n);
    CHECK(r > prev);
    CHECK(r >= 0.0);
    CHECK(r < 1.0);
    prev = r;
  }
}

TEST_CASE("run parameter invariants") {
  RunParams p;
  p.r0 = 10e-6;
  p.rmin = 0.5e-6;
  p.gamma = 1e-15;
  p.period = 1e-12;
  p.center = 0.5e-12;
  CHECK_NOTHROW(p.validate());

  auto bad = p;
  bad.rmin = p.r0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.rmin = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.gamma = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.center = 2e-12;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.period = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
