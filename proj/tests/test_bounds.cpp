#include "doctest.h"
#include "semrd/bounds.hpp"
#include "semrd/errors.hpp"
#include "semrd/info.hpp"
#include "semrd/networks.hpp"

using namespace semrd;

TEST_CASE("independent variables collapse the sandwich") {
  const BayesNet net = independent_network(2, {0.5, 0.5});
  const auto d = DistortionSpec::preset(DistortionKind::kHamming, net);
  const double targets[] = {0.1, 0.2};
  const BoundReport r = lemma1_bounds(net, targets, d);
  CHECK(r.all_converged());
  CHECK(r.ordered());
  const double expect = 2 - binary_entropy(0.1) - binary_entropy(0.2);
  CHECK(r.lower == doctest::Approx(expect).epsilon(1e-5));
  CHECK(r.joint == doctest::Approx(expect).epsilon(1e-5));
  CHECK(r.upper == doctest::Approx(expect).epsilon(1e-5));
}

TEST_CASE("copy channel: conditional term vanishes") {
  const BayesNet net = binary_chain(2, 0.0);
  const auto d = DistortionSpec::preset(DistortionKind::kHamming, net);
  const double targets[] = {0.1, 0.1};
  const BoundReport r = lemma1_bounds(net, targets, d);
  CHECK(r.ordered());
  CHECK(r.lower_terms[1].rate == doctest::Approx(0.0));
  CHECK(r.lower == doctest::Approx(1 - binary_entropy(0.1)).epsilon(1e-5));
  CHECK(r.joint == doctest::Approx(1 - binary_entropy(0.1)).epsilon(1e-5));
  CHECK(r.upper == doctest::Approx(2 * (1 - binary_entropy(0.1))).epsilon(1e-5));
}

TEST_CASE("targets at the trivial distortion give zero rate") {
  const BayesNet net = binary_fork(0.1, 0.2);
  const auto d = DistortionSpec::preset(DistortionKind::kHamming, net);
  const double targets[] = {0.5, 0.5, 0.5};
  const BoundReport r = lemma1_bounds(net, targets, d);
  CHECK(r.lower == doctest::Approx(0.0));
  CHECK(r.joint == doctest::Approx(0.0));
  CHECK(r.upper == doctest::Approx(0.0));
}

TEST_CASE("fork sandwich is ordered") {
  const BayesNet net = binary_fork(0.1, 0.2);
  const auto d = DistortionSpec::preset(DistortionKind::kHamming, net);
  const double targets[] = {0.1, 0.05, 0.1};
  const BoundReport r = lemma1_bounds(net, targets, d);
  CHECK(r.all_converged());
  CHECK(r.ordered());
  CHECK(r.slack_lower >= -2e-4);
  CHECK(r.slack_upper >= -2e-4);
  CHECK_THROWS_AS(lemma1_bounds(net, std::vector<double>{0.1}, d), InvalidArgument);
}

TEST_CASE("separate coding given the fork root") {
  const BayesNet net = binary_fork(0.1, 0.1);
  const auto d = DistortionSpec::preset(DistortionKind::kHamming, net);
  const int side[] = {0};
  const double targets[] = {0.0, 0.05, 0.05};
  const DecompositionReport r = lemma2_check(net, side, targets, d);
  CHECK(r.blocks.blocks.size() == 2);
  CHECK(r.all_converged());
  CHECK(r.agrees());
  CHECK(r.joint_conditional == doctest::Approx(2 * binary_conditional_rd(0.1, 0.05)).epsilon(1e-5));
}

TEST_CASE("a single block trivially agrees") {
  const BayesNet net = binary_chain(3, 0.1);
  const auto d = DistortionSpec::preset(DistortionKind::kHamming, net);
  const int side[] = {0};
  const double targets[] = {0.0, 0.05, 0.05};
  const DecompositionReport r = lemma2_check(net, side, targets, d);
  CHECK(r.blocks.blocks.size() == 1);
  CHECK(r.difference() == doctest::Approx(0.0));
  const int everything[] = {0, 1, 2};
  CHECK_THROWS_AS(lemma2_check(net, everything, targets, d), InvalidArgument);
}

TEST_CASE("target grid spans the trivial distortion") {
  const BayesNet net = binary_fork(0.1, 0.1);
  const auto grid = target_grid(net, DistortionSpec::preset(DistortionKind::kHamming, net), 5);
  REQUIRE(grid.size() == 3);
  CHECK(grid[0].size() == 5);
  CHECK(grid[1].back() == doctest::Approx(0.5));
  CHECK(grid[1].front() == doctest::Approx(0.1));
}
