#include <random>

#include "doctest.h"
#include "random_nets.hpp"
#include "semrd/errors.hpp"
#include "semrd/info.hpp"
#include "semrd/networks.hpp"

using namespace semrd;

TEST_CASE("binary entropy hand values") {
  CHECK(binary_entropy(0.1) == doctest::Approx(0.468995593589).epsilon(1e-11));
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  const double p[] = {0.25, 0.25, 0.25, 0.25};
  CHECK(entropy(p) == doctest::Approx(2.0).epsilon(1e-15));
  const double q[] = {1.0, 0.0};
  CHECK(entropy(q) == 0.0);
}

TEST_CASE("fork entropies") {
  const BayesNet net = binary_fork(0.1, 0.1);
  CHECK(node_conditional_entropy(net, 1) == doctest::Approx(binary_entropy(0.1)).epsilon(1e-12));
  CHECK(joint_entropy_factorized(net) == doctest::Approx(1.9379911872).epsilon(1e-10));
  CHECK(joint_entropy_bruteforce(enumerate_joint(net)) ==
        doctest::Approx(1.9379911872).epsilon(1e-10));
  CHECK(redundancy_gap(net) == doctest::Approx(1.0620088128).epsilon(1e-10));
  CHECK(parent_mutual_information(net, 0) == 0.0);
  CHECK(parent_mutual_information(net, 1) == doctest::Approx(1 - binary_entropy(0.1)).epsilon(1e-12));
}

TEST_CASE("copy channel carries one bit") {
  const BayesNet net = binary_chain(2, 0.0);
  CHECK(parent_mutual_information(net, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(joint_entropy_factorized(net) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(redundancy_gap(net) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("independent variables have no redundancy") {
  const BayesNet net = independent_network(4, {0.2, 0.3, 0.5});
  CHECK(redundancy_gap(net) == 0.0);
  CHECK(redundancy_gap_raw(net) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("conditional mutual information on the fork") {
  const JointTable joint = enumerate_joint(binary_fork(0.1, 0.2));
  const int y[] = {0}, x1[] = {1}, x2[] = {2};
  CHECK(conditional_mutual_information(joint, x1, x2, y) == 0.0);
  const double unconditional = conditional_mutual_information(joint, x1, x2, {});
  CHECK(unconditional > 0.1);
  CHECK(conditional_mutual_information(joint, x2, x1, {}) ==
        doctest::Approx(unconditional).epsilon(1e-12));
  CHECK_THROWS_AS(conditional_mutual_information(joint, x1, x1, y), InvalidArgument);
}

TEST_CASE("factorized and brute-force entropies agree on random nets") {
  std::mt19937_64 rng(1234);
  for (int t = 0; t < 40; ++t) {
    const bool ternary = t % 2 == 1;
    const BayesNet net = testing::random_network(rng, ternary ? 6 : 9, ternary ? 3 : 2);
    const double f = joint_entropy_factorized(net);
    CHECK(std::fabs(f - joint_entropy_bruteforce(enumerate_joint(net))) <= 1e-9);
    double sum_mi = 0.0;
    for (int i = 0; i < net.size(); ++i) sum_mi += parent_mutual_information(net, i);
    CHECK(redundancy_gap_raw(net) >= -1e-9);
    CHECK(std::fabs(redundancy_gap_raw(net) - sum_mi) <= 1e-9);
  }
}

TEST_CASE("mutual information symmetry on random tables") {
  std::mt19937_64 rng(99);
  const BayesNet net = testing::random_network(rng, 5, 3);
  const JointTable joint = enumerate_joint(net);
  const int a[] = {0, 3}, b[] = {1}, c[] = {4};
  CHECK(conditional_mutual_information(joint, a, b, c) ==
        doctest::Approx(conditional_mutual_information(joint, b, a, c)).epsilon(1e-12));
  CHECK(conditional_mutual_information(joint, a, b, c) >= 0.0);
}
