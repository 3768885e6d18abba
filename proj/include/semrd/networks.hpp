#pragma once

// Small parametric networks used throughout the tests.

#include "semrd/bayes_net.hpp"

namespace semrd {

// Y -> X1, Y -> X2 with uniform Y and binary symmetric channels of
// crossovers p1, p2. Variable ids: Y = 0, X1 = 1, X2 = 2.
BayesNet binary_fork(double p1, double p2);

// X1 -> Y -> X2 with uniform X1 and binary symmetric channels of crossovers
// p1 (X1 -> Y) and p2 (Y -> X2). Variable ids: X1 = 0, Y = 1, X2 = 2.
BayesNet binary_chain3(double p1, double p2);

// X0 -> X1 -> ... -> X(m-1), uniform root, binary symmetric links.
BayesNet binary_chain(int m, double crossover);

// m mutually independent variables with the given marginal.
BayesNet independent_network(int m, const std::vector<double>& marginal);

}  // namespace semrd
