#include "semrd/networks.hpp"

#include <string>

#include "semrd/errors.hpp"

namespace semrd {

namespace {

std::vector<double> bsc(double p) { return {1.0 - p, p, p, 1.0 - p}; }

}  // namespace

BayesNet binary_fork(double p1, double p2) {
  return make_network({{0, "Y", 2}, {1, "X1", 2}, {2, "X2", 2}},
                      {{0, {}, {0.5, 0.5}}, {1, {0}, bsc(p1)}, {2, {0}, bsc(p2)}});
}

BayesNet binary_chain3(double p1, double p2) {
  return make_network({{0, "X1", 2}, {1, "Y", 2}, {2, "X2", 2}},
                      {{0, {}, {0.5, 0.5}}, {1, {0}, bsc(p1)}, {2, {1}, bsc(p2)}});
}

BayesNet binary_chain(int m, double crossover) {
  if (m < 1) throw InvalidArgument("chain needs at least one variable");
  std::vector<Variable> vars;
  std::vector<Cpt> cpts;
  for (int i = 0; i < m; ++i) {
    vars.push_back({i, "X" + std::to_string(i), 2});
    if (i == 0)
      cpts.push_back({0, {}, {0.5, 0.5}});
    else
      cpts.push_back({i, {i - 1}, bsc(crossover)});
  }
  return make_network(std::move(vars), std::move(cpts));
}

BayesNet independent_network(int m, const std::vector<double>& marginal) {
  std::vector<Variable> vars;
  std::vector<Cpt> cpts;
  for (int i = 0; i < m; ++i) {
    vars.push_back({i, "X" + std::to_string(i), static_cast<int>(marginal.size())});
    cpts.push_back({i, {}, marginal});
  }
  return make_network(std::move(vars), std::move(cpts));
}

}  // namespace semrd
