#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "semrd/bayes_net.hpp"

namespace semrd::testing {

// Random DAG over ids 0..m-1 with edges only from lower to higher ids, at
// most `max_parents` parents per node, Dirichlet(1) CPT rows. Some rows are
// made sparse so that zero probabilities are exercised too.
inline BayesNet random_network(std::mt19937_64& rng, int m, int card, int max_parents = 3,
                               bool mixed_cards = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Variable> vars;
  for (int i = 0; i < m; ++i) {
    int k = card;
    if (mixed_cards) k = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(card - 1));
    vars.push_back({i, "V" + std::to_string(i), k});
  }
  std::vector<Cpt> cpts;
  for (int i = 0; i < m; ++i) {
    Cpt c;
    c.child = i;
    std::vector<int> pool;
    for (int j = 0; j < i; ++j) pool.push_back(j);
    std::shuffle(pool.begin(), pool.end(), rng);
    const int np = i == 0 ? 0 : static_cast<int>(rng() % static_cast<std::uint64_t>(
                                                             std::min(i, max_parents) + 1));
    c.parents.assign(pool.begin(), pool.begin() + np);
    std::sort(c.parents.begin(), c.parents.end());
    std::size_t rows = 1;
    for (int p : c.parents) rows *= static_cast<std::size_t>(vars[p].cardinality);
    const int k = vars[i].cardinality;
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> row(static_cast<std::size_t>(k));
      double sum = 0.0;
      for (auto& v : row) sum += (v = -std::log(1.0 - u(rng)));
      if (u(rng) < 0.1) {
        const auto zero = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(k));
        sum -= row[zero];
        row[zero] = 0.0;
        if (sum <= 0.0) row[(zero + 1) % row.size()] = sum = 1.0;
      }
      for (auto v : row) c.table.push_back(v / sum);
    }
    cpts.push_back(std::move(c));
  }
  return make_network(std::move(vars), std::move(cpts));
}

}  // namespace semrd::testing
