#ifndef TLEM_TAB1_HPP
#define TLEM_TAB1_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "tlem/check.hpp"
#include "tlem/rank.hpp"
#include "tlem/search.hpp"

namespace tlem {

struct ChainResult {
  bool found = false;
  Tab1Chain chain;
  std::size_t failed_index = 0;  // 1-based index of the lemma that was not found
  std::size_t nodes_explored = 0;
};

/// Builds a Tab-1 chain by proving `lemmas` in order, then `goal`, each under
/// Tab with the earlier lemmas appended to the basis. Every lemma must be
/// Rank-1*; the budget applies to each step separately.
inline ChainResult search_chain(const std::vector<Formula>& lemmas, const Formula& goal,
                                const std::vector<Formula>& axioms, const SearchBudget& budget = {})
{
  ChainResult out;
  out.chain.goal = goal;
  std::vector<Formula> steps = lemmas;
  steps.push_back(goal);
  std::vector<Formula> basis = axioms;
  for (std::size_t j = 0; j < steps.size(); ++j) {
    if (!is_rank1star(steps[j])) throw std::invalid_argument("search_chain: lemma " + std::to_string(j + 1) + " is not Rank-1*");
    SearchResult r = search(steps[j], basis, Apparatus::tab(), budget);
    out.nodes_explored += r.nodes_explored;
    if (!r.found) {
      out.failed_index = j + 1;
      return out;
    }
    out.chain.pairs.emplace_back(std::move(r.tree), steps[j]);
    basis.push_back(steps[j]);
  }
  out.found = true;
  return out;
}

}  // namespace tlem

#endif  // TLEM_TAB1_HPP
