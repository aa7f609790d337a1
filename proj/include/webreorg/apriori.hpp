#pragma once

#include <cstdint>
#include <vector>

#include "webreorg/preprocess.hpp"

namespace webreorg {

struct Itemset {
  std::vector<int> items;  // sorted
  long support_count = 0;
};

// Association rule with exact integer counts. confidence() is
// support_count / antecedent_count; comparisons elsewhere use the counts
// directly (cross-multiplication) to avoid rounding.
struct Rule {
  std::vector<int> antecedent;  // sorted, non-empty
  std::vector<int> consequent;  // sorted, non-empty, disjoint from antecedent
  long support_count = 0;       // of antecedent ∪ consequent
  long antecedent_count = 0;

  double confidence() const {
    return static_cast<double>(support_count) /
           static_cast<double>(antecedent_count);
  }
};

struct MiningParams {
  double upper_bound_support = 1.0;
  double lower_bound_support = 0.1;
  double delta = 0.05;
  double min_confidence = 0.9;
  int required_itemsets = 10;
};

struct MiningResult {
  std::vector<Itemset> itemsets;  // sorted by (size, items)
  double final_support = 0.0;     // threshold of the returned run
  long min_count = 0;             // its integer support floor
};

// Integer support floor for a fractional threshold: ceil(threshold * n),
// clamped to at least 1.
long support_min_count(double threshold, std::size_t n_transactions);

// Level-wise Apriori at a fixed integer support floor: candidate join,
// downward-closure prune, exact support counting over transaction item sets.
std::vector<Itemset> frequent_itemsets_at(
    const std::vector<Transaction>& transactions, long min_count);

// Runs Apriori starting at upper_bound_support, decrementing by delta until
// at least required_itemsets are found or the next step would cross
// lower_bound_support; returns the final run. Throws std::invalid_argument
// on empty input or inconsistent bounds.
MiningResult mine_frequent(const std::vector<Transaction>& transactions,
                           const MiningParams& params);

// Every antecedent/consequent partition of each itemset of size >= 2 whose
// confidence reaches min_confidence.
std::vector<Rule> generate_rules(const std::vector<Itemset>& itemsets,
                                 const std::vector<Transaction>& transactions,
                                 double min_confidence);

struct CandidateLink {
  int src = 0;
  int dst = 0;
  long support_count = 0;
  long conf_num = 0;  // confidence numerator = support of {src, dst}
  long conf_den = 0;  // confidence denominator = support of {src}
};

// Singleton => singleton rules reduced to one directed link per unordered
// pair: the higher-confidence direction wins; on an exact tie, the majority
// first-occurrence order across transaction sequences decides, then the
// lower page id. Sorted by (support desc, confidence desc, src, dst).
std::vector<CandidateLink> extract_candidate_links(
    const std::vector<Rule>& rules,
    const std::vector<Transaction>& transactions);

}  // namespace webreorg
