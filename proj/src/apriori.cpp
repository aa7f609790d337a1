#include "webreorg/apriori.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace webreorg {

namespace {

// items ⊆ sorted? Both vectors sorted ascending.
bool contains_all(const std::vector<int>& transaction,
                  const std::vector<int>& items) {
  auto it = transaction.begin();
  for (int x : items) {
    it = std::lower_bound(it, transaction.end(), x);
    if (it == transaction.end() || *it != x) return false;
    ++it;
  }
  return true;
}

long count_support(const std::vector<Transaction>& transactions,
                   const std::vector<int>& items) {
  long count = 0;
  for (const auto& t : transactions) {
    if (contains_all(t.items, items)) ++count;
  }
  return count;
}

}  // namespace

long support_min_count(double threshold, std::size_t n_transactions) {
  double raw = threshold * static_cast<double>(n_transactions);
  long count = static_cast<long>(std::ceil(raw - 1e-9));
  return std::max(count, 1L);
}

std::vector<Itemset> frequent_itemsets_at(
    const std::vector<Transaction>& transactions, long min_count) {
  std::vector<Itemset> result;

  std::map<int, long> singletons;
  for (const auto& t : transactions) {
    for (int item : t.items) ++singletons[item];
  }
  std::vector<std::vector<int>> level;
  for (const auto& [item, count] : singletons) {
    if (count >= min_count) {
      level.push_back({item});
      result.push_back({{item}, count});
    }
  }

  while (level.size() > 1) {
    // Join pairs sharing all but their last item, then prune candidates with
    // an infrequent subset.
    std::vector<std::vector<int>> next;
    for (std::size_t a = 0; a < level.size(); ++a) {
      for (std::size_t b = a + 1; b < level.size(); ++b) {
        if (!std::equal(level[a].begin(), level[a].end() - 1,
                        level[b].begin())) {
          break;  // level is sorted, later entries share even less
        }
        std::vector<int> candidate = level[a];
        candidate.push_back(level[b].back());
        bool pruned = false;
        for (std::size_t drop = 0; drop < candidate.size() && !pruned;
             ++drop) {
          std::vector<int> sub;
          sub.reserve(candidate.size() - 1);
          for (std::size_t i = 0; i < candidate.size(); ++i) {
            if (i != drop) sub.push_back(candidate[i]);
          }
          pruned = !std::binary_search(level.begin(), level.end(), sub);
        }
        if (!pruned) next.push_back(std::move(candidate));
      }
    }
    level.clear();
    for (auto& candidate : next) {
      long count = count_support(transactions, candidate);
      if (count >= min_count) {
        result.push_back({candidate, count});
        level.push_back(std::move(candidate));
      }
    }
  }

  std::sort(result.begin(), result.end(), [](const Itemset& a,
                                             const Itemset& b) {
    if (a.items.size() != b.items.size()) {
      return a.items.size() < b.items.size();
    }
    return a.items < b.items;
  });
  return result;
}

MiningResult mine_frequent(const std::vector<Transaction>& transactions,
                           const MiningParams& params) {
  if (transactions.empty()) {
    throw std::invalid_argument("no transactions to mine");
  }
  if (params.lower_bound_support < 0.0 || params.upper_bound_support > 1.0 ||
      params.lower_bound_support > params.upper_bound_support ||
      !(params.delta > 0.0)) {
    throw std::invalid_argument("inconsistent support schedule");
  }

  MiningResult out;
  for (int step = 0;; ++step) {
    double support =
        params.upper_bound_support - static_cast<double>(step) * params.delta;
    long min_count = support_min_count(support, transactions.size());
    out.itemsets = frequent_itemsets_at(transactions, min_count);
    out.final_support = support;
    out.min_count = min_count;
    if (static_cast<int>(out.itemsets.size()) >= params.required_itemsets) {
      break;
    }
    double next = support - params.delta;
    if (next < params.lower_bound_support - 1e-12) break;
  }
  return out;
}

std::vector<Rule> generate_rules(const std::vector<Itemset>& itemsets,
                                 const std::vector<Transaction>& transactions,
                                 double min_confidence) {
  std::map<std::vector<int>, long> support;
  for (const auto& is : itemsets) support[is.items] = is.support_count;
  auto support_of = [&](const std::vector<int>& items) {
    auto it = support.find(items);
    return it != support.end() ? it->second
                               : count_support(transactions, items);
  };

  std::vector<Rule> rules;
  for (const auto& is : itemsets) {
    const std::size_t m = is.items.size();
    if (m < 2) continue;
    for (unsigned mask = 1; mask + 1 < (1u << m); ++mask) {
      Rule rule;
      for (std::size_t i = 0; i < m; ++i) {
        (mask & (1u << i) ? rule.antecedent : rule.consequent)
            .push_back(is.items[i]);
      }
      rule.support_count = is.support_count;
      rule.antecedent_count = support_of(rule.antecedent);
      double bar = min_confidence * static_cast<double>(rule.antecedent_count);
      if (static_cast<double>(rule.support_count) + 1e-9 >= bar) {
        rules.push_back(std::move(rule));
      }
    }
  }
  return rules;
}

std::vector<CandidateLink> extract_candidate_links(
    const std::vector<Rule>& rules,
    const std::vector<Transaction>& transactions) {
  struct Direction {
    long num = 0;
    long den = 0;
    bool present = false;
  };
  // Unordered pair (lo, hi) -> the two possible directions.
  std::map<std::pair<int, int>, std::pair<Direction, Direction>> pairs;
  for (const auto& rule : rules) {
    if (rule.antecedent.size() != 1 || rule.consequent.size() != 1) continue;
    int a = rule.antecedent[0];
    int b = rule.consequent[0];
    auto key = std::minmax(a, b);
    auto& [fwd, rev] = pairs[key];
    Direction& dir = a == key.first ? fwd : rev;
    dir = {rule.support_count, rule.antecedent_count, true};
  }

  // first-occurrence order vote: how many sequences see `first` before
  // `second`.
  auto precedence_votes = [&](int first, int second) {
    long votes = 0;
    for (const auto& t : transactions) {
      for (int page : t.sequence) {
        if (page == first) {
          ++votes;
          break;
        }
        if (page == second) break;
      }
    }
    return votes;
  };

  std::vector<CandidateLink> links;
  for (const auto& [key, dirs] : pairs) {
    const auto& [fwd, rev] = dirs;
    int lo = key.first, hi = key.second;
    bool forward;  // lo -> hi?
    if (fwd.present != rev.present) {
      forward = fwd.present;
    } else {
      // Both survived the confidence filter: higher confidence wins.
      long long cross_f = static_cast<long long>(fwd.num) * rev.den;
      long long cross_r = static_cast<long long>(rev.num) * fwd.den;
      if (cross_f != cross_r) {
        forward = cross_f > cross_r;
      } else {
        long lo_first = precedence_votes(lo, hi);
        long hi_first = precedence_votes(hi, lo);
        forward = lo_first != hi_first ? lo_first > hi_first : true;
      }
    }
    const Direction& dir = forward ? fwd : rev;
    CandidateLink link;
    link.src = forward ? lo : hi;
    link.dst = forward ? hi : lo;
    link.support_count = dir.num;
    link.conf_num = dir.num;
    link.conf_den = dir.den;
    links.push_back(link);
  }

  std::sort(links.begin(), links.end(),
            [](const CandidateLink& a, const CandidateLink& b) {
              if (a.support_count != b.support_count) {
                return a.support_count > b.support_count;
              }
              long long ca = static_cast<long long>(a.conf_num) * b.conf_den;
              long long cb = static_cast<long long>(b.conf_num) * a.conf_den;
              if (ca != cb) return ca > cb;
              if (a.src != b.src) return a.src < b.src;
              return a.dst < b.dst;
            });
  return links;
}

}  // namespace webreorg
