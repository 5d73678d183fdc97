#pragma once

// Reference computations written directly from the textbook definitions.
// They share nothing with the library beyond the Dataset type.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "nounclass/eval.hpp"
#include "nounclass/features.hpp"
#include "nounclass/random.hpp"

namespace oracle {

inline double entropy(double a, double b) {
  double h = 0.0;
  for (double x : {a, b}) {
    if (x == 0) continue;
    const double p = x / (a + b);
    h -= p * std::log(p) / std::log(2.0);
  }
  return h;
}

struct Split {
  std::size_t feature = 0;
  double lo = 0.0;  // largest value sent left
  double hi = 0.0;  // smallest value sent right
  double gain = 0.0;
  double ratio = 0.0;
};

inline Split score(const nounclass::Dataset& ds, std::size_t f, double lo, double hi) {
  double lm = 0, ln = 0, rm = 0, rn = 0;
  for (const auto& row : ds.rows) {
    const bool member = *row.label == nounclass::Label::Member;
    if (row.features.values[f] <= lo) (member ? lm : ln) += 1;
    else (member ? rm : rn) += 1;
  }
  const double nl = lm + ln, nr = rm + rn, n = nl + nr;
  Split s{f, lo, hi, 0, 0};
  s.gain = entropy(lm + rm, ln + rn) - nl / n * entropy(lm, ln) - nr / n * entropy(rm, rn);
  s.ratio = s.gain / entropy(nl, nr);
  return s;
}

/// Every cut between adjacent distinct values leaving min_leaf rows on each side.
inline std::vector<Split> all_splits(const nounclass::Dataset& ds, std::size_t min_leaf) {
  std::vector<Split> out;
  for (std::size_t f = 0; f < ds.dimension(); ++f) {
    std::vector<double> v;
    for (const auto& row : ds.rows) v.push_back(row.features.values[f]);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      std::size_t left = 0;
      for (const auto& row : ds.rows) left += row.features.values[f] <= v[i];
      if (left < min_leaf || ds.rows.size() - left < min_leaf) continue;
      out.push_back(score(ds, f, v[i], v[i + 1]));
    }
  }
  return out;
}

/// Highest gain ratio among positive-gain cuts whose gain is not below the
/// mean over all cuts. Ties: lower feature, then lower cut.
inline std::optional<Split> best_split(const nounclass::Dataset& ds, std::size_t min_leaf) {
  const auto splits = all_splits(ds, min_leaf);
  if (splits.empty()) return std::nullopt;
  double mean = 0;
  for (const auto& s : splits) mean += s.gain;
  mean /= static_cast<double>(splits.size());
  std::optional<Split> best;
  for (const auto& s : splits) {
    if (s.gain <= 1e-12 || s.gain < mean - 1e-12) continue;
    if (!best || s.ratio > best->ratio + 1e-12) best = s;
  }
  return best;
}

/// P(X <= e) for X ~ Binomial(n, p), summed term by term.
inline double binomial_cdf(std::size_t e, std::size_t n, double p) {
  double sum = 0;
  for (std::size_t i = 0; i <= e; ++i) {
    const double log_term = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
                            (i ? i * std::log(p) : 0.0) + (n - i ? (n - i) * std::log1p(-p) : 0.0);
    sum += std::exp(log_term);
  }
  return sum;
}

/// The p solving binomial_cdf(e, n, p) = cf, by bisection.
inline double upper_rate(std::size_t e, std::size_t n, double cf) {
  if (e >= n) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2;
    (binomial_cdf(e, n, mid) > cf ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

struct Sweep {
  double threshold = 0;
  double accuracy_pct = 0;
  double below_pct = 0;
  bool met = false;
};

/// Tries every distinct confidence as a cut.
inline Sweep sweep(const std::vector<nounclass::LabeledPrediction>& preds, double target) {
  std::vector<double> cuts;
  for (const auto& p : preds) cuts.push_back(p.prediction.confidence);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  Sweep best;
  double best_acc = -1;
  for (double c : cuts) {
    double above = 0, ok = 0;
    for (const auto& p : preds)
      if (p.prediction.confidence >= c) {
        above += 1;
        ok += p.prediction.label == p.gold;
      }
    const Sweep s{c, 100 * ok / above, 100 * (preds.size() - above) / preds.size(), ok / above >= target};
    if (s.met) return s;
    if (ok / above > best_acc) {
      best = s;
      best_acc = ok / above;
    }
  }
  return best;
}

}  // namespace oracle

namespace gen {

/// Labelled dataset with values drawn from a small grid so that ties and
/// repeated values are common.
inline nounclass::Dataset dataset(nounclass::Rng& rng, std::size_t max_rows, std::size_t max_features) {
  nounclass::Dataset ds;
  const std::size_t dims = 1 + rng.below(max_features);
  const std::size_t rows = 2 + rng.below(max_rows - 1);
  for (std::size_t f = 0; f < dims; ++f) ds.groups.push_back("g" + std::to_string(f));
  for (std::size_t r = 0; r < rows; ++r) {
    nounclass::DatasetRow row;
    row.features.lemma = "w" + std::to_string(r);
    for (std::size_t f = 0; f < dims; ++f)
      row.features.values.push_back(static_cast<double>(rng.below(6)) / 5.0);
    row.features.seen = true;
    row.label = rng.below(2) ? nounclass::Label::Member : nounclass::Label::Nonmember;
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

}  // namespace gen
