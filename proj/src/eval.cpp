#include "nounclass/eval.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "nounclass/error.hpp"
#include "nounclass/random.hpp"
#include "nounclass/text.hpp"

namespace nounclass {

Folds stratified_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorKind::Usage, "k must be at least 2");
  std::vector<std::size_t> members, nonmembers;
  for (std::size_t i = 0; i < dataset.rows.size(); ++i) {
    const auto& label = dataset.rows[i].label;
    if (!label) throw Error(ErrorKind::Data, "row '" + dataset.rows[i].features.lemma + "' has no label");
    (*label == Label::Member ? members : nonmembers).push_back(i);
  }
  if (members.size() < k || nonmembers.size() < k)
    throw Error(ErrorKind::Data, "each class needs at least k=" + std::to_string(k) +
                                     " rows (members " + std::to_string(members.size()) +
                                     ", non-members " + std::to_string(nonmembers.size()) + ")");

  Rng rng(seed);
  auto shuffle = [&](std::vector<std::size_t>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
  };
  shuffle(members);
  shuffle(nonmembers);

  // Deal members then non-members round-robin, continuing the rotation so
  // fold sizes stay within one of each other as well.
  Folds folds(k);
  std::size_t slot = 0;
  for (auto r : members) folds[slot++ % k].push_back(r);
  for (auto r : nonmembers) folds[slot++ % k].push_back(r);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

void Confusion::add(Label predicted, Label gold) {
  if (predicted == Label::Member)
    ++(gold == Label::Member ? true_positive : false_positive);
  else
    ++(gold == Label::Member ? false_negative : true_negative);
}

Rates rates(const Confusion& c) {
  Rates r;
  const double n = static_cast<double>(c.total());
  if (n == 0) return r;
  r.accuracy_pct = 100.0 * static_cast<double>(c.true_positive + c.true_negative) / n;
  r.fp_pct = 100.0 * static_cast<double>(c.false_positive) / n;
  r.fn_pct = 100.0 * static_cast<double>(c.false_negative) / n;
  return r;
}

CrossValidation cross_validate(const Dataset& dataset, const TrainParams& params, std::size_t k,
                               std::uint64_t seed) {
  const Folds folds = stratified_folds(dataset, k, seed);
  CrossValidation cv;
  cv.predictions.resize(dataset.rows.size());
  std::vector<bool> in_test(dataset.rows.size());

  for (const auto& fold : folds) {
    std::fill(in_test.begin(), in_test.end(), false);
    for (auto r : fold) in_test[r] = true;
    Dataset train_set;
    train_set.groups = dataset.groups;
    for (std::size_t i = 0; i < dataset.rows.size(); ++i)
      if (!in_test[i]) train_set.rows.push_back(dataset.rows[i]);

    const DecisionTree tree = train(train_set, params);
    FoldReport report;
    for (auto r : fold) {
      const auto& row = dataset.rows[r];
      LabeledPrediction lp{classify(tree, row.features), *row.label};
      report.confusion.add(lp.prediction.label, lp.gold);
      cv.report.confusion.add(lp.prediction.label, lp.gold);
      cv.predictions[r] = std::move(lp);
    }
    report.rates = rates(report.confusion);
    cv.report.folds.push_back(report);
  }
  const Rates pooled = rates(cv.report.confusion);
  cv.report.accuracy_pct = pooled.accuracy_pct;
  cv.report.fp_pct = pooled.fp_pct;
  cv.report.fn_pct = pooled.fn_pct;
  return cv;
}

ThresholdReport threshold_sweep(std::span<const LabeledPrediction> predictions,
                                double target_precision) {
  if (predictions.empty()) throw Error(ErrorKind::Data, "no predictions to sweep");
  if (!(target_precision > 0.0 && target_precision <= 1.0))
    throw Error(ErrorKind::Usage, "target precision must lie in (0,1]");

  std::set<double> cuts;
  for (const auto& p : predictions) cuts.insert(p.prediction.confidence);

  ThresholdReport best;
  best.target_precision = target_precision;
  best.total = predictions.size();
  bool have_best = false;
  double best_accuracy = -1.0;
  for (double cut : cuts) {  // ascending
    std::size_t above = 0, correct = 0;
    for (const auto& p : predictions) {
      if (p.prediction.confidence < cut) continue;
      ++above;
      if (p.correct()) ++correct;
    }
    const double accuracy = static_cast<double>(correct) / static_cast<double>(above);
    auto fill = [&](ThresholdReport& r) {
      r.threshold = cut;
      r.above = above;
      r.accuracy_above_pct = 100.0 * accuracy;
      r.fraction_below_pct =
          100.0 * static_cast<double>(predictions.size() - above) / static_cast<double>(predictions.size());
    };
    if (accuracy >= target_precision) {
      fill(best);
      best.target_met = true;
      return best;
    }
    if (!have_best || accuracy > best_accuracy) {
      fill(best);
      best_accuracy = accuracy;
      have_best = true;
    }
  }
  return best;
}

double automation_estimate(const ThresholdReport& report) { return 100.0 - report.fraction_below_pct; }

std::optional<std::string> class_skew_warning(const Dataset& dataset) {
  std::size_t members = 0, nonmembers = 0;
  for (const auto& row : dataset.rows) {
    if (!row.label) continue;
    ++(*row.label == Label::Member ? members : nonmembers);
  }
  const std::size_t lo = std::min(members, nonmembers), hi = std::max(members, nonmembers);
  if (hi > 2 * lo)
    return "class skew exceeds 2:1 (" + std::to_string(members) + " members, " +
           std::to_string(nonmembers) + " non-members); a majority-class baseline is not meaningful";
  return std::nullopt;
}

void write_report(std::ostream& out, const EvalReport& eval, const ThresholdReport& thr,
                  const ReportInfo& info) {
  if (!info.class_name.empty()) out << "class=" << info.class_name << '\n';
  out << "n=" << eval.confusion.total() << '\n'
      << "acc=" << text::fixed(eval.accuracy_pct, 4) << '\n'
      << "fp=" << text::fixed(eval.fp_pct, 4) << '\n'
      << "fn=" << text::fixed(eval.fn_pct, 4) << '\n'
      << "target_precision=" << text::fixed(thr.target_precision, 4) << '\n'
      << "threshold=" << text::sig9(thr.threshold) << '\n'
      << "threshold_selection=pooled\n"
      << "thr_acc=" << text::fixed(thr.accuracy_above_pct, 4) << '\n'
      << "to_revise=" << text::fixed(thr.fraction_below_pct, 4) << '\n'
      << "automated=" << text::fixed(automation_estimate(thr), 4) << '\n'
      << "k=" << info.k << '\n'
      << "seed=" << info.seed << '\n';
  for (std::size_t i = 0; i < eval.folds.size(); ++i) {
    const auto& f = eval.folds[i];
    out << "fold" << i << "=n:" << f.confusion.total() << ",acc:" << text::fixed(f.rates.accuracy_pct, 4)
        << ",fp:" << text::fixed(f.rates.fp_pct, 4) << ",fn:" << text::fixed(f.rates.fn_pct, 4) << '\n';
  }
}

void write_predictions(std::ostream& out, std::span<const Prediction> predictions) {
  for (const auto& p : predictions)
    out << p.lemma << '\t' << (p.label == Label::Member ? '1' : '0') << '\t'
        << text::fixed(p.confidence, 6) << '\n';
}

void write_predictions(std::ostream& out, std::span<const LabeledPrediction> predictions) {
  for (const auto& lp : predictions) {
    const auto& p = lp.prediction;
    out << p.lemma << '\t' << (p.label == Label::Member ? '1' : '0') << '\t'
        << text::fixed(p.confidence, 6) << '\t' << (lp.gold == Label::Member ? '1' : '0') << '\n';
  }
}

}  // namespace nounclass
