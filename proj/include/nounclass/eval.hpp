#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nounclass/tree.hpp"

namespace nounclass {

/// Row indices of each fold, ascending.
using Folds = std::vector<std::vector<std::size_t>>;

/// Class-stratified partition into k folds. Every class needs at least k rows.
Folds stratified_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed);

struct Confusion {
  std::size_t true_positive = 0;
  std::size_t true_negative = 0;
  std::size_t false_positive = 0;  // non-member predicted member
  std::size_t false_negative = 0;  // member predicted non-member

  std::size_t total() const { return true_positive + true_negative + false_positive + false_negative; }
  void add(Label predicted, Label gold);
};

/// Accuracy and error rates, all as percentages of every instance.
struct Rates {
  double accuracy_pct = 0.0;
  double fp_pct = 0.0;
  double fn_pct = 0.0;
};

Rates rates(const Confusion& c);

struct FoldReport {
  Confusion confusion;
  Rates rates;
};

struct EvalReport {
  double accuracy_pct = 0.0;
  double fp_pct = 0.0;
  double fn_pct = 0.0;
  Confusion confusion;
  std::vector<FoldReport> folds;
};

struct LabeledPrediction {
  Prediction prediction;
  Label gold = Label::Nonmember;

  bool correct() const { return prediction.label == gold; }
};

struct CrossValidation {
  EvalReport report;
  std::vector<LabeledPrediction> predictions;  // dataset order, one per row
};

CrossValidation cross_validate(const Dataset& dataset, const TrainParams& params, std::size_t k,
                               std::uint64_t seed);

struct ThresholdReport {
  double threshold = 1.0;
  double accuracy_above_pct = 0.0;
  double fraction_below_pct = 0.0;  // share routed to manual revision
  double target_precision = 0.9;
  std::size_t above = 0;
  std::size_t total = 0;
  bool target_met = false;
};

/// Picks the lowest confidence cut whose accepted predictions reach
/// `target_precision`; when no cut does, the cut with the best accuracy.
ThresholdReport threshold_sweep(std::span<const LabeledPrediction> predictions,
                                double target_precision);

/// Share of the lexicon handled without revision, in percent.
double automation_estimate(const ThresholdReport& report);

/// Warning text when one class outnumbers the other by more than 2:1.
std::optional<std::string> class_skew_warning(const Dataset& dataset);

struct ReportInfo {
  std::string class_name;
  std::size_t k = 10;
  std::uint64_t seed = 0;
};

/// key=value report: accuracy and error split, then the triage figures.
void write_report(std::ostream& out, const EvalReport& eval, const ThresholdReport& thr,
                  const ReportInfo& info);

/// `lemma<TAB>label<TAB>confidence` with label 1/0.
void write_predictions(std::ostream& out, std::span<const Prediction> predictions);
void write_predictions(std::ostream& out, std::span<const LabeledPrediction> predictions);

}  // namespace nounclass
