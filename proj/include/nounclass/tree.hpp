#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nounclass/features.hpp"

namespace nounclass {

struct ClassCounts {
  std::size_t members = 0;
  std::size_t nonmembers = 0;

  std::size_t total() const { return members + nonmembers; }
  /// Majority class; ties go to non-member.
  Label majority() const { return members > nonmembers ? Label::Member : Label::Nonmember; }
  std::size_t errors() const { return total() - (members > nonmembers ? members : nonmembers); }
  void add(Label label) { ++(label == Label::Member ? members : nonmembers); }

  bool operator==(const ClassCounts&) const = default;
};

struct TrainParams {
  std::size_t min_leaf = 2;
  double confidence_factor = 0.25;
  std::optional<std::size_t> max_depth;
  bool subtree_raising = true;
  bool laplace_confidence = false;

  void validate() const;
  bool operator==(const TrainParams&) const = default;
};

/// Binary tree node. Leaves have no children; splits send `value <= threshold`
/// left. `counts` holds the training class distribution that reached the node.
struct TreeNode {
  std::size_t feature = 0;
  double threshold = 0.0;
  std::unique_ptr<TreeNode> left;
  std::unique_ptr<TreeNode> right;
  ClassCounts counts;

  TreeNode() = default;
  TreeNode(const TreeNode& other);
  TreeNode& operator=(const TreeNode& other);
  TreeNode(TreeNode&&) noexcept = default;
  TreeNode& operator=(TreeNode&&) noexcept = default;

  static TreeNode leaf(ClassCounts counts);
  static TreeNode split(std::size_t feature, double threshold, TreeNode left, TreeNode right);

  bool is_leaf() const { return !left; }
  Label label() const { return counts.majority(); }

  bool operator==(const TreeNode& other) const;
};

std::size_t node_count(const TreeNode& node);
std::size_t leaf_count(const TreeNode& node);
std::size_t depth(const TreeNode& node);

/// Pre-order index of the leaf reached by `values`.
std::size_t leaf_index(const TreeNode& root, std::span<const double> values);

/// Shannon entropy in bits. Throws when both counts are zero.
double entropy(ClassCounts counts);

struct SplitScore {
  double gain = 0.0;
  double split_info = 0.0;
  double ratio = 0.0;
};

/// Gain ratio of partitioning the labelled rows at `value <= threshold`.
/// Empty when either side holds fewer than `min_leaf` rows.
std::optional<SplitScore> gain_ratio(const Dataset& dataset, std::size_t feature,
                                     double threshold, std::size_t min_leaf = 1);

struct SplitChoice {
  std::size_t feature = 0;
  double threshold = 0.0;
  SplitScore score;
};

/// Best (feature, threshold) over `rows`: highest gain ratio among the
/// candidates whose gain is at least the mean candidate gain and positive.
/// Ties go to the lower feature index, then the lower threshold.
std::optional<SplitChoice> best_split(const Dataset& dataset, std::span<const std::size_t> rows,
                                      const TrainParams& params);

/// Midpoint of two adjacent distinct values, shortened to 9 significant
/// digits when that keeps it strictly between them.
double split_threshold(double lo, double hi);

/// Unpruned tree. When `assignment` is given it receives the leaf index of
/// every training row.
TreeNode grow(const Dataset& dataset, const TrainParams& params,
              std::vector<std::size_t>* assignment = nullptr);

/// Upper bound of the binomial confidence interval on a leaf's error rate:
/// the p for which P(X <= errors | n, p) = cf.
double upper_error_rate(std::size_t errors, std::size_t n, double cf);

/// Pessimistic error count of a leaf: max(errors, n * upper_error_rate).
double pessimistic_errors(const ClassCounts& counts, double cf);

/// Sum of leaf pessimistic errors after routing `dataset` through `root`.
double tree_pessimistic_errors(const TreeNode& root, const Dataset& dataset, double cf);

TreeNode prune(const TreeNode& tree, const Dataset& dataset, const TrainParams& params);

struct DecisionTree {
  std::vector<std::string> groups;
  TrainParams params;
  TreeNode root;

  bool operator==(const DecisionTree&) const = default;
};

/// grow followed by prune.
DecisionTree train(const Dataset& dataset, const TrainParams& params);

struct Prediction {
  std::string lemma;
  Label label = Label::Nonmember;
  double confidence = 0.0;

  bool operator==(const Prediction&) const = default;
};

Prediction classify(const DecisionTree& tree, const FeatureVector& vector);

/// Model file: magic line, groups, params, then one node per line indented
/// two spaces per depth: `split <group> <= <threshold>` or `leaf <m> <n>`.
void write_model(std::ostream& out, const DecisionTree& tree);
DecisionTree parse_model(std::istream& in);
DecisionTree parse_model_file(const std::string& path);

}  // namespace nounclass
