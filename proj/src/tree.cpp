#include "nounclass/tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

#include "nounclass/error.hpp"
#include "nounclass/text.hpp"

namespace nounclass {

namespace {

constexpr double kEps = 1e-12;
constexpr double kPruneEps = 1e-9;
constexpr std::string_view kModelMagic = "nounclass-model 1";

Label require_label(const DatasetRow& row) {
  if (!row.label) throw Error(ErrorKind::Data, "row '" + row.features.lemma + "' has no label");
  return *row.label;
}

ClassCounts count_rows(const Dataset& ds, std::span<const std::size_t> rows) {
  ClassCounts c;
  for (auto r : rows) c.add(require_label(ds.rows[r]));
  return c;
}

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

double entropy2(double a, double b) {
  const double n = a + b;
  return -(xlog2x(a / n) + xlog2x(b / n));
}

}  // namespace

void TrainParams::validate() const {
  if (min_leaf < 1) throw Error(ErrorKind::Usage, "min_leaf must be at least 1");
  if (!(confidence_factor > 0.0 && confidence_factor < 1.0))
    throw Error(ErrorKind::Usage, "confidence factor must lie in (0,1)");
}

TreeNode::TreeNode(const TreeNode& other)
    : feature(other.feature),
      threshold(other.threshold),
      left(other.left ? std::make_unique<TreeNode>(*other.left) : nullptr),
      right(other.right ? std::make_unique<TreeNode>(*other.right) : nullptr),
      counts(other.counts) {}

TreeNode& TreeNode::operator=(const TreeNode& other) {
  if (this != &other) *this = TreeNode(other);
  return *this;
}

TreeNode TreeNode::leaf(ClassCounts counts) {
  TreeNode n;
  n.counts = counts;
  return n;
}

TreeNode TreeNode::split(std::size_t feature, double threshold, TreeNode left, TreeNode right) {
  TreeNode n;
  n.feature = feature;
  n.threshold = threshold;
  n.counts = {left.counts.members + right.counts.members,
              left.counts.nonmembers + right.counts.nonmembers};
  n.left = std::make_unique<TreeNode>(std::move(left));
  n.right = std::make_unique<TreeNode>(std::move(right));
  return n;
}

bool TreeNode::operator==(const TreeNode& other) const {
  if (counts != other.counts || is_leaf() != other.is_leaf()) return false;
  if (is_leaf()) return true;
  return feature == other.feature && threshold == other.threshold && *left == *other.left &&
         *right == *other.right;
}

std::size_t node_count(const TreeNode& node) {
  return node.is_leaf() ? 1 : 1 + node_count(*node.left) + node_count(*node.right);
}

std::size_t leaf_count(const TreeNode& node) {
  return node.is_leaf() ? 1 : leaf_count(*node.left) + leaf_count(*node.right);
}

std::size_t depth(const TreeNode& node) {
  return node.is_leaf() ? 0 : 1 + std::max(depth(*node.left), depth(*node.right));
}

std::size_t leaf_index(const TreeNode& root, std::span<const double> values) {
  std::size_t offset = 0;
  const TreeNode* node = &root;
  while (!node->is_leaf()) {
    if (values[node->feature] <= node->threshold) {
      node = node->left.get();
    } else {
      offset += leaf_count(*node->left);
      node = node->right.get();
    }
  }
  return offset;
}

double entropy(ClassCounts counts) {
  if (counts.total() == 0) throw Error(ErrorKind::Data, "entropy of an empty distribution");
  return entropy2(static_cast<double>(counts.members), static_cast<double>(counts.nonmembers));
}

namespace {

SplitScore score_partition(const ClassCounts& parent, const ClassCounts& left,
                           const ClassCounts& right) {
  const double n = static_cast<double>(parent.total());
  const double nl = static_cast<double>(left.total());
  const double nr = static_cast<double>(right.total());
  SplitScore s;
  s.gain = entropy(parent) - (nl / n) * entropy(left) - (nr / n) * entropy(right);
  s.split_info = entropy2(nl, nr);
  s.ratio = s.gain / s.split_info;
  return s;
}

}  // namespace

std::optional<SplitScore> gain_ratio(const Dataset& dataset, std::size_t feature,
                                     double threshold, std::size_t min_leaf) {
  if (feature >= dataset.dimension()) throw Error(ErrorKind::Data, "feature index out of range");
  ClassCounts left, right;
  for (const auto& row : dataset.rows) {
    const Label label = require_label(row);
    (row.features.values[feature] <= threshold ? left : right).add(label);
  }
  if (left.total() < std::max<std::size_t>(min_leaf, 1) ||
      right.total() < std::max<std::size_t>(min_leaf, 1))
    return std::nullopt;
  ClassCounts parent{left.members + right.members, left.nonmembers + right.nonmembers};
  return score_partition(parent, left, right);
}

double split_threshold(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", mid);
  const double shortened = std::strtod(buf, nullptr);
  return (shortened > lo && shortened < hi) ? shortened : mid;
}

std::optional<SplitChoice> best_split(const Dataset& dataset, std::span<const std::size_t> rows,
                                      const TrainParams& params) {
  const ClassCounts parent = count_rows(dataset, rows);
  if (parent.total() == 0) return std::nullopt;

  std::vector<SplitChoice> candidates;
  std::vector<std::size_t> order(rows.begin(), rows.end());
  for (std::size_t f = 0; f < dataset.dimension(); ++f) {
    auto value = [&](std::size_t r) { return dataset.rows[r].features.values[f]; };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
    ClassCounts left;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      left.add(*dataset.rows[order[i]].label);
      const double lo = value(order[i]), hi = value(order[i + 1]);
      if (!(lo < hi)) continue;
      const std::size_t nl = i + 1, nr = order.size() - nl;
      if (nl < params.min_leaf || nr < params.min_leaf) continue;
      ClassCounts right{parent.members - left.members, parent.nonmembers - left.nonmembers};
      candidates.push_back({f, split_threshold(lo, hi), score_partition(parent, left, right)});
    }
  }
  if (candidates.empty()) return std::nullopt;

  double mean_gain = 0.0;
  for (const auto& c : candidates) mean_gain += c.score.gain;
  mean_gain /= static_cast<double>(candidates.size());

  const SplitChoice* best = nullptr;
  for (const auto& c : candidates) {
    if (c.score.gain <= kEps || c.score.gain < mean_gain - kEps) continue;
    // candidates are in (feature, threshold) order, so only a strictly
    // larger ratio displaces the incumbent
    if (!best || c.score.ratio > best->score.ratio + kEps) best = &c;
  }
  if (!best) return std::nullopt;
  return *best;
}

namespace {

struct Grower {
  const Dataset& ds;
  const TrainParams& params;
  std::vector<std::size_t>* assignment;
  std::size_t next_leaf = 0;

  TreeNode make_leaf(const ClassCounts& counts, std::span<const std::size_t> rows) {
    if (assignment)
      for (auto r : rows) (*assignment)[r] = next_leaf;
    ++next_leaf;
    return TreeNode::leaf(counts);
  }

  TreeNode build(std::vector<std::size_t> rows, std::size_t level) {
    const ClassCounts counts = count_rows(ds, rows);
    const bool pure = counts.members == 0 || counts.nonmembers == 0;
    const bool too_small = rows.size() < 2 * params.min_leaf;
    const bool too_deep = params.max_depth && level >= *params.max_depth;
    if (pure || too_small || too_deep) return make_leaf(counts, rows);

    auto choice = best_split(ds, rows, params);
    if (!choice) return make_leaf(counts, rows);

    std::vector<std::size_t> left_rows, right_rows;
    for (auto r : rows)
      (ds.rows[r].features.values[choice->feature] <= choice->threshold ? left_rows : right_rows)
          .push_back(r);
    TreeNode left = build(std::move(left_rows), level + 1);
    TreeNode right = build(std::move(right_rows), level + 1);
    return TreeNode::split(choice->feature, choice->threshold, std::move(left), std::move(right));
  }
};

void check_dimensions(const Dataset& ds) {
  for (const auto& row : ds.rows)
    if (row.features.values.size() != ds.dimension())
      throw Error(ErrorKind::Data, "row '" + row.features.lemma + "' has the wrong dimension");
}

}  // namespace

TreeNode grow(const Dataset& dataset, const TrainParams& params,
              std::vector<std::size_t>* assignment) {
  params.validate();
  if (dataset.rows.empty()) throw Error(ErrorKind::Data, "cannot grow a tree on an empty dataset");
  check_dimensions(dataset);
  for (const auto& row : dataset.rows) require_label(row);
  if (assignment) assignment->assign(dataset.rows.size(), 0);
  std::vector<std::size_t> rows(dataset.rows.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return Grower{dataset, params, assignment}.build(std::move(rows), 0);
}

double upper_error_rate(std::size_t errors, std::size_t n, double cf) {
  if (n == 0) throw Error(ErrorKind::Data, "error rate of an empty leaf");
  if (errors >= n) return 1.0;
  // P(X <= e | n, p) = cf  <=>  I_p(e + 1, n - e) = 1 - cf
  return boost::math::ibeta_inv(static_cast<double>(errors + 1), static_cast<double>(n - errors),
                                1.0 - cf);
}

double pessimistic_errors(const ClassCounts& counts, double cf) {
  const double observed = static_cast<double>(counts.errors());
  return std::max(observed,
                  static_cast<double>(counts.total()) * upper_error_rate(counts.errors(), counts.total(), cf));
}

namespace {

double subtree_errors(const TreeNode& node, double cf) {
  if (node.is_leaf()) return pessimistic_errors(node.counts, cf);
  return subtree_errors(*node.left, cf) + subtree_errors(*node.right, cf);
}

void partition(const Dataset& ds, const TreeNode& node, std::span<const std::size_t> rows,
               std::vector<std::size_t>& left, std::vector<std::size_t>& right) {
  for (auto r : rows)
    (ds.rows[r].features.values[node.feature] <= node.threshold ? left : right).push_back(r);
}

/// Re-routes `rows` through a copy of `node`, recounting every leaf. Splits
/// left without rows on one side collapse into the other side.
TreeNode recount(const TreeNode& node, const Dataset& ds, std::span<const std::size_t> rows) {
  if (node.is_leaf()) return TreeNode::leaf(count_rows(ds, rows));
  std::vector<std::size_t> l, r;
  partition(ds, node, rows, l, r);
  if (l.empty()) return recount(*node.right, ds, r);
  if (r.empty()) return recount(*node.left, ds, l);
  return TreeNode::split(node.feature, node.threshold, recount(*node.left, ds, l),
                         recount(*node.right, ds, r));
}

struct Pruner {
  const Dataset& ds;
  const TrainParams& params;

  TreeNode run(const TreeNode& node, std::span<const std::size_t> rows) {
    const ClassCounts counts = count_rows(ds, rows);
    if (node.is_leaf()) return TreeNode::leaf(counts);

    std::vector<std::size_t> l, r;
    partition(ds, node, rows, l, r);
    if (l.empty()) return run(*node.right, rows);
    if (r.empty()) return run(*node.left, rows);

    TreeNode kept = TreeNode::split(node.feature, node.threshold, run(*node.left, l),
                                    run(*node.right, r));
    const double cf = params.confidence_factor;
    const double as_tree = subtree_errors(kept, cf);
    const double as_leaf = pessimistic_errors(counts, cf);

    std::optional<TreeNode> raised;
    double as_branch = as_tree + 1.0;
    if (params.subtree_raising) {
      const TreeNode& larger = l.size() >= r.size() ? *kept.left : *kept.right;
      if (!larger.is_leaf()) {
        raised = recount(larger, ds, rows);
        as_branch = subtree_errors(*raised, cf);
      }
    }

    if (as_leaf <= as_tree + kPruneEps && as_leaf <= as_branch + kPruneEps)
      return TreeNode::leaf(counts);
    if (raised && as_branch <= as_tree + kPruneEps) return run(*raised, rows);
    return kept;
  }
};

}  // namespace

double tree_pessimistic_errors(const TreeNode& root, const Dataset& dataset, double cf) {
  std::vector<std::size_t> rows(dataset.rows.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return subtree_errors(recount(root, dataset, rows), cf);
}

TreeNode prune(const TreeNode& tree, const Dataset& dataset, const TrainParams& params) {
  params.validate();
  if (dataset.rows.empty()) return tree;
  std::vector<std::size_t> rows(dataset.rows.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return Pruner{dataset, params}.run(tree, rows);
}

DecisionTree train(const Dataset& dataset, const TrainParams& params) {
  DecisionTree tree;
  tree.groups = dataset.groups;
  tree.params = params;
  tree.root = prune(grow(dataset, params), dataset, params);
  return tree;
}

Prediction classify(const DecisionTree& tree, const FeatureVector& vector) {
  if (vector.values.size() != tree.groups.size())
    throw Error(ErrorKind::Data, "vector for '" + vector.lemma + "' has dimension " +
                                     std::to_string(vector.values.size()) + ", model expects " +
                                     std::to_string(tree.groups.size()));
  const TreeNode* node = &tree.root;
  while (!node->is_leaf())
    node = vector.values[node->feature] <= node->threshold ? node->left.get() : node->right.get();

  Prediction p;
  p.lemma = vector.lemma;
  p.label = node->label();
  const auto hits = static_cast<double>(p.label == Label::Member ? node->counts.members
                                                                 : node->counts.nonmembers);
  const auto total = static_cast<double>(node->counts.total());
  p.confidence = tree.params.laplace_confidence ? (hits + 1.0) / (total + 2.0)
                                                : (total > 0 ? hits / total : 0.0);
  return p;
}

// ---------------------------------------------------------------------------
// Model file

namespace {

void write_node(std::ostream& out, const DecisionTree& tree, const TreeNode& node, std::size_t level) {
  out << std::string(2 * level, ' ');
  if (node.is_leaf()) {
    out << "leaf " << node.counts.members << ' ' << node.counts.nonmembers << '\n';
    return;
  }
  out << "split " << tree.groups[node.feature] << " <= " << text::sig9(node.threshold) << '\n';
  write_node(out, tree, *node.left, level + 1);
  write_node(out, tree, *node.right, level + 1);
}

struct ModelReader {
  std::vector<std::string> lines;
  std::vector<std::size_t> linenos;
  std::size_t pos = 0;
  const std::vector<std::string>& groups;

  TreeNode read(std::size_t level) {
    if (pos >= lines.size()) throw ParseError(0, "model ends before the tree is complete");
    const std::size_t lineno = linenos[pos];
    const std::string& line = lines[pos++];
    const std::size_t indent = line.find_first_not_of(' ');
    if (indent != 2 * level) throw ParseError(lineno, "unexpected indentation");
    std::istringstream in(line.substr(indent));
    std::string kind;
    in >> kind;
    if (kind == "leaf") {
      std::string m, n, extra;
      if (!(in >> m >> n) || (in >> extra)) throw ParseError(lineno, "leaf needs two counts");
      auto members = text::parse_int(m, lineno), nonmembers = text::parse_int(n, lineno);
      if (members < 0 || nonmembers < 0 || members + nonmembers == 0)
        throw ParseError(lineno, "invalid leaf counts");
      return TreeNode::leaf({static_cast<std::size_t>(members), static_cast<std::size_t>(nonmembers)});
    }
    if (kind != "split") throw ParseError(lineno, "expected split or leaf");
    std::string group, op, thr, extra;
    if (!(in >> group >> op >> thr) || op != "<=" || (in >> extra))
      throw ParseError(lineno, "expected `split <group> <= <threshold>`");
    auto it = std::find(groups.begin(), groups.end(), group);
    if (it == groups.end()) throw ParseError(lineno, "unknown group '" + group + "'");
    const double threshold = text::parse_double(thr, lineno);
    TreeNode left = read(level + 1);
    TreeNode right = read(level + 1);
    return TreeNode::split(static_cast<std::size_t>(it - groups.begin()), threshold,
                           std::move(left), std::move(right));
  }
};

}  // namespace

void write_model(std::ostream& out, const DecisionTree& tree) {
  out << kModelMagic << '\n' << "groups";
  for (const auto& g : tree.groups) out << '\t' << g;
  out << '\n';
  const auto& p = tree.params;
  out << "params min_leaf=" << p.min_leaf << " confidence_factor=" << text::sig9(p.confidence_factor)
      << " max_depth=" << (p.max_depth ? std::to_string(*p.max_depth) : "none")
      << " subtree_raising=" << (p.subtree_raising ? 1 : 0)
      << " laplace_confidence=" << (p.laplace_confidence ? 1 : 0) << '\n';
  write_node(out, tree, tree.root, 0);
}

DecisionTree parse_model(std::istream& in) {
  DecisionTree tree;
  std::string line;
  std::size_t lineno = 0;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next() || line != kModelMagic) throw ParseError(lineno, "not a nounclass model file");
  if (!next() || !text::starts_with(line, "groups")) throw ParseError(lineno, "expected groups line");
  auto fields = text::split(line, '\t');
  if (fields.front() != "groups") throw ParseError(lineno, "expected groups line");
  for (std::size_t i = 1; i < fields.size(); ++i) tree.groups.emplace_back(fields[i]);

  if (!next() || !text::starts_with(line, "params ")) throw ParseError(lineno, "expected params line");
  std::istringstream params(line.substr(7));
  std::string kv;
  while (params >> kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "bad param '" + kv + "'");
    auto key = kv.substr(0, eq), value = kv.substr(eq + 1);
    if (key == "min_leaf") tree.params.min_leaf = static_cast<std::size_t>(text::parse_int(value, lineno));
    else if (key == "confidence_factor") tree.params.confidence_factor = text::parse_double(value, lineno);
    else if (key == "max_depth") {
      if (value == "none") tree.params.max_depth.reset();
      else tree.params.max_depth = static_cast<std::size_t>(text::parse_int(value, lineno));
    } else if (key == "subtree_raising") tree.params.subtree_raising = value == "1";
    else if (key == "laplace_confidence") tree.params.laplace_confidence = value == "1";
    else throw ParseError(lineno, "unknown param '" + key + "'");
  }

  ModelReader reader{{}, {}, 0, tree.groups};
  while (next()) {
    reader.lines.push_back(line);
    reader.linenos.push_back(lineno);
  }
  tree.root = reader.read(0);
  if (reader.pos != reader.lines.size())
    throw ParseError(reader.linenos[reader.pos], "trailing content after the tree");
  return tree;
}

DecisionTree parse_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open model file '" + path + "'");
  return parse_model(in);
}

}  // namespace nounclass
