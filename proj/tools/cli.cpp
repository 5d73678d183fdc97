#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "nounclass/corpus.hpp"
#include "nounclass/cues.hpp"
#include "nounclass/error.hpp"
#include "nounclass/eval.hpp"
#include "nounclass/features.hpp"
#include "nounclass/synth.hpp"
#include "nounclass/text.hpp"
#include "nounclass/tree.hpp"

namespace nounclass::cli {

namespace {

constexpr const char* kExitCodes =
    "Exit codes:\n"
    "  0  success\n"
    "  1  usage error (unknown command or flag, invalid option value)\n"
    "  2  input file missing or output not writable\n"
    "  3  malformed input file (corpus, cues, gold, dataset, model, rates)\n"
    "  4  inputs cannot be processed (e.g. too few rows per class, duplicate lemmas)\n"
    "  5  internal error";

struct Options {
  std::string corpus, lang, tagmap, cues, builtin, gold, vocab, dataset, model, rates;
  std::string output, predictions, corpus_out, gold_out;
  std::size_t k = 10;
  std::uint64_t seed = 0;
  double target_precision = 0.90;
  bool exclude_unseen = false;
  bool laplace = false;
  bool no_subtree_raising = false;
  std::size_t min_leaf = 2;
  double cf = 0.25;
  std::size_t max_depth = 0;
  std::size_t members = 200, nonmembers = 200, occurrences = 50;
};

/// Writes to the named file, or to `fallback` when the name is empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty()) {
      stream_ = &fallback;
    } else {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  ~Sink() = default;
  std::ostream& get() { return *stream_; }
  void close() {
    if (file_.is_open()) {
      file_.close();
      if (!file_) throw Error(ErrorKind::Io, "error writing '" + path_ + "'");
    }
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

std::pair<std::string, std::string> split_builtin(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size())
    throw Error(ErrorKind::Usage, "--builtin expects CLASS:LANG, e.g. HUMAN:en");
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

CueSet load_cues(const Options& o) {
  if (!o.cues.empty() && !o.builtin.empty())
    throw Error(ErrorKind::Usage, "give either --cues or --builtin, not both");
  if (!o.cues.empty()) return parse_cueset_file(o.cues);
  if (!o.builtin.empty()) {
    auto [cls, lang] = split_builtin(o.builtin);
    return builtin_cueset(cls, lang);
  }
  throw Error(ErrorKind::Usage, "a cue set is required (--cues or --builtin)");
}

Corpus load_corpus(const Options& o, const CueSet& cues) {
  if (o.corpus.empty()) throw Error(ErrorKind::Usage, "--corpus is required");
  std::string lang = o.lang;
  if (lang.empty()) lang = cues.language().empty() ? "other" : cues.language();
  std::optional<TagMap> tags;
  if (!o.tagmap.empty()) {
    std::ifstream in(o.tagmap);
    if (!in) throw Error(ErrorKind::Io, "cannot open tag map '" + o.tagmap + "'");
    tags = TagMap::parse(in);
  }
  return parse_corpus_file(o.corpus, lang, tags ? &*tags : nullptr);
}

std::vector<std::string> load_vocab(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open vocabulary file '" + path + "'");
  std::vector<std::string> vocab;
  std::string line;
  while (std::getline(in, line)) {
    auto view = text::trim(line);
    if (view.empty() || view.front() == '#') continue;
    vocab.emplace_back(text::split(view, '\t').front());
  }
  return vocab;
}

/// Dataset from --dataset, or extracted from corpus + cues + (gold | vocab).
Dataset load_dataset(const Options& o, bool need_labels) {
  Dataset ds;
  if (!o.dataset.empty()) {
    ds = parse_dataset_file(o.dataset);
  } else {
    const CueSet cues = load_cues(o);
    const Corpus corpus = load_corpus(o, cues);
    if (!o.gold.empty()) {
      ds = extract_dataset(corpus, cues, parse_gold_file(o.gold, cues.class_name()));
    } else if (!o.vocab.empty() && !need_labels) {
      ds = extract_dataset(corpus, cues, load_vocab(o.vocab));
    } else {
      throw Error(ErrorKind::Usage,
                  need_labels ? "--dataset or --gold is required" : "--dataset, --gold or --vocab is required");
    }
  }
  if (o.exclude_unseen) ds = drop_unseen(std::move(ds));
  if (need_labels)
    for (const auto& row : ds.rows)
      if (!row.label) throw Error(ErrorKind::Data, "row '" + row.features.lemma + "' has no gold label");
  return ds;
}

TrainParams train_params(const Options& o) {
  TrainParams p;
  p.min_leaf = o.min_leaf;
  p.confidence_factor = o.cf;
  if (o.max_depth > 0) p.max_depth = o.max_depth;
  p.subtree_raising = !o.no_subtree_raising;
  p.laplace_confidence = o.laplace;
  p.validate();
  return p;
}

void cmd_extract(const Options& o, std::ostream& out) {
  const Dataset ds = load_dataset(o, false);
  Sink sink(o.output, out);
  write_dataset(sink.get(), ds);
  sink.close();
}

void cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
  const TrainParams params = train_params(o);
  const Dataset ds = load_dataset(o, true);
  if (auto warning = class_skew_warning(ds)) err << "warning: " << *warning << '\n';
  const DecisionTree tree = train(ds, params);
  Sink sink(o.output, out);
  write_model(sink.get(), tree);
  sink.close();
}

void cmd_classify(const Options& o, std::ostream& out) {
  if (o.model.empty()) throw Error(ErrorKind::Usage, "--model is required");
  DecisionTree tree = parse_model_file(o.model);
  if (o.laplace) tree.params.laplace_confidence = true;
  const Dataset ds = load_dataset(o, false);
  if (ds.groups != tree.groups)
    throw Error(ErrorKind::Data, "dataset cue groups do not match the model's");
  std::vector<Prediction> predictions;
  for (const auto& row : ds.rows) predictions.push_back(classify(tree, row.features));
  Sink sink(o.output, out);
  write_predictions(sink.get(), predictions);
  sink.close();
}

void cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  const TrainParams params = train_params(o);
  const Dataset ds = load_dataset(o, true);
  if (auto warning = class_skew_warning(ds)) err << "warning: " << *warning << '\n';
  const auto cv = cross_validate(ds, params, o.k, o.seed);
  const auto thr = threshold_sweep(cv.predictions, o.target_precision);

  std::string class_name;
  if (!o.builtin.empty()) class_name = split_builtin(o.builtin).first;
  else if (!o.cues.empty()) class_name = parse_cueset_file(o.cues).class_name();

  Sink sink(o.output, out);
  write_report(sink.get(), cv.report, thr, {class_name, o.k, o.seed});
  sink.close();
  if (!o.predictions.empty()) {
    Sink preds(o.predictions, out);
    write_predictions(preds.get(), cv.predictions);
    preds.close();
  }
}

void cmd_cue_stats(const Options& o, std::ostream& out) {
  if (o.gold.empty()) throw Error(ErrorKind::Usage, "--gold is required");
  const CueSet cues = load_cues(o);
  const Corpus corpus = load_corpus(o, cues);
  const auto stats = class_cue_frequencies(corpus, cues, parse_gold_file(o.gold, cues.class_name()));
  Sink sink(o.output, out);
  write_cue_stats(sink.get(), stats);
  sink.close();
}

void cmd_synth(const Options& o, std::ostream& out) {
  SynthSpec spec;
  spec.cues = load_cues(o);
  if (!o.rates.empty()) {
    spec.rates = parse_rates_file(o.rates);
  } else if (!o.builtin.empty()) {
    auto [cls, lang] = split_builtin(o.builtin);
    spec.rates = published_rates(cls, lang);
  } else {
    throw Error(ErrorKind::Usage, "--rates is required with --cues");
  }
  spec.members = o.members;
  spec.nonmembers = o.nonmembers;
  spec.occurrences = o.occurrences;
  const auto synth = synth_corpus(spec, o.seed);

  Sink corpus_sink(o.corpus_out, out);
  write_corpus(corpus_sink.get(), synth.corpus);
  corpus_sink.close();
  if (!o.gold_out.empty()) {
    Sink gold_sink(o.gold_out, out);
    write_gold(gold_sink.get(), synth.gold);
    gold_sink.close();
  }
}

void add_source_options(CLI::App* cmd, Options& o, bool gold, bool vocab, bool dataset) {
  cmd->add_option("--corpus", o.corpus, "Vertical-format corpus (surface<TAB>lemma<TAB>pos)");
  cmd->add_option("--lang", o.lang, "Corpus language tag (default: the cue set's)");
  cmd->add_option("--tagmap", o.tagmap, "Tag map file mapping tagger tags to coarse tags");
  cmd->add_option("--cues", o.cues, "Cue DSL file");
  cmd->add_option("--builtin", o.builtin, "Builtin cue inventory CLASS:LANG (HUMAN|LOCATION : en|es)");
  if (gold) cmd->add_option("--gold", o.gold, "Gold file (lemma<TAB>1|0)");
  if (vocab) cmd->add_option("--vocab", o.vocab, "Vocabulary file, one lemma per line");
  if (dataset) cmd->add_option("--dataset", o.dataset, "Dataset file produced by `extract`");
  cmd->add_flag("--exclude-unseen", o.exclude_unseen, "Drop nouns never seen in the corpus");
}

void add_train_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--min-leaf", o.min_leaf, "Minimum instances per leaf")->capture_default_str();
  cmd->add_option("--cf", o.cf, "Pruning confidence factor in (0,1)")->capture_default_str();
  cmd->add_option("--max-depth", o.max_depth, "Maximum tree depth (0 = unlimited)")->capture_default_str();
  cmd->add_flag("--no-subtree-raising", o.no_subtree_raising, "Disable subtree raising while pruning");
  cmd->add_flag("--laplace-confidence", o.laplace, "Laplace-corrected leaf confidence");
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage: return kUsage;
    case ErrorKind::Io: return kIo;
    case ErrorKind::Parse: return kParse;
    case ErrorKind::Data: return kData;
  }
  return kInternal;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cue-based lexical semantic noun classification"};
  app.name("nounclass");
  app.footer(kExitCodes);
  app.require_subcommand(1);
  Options o;

  auto* extract = app.add_subcommand("extract", "Build a feature dataset from a corpus");
  add_source_options(extract, o, true, true, false);
  extract->add_option("-o,--output", o.output, "Dataset file (default stdout)");

  auto* train_cmd = app.add_subcommand("train", "Train a pruned decision tree");
  add_source_options(train_cmd, o, true, false, true);
  add_train_options(train_cmd, o);
  train_cmd->add_option("-o,--output", o.output, "Model file (default stdout)");

  auto* classify_cmd = app.add_subcommand("classify", "Classify nouns with a trained model");
  add_source_options(classify_cmd, o, true, true, true);
  classify_cmd->add_option("--model", o.model, "Model file")->required();
  classify_cmd->add_flag("--laplace-confidence", o.laplace, "Laplace-corrected leaf confidence");
  classify_cmd->add_option("-o,--output", o.output, "Predictions file (default stdout)");

  auto* evaluate = app.add_subcommand("evaluate", "Stratified cross-validation and threshold triage");
  add_source_options(evaluate, o, true, false, true);
  add_train_options(evaluate, o);
  evaluate->add_option("-k,--folds", o.k, "Number of folds")->capture_default_str();
  evaluate->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  evaluate->add_option("--target-precision", o.target_precision, "Precision wanted above the threshold")
      ->capture_default_str();
  evaluate->add_option("-o,--output", o.output, "Report file (default stdout)");
  evaluate->add_option("--predictions", o.predictions, "Pooled out-of-fold predictions file");

  auto* stats = app.add_subcommand("cue-stats", "Per-group relative frequencies for members and non-members");
  add_source_options(stats, o, true, false, false);
  stats->add_option("-o,--output", o.output, "Report file (default stdout)");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus and gold standard");
  synth->add_option("--cues", o.cues, "Cue DSL file");
  synth->add_option("--builtin", o.builtin, "Builtin cue inventory CLASS:LANG; also supplies rates");
  synth->add_option("--rates", o.rates, "Rates file (group member_rate nonmember_rate)");
  synth->add_option("--members", o.members, "Member lemmas")->capture_default_str();
  synth->add_option("--nonmembers", o.nonmembers, "Non-member lemmas")->capture_default_str();
  synth->add_option("--occurrences", o.occurrences, "Occurrences per lemma")->capture_default_str();
  synth->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  synth->add_option("--corpus-out", o.corpus_out, "Corpus file (default stdout)");
  synth->add_option("--gold-out", o.gold_out, "Gold file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "nounclass: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*extract) cmd_extract(o, out);
    else if (*train_cmd) cmd_train(o, out, err);
    else if (*classify_cmd) cmd_classify(o, out);
    else if (*evaluate) cmd_evaluate(o, out, err);
    else if (*stats) cmd_cue_stats(o, out);
    else if (*synth) cmd_synth(o, out);
  } catch (const Error& e) {
    err << "nounclass: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "nounclass: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}

}  // namespace nounclass::cli
