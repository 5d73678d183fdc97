#include "nounclass/features.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "nounclass/error.hpp"
#include "nounclass/text.hpp"

namespace nounclass {

namespace {

TypeProfile profile_occurrences(const Corpus& corpus, const CueSet& cues, std::string_view lemma,
                                const std::vector<Occurrence>& occurrences) {
  TypeProfile profile;
  profile.lemma = std::string(lemma);
  profile.occurrence_count = occurrences.size();
  profile.group_hits.assign(cues.groups().size(), 0);
  for (const auto& occ : occurrences) {
    auto fired = match_counts(cues, corpus.sentences()[occ.sentence], occ.token);
    for (std::size_t g = 0; g < fired.size(); ++g)
      if (fired[g]) ++profile.group_hits[g];
  }
  return profile;
}

}  // namespace

TypeProfile profile_type(const Corpus& corpus, const CueSet& cues, std::string_view lemma) {
  return profile_occurrences(corpus, cues, lemma, noun_occurrences(corpus, lemma));
}

TypeProfile profile_type(const Corpus& corpus, const NounIndex& index, const CueSet& cues,
                         std::string_view lemma) {
  return profile_occurrences(corpus, cues, lemma, index.find(lemma));
}

FeatureVector to_vector(const TypeProfile& profile) {
  FeatureVector vec;
  vec.lemma = profile.lemma;
  vec.seen = profile.occurrence_count > 0;
  vec.values.assign(profile.group_hits.size(), 0.0);
  if (vec.seen)
    for (std::size_t g = 0; g < vec.values.size(); ++g)
      vec.values[g] = static_cast<double>(profile.group_hits[g]) /
                      static_cast<double>(profile.occurrence_count);
  return vec;
}

Dataset extract_dataset(const Corpus& corpus, const CueSet& cues,
                        const std::vector<std::string>& vocabulary,
                        const std::vector<std::optional<Label>>& labels) {
  if (vocabulary.empty()) throw Error(ErrorKind::Data, "vocabulary is empty");
  if (!labels.empty() && labels.size() != vocabulary.size())
    throw Error(ErrorKind::Data, "labels do not match vocabulary size");
  std::unordered_set<std::string> seen;
  for (const auto& lemma : vocabulary)
    if (!seen.insert(text::to_lower(lemma)).second)
      throw Error(ErrorKind::Data, "duplicate lemma '" + lemma + "' in vocabulary");

  NounIndex index(corpus);
  Dataset dataset;
  dataset.groups = cues.groups();
  dataset.rows.reserve(vocabulary.size());
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    DatasetRow row;
    row.features = to_vector(profile_type(corpus, index, cues, vocabulary[i]));
    if (!labels.empty()) row.label = labels[i];
    dataset.rows.push_back(std::move(row));
  }
  return dataset;
}

Dataset extract_dataset(const Corpus& corpus, const CueSet& cues, const GoldStandard& gold) {
  return extract_dataset(corpus, cues, gold.lemmas(), gold.labels());
}

Dataset drop_unseen(Dataset dataset) {
  std::erase_if(dataset.rows, [](const DatasetRow& r) { return !r.features.seen; });
  return dataset;
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  out << "lemma\tlabel";
  for (const auto& g : dataset.groups) out << '\t' << g;
  out << '\n';
  for (const auto& row : dataset.rows) {
    out << row.features.lemma << '\t'
        << (!row.label ? '?' : *row.label == Label::Member ? '1' : '0');
    for (double v : row.features.values) out << '\t' << text::fixed(v, 6);
    out << '\n';
  }
}

Dataset parse_dataset(std::istream& in) {
  Dataset dataset;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = text::split(line, '\t');
    if (!have_header) {
      if (fields.size() < 2 || fields[0] != "lemma" || fields[1] != "label")
        throw ParseError(lineno, "dataset header must start with `lemma<TAB>label`");
      for (std::size_t i = 2; i < fields.size(); ++i) dataset.groups.emplace_back(fields[i]);
      have_header = true;
      continue;
    }
    if (fields.size() != dataset.groups.size() + 2)
      throw ParseError(lineno, "expected " + std::to_string(dataset.groups.size() + 2) + " fields");
    DatasetRow row;
    row.features.lemma = std::string(fields[0]);
    if (fields[1] == "1") row.label = Label::Member;
    else if (fields[1] == "0") row.label = Label::Nonmember;
    else if (fields[1] != "?") throw ParseError(lineno, "label must be 1, 0 or ?");
    for (std::size_t i = 2; i < fields.size(); ++i) {
      double v = text::parse_double(fields[i], lineno);
      if (!(v >= 0.0 && v <= 1.0)) throw ParseError(lineno, "feature value outside [0,1]");
      row.features.values.push_back(v);
      if (v > 0.0) row.features.seen = true;
    }
    dataset.rows.push_back(std::move(row));
  }
  if (!have_header) throw ParseError(0, "dataset file has no header");
  return dataset;
}

Dataset parse_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open dataset file '" + path + "'");
  return parse_dataset(in);
}

std::vector<CueFrequency> class_cue_frequencies(const Corpus& corpus, const CueSet& cues,
                                                const GoldStandard& gold) {
  if (gold.members().empty() || gold.nonmembers().empty())
    throw Error(ErrorKind::Data, "gold standard needs both members and non-members");
  NounIndex index(corpus);
  const std::size_t dim = cues.groups().size();
  std::vector<std::size_t> member_hits(dim, 0), nonmember_hits(dim, 0);
  std::size_t member_occ = 0, nonmember_occ = 0;
  for (const auto& [lemma, label] : gold.entries()) {
    auto profile = profile_type(corpus, index, cues, lemma);
    auto& hits = label == Label::Member ? member_hits : nonmember_hits;
    (label == Label::Member ? member_occ : nonmember_occ) += profile.occurrence_count;
    for (std::size_t g = 0; g < dim; ++g) hits[g] += profile.group_hits[g];
  }
  if (member_occ == 0) throw Error(ErrorKind::Data, "no evidence: no member occurs in the corpus");

  std::vector<CueFrequency> stats;
  for (std::size_t g = 0; g < dim; ++g) {
    CueFrequency f;
    f.group = cues.groups()[g];
    f.polarity = cues.group_polarity(g);
    f.members = static_cast<double>(member_hits[g]) / static_cast<double>(member_occ);
    if (nonmember_occ)
      f.nonmembers = static_cast<double>(nonmember_hits[g]) / static_cast<double>(nonmember_occ);
    stats.push_back(std::move(f));
  }
  return stats;
}

void write_cue_stats(std::ostream& out, const std::vector<CueFrequency>& stats) {
  for (const auto& f : stats)
    out << f.group << ' ' << text::fixed(f.members, 5) << ' ' << text::fixed(f.nonmembers, 5)
        << '\n';
}

}  // namespace nounclass
