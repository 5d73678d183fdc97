#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nounclass/corpus.hpp"
#include "nounclass/cues.hpp"
#include "nounclass/gold.hpp"

namespace nounclass {

/// Cue evidence for one noun type, aggregated over its occurrences.
struct TypeProfile {
  std::string lemma;
  std::size_t occurrence_count = 0;
  std::vector<std::size_t> group_hits;  // occurrences at which each group fired

  bool operator==(const TypeProfile&) const = default;
};

struct FeatureVector {
  std::string lemma;
  std::vector<double> values;  // relative frequency per cue group
  bool seen = false;

  bool operator==(const FeatureVector&) const = default;
};

struct DatasetRow {
  FeatureVector features;
  std::optional<Label> label;

  bool operator==(const DatasetRow&) const = default;
};

struct Dataset {
  std::vector<std::string> groups;
  std::vector<DatasetRow> rows;

  std::size_t dimension() const { return groups.size(); }
  bool operator==(const Dataset&) const = default;
};

TypeProfile profile_type(const Corpus& corpus, const CueSet& cues, std::string_view lemma);
TypeProfile profile_type(const Corpus& corpus, const NounIndex& index, const CueSet& cues,
                         std::string_view lemma);

FeatureVector to_vector(const TypeProfile& profile);

/// One row per vocabulary lemma, in order. `labels` is empty or parallel
/// to `vocabulary`.
Dataset extract_dataset(const Corpus& corpus, const CueSet& cues,
                        const std::vector<std::string>& vocabulary,
                        const std::vector<std::optional<Label>>& labels = {});

/// Rows for the gold lemmas, labelled.
Dataset extract_dataset(const Corpus& corpus, const CueSet& cues, const GoldStandard& gold);

Dataset drop_unseen(Dataset dataset);

/// Dataset file: `lemma<TAB>label<TAB>g1...` header, 6-decimal values,
/// label `1`, `0` or `?`. Parsed rows count as seen when any value is
/// non-zero.
void write_dataset(std::ostream& out, const Dataset& dataset);
Dataset parse_dataset(std::istream& in);
Dataset parse_dataset_file(const std::string& path);

struct CueFrequency {
  std::string group;
  Polarity polarity = Polarity::Positive;
  double members = 0.0;
  double nonmembers = 0.0;
};

/// Occurrence-weighted hit rate of each group over the member and the
/// non-member lemmas.
std::vector<CueFrequency> class_cue_frequencies(const Corpus& corpus, const CueSet& cues,
                                                const GoldStandard& gold);

/// `group member nonmember` rows, 5 decimals.
void write_cue_stats(std::ostream& out, const std::vector<CueFrequency>& stats);

}  // namespace nounclass
