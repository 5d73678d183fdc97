#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nounclass/corpus.hpp"
#include "nounclass/cues.hpp"
#include "nounclass/gold.hpp"

namespace nounclass {

/// Per-occurrence probability that a group's context is present.
struct GroupRate {
  std::string group;
  double member_rate = 0.0;
  double nonmember_rate = 0.0;

  bool operator==(const GroupRate&) const = default;
};

/// `group member_rate nonmember_rate` rows (the cue-stats layout), `#` comments.
std::vector<GroupRate> parse_rates(std::istream& in);
std::vector<GroupRate> parse_rates_file(const std::string& path);

/// Relative frequencies shipped with the builtin inventories.
std::vector<GroupRate> published_rates(std::string_view class_name, std::string_view language);

struct SynthSpec {
  CueSet cues;
  std::vector<GroupRate> rates;  // groups without an entry get rate 0
  std::size_t members = 200;
  std::size_t nonmembers = 200;
  std::size_t occurrences = 50;  // per lemma
};

struct SynthCorpus {
  Corpus corpus;
  GoldStandard gold;
};

/// One short sentence per noun occurrence. Target-only (morphological)
/// groups are drawn independently per occurrence; context groups compete
/// for the single context slot of the sentence, each with its own rate.
/// Throws when a class's context rates sum past 1 or a group's first
/// pattern cannot be realized.
SynthCorpus synth_corpus(const SynthSpec& spec, std::uint64_t seed);

}  // namespace nounclass
