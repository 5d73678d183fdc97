#pragma once

#include <cstddef>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nounclass/corpus.hpp"

namespace nounclass {

/// Surface ends with one of the suffixes (case-insensitive), leaving a stem
/// of at least two characters.
struct SuffixTest {
  std::vector<std::string> written;  // as in the source, e.g. "-er"
  bool operator==(const SuffixTest&) const = default;
};

/// Surface starts with one of the prefixes, same stem rule as SuffixTest.
struct PrefixTest {
  std::vector<std::string> written;  // e.g. "pro-"
  bool operator==(const PrefixTest&) const = default;
};

struct LemmaTest {
  std::vector<std::string> lemmas;
  bool operator==(const LemmaTest&) const = default;
};

/// Lemma drawn from a ranked word list, optionally cut at the first `limit`.
struct LemmaFileTest {
  std::string path;
  std::size_t limit = 0;  // 0 = whole file
  std::vector<std::string> lemmas;
  bool operator==(const LemmaFileTest&) const = default;
};

struct PosTest {
  std::vector<PosTag> tags;
  bool operator==(const PosTest&) const = default;
};

struct AnyTest {
  bool operator==(const AnyTest&) const = default;
};

struct PunctTest {
  std::string literal;
  bool operator==(const PunctTest&) const = default;
};

using TokenPredicate =
    std::variant<SuffixTest, PrefixTest, LemmaTest, LemmaFileTest, PosTest, AnyTest, PunctTest>;

bool matches(const TokenPredicate& pred, const Token& tok);

inline constexpr std::size_t kDefaultGap = 2;

/// Tokens that may be skipped between two aligned pattern elements.
bool is_skippable(PosTag tag);

/// One position in a pattern: the TARGET slot or a token test. Predicates
/// are a conjunction. `gap_after` bounds the tokens skipped before the next
/// element.
struct CueElement {
  bool target = false;
  std::vector<TokenPredicate> predicates;
  std::size_t gap_after = kDefaultGap;

  bool accepts(const Token& tok) const;
  bool operator==(const CueElement&) const = default;
};

enum class Polarity { Positive, Negative };

struct CuePattern {
  std::string id;
  std::string group;
  Polarity polarity = Polarity::Positive;
  std::vector<CueElement> elements;

  std::size_t target_position() const;
  bool operator==(const CuePattern&) const = default;
};

class CueSet {
 public:
  CueSet() = default;
  CueSet(std::string class_name, std::string language);

  /// Validates and appends; new groups extend the dimension order.
  void add(CuePattern pattern);

  const std::string& class_name() const { return class_name_; }
  const std::string& language() const { return language_; }
  const std::vector<CuePattern>& patterns() const { return patterns_; }
  const std::vector<std::string>& groups() const { return groups_; }
  std::size_t group_of(std::size_t pattern) const { return pattern_group_[pattern]; }

  /// Polarity of a group; the first pattern of the group decides.
  Polarity group_polarity(std::size_t group) const;

  bool operator==(const CueSet&) const = default;

 private:
  std::string class_name_;
  std::string language_;
  std::vector<CuePattern> patterns_;
  std::vector<std::string> groups_;
  std::vector<std::size_t> pattern_group_;
};

/// Parses the cue DSL. `base_dir` resolves relative lexfile paths.
CueSet parse_cueset(std::istream& in, const std::string& base_dir = ".");
CueSet parse_cueset_file(const std::string& path);
void write_cueset(std::ostream& out, const CueSet& cues);

/// Shipped inventories: HUMAN or LOCATION, en or es.
CueSet builtin_cueset(std::string_view class_name, std::string_view language);

bool match_at(const CuePattern& pattern, const Sentence& sentence, std::size_t target_index);

/// Per-group disjunction of match_at over the set's patterns.
std::vector<bool> match_counts(const CueSet& cues, const Sentence& sentence,
                               std::size_t target_index);

}  // namespace nounclass
