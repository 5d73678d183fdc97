#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nounclass {

/// Coarse part-of-speech tags. Input tagsets are mapped onto these.
enum class PosTag {
  N, PROPN, V, ADJ, ADV, DET, POSS_DET, PREP, PRON, REL_PRON, CONJ, CLITIC, NUM, PUNCT, OTHER
};

inline constexpr std::size_t kPosTagCount = 15;

std::string_view to_string(PosTag tag);
std::optional<PosTag> parse_pos_tag(std::string_view name);

inline bool is_noun(PosTag t) { return t == PosTag::N || t == PosTag::PROPN; }

struct Token {
  std::string surface;
  std::string lemma;  // lowercased at parse time
  PosTag pos = PosTag::OTHER;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::size_t index = 0;

  bool operator==(const Sentence&) const = default;
};

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::string language) : language_(std::move(language)) {}

  void add_sentence(std::vector<Token> tokens);

  const std::vector<Sentence>& sentences() const { return sentences_; }
  const std::string& language() const { return language_; }
  std::size_t token_count() const { return token_count_; }

  bool operator==(const Corpus&) const = default;

 private:
  std::vector<Sentence> sentences_;
  std::string language_ = "other";
  std::size_t token_count_ = 0;
};

/// Maps tagger-specific tags onto the coarse set. File format: one
/// `source<TAB>COARSE` pair per line, `#` comments.
class TagMap {
 public:
  static TagMap parse(std::istream& in);

  void add(std::string source, PosTag target);
  std::optional<PosTag> lookup(std::string_view source) const;
  bool empty() const { return map_.empty(); }

 private:
  std::map<std::string, PosTag, std::less<>> map_;
};

/// Reads the vertical format: `surface<TAB>lemma<TAB>pos` per line, blank
/// line ends a sentence, `#` starts a comment line. Tags not in the coarse
/// set are looked up in `tags` when given.
Corpus parse_corpus(std::istream& in, std::string language, const TagMap* tags = nullptr);
Corpus parse_corpus_file(const std::string& path, std::string language,
                         const TagMap* tags = nullptr);

void write_corpus(std::ostream& out, const Corpus& corpus);

struct Occurrence {
  std::size_t sentence = 0;
  std::size_t token = 0;

  bool operator==(const Occurrence&) const = default;
};

/// Noun (N or PROPN) positions whose lemma equals `lemma`, in corpus order.
std::vector<Occurrence> noun_occurrences(const Corpus& corpus, std::string_view lemma);

/// Precomputed lemma -> noun occurrences table for repeated lookups.
class NounIndex {
 public:
  explicit NounIndex(const Corpus& corpus);

  const std::vector<Occurrence>& find(std::string_view lemma) const;
  std::size_t lemma_count() const { return index_.size(); }

 private:
  std::unordered_map<std::string, std::vector<Occurrence>> index_;
};

}  // namespace nounclass
