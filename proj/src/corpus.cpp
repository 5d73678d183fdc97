#include "nounclass/corpus.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>

#include "nounclass/error.hpp"
#include "nounclass/text.hpp"

namespace nounclass {

namespace {

constexpr std::array<std::string_view, kPosTagCount> kTagNames = {
    "N", "PROPN", "V", "ADJ", "ADV", "DET", "POSS_DET", "PREP",
    "PRON", "REL_PRON", "CONJ", "CLITIC", "NUM", "PUNCT", "OTHER"};

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::string_view to_string(PosTag tag) { return kTagNames[static_cast<std::size_t>(tag)]; }

std::optional<PosTag> parse_pos_tag(std::string_view name) {
  for (std::size_t i = 0; i < kTagNames.size(); ++i)
    if (kTagNames[i] == name) return static_cast<PosTag>(i);
  return std::nullopt;
}

void Corpus::add_sentence(std::vector<Token> tokens) {
  if (tokens.empty()) return;
  token_count_ += tokens.size();
  sentences_.push_back(Sentence{std::move(tokens), sentences_.size()});
}

TagMap TagMap::parse(std::istream& in) {
  TagMap map;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto view = text::trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto fields = text::split(view, '\t');
    if (fields.size() != 2) throw ParseError(lineno, "tag map lines need 2 tab-separated fields");
    auto target = parse_pos_tag(text::trim(fields[1]));
    if (!target) throw ParseError(lineno, "unknown coarse tag '" + std::string(fields[1]) + "'");
    map.add(std::string(text::trim(fields[0])), *target);
  }
  return map;
}

void TagMap::add(std::string source, PosTag target) { map_[std::move(source)] = target; }

std::optional<PosTag> TagMap::lookup(std::string_view source) const {
  auto it = map_.find(source);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

Corpus parse_corpus(std::istream& in, std::string language, const TagMap* tags) {
  Corpus corpus(std::move(language));
  std::vector<Token> current;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto view = strip_cr(line);
    if (view.empty()) {
      corpus.add_sentence(std::move(current));
      current.clear();
      continue;
    }
    if (view.front() == '#') continue;
    auto fields = text::split(view, '\t');
    if (fields.size() != 3)
      throw ParseError(lineno, "expected 3 tab-separated fields, got " + std::to_string(fields.size()));
    if (fields[0].empty() || fields[1].empty()) throw ParseError(lineno, "empty surface or lemma");
    std::optional<PosTag> pos;
    if (tags) pos = tags->lookup(fields[2]);
    if (!pos) pos = parse_pos_tag(fields[2]);
    if (!pos) throw ParseError(lineno, "unknown pos tag '" + std::string(fields[2]) + "'");
    current.push_back(Token{std::string(fields[0]), text::to_lower(fields[1]), *pos});
  }
  corpus.add_sentence(std::move(current));
  return corpus;
}

Corpus parse_corpus_file(const std::string& path, std::string language, const TagMap* tags) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open corpus file '" + path + "'");
  return parse_corpus(in, std::move(language), tags);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& sentence : corpus.sentences()) {
    for (const auto& tok : sentence.tokens)
      out << tok.surface << '\t' << tok.lemma << '\t' << to_string(tok.pos) << '\n';
    out << '\n';
  }
}

std::vector<Occurrence> noun_occurrences(const Corpus& corpus, std::string_view lemma) {
  const std::string key = text::to_lower(lemma);
  std::vector<Occurrence> found;
  for (const auto& sentence : corpus.sentences())
    for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
      const auto& tok = sentence.tokens[t];
      if (is_noun(tok.pos) && tok.lemma == key) found.push_back({sentence.index, t});
    }
  return found;
}

NounIndex::NounIndex(const Corpus& corpus) {
  for (const auto& sentence : corpus.sentences())
    for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
      const auto& tok = sentence.tokens[t];
      if (is_noun(tok.pos)) index_[tok.lemma].push_back({sentence.index, t});
    }
}

const std::vector<Occurrence>& NounIndex::find(std::string_view lemma) const {
  static const std::vector<Occurrence> kNone;
  auto it = index_.find(text::to_lower(lemma));
  return it == index_.end() ? kNone : it->second;
}

}  // namespace nounclass
