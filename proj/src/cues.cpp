#include "nounclass/cues.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "builtin_data.hpp"
#include "nounclass/error.hpp"
#include "nounclass/text.hpp"

namespace nounclass {

namespace {

constexpr std::size_t kMinStem = 2;

std::string strip_hyphens(std::string_view s) {
  while (!s.empty() && s.front() == '-') s.remove_prefix(1);
  while (!s.empty() && s.back() == '-') s.remove_suffix(1);
  return std::string(s);
}

bool has_affix(const std::string& lowered_surface, const std::vector<std::string>& written,
               bool suffix) {
  const std::size_t surface_len = text::utf8_length(lowered_surface);
  for (const auto& w : written) {
    const std::string bare = strip_hyphens(w);
    if (bare.empty()) continue;
    if (surface_len < text::utf8_length(bare) + kMinStem) continue;
    if (suffix ? text::ends_with(lowered_surface, bare) : text::starts_with(lowered_surface, bare))
      return true;
  }
  return false;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

bool matches(const TokenPredicate& pred, const Token& tok) {
  struct Visitor {
    const Token& tok;
    bool operator()(const SuffixTest& t) const {
      return has_affix(text::to_lower(tok.surface), t.written, true);
    }
    bool operator()(const PrefixTest& t) const {
      return has_affix(text::to_lower(tok.surface), t.written, false);
    }
    bool operator()(const LemmaTest& t) const { return contains(t.lemmas, tok.lemma); }
    bool operator()(const LemmaFileTest& t) const { return contains(t.lemmas, tok.lemma); }
    bool operator()(const PosTest& t) const {
      return std::find(t.tags.begin(), t.tags.end(), tok.pos) != t.tags.end();
    }
    bool operator()(const AnyTest&) const { return true; }
    bool operator()(const PunctTest& t) const { return tok.surface == t.literal; }
  };
  return std::visit(Visitor{tok}, pred);
}

bool is_skippable(PosTag tag) {
  return tag == PosTag::DET || tag == PosTag::POSS_DET || tag == PosTag::ADJ || tag == PosTag::NUM;
}

bool CueElement::accepts(const Token& tok) const {
  return std::all_of(predicates.begin(), predicates.end(),
                     [&](const TokenPredicate& p) { return matches(p, tok); });
}

std::size_t CuePattern::target_position() const {
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i].target) return i;
  return elements.size();
}

CueSet::CueSet(std::string class_name, std::string language)
    : class_name_(std::move(class_name)), language_(std::move(language)) {}

void CueSet::add(CuePattern pattern) {
  if (pattern.elements.empty()) throw Error(ErrorKind::Data, "cue '" + pattern.id + "' has no elements");
  auto targets = std::count_if(pattern.elements.begin(), pattern.elements.end(),
                               [](const CueElement& e) { return e.target; });
  if (targets == 0) throw Error(ErrorKind::Data, "cue '" + pattern.id + "': missing TARGET");
  if (targets > 1) throw Error(ErrorKind::Data, "cue '" + pattern.id + "': multiple TARGET");
  for (const auto& p : patterns_)
    if (p.id == pattern.id) throw Error(ErrorKind::Data, "duplicate cue id '" + pattern.id + "'");

  auto it = std::find(groups_.begin(), groups_.end(), pattern.group);
  std::size_t group = static_cast<std::size_t>(it - groups_.begin());
  if (it == groups_.end()) groups_.push_back(pattern.group);
  pattern_group_.push_back(group);
  patterns_.push_back(std::move(pattern));
}

Polarity CueSet::group_polarity(std::size_t group) const {
  for (std::size_t i = 0; i < patterns_.size(); ++i)
    if (pattern_group_[i] == group) return patterns_[i].polarity;
  return Polarity::Positive;
}

// ---------------------------------------------------------------------------
// Matching

namespace {

bool align_left(const CuePattern& p, const std::vector<Token>& toks, std::size_t elem,
                std::size_t right_pos) {
  // elements [0, elem] remain; element `elem` must sit left of right_pos.
  const std::size_t gap = p.elements[elem].gap_after;
  for (std::size_t skipped = 0; skipped <= gap && skipped < right_pos; ++skipped) {
    const std::size_t pos = right_pos - 1 - skipped;
    if (p.elements[elem].accepts(toks[pos]) &&
        (elem == 0 || align_left(p, toks, elem - 1, pos)))
      return true;
    if (!is_skippable(toks[pos].pos)) break;
  }
  return false;
}

bool align_right(const CuePattern& p, const std::vector<Token>& toks, std::size_t elem,
                 std::size_t left_pos) {
  const std::size_t gap = p.elements[elem - 1].gap_after;
  for (std::size_t skipped = 0; skipped <= gap && left_pos + 1 + skipped < toks.size(); ++skipped) {
    const std::size_t pos = left_pos + 1 + skipped;
    if (p.elements[elem].accepts(toks[pos]) &&
        (elem + 1 == p.elements.size() || align_right(p, toks, elem + 1, pos)))
      return true;
    if (!is_skippable(toks[pos].pos)) break;
  }
  return false;
}

}  // namespace

bool match_at(const CuePattern& pattern, const Sentence& sentence, std::size_t target_index) {
  const auto& toks = sentence.tokens;
  if (target_index >= toks.size()) return false;
  const std::size_t t = pattern.target_position();
  if (t >= pattern.elements.size()) return false;
  if (!pattern.elements[t].accepts(toks[target_index])) return false;
  if (t > 0 && !align_left(pattern, toks, t - 1, target_index)) return false;
  if (t + 1 < pattern.elements.size() && !align_right(pattern, toks, t + 1, target_index))
    return false;
  return true;
}

std::vector<bool> match_counts(const CueSet& cues, const Sentence& sentence,
                               std::size_t target_index) {
  std::vector<bool> fired(cues.groups().size(), false);
  const auto& patterns = cues.patterns();
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    const std::size_t g = cues.group_of(i);
    if (!fired[g] && match_at(patterns[i], sentence, target_index)) fired[g] = true;
  }
  return fired;
}

// ---------------------------------------------------------------------------
// DSL

namespace {

std::vector<std::string> load_lemma_list(const std::string& path, std::size_t limit) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open lemma list '" + path + "'");
  std::vector<std::string> lemmas;
  std::string line;
  while (std::getline(in, line)) {
    auto view = text::trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto first = text::trim(text::split(view, '\t').front());
    if (first.empty()) continue;
    lemmas.push_back(text::to_lower(first));
    if (limit && lemmas.size() == limit) break;
  }
  if (lemmas.empty()) throw Error(ErrorKind::Data, "lemma list '" + path + "' is empty");
  return lemmas;
}

/// Scanner over the element list that follows the ':' of a cue line.
class ElementScanner {
 public:
  ElementScanner(std::string_view src, std::size_t line, const std::string& base_dir)
      : src_(src), line_(line), base_dir_(base_dir) {}

  std::vector<CueElement> parse() {
    std::vector<CueElement> elements;
    for (;;) {
      skip_ws();
      if (done()) break;
      if (src_.substr(pos_, 4) == "gap=") {
        pos_ += 4;
        if (elements.empty()) fail("gap= before the first element");
        auto word = read_word();
        long long gap = text::parse_int(word, line_);
        if (gap < 0) fail("gap must be non-negative");
        elements.back().gap_after = static_cast<std::size_t>(gap);
        continue;
      }
      elements.push_back(parse_element());
    }
    if (elements.empty()) fail("cue has no elements");
    return elements;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }

  bool done() const { return pos_ >= src_.size(); }
  char peek() const { return done() ? '\0' : src_[pos_]; }

  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  std::string read_word() {
    std::size_t start = pos_;
    while (!done() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected a word at column " + std::to_string(pos_ + 1));
    return std::string(src_.substr(start, pos_ - start));
  }

  std::string read_quoted() {
    if (peek() != '"') fail("expected quoted string");
    ++pos_;
    std::string out;
    while (!done() && src_[pos_] != '"') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) ++pos_;
      out += src_[pos_++];
    }
    if (done()) fail("unterminated string");
    ++pos_;
    return out;
  }

  /// Argument list: quoted strings or bare words, comma separated.
  std::vector<std::pair<std::string, bool>> read_args() {
    if (peek() != '(') fail("expected '('");
    ++pos_;
    std::vector<std::pair<std::string, bool>> args;
    skip_ws();
    if (peek() == ')') {
      ++pos_;
      return args;
    }
    for (;;) {
      skip_ws();
      if (peek() == '"') args.emplace_back(read_quoted(), true);
      else args.emplace_back(read_word(), false);
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == ')') {
        ++pos_;
        return args;
      }
      fail("expected ',' or ')' in argument list");
    }
  }

  std::vector<std::string> quoted_args(const std::string& name) {
    auto args = read_args();
    std::vector<std::string> out;
    for (auto& [value, quoted] : args) {
      if (!quoted) fail(name + "() takes quoted strings");
      if (value.empty()) fail(name + "() argument is empty");
      out.push_back(std::move(value));
    }
    if (out.empty()) fail(name + "() needs at least one argument");
    return out;
  }

  std::vector<std::string> affixes(const std::string& name) {
    auto out = quoted_args(name);
    for (auto& s : out) {
      s = text::to_lower(s);
      if (strip_hyphens(s).empty()) fail(name + "() argument has no letters");
    }
    return out;
  }

  CueElement parse_element() {
    CueElement element;
    for (;;) {
      std::string name = read_word();
      if (name == "TARGET") {
        if (element.target) fail("multiple TARGET");
        element.target = true;
      } else if (name == "any") {
        element.predicates.emplace_back(AnyTest{});
      } else if (name == "lemma") {
        auto lemmas = quoted_args(name);
        for (auto& l : lemmas) l = text::to_lower(l);
        element.predicates.emplace_back(LemmaTest{std::move(lemmas)});
      } else if (name == "surface_suffix") {
        element.predicates.emplace_back(SuffixTest{affixes(name)});
      } else if (name == "surface_prefix") {
        element.predicates.emplace_back(PrefixTest{affixes(name)});
      } else if (name == "punct") {
        auto args = quoted_args(name);
        if (args.size() != 1) fail("punct() takes one string");
        element.predicates.emplace_back(PunctTest{args.front()});
      } else if (name == "pos") {
        PosTest test;
        for (auto& [value, quoted] : read_args()) {
          auto tag = parse_pos_tag(value);
          if (!tag) fail("unknown pos tag '" + value + "'");
          test.tags.push_back(*tag);
        }
        if (test.tags.empty()) fail("pos() needs at least one tag");
        element.predicates.emplace_back(std::move(test));
      } else if (name == "lexfile") {
        auto args = read_args();
        if (args.empty() || args.size() > 2 || !args[0].second)
          fail("lexfile() takes a quoted path and an optional limit");
        LemmaFileTest test;
        test.path = args[0].first;
        if (args.size() == 2) {
          long long limit = text::parse_int(args[1].first, line_);
          if (limit <= 0) fail("lexfile() limit must be positive");
          test.limit = static_cast<std::size_t>(limit);
        }
        std::filesystem::path resolved(test.path);
        if (resolved.is_relative()) resolved = std::filesystem::path(base_dir_) / resolved;
        test.lemmas = load_lemma_list(resolved.string(), test.limit);
        element.predicates.emplace_back(std::move(test));
      } else {
        fail("unknown element '" + name + "'");
      }
      if (peek() != '&') break;
      ++pos_;
    }
    return element;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_;
  const std::string& base_dir_;
};

bool valid_ident(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isgraph(u) || u >= 0x80;
  });
}

CuePattern parse_cue_line(std::string_view body, std::size_t lineno, const std::string& base_dir) {
  auto colon = body.find(':');
  if (colon == std::string_view::npos) throw ParseError(lineno, "missing ':' in cue line");
  CuePattern pattern;
  bool have_id = false, have_group = false, have_pol = false;
  std::istringstream attrs{std::string(body.substr(0, colon))};
  std::string attr;
  while (attrs >> attr) {
    auto eq = attr.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key=value, got '" + attr + "'");
    std::string key = attr.substr(0, eq), value = attr.substr(eq + 1);
    if (!valid_ident(value)) throw ParseError(lineno, "empty value for '" + key + "'");
    if (key == "id") {
      pattern.id = value;
      have_id = true;
    } else if (key == "group") {
      pattern.group = value;
      have_group = true;
    } else if (key == "pol") {
      if (value == "+") pattern.polarity = Polarity::Positive;
      else if (value == "-") pattern.polarity = Polarity::Negative;
      else throw ParseError(lineno, "pol must be + or -");
      have_pol = true;
    } else {
      throw ParseError(lineno, "unknown attribute '" + key + "'");
    }
  }
  if (!have_id || !have_group || !have_pol)
    throw ParseError(lineno, "cue needs id=, group= and pol=");
  pattern.elements = ElementScanner(body.substr(colon + 1), lineno, base_dir).parse();
  return pattern;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

std::string join_quoted(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + quote(items[i]);
  return out;
}

std::string render(const TokenPredicate& pred) {
  struct Visitor {
    std::string operator()(const SuffixTest& t) const { return "surface_suffix(" + join_quoted(t.written) + ")"; }
    std::string operator()(const PrefixTest& t) const { return "surface_prefix(" + join_quoted(t.written) + ")"; }
    std::string operator()(const LemmaTest& t) const { return "lemma(" + join_quoted(t.lemmas) + ")"; }
    std::string operator()(const LemmaFileTest& t) const {
      return "lexfile(" + quote(t.path) + (t.limit ? "," + std::to_string(t.limit) : "") + ")";
    }
    std::string operator()(const PosTest& t) const {
      std::string out = "pos(";
      for (std::size_t i = 0; i < t.tags.size(); ++i) out += (i ? "," : "") + std::string(to_string(t.tags[i]));
      return out + ")";
    }
    std::string operator()(const AnyTest&) const { return "any"; }
    std::string operator()(const PunctTest& t) const { return "punct(" + quote(t.literal) + ")"; }
  };
  return std::visit(Visitor{}, pred);
}

}  // namespace

CueSet parse_cueset(std::istream& in, const std::string& base_dir) {
  std::string class_name, language;
  std::vector<CuePattern> patterns;
  std::vector<std::size_t> lines;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto view = text::trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto space = view.find_first_of(" \t");
    auto keyword = view.substr(0, space);
    auto rest = space == std::string_view::npos ? std::string_view{} : text::trim(view.substr(space));
    if (keyword == "cue") {
      patterns.push_back(parse_cue_line(rest, lineno, base_dir));
      lines.push_back(lineno);
    } else if (keyword == "class") {
      if (rest.empty()) throw ParseError(lineno, "class needs a name");
      class_name = std::string(rest);
    } else if (keyword == "lang") {
      if (rest.empty()) throw ParseError(lineno, "lang needs a tag");
      language = std::string(rest);
    } else {
      throw ParseError(lineno, "unknown directive '" + std::string(keyword) + "'");
    }
  }
  CueSet cues(class_name, language);
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    try {
      cues.add(std::move(patterns[i]));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(lines[i], e.what());
    }
  }
  return cues;
}

CueSet parse_cueset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open cue file '" + path + "'");
  auto dir = std::filesystem::path(path).parent_path();
  return parse_cueset(in, dir.empty() ? "." : dir.string());
}

void write_cueset(std::ostream& out, const CueSet& cues) {
  if (!cues.class_name().empty()) out << "class " << cues.class_name() << '\n';
  if (!cues.language().empty()) out << "lang " << cues.language() << '\n';
  for (const auto& p : cues.patterns()) {
    out << "cue id=" << p.id << " group=" << p.group
        << " pol=" << (p.polarity == Polarity::Positive ? '+' : '-') << " :";
    for (const auto& e : p.elements) {
      out << ' ';
      bool first = true;
      if (e.target) {
        out << "TARGET";
        first = false;
      }
      for (const auto& pred : e.predicates) {
        out << (first ? "" : "&") << render(pred);
        first = false;
      }
      if (e.gap_after != kDefaultGap) out << " gap=" << e.gap_after;
    }
    out << '\n';
  }
}

CueSet builtin_cueset(std::string_view class_name, std::string_view language) {
  const std::string cls = text::to_lower(class_name);
  const std::string lang = text::to_lower(language);
  auto src = detail::embedded_file("cues/" + cls + "_" + lang + ".cue");
  if (src.empty())
    throw Error(ErrorKind::Data, "no builtin inventory for " + std::string(class_name) + "/" +
                                     std::string(language) + "; supply a cue-set file");
  std::istringstream in{std::string(src)};
  return parse_cueset(in);
}

}  // namespace nounclass
