#include "nounclass/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>

#include "builtin_data.hpp"
#include "nounclass/error.hpp"
#include "nounclass/random.hpp"
#include "nounclass/text.hpp"

namespace nounclass {

std::vector<GroupRate> parse_rates(std::istream& in) {
  std::vector<GroupRate> rates;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto view = text::trim(line);
    if (view.empty() || view.front() == '#') continue;
    std::istringstream fields{std::string(view)};
    std::string group, m, n, extra;
    if (!(fields >> group >> m >> n) || (fields >> extra))
      throw ParseError(lineno, "expected `group member_rate nonmember_rate`");
    GroupRate r{group, text::parse_double(m, lineno), text::parse_double(n, lineno)};
    for (double v : {r.member_rate, r.nonmember_rate})
      if (!(v >= 0.0 && v <= 1.0)) throw ParseError(lineno, "rate outside [0,1]");
    for (const auto& prev : rates)
      if (prev.group == group) throw ParseError(lineno, "duplicate group '" + group + "'");
    rates.push_back(std::move(r));
  }
  return rates;
}

std::vector<GroupRate> parse_rates_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open rates file '" + path + "'");
  return parse_rates(in);
}

std::vector<GroupRate> published_rates(std::string_view class_name, std::string_view language) {
  auto src = detail::embedded_file("rates/" + text::to_lower(class_name) + "_" +
                                   text::to_lower(language) + ".tsv");
  if (src.empty())
    throw Error(ErrorKind::Data, "no reference rates for " + std::string(class_name) + "/" +
                                     std::string(language));
  std::istringstream in{std::string(src)};
  return parse_rates(in);
}

namespace {

std::string bare(std::string_view affix) {
  while (!affix.empty() && affix.front() == '-') affix.remove_prefix(1);
  while (!affix.empty() && affix.back() == '-') affix.remove_suffix(1);
  return std::string(affix);
}

template <class T>
const T* find_pred(const CueElement& e) {
  for (const auto& p : e.predicates)
    if (const T* t = std::get_if<T>(&p)) return t;
  return nullptr;
}

/// A token satisfying every predicate of a non-target element.
Token realize(const CueElement& e, Rng& rng) {
  Token tok;
  if (auto pos = find_pred<PosTest>(e)) tok.pos = pos->tags.front();
  else if (find_pred<PunctTest>(e)) tok.pos = PosTag::PUNCT;

  if (auto lemma = find_pred<LemmaTest>(e)) tok.lemma = lemma->lemmas[rng.below(lemma->lemmas.size())];
  else if (auto file = find_pred<LemmaFileTest>(e)) tok.lemma = file->lemmas[rng.below(file->lemmas.size())];
  else if (auto punct = find_pred<PunctTest>(e)) tok.lemma = punct->literal;
  else tok.lemma = "zz" + text::to_lower(to_string(tok.pos));

  tok.surface = tok.lemma;
  if (auto punct = find_pred<PunctTest>(e)) tok.surface = punct->literal;
  if (auto suffix = find_pred<SuffixTest>(e)) {
    tok.surface += bare(suffix->written[rng.below(suffix->written.size())]);
    if (!find_pred<LemmaTest>(e) && !find_pred<LemmaFileTest>(e)) tok.lemma = tok.surface;
  }
  if (auto prefix = find_pred<PrefixTest>(e)) {
    tok.surface = bare(prefix->written[rng.below(prefix->written.size())]) + tok.surface;
    if (!find_pred<LemmaTest>(e) && !find_pred<LemmaFileTest>(e)) tok.lemma = tok.surface;
  }
  return tok;
}

struct GroupPlan {
  std::size_t group = 0;
  const CuePattern* pattern = nullptr;
  bool morphological = false;
  double member_rate = 0.0;
  double nonmember_rate = 0.0;
};

/// Surface of the target after applying a target element's affix tests.
std::string decorate_target(const std::string& stem, const CueElement& target, Rng& rng) {
  std::string surface = stem;
  if (auto suffix = find_pred<SuffixTest>(target))
    surface += bare(suffix->written[rng.below(suffix->written.size())]);
  if (auto prefix = find_pred<PrefixTest>(target))
    surface = bare(prefix->written[rng.below(prefix->written.size())]) + surface;
  return surface;
}

}  // namespace

SynthCorpus synth_corpus(const SynthSpec& spec, std::uint64_t seed) {
  const CueSet& cues = spec.cues;
  if (spec.members == 0 || spec.nonmembers == 0 || spec.occurrences == 0)
    throw Error(ErrorKind::Usage, "synthetic vocabulary sizes and occurrences must be at least 1");

  std::vector<GroupPlan> plans(cues.groups().size());
  for (std::size_t g = 0; g < plans.size(); ++g) plans[g].group = g;
  for (std::size_t i = 0; i < cues.patterns().size(); ++i) {
    auto& plan = plans[cues.group_of(i)];
    if (plan.pattern) continue;
    plan.pattern = &cues.patterns()[i];
    plan.morphological = plan.pattern->elements.size() == 1;
  }
  for (const auto& r : spec.rates) {
    auto it = std::find(cues.groups().begin(), cues.groups().end(), r.group);
    if (it == cues.groups().end()) throw Error(ErrorKind::Data, "rate given for unknown group '" + r.group + "'");
    if (!(r.member_rate >= 0 && r.member_rate <= 1 && r.nonmember_rate >= 0 && r.nonmember_rate <= 1))
      throw Error(ErrorKind::Data, "rate for '" + r.group + "' outside [0,1]");
    auto& plan = plans[static_cast<std::size_t>(it - cues.groups().begin())];
    plan.member_rate = r.member_rate;
    plan.nonmember_rate = r.nonmember_rate;
  }
  double member_context = 0.0, nonmember_context = 0.0;
  for (const auto& p : plans)
    if (!p.morphological) {
      member_context += p.member_rate;
      nonmember_context += p.nonmember_rate;
    }
  if (member_context > 1.0 + 1e-12 || nonmember_context > 1.0 + 1e-12)
    throw Error(ErrorKind::Data, "context rates of a class sum past 1");

  const std::string det = cues.language() == "es" ? "el" : "the";
  Rng rng(seed);
  SynthCorpus out{Corpus(cues.language().empty() ? "other" : cues.language()),
                  GoldStandard(cues.class_name())};

  auto emit_lemma = [&](const std::string& lemma, Label label) {
    out.gold.add(lemma, label);
    const bool member = label == Label::Member;
    for (std::size_t occ = 0; occ < spec.occurrences; ++occ) {
      // morphology: each group independently
      std::string surface = lemma;
      std::vector<std::size_t> planted;
      for (const auto& p : plans) {
        if (!p.morphological) continue;
        if (rng.uniform() < (member ? p.member_rate : p.nonmember_rate)) {
          surface = decorate_target(surface, p.pattern->elements.front(), rng);
          planted.push_back(p.group);
        }
      }
      // context: at most one group per sentence
      const GroupPlan* context = nullptr;
      double u = rng.uniform(), acc = 0.0;
      for (const auto& p : plans) {
        if (p.morphological) continue;
        acc += member ? p.member_rate : p.nonmember_rate;
        if (u < acc) {
          context = &p;
          break;
        }
      }

      std::vector<Token> tokens;
      std::size_t target_index = 0;
      if (context) {
        const auto& elems = context->pattern->elements;
        const std::size_t t = context->pattern->target_position();
        for (std::size_t i = 0; i < elems.size(); ++i) {
          if (i == t) {
            target_index = tokens.size();
            tokens.push_back(Token{decorate_target(surface, elems[i], rng), lemma, PosTag::N});
          } else {
            tokens.push_back(realize(elems[i], rng));
          }
          // exercise the gap allowance now and then
          if (i + 1 < elems.size() && elems[i].gap_after > 0 && rng.below(2) == 0)
            tokens.push_back(Token{det, det, PosTag::DET});
        }
        planted.push_back(context->group);
      } else {
        tokens.push_back(Token{surface, lemma, PosTag::N});
      }
      tokens.push_back(Token{".", ".", PosTag::PUNCT});

      Sentence check{tokens, 0};
      for (auto g : planted) {
        bool found = false;
        for (std::size_t i = 0; i < cues.patterns().size() && !found; ++i)
          found = cues.group_of(i) == g && match_at(cues.patterns()[i], check, target_index);
        if (!found)
          throw Error(ErrorKind::Data, "cannot realize a context for group '" + cues.groups()[g] + "'");
      }
      out.corpus.add_sentence(std::move(tokens));
    }
  };

  char name[32];
  for (std::size_t i = 0; i < spec.members; ++i) {
    std::snprintf(name, sizeof name, "mem%05zu", i);
    emit_lemma(name, Label::Member);
  }
  for (std::size_t i = 0; i < spec.nonmembers; ++i) {
    std::snprintf(name, sizeof name, "non%05zu", i);
    emit_lemma(name, Label::Nonmember);
  }
  return out;
}

}  // namespace nounclass
