#include <doctest.h>

#include <sstream>

#include "nounclass/error.hpp"
#include "nounclass/features.hpp"
#include "nounclass/random.hpp"

using namespace nounclass;

namespace {

Corpus corpus(const std::string& s) {
  std::istringstream in(s);
  return parse_corpus(in, "en");
}

CueSet cues(const std::string& s) {
  std::istringstream in(s);
  return parse_cueset(in);
}

const char* kCues =
    "cue id=a group=in_X pol=+ : pos(PREP)&lemma(\"in\") TARGET\n"
    "cue id=b group=with_X pol=- : pos(PREP)&lemma(\"with\") TARGET\n";

const char* kText =
    "in\tin\tPREP\nParis\tparis\tPROPN\n\n"
    "to\tto\tPREP\nParis\tparis\tPROPN\n\n"
    "in\tin\tPREP\nthe\tthe\tDET\nhouse\thouse\tN\n\n"
    "with\twith\tPREP\nParis\tparis\tPROPN\n\n"
    "the\tthe\tDET\nhouse\thouse\tN\n\n";

}  // namespace

TEST_CASE("type profile counts occurrences and group hits") {
  auto c = corpus(kText);
  auto cs = cues(kCues);
  auto p = profile_type(c, cs, "paris");
  CHECK(p.occurrence_count == 3);
  CHECK(p.group_hits == std::vector<std::size_t>{1, 1});
  NounIndex index(c);
  CHECK(profile_type(c, index, cs, "paris") == p);

  auto v = to_vector(p);
  CHECK(v.seen);
  CHECK(v.values[0] == doctest::Approx(1.0 / 3.0));
  CHECK(v.values[1] == doctest::Approx(1.0 / 3.0));

  auto none = to_vector(profile_type(c, cs, "london"));
  CHECK_FALSE(none.seen);
  CHECK(none.values == std::vector<double>{0.0, 0.0});
}

TEST_CASE("feature values are relative frequencies in [0,1]") {
  Rng rng(19);
  auto cs = cues(kCues);
  const char* words[][3] = {{"in", "in", "PREP"}, {"with", "with", "PREP"}, {"the", "the", "DET"},
                            {"x", "x", "N"},      {"y", "y", "N"},          {"go", "go", "V"}};
  for (int t = 0; t < 100; ++t) {
    std::string text;
    for (std::size_t s = 1 + rng.below(10); s-- > 0;) {
      for (std::size_t i = 1 + rng.below(8); i-- > 0;) {
        auto* w = words[rng.below(6)];
        text += std::string(w[0]) + "\t" + w[1] + "\t" + w[2] + "\n";
      }
      text += "\n";
    }
    auto c = corpus(text);
    auto ds = extract_dataset(c, cs, {"x", "y"});
    for (const auto& row : ds.rows) {
      auto p = profile_type(c, cs, row.features.lemma);
      for (std::size_t g = 0; g < 2; ++g) {
        CHECK(row.features.values[g] >= 0.0);
        CHECK(row.features.values[g] <= 1.0);
        if (p.occurrence_count)
          CHECK(row.features.values[g] ==
                doctest::Approx(static_cast<double>(p.group_hits[g]) / p.occurrence_count));
      }
      CHECK(row.features.seen == (p.occurrence_count > 0));
    }
  }
}

TEST_CASE("extract_dataset with gold and unseen handling") {
  auto c = corpus(kText);
  auto cs = cues(kCues);
  GoldStandard gold("LOCATION");
  gold.add("paris", Label::Member);
  gold.add("house", Label::Member);
  gold.add("idea", Label::Nonmember);
  auto ds = extract_dataset(c, cs, gold);
  CHECK(ds.groups == std::vector<std::string>{"in_X", "with_X"});
  REQUIRE(ds.rows.size() == 3);
  CHECK(ds.rows[1].features.values[0] == doctest::Approx(0.5));
  CHECK(ds.rows[2].label == Label::Nonmember);
  CHECK_FALSE(ds.rows[2].features.seen);
  CHECK(drop_unseen(ds).rows.size() == 2);

  CHECK_THROWS_AS(extract_dataset(c, cs, std::vector<std::string>{}), Error);
  CHECK_THROWS_AS(extract_dataset(c, cs, {"a", "a"}), Error);
}

TEST_CASE("dataset round-trip") {
  Rng rng(43);
  for (int t = 0; t < 50; ++t) {
    Dataset ds;
    const std::size_t dims = 1 + rng.below(5);
    for (std::size_t g = 0; g < dims; ++g) ds.groups.push_back("grp" + std::to_string(g));
    for (std::size_t r = rng.below(20); r-- > 0;) {
      DatasetRow row;
      row.features.lemma = "lemma" + std::to_string(ds.rows.size());
      for (std::size_t g = 0; g < dims; ++g)
        row.features.values.push_back(rng.below(3) ? 0.0 : static_cast<double>(rng.below(1000001)) / 1e6);
      row.features.seen = false;
      for (double v : row.features.values) row.features.seen |= v > 0;
      const auto l = rng.below(3);
      if (l < 2) row.label = l ? Label::Member : Label::Nonmember;
      ds.rows.push_back(row);
    }
    std::ostringstream a;
    write_dataset(a, ds);
    std::istringstream in(a.str());
    auto back = parse_dataset(in);
    CHECK(back == ds);
    std::ostringstream b;
    write_dataset(b, back);
    CHECK(a.str() == b.str());
  }
}

TEST_CASE("dataset parse errors") {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return parse_dataset(in);
  };
  CHECK_NOTHROW(parse("lemma\tlabel\ta\nx\t1\t0.5\n"));
  CHECK_THROWS_AS(parse("lemma\tlabel\ta\nx\t1\t1.5\n"), ParseError);
  CHECK_THROWS_AS(parse("lemma\tlabel\ta\nx\t2\t0.5\n"), ParseError);
  CHECK_THROWS_AS(parse("lemma\tlabel\ta\nx\t1\t0.5\t0.1\n"), ParseError);
  CHECK_THROWS_AS(parse("word\tlabel\ta\n"), ParseError);
}

TEST_CASE("class cue frequencies are occurrence weighted") {
  auto c = corpus(kText);
  auto cs = cues(kCues);
  GoldStandard gold;
  gold.add("paris", Label::Member);
  gold.add("house", Label::Nonmember);
  auto stats = class_cue_frequencies(c, cs, gold);
  REQUIRE(stats.size() == 2);
  CHECK(stats[0].group == "in_X");
  CHECK(stats[0].members == doctest::Approx(1.0 / 3.0));
  CHECK(stats[0].nonmembers == doctest::Approx(0.5));
  CHECK(stats[1].polarity == Polarity::Negative);
  CHECK(stats[1].nonmembers == 0.0);

  std::ostringstream out;
  write_cue_stats(out, stats);
  CHECK(out.str() == "in_X 0.33333 0.50000\nwith_X 0.33333 0.00000\n");

  GoldStandard absent;
  absent.add("idea", Label::Member);
  absent.add("house", Label::Nonmember);
  CHECK_THROWS_AS(class_cue_frequencies(c, cs, absent), Error);
}
