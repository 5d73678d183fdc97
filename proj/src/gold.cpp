#include "nounclass/gold.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "nounclass/error.hpp"
#include "nounclass/text.hpp"

namespace nounclass {

void GoldStandard::add(const std::string& lemma, Label label) {
  if (members_.count(lemma) || nonmembers_.count(lemma))
    throw Error(ErrorKind::Data, "lemma '" + lemma + "' listed twice in gold standard");
  (label == Label::Member ? members_ : nonmembers_).insert(lemma);
  entries_.emplace_back(lemma, label);
}

std::vector<std::string> GoldStandard::lemmas() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

std::vector<std::optional<Label>> GoldStandard::labels() const {
  std::vector<std::optional<Label>> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.emplace_back(e.second);
  return out;
}

GoldStandard parse_gold(std::istream& in, std::string class_name) {
  GoldStandard gold(std::move(class_name));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto view = text::trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto fields = text::split(view, '\t');
    if (fields.size() != 2) throw ParseError(lineno, "gold lines need `lemma<TAB>1|0`");
    auto flag = text::trim(fields[1]);
    if (flag != "1" && flag != "0") throw ParseError(lineno, "label must be 1 or 0");
    auto lemma = text::to_lower(text::trim(fields[0]));
    if (lemma.empty()) throw ParseError(lineno, "empty lemma");
    try {
      gold.add(lemma, flag == "1" ? Label::Member : Label::Nonmember);
    } catch (const Error& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return gold;
}

GoldStandard parse_gold_file(const std::string& path, std::string class_name) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open gold file '" + path + "'");
  return parse_gold(in, std::move(class_name));
}

void write_gold(std::ostream& out, const GoldStandard& gold) {
  for (const auto& [lemma, label] : gold.entries())
    out << lemma << '\t' << (label == Label::Member ? '1' : '0') << '\n';
}

}  // namespace nounclass
