#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace nounclass {

enum class Label { Nonmember, Member };

/// Manually validated member / non-member lemma lists for one class.
class GoldStandard {
 public:
  GoldStandard() = default;
  explicit GoldStandard(std::string class_name) : class_name_(std::move(class_name)) {}

  /// Throws on a lemma already present (with either label).
  void add(const std::string& lemma, Label label);

  const std::string& class_name() const { return class_name_; }
  const std::set<std::string>& members() const { return members_; }
  const std::set<std::string>& nonmembers() const { return nonmembers_; }

  /// Entries in insertion (file) order.
  const std::vector<std::pair<std::string, Label>>& entries() const { return entries_; }
  std::vector<std::string> lemmas() const;
  std::vector<std::optional<Label>> labels() const;

  bool operator==(const GoldStandard&) const = default;

 private:
  std::string class_name_;
  std::set<std::string> members_;
  std::set<std::string> nonmembers_;
  std::vector<std::pair<std::string, Label>> entries_;
};

/// Gold file: `lemma<TAB>1|0` per line, `#` comments.
GoldStandard parse_gold(std::istream& in, std::string class_name = {});
GoldStandard parse_gold_file(const std::string& path, std::string class_name = {});
void write_gold(std::ostream& out, const GoldStandard& gold);

}  // namespace nounclass
