#pragma once

#include <span>
#include <string_view>

namespace nounclass::detail {

struct EmbeddedFile {
  std::string_view name;  // path relative to data/, e.g. "cues/human_en.cue"
  std::string_view text;
};

/// Data files compiled into the library (generated at configure time).
std::span<const EmbeddedFile> embedded_files();

std::string_view embedded_file(std::string_view name);

}  // namespace nounclass::detail
