#pragma once

#include <optional>
#include <string_view>

namespace fdw::embedded {

// Data files compiled into the library: "stopwords_en", "table2".."table5",
// "name_map", "checksums".
std::optional<std::string_view> lookup(std::string_view key);

}  // namespace fdw::embedded
