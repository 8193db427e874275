#pragma once

#include <functional>
#include <string_view>

namespace fdw {

// Warnings go to stderr so that data written to stdout stays pipe-safe.
void warn(std::string_view message);

// Replaces the warning sink; returns the previous one. Passing an empty
// function restores the stderr sink.
using WarningSink = std::function<void(std::string_view)>;
WarningSink set_warning_sink(WarningSink sink);

}  // namespace fdw
