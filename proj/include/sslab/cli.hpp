#pragma once

#include <iosfwd>
#include <string_view>

namespace sslab {

inline constexpr std::string_view kVersion = "0.1.0";

// Exit codes: 0 success or certified, 1 violations found, 2 invalid input.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sslab
