#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lrc {

inline constexpr const char* kToolVersion = "1.0.0";

// Exit codes: 0 verified, 1 refuted (with a witness in the report), 2 usage.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lrc
