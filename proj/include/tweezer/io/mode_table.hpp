#pragma once

#include <filesystem>
#include <istream>
#include <vector>

#include "tweezer/survival.hpp"

namespace tweezer::io {

/// Whitespace-separated records `k ReV ImV Omega`; `#` starts a comment.
/// Throws ConfigError with the line number on malformed or invalid rows.
std::vector<PhononMode> parse_mode_table(std::istream& in, const std::string& source = "<stream>");
std::vector<PhononMode> read_mode_table(const std::filesystem::path& path);

}  // namespace tweezer::io
