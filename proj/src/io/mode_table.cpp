#include "tweezer/io/mode_table.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "tweezer/errors.hpp"

namespace tweezer::io {

std::vector<PhononMode> parse_mode_table(std::istream& in, const std::string& source) {
  std::vector<PhononMode> modes;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;  // blank or comment-only
    std::istringstream fields(line);
    double k, re, im, omega;
    const std::string where = source + ":" + std::to_string(number);
    if (!(fields >> k >> re >> im >> omega))
      throw ConfigError(where + ": expected four columns k ReV ImV Omega");
    std::string extra;
    if (fields >> extra) throw ConfigError(where + ": unexpected trailing field '" + extra + "'");
    PhononMode mode{k, {re, im}, omega};
    try {
      validate_mode(mode);
    } catch (const Error& e) {
      throw ConfigError(where + ": " + e.what());
    }
    modes.push_back(mode);
  }
  if (modes.size() > 100) throw ConfigError(source + ": at most 100 modes are supported");
  return modes;
}

std::vector<PhononMode> read_mode_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mode table " + path.string());
  return parse_mode_table(in, path.string());
}

}  // namespace tweezer::io
