#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace holoflow::cli {

struct ConfigEntry {
  std::string value;
  int line = 0;
};

/// key=value per line, '#' starts a comment, blank lines ignored.
using Config = std::map<std::string, ConfigEntry>;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Throws ConfigError("<path>:<line>: ...") on malformed lines or duplicate keys.
Config read_config(const std::string& path);
Config parse_config(const std::string& text, const std::string& origin);

}  // namespace holoflow::cli
