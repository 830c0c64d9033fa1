#include "holoflow/cli/config.hpp"

#include <fstream>
#include <sstream>

namespace holoflow::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config parse_config(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = origin + ":" + std::to_string(line) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected key=value");
    std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (key.empty()) throw ConfigError(where + "empty key");
    if (value.empty()) throw ConfigError(where + "empty value for '" + key + "'");
    if (cfg.count(key)) throw ConfigError(where + "duplicate key '" + key + "'");
    cfg[key] = {value, line};
  }
  return cfg;
}

Config read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace holoflow::cli
