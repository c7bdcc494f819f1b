#include "spinbath/config_file.hpp"

#include <fstream>
#include <sstream>

#include "spinbath/errors.hpp"

namespace spinbath {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile cfg;
  std::stringstream ss(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    }
    const std::string full = section.empty() ? key : section + "." + key;
    cfg.entries_[full] = value;
  }
  return cfg;
}

bool ConfigFile::has(const std::string& key) const {
  return entries_.count(key) > 0;
}

std::string ConfigFile::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

std::string ConfigFile::get_string(const std::string& key,
                                   const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double ConfigFile::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    return std::stod(v);
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": bad number '" + v + "'");
  }
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long ConfigFile::get_int(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    return std::stoll(v);
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": bad integer '" + v + "'");
  }
}

long long ConfigFile::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key " + key + ": bad boolean '" + v + "'");
}

std::vector<std::string> ConfigFile::get_list(const std::string& key) const {
  std::vector<std::string> out;
  std::stringstream ss(get_string(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace spinbath
