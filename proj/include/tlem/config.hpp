#ifndef TLEM_CONFIG_HPP
#define TLEM_CONFIG_HPP

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tlem {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Run settings. Precedence, lowest first: defaults, config file, TLEM_*
/// environment variables, command-line flags.
struct Config {
  std::size_t max_nodes = 10000;
  unsigned max_depth = 6;
  std::size_t eval_budget = 1000;
  std::uint64_t seed = 1;
  unsigned squaring_cap = 16;

  /// Sets one key; keys use the flag spelling (max-nodes, depth, ...).
  void set(const std::string& key, const std::string& value)
  {
    auto num = [&](auto& field) {
      try {
        if (value.empty() || value[0] < '0' || value[0] > '9') throw std::invalid_argument("not a number");
        std::size_t used = 0;
        unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        field = static_cast<std::remove_reference_t<decltype(field)>>(v);
      } catch (const std::exception&) {
        throw ConfigError("bad value '" + value + "' for " + key);
      }
    };
    if (key == "max-nodes") num(max_nodes);
    else if (key == "depth") num(max_depth);
    else if (key == "eval-budget") num(eval_budget);
    else if (key == "seed") num(seed);
    else if (key == "squaring-cap") num(squaring_cap);
    else throw ConfigError("unknown config key '" + key + "'");
  }

  void load_text(const std::string& text)
  {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto trim = [](std::string s) {
        auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
      set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }

  void load_file(const std::string& path)
  {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    load_text(ss.str());
  }

  /// TLEM_MAX_NODES, TLEM_DEPTH, TLEM_EVAL_BUDGET, TLEM_SEED, TLEM_SQUARING_CAP.
  void load_env(const std::function<const char*(const char*)>& getenv_fn = [](const char* k) { return std::getenv(k); })
  {
    static const std::pair<const char*, const char*> kVars[] = {{"TLEM_MAX_NODES", "max-nodes"},
                                                                 {"TLEM_DEPTH", "depth"},
                                                                 {"TLEM_EVAL_BUDGET", "eval-budget"},
                                                                 {"TLEM_SEED", "seed"},
                                                                 {"TLEM_SQUARING_CAP", "squaring-cap"}};
    for (auto [var, key] : kVars) {
      if (const char* v = getenv_fn(var)) set(key, v);
    }
  }

  std::string describe() const
  {
    std::ostringstream os;
    os << "max-nodes=" << max_nodes << " depth=" << max_depth << " eval-budget=" << eval_budget << " seed=" << seed
       << " squaring-cap=" << squaring_cap;
    return os.str();
  }
};

}  // namespace tlem

#endif  // TLEM_CONFIG_HPP
