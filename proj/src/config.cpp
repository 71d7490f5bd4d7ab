#include "cqm/config.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace cqm::config {

using pipeline::ConfigError;
using pipeline::PipelineConfig;
using pipeline::ScheduleRow;

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
  }
}

double parse_coefficient(const std::string& key, const std::string& tok) {
  auto slash = tok.find('/');
  try {
    if (slash != std::string::npos) {
      double num = std::stod(tok.substr(0, slash));
      double den = std::stod(tok.substr(slash + 1));
      if (den == 0) throw std::invalid_argument(tok);
      return num / den;
    }
    return std::stod(tok);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number or fraction, got '" + tok + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + value + "'");
}

ScheduleRow parse_row(const std::string& key, const std::string& value) {
  auto toks = split_ws(value);
  if (toks.size() != 6) {
    throw ConfigError("key '" + key + "': expected 6 exponents m n k l s t");
  }
  ScheduleRow r;
  r.m = parse_int(key, toks[0]);
  r.n = parse_int(key, toks[1]);
  r.k = parse_int(key, toks[2]);
  r.l = parse_int(key, toks[3]);
  r.s = parse_int(key, toks[4]);
  r.t = parse_int(key, toks[5]);
  return r;
}

}  // namespace

PipelineConfig parse_config_text(std::string_view text) {
  PipelineConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    }

    if (key == "model") {
      cfg.model_id = value;
    } else if (key == "J") {
      cfg.J = static_cast<int>(parse_int(key, value));
    } else if (key == "W") {
      cfg.W = static_cast<int>(parse_int(key, value));
    } else if (key == "probe_cap") {
      cfg.probe_cap = static_cast<int>(parse_int(key, value));
    } else if (key == "budget") {
      cfg.budget = static_cast<std::size_t>(parse_int(key, value));
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "growth") {
      cfg.growth = parse_int(key, value);
    } else if (key == "schedule") {
      cfg.row1 = parse_row(key, value);
    } else if (key == "a_max") {
      cfg.a_max = parse_int(key, value);
    } else if (key == "d_cap") {
      cfg.d_cap = parse_int(key, value);
    } else if (key == "retry_cap") {
      cfg.retry_cap = static_cast<int>(parse_int(key, value));
    } else if (key == "basis") {
      auto toks = split_ws(value);
      if (toks.size() != 2) throw ConfigError("key 'basis': expected two words");
      cfg.basis_override = std::make_pair(toks[0], toks[1]);
    } else if (key == "require_commutator") {
      cfg.require_commutator = parse_bool(key, value);
    } else if (key == "conjugate_reps") {
      cfg.conjugate_reps = split_ws(value);
    } else if (key == "ell1") {
      cfg.ell1_t.clear();
      for (const auto& tok : split_ws(value)) cfg.ell1_t.push_back(parse_coefficient(key, tok));
    } else if (key == "custom.rank") {
      cfg.custom_rank = static_cast<int>(parse_int(key, value));
    } else if (key == "custom.table") {
      cfg.custom_table.clear();
      std::string row;
      std::istringstream rows(value);
      while (std::getline(rows, row, '/')) {
        std::vector<int> r;
        for (const auto& tok : split_ws(row)) r.push_back(static_cast<int>(parse_int(key, tok)));
        if (!r.empty()) cfg.custom_table.push_back(std::move(r));
      }
    } else if (key.rfind("custom.image.", 0) == 0) {
      int q = static_cast<int>(parse_int(key, key.substr(std::string("custom.image.").size())));
      if (q < 2) throw ConfigError("custom.image indices start at 2 (q1 is the identity)");
      if (static_cast<int>(cfg.custom_images.size()) < q - 1) {
        cfg.custom_images.resize(static_cast<std::size_t>(q - 1));
      }
      cfg.custom_images[static_cast<std::size_t>(q - 2)] = split_ws(value);
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace cqm::config
