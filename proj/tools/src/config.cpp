#include "rtdiff/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rtdiff/errors.hpp"

namespace rtdiff::cli {

namespace {

const Json& empty_object() {
  static const Json kEmpty = Json::object();
  return kEmpty;
}

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

}  // namespace

Json load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    Json j = Json::parse(buffer.str());
    if (!j.is_object()) throw ConfigError("", "config root must be a JSON object");
    return j;
  } catch (const Json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
}

Section::Section(const Json& node, std::string path) : node_(&node), path_(std::move(path)) {
  if (!node.is_object()) throw ConfigError(path_, "expected an object");
}

const Json* Section::find(std::string_view key) const {
  const auto it = node_->find(std::string(key));
  if (it == node_->end() || it->is_null()) return nullptr;
  return &*it;
}

const Json& Section::require(std::string_view key) const {
  const Json* j = find(key);
  if (j == nullptr) throw ConfigError(field(key), "required field is missing");
  return *j;
}

bool Section::has(std::string_view key) const {
  return find(key) != nullptr;
}

std::string Section::field(std::string_view key) const {
  return join(path_, key);
}

std::int64_t Section::integer(std::string_view key, std::int64_t lo, std::int64_t hi) const {
  const Json& j = require(key);
  if (!j.is_number_integer()) throw ConfigError(field(key), "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < lo || v > hi) {
    throw ConfigError(field(key), "value " + std::to_string(v) + " outside [" +
                                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return v;
}

std::int64_t Section::integer(std::string_view key, std::int64_t fallback, std::int64_t lo,
                              std::int64_t hi) const {
  return has(key) ? integer(key, lo, hi) : fallback;
}

double Section::number(std::string_view key, double lo, double hi) const {
  const Json& j = require(key);
  if (!j.is_number()) throw ConfigError(field(key), "expected a number");
  const auto v = j.get<double>();
  if (!std::isfinite(v) || v < lo || v > hi) {
    throw ConfigError(field(key), "value " + std::to_string(v) + " outside [" +
                                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return v;
}

double Section::number(std::string_view key, double fallback, double lo, double hi) const {
  return has(key) ? number(key, lo, hi) : fallback;
}

bool Section::boolean(std::string_view key, bool fallback) const {
  const Json* j = find(key);
  if (j == nullptr) return fallback;
  if (!j->is_boolean()) throw ConfigError(field(key), "expected true or false");
  return j->get<bool>();
}

std::string Section::text(std::string_view key) const {
  const Json& j = require(key);
  if (!j.is_string()) throw ConfigError(field(key), "expected a string");
  return j.get<std::string>();
}

std::string Section::text(std::string_view key, std::string fallback) const {
  return has(key) ? text(key) : fallback;
}

std::vector<double> Section::numbers(std::string_view key) const {
  const Json& j = require(key);
  if (!j.is_array()) throw ConfigError(field(key), "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number() || !std::isfinite(j[i].get<double>())) {
      throw ConfigError(field(key) + "[" + std::to_string(i) + "]", "expected a finite number");
    }
    out.push_back(j[i].get<double>());
  }
  return out;
}

std::vector<std::int64_t> Section::integers(std::string_view key, std::int64_t lo,
                                            std::int64_t hi) const {
  const Json& j = require(key);
  if (!j.is_array()) throw ConfigError(field(key), "expected an array of integers");
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string name = field(key) + "[" + std::to_string(i) + "]";
    if (!j[i].is_number_integer()) throw ConfigError(name, "expected an integer");
    const auto v = j[i].get<std::int64_t>();
    if (v < lo || v > hi) {
      throw ConfigError(name, "value " + std::to_string(v) + " outside [" + std::to_string(lo) +
                                  ", " + std::to_string(hi) + "]");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> Section::texts(std::string_view key) const {
  const Json& j = require(key);
  if (!j.is_array()) throw ConfigError(field(key), "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) {
      throw ConfigError(field(key) + "[" + std::to_string(i) + "]", "expected a string");
    }
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

std::vector<Section> Section::sections(std::string_view key) const {
  const Json& j = require(key);
  if (!j.is_array() || j.empty()) throw ConfigError(field(key), "expected a non-empty array");
  std::vector<Section> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.emplace_back(j[i], field(key) + "[" + std::to_string(i) + "]");
  }
  return out;
}

Section Section::child(std::string_view key) const {
  const Json* j = find(key);
  return Section(j == nullptr ? empty_object() : *j, field(key));
}

MapChoice parse_map(const Section& root) {
  if (!root.has("map")) throw ConfigError("map", "required field is missing");
  const Section m = root.child("map");
  const std::string type = m.text("type");
  try {
    if (type == "linear_mod") {
      return {IntervalMap::linear_mod(static_cast<int>(m.integer("k", 2, 1000))), type};
    }
    if (type == "rotation") {
      return {IntervalMap::rotation(RotationNumber::irrational(m.number("alpha", 0.0, 1.0))),
              type};
    }
    if (type == "rotation_rational") {
      const std::int64_t q = m.integer("q", 1, 1'000'000'000);
      const std::int64_t p = m.integer("p", 1, q);
      return {IntervalMap::rotation(RotationNumber::rational(p, q)), type};
    }
    if (type == "piecewise_affine") {
      std::vector<Branch> branches;
      for (const Section& b : m.sections("branches")) {
        branches.push_back(Branch::affine(b.number("lower", 0.0, 1.0), b.number("upper", 0.0, 1.0),
                                          b.number("slope", -1e9, 1e9),
                                          b.number("intercept", -1e9, 1e9)));
      }
      return {IntervalMap::piecewise(std::move(branches)), type};
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(m.path(), e.what());
  }
  throw ConfigError(m.field("type"), "unknown map type '" + type + "'");
}

Observable parse_observable(const Section& root) {
  if (!root.has("observable")) return Observable::identity();
  const Section o = root.child("observable");
  const std::string type = o.text("type");
  try {
    if (type == "identity") return Observable::identity();
    if (type == "zero") return Observable::constant(0.0);
    if (type == "constant") return Observable::constant(o.number("value", 0.0, 1e12));
    if (type == "indicator") {
      return Observable::indicator(o.number("a", 0.0, 1.0), o.number("b", 0.0, 1.0));
    }
    if (type == "step") return Observable::step(o.numbers("breaks"), o.numbers("values"));
    if (type == "poly") return Observable::polynomial(o.numbers("coeffs"));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(o.path(), e.what());
  }
  throw ConfigError(o.field("type"), "unknown observable type '" + type + "'");
}

}  // namespace rtdiff::cli
