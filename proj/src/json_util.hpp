#pragma once

// Strict JSON reading helpers shared by every persisted format.

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include "dsirp/errors.hpp"
#include "json.hpp"

namespace dsirp::detail {

using json = nlohmann::ordered_json;

inline std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

inline json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("malformed JSON: ") + e.what());
  }
}

inline void expect_object(const json& j, const std::string& path,
                          std::initializer_list<const char*> required,
                          std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  for (const char* key : required)
    if (!j.contains(key)) throw SchemaError(join_path(path, key), "missing required field");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : required) known = known || it.key() == key;
    for (const char* key : optional) known = known || it.key() == key;
    if (!known) throw SchemaError(join_path(path, it.key()), "unknown field");
  }
}

inline double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

inline long as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<long>();
}

inline bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw SchemaError(path, "expected a boolean");
  return j.get<bool>();
}

inline std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

inline const json& as_array(const json& j, const std::string& path, long expected_size = -1) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  if (expected_size >= 0 && static_cast<long>(j.size()) != expected_size)
    throw SchemaError(path, "expected " + std::to_string(expected_size) + " entries, found " +
                                std::to_string(j.size()));
  return j;
}

inline std::vector<double> as_vector(const json& j, const std::string& path, long expected_size = -1) {
  as_array(j, path, expected_size);
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_double(j[i], index_path(path, i)));
  return out;
}

inline std::vector<std::vector<double>> as_matrix(const json& j, const std::string& path, long rows = -1,
                                                  long cols = -1) {
  as_array(j, path, rows);
  std::vector<std::vector<double>> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_vector(j[i], index_path(path, i), cols));
  return out;
}

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace dsirp::detail
