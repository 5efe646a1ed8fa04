// Copyright 2026 The wljump Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Strict reader over one JSON object: typed getters that report the full
// field path, and a finish() that rejects keys nobody asked for.
#pragma once

#include <cmath>
#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "wljump/scenario.hpp"

namespace wljump::detail {

inline nlohmann::json parse_document(std::string_view text) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError("", std::string("malformed JSON: ") + e.what());
  }
}

class JsonSection {
 public:
  JsonSection(const nlohmann::json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ScenarioError(path_, "expected a JSON object");
  }

  [[nodiscard]] std::string path_of(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  [[nodiscard]] bool has(const std::string& key) const { return node_.contains(key); }

  const nlohmann::json& raw(const std::string& key) {
    used_.insert(key);
    static const nlohmann::json kNull;
    const auto it = node_.find(key);
    return it == node_.end() ? kNull : *it;
  }

  JsonSection child(const std::string& key) {
    const nlohmann::json& v = raw(key);
    if (v.is_null()) throw ScenarioError(path_of(key), "required section is missing");
    return JsonSection(v, path_of(key));
  }

  double number(const std::string& key, double fallback) {
    const nlohmann::json& v = raw(key);
    if (v.is_null()) return fallback;
    return as_number(v, key);
  }

  double required_number(const std::string& key) {
    const nlohmann::json& v = raw(key);
    if (v.is_null()) throw ScenarioError(path_of(key), "required field is missing");
    return as_number(v, key);
  }

  int integer(const std::string& key, int fallback) {
    const nlohmann::json& v = raw(key);
    if (v.is_null()) return fallback;
    if (!v.is_number_integer()) throw ScenarioError(path_of(key), "expected an integer");
    return v.get<int>();
  }

  int required_integer(const std::string& key) {
    const nlohmann::json& v = raw(key);
    if (v.is_null()) throw ScenarioError(path_of(key), "required field is missing");
    if (!v.is_number_integer()) throw ScenarioError(path_of(key), "expected an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    const nlohmann::json& v = raw(key);
    if (v.is_null()) return fallback;
    if (!v.is_boolean()) throw ScenarioError(path_of(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const nlohmann::json& v = raw(key);
    if (v.is_null()) return fallback;
    if (!v.is_string()) throw ScenarioError(path_of(key), "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!used_.count(it.key())) throw ScenarioError(path_of(it.key()), "unknown field");
    }
  }

 private:
  double as_number(const nlohmann::json& v, const std::string& key) const {
    if (!v.is_number()) throw ScenarioError(path_of(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ScenarioError(path_of(key), "must be finite");
    return d;
  }

  const nlohmann::json& node_;
  std::string path_;
  std::set<std::string> used_;
};

}  // namespace wljump::detail
