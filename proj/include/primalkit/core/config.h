// Copyright 2026 The primalkit Authors
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

// Minimal TOML-like configuration files:
//
//   # comment
//   key = value
//   [section]
//   other = "quoted string"
//   list = [1, 2, "three"]
//
// Keys inside a section are stored as "section.key". Values are kept as
// strings and converted on access.

#ifndef PRIMALKIT_CORE_CONFIG_H_
#define PRIMALKIT_CORE_CONFIG_H_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace primalkit {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  static Config Parse(std::string_view text);
  static Config ReadFile(const std::string& path);

  bool Has(const std::string& key) const { return values_.count(key) > 0; }
  std::string GetString(const std::string& key, const std::string& fallback) const;
  double GetDouble(const std::string& key, double fallback) const;
  int64_t GetInt(const std::string& key, int64_t fallback) const;
  bool GetBool(const std::string& key, bool fallback) const;
  // "[a, b]" lists; a scalar value yields a one-element list.
  std::vector<std::string> GetList(const std::string& key) const;

  void Set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  const std::map<std::string, std::string>& values() const { return values_; }

  // Keys of `[name]` with the "name." prefix removed.
  Config Section(const std::string& name) const;

  // Throws ConfigError naming the first key not in `known`.
  void CheckKnownKeys(const std::vector<std::string>& known) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace primalkit

#endif  // PRIMALKIT_CORE_CONFIG_H_
