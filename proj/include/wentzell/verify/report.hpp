#pragma once

#include <cstdint>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wentzell/fem/assembly.hpp"

namespace wentzell {

/// Ordered key/value record rendered either as `key: value` lines or as JSON.
/// A report fails as soon as one recorded check fails.
class Report {
 public:
  Report() = default;
  explicit Report(std::string name) { data_["report"] = std::move(name); }

  template <class T>
  Report& set(const std::string& key, const T& value) {
    data_[key] = value;
    return *this;
  }

  Report& check(const std::string& name, bool pass) {
    data_["checks"][name] = pass ? "pass" : "fail";
    passed_ = passed_ && pass;
    return *this;
  }

  /// Seed, mesh id and beta description, recorded by every randomized report.
  Report& context(const OperatorBundle& b, std::uint64_t seed) {
    data_["seed"] = seed;
    data_["mesh"] = b.mesh->id();
    data_["beta"] = b.beta.description();
    return *this;
  }

  bool passed() const noexcept { return passed_; }
  const nlohmann::ordered_json& data() const noexcept { return data_; }

  std::string json(int indent = 2) const { return data_.dump(indent); }

  std::string text() const {
    std::ostringstream os;
    write_text(os, data_, "");
    return os.str();
  }

 private:
  static void write_text(std::ostringstream& os, const nlohmann::ordered_json& j, const std::string& prefix) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
      if (it->is_object()) {
        write_text(os, *it, key);
      } else {
        os << key << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
      }
    }
  }

  nlohmann::ordered_json data_ = nlohmann::ordered_json::object();
  bool passed_ = true;
};

}  // namespace wentzell
