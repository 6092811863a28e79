#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "bergflow/domain.hpp"

namespace bergflow {

/// Configuration error carrying the JSON path of the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Reject keys of `object` outside `allowed`; throws ConfigError naming the key.
void require_known_keys(const nlohmann::json& object, const std::string& path,
                        std::initializer_list<const char*> allowed);

/// {"kind": "disc", "radius": R} | {"kind": "annulus", "inner": a, "outer": b}
/// | {"kind": "ball", "dim": n, "radius": R} | {"kind": "superellipse", "exponent": p}
/// | {"kind": "hartogs", "profile": name, "s": [re, im]}
Domain domain_from_json(const nlohmann::json& j, const std::string& path = "domain");

nlohmann::json domain_to_json(const Domain& domain);

}  // namespace bergflow
