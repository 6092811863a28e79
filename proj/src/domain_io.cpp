#include "bergflow/domain_io.hpp"

#include <algorithm>
#include <cmath>

namespace bergflow {

using nlohmann::json;

void require_known_keys(const json& object, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!object.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& item : object.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError(path + "." + item.key(), "unknown key '" + item.key() + "'");
  }
}

namespace {

double positive_number(const json& j, const std::string& parent, const char* key) {
  const std::string path = parent + "." + key;
  if (!j.contains(key)) throw ConfigError(path, "missing");
  if (!j.at(key).is_number()) throw ConfigError(path, "expected a number");
  const double v = j.at(key).get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(path, "must be positive");
  return v;
}

int integer(const json& j, const std::string& parent, const char* key) {
  const std::string path = parent + "." + key;
  if (!j.contains(key)) throw ConfigError(path, "missing");
  if (!j.at(key).is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.at(key).get<int>();
}

}  // namespace

Domain domain_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError(path + ".kind", "missing domain kind");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "disc") {
      require_known_keys(j, path, {"kind", "radius"});
      return make_disc(j.contains("radius") ? positive_number(j, path, "radius") : 1.0);
    }
    if (kind == "annulus") {
      require_known_keys(j, path, {"kind", "inner", "outer"});
      const double a = positive_number(j, path, "inner");
      const double b = positive_number(j, path, "outer");
      if (!(a < b)) throw ConfigError(path, "annulus needs inner < outer");
      return make_annulus(a, b);
    }
    if (kind == "ball") {
      require_known_keys(j, path, {"kind", "dim", "radius"});
      const int n = j.contains("dim") ? integer(j, path, "dim") : 2;
      if (n < 1 || n > kMaxDim) throw ConfigError(path + ".dim", "supported dimensions are 1 and 2");
      return make_ball(n, j.contains("radius") ? positive_number(j, path, "radius") : 1.0);
    }
    if (kind == "superellipse") {
      require_known_keys(j, path, {"kind", "exponent"});
      const int p = j.contains("exponent") ? integer(j, path, "exponent") : 4;
      if (p < 2 || p % 2 != 0) throw ConfigError(path + ".exponent", "must be an even integer >= 2");
      return make_superellipse(p);
    }
    if (kind == "hartogs") {
      require_known_keys(j, path, {"kind", "profile", "s"});
      if (!j.contains("profile") || !j.at("profile").is_string())
        throw ConfigError(path + ".profile", "missing profile name");
      cplx s = 0.0;
      if (j.contains("s")) {
        const auto& v = j.at("s");
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
          throw ConfigError(path + ".s", "expected [re, im]");
        s = {v[0].get<double>(), v[1].get<double>()};
      }
      return make_hartogs_fiber(s, profile_by_name(j.at("profile").get<std::string>()));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path + ".kind", "unsupported domain kind '" + kind + "'");
}

json domain_to_json(const Domain& domain) {
  if (const auto* d = std::get_if<DiscShape>(&domain.shape())) return {{"kind", "disc"}, {"radius", d->radius}};
  if (const auto* a = std::get_if<AnnulusShape>(&domain.shape()))
    return {{"kind", "annulus"}, {"inner", a->inner}, {"outer", a->outer}};
  if (const auto* b = std::get_if<BallShape>(&domain.shape()))
    return {{"kind", "ball"}, {"dim", b->dim}, {"radius", b->radius}};
  return {{"kind", domain.name()}};
}

}  // namespace bergflow
