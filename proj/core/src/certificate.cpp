#include "nlsg/certificate.hpp"

#include <array>
#include <utility>

#include "nlsg/errors.hpp"

namespace nlsg {

namespace {

constexpr std::array<std::pair<Claim, std::string_view>, 11> kNames{{
    {Claim::resolvent_roc, "resolvent_roc"},
    {Claim::miyadera, "miyadera"},
    {Claim::semigroup_roc, "semigroup_roc"},
    {Claim::res_cauchy, "res_cauchy"},
    {Claim::res_semi_comb, "res_semi_comb"},
    {Claim::plant_main, "plant_main"},
    {Claim::reich_resolvent_roc, "reich_resolvent_roc"},
    {Claim::reich_escape, "reich_escape"},
    {Claim::reich_direction, "reich_direction"},
    {Claim::reich_cauchy, "reich_cauchy"},
    {Claim::reich_main, "reich_main"},
}};

}  // namespace

std::string to_string(Direction d) { return d == Direction::all_t_below ? "all_t_below" : "all_t_above"; }

std::string to_string(Claim c) {
  for (const auto& [claim, name] : kNames) {
    if (claim == c) return std::string(name);
  }
  return "unknown";
}

Claim claim_from_string(std::string_view name) {
  for (const auto& [claim, n] : kNames) {
    if (n == name) return claim;
  }
  throw ConfigError("unknown claim: " + std::string(name));
}

const std::vector<Claim>& all_claims() {
  static const std::vector<Claim> claims = [] {
    std::vector<Claim> v;
    for (const auto& entry : kNames) v.push_back(entry.first);
    return v;
  }();
  return claims;
}

bool is_reich_claim(Claim c) { return static_cast<int>(c) >= static_cast<int>(Claim::reich_resolvent_roc); }

nlohmann::json RateCertificate::to_json() const {
  return {{"epsilon", epsilon},
          {"threshold", threshold},
          {"direction", to_string(direction)},
          {"claim", to_string(claim)},
          {"params", params}};
}

}  // namespace nlsg
