#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

namespace nlsg {

enum class Direction { all_t_below, all_t_above };

enum class Claim {
  resolvent_roc,
  miyadera,
  semigroup_roc,
  res_cauchy,
  res_semi_comb,
  plant_main,
  reich_resolvent_roc,
  reich_escape,
  reich_direction,
  reich_cauchy,
  reich_main,
};

std::string to_string(Direction d);
std::string to_string(Claim c);
Claim claim_from_string(std::string_view name);
const std::vector<Claim>& all_claims();
bool is_reich_claim(Claim c);

/// Threshold t* such that the claimed inequality holds on (0, t*] or [t*, inf).
struct RateCertificate {
  double epsilon = 0.0;
  double threshold = 0.0;
  Direction direction = Direction::all_t_below;
  Claim claim = Claim::plant_main;
  nlohmann::json params;

  nlohmann::json to_json() const;
};

}  // namespace nlsg
