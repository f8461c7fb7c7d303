#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace pirogue {

/// A steering command applied to a running world at a day boundary.
struct Intervention {
  enum class Kind { set_site_capacity, scale_catchability, set_campaign_prob, add_units, remove_units };

  Kind kind = Kind::set_site_capacity;
  std::string site;  // set_site_capacity, add_units, remove_units
  int category = 0;  // 1..3; 0 means all categories (scale_catchability only)
  double value = 0.0;  // capacity, factor or probability
  int count = 0;       // add/remove; -1 removes all matching units

  friend bool operator==(const Intervention&, const Intervention&) = default;
};

std::string_view to_string(Intervention::Kind kind);

/**
 * Text form, one command per line; site names with spaces are double-quoted:
 *   set_site_capacity <site> <tons_per_day>
 *   scale_catchability <category|all> <factor>
 *   set_campaign_prob <category|all> <probability>
 *   add_units <site> <category> <count>
 *   remove_units <site> <category> <count|all>
 * e.g. `set_site_capacity Kayar 0` or `remove_units "Fass Boye" 3 all`.
 */
std::string format_intervention(const Intervention& cmd);
/// Inverse of format_intervention. Throws ValidationError.
Intervention parse_intervention(std::string_view text);

struct ScheduledIntervention {
  std::int64_t day = 0;  // applied at the start of this day index
  Intervention command;
  friend bool operator==(const ScheduledIntervention&, const ScheduledIntervention&) = default;
};

}  // namespace pirogue
