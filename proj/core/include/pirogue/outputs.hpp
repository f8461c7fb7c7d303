#pragma once

#include <filesystem>
#include <string>

#include "pirogue/engine.hpp"

namespace pirogue {

/**
 * Writes a run directory:
 *   landings_daily.csv   date,site,tons
 *   fleet_daily.csv      date,site,cat,count
 *   biomass_daily.csv    date,species,tons
 *   catch_country_daily.csv  date,country,tons (cumulative)
 *   migrations.csv       date,fu_id,kind,from,to
 *   ledger.csv           species,initial,growth,unplaced_growth,harvested,senescence,final_biomass
 *   interventions.csv    day,date,command
 *   run_meta.json        config echo, seed, version, validity
 * Daily files hold one block per frame, the initial state included. A row's
 * date is the snapshot instant at 00:00; its landings are those of the 24
 * hours before it.
 * All CSVs are LF-terminated, comma-separated, ISO dates, '.' decimals.
 */
void write_outputs(const RunOutputs& outputs, const std::filesystem::path& dir);

/// Decimal text used in every output file (shortest round-trip form).
std::string format_number(double value);

/// Library version string embedded in manifests.
std::string_view version();

}  // namespace pirogue
