#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "melt/check.hpp"
#include "melt/dist.hpp"
#include "melt/levy_spec.hpp"
#include "melt/limit.hpp"

namespace melt {

using Json = nlohmann::json;

// distribution specs round-trip through JSON keyed on a "variant" field that
// matches variant_name(); wrapper nodes serialize their base recursively
Json spec_to_json(const DistPtr& d);
DistPtr spec_from_json(const Json& j);

Json levy_to_json(const LevySpec& s);
LevySpec levy_from_json(const Json& j);

Json check_to_json(const CheckResult& r);
Json report_to_json(const ConvergenceReport& r);
Json indeterminacy_to_json(const IndeterminacyReport& r);

// two columns (x, survival), comma or whitespace separated, '#' comments
DistPtr grid_from_csv(std::istream& in);

// FNV-1a over the canonical configuration string; stamped on every table
std::uint64_t config_digest(const std::string& text);

// "# config_digest=<16 hex>" followed by the header row
void csv_begin(std::ostream& out, const std::string& columns,
               std::uint64_t digest);

// flat rows: kind,t,key,value (key = lambda, x ladder rung, or empty)
void report_to_csv(const ConvergenceReport& r, std::uint64_t digest,
                   std::ostream& out);

}  // namespace melt
