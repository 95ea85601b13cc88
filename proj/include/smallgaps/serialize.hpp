#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "smallgaps/gaps.hpp"
#include "smallgaps/moments.hpp"
#include "smallgaps/thresholds.hpp"
#include "smallgaps/tuples.hpp"

namespace smallgaps {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// 17 significant digits.
std::string format_double(double v);

Json to_json(const Tuple& t);
Json to_json(const Tuple& t, const SingularSeriesValue& v);
Json to_json(const WeightParams& p);
Json to_json(const MomentReport& r);
Json to_json(const GapDistribution& g);
Json to_json(const ThresholdReport& r);
Json to_json(const GallagherResult& r);
Json to_json(const EnumerationHeader& h);

// Columns: eta,count,P,poisson.
void write_csv(std::ostream& out, const GapDistribution& g);

}  // namespace smallgaps
