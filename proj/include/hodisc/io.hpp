#pragma once

#include <string>

#include <json.hpp>

#include "hodisc/haar.hpp"
#include "hodisc/netquality.hpp"
#include "hodisc/norms.hpp"
#include "hodisc/studies.hpp"

namespace hodisc {

using Json = nlohmann::ordered_json;

Json to_json(const NetWitness& w);
Json to_json(const TValueReport& r);
Json to_json(const SequenceCheck& c, std::size_t n_max, int alpha, int t);
Json to_json(const FairIntervalReport& r);
Json to_json(const NormReport& r);
Json to_json(const BoundAudit& a);
Json to_json(const LiftCheck& c);
Json to_json(const HaarIndex& idx);

/// Single CSV row: N,d,kind,p,q,s,beta,value,tail,method (unused parameters left empty).
std::string norm_csv_row(const NormReport& r);
inline constexpr const char* norm_csv_header = "N,d,kind,p,q,s,beta,value,tail,method";

/// %.17g formatting.
std::string format_double(double v);

}  // namespace hodisc
