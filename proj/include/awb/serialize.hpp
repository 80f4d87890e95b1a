#pragma once

// JSON forms of the exact types. Rationals are "p/q" strings, ordinals use the
// ordinal text syntax, vectors use the "n:c,n:c" text form. Object keys come out sorted.

#include <json.hpp>

#include "awb/blockcert.hpp"
#include "awb/goodness.hpp"
#include "awb/normmodel.hpp"

namespace awb {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "awb-artifact/1";

Json to_json(const Rational& x);
Json to_json(const FinSet& F);
Json to_json(const SuppVec& x);
Json to_json(const SpaceModel& m);
Json to_json(const KPoint& t);
Json to_json(const Verdict& v);
Json to_json(const AlphaEpsCert& c, std::optional<bool> verified = std::nullopt);
Json to_json(const ChainCert& c);
Json to_json(const ChainSearch& cs);
Json to_json(const TauEstimate& t);
Json to_json(const Measure& mu);
Json to_json(const MeasureFamily& fam);
Json to_json(const MPTranscript& tr);

// Readers throw ParseError on malformed input.
Rational rational_from_json(const Json& j);
FinSet finset_from_json(const Json& j);
SuppVec vec_from_json(const Json& j);
SpaceModel model_from_json(const Json& j);
KPoint point_from_json(const SpaceModel& m, const Json& j);
AlphaEpsCert cert_from_json(const Json& j);
ChainCert chain_from_json(const Json& j);
/// A chain artifact together with its dominating point data (as written by to_json(ChainSearch)).
ChainSearch chain_search_from_json(const Json& j);
Measure measure_from_json(const SpaceModel& m, const Json& j);
MeasureFamily family_from_json(const Json& j);

/// Parses text as JSON, mapping syntax errors to ParseError.
Json parse_json(const std::string& text);

}  // namespace awb
