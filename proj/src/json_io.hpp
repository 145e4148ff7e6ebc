#pragma once

#include <json.hpp>

#include "procdist/changepoint.hpp"
#include "procdist/classify.hpp"
#include "procdist/cluster.hpp"
#include "procdist/hyptest.hpp"

namespace procdist::detail {

using nlohmann::json;

json truncation_json(const Truncation& t);
json estimate_json(const DistanceEstimate& e);
json sum_information_json(const SumInformation& s);
json changepoint_json(const ChangePointEstimate& e);
json ranked_list_json(const RankedList& l);
json clustering_json(const Clustering& c);
json verdict_json(const TestVerdict& v);
json classify_json(const ClassifyResult& r);

json model_to_json(const ProcessModel& m);
/// `where` prefixes field paths in error messages.
ProcessModel model_from_json(const json& j, const std::string& where);
json calibration_to_json(const CalibrationTable& cal);

/// Parses text, turning syntax errors into parse_error with line and column.
json parse_json_text(std::string_view text, std::string_view source);

} // namespace procdist::detail
