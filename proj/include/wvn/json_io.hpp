#ifndef WVN_JSON_IO_HPP
#define WVN_JSON_IO_HPP

// JSON (de)serialization. Operator-data field names are normative:
// {"p": int, "alpha": number|null, "finite": bool,
//  "terms": [{"c": [re, im], "phi": number,
//             "envelope": {"kind": "power_law|constant|sampled",
//                          "delta": number, "x_min": number,
//                          "phase": {"kind": "none|table|linear", ...}}}]}

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "wvn/exceptional_set.hpp"
#include "wvn/infinite_type.hpp"
#include "wvn/operator_data.hpp"

namespace wvn {

nlohmann::json to_json(const operator_data& data);
operator_data operator_data_from_json(const nlohmann::json& j);
operator_data load_operator_data(const std::string& path);

nlohmann::json to_json(const validation_report& rep);
nlohmann::json to_json(const exceptional_set& set);
nlohmann::json to_json(const divisor_sum_report& rep);
nlohmann::json to_json(const eta_profile_entry& entry);

} // namespace wvn

#endif
