#pragma once

#include "json.hpp"  // vendored single-header nlohmann
#include "qnm/design.hpp"

namespace qnm {

using Json = nlohmann::json;

/// Complex matrices serialize as {rows, cols, data: [[re, im], ...]} row-major.
Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

Json layout_to_json(const SystemLayout& l);
SystemLayout layout_from_json(const Json& j);

/// {in, out, kind: "kraus"|"choi"|"superop", ...payload}. The stored
/// representation is whichever the channel currently holds most cheaply.
Json channel_to_json(const QuantumChannel& ch);
QuantumChannel channel_from_json(const Json& j);

Json ensemble_to_json(const UnitaryEnsemble& e);
UnitaryEnsemble ensemble_from_json(const Json& j);

Json deficiency_to_json(const DeficiencyReport& r);

}  // namespace qnm
