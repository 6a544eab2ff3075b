#pragma once

#include <nlohmann/json.hpp>

#include "pfl/beam_analysis.hpp"
#include "pfl/budget.hpp"
#include "pfl/dipole_collection.hpp"
#include "pfl/pfl_design.hpp"
#include "pfl/scalar_diffraction.hpp"
#include "pfl/spectral_filtering.hpp"

// JSON encodings of report types (nlohmann::json ADL hooks). Quantities are SI.

namespace pfl::io {

inline constexpr int schema_version = 1;

// Wraps a payload as {"schema_version": 1, "kind": kind, ...payload}.
nlohmann::json report(const std::string& kind, nlohmann::json payload);
// Throws SchemaError unless the document carries the expected kind and schema version.
const nlohmann::json& check_report(const nlohmann::json& doc, const std::string& kind);

}  // namespace pfl::io

namespace pfl::design {
void to_json(nlohmann::json& j, const ZoneLayout& layout);  // summary without the ring list
}

namespace pfl::beam {
void to_json(nlohmann::json& j, const WaistPoint& p);
void from_json(const nlohmann::json& j, WaistPoint& p);
void to_json(nlohmann::json& j, const KnifeEdgeFit& f);
void to_json(nlohmann::json& j, const CausticFit& f);
void from_json(const nlohmann::json& j, CausticFit& f);
}

namespace pfl::diffraction {
void to_json(nlohmann::json& j, const FocalScanResult& s);  // summary: best focus and curves
}

namespace pfl::dipole {
void to_json(nlohmann::json& j, const EmissionChannel& c);
void from_json(const nlohmann::json& j, EmissionChannel& c);
void to_json(nlohmann::json& j, const CouplingBudget& b);
void from_json(const nlohmann::json& j, CouplingBudget& b);
}

namespace pfl::filtering {
void to_json(nlohmann::json& j, const SchemeErrorBudget& b);
void from_json(const nlohmann::json& j, SchemeErrorBudget& b);
}

namespace pfl::budget {
void to_json(nlohmann::json& j, const FaultToleranceResult& r);
void from_json(const nlohmann::json& j, FaultToleranceResult& r);
}
