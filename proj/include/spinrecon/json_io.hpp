#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "spinrecon/majorana.hpp"
#include "spinrecon/parent_space.hpp"
#include "spinrecon/tomography.hpp"

namespace spinrecon {

inline constexpr const char* kSchemaVersion = "spinrecon/1";

nlohmann::json to_json(const PureState& state);
PureState pure_state_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Direction& dir);
Direction direction_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RootSet& rootset);
RootSet rootset_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AxisTriple& axes);
AxisTriple axes_from_json(const nlohmann::json& j);

/// Probability vectors off unit sum by more than 1e-6 are rejected;
/// smaller deviations are renormalized.
nlohmann::json to_json(const DataSet& dataset);
DataSet dataset_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ReconstructionResult& result);

nlohmann::json to_json(const GenericityReport& report);

nlohmann::json to_json(const CertificateReport& report);

nlohmann::json to_json(const ConjugatePartnerReport& report);

std::string noise_sweep_csv(const std::vector<NoiseSweepRow>& rows);

}  // namespace spinrecon
