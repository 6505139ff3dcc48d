#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace procnet::schemas {

// Structured-output shapes the gateway can validate. One id per stage.
inline constexpr const char* kDetect = "detect_v1";
inline constexpr const char* kThemes = "themes_v1";
inline constexpr const char* kAssign = "assign_v1";
inline constexpr const char* kSingleStep = "single_step_v1";
inline constexpr const char* kRepairAssign = "repair_assign_v1";
inline constexpr const char* kLink = "link_v1";
inline constexpr const char* kBaseline = "baseline_v1";

bool registered(const std::string& schema_id);

// nullopt = conformant; otherwise a message suitable for a repair prompt.
std::optional<std::string> validate(const std::string& schema_id, const nlohmann::json& value);

}  // namespace procnet::schemas
