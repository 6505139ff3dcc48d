#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace procnet {

// The nine EEMM process dimensions. Enum order is the canonical order used
// for tie-breaking and for sorted serialization.
enum class DimensionLabel {
    Affect,
    Cognition,
    Attention,
    Motivation,
    SenseOfSelf,
    OvertBehavior,
    ContextModerators,
    Sociocultural,
    Biophysiological,
};

inline constexpr int kDimensionCount = 9;

inline constexpr std::array<DimensionLabel, kDimensionCount> kAllDimensions = {
    DimensionLabel::Affect,        DimensionLabel::Cognition,     DimensionLabel::Attention,
    DimensionLabel::Motivation,    DimensionLabel::SenseOfSelf,   DimensionLabel::OvertBehavior,
    DimensionLabel::ContextModerators, DimensionLabel::Sociocultural, DimensionLabel::Biophysiological,
};

// Canonical spelling used in every file format this tool reads or writes.
const std::string& dimension_name(DimensionLabel label);

// Maps a string to a label. Accepts the canonical spelling plus a small,
// documented alias set (e.g. "Behaviour", "(Overt) Behaviour",
// "Context Moderators"); matching is case-insensitive. Unknown strings map
// to nullopt; callers must treat that as an error, never coerce.
std::optional<DimensionLabel> parse_dimension(const std::string& text);

using DimensionSet = std::set<DimensionLabel>;

// Canonical-order names for serialization.
std::vector<std::string> dimension_names(const DimensionSet& set);

}  // namespace procnet
