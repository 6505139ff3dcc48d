#include "procnet/dimensions.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace procnet {

namespace {

const std::array<std::string, kDimensionCount> kNames = {
    "Affect",        "Cognition",     "Attention",          "Motivation",   "Sense of Self",
    "Overt Behavior", "Context/Moderators", "Sociocultural", "Biophysiological",
};

std::string fold(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    // trim
    size_t a = out.find_first_not_of(" \t\r\n");
    size_t b = out.find_last_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return out.substr(a, b - a + 1);
}

const std::map<std::string, DimensionLabel>& alias_table() {
    static const std::map<std::string, DimensionLabel> table = [] {
        std::map<std::string, DimensionLabel> t;
        auto add = [&](const char* name, DimensionLabel label) { t[fold(name)] = label; };
        for (int i = 0; i < kDimensionCount; ++i) add(kNames[i].c_str(), kAllDimensions[i]);
        // Variants seen in prompt templates and annotation exports.
        add("SenseOfSelf", DimensionLabel::SenseOfSelf);
        add("Sense-of-Self", DimensionLabel::SenseOfSelf);
        add("Overt Behaviour", DimensionLabel::OvertBehavior);
        add("(Overt) Behaviour", DimensionLabel::OvertBehavior);
        add("(Overt) Behavior", DimensionLabel::OvertBehavior);
        add("OvertBehavior", DimensionLabel::OvertBehavior);
        add("Behavior", DimensionLabel::OvertBehavior);
        add("Behaviour", DimensionLabel::OvertBehavior);
        add("Context Moderators", DimensionLabel::ContextModerators);
        add("ContextModerators", DimensionLabel::ContextModerators);
        add("Context", DimensionLabel::ContextModerators);
        return t;
    }();
    return table;
}

}  // namespace

const std::string& dimension_name(DimensionLabel label) { return kNames[static_cast<int>(label)]; }

std::optional<DimensionLabel> parse_dimension(const std::string& text) {
    const auto& table = alias_table();
    auto it = table.find(fold(text));
    if (it == table.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> dimension_names(const DimensionSet& set) {
    std::vector<std::string> out;
    for (DimensionLabel label : kAllDimensions) {
        if (set.count(label)) out.push_back(dimension_name(label));
    }
    return out;
}

}  // namespace procnet
