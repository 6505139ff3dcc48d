#include "procnet/schemas.hpp"

#include <array>
#include <set>

#include "procnet/dimensions.hpp"
#include "procnet/textutil.hpp"

namespace procnet::schemas {

using nlohmann::json;

namespace {

using Result = std::optional<std::string>;

Result ok() { return std::nullopt; }

Result validate_detect(const json& v) {
    if (!v.is_object()) return "output must be a JSON object";
    if (!v.contains("is_process") || !v["is_process"].is_boolean())
        return "field 'is_process' must be true or false";
    const bool is_process = v["is_process"].get<bool>();
    json types = json::array();
    if (v.contains("types")) {
        if (!v["types"].is_array()) return "field 'types' must be a list";
        types = v["types"];
    }
    if (!is_process && !types.empty())
        return "'types' must be empty when 'is_process' is false";
    if (is_process && types.empty())
        return "'types' must list at least one process type when 'is_process' is true";
    for (const json& t : types) {
        if (!t.is_string()) return "'types' entries must be strings";
        if (!parse_dimension(t.get<std::string>()))
            return "unknown process type '" + t.get<std::string>() + "'";
    }
    return ok();
}

Result validate_theme_label(const std::string& label) {
    if (trim(label).empty()) return std::optional<std::string>("theme labels must be non-empty");
    if (!is_single_sentence(label))
        return std::optional<std::string>("theme label must be a single sentence: '" + label + "'");
    return std::nullopt;
}

Result validate_themes(const json& v) {
    if (!v.is_array()) return "output must be a JSON list of theme sentences";
    if (v.empty()) return "theme list must not be empty";
    for (const json& t : v) {
        if (!t.is_string()) return "theme entries must be strings";
        if (auto err = validate_theme_label(t.get<std::string>())) return err;
    }
    return ok();
}

Result validate_assignment(const json& v, bool check_labels) {
    if (!v.is_object() || v.empty())
        return "output must be a non-empty JSON object mapping themes to processes";
    for (const auto& [key, entry] : v.items()) {
        if (!entry.is_object()) return "entry '" + key + "' must be an object";
        if (!entry.contains("Theme") || !entry["Theme"].is_string())
            return "entry '" + key + "' needs a string field 'Theme'";
        if (check_labels) {
            if (auto err = validate_theme_label(entry["Theme"].get<std::string>())) return err;
        }
        if (!entry.contains("Processes") || !entry["Processes"].is_array())
            return "entry '" + key + "' needs a list field 'Processes'";
        for (const json& p : entry["Processes"]) {
            if (!p.is_string()) return "'Processes' entries must be strings";
        }
    }
    return ok();
}

Result validate_repair_assign(const json& v) {
    if (!v.is_object() || !v.contains("theme") || !v["theme"].is_string() ||
        trim(v["theme"].get<std::string>()).empty())
        return "output must be an object with a non-empty string field 'theme'";
    return ok();
}

bool known_edge_type(const std::string& s) {
    const std::string f = lower(trim(s));
    return f == "excitatory" || f == "inhibitory";
}

bool known_strength(const std::string& s) {
    const std::string f = lower(trim(s));
    return f == "strong" || f == "moderate" || f == "weak";
}

Result check_connection_flag(const json& entry, int& connection) {
    if (!entry.contains("connection") || !entry["connection"].is_array() ||
        entry["connection"].size() != 1 || !entry["connection"][0].is_number_integer())
        return "'connection' must be a one-element list holding 0 or 1";
    connection = entry["connection"][0].get<int>();
    if (connection != 0 && connection != 1)
        return "'connection' must be 0 or 1";
    return std::nullopt;
}

Result validate_link(const json& v) {
    if (!v.is_object() || !v.contains("relationship") || !v["relationship"].is_array() ||
        v["relationship"].size() != 1)
        return "output must be an object with a one-element 'relationship' list";
    const json& entry = v["relationship"][0];
    if (!entry.is_object()) return "'relationship' entry must be an object";
    if (!entry.contains("input_processes") || !entry["input_processes"].is_array() ||
        entry["input_processes"].size() != 2)
        return "'input_processes' must list the two processes";
    int connection = 0;
    if (auto err = check_connection_flag(entry, connection)) return err;
    if (connection == 1) {
        if (!entry.contains("relationship_type") || !entry["relationship_type"].is_string() ||
            !known_edge_type(entry["relationship_type"].get<std::string>()))
            return "'relationship_type' must be \"excitatory\" or \"inhibitory\"";
        if (!entry.contains("strength_of_relationship") ||
            !entry["strength_of_relationship"].is_string() ||
            !known_strength(entry["strength_of_relationship"].get<std::string>()))
            return "'strength_of_relationship' must be \"strong\", \"moderate\", or \"weak\"";
        if (!entry.contains("explanation") || !entry["explanation"].is_string() ||
            trim(entry["explanation"].get<std::string>()).empty())
            return "'explanation' must be a non-empty string";
    }
    return ok();
}

Result validate_baseline(const json& v) {
    if (!v.is_object()) return "output must be a JSON object";
    if (!v.contains("classified_processes") || !v["classified_processes"].is_object() ||
        v["classified_processes"].empty())
        return "'classified_processes' must be a non-empty object";
    for (const auto& [key, entry] : v["classified_processes"].items()) {
        if (!entry.is_object() || !entry.contains("Title") || !entry["Title"].is_string())
            return "theme '" + key + "' needs a string field 'Title'";
        if (!entry.contains("Processes") || !entry["Processes"].is_array())
            return "theme '" + key + "' needs a list field 'Processes'";
        for (const json& p : entry["Processes"]) {
            if (!p.is_object() || !p.contains("Process") || !p["Process"].is_string())
                return "'Processes' entries must be objects with a string field 'Process'";
        }
    }
    if (!v.contains("theme_relationships") || !v["theme_relationships"].is_array())
        return "'theme_relationships' must be a list";
    for (const json& entry : v["theme_relationships"]) {
        if (!entry.is_object()) return "'theme_relationships' entries must be objects";
        if (!entry.contains("input_themes") || !entry["input_themes"].is_array() ||
            entry["input_themes"].size() != 2)
            return "'input_themes' must list the two themes";
        int connection = 0;
        if (auto err = check_connection_flag(entry, connection)) return err;
        if (connection == 1) {
            if (!entry.contains("type") || !entry["type"].is_array() ||
                entry["type"].size() != 1 || !entry["type"][0].is_string() ||
                !known_edge_type(entry["type"][0].get<std::string>()))
                return "'type' must be a one-element list of \"excitatory\" or \"inhibitory\"";
            if (!entry.contains("strength") || !entry["strength"].is_array() ||
                entry["strength"].size() != 1 || !entry["strength"][0].is_string() ||
                !known_strength(entry["strength"][0].get<std::string>()))
                return "'strength' must be a one-element list of \"strong\", \"moderate\", or \"weak\"";
            if (!entry.contains("explanation") || !entry["explanation"].is_string())
                return "'explanation' must be a string";
        }
    }
    return ok();
}

}  // namespace

bool registered(const std::string& schema_id) {
    static const std::set<std::string> ids = {kDetect, kThemes,   kAssign,  kSingleStep,
                                              kRepairAssign, kLink, kBaseline};
    return ids.count(schema_id) > 0;
}

std::optional<std::string> validate(const std::string& schema_id, const json& value) {
    if (schema_id == kDetect) return validate_detect(value);
    if (schema_id == kThemes) return validate_themes(value);
    if (schema_id == kAssign) return validate_assignment(value, false);
    if (schema_id == kSingleStep) return validate_assignment(value, true);
    if (schema_id == kRepairAssign) return validate_repair_assign(value);
    if (schema_id == kLink) return validate_link(value);
    if (schema_id == kBaseline) return validate_baseline(value);
    return "unknown schema id '" + schema_id + "'";
}

}  // namespace procnet::schemas
