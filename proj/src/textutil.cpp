#include "procnet/textutil.hpp"

#include <cctype>

namespace procnet {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::string lower(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

bool is_single_sentence(const std::string& text) {
    int segments = 0;
    bool in_segment = false;
    for (char c : text) {
        if (c == '.' || c == '!' || c == '?') {
            if (in_segment) ++segments;
            in_segment = false;
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            in_segment = true;
        }
    }
    if (in_segment) ++segments;
    return segments <= 1;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace procnet
