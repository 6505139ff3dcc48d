#pragma once

#include <string>
#include <vector>

namespace procnet {

std::string trim(const std::string& s);
std::string lower(const std::string& s);
bool contains(const std::string& haystack, const std::string& needle);

// One sentence = at most one terminal-punctuation-separated segment with
// content. "Fear of failure." passes; "Fear. And doubt." does not.
bool is_single_sentence(const std::string& text);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

}  // namespace procnet
