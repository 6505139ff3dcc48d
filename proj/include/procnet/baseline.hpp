#pragma once

#include <string>
#include <vector>

#include "procnet/network.hpp"

namespace procnet {

struct BaselineResult {
    PersonalNetwork network;
    // Model output dropped for violating structural rules (self-loops,
    // unknown themes/processes, duplicate pairs). Nothing is repaired.
    std::vector<std::string> dropped;
};

// Single-shot generation of the full network: themes, membership, and
// relationships from one prompt. Applies the same schema validation and
// endpoint checks as the pipeline but never votes and never repairs;
// omissions stay omitted so completeness reflects them.
BaselineResult direct_generate(Gateway& gateway, const BackendSpec& backend,
                               const std::string& transcript_text,
                               const std::vector<ProcessItem>& processes);

}  // namespace procnet
