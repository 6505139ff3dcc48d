#pragma once

#include <string>
#include <vector>

namespace procnet::prompts {

// In-context example for the detection prompt, already reduced to plain
// strings (types in their prompt spelling).
struct DetectionExample {
    std::string utterance;
    std::string context;
    bool is_process = false;
    std::vector<std::string> types;
};

std::string detection(const std::vector<DetectionExample>& examples,
                      const std::string& target_utterance, const std::string& target_context);

// Two-step clustering, step 1: generate candidate theme sentences.
std::string generate_themes(const std::string& transcript,
                            const std::vector<std::string>& process_entries);

// Two-step clustering, step 2: assign processes to the provided themes.
// `corrective` appends the anti-degeneracy instruction used by repair.
std::string assign_processes(const std::string& transcript,
                             const std::vector<std::string>& process_entries,
                             const std::vector<std::string>& themes, bool corrective = false);

std::string single_step_cluster(const std::string& transcript,
                                const std::vector<std::string>& process_entries);

// Focused repair query: pick the best of the existing themes for one process.
std::string repair_assign(const std::string& process_entry,
                          const std::vector<std::string>& themes);

enum class LinkPromptStyle { zero_shot, one_shot, few_shot };

const char* link_prompt_style_name(LinkPromptStyle style);

// Directed relationship query between two themes. One-/few-shot styles embed
// the bundled illustrative example rows; zero-shot carries none.
std::string link(const std::string& process_a, const std::string& process_b,
                 LinkPromptStyle style);

// Single-shot baseline: theme generation, classification, and relationship
// analysis in one call.
std::string baseline(const std::string& transcript,
                     const std::vector<std::string>& process_entries);

}  // namespace procnet::prompts
