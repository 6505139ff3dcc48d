#include "procnet/prompts.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

namespace procnet::prompts {

namespace {

std::string q(const std::string& s) { return nlohmann::json(s).dump(); }

std::string string_list(const std::vector<std::string>& items) {
    std::string out = "[";
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += q(items[i]);
    }
    out += "]";
    return out;
}

constexpr const char* kProcessDefinition =
    "A psychological process is a mental or emotional function that reflects how a person "
    "perceives, interprets, reacts to, or regulates their internal or external experiences. "
    "This includes emotional responses, thoughts, decisions, memories, social interpretations, "
    "and personal reflections.";

constexpr const char* kThemeDefinition =
    "A clinically meaningful theme: A theme represents a meaningful pattern across psychological "
    "processes that reflects underlying functions or dynamics within the client's experience.";

constexpr const char* kTypeTaxonomy =
    "   - Cognition: How the patient thinks and assigns meaning to events.\n"
    "   - Sense of Self: How the patient perceives and conceptualizes themselves.\n"
    "   - (Overt) Behaviour: Observable or repetitive actions the patient takes.\n"
    "   - Affect: How the patient feels about their situation.\n"
    "   - Context/Moderators: Situational factors that are static or difficult to change.\n"
    "   - Attention: How the patient directs or shifts focus during experiences.\n"
    "   - Biophysiological: Aspects related to sleep, diet, exercise, and chronic health "
    "conditions.\n"
    "   - Motivation: The goals or aims the patient pursues.\n"
    "   - Sociocultural: The social and cultural relationships and contexts the patient engages "
    "with.";

constexpr const char* kStrengthDefinitions =
    "    - Strength of Relationship:\n"
    "        1) Strong: The processes are closely related. One strongly influences the other in "
    "psychological functioning.\n"
    "        2) Moderate: The processes are meaningfully related, but the connection is less "
    "consistent or conditional. They are associated, but not tightly bound.\n"
    "        3) Weak: The relationship is minimal, indirect, or highly context-dependent. They "
    "may co-occur at times, but the link is loose or peripheral.";

struct LinkExample {
    const char* a;
    const char* b;
    bool connected;
    const char* type;
    const char* strength;
    const char* explanation;
};

// Bundled illustrative rows for the one-/few-shot relationship prompts.
constexpr LinkExample kLinkExamples[] = {
    {"Anxiety about future career prospects and financial security",
     "Fear of being stuck in a dead-end job", true, "excitatory", "strong",
     "The more anxious one feels about the future, the more trapped a stagnant job can seem"},
    {"Susceptibility to peer pressure", "Sense of responsibility to support family members",
     false, "", "", ""},
    {"High self-compassion", "Guilt associated with prioritizing personal needs over others",
     true, "inhibitory", "strong",
     "High compassion promotes self-acceptance and emotional balance over self-criticism"},
};

std::string render_link_example(const LinkExample& ex) {
    std::ostringstream out;
    out << "Process A: " << ex.a << "\n";
    out << "Process B: " << ex.b << "\n";
    out << "Output:\n";
    out << "{\n    \"relationship\": [\n        {\n";
    out << "            \"input_processes\": [" << q(ex.a) << ", " << q(ex.b) << "],\n";
    if (ex.connected) {
        out << "            \"connection\": [1],\n";
        out << "            \"relationship_type\": " << q(ex.type) << ",\n";
        out << "            \"strength_of_relationship\": " << q(ex.strength) << ",\n";
        out << "            \"explanation\": " << q(ex.explanation) << "\n";
    } else {
        out << "            \"connection\": [0]\n";
    }
    out << "        }\n    ]\n}";
    return out.str();
}

}  // namespace

std::string detection(const std::vector<DetectionExample>& examples,
                      const std::string& target_utterance, const std::string& target_context) {
    std::ostringstream out;
    out << kProcessDefinition << "\n\n";
    out << "Task: You are a psychological process classifier. Your task is to analyze a dialogue "
           "utterance and determine:\n\n";
    out << "1. Whether it reflects a psychological process.\n";
    out << "2. If it does, classify it into one or more of the following types of psychological "
           "processes:\n";
    out << kTypeTaxonomy << "\n\n";
    out << "Format for the output:\n";
    out << "{\n"
           "    \"utterance\": main utterance to classify,\n"
           "    \"context\": utterances before and after,\n"
           "    \"is_process\": true or false,\n"
           "    \"types\": [list of types if applicable, otherwise empty]\n"
           "}\n\n";
    out << "Examples:\n";
    for (size_t i = 0; i < examples.size(); ++i) {
        const DetectionExample& ex = examples[i];
        out << "Example " << (i + 1) << ":\n";
        out << "{\n";
        out << "    \"utterance\": " << q(ex.utterance) << ",\n";
        out << "    \"context\": " << q(ex.context) << ",\n";
        out << "    \"is_process\": " << (ex.is_process ? "true" : "false") << ",\n";
        out << "    \"types\": " << string_list(ex.types) << "\n";
        out << "}\n";
    }
    out << "\nClassify this utterance:\n";
    out << "{\n";
    out << "    \"utterance\": " << q(target_utterance) << ",\n";
    out << "    \"context\": " << q(target_context) << "\n";
    out << "}\n";
    return out.str();
}

std::string generate_themes(const std::string& transcript,
                            const std::vector<std::string>& process_entries) {
    std::ostringstream out;
    out << "You are a clinical psychologist analyzing a therapy session transcript.\n\n";
    out << "Task: Generate clinically meaningful themes in a clear, one-sentence description.\n\n";
    out << kThemeDefinition << "\n\n";
    out << "Input:\n";
    out << "- A transcript excerpt from a therapy session (for context only).\n";
    out << "- List of psychological processes to be clustered.\n\n";
    out << "Your goal:\n";
    out << "1. Read the transcript excerpt to understand the emotional and interpersonal "
           "context. Do not quote or extract specific utterances.\n";
    out << "2. Generate clinically meaningful themes based on the listed psychological "
           "processes.\n\n";
    out << "Guidelines for writing themes:\n";
    out << "1. Each theme must be a complete, short, concise statement.\n";
    out << "2. Avoid generalities, labels that are not clinically informative.\n";
    out << "3. The short sentence must convey a specific psychological function, conflict, or "
           "transformation linking the processes in the cluster.\n";
    out << "4. Return output only as a list in this format: [\"theme_1\", \"theme_2\", ..., "
           "\"theme_n\"]\n\n";
    out << "Therapy session transcript:\n" << transcript << "\n\n";
    out << "List of processes: " << string_list(process_entries) << "\n";
    return out.str();
}

std::string assign_processes(const std::string& transcript,
                             const std::vector<std::string>& process_entries,
                             const std::vector<std::string>& themes, bool corrective) {
    std::ostringstream out;
    out << "Task: You are a clinical psychologist classifying psychological processes based on "
           "provided themes.\n\n";
    out << kThemeDefinition << "\n\n";
    out << "Input: 1) A transcript excerpt from a therapy session (for context only). 2) A list "
           "of psychological processes to be clustered. 3) A set of themes under which the "
           "processes should be categorized.\n\n";
    out << "Your goal:\n";
    out << "1. Read the transcript excerpt to understand the emotional and interpersonal "
           "context. Do not quote or extract specific utterances.\n";
    out << "2. Classify each listed psychological process under one or more of the provided "
           "themes based on their thematic relevance.\n\n";
    out << "Guidelines for clustering:\n";
    out << "1. Use only the processes listed under \"List of processes\".\n";
    out << "2. Every process must appear at least in one cluster.\n";
    out << "3. A process may belong to multiple clusters only if it's strongly relevant to the "
           "theme.\n";
    out << "4. Each provided theme must have at least 2 relevant processes assigned to it.\n";
    out << "5. Do not put all processes in one cluster.\n\n";
    out << "Format for the output:\n";
    out << "{\n"
           "    \"Theme 1\": {\n"
           "        \"Theme\": \"[Provided Theme A]\",\n"
           "        \"Processes\": [\"Process 1\", \"Process 2\"]\n"
           "    },\n"
           "    \"Theme 2\": {\n"
           "        \"Theme\": \"[Provided Theme B]\",\n"
           "        \"Processes\": [\"Process 1\", \"Process 2\"]\n"
           "    }\n"
           "}\n\n";
    out << "Therapy session transcript:\n" << transcript << "\n\n";
    out << "List of processes: " << string_list(process_entries) << "\n\n";
    out << "Provided themes: " << string_list(themes) << "\n";
    if (corrective) {
        out << "\nIMPORTANT: The previous grouping put every process into a single cluster. Do "
               "not put all processes in one cluster.\n";
    }
    return out.str();
}

std::string single_step_cluster(const std::string& transcript,
                                const std::vector<std::string>& process_entries) {
    std::ostringstream out;
    out << "Task: You are a clinical psychologist analyzing a therapy session transcript. Group "
           "the listed psychological processes into clinically meaningful themes and assign "
           "descriptive cluster labels in a single generation step.\n\n";
    out << kThemeDefinition << "\n\n";
    out << "Input: 1) A transcript excerpt from a therapy session (for context only). 2) A list "
           "of psychological processes to be clustered.\n\n";
    out << "Your goal:\n";
    out << "1. Read the transcript excerpt to understand the emotional and interpersonal "
           "context. Do not quote or extract specific utterances.\n";
    out << "2. Group the listed psychological processes into clinically meaningful themes, "
           "writing each theme as a complete, short, concise statement.\n\n";
    out << "Guidelines for clustering:\n";
    out << "1. Use only the processes listed under \"List of processes\".\n";
    out << "2. Every process must appear at least in one cluster.\n";
    out << "3. A process may belong to multiple clusters only if it's strongly relevant to the "
           "theme.\n";
    out << "4. Each theme must have at least 2 relevant processes assigned to it.\n";
    out << "5. Do not put all processes in one cluster.\n\n";
    out << "Format for the output:\n";
    out << "{\n"
           "    \"Theme 1\": {\n"
           "        \"Theme\": \"[Generated theme sentence]\",\n"
           "        \"Processes\": [\"Process 1\", \"Process 2\"]\n"
           "    }\n"
           "}\n\n";
    out << "Therapy session transcript:\n" << transcript << "\n\n";
    out << "List of processes: " << string_list(process_entries) << "\n";
    return out.str();
}

std::string repair_assign(const std::string& process_entry,
                          const std::vector<std::string>& themes) {
    std::ostringstream out;
    out << "Task: You are a clinical psychologist. Assign the following psychological process "
           "to exactly one of the provided themes, choosing the most thematically relevant.\n\n";
    out << "Process: " << process_entry << "\n\n";
    out << "Provided themes: " << string_list(themes) << "\n\n";
    out << "Return only: {\"theme\": \"<one of the provided theme sentences, verbatim>\"}\n";
    return out.str();
}

const char* link_prompt_style_name(LinkPromptStyle style) {
    switch (style) {
        case LinkPromptStyle::zero_shot: return "zero_shot";
        case LinkPromptStyle::one_shot: return "one_shot";
        case LinkPromptStyle::few_shot: return "few_shot";
    }
    return "unknown";
}

std::string link(const std::string& process_a, const std::string& process_b,
                 LinkPromptStyle style) {
    std::ostringstream out;
    out << "Task: You are a clinical psychologist and your task is to determine whether a "
           "relationship exists between Process A and Process B, and to generate information on "
           "the nature of that relationship.\n\n";
    out << "Definitions:\n";
    out << "    - Psychological process: " << kProcessDefinition << "\n";
    out << "    - Connection: 1: there is a relationship, 0: there is no relationship\n";
    out << "    - Type of relationship between two psychological processes:\n";
    out << "        1) Excitatory: one process amplifies or reinforces the other.\n";
    out << "        2) Inhibitory: one process suppresses the other.\n";
    out << kStrengthDefinitions << "\n\n";
    out << "Guidelines:\n";
    out << "1. Given two processes, determine whether or not a relationship exists.\n";
    out << "2. Provide a brief explanation of the connection. Avoid restating the processes "
           "themselves.\n\n";
    out << "Output Structure: If a relationship exists from process A to process B, return the "
           "following structured output:\n";
    out << "{\n"
           "    \"relationship\": [\n"
           "        {\n"
           "            \"input_processes\": [\"Process A\", \"Process B\"],\n"
           "            \"connection\": [1],\n"
           "            \"relationship_type\": \"excitatory\" or \"inhibitory\",\n"
           "            \"strength_of_relationship\": \"strong\", \"moderate\", or \"weak\",\n"
           "            \"explanation\": \"A concise explanation of why this relationship "
           "exists.\"\n"
           "        }\n"
           "    ]\n"
           "}\n\n";
    out << "If no relationship exists from Process A to Process B, return:\n";
    out << "{\n"
           "    \"relationship\": [\n"
           "        {\n"
           "            \"input_processes\": [\"Process A\", \"Process B\"],\n"
           "            \"connection\": [0]\n"
           "        }\n"
           "    ]\n"
           "}\n";
    if (style != LinkPromptStyle::zero_shot) {
        out << "\nIllustrative Example:\n";
        const int count = style == LinkPromptStyle::one_shot ? 1 : 3;
        for (int i = 0; i < count; ++i) {
            if (i) out << "\n\n";
            out << render_link_example(kLinkExamples[i]);
        }
        out << "\n";
    }
    out << "\nProcess A: " << process_a << "\n\n";
    out << "Process B: " << process_b << "\n\n";
    out << "Generate the output.\n";
    return out.str();
}

std::string baseline(const std::string& transcript,
                     const std::vector<std::string>& process_entries) {
    std::ostringstream out;
    out << "Task: You are a clinical psychologist. Your task is to perform a full, end-to-end "
           "clinical reasoning analysis based on a therapy dialogue, including annotated "
           "psychological processes.\n\n";
    out << "Definitions:\n";
    out << "    - Psychological Process: " << kProcessDefinition << "\n";
    out << "    - Clinically Meaningful Theme: A theme represents a meaningful pattern across "
           "psychological processes that reflects underlying functions or dynamics within the "
           "client's experience.\n";
    out << "    - Process Relationship:\n";
    out << "        - Connection: 1: there is a relationship, 0: there is no relationship\n";
    out << "        - Relationship Type: Excitatory: one process amplifies or reinforces the "
           "other. Inhibitory: one process suppresses the other.\n";
    out << "        - Strength of Relationship: Strong: the processes are closely related and "
           "one strongly influences the other. Moderate: the processes are meaningfully related, "
           "but the connection is less consistent or conditional. Weak: the relationship is "
           "minimal, indirect, or highly context-dependent.\n\n";
    out << "Input:\n";
    out << "    - Transcript: A therapy session dialogue (for context only; do not extract "
           "utterances).\n";
    out << "    - Psychological Processes: A list of psychological processes to be clustered.\n\n";
    out << "Theme Generation Guidelines: (1) Each theme must be a short, complete sentence with "
           "clinical insight. (2) The sentence must convey a specific psychological function, "
           "conflict, or transformation.\n\n";
    out << "Process Classification Guidelines: (1) Classify all listed processes under one or "
           "more themes based on thematic relevance. (2) Use only the processes listed in the "
           "input. (3) Each process must appear in at least one theme. (4) Each theme must "
           "contain at least two processes.\n\n";
    out << "Inter-Theme Relationship Guidelines: (1) Determine whether a relationship exists "
           "between any two themes. (2) Use only the themes to generate relationships. (3) "
           "Provide a brief explanation (a few words) of the connection. (4) Analyze Theme A to "
           "Theme B and Theme B to Theme A separately.\n\n";
    out << "Your Goals: (1) Theme Generation (2) Process Classification (3) Inter-Theme "
           "Relationship Analysis\n\n";
    out << "Output Format:\n";
    out << "{\n"
           "    \"classified_processes\": {\n"
           "        \"Theme 1\": { \"Title\": \"Theme A\", \"Processes\": [\n"
           "            {\"Process\": \"Process 1\"}, {\"Process\": \"Process 3\"} ] },\n"
           "        \"Theme 2\": { \"Title\": \"Theme B\", \"Processes\": [\n"
           "            {\"Process\": \"Process 2\"} ] }\n"
           "    },\n"
           "    \"theme_relationships\": [\n"
           "        { \"input_themes\": [\"Theme A\", \"Theme B\"], \"connection\": [1],\n"
           "          \"type\": [\"excitatory\"], \"strength\": [\"strong\"],\n"
           "          \"explanation\": \"...\" },\n"
           "        { \"input_themes\": [\"Theme B\", \"Theme A\"], \"connection\": [1],\n"
           "          \"type\": [\"inhibitory\"], \"strength\": [\"moderate\"],\n"
           "          \"explanation\": \"...\" },\n"
           "        { \"input_themes\": [\"Theme A\", \"Theme C\"], \"connection\": [0] }\n"
           "    ]\n"
           "}\n\n";
    out << "Transcript:\n" << transcript << "\n\n";
    out << "Listed Psychological Processes: " << string_list(process_entries) << "\n\n";
    out << "Generate the output.\n";
    return out.str();
}

}  // namespace procnet::prompts
