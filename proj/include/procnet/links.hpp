#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "procnet/gateway.hpp"
#include "procnet/prompts.hpp"

namespace procnet {

enum class EdgeType { excitatory, inhibitory };
enum class Strength { weak, moderate, strong };  // total order weak < moderate < strong

const char* edge_type_name(EdgeType t);
const char* strength_name(Strength s);
std::optional<EdgeType> parse_edge_type(const std::string& s);
std::optional<Strength> parse_strength(const std::string& s);

// One ensemble member's judgment on one ordered theme pair.
struct LinkOpinion {
    std::string variant_id;
    std::string source_theme;
    std::string target_theme;
    bool connected = false;
    std::optional<EdgeType> edge_type;      // iff connected
    std::optional<Strength> strength;       // iff connected
    std::optional<std::string> explanation; // iff connected
    bool abstained = false;  // member failed; counted as not connected

    bool operator==(const LinkOpinion&) const = default;
};

// The voted result. Voted edges carry votes_for in {2,3}; the direct baseline
// emits votes_for = 1.
struct Edge {
    std::string source_theme;
    std::string target_theme;
    EdgeType edge_type = EdgeType::excitatory;
    Strength strength = Strength::weak;
    std::string explanation;
    std::string explanation_variant;
    int votes_for = 0;

    bool operator==(const Edge&) const = default;
};

enum class EnsembleKind { prompt_based, model_based, temperature_based };

const char* ensemble_kind_name(EnsembleKind kind);
std::optional<EnsembleKind> parse_ensemble_kind(const std::string& s);

struct EnsembleMember {
    std::string variant_id;
    BackendSpec backend;
    prompts::LinkPromptStyle prompt_style = prompts::LinkPromptStyle::zero_shot;
};

// Exactly three members whose identity fixes prompt, backend, and
// temperature:
//   prompt_based      one backend at temperature 0; zero-/one-/few-shot
//   model_based       three distinct backends, one prompt, temperature 0
//   temperature_based one backend and prompt at temperatures 0 / 0.5 / 1.0
struct EnsembleStrategy {
    EnsembleKind kind = EnsembleKind::prompt_based;
    std::vector<EnsembleMember> members;

    static EnsembleStrategy prompt_based(const BackendSpec& backend);
    static EnsembleStrategy model_based(const std::vector<BackendSpec>& backends);
    static EnsembleStrategy temperature_based(const BackendSpec& backend);
};

// Themes enter link prompts by label; ids key the outputs.
struct ThemeRef {
    std::string theme_id;
    std::string label;
};

// Majority vote per the three-step rule: an edge exists iff at least two
// opinions agree on (connected, same type); its strength is the maximum over
// that majority; its explanation is sampled (seeded) from the majority
// members at that maximum strength. Sampling is over the variant-sorted
// majority subset, so the result is invariant to opinion order.
std::optional<Edge> vote(const std::vector<LinkOpinion>& opinions, uint64_t rng_seed);

struct EnsembleResult {
    std::vector<Edge> edges;
    std::vector<LinkOpinion> opinions;  // full log, all pairs x all variants
};

class LinkEngine {
public:
    explicit LinkEngine(Gateway& gateway);

    // One structured opinion for a directed pair from one member. Gateway
    // failures are recorded as abstentions (connected = false).
    LinkOpinion query_opinion(const EnsembleMember& member, const ThemeRef& source,
                              const ThemeRef& target);

    // Queries all n(n-1) ordered pairs with every member and votes each pair.
    EnsembleResult run_ensemble(const EnsembleStrategy& strategy,
                                const std::vector<ThemeRef>& themes, uint64_t rng_seed);

private:
    Gateway& gateway_;
};

struct AgreementStats {
    double connection_pct = 0.0;  // all 3 agree on connected/not
    double type_pct = 0.0;        // among unanimously connected: same type
    double strength_pct = 0.0;    // among unanimous type: same strength
    int pairs = 0;
    int unanimous_connection = 0;
    int unanimous_connected = 0;
    int unanimous_type = 0;
    int unanimous_strength = 0;
};

// Groups the opinion log by ordered pair (each group must have exactly 3
// opinions) and computes the conditional agreement cascade. An empty
// denominator reports 100 (vacuous agreement).
AgreementStats agreement_stats(const std::vector<LinkOpinion>& opinions);

// Opinion log I/O (line-delimited records).
std::string opinions_to_jsonl(const std::vector<LinkOpinion>& opinions);
std::vector<LinkOpinion> parse_opinions_jsonl(const std::string& jsonl,
                                              const std::string& origin = "<memory>");
std::vector<LinkOpinion> load_opinions(const std::string& path);

std::string edges_to_json(const std::vector<Edge>& edges, const std::string& session_id,
                          const std::string& strategy, uint64_t seed);
std::vector<Edge> load_edges(const std::string& path);

}  // namespace procnet
