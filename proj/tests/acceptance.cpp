// Acceptance suite: runs every shipping criterion end to end and prints one
// pass/fail line each. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "procnet/baseline.hpp"
#include "procnet/schemas.hpp"
#include "procnet/evalkit.hpp"
#include "procnet/pipeline.hpp"

using namespace procnet;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = PROCNET_FIXTURES_DIR;

struct Failure {
    std::string message;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw Failure{message};
}

void require_close(double got, double want, double tolerance, const std::string& what) {
    if (std::fabs(got - want) > tolerance) {
        std::ostringstream msg;
        msg << what << ": got " << got << ", want " << want << " +/- " << tolerance;
        throw Failure{msg.str()};
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) {
        path = fs::temp_directory_path() / name;
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

BackendSpec mock_backend(const std::string& name = "mock-main") {
    BackendSpec b;
    b.name = name;
    b.kind = BackendKind::mock;
    b.model_id = name;
    return b;
}

// ---------------------------------------------------------------------------
// 1. voting oracle
// ---------------------------------------------------------------------------

void criterion_voting_oracle() {
    const auto start = std::chrono::steady_clock::now();
    int checked = 0;
    for (int s1 = 0; s1 < 7; ++s1) {
        for (int s2 = 0; s2 < 7; ++s2) {
            for (int s3 = 0; s3 < 7; ++s3) {
                std::vector<LinkOpinion> opinions = {
                    oracles::opinion_state(s1, "v1", "TA", "TB"),
                    oracles::opinion_state(s2, "v2", "TA", "TB"),
                    oracles::opinion_state(s3, "v3", "TA", "TB"),
                };
                auto want = oracles::vote_reference(opinions, 1234);
                auto got = vote(opinions, 1234);
                require(got.has_value() == want.has_value(),
                        "edge presence mismatch on a triple");
                if (got) require(*got == *want, "edge fields mismatch on a triple");

                // permutation invariance over all 6 orderings
                std::vector<int> order = {0, 1, 2};
                do {
                    auto permuted =
                        vote({opinions[order[0]], opinions[order[1]], opinions[order[2]]},
                             1234);
                    require(permuted.has_value() == got.has_value(),
                            "permutation changed edge presence");
                    if (got) require(*permuted == *got, "permutation changed the edge");
                } while (std::next_permutation(order.begin(), order.end()));
                ++checked;
            }
        }
    }
    require(checked == 343, "expected 343 opinion triples");
    const auto elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    require(elapsed < 1.0, "voting oracle took " + std::to_string(elapsed) + " s (limit 1)");
}

// ---------------------------------------------------------------------------
// 2. weighted total score reproduction
// ---------------------------------------------------------------------------

void criterion_total_score() {
    const std::map<std::string, double> st3 = {
        {"clinical_relevance", 2.15}, {"novelty", 2.25},     {"usefulness", 2.22},
        {"specificity", 2.60},        {"coverage", 2.20},    {"completeness", 2.27},
        {"intrusiveness", 1.90},      {"redundancy", 1.82}};
    require_close(total_score(st3), 2.21, 0.01, "two-step St3 total score");
    const CategoryScores categories = insight_trust_scores(st3);
    require_close(categories.insightfulness, 2.22, 0.02, "St3 insightfulness");
    require_close(categories.trustworthiness, 2.20, 0.02, "St3 trustworthiness");

    const std::map<std::string, double> single = {
        {"clinical_relevance", 1.94}, {"novelty", 1.73},     {"usefulness", 1.67},
        {"specificity", 1.80},        {"coverage", 1.93},    {"completeness", 1.87},
        {"intrusiveness", 2.23},      {"redundancy", 2.40}};
    require_close(total_score(single), 1.88, 0.01, "single-step total score");
}

// ---------------------------------------------------------------------------
// 3. metric oracles
// ---------------------------------------------------------------------------

void criterion_metric_oracles() {
    Rng rng(2024);
    const std::vector<std::string> categories = {"A", "B", "C", "D"};
    for (int trial = 0; trial < 120; ++trial) {
        const int n = 1 + static_cast<int>(rng.bounded(60));

        std::vector<bool> pred_bits, gold_bits;
        std::vector<DimensionSet> pred_dims, gold_dims;
        std::vector<std::string> cat_a, cat_b;
        for (int i = 0; i < n; ++i) {
            pred_bits.push_back(rng.bounded(2) == 1);
            gold_bits.push_back(rng.bounded(2) == 1);
            pred_dims.push_back(oracles::random_dimension_set(rng));
            gold_dims.push_back(oracles::random_dimension_set(rng));
            cat_a.push_back(categories[rng.bounded(categories.size())]);
            cat_b.push_back(categories[rng.bounded(categories.size())]);
        }

        const Prf binary = binary_prf(pred_bits, gold_bits);
        const auto binary_ref = oracles::binary_prf_reference(pred_bits, gold_bits);
        require_close(binary.precision, binary_ref.precision, 1e-12, "binary precision");
        require_close(binary.recall, binary_ref.recall, 1e-12, "binary recall");
        require_close(binary.f1, binary_ref.f1, 1e-12, "binary f1");
        require(binary.f1 >= std::min(binary.precision, binary.recall) - 1e-12 &&
                    binary.f1 <= std::max(binary.precision, binary.recall) + 1e-12,
                "f1 out of harmonic-mean bounds");

        const Prf multi = multilabel_prf(pred_dims, gold_dims);
        const auto multi_ref = oracles::multilabel_prf_reference(pred_dims, gold_dims);
        require_close(multi.precision, multi_ref.precision, 1e-12, "multilabel precision");
        require_close(multi.recall, multi_ref.recall, 1e-12, "multilabel recall");
        require_close(multi.f1, multi_ref.f1, 1e-12, "multilabel f1");
        require(multi.f1 >= std::min(multi.precision, multi.recall) - 1e-12 &&
                    multi.f1 <= std::max(multi.precision, multi.recall) + 1e-12,
                "multilabel f1 out of bounds");

        require_close(cohen_kappa(cat_a, cat_b), oracles::kappa_reference(cat_a, cat_b),
                      1e-12, "kappa vs reference");
        require_close(cohen_kappa(cat_a, cat_a), 1.0, 1e-12, "kappa(x, x)");

        double matches = 0;
        for (int i = 0; i < n; ++i) matches += cat_a[i] == cat_b[i];
        require_close(observed_agreement(cat_a, cat_b), matches / n, 1e-12,
                      "observed agreement recount");

        const auto per_label = per_label_kappa(pred_dims, gold_dims);
        for (DimensionLabel label : kAllDimensions) {
            std::vector<std::string> la, lb;
            for (int i = 0; i < n; ++i) {
                la.push_back(pred_dims[i].count(label) ? "1" : "0");
                lb.push_back(gold_dims[i].count(label) ? "1" : "0");
            }
            require_close(per_label.at(label), oracles::kappa_reference(la, lb), 1e-12,
                          "per-label kappa vs reference");
        }
    }
}

// ---------------------------------------------------------------------------
// 4. pipeline determinism
// ---------------------------------------------------------------------------

void criterion_pipeline_determinism() {
    const auto start = std::chrono::steady_clock::now();
    PipelineConfig config = PipelineConfig::load(kFixtures + "/config_mock.json");
    const std::string session = kFixtures + "/session_a.jsonl";

    TempDir first("procnet_accept_run1");
    TempDir second("procnet_accept_run2");
    Gateway g1 = make_gateway(config);
    StageOutputs a = cmd_run_all(config, g1, session, first.str());
    Gateway g2 = make_gateway(config);
    StageOutputs b = cmd_run_all(config, g2, session, second.str());

    require(read_file(a.network_path) == read_file(b.network_path),
            "network JSON differs across consecutive runs");
    require(read_file(a.dot_path) == read_file(b.dot_path),
            "DOT differs across consecutive runs");
    require(read_file(a.network_path) == read_file(kFixtures + "/golden/network.json"),
            "network JSON differs from the committed golden (cross-platform pin)");
    require(read_file(a.dot_path) == read_file(kFixtures + "/golden/network.dot"),
            "DOT differs from the committed golden (cross-platform pin)");

    const auto elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    require(elapsed < 10.0,
            "two pipeline runs took " + std::to_string(elapsed) + " s (limit 10)");
}

// ---------------------------------------------------------------------------
// 5. clustering contracts on randomized defect scenarios
// ---------------------------------------------------------------------------

struct Scenario {
    std::vector<ProcessItem> processes;
    std::vector<std::string> themes;
    json defective;       // assignment with injected defects
    json valid;           // corrective answer
    double covered_fraction = 1.0;  // coverage of the defective assignment
};

Scenario make_scenario(Rng& rng) {
    Scenario s;
    const int n_proc = 4 + static_cast<int>(rng.bounded(9));  // 4..12
    const int max_themes = std::min<int>(5, n_proc / 2);
    const int n_themes = 2 + static_cast<int>(rng.bounded(max_themes - 1));

    for (int i = 0; i < n_proc; ++i) {
        ProcessItem p;
        p.id = "P" + std::to_string(i + 1);
        p.text = "process text " + std::to_string(i + 1);
        p.dimensions = oracles::random_dimension_set(rng);
        p.source_utterance_index = i;
        s.processes.push_back(std::move(p));
    }
    for (int t = 0; t < n_themes; ++t)
        s.themes.push_back("Scenario theme number " + std::to_string(t + 1));

    // round-robin assignment: every theme gets >= 2 members, nothing uncovered
    std::vector<std::vector<std::string>> members(n_themes);
    for (int i = 0; i < n_proc; ++i) members[i % n_themes].push_back(s.processes[i].id);

    auto to_json = [&](const std::vector<std::vector<std::string>>& m) {
        json doc = json::object();
        for (int t = 0; t < n_themes; ++t) {
            doc["Theme " + std::to_string(t + 1)] =
                json{{"Theme", s.themes[t]}, {"Processes", m[t]}};
        }
        return doc;
    };
    s.valid = to_json(members);

    // inject defects
    auto defective = members;
    std::set<std::string> removed;
    const int kind = static_cast<int>(rng.bounded(3));
    if (kind == 0 || rng.bounded(2) == 0) {
        // omission: drop one process everywhere
        const std::string victim = s.processes[rng.bounded(n_proc)].id;
        for (auto& theme : defective) {
            theme.erase(std::remove(theme.begin(), theme.end(), victim), theme.end());
        }
        removed.insert(victim);
    }
    if (kind == 1) {
        // undersized theme: strip one theme down to a single member
        auto& theme = defective[rng.bounded(n_themes)];
        while (theme.size() > 1) theme.pop_back();
    }
    if (kind == 2) {
        // degeneracy: one theme swallows every process
        auto& theme = defective[rng.bounded(n_themes)];
        theme.clear();
        for (const ProcessItem& p : s.processes)
            if (!removed.count(p.id)) theme.push_back(p.id);
    }
    s.defective = to_json(defective);

    std::set<std::string> covered;
    for (const auto& theme : defective)
        for (const std::string& id : theme) covered.insert(id);
    s.covered_fraction = static_cast<double>(covered.size()) / n_proc;
    return s;
}

void criterion_clustering_contracts() {
    Rng rng(777);
    for (int trial = 0; trial < 50; ++trial) {
        Scenario scenario = make_scenario(rng);
        const bool with_repair_rule = rng.bounded(2) == 0;

        MockRules rules;
        MockRule corrective;
        corrective.schema_id = schemas::kAssign;
        corrective.contains = {"IMPORTANT"};
        corrective.response = scenario.valid;
        rules.add(corrective);
        MockRule assign;
        assign.schema_id = schemas::kAssign;
        assign.response = scenario.defective;
        rules.add(assign);
        if (with_repair_rule) {
            MockRule repair;
            repair.schema_id = schemas::kRepairAssign;
            repair.response = json{{"theme", scenario.themes[rng.bounded(
                                                 scenario.themes.size())]}};
            rules.add(repair);
        }

        Gateway gateway;
        gateway.set_mock_rules(std::move(rules));
        ClusterEngine engine(gateway, mock_backend(), "transcript excerpt");
        Clustering repaired = engine.assign_processes(scenario.processes, scenario.themes);

        // full coverage
        std::set<std::string> covered;
        for (const ThemeCluster& theme : repaired.clusters)
            for (const std::string& m : theme.members) covered.insert(m);
        require(covered.size() == scenario.processes.size(),
                "post-repair coverage incomplete (trial " + std::to_string(trial) + ")");
        require(repaired.uncovered.empty(), "uncovered set non-empty post-repair");
        require_close(completeness(assemble(repaired, scenario.processes, {}),
                                   scenario.processes),
                      1.0, 1e-12, "repaired clustering must assemble to completeness 1");

        // >= 2 members per surviving theme, drops documented
        const size_t dropped = repaired.diagnostics.dropped_themes.size();
        require(repaired.clusters.size() + dropped >= 2, "all themes vanished");
        for (const ThemeCluster& theme : repaired.clusters)
            require(theme.members.size() >= 2,
                    "undersized theme survived repair (trial " + std::to_string(trial) + ")");

        // no single-cluster degeneracy at |processes| >= 3
        for (const ThemeCluster& theme : repaired.clusters) {
            std::set<std::string> members(theme.members.begin(), theme.members.end());
            require(members.size() < scenario.processes.size() ||
                        repaired.clusters.size() == 1,
                    "degenerate cluster survived repair (trial " + std::to_string(trial) +
                        ")");
        }

        // --no-repair: completeness_score reflects the scripted omissions
        Gateway gateway2;
        MockRules rules2;
        MockRule assign2;
        assign2.schema_id = schemas::kAssign;
        assign2.response = scenario.defective;
        rules2.add(assign2);
        gateway2.set_mock_rules(std::move(rules2));
        ClusterEngine no_repair(gateway2, mock_backend(), "transcript excerpt",
                                /*repair_enabled=*/false);
        Clustering raw = no_repair.assign_processes(scenario.processes, scenario.themes);
        PersonalNetwork network = assemble(raw, scenario.processes, {});
        const double fraction = completeness(network, scenario.processes);
        require_close(fraction, scenario.covered_fraction, 1e-12,
                      "completeness fraction vs scripted omissions");
        require_close(completeness_score(fraction), 1.0 + 2.0 * fraction, 1e-12,
                      "completeness score mapping");
    }
}

// ---------------------------------------------------------------------------
// 6. prompt fidelity
// ---------------------------------------------------------------------------

void criterion_prompt_fidelity() {
    Session session = load_session(kFixtures + "/session_a.jsonl");
    ContextWindow window = context_window(session, 33);
    auto pool = load_example_pool(kFixtures + "/gold_pool.jsonl");

    const std::string detect_k0 = build_detection_prompt({}, window);
    require(detect_k0 == read_file(kFixtures + "/golden/detect_prompt_k0.txt"),
            "zero-shot detection prompt drifted from golden");
    require(detect_k0.find("You are a psychological process classifier") != std::string::npos,
            "detection prompt anchor missing");

    const std::string detect_k5 =
        build_detection_prompt(sample_examples(pool, 5, 42), window);
    require(detect_k5 == read_file(kFixtures + "/golden/detect_prompt_k5.txt"),
            "five-shot detection prompt drifted from golden");

    for (int k : {0, 1, 5, 10, 50, 100}) {
        const std::string prompt = build_detection_prompt(sample_examples(pool, k, 42), window);
        int blocks = 0;
        size_t at = 0;
        while ((at = prompt.find("\nExample ", at)) != std::string::npos) {
            ++blocks;
            ++at;
        }
        require(blocks == k, "K=" + std::to_string(k) + " rendered " +
                                 std::to_string(blocks) + " example blocks");
    }

    PipelineConfig config = PipelineConfig::load(kFixtures + "/config_mock.json");
    const std::string transcript = working_phase_text(session, config.segmentation);
    TempDir out("procnet_accept_prompts");
    Gateway gateway = make_gateway(config);
    auto annotations = cmd_detect(config, gateway, kFixtures + "/session_a.jsonl", out.str());
    auto processes = processes_from_annotations(session, load_annotations(annotations));
    const std::vector<std::string> themes = {
        "Frustration when outcomes fall short of expectations",
        "Pressure from family obligations and responsibility",
        "Neglect of basic self-care under stress",
    };

    const std::string step1 = prompts::generate_themes(transcript, process_entries(processes));
    require(step1 == read_file(kFixtures + "/golden/step1_prompt.txt"),
            "theme-generation prompt drifted from golden");
    require(step1.find("Generate clinically meaningful themes") != std::string::npos,
            "theme prompt anchor missing");

    const std::string step2 =
        prompts::assign_processes(transcript, process_entries(processes), themes);
    require(step2 == read_file(kFixtures + "/golden/step2_prompt.txt"),
            "assignment prompt drifted from golden");
    require(step2.find("Classify each listed psychological process under one or more of the "
                       "provided themes") != std::string::npos,
            "assignment prompt anchor missing");

    const std::string link_prompt =
        prompts::link(themes[1], themes[0], prompts::LinkPromptStyle::few_shot);
    require(link_prompt == read_file(kFixtures + "/golden/link_prompt_few_shot.txt"),
            "link prompt drifted from golden");
    require(link_prompt.find("determine whether a relationship exists") != std::string::npos,
            "link prompt anchor missing");

    const std::string baseline_prompt =
        prompts::baseline(transcript, process_entries(processes));
    require(baseline_prompt == read_file(kFixtures + "/golden/baseline_prompt.txt"),
            "baseline prompt drifted from golden");
    require(baseline_prompt.find("perform a full, end-to-end clinical reasoning analysis") !=
                std::string::npos,
            "baseline prompt anchor missing");
}

// ---------------------------------------------------------------------------
// 7. link-example sanity
// ---------------------------------------------------------------------------

void criterion_link_examples() {
    const std::string anxiety = "Anxiety about future career prospects and financial security";
    const std::string stuck = "Fear of being stuck in a dead-end job";
    const std::string peer = "Susceptibility to peer pressure";
    const std::string family = "Sense of responsibility to support family members";
    const std::string compassion = "High self-compassion";
    const std::string guilt = "Guilt associated with prioritizing personal needs over others";

    auto connected = [](const std::string& a, const std::string& b, const std::string& type,
                        const std::string& strength, const std::string& why) {
        MockRule r;
        r.schema_id = schemas::kLink;
        // the double newline pins the query section, not the embedded examples
        r.contains = {"Process A: " + a + "\n\nProcess B: " + b};
        r.response = json{{"relationship",
                           json::array({json{{"input_processes", {a, b}},
                                             {"connection", {1}},
                                             {"relationship_type", type},
                                             {"strength_of_relationship", strength},
                                             {"explanation", why}}})}};
        return r;
    };

    MockRules rules;
    rules.add(connected(anxiety, stuck, "excitatory", "strong",
                        "The more anxious one feels about the future, the more trapped a "
                        "stagnant job can seem"));
    rules.add(connected(compassion, guilt, "inhibitory", "strong",
                        "High compassion promotes self-acceptance and emotional balance over "
                        "self-criticism"));
    MockRule none;
    none.schema_id = schemas::kLink;
    none.response = json{{"relationship", json::array({json{{"input_processes", {"A", "B"}},
                                                            {"connection", {0}}}})}};
    rules.add(none);

    Gateway gateway;
    gateway.set_mock_rules(std::move(rules));
    LinkEngine engine(gateway);
    const std::vector<ThemeRef> themes = {
        {"T1", anxiety}, {"T2", stuck},      {"T3", peer},
        {"T4", family},  {"T5", compassion}, {"T6", guilt},
    };
    EnsembleResult result =
        engine.run_ensemble(EnsembleStrategy::prompt_based(mock_backend()), themes, 11);

    require(result.opinions.size() == 6 * 5 * 3, "expected 90 opinions over 30 pairs");
    require(result.edges.size() == 2, "expected exactly the two scripted edges, got " +
                                          std::to_string(result.edges.size()));

    const Edge& career = result.edges[0];
    require(career.source_theme == "T1" && career.target_theme == "T2",
            "career-anxiety edge endpoints wrong");
    require(career.edge_type == EdgeType::excitatory && career.strength == Strength::strong,
            "career-anxiety edge type/strength wrong");
    require(career.votes_for == 3, "career-anxiety edge should be unanimous");

    const Edge& self = result.edges[1];
    require(self.source_theme == "T5" && self.target_theme == "T6",
            "self-compassion edge endpoints wrong");
    require(self.edge_type == EdgeType::inhibitory && self.strength == Strength::strong,
            "self-compassion edge type/strength wrong");

    for (const Edge& edge : result.edges)
        require(!(edge.source_theme == "T3" && edge.target_theme == "T4"),
                "the no-connection pair gained an edge");
}

// ---------------------------------------------------------------------------
// 8. agreement statistics
// ---------------------------------------------------------------------------

void criterion_agreement_stats() {
    std::vector<LinkOpinion> log;
    auto push_group = [&](int pair, int s1, int s2, int s3) {
        const std::string src = "S" + std::to_string(pair);
        log.push_back(oracles::opinion_state(s1, "v1", src, "D"));
        log.push_back(oracles::opinion_state(s2, "v2", src, "D"));
        log.push_back(oracles::opinion_state(s3, "v3", src, "D"));
    };
    // hand-tallied: 8/10 unanimous connection decisions; of the 6 unanimously
    // connected pairs 5 share the type; of those 5, 4 share the strength
    push_group(0, 1, 1, 1);
    push_group(1, 2, 2, 2);
    push_group(2, 6, 6, 6);
    push_group(3, 3, 3, 3);
    push_group(4, 1, 2, 1);
    push_group(5, 1, 4, 4);
    push_group(6, 0, 0, 0);
    push_group(7, 0, 0, 0);
    push_group(8, 0, 1, 1);
    push_group(9, 4, 0, 0);

    const AgreementStats stats = agreement_stats(log);
    require(stats.pairs == 10, "expected 10 pairs");
    require_close(stats.connection_pct, 80.0, 1e-9, "connection agreement");
    require_close(stats.type_pct, 100.0 * 5.0 / 6.0, 1e-9, "type agreement");
    require_close(stats.strength_pct, 80.0, 1e-9, "strength agreement");
}

// ---------------------------------------------------------------------------
// 9. segmentation
// ---------------------------------------------------------------------------

void criterion_segmentation() {
    Session session;
    session.session_id = "x01_s01";
    for (int i = 0; i < 60; ++i) {
        Utterance u;
        u.session_id = "x01_s01";
        u.index = i;
        u.speaker = i % 2 ? Speaker::patient : Speaker::therapist;
        u.text = "minute " + std::to_string(i);
        u.start_s = 60.0 * i;
        u.end_s = 60.0 * i + 60.0;
        session.utterances.push_back(std::move(u));
    }

    WorkingPhase phase = working_phase(session);
    require(!phase.too_short, "60-minute session flagged as short");
    require(phase.utterances.size() == 15, "expected the 15 utterances in [40, 55) minutes");
    require(phase.utterances.front().index == 40 && phase.utterances.back().index == 54,
            "window bounds are not [40, 55) minutes");

    Session short_session;
    short_session.session_id = "x01_s02";
    for (int i = 0; i < 10; ++i) {
        Utterance u = session.utterances[i];
        u.session_id = "x01_s02";
        short_session.utterances.push_back(std::move(u));
    }
    WorkingPhase degenerate = working_phase(short_session, 15.0, 5.0);
    require(degenerate.too_short, "10-minute session not flagged");
    require(degenerate.utterances.size() == 10, "short session must return every utterance");
}

// ---------------------------------------------------------------------------
// 10. round-trips
// ---------------------------------------------------------------------------

PersonalNetwork random_network(Rng& rng) {
    PersonalNetwork network;
    network.session_id = "r" + std::to_string(rng.bounded(100));
    const int nodes = 1 + static_cast<int>(rng.bounded(6));
    for (int i = 0; i < nodes; ++i) {
        NetworkNode node;
        node.theme_id = "T" + std::to_string(i + 1);
        node.label = "Theme with \"quoted\" text " + std::to_string(rng.bounded(1000));
        const int members = 1 + static_cast<int>(rng.bounded(5));
        for (int m = 0; m < members; ++m)
            node.member_process_ids.insert("P" + std::to_string(rng.bounded(15) + 1));
        node.weight_w = static_cast<int>(node.member_process_ids.size());
        std::set<DimensionLabel> dims;
        for (int d = 0; d < static_cast<int>(rng.bounded(4)); ++d)
            dims.insert(kAllDimensions[rng.bounded(9)]);
        node.top_dimensions.assign(dims.begin(), dims.end());
        network.nodes.push_back(std::move(node));
    }
    for (int i = 0; i < nodes; ++i) {
        for (int j = 0; j < nodes; ++j) {
            if (i == j || rng.bounded(3)) continue;
            Edge e;
            e.source_theme = "T" + std::to_string(i + 1);
            e.target_theme = "T" + std::to_string(j + 1);
            e.edge_type = static_cast<EdgeType>(rng.bounded(2));
            e.strength = static_cast<Strength>(rng.bounded(3));
            e.explanation = "edge explanation " + std::to_string(rng.bounded(1000));
            e.explanation_variant = "zero_shot";
            e.votes_for = 2 + static_cast<int>(rng.bounded(2));
            network.edges.push_back(std::move(e));
        }
    }
    network.provenance.pipeline_version = "0.1.0";
    network.provenance.strategy = "model_based";
    network.provenance.seeds = {{"detection", rng.bounded(1000)},
                                {"links", rng.bounded(1000)}};
    network.provenance.backends = {"a", "b", "c"};
    return network;
}

void criterion_round_trips() {
    Rng rng(4242);
    for (int trial = 0; trial < 25; ++trial) {
        PersonalNetwork network = random_network(rng);
        PersonalNetwork back = import_canonical(export_canonical(network));
        require(back == network,
                "canonical round-trip changed the network (trial " + std::to_string(trial) +
                    ")");
    }
    for (const char* name : {"session_a.jsonl", "session_pii.jsonl"}) {
        const std::string path = kFixtures + "/" + name;
        Session session = load_session(path);
        require(session_to_jsonl(session) == read_file(path),
                std::string("transcript save of ") + name + " is not byte-identical");
    }
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<void()> run;
    };
    const std::vector<Criterion> criteria = {
        {"1. voting oracle: 343 triples + permutation invariance (< 1 s)",
         criterion_voting_oracle},
        {"2. weighted total score reproduces the frozen reference columns", criterion_total_score},
        {"3. metric oracles on randomized fixtures", criterion_metric_oracles},
        {"4. pipeline determinism on the bundled session (< 10 s)",
         criterion_pipeline_determinism},
        {"5. clustering contracts on 50 defect scenarios", criterion_clustering_contracts},
        {"6. prompt fidelity against pinned goldens", criterion_prompt_fidelity},
        {"7. link-example sanity via scripted ensemble", criterion_link_examples},
        {"8. agreement statistics vs hand tally", criterion_agreement_stats},
        {"9. working-phase segmentation", criterion_segmentation},
        {"10. canonical and transcript round-trips", criterion_round_trips},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        try {
            criterion.run();
            std::printf("[PASS] %s\n", criterion.name);
        } catch (const Failure& f) {
            ++failures;
            std::printf("[FAIL] %s\n       %s\n", criterion.name, f.message.c_str());
        } catch (const std::exception& e) {
            ++failures;
            std::printf("[FAIL] %s\n       unexpected error: %s\n", criterion.name, e.what());
        }
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
