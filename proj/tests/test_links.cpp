#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "procnet/errors.hpp"
#include "procnet/links.hpp"
#include "procnet/schemas.hpp"

using namespace procnet;
using nlohmann::json;

namespace {

const std::string kFixtures = PROCNET_FIXTURES_DIR;

LinkOpinion opinion(const std::string& variant, bool connected,
                    std::optional<EdgeType> type = std::nullopt,
                    std::optional<Strength> strength = std::nullopt) {
    LinkOpinion o;
    o.variant_id = variant;
    o.source_theme = "TA";
    o.target_theme = "TB";
    o.connected = connected;
    if (connected) {
        o.edge_type = type;
        o.strength = strength;
        o.explanation = "because of " + variant;
    }
    return o;
}

BackendSpec mock_backend(const std::string& name = "mock-main") {
    BackendSpec b;
    b.name = name;
    b.kind = BackendKind::mock;
    b.model_id = name;
    return b;
}

json link_response(bool connected, const std::string& type = "", const std::string& strength = "",
                   const std::string& explanation = "") {
    json entry;
    entry["input_processes"] = {"A", "B"};
    if (connected) {
        entry["connection"] = {1};
        entry["relationship_type"] = type;
        entry["strength_of_relationship"] = strength;
        entry["explanation"] = explanation;
    } else {
        entry["connection"] = {0};
    }
    return json{{"relationship", json::array({entry})}};
}

MockRule link_rule(std::vector<std::string> contains, json response) {
    MockRule r;
    r.schema_id = schemas::kLink;
    r.contains = std::move(contains);
    r.response = std::move(response);
    return r;
}

}  // namespace

TEST_CASE("vote: mixed opinions follow the majority rule") {
    // exc/strong + exc/weak + inh/moderate: majority = excitatory pair,
    // strength = strongest among them.
    auto edge = vote({opinion("v1", true, EdgeType::excitatory, Strength::strong),
                      opinion("v2", true, EdgeType::excitatory, Strength::weak),
                      opinion("v3", true, EdgeType::inhibitory, Strength::moderate)},
                     0);
    REQUIRE(edge.has_value());
    CHECK(edge->edge_type == EdgeType::excitatory);
    CHECK(edge->strength == Strength::strong);
    CHECK(edge->votes_for == 2);
    CHECK(edge->explanation_variant == "v1");  // only v1 holds the max strength
}

TEST_CASE("vote: no 2-majority means no edge") {
    CHECK_FALSE(vote({opinion("v1", false), opinion("v2", false),
                      opinion("v3", true, EdgeType::excitatory, Strength::strong)},
                     0)
                    .has_value());
    CHECK_FALSE(vote({opinion("v1", false), opinion("v2", false), opinion("v3", false)}, 0)
                    .has_value());
    // 1 vs 1 split on type
    CHECK_FALSE(vote({opinion("v1", true, EdgeType::excitatory, Strength::strong),
                      opinion("v2", true, EdgeType::inhibitory, Strength::strong),
                      opinion("v3", false)},
                     0)
                    .has_value());
}

TEST_CASE("vote: unanimity returns the shared opinion with 3 votes") {
    auto edge = vote({opinion("v1", true, EdgeType::inhibitory, Strength::weak),
                      opinion("v2", true, EdgeType::inhibitory, Strength::weak),
                      opinion("v3", true, EdgeType::inhibitory, Strength::weak)},
                     0);
    REQUIRE(edge.has_value());
    CHECK(edge->edge_type == EdgeType::inhibitory);
    CHECK(edge->strength == Strength::weak);
    CHECK(edge->votes_for == 3);
}

TEST_CASE("vote: arity and pair mismatches are errors") {
    CHECK_THROWS_AS(vote({opinion("v1", false)}, 0), ValidationError);
    auto a = opinion("v1", false);
    auto b = opinion("v2", false);
    auto c = opinion("v3", false);
    c.target_theme = "TX";
    CHECK_THROWS_AS(vote({a, b, c}, 0), ValidationError);
}

TEST_CASE("vote: matches the brute-force reference on all 343 triples") {
    for (int s1 = 0; s1 < 7; ++s1) {
        for (int s2 = 0; s2 < 7; ++s2) {
            for (int s3 = 0; s3 < 7; ++s3) {
                std::vector<LinkOpinion> opinions = {
                    oracles::opinion_state(s1, "v1", "TA", "TB"),
                    oracles::opinion_state(s2, "v2", "TA", "TB"),
                    oracles::opinion_state(s3, "v3", "TA", "TB"),
                };
                auto got = vote(opinions, 99);
                auto want = oracles::vote_reference(opinions, 99);
                REQUIRE(got.has_value() == want.has_value());
                if (got) CHECK(*got == *want);
            }
        }
    }
}

TEST_CASE("vote: permutation invariant, including the sampled explanation") {
    std::vector<LinkOpinion> base = {
        opinion("v1", true, EdgeType::excitatory, Strength::strong),
        opinion("v2", true, EdgeType::excitatory, Strength::strong),
        opinion("v3", true, EdgeType::excitatory, Strength::moderate),
    };
    std::vector<int> order = {0, 1, 2};
    auto reference = vote(base, 5);
    REQUIRE(reference.has_value());
    do {
        auto permuted = vote({base[order[0]], base[order[1]], base[order[2]]}, 5);
        REQUIRE(permuted.has_value());
        CHECK(*permuted == *reference);
    } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("vote: strength dominance over the majority subset") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<LinkOpinion> opinions = {
            oracles::opinion_state(static_cast<int>(rng.bounded(7)), "v1", "TA", "TB"),
            oracles::opinion_state(static_cast<int>(rng.bounded(7)), "v2", "TA", "TB"),
            oracles::opinion_state(static_cast<int>(rng.bounded(7)), "v3", "TA", "TB"),
        };
        auto edge = vote(opinions, trial);
        if (!edge) continue;
        int agreeing = 0;
        for (const LinkOpinion& o : opinions) {
            if (o.connected && *o.edge_type == edge->edge_type) {
                ++agreeing;
                CHECK(edge->strength >= *o.strength);
            }
        }
        CHECK(agreeing == edge->votes_for);
        CHECK(edge->votes_for >= 2);
    }
}

TEST_CASE("query_opinion: bundled relationship examples") {
    Gateway gateway;
    MockRules rules;
    rules.add(link_rule(
        {"Process A: Anxiety about future career prospects and financial security",
         "Process B: Fear of being stuck in a dead-end job"},
        link_response(true, "excitatory", "strong",
                      "The more anxious one feels about the future, the more trapped a "
                      "stagnant job can seem")));
    rules.add(link_rule({"Process A: High self-compassion",
                         "Process B: Guilt associated with prioritizing personal needs"},
                        link_response(true, "inhibitory", "strong",
                                      "High compassion promotes self-acceptance and emotional "
                                      "balance over self-criticism")));
    rules.add(link_rule({}, link_response(false)));
    gateway.set_mock_rules(std::move(rules));
    LinkEngine engine(gateway);

    EnsembleMember member{"zero_shot", mock_backend(), prompts::LinkPromptStyle::zero_shot};
    ThemeRef anxiety{"T1", "Anxiety about future career prospects and financial security"};
    ThemeRef stuck{"T2", "Fear of being stuck in a dead-end job"};
    ThemeRef compassion{"T3", "High self-compassion"};
    ThemeRef guilt{"T4", "Guilt associated with prioritizing personal needs over others"};
    ThemeRef peer{"T5", "Susceptibility to peer pressure"};
    ThemeRef family{"T6", "Sense of responsibility to support family members"};

    LinkOpinion excite = engine.query_opinion(member, anxiety, stuck);
    CHECK(excite.connected);
    CHECK(*excite.edge_type == EdgeType::excitatory);
    CHECK(*excite.strength == Strength::strong);

    LinkOpinion inhibit = engine.query_opinion(member, compassion, guilt);
    CHECK(inhibit.connected);
    CHECK(*inhibit.edge_type == EdgeType::inhibitory);
    CHECK(*inhibit.strength == Strength::strong);

    LinkOpinion none = engine.query_opinion(member, peer, family);
    CHECK_FALSE(none.connected);
    CHECK_FALSE(none.abstained);

    CHECK_THROWS_AS(engine.query_opinion(member, anxiety, anxiety), ValidationError);
}

TEST_CASE("query_opinion: gateway failure becomes an abstention") {
    Gateway gateway;  // empty rule table: every mock call fails
    gateway.set_mock_rules(MockRules{});
    LinkEngine engine(gateway);
    EnsembleMember member{"zero_shot", mock_backend(), prompts::LinkPromptStyle::zero_shot};
    LinkOpinion o = engine.query_opinion(member, {"T1", "a"}, {"T2", "b"});
    CHECK(o.abstained);
    CHECK_FALSE(o.connected);
}

TEST_CASE("ensemble strategies pin their member variants") {
    auto prompt = EnsembleStrategy::prompt_based(mock_backend());
    REQUIRE(prompt.members.size() == 3);
    CHECK(prompt.members[0].variant_id == "zero_shot");
    CHECK(prompt.members[1].variant_id == "one_shot");
    CHECK(prompt.members[2].variant_id == "few_shot");
    for (const auto& m : prompt.members) CHECK(m.backend.temperature == 0.0);

    auto temp = EnsembleStrategy::temperature_based(mock_backend());
    REQUIRE(temp.members.size() == 3);
    CHECK(temp.members[0].backend.temperature == doctest::Approx(0.0));
    CHECK(temp.members[1].backend.temperature == doctest::Approx(0.5));
    CHECK(temp.members[2].backend.temperature == doctest::Approx(1.0));

    auto model = EnsembleStrategy::model_based(
        {mock_backend("m1"), mock_backend("m2"), mock_backend("m3")});
    CHECK(model.members[1].variant_id == "m2");
    CHECK_THROWS_AS(EnsembleStrategy::model_based({mock_backend("m1"), mock_backend("m1"),
                                                   mock_backend("m3")}),
                    ValidationError);
    CHECK_THROWS_AS(EnsembleStrategy::model_based({mock_backend("m1")}), ValidationError);
}

TEST_CASE("run_ensemble: queries every ordered pair") {
    Gateway gateway;
    MockRules rules;
    rules.add(link_rule({}, link_response(false)));
    gateway.set_mock_rules(std::move(rules));
    LinkEngine engine(gateway);
    auto strategy = EnsembleStrategy::prompt_based(mock_backend());

    std::vector<ThemeRef> two = {{"T1", "a"}, {"T2", "b"}};
    EnsembleResult r2 = engine.run_ensemble(strategy, two, 0);
    CHECK(r2.opinions.size() == 2 * 3);
    CHECK(r2.edges.empty());

    std::vector<ThemeRef> five;
    for (int i = 0; i < 5; ++i)
        five.push_back({"T" + std::to_string(i + 1), "theme " + std::to_string(i + 1)});
    EnsembleResult r5 = engine.run_ensemble(strategy, five, 0);
    CHECK(r5.opinions.size() == 20 * 3);  // n(n-1) ordered pairs

    CHECK_THROWS_AS(engine.run_ensemble(strategy, {{"T1", "a"}}, 0), ValidationError);
}

TEST_CASE("run_ensemble: fixture rules give the pinned edge set") {
    Gateway gateway;
    gateway.set_mock_rules(MockRules::from_file(kFixtures + "/mock_rules.json"));
    LinkEngine engine(gateway);
    auto strategy = EnsembleStrategy::prompt_based(mock_backend());
    std::vector<ThemeRef> themes = {
        {"T1", "Frustration when outcomes fall short of expectations"},
        {"T2", "Pressure from family obligations and responsibility"},
        {"T3", "Neglect of basic self-care under stress"},
    };
    EnsembleResult result = engine.run_ensemble(strategy, themes, 7);
    REQUIRE(result.edges.size() == 3);
    CHECK(result.edges[0].source_theme == "T2");
    CHECK(result.edges[0].target_theme == "T1");
    CHECK(result.edges[0].strength == Strength::strong);
    CHECK(result.edges[0].votes_for == 3);
    CHECK(result.edges[1].source_theme == "T2");
    CHECK(result.edges[1].target_theme == "T3");
    CHECK(result.edges[2].source_theme == "T3");
    CHECK(result.edges[2].target_theme == "T1");
    CHECK(result.opinions.size() == 18);
}

TEST_CASE("run_ensemble: model-based members can split the vote") {
    Gateway gateway;
    MockRules rules;
    MockRule dissent;
    dissent.schema_id = schemas::kLink;
    dissent.model_id = "m2";
    dissent.response = link_response(true, "inhibitory", "weak", "m2 disagrees");
    rules.add(dissent);
    rules.add(link_rule({}, link_response(true, "excitatory", "moderate", "the others agree")));
    gateway.set_mock_rules(std::move(rules));

    LinkEngine engine(gateway);
    auto strategy = EnsembleStrategy::model_based(
        {mock_backend("m1"), mock_backend("m2"), mock_backend("m3")});
    EnsembleResult result = engine.run_ensemble(strategy, {{"T1", "a"}, {"T2", "b"}}, 3);
    REQUIRE(result.edges.size() == 2);
    for (const Edge& edge : result.edges) {
        CHECK(edge.edge_type == EdgeType::excitatory);
        CHECK(edge.strength == Strength::moderate);
        CHECK(edge.votes_for == 2);  // m2 was outvoted
        CHECK(edge.explanation == "the others agree");
    }
}

TEST_CASE("run_ensemble: temperature-based members can be scripted apart") {
    Gateway gateway;
    MockRules rules;
    MockRule hot;
    hot.schema_id = schemas::kLink;
    hot.temperature = 1.0;
    hot.response = link_response(false);
    rules.add(hot);
    rules.add(link_rule({}, link_response(true, "excitatory", "strong", "cold members agree")));
    gateway.set_mock_rules(std::move(rules));

    LinkEngine engine(gateway);
    auto strategy = EnsembleStrategy::temperature_based(mock_backend());
    EnsembleResult result = engine.run_ensemble(strategy, {{"T1", "a"}, {"T2", "b"}}, 3);
    REQUIRE(result.edges.size() == 2);
    CHECK(result.edges[0].votes_for == 2);  // the t=1.0 member said no
}

TEST_CASE("agreement_stats: unanimity and splits") {
    std::vector<LinkOpinion> log;
    auto push_group = [&](const std::string& pair, int s1, int s2, int s3) {
        log.push_back(oracles::opinion_state(s1, "v1", pair, pair + "x"));
        log.push_back(oracles::opinion_state(s2, "v2", pair, pair + "x"));
        log.push_back(oracles::opinion_state(s3, "v3", pair, pair + "x"));
    };

    push_group("A", 1, 1, 1);  // unanimous everywhere
    push_group("B", 0, 0, 0);
    AgreementStats all = agreement_stats(log);
    CHECK(all.connection_pct == doctest::Approx(100.0));
    CHECK(all.type_pct == doctest::Approx(100.0));
    CHECK(all.strength_pct == doctest::Approx(100.0));

    log.clear();
    push_group("A", 1, 1, 1);
    push_group("B", 1, 0, 0);  // split on connection
    AgreementStats half = agreement_stats(log);
    CHECK(half.connection_pct == doctest::Approx(50.0));

    // wrong group arity
    log.clear();
    log.push_back(oracles::opinion_state(1, "v1", "A", "B"));
    CHECK_THROWS_AS(agreement_stats(log), ValidationError);
}

TEST_CASE("agreement_stats: hand-tallied 10-pair fixture") {
    // states: 0 none, 1..3 excitatory weak/moderate/strong, 4..6 inhibitory
    std::vector<LinkOpinion> log;
    auto push_group = [&](int pair, int s1, int s2, int s3) {
        const std::string src = "S" + std::to_string(pair);
        log.push_back(oracles::opinion_state(s1, "v1", src, "D"));
        log.push_back(oracles::opinion_state(s2, "v2", src, "D"));
        log.push_back(oracles::opinion_state(s3, "v3", src, "D"));
    };
    // 6 unanimously connected: 4 with unanimous type+strength, 1 unanimous
    // type split strength, 1 split type
    push_group(0, 1, 1, 1);
    push_group(1, 2, 2, 2);
    push_group(2, 6, 6, 6);
    push_group(3, 3, 3, 3);
    push_group(4, 1, 2, 1);  // type exc, strengths differ
    push_group(5, 1, 4, 4);  // types differ
    // 2 unanimously not connected
    push_group(6, 0, 0, 0);
    push_group(7, 0, 0, 0);
    // 2 split on connection
    push_group(8, 0, 1, 1);
    push_group(9, 4, 0, 0);

    AgreementStats stats = agreement_stats(log);
    CHECK(stats.pairs == 10);
    // by hand: 8 of 10 pairs agree on connected/not
    CHECK(stats.connection_pct == doctest::Approx(80.0));
    // by hand: 6 unanimously connected, 5 share the type
    CHECK(stats.type_pct == doctest::Approx(100.0 * 5.0 / 6.0));
    // by hand: of those 5, 4 share the strength
    CHECK(stats.strength_pct == doctest::Approx(80.0));
}

TEST_CASE("opinion log round-trips") {
    std::vector<LinkOpinion> log = {
        opinion("v1", true, EdgeType::excitatory, Strength::moderate),
        opinion("v2", false),
    };
    log[1].abstained = true;
    auto parsed = parse_opinions_jsonl(opinions_to_jsonl(log));
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0] == log[0]);
    CHECK(parsed[1] == log[1]);
}
