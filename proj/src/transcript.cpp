#include "procnet/transcript.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include "procnet/errors.hpp"

namespace procnet {

using nlohmann::json;
using nlohmann::ordered_json;

const char* speaker_name(Speaker s) { return s == Speaker::patient ? "patient" : "therapist"; }

std::optional<Speaker> parse_speaker(const std::string& s) {
    if (s == "patient") return Speaker::patient;
    if (s == "therapist") return Speaker::therapist;
    return std::nullopt;
}

namespace {

std::string trimmed(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

Utterance parse_utterance(const json& record, const std::string& origin, int line_no) {
    auto fail = [&](const std::string& why) -> ParseError {
        return ParseError(origin + ":" + std::to_string(line_no) + ": " + why);
    };
    if (!record.is_object()) throw fail("record is not an object");
    Utterance u;
    try {
        u.session_id = record.at("session_id").get<std::string>();
        u.index = record.at("index").get<int>();
        const auto speaker = record.at("speaker").get<std::string>();
        auto parsed = parse_speaker(speaker);
        if (!parsed) throw fail("unknown speaker '" + speaker + "'");
        u.speaker = *parsed;
        u.text = record.at("text").get<std::string>();
    } catch (const json::exception& e) {
        throw fail(std::string("missing or mistyped field: ") + e.what());
    }
    if (record.contains("start_s")) u.start_s = record.at("start_s").get<double>();
    if (record.contains("end_s")) u.end_s = record.at("end_s").get<double>();
    if (u.index < 0) throw fail("negative index");
    if (trimmed(u.text).empty()) throw fail("empty text");
    if (u.start_s && u.end_s && *u.start_s > *u.end_s) throw fail("start_s > end_s");
    return u;
}

}  // namespace

Session parse_session(const std::string& jsonl, const std::string& origin) {
    Session session;
    std::istringstream in(jsonl);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trimmed(line).empty()) continue;
        json record = json::parse(line, nullptr, false);
        if (record.is_discarded())
            throw ParseError(origin + ":" + std::to_string(line_no) + ": invalid JSON");
        session.utterances.push_back(parse_utterance(record, origin, line_no));
    }
    if (session.utterances.empty()) throw ParseError(origin + ": no utterances");

    session.session_id = session.utterances.front().session_id;
    double prev_start = -1.0;
    for (size_t i = 0; i < session.utterances.size(); ++i) {
        const Utterance& u = session.utterances[i];
        if (u.session_id != session.session_id)
            throw ParseError(origin + ": mixed session ids ('" + session.session_id + "' vs '" +
                             u.session_id + "')");
        if (u.index != static_cast<int>(i))
            throw ValidationError(origin + ": utterance index " + std::to_string(u.index) +
                                  " at position " + std::to_string(i) +
                                  " (indices must be 0..n-1 with no gaps)");
        if (u.start_s) {
            if (*u.start_s < prev_start)
                throw ValidationError(origin + ": non-monotonic start_s at index " +
                                      std::to_string(u.index));
            prev_start = *u.start_s;
        }
    }
    const Utterance& last = session.utterances.back();
    if (last.end_s)
        session.total_duration_s = *last.end_s;
    else if (last.start_s)
        session.total_duration_s = *last.start_s;
    return session;
}

Session load_session(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open transcript file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_session(buf.str(), path);
}

std::string session_to_jsonl(const Session& session) {
    std::string out;
    for (const Utterance& u : session.utterances) {
        ordered_json record;
        record["session_id"] = u.session_id;
        record["index"] = u.index;
        record["speaker"] = speaker_name(u.speaker);
        record["text"] = u.text;
        if (u.start_s) record["start_s"] = *u.start_s;
        if (u.end_s) record["end_s"] = *u.end_s;
        out += record.dump();
        out += '\n';
    }
    return out;
}

void save_session(const Session& session, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write transcript file: " + path);
    out << session_to_jsonl(session);
}

WorkingPhase working_phase(const Session& session, double lead_min, double tail_min) {
    if (session.empty()) throw ValidationError("working_phase: empty session");
    if (lead_min <= 0 || tail_min < 0) throw ValidationError("working_phase: bad window lengths");

    WorkingPhase phase;
    const double lead_s = lead_min * 60.0;
    const double tail_s = tail_min * 60.0;

    bool timestamped = true;
    for (const Utterance& u : session.utterances) {
        if (!u.start_s) {
            timestamped = false;
            break;
        }
    }

    if (timestamped) {
        const Utterance& last = session.utterances.back();
        const double end = last.end_s ? *last.end_s : *last.start_s;
        const double begin = *session.utterances.front().start_s;
        if (end - begin < lead_s + tail_s) {
            phase.utterances = session.utterances;
            phase.too_short = true;
            return phase;
        }
        const double lo = end - (lead_s + tail_s);
        const double hi = end - tail_s;
        for (const Utterance& u : session.utterances) {
            if (*u.start_s >= lo && *u.start_s < hi) phase.utterances.push_back(u);
        }
        return phase;
    }

    // No timestamps: proportional slice of a nominal 60-minute session.
    // Compared in scaled form (index * 60 vs n * minutes) so that exact
    // boundaries like 32/48 == 2/3 do not fall to rounding.
    const double nominal = 60.0;
    if (lead_min + tail_min >= nominal) {
        phase.utterances = session.utterances;
        phase.too_short = true;
        return phase;
    }
    const double n = static_cast<double>(session.size());
    const double lo = n * (nominal - lead_min - tail_min);
    const double hi = n * (nominal - tail_min);
    for (const Utterance& u : session.utterances) {
        const double scaled = static_cast<double>(u.index) * nominal;
        if (scaled >= lo - 1e-9 && scaled < hi - 1e-9) phase.utterances.push_back(u);
    }
    return phase;
}

ContextWindow context_window(const Session& session, int index, int before, int after) {
    if (index < 0 || index >= static_cast<int>(session.size()))
        throw ValidationError("context_window: index " + std::to_string(index) +
                              " out of range for session of " + std::to_string(session.size()));
    ContextWindow window;
    window.target = session.utterances[index];
    for (int i = std::max(0, index - before); i < index; ++i)
        window.before.push_back(session.utterances[i]);
    const int last = std::min<int>(static_cast<int>(session.size()) - 1, index + after);
    for (int i = index + 1; i <= last; ++i) window.after.push_back(session.utterances[i]);
    return window;
}

PiiConfig PiiConfig::defaults() {
    PiiConfig config;
    config.patterns = {
        {"email", R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})"},
        {"phone", R"((\+?\d{1,2}[ .-])?(\(?\d{3}\)?[ .-])?\d{3}[ .-]\d{4})"},
        {"name_candidate", R"([A-Z][a-z]+(?: [A-Z][a-z]+)+)"},
    };
    return config;
}

std::vector<PiiViolation> check_deidentified(const Session& session, const PiiConfig& config) {
    std::vector<PiiViolation> violations;
    static const std::regex placeholder(R"(\[[A-Z][A-Z0-9_]*\])");

    std::vector<std::regex> compiled;
    compiled.reserve(config.patterns.size());
    for (const PiiPattern& p : config.patterns) compiled.emplace_back(p.regex);

    for (const Utterance& u : session.utterances) {
        std::vector<std::pair<size_t, size_t>> shields;  // [begin, end) of placeholders
        for (auto it = std::sregex_iterator(u.text.begin(), u.text.end(), placeholder);
             it != std::sregex_iterator(); ++it) {
            shields.emplace_back(it->position(), it->position() + it->length());
        }
        for (size_t pi = 0; pi < compiled.size(); ++pi) {
            for (auto it = std::sregex_iterator(u.text.begin(), u.text.end(), compiled[pi]);
                 it != std::sregex_iterator(); ++it) {
                const size_t begin = it->position();
                const size_t end = begin + it->length();
                bool shielded = false;
                for (auto [sb, se] : shields) {
                    if (begin >= sb && end <= se) {
                        shielded = true;
                        break;
                    }
                }
                if (!shielded)
                    violations.push_back({u.index, config.patterns[pi].name, it->str()});
            }
        }
    }
    return violations;
}

namespace {

long long word_count(const std::string& text) {
    std::istringstream in(text);
    std::string token;
    long long count = 0;
    while (in >> token) ++count;
    return count;
}

std::string patient_id(const std::string& session_id) {
    size_t pos = session_id.find('_');
    return pos == std::string::npos ? session_id : session_id.substr(0, pos);
}

}  // namespace

CorpusStats corpus_stats(const std::vector<Session>& sessions) {
    CorpusStats stats;
    for (const Session& session : sessions) {
        SpeakerBreakdown& per_session = stats.per_session[session.session_id];
        for (const Utterance& u : session.utterances) {
            SpeakerTally tally;
            tally.words = word_count(u.text);
            tally.utterances = 1;
            if (u.start_s && u.end_s) tally.duration_s = *u.end_s - *u.start_s;
            per_session[static_cast<int>(u.speaker)] += tally;
        }
        SpeakerBreakdown& per_patient = stats.per_patient[patient_id(session.session_id)];
        for (int s = 0; s < 2; ++s) {
            per_patient[s] += per_session[s];
            stats.totals[s] += per_session[s];
        }
    }
    return stats;
}

std::string corpus_stats_tsv(const CorpusStats& stats) {
    std::ostringstream out;
    out << "scope\tid\tspeaker\twords\tutterances\tduration_s\n";
    auto row = [&](const char* scope, const std::string& id, int speaker,
                   const SpeakerTally& tally) {
        out << scope << '\t' << id << '\t' << speaker_name(static_cast<Speaker>(speaker)) << '\t'
            << tally.words << '\t' << tally.utterances << '\t' << tally.duration_s << '\n';
    };
    for (const auto& [id, breakdown] : stats.per_session)
        for (int s = 0; s < 2; ++s) row("session", id, s, breakdown[s]);
    for (const auto& [id, breakdown] : stats.per_patient)
        for (int s = 0; s < 2; ++s) row("patient", id, s, breakdown[s]);
    for (int s = 0; s < 2; ++s) row("total", "all", s, stats.totals[s]);
    return out.str();
}

}  // namespace procnet
