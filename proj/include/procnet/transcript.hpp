#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace procnet {

enum class Speaker { patient, therapist };

const char* speaker_name(Speaker s);
std::optional<Speaker> parse_speaker(const std::string& s);

struct Utterance {
    std::string session_id;
    int index = 0;
    Speaker speaker = Speaker::patient;
    std::string text;
    std::optional<double> start_s;
    std::optional<double> end_s;

    bool operator==(const Utterance&) const = default;
};

struct Session {
    std::string session_id;
    std::vector<Utterance> utterances;
    std::optional<double> total_duration_s;

    bool empty() const { return utterances.empty(); }
    size_t size() const { return utterances.size(); }
};

struct ContextWindow {
    Utterance target;
    std::vector<Utterance> before;  // up to `before` neighbors, session order
    std::vector<Utterance> after;   // up to `after` neighbors, session order
};

// Input format: one JSON object per line with fields
// session_id, index, speaker ("patient"|"therapist"), text, start_s, end_s.
// Timestamps are optional; everything else is required.
Session load_session(const std::string& path);
Session parse_session(const std::string& jsonl, const std::string& origin = "<memory>");

// Canonical writer: fixed field order, one '\n'-terminated object per line.
// load_session(save_session(s)) reproduces s; saving a canonically formatted
// file reproduces its bytes.
std::string session_to_jsonl(const Session& session);
void save_session(const Session& session, const std::string& path);

struct WorkingPhase {
    std::vector<Utterance> utterances;
    // Set when the session is shorter than lead+tail and the whole session
    // was returned instead of a slice.
    bool too_short = false;
};

// Selects the lead_min minutes that precede the final tail_min minutes.
// With timestamps: an utterance is included iff its start_s lies in
// [end - (lead+tail)*60, end - tail*60), end = last utterance end.
// Without timestamps: the proportional index slice of a nominal 60-minute
// session, i.e. include utterance i iff i/n is in [1-(lead+tail)/60, 1-tail/60).
WorkingPhase working_phase(const Session& session, double lead_min = 15.0, double tail_min = 5.0);

ContextWindow context_window(const Session& session, int index, int before = 2, int after = 2);

struct PiiPattern {
    std::string name;
    std::string regex;
};

struct PiiConfig {
    std::vector<PiiPattern> patterns;
    // Defaults: email addresses, phone numbers, and multi-token capitalized
    // name candidates. Bracketed uppercase placeholders like [HUSBAND] are
    // never flagged.
    static PiiConfig defaults();
};

struct PiiViolation {
    int utterance_index = 0;
    std::string pattern;
    std::string matched_text;
};

std::vector<PiiViolation> check_deidentified(const Session& session,
                                             const PiiConfig& config = PiiConfig::defaults());

struct SpeakerTally {
    long long words = 0;
    long long utterances = 0;
    double duration_s = 0.0;

    SpeakerTally& operator+=(const SpeakerTally& other) {
        words += other.words;
        utterances += other.utterances;
        duration_s += other.duration_s;
        return *this;
    }
    bool operator==(const SpeakerTally&) const = default;
};

// Index 0 = patient, 1 = therapist.
using SpeakerBreakdown = std::array<SpeakerTally, 2>;

struct CorpusStats {
    std::map<std::string, SpeakerBreakdown> per_session;
    // Patient id = session_id up to the first '_' (the whole id when there
    // is none).
    std::map<std::string, SpeakerBreakdown> per_patient;
    SpeakerBreakdown totals{};
};

// Words are whitespace-delimited tokens; duration sums end_s - start_s for
// utterances carrying both timestamps.
CorpusStats corpus_stats(const std::vector<Session>& sessions);

std::string corpus_stats_tsv(const CorpusStats& stats);

}  // namespace procnet
