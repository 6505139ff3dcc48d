#include "procnet/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "procnet/errors.hpp"
#include "procnet/textutil.hpp"

namespace procnet {

std::map<std::string, double> MetricWeights::as_map() const {
    return {{"clinical_relevance", clinical_relevance},
            {"novelty", novelty},
            {"usefulness", usefulness},
            {"specificity", specificity},
            {"coverage", coverage},
            {"completeness", completeness},
            {"intrusiveness", intrusiveness},
            {"redundancy", redundancy}};
}

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names = {
        "clinical_relevance", "novelty",      "usefulness",    "specificity",
        "coverage",           "completeness", "intrusiveness", "redundancy"};
    return names;
}

ProcessAnnotation resolve_gold(const ProcessAnnotation& a, const ProcessAnnotation& b) {
    if (a.utterance_index != b.utterance_index)
        throw ValidationError("resolve_gold: utterance index mismatch (" +
                              std::to_string(a.utterance_index) + " vs " +
                              std::to_string(b.utterance_index) + ")");
    ProcessAnnotation gold;
    gold.utterance_index = a.utterance_index;
    gold.is_process = a.is_process || b.is_process;
    if (gold.is_process) {
        gold.dimensions = a.dimensions;
        gold.dimensions.insert(b.dimensions.begin(), b.dimensions.end());
    }
    return gold;
}

Prf binary_prf(const std::vector<bool>& preds, const std::vector<bool>& golds) {
    if (preds.size() != golds.size())
        throw ValidationError("binary_prf: length mismatch (" + std::to_string(preds.size()) +
                              " vs " + std::to_string(golds.size()) + ")");
    long long tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] && golds[i]) ++tp;
        if (preds[i] && !golds[i]) ++fp;
        if (!preds[i] && golds[i]) ++fn;
    }
    Prf out;
    out.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
    out.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
    out.f1 = out.precision + out.recall == 0.0
                 ? 0.0
                 : 2.0 * out.precision * out.recall / (out.precision + out.recall);
    return out;
}

Prf multilabel_prf(const std::vector<DimensionSet>& preds,
                   const std::vector<DimensionSet>& golds) {
    if (preds.size() != golds.size())
        throw ValidationError("multilabel_prf: length mismatch");
    long long tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < preds.size(); ++i) {
        for (DimensionLabel label : preds[i])
            golds[i].count(label) ? ++tp : ++fp;
        for (DimensionLabel label : golds[i])
            if (!preds[i].count(label)) ++fn;
    }
    Prf out;
    out.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
    out.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
    out.f1 = out.precision + out.recall == 0.0
                 ? 0.0
                 : 2.0 * out.precision * out.recall / (out.precision + out.recall);
    return out;
}

double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.size() != b.size()) throw ValidationError("cohen_kappa: length mismatch");
    if (a.empty()) throw ValidationError("cohen_kappa: empty input");

    const double n = static_cast<double>(a.size());
    std::map<std::string, double> count_a, count_b;
    double matches = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        ++count_a[a[i]];
        ++count_b[b[i]];
        if (a[i] == b[i]) ++matches;
    }
    const double p_o = matches / n;
    double p_e = 0.0;
    for (const auto& [category, ca] : count_a) {
        auto it = count_b.find(category);
        if (it != count_b.end()) p_e += (ca / n) * (it->second / n);
    }
    if (1.0 - p_e < 1e-12) return 1.0;  // both raters degenerate on one category
    return (p_o - p_e) / (1.0 - p_e);
}

double cohen_kappa(const std::vector<bool>& a, const std::vector<bool>& b) {
    std::vector<std::string> sa, sb;
    sa.reserve(a.size());
    sb.reserve(b.size());
    for (bool v : a) sa.push_back(v ? "T" : "F");
    for (bool v : b) sb.push_back(v ? "T" : "F");
    return cohen_kappa(sa, sb);
}

std::map<DimensionLabel, double> per_label_kappa(const std::vector<DimensionSet>& a,
                                                 const std::vector<DimensionSet>& b) {
    if (a.size() != b.size()) throw ValidationError("per_label_kappa: length mismatch");
    std::map<DimensionLabel, double> out;
    for (DimensionLabel label : kAllDimensions) {
        std::vector<bool> va, vb;
        va.reserve(a.size());
        vb.reserve(b.size());
        for (size_t i = 0; i < a.size(); ++i) {
            va.push_back(a[i].count(label) > 0);
            vb.push_back(b[i].count(label) > 0);
        }
        out[label] = cohen_kappa(va, vb);
    }
    return out;
}

double observed_agreement(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.size() != b.size()) throw ValidationError("observed_agreement: length mismatch");
    if (a.empty()) throw ValidationError("observed_agreement: empty input");
    double matches = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] == b[i]) ++matches;
    return matches / static_cast<double>(a.size());
}

double completeness_score(double fraction) {
    if (fraction < 0.0 || fraction > 1.0)
        throw ValidationError("completeness_score: fraction out of [0, 1]");
    return 1.0 + 2.0 * fraction;
}

double total_score(const std::map<std::string, double>& ratings, const MetricWeights& weights) {
    double total = 0.0;
    for (const auto& [metric, weight] : weights.as_map()) {
        auto it = ratings.find(metric);
        if (it == ratings.end())
            throw ValidationError("total_score: missing metric '" + metric + "'");
        total += weight * it->second;
    }
    return total;
}

namespace {

double normalized_mean(const std::map<std::string, double>& ratings,
                       const std::map<std::string, double>& weights,
                       const std::vector<std::string>& members) {
    double numerator = 0.0, denominator = 0.0;
    for (const std::string& metric : members) {
        auto it = ratings.find(metric);
        if (it == ratings.end())
            throw ValidationError("insight_trust_scores: missing metric '" + metric + "'");
        const double w = weights.at(metric);
        numerator += w * it->second;
        denominator += w;
    }
    return numerator / denominator;
}

}  // namespace

CategoryScores insight_trust_scores(const std::map<std::string, double>& ratings,
                                    const MetricWeights& weights) {
    const auto weight_map = weights.as_map();
    CategoryScores scores;
    scores.insightfulness =
        normalized_mean(ratings, weight_map, {"clinical_relevance", "novelty", "usefulness"});
    scores.trustworthiness = normalized_mean(
        ratings, weight_map,
        {"specificity", "coverage", "completeness", "intrusiveness", "redundancy"});
    return scores;
}

std::map<std::string, std::map<std::string, double>> preference_summary(
    const std::vector<PreferenceRecord>& records) {
    std::map<std::string, int> totals;
    std::map<std::string, std::map<std::string, int>> counts;
    for (const PreferenceRecord& r : records) {
        ++totals[r.question];
        if (!r.choice.empty()) ++counts[r.question][r.choice];
    }
    std::map<std::string, std::map<std::string, double>> out;
    for (const auto& [question, total] : totals) {
        for (const auto& [choice, count] : counts[question])
            out[question][choice] = 100.0 * count / total;
        if (!out.count(question)) out[question] = {};
    }
    return out;
}

namespace {

std::vector<std::vector<std::string>> read_tsv(const std::string& path, size_t min_columns) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::istringstream row(line);
        std::string field;
        while (std::getline(row, field, '\t')) fields.push_back(trim(field));
        if (fields.size() < min_columns)
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected at least " +
                             std::to_string(min_columns) + " tab-separated fields");
        rows.push_back(std::move(fields));
    }
    return rows;
}

bool is_header(const std::vector<std::string>& row) { return row[0] == "rater_id"; }

}  // namespace

std::vector<RatingRecord> load_ratings_tsv(const std::string& path) {
    std::vector<RatingRecord> records;
    static const std::set<std::string> known(metric_names().begin(), metric_names().end());
    for (const auto& row : read_tsv(path, 4)) {
        if (is_header(row)) continue;
        RatingRecord r{row[0], row[1], row[2], 0};
        if (!known.count(r.metric))
            throw ValidationError(path + ": unknown metric '" + r.metric + "'");
        try {
            r.score = std::stoi(row[3]);
        } catch (const std::exception&) {
            throw ParseError(path + ": bad score '" + row[3] + "'");
        }
        if (r.score < 1 || r.score > 3)
            throw ValidationError(path + ": score must be 1, 2, or 3");
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<PreferenceRecord> load_preferences_tsv(const std::string& path) {
    std::vector<PreferenceRecord> records;
    for (const auto& row : read_tsv(path, 3)) {
        if (is_header(row)) continue;
        PreferenceRecord r;
        r.rater_id = row[0];
        r.item_id = row[1];
        r.question = row[2];
        if (row.size() > 3) r.choice = row[3];
        records.push_back(std::move(r));
    }
    return records;
}

std::string ratings_report(const std::vector<RatingRecord>& records) {
    // item -> metric -> mean score over raters
    std::map<std::string, std::map<std::string, std::pair<double, int>>> sums;
    for (const RatingRecord& r : records) {
        auto& cell = sums[r.item_id][r.metric];
        cell.first += r.score;
        cell.second += 1;
    }
    std::vector<std::string> items;
    for (const auto& [item, metrics] : sums) items.push_back(item);

    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    out << "metric";
    for (const std::string& item : items) out << '\t' << item;
    out << '\n';

    std::map<std::string, std::map<std::string, double>> means;
    for (const std::string& metric : metric_names()) {
        out << metric;
        for (const std::string& item : items) {
            auto it = sums[item].find(metric);
            if (it == sums[item].end()) {
                out << "\t-";
            } else {
                const double mean = it->second.first / it->second.second;
                means[item][metric] = mean;
                out << '\t' << mean;
            }
        }
        out << '\n';
    }
    auto emit_row = [&](const char* name, auto getter) {
        out << name;
        for (const std::string& item : items) {
            if (means[item].size() != metric_names().size()) {
                out << "\t-";
                continue;
            }
            out << '\t' << getter(means[item]);
        }
        out << '\n';
    };
    emit_row("insightfulness", [](const std::map<std::string, double>& m) {
        return insight_trust_scores(m).insightfulness;
    });
    emit_row("trustworthiness", [](const std::map<std::string, double>& m) {
        return insight_trust_scores(m).trustworthiness;
    });
    emit_row("total_score",
             [](const std::map<std::string, double>& m) { return total_score(m); });
    return out.str();
}

std::string preference_report(const std::vector<PreferenceRecord>& records) {
    const auto summary = preference_summary(records);
    std::ostringstream out;
    out << std::fixed << std::setprecision(1);
    out << "question\tcandidate\tpercent\n";
    for (const auto& [question, candidates] : summary) {
        for (const auto& [candidate, pct] : candidates)
            out << question << '\t' << candidate << '\t' << pct << '\n';
    }
    return out.str();
}

}  // namespace procnet
