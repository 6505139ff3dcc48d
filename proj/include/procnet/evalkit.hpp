#pragma once

#include <map>
#include <string>
#include <vector>

#include "procnet/detect.hpp"

namespace procnet {

// Scoring weights over the eight expert metrics; they sum to 1.
struct MetricWeights {
    double clinical_relevance = 0.25;
    double novelty = 0.20;
    double usefulness = 0.15;
    double specificity = 0.10;
    double coverage = 0.10;
    double completeness = 0.08;
    double intrusiveness = 0.07;
    double redundancy = 0.05;

    std::map<std::string, double> as_map() const;
};

const std::vector<std::string>& metric_names();  // canonical order as above

struct RatingRecord {
    std::string rater_id;
    std::string item_id;
    std::string metric;  // one of the eight names
    int score = 0;       // in {1, 2, 3}
};

struct PreferenceRecord {
    std::string rater_id;
    std::string item_id;
    std::string question;
    std::string choice;  // candidate id; empty = abstention
};

// Gold-label resolution: presence by OR, dimensions by union. Commutative
// and idempotent.
ProcessAnnotation resolve_gold(const ProcessAnnotation& a, const ProcessAnnotation& b);

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

Prf binary_prf(const std::vector<bool>& preds, const std::vector<bool>& golds);

// Micro-averaged over (item, label) pairs across all nine dimensions.
Prf multilabel_prf(const std::vector<DimensionSet>& preds,
                   const std::vector<DimensionSet>& golds);

// kappa = (p_o - p_e) / (1 - p_e); the degenerate single-category case with
// perfect agreement (p_e = 1) is defined as 1.
double cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b);
double cohen_kappa(const std::vector<bool>& a, const std::vector<bool>& b);

std::map<DimensionLabel, double> per_label_kappa(const std::vector<DimensionSet>& a,
                                                 const std::vector<DimensionSet>& b);

double observed_agreement(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Maps the automatic completeness fraction onto the 1..3 rating scale:
// score = 1 + 2 * fraction.
double completeness_score(double fraction);

// Weighted sum of the eight metric scores. Scores may be non-integer (means
// over raters); all eight must be present.
double total_score(const std::map<std::string, double>& ratings,
                   const MetricWeights& weights = {});

struct CategoryScores {
    double insightfulness = 0.0;   // clinical relevance, novelty, usefulness
    double trustworthiness = 0.0;  // specificity, coverage, completeness,
                                   // intrusiveness, redundancy
};

// Category scores as weight-normalized means of the member metrics (the
// member weights renormalized to sum to 1).
CategoryScores insight_trust_scores(const std::map<std::string, double>& ratings,
                                    const MetricWeights& weights = {});

// question -> candidate -> percentage of that question's records. Abstentions
// (empty choice) count in the denominator only, so columns sum to <= 100.
std::map<std::string, std::map<std::string, double>> preference_summary(
    const std::vector<PreferenceRecord>& records);

// Tabular I/O (TSV).
std::vector<RatingRecord> load_ratings_tsv(const std::string& path);
std::vector<PreferenceRecord> load_preferences_tsv(const std::string& path);

// Per-item metric means -> metric/category/total table, items as columns.
std::string ratings_report(const std::vector<RatingRecord>& records);
std::string preference_report(const std::vector<PreferenceRecord>& records);

}  // namespace procnet
