#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "opsum/corpus.hpp"

namespace opsum {

struct DomainScores {
    std::optional<double> aspect_f1;
    std::optional<double> map;
    std::optional<double> p_at_5;
    std::optional<double> rouge1;
    std::optional<double> rouge2;
    std::optional<double> rougeL;
    std::size_t aspect_segments = 0;
    std::size_t salience_products = 0;
    std::size_t rouge_products = 0;
};

// Per-domain scores plus their unweighted mean.
struct EvalReport {
    std::map<std::string, DomainScores> domains;
    DomainScores average() const;
    std::string to_json() const;
    std::string to_table() const;
};

// Micro-averaged F1 over (segment, aspect) decisions pooled across all
// segments and aspects. Every gold segment must have a prediction.
double aspect_f1_micro(const std::map<std::string, std::set<std::string>>& predictions,
                       const std::vector<AspectAnnotation>& gold);

// Mean of precision-at-rank over the relevant items; 0 when nothing is
// relevant. Relevant items missing from the ranking count against it.
double average_precision(const std::vector<std::string>& ranking,
                         const std::set<std::string>& relevant);

// |top-k intersect relevant| / k; the denominator stays k for short rankings.
double precision_at_k(const std::vector<std::string>& ranking,
                      const std::set<std::string>& relevant, std::size_t k = 5);

// Rankings are compared against each annotator's binary labels separately;
// scores average over annotators, then over products.
struct SalienceEvalResult {
    double map = 0.0;
    double p_at_5 = 0.0;
    std::size_t products = 0;
};
SalienceEvalResult salience_eval(
    const std::map<std::string, std::vector<std::string>>& rankings_per_product,
    const std::vector<SalienceAnnotation>& annotations, const Corpus& corpus);

// Clipped n-gram overlap F1 against each reference; the multi-reference
// score is the max. Candidates and references are plain lowercase
// whitespace tokens.
double rouge_n(const std::vector<std::string>& candidate,
               const std::vector<std::vector<std::string>>& references, std::size_t n);

// Longest-common-subsequence F1, max over references.
double rouge_l(const std::vector<std::string>& candidate,
               const std::vector<std::vector<std::string>>& references);

std::vector<std::string> rouge_tokenize(const std::string& text);

// Leave-one-out agreement between reference summaries: each one is scored
// as a candidate against the rest and the scores are averaged.
struct RougeTriple {
    double rouge1 = 0.0;
    double rouge2 = 0.0;
    double rougeL = 0.0;
};
RougeTriple interannotator_rouge(const std::vector<std::vector<std::string>>& reference_tokens);

}  // namespace opsum
