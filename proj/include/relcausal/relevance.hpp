#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relcausal/ci.hpp"
#include "relcausal/dataset.hpp"

namespace relcausal {

// Encoding-relevant / decoding-relevant partitions of the feature set, with
// the provenance of the CI decisions that produced them.
struct RelevanceSets {
    std::vector<std::string> encoding_relevant;
    std::vector<std::string> encoding_irrelevant;
    std::vector<std::string> decoding_relevant;
    std::vector<std::string> decoding_irrelevant;
    CiProvenance provenance;

    bool encoding_has(const std::string& feature) const;
    bool decoding_has(const std::string& feature) const;
    std::vector<std::string> all_features() const;  // partition order: relevant first
};

// Features marginally dependent on the condition: { X : X not indep cond }.
std::vector<std::string> encoding_relevant_set(const CiProvider& ci,
                                               const std::string& condition,
                                               const std::vector<std::string>& features);

// Features conditionally dependent on the condition given all remaining
// features: { X : X not indep cond | features \ X }.
std::vector<std::string> decoding_relevant_set(const CiProvider& ci,
                                               const std::string& condition,
                                               const std::vector<std::string>& features);

RelevanceSets compute_relevance_sets(const CiProvider& ci, const std::string& condition,
                                     const std::vector<std::string>& features);

// JSON object: feature name -> {encoding, decoding}, provenance metadata, and
// the per-query decisions (p-values) when they exist.
std::string relevance_sets_to_json(const RelevanceSets& sets,
                                   const std::vector<CiDecision>& decisions = {});

struct RfeParams {
    double ridge_lambda = 1.0;
    int folds = 5;
    int permutations = 200;
    double level = 0.05;
};

struct RfeFeatureResult {
    std::string feature;
    double mean_drop = 0.0;       // baseline accuracy minus mean permuted accuracy
    double null_quantile = 0.0;   // (1-level) quantile of centered permuted drops
    bool relevant = false;
};

struct RfeResult {
    double baseline_accuracy = 0.0;
    std::vector<RfeFeatureResult> features;
    std::vector<std::string> relevant;
    RfeParams params;
};

// Empirical decoding-relevance estimate: a ridge classifier under k-fold
// cross-validation, one feature permuted at a time across held-out folds.
// A feature counts as relevant when its mean accuracy drop exceeds the
// (1-level) quantile of the mean-centered permutation drops (and zero).
RfeResult rfe_decoding_set(const Dataset& data, const std::string& condition,
                           const RfeParams& params = {});

}  // namespace relcausal
