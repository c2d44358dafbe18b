#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relcausal/ci.hpp"
#include "relcausal/graph.hpp"
#include "relcausal/relevance.hpp"
#include "relcausal/scm.hpp"

namespace relcausal {

// The four model families, by modeling direction and experiment kind.
enum class ModelType {
    CausalEncoding,      // stimulus-based encoding
    AntiCausalDecoding,  // stimulus-based decoding
    AntiCausalEncoding,  // response-based encoding
    CausalDecoding,      // response-based decoding
};

ModelType model_type(ExperimentKind kind, bool decoding);
std::string model_type_name(ModelType type);
// Rule ids: A = causal encoding, B = anti-causal decoding,
// C = anti-causal encoding, D = causal decoding.
std::string model_rule_id(ModelType type);

enum class Claim {
    GenuineEffect,
    PotentialEffect,
    NotEffect,
    DirectCause,
    PotentialCause,
    NotCause,
    NoClaim,
};

std::string claim_name(Claim claim);

struct FeatureClaim {
    std::string feature;
    Claim claim = Claim::NoClaim;
    std::string rule;
    std::string justification;
};

struct Assumptions {
    bool faithfulness = true;
    bool sufficiency = true;
    int max_hidden = 1;  // latent-root search bound when sufficiency is off
};

struct InterpretationReport {
    ExperimentKind kind = ExperimentKind::StimulusBased;
    std::string condition;
    std::vector<std::string> features;
    Assumptions assumptions;
    RelevanceSets relevance;
    std::vector<FeatureClaim> encoding_claims;
    std::vector<FeatureClaim> decoding_claims;
    bool combine_ran = false;
    std::vector<FeatureClaim> combined_claims;  // only when combine_ran
    std::vector<Dag> structures;                // consistent set, when combine_ran
    std::vector<Dag::Edge> deduced_edges;       // shared_edges of the set
    std::vector<CiDecision> ci_decisions;       // statistical providers only
    std::optional<std::uint64_t> seed;

    std::string to_json() const;  // deterministic, schema relcausal-report-v1
    std::string to_text() const;  // mirrors the JSON one-to-one
};

// Rules A / C: encoding relevance speaks to effects of a randomized stimulus
// and (negatively) to causes of a response.
std::vector<FeatureClaim> classify_encoding(ExperimentKind kind, const RelevanceSets& sets);

// Rules B / D: decoding relevance yields potential effects/causes only, and
// decoding irrelevance yields no claim at all.
std::vector<FeatureClaim> classify_decoding(ExperimentKind kind, const RelevanceSets& sets);

// Exhausts the CI provider over condition + features, filters all structures
// consistent with those statements under the experiment's constraints, and
// strengthens the per-feature claims where every structure agrees. Throws
// FaithfulnessError when no structure explains the statements.
InterpretationReport combine(ExperimentKind kind, const RelevanceSets& sets,
                             const CiProvider& ci, const Assumptions& assumptions);

// Full pipeline: relevance sets, both claim tables, and combine when the
// variable count is within the enumeration cap (otherwise the report carries
// the per-model claims only).
InterpretationReport analyze(const CiProvider& ci, ExperimentKind kind,
                             const std::string& condition,
                             const std::vector<std::string>& features,
                             const Assumptions& assumptions,
                             bool want_combine = true);

}  // namespace relcausal
