#include "relcausal/interpret.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "relcausal/errors.hpp"

namespace relcausal {

using ordered_json = nlohmann::ordered_json;

ModelType model_type(ExperimentKind kind, bool decoding) {
    if (kind == ExperimentKind::StimulusBased) {
        return decoding ? ModelType::AntiCausalDecoding : ModelType::CausalEncoding;
    }
    return decoding ? ModelType::CausalDecoding : ModelType::AntiCausalEncoding;
}

std::string model_type_name(ModelType type) {
    switch (type) {
        case ModelType::CausalEncoding: return "causal-encoding";
        case ModelType::AntiCausalDecoding: return "anti-causal-decoding";
        case ModelType::AntiCausalEncoding: return "anti-causal-encoding";
        case ModelType::CausalDecoding: return "causal-decoding";
    }
    throw InputError("unknown model type");
}

std::string model_rule_id(ModelType type) {
    switch (type) {
        case ModelType::CausalEncoding: return "A";
        case ModelType::AntiCausalDecoding: return "B";
        case ModelType::AntiCausalEncoding: return "C";
        case ModelType::CausalDecoding: return "D";
    }
    throw InputError("unknown model type");
}

std::string claim_name(Claim claim) {
    switch (claim) {
        case Claim::GenuineEffect: return "genuine-effect";
        case Claim::PotentialEffect: return "potential-effect";
        case Claim::NotEffect: return "not-effect";
        case Claim::DirectCause: return "direct-cause";
        case Claim::PotentialCause: return "potential-cause";
        case Claim::NotCause: return "not-cause";
        case Claim::NoClaim: return "no-claim";
    }
    throw InputError("unknown claim");
}

std::vector<FeatureClaim> classify_encoding(ExperimentKind kind, const RelevanceSets& sets) {
    const ModelType type = model_type(kind, false);
    const std::string rule = model_rule_id(type);
    std::vector<FeatureClaim> out;
    for (const auto& f : sets.all_features()) {
        FeatureClaim fc;
        fc.feature = f;
        fc.rule = rule;
        const bool relevant = sets.encoding_has(f);
        if (kind == ExperimentKind::StimulusBased) {
            if (relevant) {
                fc.claim = Claim::GenuineEffect;
                fc.justification = "[" + rule +
                                   "] dependent on the randomized stimulus; only a causal "
                                   "path from the stimulus can produce that dependence";
            } else {
                fc.claim = Claim::NotEffect;
                fc.justification = "[" + rule +
                                   "] independent of the randomized stimulus; no causal "
                                   "path from the stimulus reaches it";
            }
        } else {
            if (relevant) {
                fc.claim = Claim::PotentialCause;
                fc.justification = "[" + rule +
                                   "] dependent on the response; it may drive the response "
                                   "or merely share a cause with it";
            } else {
                fc.claim = Claim::NotCause;
                fc.justification = "[" + rule +
                                   "] independent of the response; it cannot be one of its "
                                   "causes";
            }
        }
        out.push_back(std::move(fc));
    }
    return out;
}

std::vector<FeatureClaim> classify_decoding(ExperimentKind kind, const RelevanceSets& sets) {
    const ModelType type = model_type(kind, true);
    const std::string rule = model_rule_id(type);
    std::vector<FeatureClaim> out;
    for (const auto& f : sets.all_features()) {
        FeatureClaim fc;
        fc.feature = f;
        fc.rule = rule;
        const bool relevant = sets.decoding_has(f);
        if (kind == ExperimentKind::StimulusBased) {
            if (relevant) {
                fc.claim = Claim::PotentialEffect;
                fc.justification = "[" + rule +
                                   "] improves decoding of the stimulus beyond the other "
                                   "features; it need not be an actual effect";
            } else {
                fc.claim = Claim::NoClaim;
                fc.justification = "[" + rule +
                                   "] adds no decoding information given the other "
                                   "features; it may still be an effect of the stimulus";
            }
        } else {
            if (relevant) {
                fc.claim = Claim::PotentialCause;
                fc.justification = "[" + rule +
                                   "] improves decoding of the response beyond the other "
                                   "features; it need not be an actual cause";
            } else {
                fc.claim = Claim::NoClaim;
                fc.justification = "[" + rule +
                                   "] adds no decoding information given the other "
                                   "features; it may still be a cause of the response";
            }
        }
        out.push_back(std::move(fc));
    }
    return out;
}

// ---------------------------------------------------------------------------
// combine

namespace {

std::vector<CiStatement> provider_statements(const CiProvider& ci,
                                             const std::vector<std::string>& vars) {
    std::vector<CiStatement> out;
    const int k = static_cast<int>(vars.size());
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            std::vector<std::string> rest;
            for (int r = 0; r < k; ++r) {
                if (r != i && r != j) rest.push_back(vars[r]);
            }
            const std::uint32_t n_subsets = 1u << rest.size();
            for (std::uint32_t bits = 0; bits < n_subsets; ++bits) {
                std::vector<std::string> given;
                for (std::size_t r = 0; r < rest.size(); ++r) {
                    if ((bits >> r) & 1u) given.push_back(rest[r]);
                }
                out.push_back(ci.query(vars[i], vars[j], given));
            }
        }
    }
    return out;
}

// Statements whose single removal restores a nonempty consistent set.
std::string conflicting_statements(const std::vector<Variable>& variables,
                                   const std::vector<CiStatement>& statements,
                                   const std::vector<StructuralConstraint>& constraints) {
    std::ostringstream out;
    bool found = false;
    for (std::size_t skip = 0; skip < statements.size(); ++skip) {
        std::vector<CiStatement> reduced;
        for (std::size_t i = 0; i < statements.size(); ++i) {
            if (i != skip) reduced.push_back(statements[i]);
        }
        if (!consistent_structures(variables, reduced, constraints).empty()) {
            if (found) out << "; ";
            out << statements[skip].render();
            found = true;
        }
    }
    if (!found) {
        for (std::size_t i = 0; i < statements.size(); ++i) {
            if (i) out << "; ";
            out << statements[i].render();
        }
    }
    return out.str();
}

}  // namespace

InterpretationReport combine(ExperimentKind kind, const RelevanceSets& sets,
                             const CiProvider& ci, const Assumptions& assumptions) {
    if (!assumptions.faithfulness) {
        throw InputError("combine requires the faithfulness assumption");
    }
    const std::vector<std::string> observed = ci.observed();
    std::string condition;
    std::vector<std::string> features = sets.all_features();
    // Preserve provider order for features; condition is the observed
    // variable that is not a feature.
    {
        std::vector<std::string> ordered;
        for (const auto& name : observed) {
            if (std::find(features.begin(), features.end(), name) != features.end()) {
                ordered.push_back(name);
            } else if (condition.empty()) {
                condition = name;
            } else {
                throw InputError("provider exposes more variables than condition + features");
            }
        }
        if (condition.empty()) throw InputError("provider exposes no condition variable");
        features = std::move(ordered);
    }
    if (static_cast<int>(features.size()) + 1 > kEnumerationCap) {
        throw CapacityError("combine supports at most " + std::to_string(kEnumerationCap) +
                            " variables including the condition");
    }

    std::vector<Variable> variables;
    variables.emplace_back(condition, kind == ExperimentKind::StimulusBased
                                          ? VariableRole::Stimulus
                                          : VariableRole::Response);
    for (const auto& f : features) variables.emplace_back(f, VariableRole::Feature);

    std::vector<StructuralConstraint> constraints;
    if (kind == ExperimentKind::StimulusBased) {
        constraints.push_back(StructuralConstraint::randomized_root(condition));
    } else {
        constraints.push_back(StructuralConstraint::no_outgoing_to_features(condition));
    }
    if (assumptions.sufficiency) {
        constraints.push_back(StructuralConstraint::causal_sufficiency());
    } else {
        constraints.push_back(StructuralConstraint::max_hidden(assumptions.max_hidden));
    }

    std::vector<std::string> vars_flat;
    for (const auto& [name, role] : variables) vars_flat.push_back(name);
    const std::vector<CiStatement> statements = provider_statements(ci, vars_flat);

    std::vector<Dag> structures = consistent_structures(variables, statements, constraints);
    if (structures.empty()) {
        throw FaithfulnessError(
            "no causal structure is consistent with the observed (in)dependences",
            conflicting_statements(variables, statements, constraints));
    }

    InterpretationReport report;
    report.kind = kind;
    report.condition = condition;
    report.features = features;
    report.assumptions = assumptions;
    report.relevance = sets;
    report.encoding_claims = classify_encoding(kind, sets);
    report.decoding_claims = classify_decoding(kind, sets);
    report.combine_ran = true;
    report.deduced_edges = shared_edges(structures);
    report.ci_decisions = ci.decisions();

    const std::string rule =
        kind == ExperimentKind::StimulusBased ? "A,B" : "C,D";
    for (const auto& f : features) {
        bool path_in_all = true, path_in_none = true;
        bool edge_to_condition_in_all = true;
        for (const Dag& d : structures) {
            const bool path_from_cond = d.has_directed_path(condition, f);
            const bool edge_to_cond = d.has_edge(f, condition);
            const bool path_to_cond = d.has_directed_path(f, condition);
            if (kind == ExperimentKind::StimulusBased) {
                path_in_all &= path_from_cond;
                path_in_none &= !path_from_cond;
            } else {
                path_in_all &= path_to_cond;
                path_in_none &= !path_to_cond;
                edge_to_condition_in_all &= edge_to_cond;
            }
        }
        FeatureClaim fc;
        fc.feature = f;
        fc.rule = rule;
        if (kind == ExperimentKind::StimulusBased) {
            if (path_in_all) {
                fc.claim = Claim::GenuineEffect;
                fc.justification = "[" + rule +
                                   "] a directed path from the stimulus reaches it in "
                                   "every consistent structure";
            } else if (path_in_none) {
                fc.claim = Claim::NotEffect;
                fc.justification = "[" + rule +
                                   "] no consistent structure has a directed path from "
                                   "the stimulus to it";
            } else {
                fc.claim = Claim::PotentialEffect;
                fc.justification = "[" + rule +
                                   "] a directed path from the stimulus exists in some "
                                   "but not all consistent structures; ambiguous";
            }
        } else {
            if (edge_to_condition_in_all) {
                fc.claim = Claim::DirectCause;
                fc.justification = "[" + rule +
                                   "] an edge into the response is present in every "
                                   "consistent structure";
            } else if (path_in_none) {
                fc.claim = Claim::NotCause;
                fc.justification = "[" + rule +
                                   "] no consistent structure has a directed path from "
                                   "it to the response";
            } else {
                fc.claim = Claim::PotentialCause;
                fc.justification = "[" + rule +
                                   "] its causal role differs across the consistent "
                                   "structures; ambiguous";
            }
        }
        report.combined_claims.push_back(std::move(fc));
    }
    report.structures = std::move(structures);
    return report;
}

InterpretationReport analyze(const CiProvider& ci, ExperimentKind kind,
                             const std::string& condition,
                             const std::vector<std::string>& features,
                             const Assumptions& assumptions, bool want_combine) {
    const RelevanceSets sets = compute_relevance_sets(ci, condition, features);
    const bool within_cap = static_cast<int>(features.size()) + 1 <= kEnumerationCap;
    if (want_combine && within_cap) {
        InterpretationReport report = combine(kind, sets, ci, assumptions);
        return report;
    }
    InterpretationReport report;
    report.kind = kind;
    report.condition = condition;
    report.features = features;
    report.assumptions = assumptions;
    report.relevance = sets;
    report.encoding_claims = classify_encoding(kind, sets);
    report.decoding_claims = classify_decoding(kind, sets);
    report.combine_ran = false;
    report.ci_decisions = ci.decisions();
    return report;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string edge_text(const Dag::Edge& e) { return e.first + " -> " + e.second; }

ordered_json claims_json(const std::vector<FeatureClaim>& claims) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : claims) {
        arr.push_back({{"feature", c.feature},
                       {"claim", claim_name(c.claim)},
                       {"rule", c.rule},
                       {"justification", c.justification}});
    }
    return arr;
}

void render_claims(std::ostream& out, const std::string& heading,
                   const std::vector<FeatureClaim>& claims) {
    out << heading << ":\n";
    if (claims.empty()) out << "  (none)\n";
    for (const auto& c : claims) {
        out << "  " << c.feature << ": " << claim_name(c.claim) << "  "
            << c.justification << '\n';
    }
}

void render_names(std::ostream& out, const std::vector<std::string>& names) {
    if (names.empty()) {
        out << "(none)";
        return;
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out << ", ";
        out << names[i];
    }
}

}  // namespace

std::string InterpretationReport::to_json() const {
    ordered_json j;
    j["schema"] = "relcausal-report-v1";
    j["experiment_kind"] = experiment_kind_name(kind);
    j["condition"] = condition;
    j["features"] = features;
    j["assumptions"] = {{"faithfulness", assumptions.faithfulness},
                        {"causal_sufficiency", assumptions.sufficiency},
                        {"max_hidden", assumptions.sufficiency ? 0 : assumptions.max_hidden}};

    ordered_json prov;
    prov["kind"] =
        relevance.provenance.kind == CiProvenance::Kind::Oracle ? "oracle" : "statistical";
    if (relevance.provenance.kind == CiProvenance::Kind::Statistical) {
        prov["alpha"] = relevance.provenance.alpha;
    }
    prov["detail"] = relevance.provenance.detail;

    ordered_json per_feature = ordered_json::object();
    for (const auto& f : features) {
        per_feature[f] = {{"encoding", relevance.encoding_has(f)},
                          {"decoding", relevance.decoding_has(f)}};
    }
    j["relevance"] = {{"provenance", prov},
                      {"encoding_relevant", relevance.encoding_relevant},
                      {"encoding_irrelevant", relevance.encoding_irrelevant},
                      {"decoding_relevant", relevance.decoding_relevant},
                      {"decoding_irrelevant", relevance.decoding_irrelevant},
                      {"per_feature", per_feature}};

    ordered_json claims;
    claims["encoding"] = claims_json(encoding_claims);
    claims["decoding"] = claims_json(decoding_claims);
    if (combine_ran) claims["combined"] = claims_json(combined_claims);
    j["claims"] = claims;

    if (combine_ran) {
        ordered_json dags = ordered_json::array();
        for (const auto& d : structures) {
            ordered_json edges = ordered_json::array();
            for (const auto& e : d.edges()) edges.push_back(edge_text(e));
            ordered_json entry;
            entry["edges"] = edges;
            std::vector<std::string> latents;
            for (int v = 0; v < d.size(); ++v) {
                if (d.role_of(v) == VariableRole::Hidden) latents.push_back(d.name_of(v));
            }
            if (!latents.empty()) entry["hidden"] = latents;
            dags.push_back(entry);
        }
        ordered_json shared = ordered_json::array();
        for (const auto& e : deduced_edges) shared.push_back(edge_text(e));
        j["structures"] = {{"count", structures.size()},
                           {"dags", dags},
                           {"shared_edges", shared}};
    }

    if (!ci_decisions.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& d : ci_decisions) {
            arr.push_back({{"lhs", d.statement.lhs},
                           {"rhs", d.statement.rhs},
                           {"given", d.statement.given},
                           {"verdict", d.statement.independent() ? "independent" : "dependent"},
                           {"statistic", d.statistic},
                           {"p_value", d.p_value},
                           {"alpha", d.alpha},
                           {"method", ci_method_name(d.method)}});
        }
        j["ci_decisions"] = arr;
    }
    if (seed) j["seed"] = *seed;
    return j.dump(2) + "\n";
}

std::string InterpretationReport::to_text() const {
    std::ostringstream out;
    out << "experiment kind: " << experiment_kind_name(kind) << '\n';
    out << "condition: " << condition << '\n';
    out << "features: ";
    render_names(out, features);
    out << '\n';
    out << "assumptions: faithfulness=" << (assumptions.faithfulness ? "yes" : "no")
        << ", causal sufficiency=" << (assumptions.sufficiency ? "yes" : "no");
    if (!assumptions.sufficiency) out << " (max hidden " << assumptions.max_hidden << ")";
    out << '\n';

    out << "relevance ("
        << (relevance.provenance.kind == CiProvenance::Kind::Oracle ? "oracle" : "statistical");
    if (relevance.provenance.kind == CiProvenance::Kind::Statistical) {
        out << ", alpha=" << relevance.provenance.alpha;
    }
    out << ", " << relevance.provenance.detail << "):\n";
    out << "  encoding relevant:   ";
    render_names(out, relevance.encoding_relevant);
    out << '\n';
    out << "  encoding irrelevant: ";
    render_names(out, relevance.encoding_irrelevant);
    out << '\n';
    out << "  decoding relevant:   ";
    render_names(out, relevance.decoding_relevant);
    out << '\n';
    out << "  decoding irrelevant: ";
    render_names(out, relevance.decoding_irrelevant);
    out << '\n';

    render_claims(out, "claims (encoding model)", encoding_claims);
    render_claims(out, "claims (decoding model)", decoding_claims);
    if (combine_ran) {
        render_claims(out, "claims (combined, structure-level)", combined_claims);
        out << "consistent structures (" << structures.size() << "):\n";
        for (std::size_t i = 0; i < structures.size(); ++i) {
            out << "  #" << (i + 1) << ": ";
            const auto edges = structures[i].edges();
            if (edges.empty()) out << "(no edges)";
            for (std::size_t e = 0; e < edges.size(); ++e) {
                if (e) out << ", ";
                out << edge_text(edges[e]);
            }
            out << '\n';
        }
        out << "shared edges: ";
        std::vector<std::string> shared;
        for (const auto& e : deduced_edges) shared.push_back(edge_text(e));
        render_names(out, shared);
        out << '\n';
    }
    if (!ci_decisions.empty()) {
        out << "ci decisions (" << ci_decisions.size() << "):\n";
        for (const auto& d : ci_decisions) {
            out << "  " << d.statement.render() << "  p=" << d.p_value
                << " stat=" << d.statistic << " alpha=" << d.alpha << " ["
                << ci_method_name(d.method) << "]\n";
        }
    }
    if (seed) out << "seed: " << *seed << '\n';
    return out.str();
}

}  // namespace relcausal
