// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "relcausal/citest.hpp"
#include "relcausal/errors.hpp"
#include "relcausal/graph.hpp"
#include "relcausal/interpret.hpp"
#include "relcausal/relevance.hpp"
#include "relcausal/scm.hpp"
#include "test_helpers.hpp"

using namespace relcausal;
namespace fs = std::filesystem;

namespace {

int failures = 0;

class Criterion {
public:
    Criterion(int number, std::string title, double second_limit)
        : number_(number), title_(std::move(title)), limit_(second_limit),
          start_(std::chrono::steady_clock::now()) {}

    void check(bool condition, const std::string& what) {
        if (!condition) {
            problems_.push_back(what);
        }
    }

    void finish() {
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (elapsed > limit_) {
            problems_.push_back("runtime " + std::to_string(elapsed) + "s exceeds " +
                                std::to_string(limit_) + "s");
        }
        if (problems_.empty()) {
            std::printf("[PASS] criterion %d: %s (%.2fs)\n", number_, title_.c_str(), elapsed);
        } else {
            ++failures;
            std::printf("[FAIL] criterion %d: %s (%.2fs)\n", number_, title_.c_str(), elapsed);
            for (const auto& p : problems_) std::printf("       - %s\n", p.c_str());
        }
        std::fflush(stdout);
    }

private:
    int number_;
    std::string title_;
    double limit_;
    std::chrono::steady_clock::time_point start_;
    std::vector<std::string> problems_;
};

struct FixtureContext {
    Scm scm;
    std::string condition;
    std::vector<std::string> features;
};

FixtureContext fixture_context(const std::string& name) {
    Scm scm = canonical_fixture(name);
    const std::string condition = scm.condition_name();
    std::vector<std::string> features;
    for (const auto& v : scm.dag().observed_names()) {
        if (v != condition) features.push_back(v);
    }
    return {std::move(scm), condition, features};
}

RelevanceSets oracle_sets(const FixtureContext& ctx) {
    const auto provider = oracle(ctx.scm);
    return compute_relevance_sets(*provider, ctx.condition, ctx.features);
}

std::string join(const std::vector<std::string>& names) {
    std::string out = "{";
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ",";
        out += names[i];
    }
    return out + "}";
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RELCAUSAL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------------

void criterion_1_scenarios() {
    Criterion c(1, "worked-scenario replication in oracle mode", 1.0);
    const std::vector<std::tuple<std::string, std::vector<std::string>,
                                 std::vector<std::string>>> expected{
        {"stim-chain", {"X1", "X2"}, {"X1"}},
        {"stim-collider", {"X1"}, {"X1", "X2"}},
        {"resp-fork", {"X1", "X2"}, {"X1"}},
        {"resp-chain", {"X1", "X2"}, {"X1"}},
        {"resp-hidden-fig1", {"X1", "X2"}, {"X1", "X2"}},
        {"stim-sec41", {"X1"}, {"X1", "X2"}},
        {"resp-sec42", {"X1", "X2"}, {"X1"}},
    };
    for (const auto& [name, enc, dec] : expected) {
        const RelevanceSets sets = oracle_sets(fixture_context(name));
        c.check(sets.encoding_relevant == enc,
                name + ": encoding set " + join(sets.encoding_relevant) + " != " + join(enc));
        c.check(sets.decoding_relevant == dec,
                name + ": decoding set " + join(sets.decoding_relevant) + " != " + join(dec));
    }
    // resp-chain: X2 absent from the decoding set by name
    const RelevanceSets chain = oracle_sets(fixture_context("resp-chain"));
    c.check(!chain.decoding_has("X2"), "resp-chain: X2 unexpectedly decoding-relevant");
    c.check(run_cli("demo") == 0, "cmd_demo exited nonzero");
    c.finish();
}

void criterion_2_deductions() {
    Criterion c(2, "structure deductions from the two observation patterns", 1.0);
    {
        std::vector<Variable> vars{{"S", VariableRole::Stimulus},
                                   {"X1", VariableRole::Feature},
                                   {"X2", VariableRole::Feature}};
        const auto dags = consistent_structures(
            vars,
            {{"S", "X1", {}, CiVerdict::Dependent},
             {"S", "X2", {}, CiVerdict::Independent},
             {"S", "X2", {"X1"}, CiVerdict::Dependent}},
            {StructuralConstraint::randomized_root("S"),
             StructuralConstraint::causal_sufficiency()});
        c.check(dags.size() == 1,
                "stimulus pattern: expected 1 structure, got " + std::to_string(dags.size()));
        if (dags.size() == 1) {
            c.check(dags[0].has_edge("S", "X1") && dags[0].has_edge("X2", "X1") &&
                        dags[0].edge_count() == 2,
                    "stimulus pattern: wrong structure");
        }
    }
    {
        std::vector<Variable> vars{{"X1", VariableRole::Feature},
                                   {"X2", VariableRole::Feature},
                                   {"R", VariableRole::Response}};
        const auto dags = consistent_structures(
            vars,
            {{"X1", "R", {}, CiVerdict::Dependent},
             {"X2", "R", {}, CiVerdict::Dependent},
             {"X2", "R", {"X1"}, CiVerdict::Independent}},
            {StructuralConstraint::no_outgoing_to_features("R"),
             StructuralConstraint::causal_sufficiency()});
        c.check(dags.size() == 2,
                "response pattern: expected 2 structures, got " + std::to_string(dags.size()));
        if (dags.size() == 2) {
            const auto shared = shared_edges(dags);
            c.check(shared.size() == 1 && shared[0] == Dag::Edge{"X1", "R"},
                    "response pattern: shared edge is not X1 -> R");
        }
    }
    c.finish();
}

void criterion_3_graph_oracles() {
    Criterion c(3, "d-separation route agreement and labeled-DAG counts", 30.0);
    const std::vector<std::uint64_t> expected{1, 3, 25, 543};
    for (int n = 1; n <= 4; ++n) {
        const auto brute = testutil::brute_force_dags(n);
        c.check(brute.size() == expected[n - 1],
                "brute-force count n=" + std::to_string(n));
        std::vector<Variable> vars;
        for (int i = 0; i < n; ++i) {
            vars.emplace_back("V" + std::to_string(i), VariableRole::Feature);
        }
        c.check(count_dags(vars) == expected[n - 1],
                "enumerated count n=" + std::to_string(n));
        if (n < 2) continue;
        std::size_t mismatches = 0;
        for (const auto& edges : brute) {
            const Dag dag = testutil::dag_from_edges(vars, edges);
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    std::vector<int> rest;
                    for (int r = 0; r < n; ++r) {
                        if (r != i && r != j) rest.push_back(r);
                    }
                    for (std::uint32_t bits = 0; bits < (1u << rest.size()); ++bits) {
                        std::vector<std::string> given;
                        for (std::size_t k = 0; k < rest.size(); ++k) {
                            if ((bits >> k) & 1u) given.push_back(vars[rest[k]].first);
                        }
                        const std::string& a = vars[i].first;
                        const std::string& b = vars[j].first;
                        mismatches += d_separated(dag, a, b, given) !=
                                      d_separated_moral(dag, a, b, given);
                    }
                }
            }
        }
        c.check(mismatches == 0, "route mismatches at n=" + std::to_string(n) + ": " +
                                     std::to_string(mismatches));
    }
    c.finish();
}

void check_report_against_graph(Criterion& c, const Dag& dag, const InterpretationReport& r,
                                const std::string& label) {
    const bool stimulus = r.kind == ExperimentKind::StimulusBased;
    for (const auto& fc : r.combined_claims) {
        switch (fc.claim) {
            case Claim::GenuineEffect:
                c.check(dag.has_directed_path(r.condition, fc.feature),
                        label + ": genuine-effect without a true path to " + fc.feature);
                break;
            case Claim::NotEffect:
                c.check(!dag.has_directed_path(r.condition, fc.feature),
                        label + ": not-effect despite a true path to " + fc.feature);
                break;
            case Claim::DirectCause:
                c.check(dag.has_edge(fc.feature, r.condition),
                        label + ": direct-cause without a true edge from " + fc.feature);
                break;
            case Claim::NotCause:
                c.check(!dag.has_directed_path(fc.feature, r.condition),
                        label + ": not-cause despite a true path from " + fc.feature);
                break;
            default:
                break;
        }
    }
    for (const auto& fc : r.decoding_claims) {
        c.check(fc.claim != Claim::NotEffect && fc.claim != Claim::NotCause,
                label + ": decoding claim denies a causal link");
    }
    // encoding-level soundness
    for (const auto& fc : r.encoding_claims) {
        if (stimulus && fc.claim == Claim::GenuineEffect) {
            c.check(dag.has_directed_path(r.condition, fc.feature),
                    label + ": encoding genuine-effect unsound for " + fc.feature);
        }
        if (stimulus && fc.claim == Claim::NotEffect) {
            c.check(!dag.has_directed_path(r.condition, fc.feature),
                    label + ": encoding not-effect unsound for " + fc.feature);
        }
        if (!stimulus && fc.claim == Claim::NotCause) {
            c.check(!dag.has_directed_path(fc.feature, r.condition),
                    label + ": encoding not-cause unsound for " + fc.feature);
        }
    }
}

void criterion_4_soundness_sweep() {
    Criterion c(4, "pipeline soundness over every small generating graph", 120.0);
    // Stimulus experiments: S plus 1..3 features, S a randomized root.
    for (int n_feat = 1; n_feat <= 3; ++n_feat) {
        std::vector<Variable> vars{{"S", VariableRole::Stimulus}};
        std::vector<std::string> features;
        for (int i = 1; i <= n_feat; ++i) {
            vars.emplace_back("X" + std::to_string(i), VariableRole::Feature);
            features.push_back("X" + std::to_string(i));
        }
        for (const auto& dag :
             enumerate_dags(vars, {StructuralConstraint::randomized_root("S")})) {
            const OracleCiProvider provider(dag);
            const auto report =
                analyze(provider, ExperimentKind::StimulusBased, "S", features, {});
            check_report_against_graph(c, dag, report, "stimulus sweep");
        }
    }
    // Response experiments: R plus 1..3 features.
    for (int n_feat = 1; n_feat <= 3; ++n_feat) {
        std::vector<Variable> vars;
        std::vector<std::string> features;
        for (int i = 1; i <= n_feat; ++i) {
            vars.emplace_back("X" + std::to_string(i), VariableRole::Feature);
            features.push_back("X" + std::to_string(i));
        }
        vars.emplace_back("R", VariableRole::Response);
        for (const auto& dag : enumerate_dags(vars, {})) {
            const OracleCiProvider provider(dag);
            const auto report =
                analyze(provider, ExperimentKind::ResponseBased, "R", features, {});
            check_report_against_graph(c, dag, report, "response sweep");
        }
    }
    // Latent-confounder generating graphs: 2 features + response + one hidden
    // root with any child set; analysis declares sufficiency off.
    {
        std::vector<Variable> obs{{"X1", VariableRole::Feature},
                                  {"X2", VariableRole::Feature},
                                  {"R", VariableRole::Response}};
        Assumptions no_suff;
        no_suff.sufficiency = false;
        no_suff.max_hidden = 1;
        for (const auto& base : enumerate_dags(obs, {})) {
            for (std::uint32_t childset = 0; childset < 8; ++childset) {
                std::vector<Variable> vars = obs;
                vars.emplace_back("H", VariableRole::Hidden);
                std::vector<Dag::Edge> edges = base.edges();
                for (int b = 0; b < 3; ++b) {
                    if ((childset >> b) & 1u) edges.emplace_back("H", obs[b].first);
                }
                const Dag dag(vars, edges);
                const OracleCiProvider provider(dag);
                const auto report = analyze(provider, ExperimentKind::ResponseBased, "R",
                                            {"X1", "X2"}, no_suff);
                check_report_against_graph(c, dag, report, "latent sweep");
            }
        }
    }
    c.finish();
}

void criterion_5_statistical_consistency() {
    Criterion c(5, "statistical relevance and rfe agree with the oracle", 300.0);
    for (const auto& name : canonical_fixture_names()) {
        const FixtureContext ctx = fixture_context(name);
        const auto truth_provider = oracle(ctx.scm);
        const RelevanceSets truth = oracle_sets(ctx);
        const std::vector<std::string> all_vars = ctx.scm.dag().observed_names();
        int set_matches = 0;
        int rfe_matches = 0;
        std::size_t query_cells = 0, query_agreements = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const Dataset data = sample(ctx.scm, 20000, seed);
            const DataCiProvider provider(data, 0.01);
            const RelevanceSets got =
                compute_relevance_sets(provider, ctx.condition, ctx.features);
            set_matches += got.encoding_relevant == truth.encoding_relevant &&
                           got.decoding_relevant == truth.decoding_relevant;

            // oracle-vs-provider agreement over every (pair, subset) query
            for (std::size_t i = 0; i < all_vars.size(); ++i) {
                for (std::size_t j = i + 1; j < all_vars.size(); ++j) {
                    std::vector<std::string> rest;
                    for (std::size_t r = 0; r < all_vars.size(); ++r) {
                        if (r != i && r != j) rest.push_back(all_vars[r]);
                    }
                    for (std::uint32_t bits = 0; bits < (1u << rest.size()); ++bits) {
                        std::vector<std::string> given;
                        for (std::size_t k = 0; k < rest.size(); ++k) {
                            if ((bits >> k) & 1u) given.push_back(rest[k]);
                        }
                        ++query_cells;
                        query_agreements +=
                            provider.verdict(all_vars[i], all_vars[j], given) ==
                            truth_provider->verdict(all_vars[i], all_vars[j], given);
                    }
                }
            }

            const bool stimulus = ctx.scm.experiment_kind() == ExperimentKind::StimulusBased;
            const Dataset rfe_data = stimulus ? data : binarize(data, {ctx.condition});
            const auto rfe = rfe_decoding_set(rfe_data, ctx.condition);
            rfe_matches += rfe.relevant == truth.decoding_relevant;
        }
        c.check(set_matches >= 19, name + ": statistical sets matched the oracle in only " +
                                       std::to_string(set_matches) + "/20 seeds");
        c.check(rfe_matches >= 18, name + ": rfe matched the decoding sets in only " +
                                       std::to_string(rfe_matches) + "/20 seeds");
        c.check(query_agreements * 100 >= query_cells * 95,
                name + ": oracle-vs-provider query agreement below 95% (" +
                    std::to_string(query_agreements) + "/" + std::to_string(query_cells) +
                    ")");
    }
    c.finish();
}

void criterion_6_calibration() {
    Criterion c(6, "type-I error of both tests in [0.005, 0.02] at alpha 0.01", 120.0);
    const CalibrationResult fisher = calibrate_test("fisher-z", 2000, 0.01, 1);
    c.check(fisher.rate >= 0.005 && fisher.rate <= 0.02,
            "fisher-z rate " + std::to_string(fisher.rate));
    const CalibrationResult fisher_cond = calibrate_test("fisher-z", 2000, 0.01, 1, 1);
    c.check(fisher_cond.rate >= 0.005 && fisher_cond.rate <= 0.02,
            "conditional fisher-z rate " + std::to_string(fisher_cond.rate));
    const CalibrationResult g = calibrate_test("g-test", 2000, 0.01, 1, 1);
    c.check(g.rate >= 0.005 && g.rate <= 0.02,
            "conditional g-test rate " + std::to_string(g.rate));
    const CalibrationResult g_marginal = calibrate_test("g-test", 2000, 0.01, 1, 0);
    c.check(g_marginal.rate >= 0.005 && g_marginal.rate <= 0.02,
            "marginal g-test rate " + std::to_string(g_marginal.rate));
    c.finish();
}

void criterion_7_determinism() {
    Criterion c(7, "seeded runs produce byte-identical csv and json", 60.0);
    const fs::path dir = fs::temp_directory_path() / "relcausal_acceptance";
    fs::create_directories(dir);
    const fs::path csv_a = dir / "a.csv";
    const fs::path csv_b = dir / "b.csv";
    c.check(run_cli("simulate --fixture stim-collider -n 5000 --seed 13 -o " +
                    csv_a.string()) == 0,
            "simulate run 1 failed");
    c.check(run_cli("simulate --fixture stim-collider -n 5000 --seed 13 -o " +
                    csv_b.string()) == 0,
            "simulate run 2 failed");
    c.check(slurp(csv_a) == slurp(csv_b), "csv outputs differ between seeded runs");

    const fs::path json_a = dir / "a.json";
    const fs::path json_b = dir / "b.json";
    c.check(run_cli("analyze --data " + csv_a.string() + " -o " + json_a.string()) == 0,
            "analyze run 1 failed");
    c.check(run_cli("analyze --data " + csv_a.string() + " -o " + json_b.string()) == 0,
            "analyze run 2 failed");
    c.check(!slurp(json_a).empty() && slurp(json_a) == slurp(json_b),
            "json reports differ between runs");

    const fs::path json_c = dir / "c.json";
    c.check(run_cli("analyze --oracle-fixture resp-sec42 -o " + json_c.string()) == 0,
            "oracle analyze failed");
    const std::string first = slurp(json_c);
    c.check(run_cli("analyze --oracle-fixture resp-sec42 -o " + json_c.string()) == 0,
            "oracle analyze rerun failed");
    c.check(first == slurp(json_c), "oracle json differs between runs");
    c.finish();
}

}  // namespace

int main() {
    criterion_1_scenarios();
    criterion_2_deductions();
    criterion_3_graph_oracles();
    criterion_4_soundness_sweep();
    criterion_5_statistical_consistency();
    criterion_6_calibration();
    criterion_7_determinism();
    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
}
