#include <clocale>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relcausal/citest.hpp"
#include "relcausal/dataset.hpp"
#include "relcausal/errors.hpp"
#include "relcausal/graph.hpp"
#include "relcausal/interpret.hpp"
#include "relcausal/relevance.hpp"
#include "relcausal/scm.hpp"

namespace rc = relcausal;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitAnalysis = 3;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw rc::IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw rc::IoError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rc::IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Statement lines: "a b : dep", "a b | z1 z2 : indep"; '#' comments.
std::vector<rc::CiStatement> parse_statements(const std::string& text) {
    std::vector<rc::CiStatement> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const std::size_t colon = line.rfind(':');
        if (colon == std::string::npos) {
            throw rc::InputError("statements line " + std::to_string(line_no) +
                                 ": missing ': dep' or ': indep'");
        }
        const std::string verdict = trim(line.substr(colon + 1));
        rc::CiStatement st;
        if (verdict == "dep" || verdict == "dependent") {
            st.verdict = rc::CiVerdict::Dependent;
        } else if (verdict == "indep" || verdict == "independent") {
            st.verdict = rc::CiVerdict::Independent;
        } else {
            throw rc::InputError("statements line " + std::to_string(line_no) +
                                 ": verdict must be dep or indep");
        }
        std::string head = line.substr(0, colon);
        const std::size_t bar = head.find('|');
        std::string pair_part = bar == std::string::npos ? head : head.substr(0, bar);
        std::istringstream pair_in(pair_part);
        if (!(pair_in >> st.lhs >> st.rhs)) {
            throw rc::InputError("statements line " + std::to_string(line_no) +
                                 ": expected two variable names");
        }
        std::string extra;
        if (pair_in >> extra) {
            throw rc::InputError("statements line " + std::to_string(line_no) +
                                 ": too many names before '|'");
        }
        if (bar != std::string::npos) {
            std::istringstream given_in(head.substr(bar + 1));
            std::string g;
            while (given_in >> g) st.given.push_back(g);
        }
        out.push_back(std::move(st));
    }
    return out;
}

std::vector<rc::Variable> parse_variable_list(const std::string& text) {
    std::vector<rc::Variable> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const std::size_t colon = item.find(':');
        if (colon == std::string::npos) {
            throw rc::InputError("variable '" + item + "' is not name:role");
        }
        out.emplace_back(trim(item.substr(0, colon)),
                         rc::role_from_name(trim(item.substr(colon + 1))));
    }
    if (out.empty()) throw rc::InputError("empty variable list");
    return out;
}

std::string render_edge_line(const rc::Dag& dag) {
    const auto edges = dag.edges();
    if (edges.empty()) return "(no edges)";
    std::string out;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (i) out += ", ";
        out += edges[i].first + " -> " + edges[i].second;
    }
    return out;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const std::string& fixture, const std::string& scm_path, std::size_t n,
                 std::uint64_t seed, const std::string& out_path, bool binarize_all) {
    rc::Scm scm = fixture.empty() ? rc::load_scm(scm_path) : rc::canonical_fixture(fixture);
    rc::Dataset data = rc::sample(scm, n, seed);
    if (binarize_all) data = rc::binarize(data);
    data.save_csv(out_path);
    std::cout << "wrote " << data.n_rows() << " rows, " << data.n_columns()
              << " columns to " << out_path << "\n";
    std::cout << "true graph:\n" << rc::serialize_dag(scm.dag());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
    std::string oracle_fixture;
    std::string oracle_scm;
    std::string data_csv;
    std::string condition;
    double alpha = 0.01;
    bool bonferroni = false;
    bool no_sufficiency = false;
    int max_hidden = 1;
    bool no_combine = false;
    std::string json_out;
    std::string text_out;
    std::optional<std::uint64_t> seed;
};

int cmd_analyze(const AnalyzeOptions& opt) {
    rc::ExperimentKind kind = rc::ExperimentKind::StimulusBased;
    std::string condition;
    std::vector<std::string> features;
    std::unique_ptr<rc::CiProvider> provider;
    std::optional<std::uint64_t> seed = opt.seed;

    if (!opt.oracle_fixture.empty() || !opt.oracle_scm.empty()) {
        rc::Scm scm = opt.oracle_fixture.empty() ? rc::load_scm(opt.oracle_scm)
                                                 : rc::canonical_fixture(opt.oracle_fixture);
        if (!opt.oracle_scm.empty()) {
            std::cerr << "note: oracle mode uses only the graph of '" << opt.oracle_scm
                      << "'; mechanisms are ignored\n";
        }
        kind = scm.experiment_kind();
        condition = scm.condition_name();
        for (const auto& name : scm.dag().observed_names()) {
            if (name != condition) features.push_back(name);
        }
        provider = rc::oracle(scm);
    } else {
        rc::Dataset data = rc::Dataset::load_csv(opt.data_csv);
        if (!opt.condition.empty()) {
            condition = opt.condition;
        } else if (auto c = data.condition_name()) {
            condition = *c;
        } else {
            throw rc::InputError("dataset has no stimulus/response column; use --condition");
        }
        const rc::Column& cond = data.column(condition);
        kind = cond.role == rc::VariableRole::Response ? rc::ExperimentKind::ResponseBased
                                                       : rc::ExperimentKind::StimulusBased;
        for (const auto& col : data.columns()) {
            if (col.name != condition) features.push_back(col.name);
        }
        if (data.seed()) seed = data.seed();
        const int divisor =
            opt.bonferroni ? std::max<int>(1, 2 * static_cast<int>(features.size())) : 1;
        provider = rc::ci_provider(std::move(data), opt.alpha, divisor);
    }

    rc::Assumptions assumptions;
    assumptions.sufficiency = !opt.no_sufficiency;
    assumptions.max_hidden = opt.max_hidden;

    rc::InterpretationReport report =
        rc::analyze(*provider, kind, condition, features, assumptions, !opt.no_combine);
    report.seed = seed;

    std::cout << report.to_text();
    if (!opt.json_out.empty()) write_file(opt.json_out, report.to_json());
    if (!opt.text_out.empty()) write_file(opt.text_out, report.to_text());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// demo

struct DemoExpectation {
    std::string fixture;
    std::string scenario;
    std::vector<std::string> enc;
    std::vector<std::string> dec;
    // feature -> expected combined claim
    std::vector<std::pair<std::string, rc::Claim>> claims;
    bool sufficiency = true;
    std::string note;
};

int cmd_demo() {
    using rc::Claim;
    const std::vector<DemoExpectation> table = {
        {"stim-chain",
         "stimulus drives X1, X1 drives X2",
         {"X1", "X2"},
         {"X1"},
         {{"X1", Claim::GenuineEffect}, {"X2", Claim::GenuineEffect}},
         true,
         "X2 is an actual effect yet irrelevant for decoding"},
        {"stim-collider",
         "stimulus and X2 both drive X1",
         {"X1"},
         {"X1", "X2"},
         {{"X1", Claim::GenuineEffect}, {"X2", Claim::NotEffect}},
         true,
         "X2 is decoding-relevant without being an effect"},
        {"resp-fork",
         "X1 drives X2 and the response",
         {"X1", "X2"},
         {"X1"},
         {{"X1", Claim::DirectCause}, {"X2", Claim::PotentialCause}},
         true,
         "X2 is encoding-relevant without being a cause"},
        {"resp-chain",
         "X2 drives X1, X1 drives the response",
         {"X1", "X2"},
         {"X1"},
         {{"X1", Claim::DirectCause}, {"X2", Claim::PotentialCause}},
         true,
         "X2 is an actual cause yet irrelevant for decoding"},
        {"resp-hidden-fig1",
         "a latent source drives X1, X2 and the response",
         {"X1", "X2"},
         {"X1", "X2"},
         {{"X1", Claim::PotentialCause}, {"X2", Claim::PotentialCause}},
         false,
         "neither feature causes the response; all dependence is confounding"},
        {"stim-sec41",
         "deduction: encoding and decoding disagree on X2",
         {"X1"},
         {"X1", "X2"},
         {{"X1", Claim::GenuineEffect}, {"X2", Claim::NotEffect}},
         true,
         "unique consistent structure; X2 -> X1 is deducible"},
        {"resp-sec42",
         "deduction: decoding drops X2",
         {"X1", "X2"},
         {"X1"},
         {{"X1", Claim::DirectCause}, {"X2", Claim::PotentialCause}},
         true,
         "two consistent structures share X1 -> R; X2 stays ambiguous"},
    };

    bool all_ok = true;
    for (const auto& expect : table) {
        const rc::Scm scm = rc::canonical_fixture(expect.fixture);
        const auto provider = rc::oracle(scm);
        const std::string condition = scm.condition_name();
        std::vector<std::string> features;
        for (const auto& name : scm.dag().observed_names()) {
            if (name != condition) features.push_back(name);
        }
        rc::Assumptions assumptions;
        assumptions.sufficiency = expect.sufficiency;
        const rc::InterpretationReport report = rc::analyze(
            *provider, scm.experiment_kind(), condition, features, assumptions);

        bool ok = report.relevance.encoding_relevant == expect.enc &&
                  report.relevance.decoding_relevant == expect.dec;
        for (const auto& [feature, claim] : expect.claims) {
            bool found = false;
            for (const auto& fc : report.combined_claims) {
                if (fc.feature == feature) {
                    found = fc.claim == claim;
                    break;
                }
            }
            ok &= found;
        }
        all_ok &= ok;

        auto render_set = [](const std::vector<std::string>& names) {
            if (names.empty()) return std::string("{}");
            std::string s = "{";
            for (std::size_t i = 0; i < names.size(); ++i) {
                if (i) s += ",";
                s += names[i];
            }
            return s + "}";
        };
        std::cout << (ok ? "[ ok ] " : "[FAIL] ") << expect.fixture << "\n";
        std::cout << "       scenario:  " << expect.scenario << "\n";
        std::cout << "       true graph: " << render_edge_line(scm.dag()) << "\n";
        std::cout << "       enc set " << render_set(report.relevance.encoding_relevant)
                  << "  dec set " << render_set(report.relevance.decoding_relevant) << "\n";
        std::cout << "       claims:   ";
        for (std::size_t i = 0; i < report.combined_claims.size(); ++i) {
            const auto& fc = report.combined_claims[i];
            if (i) std::cout << ", ";
            std::cout << fc.feature << "=" << rc::claim_name(fc.claim);
        }
        std::cout << "\n";
        if (report.combine_ran) {
            std::cout << "       structures: " << report.structures.size()
                      << ", shared edges: ";
            if (report.deduced_edges.empty()) std::cout << "(none)";
            for (std::size_t i = 0; i < report.deduced_edges.size(); ++i) {
                if (i) std::cout << ", ";
                std::cout << report.deduced_edges[i].first << " -> "
                          << report.deduced_edges[i].second;
            }
            std::cout << "\n";
        }
        std::cout << "       note:      " << expect.note << "\n\n";
    }
    if (!all_ok) {
        std::cerr << "demo: at least one fixture deviates from its expected result\n";
        return kExitAnalysis;
    }
    std::cout << "all fixtures match their expected relevance sets and claims\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// enumerate

int cmd_enumerate(const std::string& vars_text, const std::string& statements_path,
                  const std::vector<std::string>& randomized_roots,
                  const std::vector<std::string>& no_outgoing,
                  bool sufficiency, std::optional<int> max_hidden) {
    const std::vector<rc::Variable> variables = parse_variable_list(vars_text);
    std::vector<rc::CiStatement> statements;
    if (!statements_path.empty()) statements = parse_statements(read_file(statements_path));

    std::vector<rc::StructuralConstraint> constraints;
    for (const auto& v : randomized_roots) {
        constraints.push_back(rc::StructuralConstraint::randomized_root(v));
    }
    for (const auto& v : no_outgoing) {
        constraints.push_back(rc::StructuralConstraint::no_outgoing_to_features(v));
    }
    if (sufficiency && max_hidden) {
        throw rc::InputError("--sufficiency and --max-hidden are mutually exclusive");
    }
    if (sufficiency) constraints.push_back(rc::StructuralConstraint::causal_sufficiency());
    if (max_hidden) constraints.push_back(rc::StructuralConstraint::max_hidden(*max_hidden));

    const std::vector<rc::Dag> dags =
        rc::consistent_structures(variables, statements, constraints);
    std::cout << "consistent structures: " << dags.size() << "\n";
    for (std::size_t i = 0; i < dags.size(); ++i) {
        std::cout << "#" << (i + 1) << ": " << render_edge_line(dags[i]) << "\n";
    }
    if (!dags.empty()) {
        std::cout << "shared edges: ";
        const auto shared = rc::shared_edges(dags);
        if (shared.empty()) std::cout << "(none)";
        for (std::size_t i = 0; i < shared.size(); ++i) {
            if (i) std::cout << ", ";
            std::cout << shared[i].first << " -> " << shared[i].second;
        }
        std::cout << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// calibrate

int cmd_calibrate(const std::string& test, int trials, double alpha, std::uint64_t seed,
                  int conditioning) {
    const rc::CalibrationResult res =
        rc::calibrate_test(test, trials, alpha, seed, conditioning);
    std::cout << test << ": " << res.rejections << "/" << res.trials
              << " rejections, type-I error " << res.rate << " (95% CI [" << res.ci_low
              << ", " << res.ci_high << "])\n";
    std::cout << "acceptance band [" << alpha / 2 << ", " << 2 * alpha << "]: "
              << (res.within_band ? "inside" : "OUTSIDE") << "\n";
    return res.within_band ? kExitOk : kExitAnalysis;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"causal interpretation of encoding/decoding feature relevance"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "sample a dataset from a fixture or SCM spec");
    std::string sim_fixture, sim_scm, sim_out;
    std::size_t sim_n = 1000;
    std::uint64_t sim_seed = 1;
    bool sim_binarize = false;
    auto* fix_opt = simulate->add_option("--fixture", sim_fixture, "canonical fixture name");
    simulate->add_option("--scm", sim_scm, "SCM spec file")->excludes(fix_opt);
    simulate->add_option("-n,--rows", sim_n, "sample size")->required();
    simulate->add_option("--seed", sim_seed, "random seed")->required();
    simulate->add_option("-o,--out", sim_out, "output CSV path")->required();
    simulate->add_flag("--binarize", sim_binarize, "threshold numeric columns to binary");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "relevance sets, claims and structure deduction");
    AnalyzeOptions aopt;
    auto* a_fix = analyze->add_option("--oracle-fixture", aopt.oracle_fixture,
                                      "fixture analyzed with its exact CI oracle");
    auto* a_scm = analyze->add_option("--oracle-scm", aopt.oracle_scm,
                                      "SCM spec analyzed with its exact CI oracle");
    auto* a_csv = analyze->add_option("--data", aopt.data_csv, "dataset CSV path");
    a_fix->excludes(a_scm)->excludes(a_csv);
    a_scm->excludes(a_csv);
    analyze->add_option("--condition", aopt.condition, "condition column override");
    analyze->add_option("--alpha", aopt.alpha, "significance level for data mode");
    analyze->add_flag("--bonferroni", aopt.bonferroni,
                      "divide alpha by the per-run relevance query count");
    analyze->add_flag("--no-sufficiency", aopt.no_sufficiency,
                      "drop the no-hidden-confounders assumption");
    analyze->add_option("--max-hidden", aopt.max_hidden,
                        "latent-root bound when sufficiency is off");
    analyze->add_flag("--no-combine", aopt.no_combine, "skip structure deduction");
    analyze->add_option("-o,--out", aopt.json_out, "write the JSON report here");
    analyze->add_option("--text", aopt.text_out, "write the text report here");
    std::int64_t analyze_seed = -1;
    analyze->add_option("--seed", analyze_seed, "seed recorded in the report");

    // demo
    app.add_subcommand("demo", "run all canonical fixtures end-to-end and self-verify");

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "structures consistent with CI statements");
    std::string en_vars, en_statements;
    std::vector<std::string> en_randomized, en_no_outgoing;
    bool en_sufficiency = false;
    int en_max_hidden_value = -1;
    enumerate->add_option("--vars", en_vars, "comma list of name:role")->required();
    enumerate->add_option("--statements", en_statements,
                          "file of 'a b [| z...] : dep|indep' lines");
    enumerate->add_option("--randomized-root", en_randomized, "no edges into this variable");
    enumerate->add_option("--no-outgoing-to-features", en_no_outgoing,
                          "no edges from this variable into features");
    enumerate->add_flag("--sufficiency", en_sufficiency, "assume no hidden confounders");
    enumerate->add_option("--max-hidden", en_max_hidden_value,
                          "also search structures with up to this many latent roots");

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "type-I error of a CI test under the null");
    std::string cal_test;
    int cal_trials = 2000;
    double cal_alpha = 0.01;
    std::uint64_t cal_seed = 1;
    int cal_given = 0;
    calibrate->add_option("test", cal_test, "fisher-z | g-test")->required();
    calibrate->add_option("--trials", cal_trials, "number of null trials");
    calibrate->add_option("--alpha", cal_alpha, "significance level");
    calibrate->add_option("--seed", cal_seed, "random seed");
    calibrate->add_option("--given", cal_given, "independent conditioning columns per trial");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            if (sim_fixture.empty() && sim_scm.empty()) {
                throw rc::InputError("simulate needs --fixture or --scm");
            }
            return cmd_simulate(sim_fixture, sim_scm, sim_n, sim_seed, sim_out, sim_binarize);
        }
        if (analyze->parsed()) {
            if (aopt.oracle_fixture.empty() && aopt.oracle_scm.empty() &&
                aopt.data_csv.empty()) {
                throw rc::InputError(
                    "analyze needs one of --oracle-fixture, --oracle-scm, --data");
            }
            if (analyze_seed >= 0) aopt.seed = static_cast<std::uint64_t>(analyze_seed);
            return cmd_analyze(aopt);
        }
        if (app.get_subcommand("demo")->parsed()) return cmd_demo();
        if (enumerate->parsed()) {
            std::optional<int> mh;
            if (en_max_hidden_value >= 0) mh = en_max_hidden_value;
            return cmd_enumerate(en_vars, en_statements, en_randomized, en_no_outgoing,
                                 en_sufficiency, mh);
        }
        if (calibrate->parsed()) {
            return cmd_calibrate(cal_test, cal_trials, cal_alpha, cal_seed, cal_given);
        }
    } catch (const rc::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const rc::FaithfulnessError& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        if (!e.conflicting_statements.empty()) {
            std::cerr << "conflicting statements: " << e.conflicting_statements << "\n";
        }
        return kExitAnalysis;
    } catch (const rc::CapacityError& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return kExitAnalysis;
    } catch (const rc::DegenerateDataError& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return kExitAnalysis;
    } catch (const rc::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
