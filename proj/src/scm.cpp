#include "relcausal/scm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "relcausal/errors.hpp"
#include "relcausal/rng.hpp"

namespace relcausal {

std::string experiment_kind_name(ExperimentKind kind) {
    return kind == ExperimentKind::StimulusBased ? "stimulus" : "response";
}

ExperimentKind experiment_kind_from_name(const std::string& name) {
    if (name == "stimulus") return ExperimentKind::StimulusBased;
    if (name == "response") return ExperimentKind::ResponseBased;
    throw InputError("unknown experiment kind '" + name + "'");
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int parent_cardinality(const Scm& scm, const Dag& dag, int parent) {
    const auto& mech = scm.mechanism(dag.name_of(parent));
    if (const auto* cpt = std::get_if<DiscreteCpt>(&mech)) return cpt->cardinality;
    return 0;  // continuous
}

}  // namespace

Scm::Scm(Dag dag, std::map<std::string, Mechanism> mechanisms, ExperimentKind kind)
    : dag_(std::move(dag)), mechanisms_(std::move(mechanisms)), kind_(kind) {
    for (int i = 0; i < dag_.size(); ++i) {
        const std::string& name = dag_.name_of(i);
        auto it = mechanisms_.find(name);
        if (it == mechanisms_.end()) {
            throw InputError("no mechanism for variable '" + name + "'");
        }
        const std::vector<int> parents = dag_.parents(i);
        if (const auto* lg = std::get_if<LinearGaussian>(&it->second)) {
            if (!(lg->noise_variance > 0)) {
                throw InputError("noise variance of '" + name + "' must be positive");
            }
            if (lg->weights.size() != parents.size()) {
                throw InputError("weights of '" + name + "' must cover exactly its parents");
            }
            for (int p : parents) {
                if (!lg->weights.count(dag_.name_of(p))) {
                    throw InputError("missing weight for parent '" + dag_.name_of(p) +
                                     "' of '" + name + "'");
                }
            }
        } else {
            const auto& cpt = std::get<DiscreteCpt>(it->second);
            if (cpt.cardinality < 2) {
                throw InputError("cardinality of '" + name + "' must be >= 2");
            }
            std::size_t rows = 1;
            for (int p : parents) {
                const auto& pm = mechanisms_.find(dag_.name_of(p));
                if (pm == mechanisms_.end() ||
                    !std::holds_alternative<DiscreteCpt>(pm->second)) {
                    throw InputError("discrete variable '" + name +
                                     "' requires discrete parents");
                }
                rows *= std::get<DiscreteCpt>(pm->second).cardinality;
            }
            if (cpt.table.size() != rows) {
                throw InputError("cpt of '" + name + "' needs " + std::to_string(rows) +
                                 " rows");
            }
            for (const auto& row : cpt.table) {
                if (row.size() != static_cast<std::size_t>(cpt.cardinality)) {
                    throw InputError("cpt row width mismatch for '" + name + "'");
                }
                double sum = 0;
                for (double p : row) {
                    if (p < 0) throw InputError("negative probability in cpt of '" + name + "'");
                    sum += p;
                }
                if (std::abs(sum - 1.0) > 1e-9) {
                    throw InputError("cpt row of '" + name + "' does not sum to 1");
                }
            }
        }
    }
    if (mechanisms_.size() != static_cast<std::size_t>(dag_.size())) {
        throw InputError("mechanism map mentions unknown variables");
    }

    if (kind_ == ExperimentKind::StimulusBased) {
        const auto s = dag_.stimulus_index();
        if (!s) throw InputError("stimulus-based model needs a stimulus variable");
        if (dag_.parent_mask(*s) != 0) {
            throw InputError("the stimulus must be a randomized root");
        }
    } else {
        const auto r = dag_.response_index();
        if (!r) throw InputError("response-based model needs a response variable");
        // No response -> feature edges: already a Dag invariant.
    }
}

const Mechanism& Scm::mechanism(const std::string& variable) const {
    auto it = mechanisms_.find(variable);
    if (it == mechanisms_.end()) throw InputError("unknown variable '" + variable + "'");
    return it->second;
}

std::string Scm::condition_name() const {
    const auto idx = kind_ == ExperimentKind::StimulusBased ? dag_.stimulus_index()
                                                            : dag_.response_index();
    return dag_.name_of(*idx);
}

Dataset sample(const Scm& scm, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw InputError("sample size must be >= 1");
    const Dag& dag = scm.dag();
    const int n_vars = dag.size();
    const std::vector<int> topo = dag.topological_order();

    std::vector<CounterRng> streams;
    streams.reserve(n_vars);
    for (int v = 0; v < n_vars; ++v) streams.emplace_back(seed, static_cast<std::uint64_t>(v));

    std::vector<std::vector<double>> values(n_vars, std::vector<double>(n, 0.0));
    std::vector<double> row(n_vars, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (int v : topo) {
            const Mechanism& mech = scm.mechanism(dag.name_of(v));
            if (const auto* lg = std::get_if<LinearGaussian>(&mech)) {
                double x = lg->intercept;
                for (int p : dag.parents(v)) {
                    double pv = row[p];
                    if (parent_cardinality(scm, dag, p) == 2) pv = pv > 0.5 ? 1.0 : -1.0;
                    x += lg->weights.at(dag.name_of(p)) * pv;
                }
                x += std::sqrt(lg->noise_variance) * streams[v].next_normal();
                row[v] = x;
            } else {
                const auto& cpt = std::get<DiscreteCpt>(mech);
                std::size_t config = 0;
                for (int p : dag.parents(v)) {
                    config = config * parent_cardinality(scm, dag, p) +
                             static_cast<std::size_t>(row[p]);
                }
                const std::vector<double>& probs = cpt.table.at(config);
                const double u = streams[v].next_uniform();
                double cum = 0.0;
                int cls = cpt.cardinality - 1;
                for (int k = 0; k < cpt.cardinality; ++k) {
                    cum += probs[k];
                    if (u < cum) { cls = k; break; }
                }
                row[v] = cls;
            }
        }
        for (int v = 0; v < n_vars; ++v) values[v][r] = row[v];
    }

    std::vector<Column> columns;
    for (int v = 0; v < n_vars; ++v) {
        if (dag.role_of(v) == VariableRole::Hidden) continue;
        Column col;
        col.name = dag.name_of(v);
        col.role = dag.role_of(v);
        const Mechanism& mech = scm.mechanism(col.name);
        if (const auto* cpt = std::get_if<DiscreteCpt>(&mech)) {
            col.kind = ColumnKind::Categorical;
            col.cardinality = cpt->cardinality;
        }
        col.values = std::move(values[v]);
        columns.push_back(std::move(col));
    }
    return Dataset(std::move(columns), seed);
}

// ---------------------------------------------------------------------------
// Fixtures

namespace {

Mechanism binary_uniform() { return DiscreteCpt{2, {{0.5, 0.5}}}; }

Mechanism gaussian_root() { return LinearGaussian{{}, 1.0, 0.0}; }

Mechanism linear_child(std::map<std::string, double> weights) {
    return LinearGaussian{std::move(weights), 1.0, 0.0};
}

}  // namespace

std::vector<std::string> canonical_fixture_names() {
    return {"stim-chain", "stim-collider", "resp-fork", "resp-chain",
            "resp-hidden-fig1", "stim-sec41", "resp-sec42"};
}

Scm canonical_fixture(const std::string& name) {
    using R = VariableRole;
    if (name == "stim-chain") {
        Dag dag({{"S", R::Stimulus}, {"X1", R::Feature}, {"X2", R::Feature}},
                {{"S", "X1"}, {"X1", "X2"}});
        return Scm(std::move(dag),
                   {{"S", binary_uniform()},
                    {"X1", linear_child({{"S", 1.0}})},
                    {"X2", linear_child({{"X1", 1.0}})}},
                   ExperimentKind::StimulusBased);
    }
    if (name == "stim-collider" || name == "stim-sec41") {
        Dag dag({{"S", R::Stimulus}, {"X1", R::Feature}, {"X2", R::Feature}},
                {{"S", "X1"}, {"X2", "X1"}});
        return Scm(std::move(dag),
                   {{"S", binary_uniform()},
                    {"X1", linear_child({{"S", 1.0}, {"X2", 1.0}})},
                    {"X2", gaussian_root()}},
                   ExperimentKind::StimulusBased);
    }
    if (name == "resp-fork" || name == "resp-sec42") {
        Dag dag({{"X1", R::Feature}, {"X2", R::Feature}, {"R", R::Response}},
                {{"X1", "X2"}, {"X1", "R"}});
        return Scm(std::move(dag),
                   {{"X1", gaussian_root()},
                    {"X2", linear_child({{"X1", 1.0}})},
                    {"R", linear_child({{"X1", 1.0}})}},
                   ExperimentKind::ResponseBased);
    }
    if (name == "resp-chain") {
        Dag dag({{"X1", R::Feature}, {"X2", R::Feature}, {"R", R::Response}},
                {{"X2", "X1"}, {"X1", "R"}});
        return Scm(std::move(dag),
                   {{"X1", linear_child({{"X2", 1.0}})},
                    {"X2", gaussian_root()},
                    {"R", linear_child({{"X1", 1.0}})}},
                   ExperimentKind::ResponseBased);
    }
    if (name == "resp-hidden-fig1") {
        Dag dag({{"H", R::Hidden}, {"X1", R::Feature}, {"X2", R::Feature}, {"R", R::Response}},
                {{"H", "X1"}, {"H", "X2"}, {"H", "R"}});
        return Scm(std::move(dag),
                   {{"H", gaussian_root()},
                    {"X1", linear_child({{"H", 1.0}})},
                    {"X2", linear_child({{"H", 1.0}})},
                    {"R", linear_child({{"H", 1.0}})}},
                   ExperimentKind::ResponseBased);
    }
    throw InputError("unknown fixture '" + name + "'");
}

// ---------------------------------------------------------------------------
// Oracle provider

OracleCiProvider::OracleCiProvider(Dag dag) : dag_(std::move(dag)) {}

CiVerdict OracleCiProvider::verdict(const std::string& a, const std::string& b,
                                    const std::vector<std::string>& given) const {
    auto check_observed = [&](const std::string& name) {
        if (dag_.role_of(dag_.index_of(name)) == VariableRole::Hidden) {
            throw InputError("oracle query touches hidden variable '" + name + "'");
        }
    };
    check_observed(a);
    check_observed(b);
    for (const auto& g : given) check_observed(g);
    return d_separated(dag_, a, b, given) ? CiVerdict::Independent : CiVerdict::Dependent;
}

std::vector<std::string> OracleCiProvider::observed() const { return dag_.observed_names(); }

CiProvenance OracleCiProvider::provenance() const {
    return {CiProvenance::Kind::Oracle, 0.0, "d-separation on the true graph"};
}

std::unique_ptr<CiProvider> oracle(const Scm& scm) {
    return std::make_unique<OracleCiProvider>(scm.dag());
}

// ---------------------------------------------------------------------------
// SCM spec format

std::string serialize_scm(const Scm& scm) {
    const Dag& dag = scm.dag();
    std::ostringstream out;
    out << "[experiment]\n";
    out << "kind = " << experiment_kind_name(scm.experiment_kind()) << '\n';
    if (dag.stimulus_index() && !dag.randomized_stimulus()) {
        out << "randomized = false\n";
    }
    for (int v = 0; v < dag.size(); ++v) {
        const std::string& name = dag.name_of(v);
        out << '\n' << '[' << name << "]\n";
        out << "role = " << role_name(dag.role_of(v)) << '\n';
        const std::vector<int> parents = dag.parents(v);
        if (!parents.empty()) {
            out << "parents =";
            for (int p : parents) out << ' ' << dag.name_of(p);
            out << '\n';
        }
        const Mechanism& mech = scm.mechanism(name);
        if (const auto* lg = std::get_if<LinearGaussian>(&mech)) {
            out << "mechanism = linear\n";
            if (!parents.empty()) {
                out << "weights =";
                for (int p : parents) {
                    out << ' ' << dag.name_of(p) << ':'
                        << format_double(lg->weights.at(dag.name_of(p)));
                }
                out << '\n';
            }
            out << "noise_variance = " << format_double(lg->noise_variance) << '\n';
            out << "intercept = " << format_double(lg->intercept) << '\n';
        } else {
            const auto& cpt = std::get<DiscreteCpt>(mech);
            out << "mechanism = discrete\n";
            out << "cardinality = " << cpt.cardinality << '\n';
            for (const auto& row : cpt.table) {
                out << "row =";
                for (double p : row) out << ' ' << format_double(p);
                out << '\n';
            }
        }
    }
    return out.str();
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct SpecSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : entries) {
            if (k == key) return &v;
        }
        return nullptr;
    }
    std::string require(const std::string& key) const {
        const std::string* v = find(key);
        if (!v) throw InputError("section [" + name + "] is missing '" + key + "'");
        return *v;
    }
};

double parse_double(const std::string& text) {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw InputError("bad number '" + text + "'");
    return v;
}

std::vector<std::string> split_ws(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

Scm parse_scm(const std::string& text) {
    std::vector<SpecSection> sections;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
            sections.push_back({trim(line.substr(1, line.size() - 2)), {}});
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos || sections.empty()) {
            throw InputError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        sections.back().entries.emplace_back(trim(line.substr(0, eq)),
                                             trim(line.substr(eq + 1)));
    }
    if (sections.empty() || sections.front().name != "experiment") {
        throw InputError("SCM spec must start with an [experiment] section");
    }

    const SpecSection& experiment = sections.front();
    const ExperimentKind kind = experiment_kind_from_name(experiment.require("kind"));
    bool randomized = true;
    if (const std::string* r = experiment.find("randomized")) {
        if (*r == "false") randomized = false;
        else if (*r != "true") throw InputError("randomized must be true or false");
    }

    std::vector<Variable> variables;
    std::vector<Dag::Edge> edges;
    std::map<std::string, Mechanism> mechanisms;
    for (std::size_t i = 1; i < sections.size(); ++i) {
        const SpecSection& sec = sections[i];
        variables.emplace_back(sec.name, role_from_name(sec.require("role")));
        std::vector<std::string> parents;
        if (const std::string* p = sec.find("parents")) parents = split_ws(*p);
        for (const auto& p : parents) edges.emplace_back(p, sec.name);

        const std::string mech_kind = sec.require("mechanism");
        if (mech_kind == "linear") {
            LinearGaussian lg;
            lg.noise_variance = parse_double(sec.require("noise_variance"));
            lg.intercept = parse_double(sec.require("intercept"));
            if (const std::string* w = sec.find("weights")) {
                for (const auto& item : split_ws(*w)) {
                    const std::size_t colon = item.find(':');
                    if (colon == std::string::npos) {
                        throw InputError("weight entry '" + item + "' is not parent:value");
                    }
                    lg.weights[item.substr(0, colon)] = parse_double(item.substr(colon + 1));
                }
            }
            mechanisms[sec.name] = std::move(lg);
        } else if (mech_kind == "discrete") {
            DiscreteCpt cpt;
            cpt.cardinality = static_cast<int>(parse_double(sec.require("cardinality")));
            for (const auto& [k, v] : sec.entries) {
                if (k != "row") continue;
                std::vector<double> row;
                for (const auto& tok : split_ws(v)) row.push_back(parse_double(tok));
                cpt.table.push_back(std::move(row));
            }
            mechanisms[sec.name] = std::move(cpt);
        } else {
            throw InputError("unknown mechanism '" + mech_kind + "'");
        }
    }
    Dag dag(std::move(variables), edges, randomized);
    return Scm(std::move(dag), std::move(mechanisms), kind);
}

Scm load_scm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scm(buf.str());
}

void save_scm(const Scm& scm, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << serialize_scm(scm);
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace relcausal
