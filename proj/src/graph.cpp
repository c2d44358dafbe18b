#include "relcausal/graph.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <sstream>

#include "relcausal/errors.hpp"

namespace relcausal {

std::string role_name(VariableRole role) {
    switch (role) {
        case VariableRole::Stimulus: return "stimulus";
        case VariableRole::Response: return "response";
        case VariableRole::Feature: return "feature";
        case VariableRole::Hidden: return "hidden";
    }
    throw InputError("unknown variable role");
}

VariableRole role_from_name(const std::string& name) {
    if (name == "stimulus") return VariableRole::Stimulus;
    if (name == "response") return VariableRole::Response;
    if (name == "feature") return VariableRole::Feature;
    if (name == "hidden") return VariableRole::Hidden;
    throw InputError("unknown variable role '" + name + "'");
}

namespace {

void validate_variable_name(const std::string& name) {
    if (name.empty()) throw InputError("variable name must not be empty");
    for (char c : name) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ',' || c == ':') {
            throw InputError("variable name '" + name + "' contains a reserved character");
        }
    }
    if (name.find("->") != std::string::npos) {
        throw InputError("variable name '" + name + "' contains '->'");
    }
}

}  // namespace

Dag::Dag(std::shared_ptr<const VariableTable> table, std::vector<std::uint32_t> parents,
         bool randomized_stimulus)
    : table_(std::move(table)), parents_(std::move(parents)),
      randomized_stimulus_(randomized_stimulus) {}

Dag::Dag(std::vector<Variable> variables, const std::vector<Edge>& edges,
         bool randomized_stimulus)
    : randomized_stimulus_(randomized_stimulus) {
    const int n = static_cast<int>(variables.size());
    if (n < 1) throw InputError("a Dag needs at least one variable");
    if (n > kMaxDagVariables) throw InputError("too many variables for a Dag");

    auto table = std::make_shared<VariableTable>();
    table->names.reserve(variables.size());
    table->roles.reserve(variables.size());
    int n_stimulus = 0, n_response = 0;
    for (const auto& [name, role] : variables) {
        validate_variable_name(name);
        if (std::find(table->names.begin(), table->names.end(), name) != table->names.end()) {
            throw InputError("duplicate variable name '" + name + "'");
        }
        table->names.push_back(name);
        table->roles.push_back(role);
        n_stimulus += role == VariableRole::Stimulus;
        n_response += role == VariableRole::Response;
    }
    if (n_stimulus > 1) throw InputError("at most one stimulus variable is allowed");
    if (n_response > 1) throw InputError("at most one response variable is allowed");
    table_ = std::move(table);

    parents_.assign(n, 0);
    for (const auto& [parent, child] : edges) {
        const int p = index_of(parent);
        const int c = index_of(child);
        if (p == c) throw InputError("self-loop on '" + parent + "'");
        parents_[c] |= 1u << p;
    }

    for (int c = 0; c < n; ++c) {
        const VariableRole child_role = role_of(c);
        if (child_role == VariableRole::Hidden && parents_[c] != 0) {
            throw InputError("hidden variable '" + name_of(c) + "' must be a root");
        }
        if (child_role == VariableRole::Stimulus && randomized_stimulus_ && parents_[c] != 0) {
            throw InputError("randomized stimulus '" + name_of(c) + "' cannot have parents");
        }
        std::uint32_t mask = parents_[c];
        while (mask) {
            const int p = std::countr_zero(mask);
            mask &= mask - 1;
            if (role_of(p) == VariableRole::Response && child_role == VariableRole::Feature) {
                throw InputError("edge from response '" + name_of(p) +
                                 "' into feature '" + name_of(c) + "' is not allowed");
            }
            if (role_of(p) == VariableRole::Hidden && child_role == VariableRole::Hidden) {
                throw InputError("hidden variables cannot be parents of hidden variables");
            }
        }
    }

    topological_order();  // throws on cycles
}

std::vector<Variable> Dag::variables() const {
    std::vector<Variable> out;
    out.reserve(table_->names.size());
    for (std::size_t i = 0; i < table_->names.size(); ++i) {
        out.emplace_back(table_->names[i], table_->roles[i]);
    }
    return out;
}

int Dag::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < table_->names.size(); ++i) {
        if (table_->names[i] == name) return static_cast<int>(i);
    }
    throw InputError("unknown variable '" + name + "'");
}

const std::string& Dag::name_of(int idx) const { return table_->names.at(idx); }

VariableRole Dag::role_of(int idx) const { return table_->roles.at(idx); }

bool Dag::has_variable(const std::string& name) const {
    return std::find(table_->names.begin(), table_->names.end(), name) != table_->names.end();
}

bool Dag::has_edge(int parent, int child) const {
    return (parents_[child] >> parent) & 1u;
}

bool Dag::has_edge(const std::string& parent, const std::string& child) const {
    return has_edge(index_of(parent), index_of(child));
}

std::vector<int> Dag::parents(int child) const {
    std::vector<int> out;
    std::uint32_t mask = parents_[child];
    while (mask) {
        out.push_back(std::countr_zero(mask));
        mask &= mask - 1;
    }
    return out;
}

std::vector<int> Dag::children(int parent) const {
    std::vector<int> out;
    for (int c = 0; c < size(); ++c) {
        if (has_edge(parent, c)) out.push_back(c);
    }
    return out;
}

std::vector<Dag::Edge> Dag::edges() const {
    std::vector<Edge> out;
    for (int p = 0; p < size(); ++p) {
        for (int c = 0; c < size(); ++c) {
            if (has_edge(p, c)) out.emplace_back(name_of(p), name_of(c));
        }
    }
    return out;
}

std::size_t Dag::edge_count() const {
    std::size_t count = 0;
    for (int c = 0; c < size(); ++c) count += std::popcount(parents_[c]);
    return count;
}

bool Dag::has_directed_path(int from, int to) const {
    std::uint32_t frontier = 0;
    for (int c = 0; c < size(); ++c) {
        if (has_edge(from, c)) frontier |= 1u << c;
    }
    std::uint32_t seen = frontier;
    while (frontier) {
        if ((seen >> to) & 1u) return true;
        std::uint32_t next = 0;
        while (frontier) {
            const int v = std::countr_zero(frontier);
            frontier &= frontier - 1;
            for (int c = 0; c < size(); ++c) {
                if (has_edge(v, c) && !((seen >> c) & 1u)) next |= 1u << c;
            }
        }
        seen |= next;
        frontier = next;
    }
    return (seen >> to) & 1u;
}

bool Dag::has_directed_path(const std::string& from, const std::string& to) const {
    return has_directed_path(index_of(from), index_of(to));
}

std::vector<int> Dag::observed_indices() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i) {
        if (role_of(i) != VariableRole::Hidden) out.push_back(i);
    }
    return out;
}

std::vector<std::string> Dag::observed_names() const {
    std::vector<std::string> out;
    for (int i : observed_indices()) out.push_back(name_of(i));
    return out;
}

std::optional<int> Dag::stimulus_index() const {
    for (int i = 0; i < size(); ++i) {
        if (role_of(i) == VariableRole::Stimulus) return i;
    }
    return std::nullopt;
}

std::optional<int> Dag::response_index() const {
    for (int i = 0; i < size(); ++i) {
        if (role_of(i) == VariableRole::Response) return i;
    }
    return std::nullopt;
}

std::vector<int> Dag::topological_order() const {
    const int n = size();
    std::vector<int> in_degree(n, 0);
    for (int c = 0; c < n; ++c) in_degree[c] = std::popcount(parents_[c]);
    std::vector<int> order;
    order.reserve(n);
    std::vector<bool> emitted(n, false);
    for (int step = 0; step < n; ++step) {
        int next = -1;
        for (int v = 0; v < n; ++v) {
            if (!emitted[v] && in_degree[v] == 0) { next = v; break; }
        }
        if (next < 0) throw InputError("edge set contains a cycle");
        emitted[next] = true;
        order.push_back(next);
        for (int c = 0; c < n; ++c) {
            if (has_edge(next, c)) --in_degree[c];
        }
    }
    return order;
}

bool Dag::same_variables(const Dag& other) const {
    return table_->names == other.table_->names && table_->roles == other.table_->roles;
}

// ---------------------------------------------------------------------------
// CiStatement

std::string CiStatement::render() const {
    std::string out = lhs;
    out += independent() ? " _||_ " : " _/||_ ";
    out += rhs;
    if (!given.empty()) {
        out += " | ";
        for (std::size_t i = 0; i < given.size(); ++i) {
            if (i) out += ", ";
            out += given[i];
        }
    }
    return out;
}

StructuralConstraint StructuralConstraint::randomized_root(std::string v) {
    return {Kind::RandomizedRoot, std::move(v), 0};
}
StructuralConstraint StructuralConstraint::no_outgoing_to_features(std::string v) {
    return {Kind::NoOutgoingToFeatures, std::move(v), 0};
}
StructuralConstraint StructuralConstraint::causal_sufficiency() {
    return {Kind::CausalSufficiency, "", 0};
}
StructuralConstraint StructuralConstraint::max_hidden(int count) {
    if (count < 0) throw InputError("MaxHidden count must be nonnegative");
    return {Kind::MaxHidden, "", count};
}

// ---------------------------------------------------------------------------
// d-separation

namespace {

struct Query {
    int a;
    int b;
    std::uint32_t given;
};

Query resolve_query(const Dag& dag, const std::string& a, const std::string& b,
                    const std::vector<std::string>& given) {
    Query q{dag.index_of(a), dag.index_of(b), 0};
    if (q.a == q.b) throw InputError("d-separation query needs two distinct variables");
    for (const auto& g : given) {
        const int gi = dag.index_of(g);
        if (gi == q.a || gi == q.b) {
            throw InputError("conditioning set must not contain '" + g + "'");
        }
        q.given |= 1u << gi;
    }
    return q;
}

std::uint32_t ancestors_of(const Dag& dag, std::uint32_t targets) {
    // targets plus every ancestor of a target
    std::uint32_t result = targets;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < dag.size(); ++v) {
            if ((result >> v) & 1u) {
                const std::uint32_t add = dag.parent_mask(v) & ~result;
                if (add) { result |= add; changed = true; }
            }
        }
    }
    return result;
}

}  // namespace

bool d_separated_idx(const Dag& dag, int a, int b, std::uint32_t given) {
    const int n = dag.size();
    const std::uint32_t anc_given = ancestors_of(dag, given);

    // Reachability over active trails; state = (node, arrived-from-child?).
    std::uint32_t visited_up = 0, visited_down = 0;
    std::vector<std::pair<int, bool>> stack;  // bool up = arrived from a child
    stack.emplace_back(a, true);
    while (!stack.empty()) {
        auto [y, up] = stack.back();
        stack.pop_back();
        std::uint32_t& visited = up ? visited_up : visited_down;
        if ((visited >> y) & 1u) continue;
        visited |= 1u << y;
        const bool in_given = (given >> y) & 1u;
        if (!in_given && y == b) return false;
        if (up && !in_given) {
            std::uint32_t pmask = dag.parent_mask(y);
            while (pmask) {
                stack.emplace_back(std::countr_zero(pmask), true);
                pmask &= pmask - 1;
            }
            for (int c = 0; c < n; ++c) {
                if (dag.has_edge(y, c)) stack.emplace_back(c, false);
            }
        } else if (!up) {
            if (!in_given) {
                for (int c = 0; c < n; ++c) {
                    if (dag.has_edge(y, c)) stack.emplace_back(c, false);
                }
            }
            if ((anc_given >> y) & 1u) {
                std::uint32_t pmask = dag.parent_mask(y);
                while (pmask) {
                    stack.emplace_back(std::countr_zero(pmask), true);
                    pmask &= pmask - 1;
                }
            }
        }
    }
    return true;
}

bool d_separated(const Dag& dag, const std::string& a, const std::string& b,
                 const std::vector<std::string>& given) {
    const Query q = resolve_query(dag, a, b, given);
    return d_separated_idx(dag, q.a, q.b, q.given);
}

bool d_separated_moral(const Dag& dag, const std::string& a, const std::string& b,
                       const std::vector<std::string>& given) {
    const Query q = resolve_query(dag, a, b, given);
    const int n = dag.size();
    const std::uint32_t relevant = (1u << q.a) | (1u << q.b) | q.given;
    const std::uint32_t anc = ancestors_of(dag, relevant);

    // Moralize the ancestral subgraph: undirected parent-child links plus
    // links between co-parents.
    std::vector<std::uint32_t> adj(n, 0);
    for (int v = 0; v < n; ++v) {
        if (!((anc >> v) & 1u)) continue;
        const std::uint32_t pmask = dag.parent_mask(v) & anc;
        std::uint32_t m1 = pmask;
        while (m1) {
            const int p = std::countr_zero(m1);
            m1 &= m1 - 1;
            adj[p] |= 1u << v;
            adj[v] |= 1u << p;
            std::uint32_t m2 = m1;
            while (m2) {
                const int p2 = std::countr_zero(m2);
                m2 &= m2 - 1;
                adj[p] |= 1u << p2;
                adj[p2] |= 1u << p;
            }
        }
    }

    // Undirected reachability from a to b avoiding the conditioning set.
    std::uint32_t frontier = 1u << q.a;
    std::uint32_t seen = frontier;
    while (frontier) {
        std::uint32_t next = 0;
        while (frontier) {
            const int v = std::countr_zero(frontier);
            frontier &= frontier - 1;
            next |= adj[v] & ~seen & ~q.given;
        }
        if ((next >> q.b) & 1u) return false;
        seen |= next;
        frontier = next;
    }
    return true;
}

// ---------------------------------------------------------------------------
// implied_ci_statements

std::vector<CiStatement> implied_ci_statements(const Dag& dag,
                                               const std::vector<std::string>& observed) {
    std::vector<int> idx;
    idx.reserve(observed.size());
    for (const auto& name : observed) {
        const int i = dag.index_of(name);
        if (dag.role_of(i) == VariableRole::Hidden) {
            throw InputError("observed set must not contain hidden variable '" + name + "'");
        }
        idx.push_back(i);
    }
    const int k = static_cast<int>(idx.size());
    std::vector<CiStatement> out;
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            std::vector<int> rest;
            for (int r = 0; r < k; ++r) {
                if (r != i && r != j) rest.push_back(r);
            }
            const std::uint32_t n_subsets = 1u << rest.size();
            for (std::uint32_t bits = 0; bits < n_subsets; ++bits) {
                CiStatement st;
                st.lhs = observed[i];
                st.rhs = observed[j];
                std::uint32_t given_mask = 0;
                for (std::size_t r = 0; r < rest.size(); ++r) {
                    if ((bits >> r) & 1u) {
                        st.given.push_back(observed[rest[r]]);
                        given_mask |= 1u << idx[rest[r]];
                    }
                }
                st.verdict = d_separated_idx(dag, idx[i], idx[j], given_mask)
                                 ? CiVerdict::Independent
                                 : CiVerdict::Dependent;
                out.push_back(std::move(st));
            }
        }
    }
    return out;
}

std::vector<CiStatement> implied_ci_statements(const Dag& dag) {
    return implied_ci_statements(dag, dag.observed_names());
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

struct EdgeSlot {
    int parent;
    int child;
};

}  // namespace

// Lexicographic DFS over edge slots with incremental reachability pruning.
class DagEnumerator {
public:
    DagEnumerator(const std::vector<Variable>& variables,
                  const std::vector<StructuralConstraint>& constraints) {
        n_ = static_cast<int>(variables.size());
        if (n_ < 1) throw InputError("enumeration needs at least one variable");

        table_ = std::make_shared<Dag::VariableTable>();
        int observed = 0;
        for (const auto& [name, role] : variables) {
            table_->names.push_back(name);
            table_->roles.push_back(role);
            observed += role != VariableRole::Hidden;
        }
        if (observed > kEnumerationCap) {
            throw CapacityError("enumeration supports at most " +
                                std::to_string(kEnumerationCap) + " observed variables, got " +
                                std::to_string(observed));
        }
        // The variable list itself must be a valid Dag header; reuse the
        // edge-free constructor for its checks.
        Dag probe(variables, {});

        std::vector<std::uint32_t> forbidden_into(n_, 0);  // forbidden parents per child
        int stimulus_idx = -1;
        for (int i = 0; i < n_; ++i) {
            if (table_->roles[i] == VariableRole::Stimulus) stimulus_idx = i;
        }
        bool max_hidden_seen = false;
        bool sufficiency = false;
        int max_hidden = 0;
        for (const auto& c : constraints) {
            switch (c.kind) {
                case StructuralConstraint::Kind::RandomizedRoot: {
                    const int v = probe.index_of(c.variable);
                    forbidden_into[v] = ~0u;  // no edges into a randomized root
                    if (v == stimulus_idx) randomized_ = true;
                    break;
                }
                case StructuralConstraint::Kind::NoOutgoingToFeatures: {
                    const int v = probe.index_of(c.variable);
                    for (int child = 0; child < n_; ++child) {
                        if (table_->roles[child] == VariableRole::Feature) {
                            forbidden_into[child] |= 1u << v;
                        }
                    }
                    break;
                }
                case StructuralConstraint::Kind::CausalSufficiency:
                    sufficiency = true;
                    break;
                case StructuralConstraint::Kind::MaxHidden:
                    max_hidden_seen = true;
                    max_hidden = c.count;
                    break;
            }
        }
        int hidden_count = 0;
        for (int i = 0; i < n_; ++i) hidden_count += table_->roles[i] == VariableRole::Hidden;
        if (sufficiency && hidden_count > 0) {
            throw InputError("CausalSufficiency excludes hidden variables from the search");
        }
        if (max_hidden_seen && hidden_count > max_hidden) {
            throw InputError("variable list exceeds the MaxHidden bound");
        }

        // Role-implied edge restrictions; slots in parent-major order.
        for (int parent = 0; parent < n_; ++parent) {
            const VariableRole parent_role = table_->roles[parent];
            for (int child = 0; child < n_; ++child) {
                if (parent == child) continue;
                const VariableRole child_role = table_->roles[child];
                bool banned = false;
                if (child_role == VariableRole::Hidden) banned = true;  // hidden are roots
                if (parent_role == VariableRole::Hidden && child_role == VariableRole::Hidden) {
                    banned = true;
                }
                if (parent_role == VariableRole::Response &&
                    child_role == VariableRole::Feature) {
                    banned = true;
                }
                if (child == stimulus_idx && randomized_) banned = true;
                if ((forbidden_into[child] >> parent) & 1u) banned = true;
                if (!banned) slots_.push_back({parent, child});
            }
        }
    }

    void run(const std::function<bool(const std::vector<std::uint32_t>&)>& visit) {
        parents_.assign(n_, 0);
        reach_.assign(n_, 0);
        for (int v = 0; v < n_; ++v) reach_[v] = 1u << v;  // reflexive reachability
        saved_.assign(slots_.size(), std::vector<std::uint32_t>(n_, 0));
        stopped_ = false;
        visit_ = &visit;
        descend(static_cast<int>(slots_.size()) - 1);
        visit_ = nullptr;
    }

    std::shared_ptr<const Dag::VariableTable> table() const { return table_; }
    bool randomized() const { return randomized_; }

    Dag make_dag(const std::vector<std::uint32_t>& parents) const {
        return Dag(table_, parents, randomized_);
    }

private:
    bool hidden_children_ok() const {
        std::uint32_t prev_childmask = 0;
        bool have_prev = false;
        for (int h = 0; h < n_; ++h) {
            if (table_->roles[h] != VariableRole::Hidden) continue;
            std::uint32_t childmask = 0;
            for (int c = 0; c < n_; ++c) {
                if ((parents_[c] >> h) & 1u) childmask |= 1u << c;
            }
            if (std::popcount(childmask) < 2) return false;  // vacuous latent
            // Canonical ordering so relabeled latents are not revisited.
            if (have_prev && childmask <= prev_childmask) return false;
            prev_childmask = childmask;
            have_prev = true;
        }
        return true;
    }

    void descend(int slot) {
        if (stopped_) return;
        if (slot < 0) {
            if (!hidden_children_ok()) return;
            if (!(*visit_)(parents_)) stopped_ = true;
            return;
        }
        descend(slot - 1);  // slot bit = 0 first: ascending bitmask order
        if (stopped_) return;

        const auto [p, c] = slots_[slot];
        if ((reach_[c] >> p) & 1u) return;  // p reachable from c: cycle
        saved_[slot] = reach_;
        parents_[c] |= 1u << p;
        for (int v = 0; v < n_; ++v) {
            if ((reach_[v] >> p) & 1u) reach_[v] |= reach_[c];
        }
        descend(slot - 1);
        parents_[c] &= ~(1u << p);
        reach_ = saved_[slot];
    }

    int n_ = 0;
    std::shared_ptr<Dag::VariableTable> table_;
    std::vector<EdgeSlot> slots_;
    std::vector<std::uint32_t> parents_;
    std::vector<std::uint32_t> reach_;
    std::vector<std::vector<std::uint32_t>> saved_;
    const std::function<bool(const std::vector<std::uint32_t>&)>* visit_ = nullptr;
    bool randomized_ = false;
    bool stopped_ = false;
};

void enumerate_dags(const std::vector<Variable>& variables,
                    const std::vector<StructuralConstraint>& constraints,
                    const std::function<bool(const Dag&)>& visit) {
    DagEnumerator gen(variables, constraints);
    gen.run([&](const std::vector<std::uint32_t>& parents) {
        return visit(gen.make_dag(parents));
    });
}

std::vector<Dag> enumerate_dags(const std::vector<Variable>& variables,
                                const std::vector<StructuralConstraint>& constraints) {
    std::vector<Dag> out;
    enumerate_dags(variables, constraints, [&](const Dag& d) {
        out.push_back(d);
        return true;
    });
    return out;
}

std::uint64_t count_dags(const std::vector<Variable>& variables,
                         const std::vector<StructuralConstraint>& constraints) {
    DagEnumerator gen(variables, constraints);
    std::uint64_t count = 0;
    gen.run([&](const std::vector<std::uint32_t>&) {
        ++count;
        return true;
    });
    return count;
}

// ---------------------------------------------------------------------------
// Consistency filtering

namespace {

struct ResolvedStatement {
    int a;
    int b;
    std::uint32_t given;
    bool independent;
};

std::string canonical_key(const CiStatement& st) {
    std::string x = st.lhs, y = st.rhs;
    if (y < x) std::swap(x, y);
    std::vector<std::string> z = st.given;
    std::sort(z.begin(), z.end());
    std::string key = x + "\x1f" + y + "\x1f";
    for (const auto& g : z) key += g + "\x1f";
    return key;
}

}  // namespace

std::vector<CiStatement> validate_statements(const std::vector<Variable>& variables,
                                             const std::vector<CiStatement>& statements) {
    std::set<std::string> names;
    for (const auto& [name, role] : variables) names.insert(name);
    std::map<std::string, CiVerdict> seen;
    std::vector<CiStatement> unique;
    for (const auto& st : statements) {
        if (!names.count(st.lhs)) throw InputError("unknown variable '" + st.lhs + "'");
        if (!names.count(st.rhs)) throw InputError("unknown variable '" + st.rhs + "'");
        if (st.lhs == st.rhs) throw InputError("statement relates '" + st.lhs + "' to itself");
        for (const auto& g : st.given) {
            if (!names.count(g)) throw InputError("unknown variable '" + g + "'");
            if (g == st.lhs || g == st.rhs) {
                throw InputError("conditioning set of '" + st.render() +
                                 "' contains a tested variable");
            }
        }
        const std::string key = canonical_key(st);
        auto [it, inserted] = seen.emplace(key, st.verdict);
        if (!inserted) {
            if (it->second != st.verdict) {
                throw InputError("contradictory duplicate statement: " + st.render());
            }
            continue;
        }
        unique.push_back(st);
    }
    return unique;
}

std::vector<Dag> consistent_structures(const std::vector<Variable>& variables,
                                       const std::vector<CiStatement>& statements,
                                       const std::vector<StructuralConstraint>& constraints) {
    for (const auto& [name, role] : variables) {
        if (role == VariableRole::Hidden) {
            throw InputError("pass hidden-variable search via MaxHidden, not the variable list");
        }
    }
    const std::vector<CiStatement> unique = validate_statements(variables, statements);

    bool sufficiency = false;
    int max_hidden = 0;
    std::vector<StructuralConstraint> edge_constraints;
    for (const auto& c : constraints) {
        if (c.kind == StructuralConstraint::Kind::CausalSufficiency) {
            sufficiency = true;
        } else if (c.kind == StructuralConstraint::Kind::MaxHidden) {
            max_hidden = c.count;
        } else {
            edge_constraints.push_back(c);
        }
    }
    if (sufficiency) max_hidden = 0;

    std::vector<Dag> result;
    for (int h = 0; h <= max_hidden; ++h) {
        std::vector<Variable> vars = variables;
        int suffix = 0;
        for (int k = 0; k < h; ++k) {
            std::string name;
            do {
                ++suffix;
                name = "H" + std::to_string(suffix);
            } while (std::any_of(variables.begin(), variables.end(),
                                 [&](const Variable& v) { return v.first == name; }));
            vars.emplace_back(name, VariableRole::Hidden);
        }

        // Resolve statements to indices once per variable layout.
        std::map<std::string, int> index;
        for (std::size_t i = 0; i < vars.size(); ++i) index[vars[i].first] = static_cast<int>(i);
        std::vector<ResolvedStatement> resolved;
        for (const auto& st : unique) {
            ResolvedStatement r{index.at(st.lhs), index.at(st.rhs), 0, st.independent()};
            for (const auto& g : st.given) r.given |= 1u << index.at(g);
            resolved.push_back(r);
        }
        // Cheap statements first: small conditioning sets kill most candidates.
        std::stable_sort(resolved.begin(), resolved.end(),
                         [](const ResolvedStatement& x, const ResolvedStatement& y) {
                             return std::popcount(x.given) < std::popcount(y.given);
                         });

        enumerate_dags(vars, edge_constraints, [&](const Dag& d) {
            for (const auto& r : resolved) {
                if (d_separated_idx(d, r.a, r.b, r.given) != r.independent) return true;
            }
            result.push_back(d);
            return true;
        });
    }
    return result;
}

std::vector<Dag::Edge> shared_edges(const std::vector<Dag>& dags) {
    if (dags.empty()) throw InputError("shared_edges needs at least one Dag");
    const std::vector<std::string> observed = dags.front().observed_names();
    for (const auto& d : dags) {
        std::vector<std::string> names = d.observed_names();
        if (names != observed) {
            throw InputError("shared_edges requires identical observed variable lists");
        }
    }
    std::vector<Dag::Edge> shared;
    for (const auto& edge : dags.front().edges()) {
        bool everywhere = true;
        for (std::size_t i = 1; i < dags.size() && everywhere; ++i) {
            const Dag& d = dags[i];
            everywhere = d.has_variable(edge.first) && d.has_variable(edge.second) &&
                         d.has_edge(edge.first, edge.second);
        }
        if (everywhere) shared.push_back(edge);
    }
    return shared;
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize_dag(const Dag& dag) {
    std::ostringstream out;
    for (int i = 0; i < dag.size(); ++i) {
        out << dag.name_of(i) << ' ' << role_name(dag.role_of(i)) << '\n';
    }
    if (dag.stimulus_index() && !dag.randomized_stimulus()) {
        out << "nonrandomized-stimulus\n";
    }
    for (const auto& [parent, child] : dag.edges()) {
        out << parent << " -> " << child << '\n';
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

}  // namespace

Dag parse_dag(const std::string& text) {
    std::vector<Variable> variables;
    std::vector<Dag::Edge> edges;
    bool randomized = true;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line == "nonrandomized-stimulus") {
            randomized = false;
            continue;
        }
        const std::size_t arrow = line.find("->");
        if (arrow != std::string::npos) {
            const std::string parent = trim(line.substr(0, arrow));
            const std::string child = trim(line.substr(arrow + 2));
            if (parent.empty() || child.empty()) {
                throw InputError("line " + std::to_string(line_no) + ": malformed edge");
            }
            edges.emplace_back(parent, child);
        } else {
            std::istringstream fields(line);
            std::string name, role, extra;
            if (!(fields >> name >> role) || (fields >> extra)) {
                throw InputError("line " + std::to_string(line_no) +
                                 ": expected 'name role' or 'parent -> child'");
            }
            variables.emplace_back(name, role_from_name(role));
        }
    }
    return Dag(std::move(variables), edges, randomized);
}

}  // namespace relcausal
