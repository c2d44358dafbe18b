#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace relcausal {

enum class VariableRole { Stimulus, Response, Feature, Hidden };

std::string role_name(VariableRole role);
VariableRole role_from_name(const std::string& name);

using Variable = std::pair<std::string, VariableRole>;

// Most variables the exhaustive machinery will ever see at once: the
// 7-observed cap plus synthesized latents.
inline constexpr int kEnumerationCap = 7;
inline constexpr int kMaxDagVariables = 32;

// Immutable directed acyclic graph over role-tagged variables.
//
// Construction enforces:
//   - acyclicity,
//   - at most one Stimulus and one Response,
//   - no edge into the Stimulus while `randomized_stimulus` is set,
//   - no edge from the Response to a Feature (responses do not drive
//     the measured features),
//   - Hidden variables have no parents and no Hidden children.
class Dag {
public:
    using Edge = std::pair<std::string, std::string>;  // parent -> child

    Dag(std::vector<Variable> variables, const std::vector<Edge>& edges,
        bool randomized_stimulus = true);

    int size() const { return static_cast<int>(table_->names.size()); }
    std::vector<Variable> variables() const;
    bool randomized_stimulus() const { return randomized_stimulus_; }

    int index_of(const std::string& name) const;  // throws InputError if unknown
    const std::string& name_of(int idx) const;
    VariableRole role_of(int idx) const;
    bool has_variable(const std::string& name) const;

    bool has_edge(int parent, int child) const;
    bool has_edge(const std::string& parent, const std::string& child) const;
    std::uint32_t parent_mask(int child) const { return parents_[child]; }
    std::vector<int> parents(int child) const;
    std::vector<int> children(int parent) const;

    // Edges sorted by (parent index, child index).
    std::vector<Edge> edges() const;
    std::size_t edge_count() const;

    // True when a directed path parent ->* descendant exists (length >= 1).
    bool has_directed_path(int from, int to) const;
    bool has_directed_path(const std::string& from, const std::string& to) const;

    // Indices of non-Hidden variables in declaration order.
    std::vector<int> observed_indices() const;
    std::vector<std::string> observed_names() const;

    std::optional<int> stimulus_index() const;
    std::optional<int> response_index() const;

    std::vector<int> topological_order() const;

    bool same_variables(const Dag& other) const;

private:
    friend class DagEnumerator;
    struct VariableTable {
        std::vector<std::string> names;
        std::vector<VariableRole> roles;
    };
    // Trusted path used by the enumerator: masks are already validated.
    Dag(std::shared_ptr<const VariableTable> table, std::vector<std::uint32_t> parents,
        bool randomized_stimulus);

    std::shared_ptr<const VariableTable> table_;
    std::vector<std::uint32_t> parents_;  // parents_[child] bit i <=> edge i -> child
    bool randomized_stimulus_ = true;
};

enum class CiVerdict { Independent, Dependent };

// One (conditional) independence statement: lhs vs rhs given `given`.
struct CiStatement {
    std::string lhs;
    std::string rhs;
    std::vector<std::string> given;
    CiVerdict verdict = CiVerdict::Independent;

    bool independent() const { return verdict == CiVerdict::Independent; }
    std::string render() const;  // e.g. "S _||_ X2 | X1" / "S _/||_ X1"
};

struct StructuralConstraint {
    enum class Kind { RandomizedRoot, NoOutgoingToFeatures, CausalSufficiency, MaxHidden };

    Kind kind;
    std::string variable;  // RandomizedRoot / NoOutgoingToFeatures
    int count = 0;         // MaxHidden

    static StructuralConstraint randomized_root(std::string v);
    static StructuralConstraint no_outgoing_to_features(std::string v);
    static StructuralConstraint causal_sufficiency();
    static StructuralConstraint max_hidden(int count);
};

// Path-based d-separation (reachability over active trails).
bool d_separated(const Dag& dag, const std::string& a, const std::string& b,
                 const std::vector<std::string>& given);

// Independent route: ancestral subgraph -> moralize -> undirected separation.
// Kept separate from the path-based implementation so the two can be checked
// against each other.
bool d_separated_moral(const Dag& dag, const std::string& a, const std::string& b,
                       const std::vector<std::string>& given);

// Every unordered observed pair under every conditioning subset of the
// remaining observed variables; verdict from d-separation. Deterministic
// order: pairs by variable order, subsets by ascending bitmask.
std::vector<CiStatement> implied_ci_statements(const Dag& dag,
                                               const std::vector<std::string>& observed);
std::vector<CiStatement> implied_ci_statements(const Dag& dag);

// Streaming enumeration of every labeled DAG over `variables` satisfying the
// constraints, in lexicographic order of the edge bitmask (edge slots ordered
// parent-major over the given variable order). Hidden variables are enumerated
// as roots with at least two observed children. Returning false stops early.
void enumerate_dags(const std::vector<Variable>& variables,
                    const std::vector<StructuralConstraint>& constraints,
                    const std::function<bool(const Dag&)>& visit);

std::vector<Dag> enumerate_dags(const std::vector<Variable>& variables,
                                const std::vector<StructuralConstraint>& constraints = {});

std::uint64_t count_dags(const std::vector<Variable>& variables,
                         const std::vector<StructuralConstraint>& constraints = {});

// Checks statement well-formedness against the variable list, deduplicates,
// and throws InputError on contradictory duplicates.
std::vector<CiStatement> validate_statements(const std::vector<Variable>& variables,
                                             const std::vector<CiStatement>& statements);

// Every DAG whose d-separation relations agree with all supplied statements
// (Independent <=> d-separated). Without CausalSufficiency, candidates with up
// to MaxHidden latent roots are searched as well. Empty result means no
// faithful explanation exists.
std::vector<Dag> consistent_structures(const std::vector<Variable>& variables,
                                       const std::vector<CiStatement>& statements,
                                       const std::vector<StructuralConstraint>& constraints);

// Edges present in every listed DAG. The DAGs must agree on their observed
// variables; hidden variables may differ (their edges never intersect).
std::vector<Dag::Edge> shared_edges(const std::vector<Dag>& dags);

// Plain-text edge-list format: one "name role" line per variable followed by
// one "parent -> child" line per edge. Byte-exact round trip.
std::string serialize_dag(const Dag& dag);
Dag parse_dag(const std::string& text);

}  // namespace relcausal
