#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "relcausal/ci.hpp"
#include "relcausal/dataset.hpp"
#include "relcausal/graph.hpp"

namespace relcausal {

// Linear mechanism with additive Gaussian noise. Discrete binary parents
// enter as -1/+1; wider discrete parents enter as their class index.
struct LinearGaussian {
    std::map<std::string, double> weights;  // parent -> coefficient
    double noise_variance = 1.0;
    double intercept = 0.0;
};

// Tabular mechanism over discrete parents. Rows are indexed by the parent
// configuration (first parent varies slowest); each row sums to one.
struct DiscreteCpt {
    int cardinality = 2;
    std::vector<std::vector<double>> table;
};

using Mechanism = std::variant<LinearGaussian, DiscreteCpt>;

enum class ExperimentKind { StimulusBased, ResponseBased };

std::string experiment_kind_name(ExperimentKind kind);
ExperimentKind experiment_kind_from_name(const std::string& name);

// Structural causal model: a Dag plus one sampling mechanism per variable.
class Scm {
public:
    Scm(Dag dag, std::map<std::string, Mechanism> mechanisms, ExperimentKind kind);

    const Dag& dag() const { return dag_; }
    ExperimentKind experiment_kind() const { return kind_; }
    const Mechanism& mechanism(const std::string& variable) const;

    std::string condition_name() const;  // the stimulus / response variable

private:
    Dag dag_;
    std::map<std::string, Mechanism> mechanisms_;
    ExperimentKind kind_;
};

// Forward sampling in topological order; hidden columns are dropped from the
// result. Identical (scm, n, seed) yields byte-identical datasets: the draw
// for (row, variable) depends only on the seed, the row index and the
// variable's declaration index.
Dataset sample(const Scm& scm, std::size_t n, std::uint64_t seed);

// The worked scenarios the analysis rules are demonstrated on.
//   stim-chain        S -> X1 -> X2
//   stim-collider     S -> X1 <- X2
//   resp-fork         X2 <- X1 -> R
//   resp-chain        X2 -> X1 -> R
//   resp-hidden-fig1  H -> {X1, X2, R}, H hidden
//   stim-sec41        S -> X1 <- X2 (deduction demo: unique structure)
//   resp-sec42        X2 <- X1 -> R (deduction demo: two structures)
Scm canonical_fixture(const std::string& name);
std::vector<std::string> canonical_fixture_names();

// CI provider answering queries over the observed variables by d-separation
// on the true graph.
class OracleCiProvider : public CiProvider {
public:
    explicit OracleCiProvider(Dag dag);

    CiVerdict verdict(const std::string& a, const std::string& b,
                      const std::vector<std::string>& given) const override;
    std::vector<std::string> observed() const override;
    CiProvenance provenance() const override;

private:
    Dag dag_;
};

std::unique_ptr<CiProvider> oracle(const Scm& scm);

// Key-value SCM spec: one [experiment] section plus one section per variable
// (role, parents, mechanism, parameters). Byte-exact round trip.
std::string serialize_scm(const Scm& scm);
Scm parse_scm(const std::string& text);
Scm load_scm(const std::string& path);
void save_scm(const Scm& scm, const std::string& path);

}  // namespace relcausal
