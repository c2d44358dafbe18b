#include "relcausal/relevance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "relcausal/errors.hpp"
#include "relcausal/rng.hpp"

namespace relcausal {

bool RelevanceSets::encoding_has(const std::string& feature) const {
    return std::find(encoding_relevant.begin(), encoding_relevant.end(), feature) !=
           encoding_relevant.end();
}

bool RelevanceSets::decoding_has(const std::string& feature) const {
    return std::find(decoding_relevant.begin(), decoding_relevant.end(), feature) !=
           decoding_relevant.end();
}

std::vector<std::string> RelevanceSets::all_features() const {
    std::vector<std::string> out = encoding_relevant;
    out.insert(out.end(), encoding_irrelevant.begin(), encoding_irrelevant.end());
    return out;
}

namespace {

void check_condition(const std::string& condition, const std::vector<std::string>& features) {
    for (const auto& f : features) {
        if (f == condition) {
            throw InputError("condition '" + condition + "' cannot be one of the features");
        }
    }
}

}  // namespace

std::vector<std::string> encoding_relevant_set(const CiProvider& ci,
                                               const std::string& condition,
                                               const std::vector<std::string>& features) {
    check_condition(condition, features);
    std::vector<std::string> out;
    for (const auto& f : features) {
        if (ci.verdict(f, condition, {}) == CiVerdict::Dependent) out.push_back(f);
    }
    return out;
}

std::vector<std::string> decoding_relevant_set(const CiProvider& ci,
                                               const std::string& condition,
                                               const std::vector<std::string>& features) {
    check_condition(condition, features);
    std::vector<std::string> out;
    for (const auto& f : features) {
        std::vector<std::string> rest;
        for (const auto& other : features) {
            if (other != f) rest.push_back(other);
        }
        if (ci.verdict(f, condition, rest) == CiVerdict::Dependent) out.push_back(f);
    }
    return out;
}

RelevanceSets compute_relevance_sets(const CiProvider& ci, const std::string& condition,
                                     const std::vector<std::string>& features) {
    RelevanceSets sets;
    sets.encoding_relevant = encoding_relevant_set(ci, condition, features);
    sets.decoding_relevant = decoding_relevant_set(ci, condition, features);
    for (const auto& f : features) {
        if (!sets.encoding_has(f)) sets.encoding_irrelevant.push_back(f);
        if (!sets.decoding_has(f)) sets.decoding_irrelevant.push_back(f);
    }
    sets.provenance = ci.provenance();
    return sets;
}

std::string relevance_sets_to_json(const RelevanceSets& sets,
                                   const std::vector<CiDecision>& decisions) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json features = nlohmann::ordered_json::object();
    for (const auto& f : sets.all_features()) {
        features[f] = {{"encoding", sets.encoding_has(f)},
                       {"decoding", sets.decoding_has(f)}};
    }
    j["features"] = features;
    nlohmann::ordered_json prov;
    prov["kind"] = sets.provenance.kind == CiProvenance::Kind::Oracle ? "oracle"
                                                                      : "statistical";
    if (sets.provenance.kind == CiProvenance::Kind::Statistical) {
        prov["alpha"] = sets.provenance.alpha;
    }
    prov["detail"] = sets.provenance.detail;
    j["provenance"] = prov;
    if (!decisions.empty()) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& d : decisions) {
            arr.push_back({{"lhs", d.statement.lhs},
                           {"rhs", d.statement.rhs},
                           {"given", d.statement.given},
                           {"verdict", d.statement.independent() ? "independent" : "dependent"},
                           {"statistic", d.statistic},
                           {"p_value", d.p_value},
                           {"alpha", d.alpha}});
        }
        j["p_values"] = arr;
    }
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Permutation-based RFE

namespace {

// Ridge least-squares on centered data; intercept unpenalized.
struct RidgeModel {
    std::vector<double> weights;
    double intercept = 0.0;
};

RidgeModel fit_ridge(const std::vector<std::vector<double>>& x_cols,
                     const std::vector<double>& y, const std::vector<char>& in_train,
                     double lambda) {
    const std::size_t d = x_cols.size();
    const std::size_t n = y.size();
    std::size_t m = 0;
    for (std::size_t r = 0; r < n; ++r) m += in_train[r];
    if (m < d + 1) throw DegenerateDataError("too few training rows for the ridge fit");

    std::vector<double> x_mean(d, 0.0);
    double y_mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        if (!in_train[r]) continue;
        for (std::size_t j = 0; j < d; ++j) x_mean[j] += x_cols[j][r];
        y_mean += y[r];
    }
    for (std::size_t j = 0; j < d; ++j) x_mean[j] /= static_cast<double>(m);
    y_mean /= static_cast<double>(m);

    std::vector<std::vector<double>> gram(d, std::vector<double>(d, 0.0));
    std::vector<double> xty(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        if (!in_train[r]) continue;
        for (std::size_t j = 0; j < d; ++j) {
            const double xj = x_cols[j][r] - x_mean[j];
            xty[j] += xj * (y[r] - y_mean);
            for (std::size_t k = j; k < d; ++k) {
                gram[j][k] += xj * (x_cols[k][r] - x_mean[k]);
            }
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        gram[j][j] += lambda;
        for (std::size_t k = 0; k < j; ++k) gram[j][k] = gram[k][j];
    }

    // Cholesky solve.
    std::vector<std::vector<double>> chol(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = gram[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= chol[i][k] * chol[j][k];
            if (i == j) {
                if (s <= 0) throw DegenerateDataError("singular ridge system");
                chol[i][i] = std::sqrt(s);
            } else {
                chol[i][j] = s / chol[j][j];
            }
        }
    }
    std::vector<double> w(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        double s = xty[i];
        for (std::size_t k = 0; k < i; ++k) s -= chol[i][k] * w[k];
        w[i] = s / chol[i][i];
    }
    for (std::size_t i = d; i-- > 0;) {
        double s = w[i];
        for (std::size_t k = i + 1; k < d; ++k) s -= chol[k][i] * w[k];
        w[i] = s / chol[i][i];
    }

    RidgeModel model;
    model.weights = std::move(w);
    model.intercept = y_mean;
    for (std::size_t j = 0; j < d; ++j) model.intercept -= model.weights[j] * x_mean[j];
    return model;
}

}  // namespace

RfeResult rfe_decoding_set(const Dataset& data, const std::string& condition,
                           const RfeParams& params) {
    if (params.folds < 2) throw InputError("rfe needs at least 2 folds");
    if (params.permutations < 1) throw InputError("rfe needs at least 1 permutation");
    if (!(params.level > 0.0 && params.level < 1.0)) {
        throw InputError("rfe significance level must lie in (0,1)");
    }
    if (params.ridge_lambda < 0) throw InputError("ridge regularization must be >= 0");

    const Column& cond = data.column(condition);
    if (cond.kind != ColumnKind::Categorical || cond.cardinality != 2) {
        throw InputError("rfe condition column must be binary categorical");
    }
    std::vector<std::string> features;
    for (const auto& col : data.columns()) {
        if (col.name != condition && col.role == VariableRole::Feature) {
            features.push_back(col.name);
        }
    }
    if (features.size() < 2) throw InputError("rfe needs at least 2 features");

    const std::size_t n = data.n_rows();
    const std::size_t k = static_cast<std::size_t>(params.folds);
    if (n < 2 * k) throw DegenerateDataError("too few rows for the requested fold count");

    std::vector<double> y;
    y.reserve(n);
    bool saw_zero = false, saw_one = false;
    for (double v : cond.values) {
        saw_zero |= v < 0.5;
        saw_one |= v > 0.5;
        y.push_back(v > 0.5 ? 1.0 : -1.0);
    }
    if (!saw_zero || !saw_one) {
        throw InputError("condition column '" + condition + "' has a single class");
    }

    const std::size_t d = features.size();
    std::vector<std::vector<double>> x_cols;
    x_cols.reserve(d);
    for (const auto& f : features) x_cols.push_back(data.numeric_view(f));

    // Fold f holds out rows with r % k == f.
    std::vector<RidgeModel> models;
    models.reserve(k);
    for (std::size_t f = 0; f < k; ++f) {
        std::vector<char> in_train(n, 1);
        for (std::size_t r = f; r < n; r += k) in_train[r] = 0;
        models.push_back(fit_ridge(x_cols, y, in_train, params.ridge_lambda));
    }

    auto margin = [&](std::size_t r, const RidgeModel& m) {
        double s = m.intercept;
        for (std::size_t j = 0; j < d; ++j) s += m.weights[j] * x_cols[j][r];
        return s;
    };

    std::size_t baseline_correct = 0;
    std::vector<double> margins(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const RidgeModel& m = models[r % k];
        margins[r] = margin(r, m);
        baseline_correct += (margins[r] >= 0 ? 1.0 : -1.0) == y[r];
    }
    const double baseline = static_cast<double>(baseline_correct) / static_cast<double>(n);

    const std::uint64_t seed = data.seed().value_or(0);
    RfeResult result;
    result.baseline_accuracy = baseline;
    result.params = params;

    for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> drops(params.permutations, 0.0);
        for (int p = 0; p < params.permutations; ++p) {
            std::size_t correct = 0;
            for (std::size_t f = 0; f < k; ++f) {
                std::vector<std::size_t> held;
                for (std::size_t r = f; r < n; r += k) held.push_back(r);
                std::vector<std::size_t> perm = held;
                CounterRng rng(seed, CounterRng::stream_of(0x8FE, j, p, f));
                rng.shuffle(perm);
                const double wj = models[f].weights[j];
                for (std::size_t i = 0; i < held.size(); ++i) {
                    const std::size_t r = held[i];
                    const double m = margins[r] - wj * x_cols[j][r] + wj * x_cols[j][perm[i]];
                    correct += (m >= 0 ? 1.0 : -1.0) == y[r];
                }
            }
            drops[p] = baseline - static_cast<double>(correct) / static_cast<double>(n);
        }
        const double mean_drop =
            std::accumulate(drops.begin(), drops.end(), 0.0) / drops.size();
        std::vector<double> centered = drops;
        for (double& v : centered) v -= mean_drop;
        std::sort(centered.begin(), centered.end());
        const std::size_t idx = std::min(
            centered.size() - 1,
            static_cast<std::size_t>(
                std::ceil((1.0 - params.level) * static_cast<double>(centered.size()))) -
                1);
        const double quantile = centered[idx];

        RfeFeatureResult fr;
        fr.feature = features[j];
        fr.mean_drop = mean_drop;
        fr.null_quantile = quantile;
        fr.relevant = mean_drop > std::max(quantile, 0.0);
        if (fr.relevant) result.relevant.push_back(fr.feature);
        result.features.push_back(std::move(fr));
    }
    return result;
}

}  // namespace relcausal
