#include "relcausal/citest.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "relcausal/errors.hpp"
#include "relcausal/rng.hpp"
#include "relcausal/stats.hpp"

namespace relcausal {

std::string ci_method_name(CiMethod m) {
    switch (m) {
        case CiMethod::Oracle: return "oracle";
        case CiMethod::PartialCorrelationFisherZ: return "partial-correlation-fisher-z";
        case CiMethod::ConditionalGTest: return "conditional-g-test";
    }
    throw InputError("unknown CI method");
}

namespace {

void validate_query(const Dataset& data, const std::string& a, const std::string& b,
                    const std::vector<std::string>& given) {
    if (a == b) throw InputError("CI query needs two distinct columns");
    (void)data.column(a);
    (void)data.column(b);
    std::set<std::string> seen;
    for (const auto& g : given) {
        if (g == a || g == b) {
            throw InputError("conditioning set must not contain '" + g + "'");
        }
        if (!seen.insert(g).second) throw InputError("duplicate conditioning column '" + g + "'");
        (void)data.column(g);
    }
}

}  // namespace

TestResult partial_correlation(const Dataset& data, const std::string& a,
                               const std::string& b,
                               const std::vector<std::string>& given) {
    validate_query(data, a, b, given);
    const std::size_t n = data.n_rows();
    const std::size_t k = given.size();
    if (n <= k + 3) {
        throw DegenerateDataError("partial correlation needs more than |given| + 3 rows");
    }

    std::vector<std::vector<double>> views;
    views.reserve(k + 2);
    views.push_back(data.numeric_view(a));
    views.push_back(data.numeric_view(b));
    for (const auto& g : given) views.push_back(data.numeric_view(g));
    std::vector<const std::vector<double>*> ptrs;
    for (const auto& v : views) ptrs.push_back(&v);

    MeanCov mc = mean_and_covariance(ptrs);
    std::vector<std::vector<double>> precision = mc.cov;
    if (!invert_in_place(precision)) {
        throw DegenerateDataError("singular covariance among the queried columns");
    }
    const double denom = precision[0][0] * precision[1][1];
    if (!(denom > 0)) {
        throw DegenerateDataError("ill-conditioned covariance among the queried columns");
    }
    double r = -precision[0][1] / std::sqrt(denom);
    r = std::clamp(r, -1.0 + 1e-12, 1.0 - 1e-12);

    const double dof = static_cast<double>(n) - static_cast<double>(k) - 3.0;
    const double z = std::sqrt(dof) * std::atanh(r);
    return {r, normal_two_sided_p(z)};
}

namespace {

struct Stratum {
    std::vector<int> key;
    std::vector<std::vector<double>> counts;
};

}  // namespace

TestResult conditional_g_test(const Dataset& data, const std::string& a,
                              const std::string& b,
                              const std::vector<std::string>& given) {
    validate_query(data, a, b, given);
    const Column& col_a = data.column(a);
    const Column& col_b = data.column(b);
    for (const std::string* name : {&a, &b}) {
        if (data.column(*name).kind != ColumnKind::Categorical) {
            throw InputError("G test needs categorical columns; '" + *name + "' is numeric");
        }
    }
    for (const auto& g : given) {
        if (data.column(g).kind != ColumnKind::Categorical) {
            throw InputError("G test needs categorical columns; '" + g + "' is numeric");
        }
    }

    const int ra = col_a.cardinality;
    const int cb = col_b.cardinality;
    const std::size_t n = data.n_rows();
    if (n == 0) throw DegenerateDataError("empty dataset");

    std::map<std::vector<int>, std::vector<std::vector<double>>> table;
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<int> key;
        key.reserve(given.size());
        for (const auto& g : given) {
            key.push_back(static_cast<int>(data.column(g).values[r]));
        }
        auto& counts = table[key];
        if (counts.empty()) counts.assign(ra, std::vector<double>(cb, 0.0));
        counts[static_cast<int>(col_a.values[r])][static_cast<int>(col_b.values[r])] += 1.0;
    }

    std::vector<Stratum> strata;
    for (auto& [key, counts] : table) strata.push_back({key, std::move(counts)});

    // Pool strata whose average expected cell count is below 5 into the
    // nearest neighbour (previous, else next), repeating until stable.
    const double min_avg = 5.0;
    const double cells = static_cast<double>(ra) * static_cast<double>(cb);
    bool changed = !given.empty();
    while (changed && strata.size() > 1) {
        changed = false;
        for (std::size_t s = 0; s < strata.size(); ++s) {
            double total = 0;
            for (const auto& row : strata[s].counts) {
                for (double v : row) total += v;
            }
            if (total / cells >= min_avg) continue;
            const std::size_t target = s > 0 ? s - 1 : s + 1;
            for (int i = 0; i < ra; ++i) {
                for (int j = 0; j < cb; ++j) {
                    strata[target].counts[i][j] += strata[s].counts[i][j];
                }
            }
            strata.erase(strata.begin() + static_cast<std::ptrdiff_t>(s));
            changed = true;
            break;
        }
    }

    double g_stat = 0.0;
    double df = 0.0;
    for (const auto& stratum : strata) {
        std::vector<double> row_sum(ra, 0.0), col_sum(cb, 0.0);
        double total = 0;
        for (int i = 0; i < ra; ++i) {
            for (int j = 0; j < cb; ++j) {
                row_sum[i] += stratum.counts[i][j];
                col_sum[j] += stratum.counts[i][j];
                total += stratum.counts[i][j];
            }
        }
        if (total == 0) continue;
        int nz_rows = 0, nz_cols = 0;
        for (double v : row_sum) nz_rows += v > 0;
        for (double v : col_sum) nz_cols += v > 0;
        for (int i = 0; i < ra; ++i) {
            for (int j = 0; j < cb; ++j) {
                const double observed = stratum.counts[i][j];
                if (observed <= 0) continue;
                const double expected = row_sum[i] * col_sum[j] / total;
                g_stat += 2.0 * observed * std::log(observed / expected);
            }
        }
        df += std::max(nz_rows - 1, 0) * std::max(nz_cols - 1, 0);
    }

    if (df <= 0) return {0.0, 1.0};
    return {g_stat, chi_squared_sf(g_stat, df)};
}

// ---------------------------------------------------------------------------
// DataCiProvider

DataCiProvider::DataCiProvider(Dataset data, double alpha, int bonferroni_divisor)
    : data_(std::move(data)), alpha_(alpha), bonferroni_divisor_(bonferroni_divisor) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0,1)");
    if (bonferroni_divisor < 1) throw InputError("bonferroni divisor must be >= 1");
    bool any_numeric = false, any_wide = false;
    all_categorical_ = true;
    for (const auto& col : data_.columns()) {
        if (col.kind == ColumnKind::Numeric) {
            any_numeric = true;
            all_categorical_ = false;
        } else if (col.cardinality > 2) {
            any_wide = true;
        }
    }
    if (any_numeric && any_wide) {
        throw InputError(
            "datasets mixing numeric columns with categorical columns of more than "
            "two classes are not supported");
    }
}

double DataCiProvider::effective_alpha() const {
    return alpha_ / static_cast<double>(bonferroni_divisor_);
}

CiDecision DataCiProvider::decide(const std::string& a, const std::string& b,
                                  std::vector<std::string> given) const {
    CiDecision d;
    d.statement.lhs = a;
    d.statement.rhs = b;
    d.statement.given = given;
    TestResult res;
    if (all_categorical_) {
        res = conditional_g_test(data_, a, b, given);
        d.method = CiMethod::ConditionalGTest;
    } else {
        res = partial_correlation(data_, a, b, given);
        d.method = CiMethod::PartialCorrelationFisherZ;
    }
    d.statistic = res.statistic;
    d.p_value = res.p_value;
    d.alpha = effective_alpha();
    d.statement.verdict =
        d.p_value > d.alpha ? CiVerdict::Independent : CiVerdict::Dependent;
    return d;
}

CiVerdict DataCiProvider::verdict(const std::string& a, const std::string& b,
                                  const std::vector<std::string>& given) const {
    std::string x = a, y = b;
    if (y < x) std::swap(x, y);
    std::vector<std::string> z = given;
    std::sort(z.begin(), z.end());
    std::string key = x + "\x1f" + y + "\x1f";
    for (const auto& g : z) key += g + "\x1f";

    std::lock_guard<std::mutex> lock(mutex_);
    auto it = memo_.find(key);
    if (it == memo_.end()) {
        it = memo_.emplace(key, decide(x, y, std::move(z))).first;
        order_.push_back(key);
    }
    return it->second.statement.verdict;
}

std::vector<std::string> DataCiProvider::observed() const { return data_.column_names(); }

CiProvenance DataCiProvider::provenance() const {
    std::ostringstream detail;
    detail << (all_categorical_ ? "conditional-g-test" : "partial-correlation-fisher-z");
    if (bonferroni_divisor_ > 1) detail << ", bonferroni/" << bonferroni_divisor_;
    return {CiProvenance::Kind::Statistical, alpha_, detail.str()};
}

std::vector<CiDecision> DataCiProvider::decisions() const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::vector<CiDecision> out;
    out.reserve(order_.size());
    for (const auto& key : order_) out.push_back(memo_.at(key));
    return out;
}

std::unique_ptr<CiProvider> ci_provider(Dataset data, double alpha, int bonferroni_divisor) {
    return std::make_unique<DataCiProvider>(std::move(data), alpha, bonferroni_divisor);
}

// ---------------------------------------------------------------------------
// Calibration

CalibrationResult calibrate_test(const std::string& test, int trials, double alpha,
                                 std::uint64_t seed, int conditioning) {
    if (trials < 100) throw InputError("calibration needs at least 100 trials");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0,1)");
    if (conditioning < 0) throw InputError("conditioning count must be >= 0");
    const bool fisher = test == "fisher-z";
    if (!fisher && test != "g-test") {
        throw InputError("unknown calibration test '" + test + "' (fisher-z | g-test)");
    }

    const std::size_t n = fisher ? 200 : 1000;
    int rejections = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<Column> columns;
        std::vector<std::string> given;
        for (int c = 0; c < conditioning + 2; ++c) {
            CounterRng rng(seed, CounterRng::stream_of(0xCA11B, t, c));
            Column col;
            col.name = c == 0 ? "a" : c == 1 ? "b" : "z" + std::to_string(c - 1);
            if (c >= 2) given.push_back(col.name);
            col.values.reserve(n);
            if (fisher) {
                for (std::size_t r = 0; r < n; ++r) col.values.push_back(rng.next_normal());
            } else {
                col.kind = ColumnKind::Categorical;
                col.cardinality = 2;
                for (std::size_t r = 0; r < n; ++r) {
                    col.values.push_back(rng.next_uniform() < 0.5 ? 0.0 : 1.0);
                }
            }
            columns.push_back(std::move(col));
        }
        Dataset data(std::move(columns), std::nullopt);
        const TestResult res = fisher ? partial_correlation(data, "a", "b", given)
                                      : conditional_g_test(data, "a", "b", given);
        rejections += res.p_value <= alpha;
    }

    CalibrationResult out;
    out.trials = trials;
    out.rejections = rejections;
    out.rate = static_cast<double>(rejections) / trials;
    // Wilson score interval at 95%.
    const double z = 1.959963984540054;
    const double nn = trials;
    const double center = (out.rate + z * z / (2 * nn)) / (1 + z * z / nn);
    const double half = z / (1 + z * z / nn) *
                        std::sqrt(out.rate * (1 - out.rate) / nn + z * z / (4 * nn * nn));
    out.ci_low = std::max(0.0, center - half);
    out.ci_high = std::min(1.0, center + half);
    out.within_band = out.rate >= alpha / 2 && out.rate <= 2 * alpha;
    return out;
}

}  // namespace relcausal
