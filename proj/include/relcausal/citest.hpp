#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "relcausal/ci.hpp"
#include "relcausal/dataset.hpp"

namespace relcausal {

struct TestResult {
    double statistic = 0.0;  // partial correlation r, or the G statistic
    double p_value = 1.0;
};

// Partial correlation of a and b given the conditioning columns, decided via
// the Fisher z transform with n - |given| - 3 effective degrees of freedom.
// Categorical binary columns enter as -1/+1.
TestResult partial_correlation(const Dataset& data, const std::string& a,
                               const std::string& b,
                               const std::vector<std::string>& given);

// Likelihood-ratio (G) test of a vs b summed over the strata spelled by the
// conditioning columns; all columns must be categorical. Strata whose average
// expected cell count falls below 5 are pooled with the nearest stratum; if
// pooling leaves a single stratum the test degrades to unconditional.
TestResult conditional_g_test(const Dataset& data, const std::string& a,
                              const std::string& b,
                              const std::vector<std::string>& given);

// Data-backed CI provider. Dispatches on column types:
//   - all columns categorical            -> conditional G test
//   - numeric + binary categorical mix   -> -1/+1 encoding, Fisher z
// Queries are memoized; (a,b) order and `given` order never change a verdict.
class DataCiProvider : public CiProvider {
public:
    DataCiProvider(Dataset data, double alpha, int bonferroni_divisor = 1);

    CiVerdict verdict(const std::string& a, const std::string& b,
                      const std::vector<std::string>& given) const override;
    std::vector<std::string> observed() const override;
    CiProvenance provenance() const override;
    std::vector<CiDecision> decisions() const override;

    double alpha() const { return alpha_; }
    double effective_alpha() const;
    const Dataset& data() const { return data_; }

private:
    CiDecision decide(const std::string& a, const std::string& b,
                      std::vector<std::string> given) const;

    Dataset data_;
    double alpha_;
    int bonferroni_divisor_;
    bool all_categorical_;
    mutable std::mutex mutex_;
    mutable std::map<std::string, CiDecision> memo_;
    mutable std::vector<std::string> order_;  // first-query order of memo keys
};

std::unique_ptr<CiProvider> ci_provider(Dataset data, double alpha,
                                        int bonferroni_divisor = 1);

struct CalibrationResult {
    int trials = 0;
    int rejections = 0;
    double rate = 0.0;
    double ci_low = 0.0;   // Wilson interval
    double ci_high = 0.0;
    bool within_band = false;  // [alpha/2, 2*alpha]
};

// Empirical type-I error of a test under the null, on fresh synthetic null
// data per trial. `test` is "fisher-z" or "g-test"; `conditioning` adds that
// many independent conditioning columns to every trial.
CalibrationResult calibrate_test(const std::string& test, int trials, double alpha,
                                 std::uint64_t seed, int conditioning = 0);

}  // namespace relcausal
