#pragma once

#include <string>
#include <vector>

#include "relcausal/graph.hpp"

namespace relcausal {

enum class CiMethod { Oracle, PartialCorrelationFisherZ, ConditionalGTest };

std::string ci_method_name(CiMethod m);

// One statistical (conditional) independence decision.
struct CiDecision {
    CiStatement statement;
    double statistic = 0.0;
    double p_value = 1.0;
    double alpha = 0.0;
    CiMethod method = CiMethod::Oracle;
};

struct CiProvenance {
    enum class Kind { Oracle, Statistical };
    Kind kind = Kind::Oracle;
    double alpha = 0.0;  // statistical only
    std::string detail;  // e.g. test family, bonferroni divisor
};

// Common face of the graph oracle and the data-driven tester: answers
// "is a independent of b given Z?" over a fixed set of observed variables.
class CiProvider {
public:
    virtual ~CiProvider() = default;

    virtual CiVerdict verdict(const std::string& a, const std::string& b,
                              const std::vector<std::string>& given) const = 0;
    virtual std::vector<std::string> observed() const = 0;
    virtual CiProvenance provenance() const = 0;

    // Statistical providers record one decision per distinct query; the
    // oracle records nothing.
    virtual std::vector<CiDecision> decisions() const { return {}; }

    CiStatement query(const std::string& a, const std::string& b,
                      const std::vector<std::string>& given) const {
        CiStatement st{a, b, given, verdict(a, b, given)};
        return st;
    }
};

}  // namespace relcausal
