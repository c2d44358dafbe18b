#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relcausal/graph.hpp"

namespace relcausal {

enum class ColumnKind { Numeric, Categorical };

struct Column {
    std::string name;
    VariableRole role = VariableRole::Feature;
    ColumnKind kind = ColumnKind::Numeric;
    int cardinality = 0;  // categorical only
    std::vector<double> values;
};

// Sampled experiment table: one condition column (stimulus or response) plus
// feature columns. Hidden variables never appear here.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<Column> columns, std::optional<std::uint64_t> seed);

    std::size_t n_rows() const { return columns_.empty() ? 0 : columns_[0].values.size(); }
    std::size_t n_columns() const { return columns_.size(); }

    const std::vector<Column>& columns() const { return columns_; }
    const Column& column(const std::string& name) const;
    const Column& column(std::size_t idx) const { return columns_.at(idx); }
    bool has_column(const std::string& name) const;
    int column_index(const std::string& name) const;

    std::optional<std::uint64_t> seed() const { return seed_; }

    std::vector<std::string> column_names() const;
    std::vector<std::string> feature_names() const;
    // The unique Stimulus or Response column, if any.
    std::optional<std::string> condition_name() const;

    // Numeric view for correlation-based tests: numeric columns pass through,
    // binary categorical columns map to -1/+1. Throws for wider categories.
    std::vector<double> numeric_view(const std::string& name) const;

    // CSV with a `name:role` header; '.' decimal separator; row order is
    // generation order.
    std::string to_csv() const;
    void save_csv(const std::string& path) const;
    static Dataset from_csv_text(const std::string& text);
    static Dataset load_csv(const std::string& path);

private:
    std::vector<Column> columns_;
    std::optional<std::uint64_t> seed_;
};

// Copy with the named numeric columns thresholded to categorical {0,1}
// (value > threshold). An empty list binarizes every numeric column.
Dataset binarize(const Dataset& data, const std::vector<std::string>& columns = {},
                 double threshold = 0.0);

}  // namespace relcausal
