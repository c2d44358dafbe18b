#include "relcausal/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "relcausal/errors.hpp"

namespace relcausal {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool is_integral_value(double v) {
    return std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15;
}

}  // namespace

Dataset::Dataset(std::vector<Column> columns, std::optional<std::uint64_t> seed)
    : columns_(std::move(columns)), seed_(seed) {
    std::set<std::string> names;
    int conditions = 0;
    const std::size_t rows = columns_.empty() ? 0 : columns_[0].values.size();
    for (const auto& col : columns_) {
        if (col.name.empty()) throw InputError("column name must not be empty");
        if (!names.insert(col.name).second) {
            throw InputError("duplicate column '" + col.name + "'");
        }
        if (col.role == VariableRole::Hidden) {
            throw InputError("hidden variable '" + col.name + "' cannot appear in a dataset");
        }
        if (col.role != VariableRole::Feature) ++conditions;
        if (col.values.size() != rows) throw InputError("ragged columns in dataset");
        if (col.kind == ColumnKind::Categorical) {
            if (col.cardinality < 2) {
                throw InputError("categorical column '" + col.name +
                                 "' needs cardinality >= 2");
            }
            for (double v : col.values) {
                if (!is_integral_value(v) || v < 0 || v >= col.cardinality) {
                    throw InputError("categorical column '" + col.name +
                                     "' holds an out-of-range value");
                }
            }
        }
    }
    if (conditions > 1) {
        throw InputError("a dataset carries at most one condition column");
    }
}

const Column& Dataset::column(const std::string& name) const {
    return columns_.at(column_index(name));
}

bool Dataset::has_column(const std::string& name) const {
    return std::any_of(columns_.begin(), columns_.end(),
                       [&](const Column& c) { return c.name == name; });
}

int Dataset::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].name == name) return static_cast<int>(i);
    }
    throw InputError("unknown column '" + name + "'");
}

std::vector<std::string> Dataset::column_names() const {
    std::vector<std::string> out;
    for (const auto& c : columns_) out.push_back(c.name);
    return out;
}

std::vector<std::string> Dataset::feature_names() const {
    std::vector<std::string> out;
    for (const auto& c : columns_) {
        if (c.role == VariableRole::Feature) out.push_back(c.name);
    }
    return out;
}

std::optional<std::string> Dataset::condition_name() const {
    for (const auto& c : columns_) {
        if (c.role == VariableRole::Stimulus || c.role == VariableRole::Response) {
            return c.name;
        }
    }
    return std::nullopt;
}

std::vector<double> Dataset::numeric_view(const std::string& name) const {
    const Column& col = column(name);
    if (col.kind == ColumnKind::Numeric) return col.values;
    if (col.cardinality != 2) {
        throw InputError("column '" + name +
                         "' is categorical with more than two classes; no numeric encoding");
    }
    std::vector<double> out;
    out.reserve(col.values.size());
    for (double v : col.values) out.push_back(v > 0.5 ? 1.0 : -1.0);
    return out;
}

std::string Dataset::to_csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) out << ',';
        out << columns_[i].name << ':' << role_name(columns_[i].role);
    }
    out << '\n';
    const std::size_t rows = n_rows();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i) out << ',';
            const Column& col = columns_[i];
            if (col.kind == ColumnKind::Categorical) {
                out << static_cast<long long>(col.values[r]);
            } else {
                out << format_double(col.values[r]);
            }
        }
        out << '\n';
    }
    return out.str();
}

void Dataset::save_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << to_csv();
    if (!out) throw IoError("failed writing '" + path + "'");
}

Dataset Dataset::from_csv_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty CSV input");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<Column> columns;
    {
        std::istringstream header(line);
        std::string field;
        while (std::getline(header, field, ',')) {
            const std::size_t colon = field.find(':');
            if (colon == std::string::npos) {
                throw InputError("CSV header field '" + field + "' is not 'name:role'");
            }
            Column col;
            col.name = field.substr(0, colon);
            col.role = role_from_name(field.substr(colon + 1));
            columns.push_back(std::move(col));
        }
    }
    if (columns.empty()) throw InputError("CSV header declares no columns");

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::size_t i = 0;
        while (std::getline(row, field, ',')) {
            if (i >= columns.size()) break;
            try {
                std::size_t used = 0;
                const double v = std::stod(field, &used);
                if (used != field.size()) throw std::invalid_argument(field);
                columns[i].values.push_back(v);
            } catch (const std::exception&) {
                throw InputError("line " + std::to_string(line_no) + ": bad number '" +
                                 field + "'");
            }
            ++i;
        }
        if (i != columns.size()) {
            throw InputError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(columns.size()) + " fields");
        }
    }

    // A column whose every entry is a small nonnegative integer is read back
    // as categorical; continuous samples are never all-integral in practice.
    for (auto& col : columns) {
        bool integral = !col.values.empty();
        double max_v = 0;
        for (double v : col.values) {
            if (!is_integral_value(v) || v < 0 || v > 64) { integral = false; break; }
            max_v = std::max(max_v, v);
        }
        if (integral) {
            col.kind = ColumnKind::Categorical;
            col.cardinality = std::max(2, static_cast<int>(max_v) + 1);
        }
    }
    return Dataset(std::move(columns), std::nullopt);
}

Dataset Dataset::load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_csv_text(buf.str());
}

Dataset binarize(const Dataset& data, const std::vector<std::string>& columns,
                 double threshold) {
    std::set<std::string> wanted(columns.begin(), columns.end());
    for (const auto& name : columns) {
        (void)data.column(name);  // throws on unknown names
    }
    std::vector<Column> out;
    for (const auto& col : data.columns()) {
        Column next = col;
        const bool selected = wanted.empty() ? col.kind == ColumnKind::Numeric
                                             : wanted.count(col.name) > 0;
        if (selected) {
            if (col.kind != ColumnKind::Numeric) {
                throw InputError("column '" + col.name + "' is already categorical");
            }
            next.kind = ColumnKind::Categorical;
            next.cardinality = 2;
            for (auto& v : next.values) v = v > threshold ? 1.0 : 0.0;
        }
        out.push_back(std::move(next));
    }
    return Dataset(std::move(out), data.seed());
}

}  // namespace relcausal
