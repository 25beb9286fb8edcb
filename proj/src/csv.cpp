#include "mgsgrf/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

namespace mgsgrf {

namespace {

// One CSV record; handles quoted fields with embedded commas and "" escapes.
std::vector<std::string> split_record(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

double parse_double(const std::string& cell, std::size_t row, const std::string& column) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw std::runtime_error(
            fmt::format("csv: cannot parse '{}' as number (row {}, column '{}')", cell, row + 1, column));
    return value;
}

ColumnKind kind_from_string(const std::string& s) {
    if (s == "continuous") return ColumnKind::Continuous;
    if (s == "categorical") return ColumnKind::Categorical;
    if (s == "label") return ColumnKind::Label;
    throw std::runtime_error(fmt::format("schema: unknown column kind '{}'", s));
}

std::string kind_to_string(ColumnKind k) {
    switch (k) {
        case ColumnKind::Continuous: return "continuous";
        case ColumnKind::Categorical: return "categorical";
        case ColumnKind::Label: return "label";
    }
    return "";
}

}  // namespace

MixedDataset load_csv(const std::filesystem::path& path, Schema& schema) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(fmt::format("csv: cannot open '{}'", path.string()));

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(fmt::format("csv: '{}' is empty", path.string()));
    const auto header = split_record(line);

    // Map each schema column to its position in the file.
    std::vector<int> file_pos;
    for (const auto& col : schema.columns()) {
        auto it = std::find(header.begin(), header.end(), col.name);
        if (it == header.end())
            throw std::runtime_error(fmt::format("csv: column '{}' missing from '{}'", col.name, path.string()));
        file_pos.push_back(static_cast<int>(it - header.begin()));
    }

    const int d = schema.continuous_count();
    const int p = schema.categorical_count();
    std::vector<double> cont_values;
    std::vector<int> cat_values;
    std::vector<int> labels;

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_record(line);
        if (fields.size() != header.size())
            throw std::runtime_error(fmt::format("csv: row {} has {} fields, header has {}",
                                                 row + 1, fields.size(), header.size()));
        int ci = 0, ki = 0;
        for (std::size_t s = 0; s < schema.columns().size(); ++s) {
            const auto& col = schema.columns()[s];
            const std::string& cell = fields[static_cast<std::size_t>(file_pos[s])];
            if (cell.empty())
                throw std::runtime_error(
                    fmt::format("csv: missing value at row {}, column '{}'", row + 1, col.name));
            switch (col.kind) {
                case ColumnKind::Continuous:
                    cont_values.push_back(parse_double(cell, row, col.name));
                    ++ci;
                    break;
                case ColumnKind::Categorical:
                    cat_values.push_back(schema.encode(ki, cell));
                    ++ki;
                    break;
                case ColumnKind::Label: {
                    const double v = parse_double(cell, row, col.name);
                    if (v != 0.0 && v != 1.0)
                        throw std::runtime_error(
                            fmt::format("csv: label '{}' at row {} is not 0/1", cell, row + 1));
                    labels.push_back(static_cast<int>(v));
                    break;
                }
            }
        }
        ++row;
    }

    const Index n = static_cast<Index>(labels.size());
    MatrixRd cont(n, d);
    MatrixRi cat(n, p);
    for (Index i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) cont(i, j) = cont_values[static_cast<std::size_t>(i) * d + j];
        for (int j = 0; j < p; ++j) cat(i, j) = cat_values[static_cast<std::size_t>(i) * p + j];
    }
    return MixedDataset(std::move(cont), std::move(cat), std::move(labels), schema.cardinalities());
}

void write_csv(const std::filesystem::path& path, const MixedDataset& ds, const Schema& schema,
               const std::string& flag_column, const std::vector<int>* flags) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(fmt::format("csv: cannot write '{}'", path.string()));

    bool first = true;
    for (const auto& col : schema.columns()) {
        if (!first) out << ',';
        out << col.name;
        first = false;
    }
    if (!flag_column.empty()) out << ',' << flag_column;
    out << '\n';

    for (Index i = 0; i < ds.rows(); ++i) {
        int ci = 0, ki = 0;
        first = true;
        for (const auto& col : schema.columns()) {
            if (!first) out << ',';
            first = false;
            switch (col.kind) {
                case ColumnKind::Continuous:
                    out << fmt::format("{:.17g}", ds.continuous()(i, ci++));
                    break;
                case ColumnKind::Categorical:
                    out << schema.decode(ki, ds.categorical()(i, ki));
                    ++ki;
                    break;
                case ColumnKind::Label:
                    out << ds.labels()[static_cast<std::size_t>(i)];
                    break;
            }
        }
        if (!flag_column.empty()) out << ',' << (flags ? (*flags)[static_cast<std::size_t>(i)] : 0);
        out << '\n';
    }
}

Schema load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(fmt::format("schema: cannot open '{}'", path.string()));
    nlohmann::json j;
    in >> j;
    std::vector<Schema::Column> cols;
    for (const auto& item : j.at("columns"))
        cols.push_back({item.at("name").get<std::string>(), kind_from_string(item.at("kind").get<std::string>())});
    return Schema(std::move(cols));
}

void write_schema(const std::filesystem::path& path, const Schema& schema) {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& col : schema.columns())
        cols.push_back({{"name", col.name}, {"kind", kind_to_string(col.kind)}});
    std::ofstream out(path);
    if (!out) throw std::runtime_error(fmt::format("schema: cannot write '{}'", path.string()));
    out << nlohmann::json{{"columns", cols}}.dump(2) << '\n';
}

void write_dictionary(const std::filesystem::path& path, const Schema& schema) {
    nlohmann::json j = nlohmann::json::object();
    const auto names = schema.categorical_names();
    for (int k = 0; k < schema.categorical_count(); ++k) {
        nlohmann::json arr = nlohmann::json::array();
        for (int code = 0; code < schema.cardinality(k); ++code) arr.push_back(schema.decode(k, code));
        j[names[static_cast<std::size_t>(k)]] = arr;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error(fmt::format("dictionary: cannot write '{}'", path.string()));
    out << j.dump(2) << '\n';
}

void load_dictionary(const std::filesystem::path& path, Schema& schema) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(fmt::format("dictionary: cannot open '{}'", path.string()));
    nlohmann::json j;
    in >> j;
    const auto names = schema.categorical_names();
    for (int k = 0; k < schema.categorical_count(); ++k) {
        const auto it = j.find(names[static_cast<std::size_t>(k)]);
        if (it == j.end()) continue;
        for (const auto& value : *it) schema.encode(k, value.get<std::string>());
    }
}

}  // namespace mgsgrf
