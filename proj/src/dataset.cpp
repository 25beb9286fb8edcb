#include "mgsgrf/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace mgsgrf {

Schema::Schema(std::vector<Column> columns) : columns_(std::move(columns)) {
    for (const auto& col : columns_) {
        switch (col.kind) {
            case ColumnKind::Continuous: ++d_; break;
            case ColumnKind::Categorical: ++p_; break;
            case ColumnKind::Label:
                if (label_pos_ >= 0) throw std::invalid_argument("schema: more than one label column");
                label_pos_ = static_cast<int>(&col - columns_.data());
                break;
        }
    }
    if (label_pos_ < 0) throw std::invalid_argument("schema: no label column");
    code_to_name_.resize(p_);
    name_to_code_.resize(p_);
}

const std::string& Schema::label_name() const { return columns_[label_pos_].name; }

std::vector<std::string> Schema::continuous_names() const {
    std::vector<std::string> out;
    for (const auto& c : columns_)
        if (c.kind == ColumnKind::Continuous) out.push_back(c.name);
    return out;
}

std::vector<std::string> Schema::categorical_names() const {
    std::vector<std::string> out;
    for (const auto& c : columns_)
        if (c.kind == ColumnKind::Categorical) out.push_back(c.name);
    return out;
}

int Schema::encode(int cat_index, const std::string& value) {
    auto& map = name_to_code_.at(cat_index);
    auto it = map.find(value);
    if (it != map.end()) return it->second;
    const int code = static_cast<int>(code_to_name_[cat_index].size());
    code_to_name_[cat_index].push_back(value);
    map.emplace(value, code);
    return code;
}

std::optional<int> Schema::find_code(int cat_index, const std::string& value) const {
    const auto& map = name_to_code_.at(cat_index);
    auto it = map.find(value);
    if (it == map.end()) return std::nullopt;
    return it->second;
}

const std::string& Schema::decode(int cat_index, int code) const {
    const auto& names = code_to_name_.at(cat_index);
    if (code < 0 || code >= static_cast<int>(names.size()))
        throw std::out_of_range(fmt::format("schema: code {} out of range for categorical column {}", code, cat_index));
    return names[code];
}

int Schema::cardinality(int cat_index) const {
    return static_cast<int>(code_to_name_.at(cat_index).size());
}

std::vector<int> Schema::cardinalities() const {
    std::vector<int> out(p_);
    for (int j = 0; j < p_; ++j) out[j] = cardinality(j);
    return out;
}

MixedDataset::MixedDataset(MatrixRd continuous, MatrixRi categorical,
                           std::vector<int> labels, std::vector<int> cardinalities)
    : continuous_(std::move(continuous)),
      categorical_(std::move(categorical)),
      labels_(std::move(labels)),
      cardinalities_(std::move(cardinalities)) {
    const Index n_rows = static_cast<Index>(labels_.size());
    if (continuous_.rows() != n_rows || categorical_.rows() != n_rows)
        throw std::invalid_argument("dataset: continuous/categorical/label row counts differ");
    if (continuous_.cols() + categorical_.cols() < 1)
        throw std::invalid_argument("dataset: needs at least one feature column");
    if (static_cast<Index>(cardinalities_.size()) != categorical_.cols())
        throw std::invalid_argument("dataset: cardinality table does not match categorical block");
    for (Index i = 0; i < n_rows; ++i) {
        if (labels_[i] != 0 && labels_[i] != 1)
            throw std::invalid_argument(fmt::format("dataset: label at row {} is not binary", i));
        n_minority_ += labels_[i];
        for (Index j = 0; j < categorical_.cols(); ++j) {
            const int code = categorical_(i, j);
            if (code < 0 || code >= cardinalities_[j])
                throw std::invalid_argument(
                    fmt::format("dataset: categorical code {} at row {} col {} exceeds cardinality {}",
                                code, i, j, cardinalities_[j]));
        }
    }
}

std::vector<Index> MixedDataset::minority_indices() const {
    std::vector<Index> out;
    out.reserve(n_minority_);
    for (Index i = 0; i < rows(); ++i)
        if (labels_[i] == 1) out.push_back(i);
    return out;
}

std::vector<Index> MixedDataset::majority_indices() const {
    std::vector<Index> out;
    out.reserve(rows() - n_minority_);
    for (Index i = 0; i < rows(); ++i)
        if (labels_[i] == 0) out.push_back(i);
    return out;
}

MixedDataset MixedDataset::select_rows(const std::vector<Index>& idx) const {
    MatrixRd cont(static_cast<Index>(idx.size()), continuous_.cols());
    MatrixRi cat(static_cast<Index>(idx.size()), categorical_.cols());
    std::vector<int> labels(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        cont.row(static_cast<Index>(k)) = continuous_.row(idx[k]);
        cat.row(static_cast<Index>(k)) = categorical_.row(idx[k]);
        labels[k] = labels_[idx[k]];
    }
    return MixedDataset(std::move(cont), std::move(cat), std::move(labels), cardinalities_);
}

SubsampleResult subsample_to_ratio(const MixedDataset& ds, double ratio, Rng& rng) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("subsample_to_ratio: ratio must lie in (0,1)");
    const Index n = ds.minority_count();
    const Index majority = ds.majority_count();
    if (n == 0 || majority == 0)
        throw std::invalid_argument("subsample_to_ratio: dataset needs both classes");

    // Keep n' minority rows so that n'/(majority + n') ~= ratio.
    const auto target = static_cast<Index>(std::llround(ratio * static_cast<double>(majority) / (1.0 - ratio)));
    const Index keep = std::max<Index>(Index{1}, target);
    if (keep >= n) return SubsampleResult{ds, true};

    const auto minority = ds.minority_indices();
    auto chosen = rng.sample_without_replacement(minority.size(), static_cast<std::size_t>(keep));
    std::vector<bool> kept_minority(minority.size(), false);
    for (auto c : chosen) kept_minority[c] = true;

    std::vector<Index> rows;
    rows.reserve(static_cast<std::size_t>(majority + keep));
    std::size_t minority_pos = 0;
    for (Index i = 0; i < ds.rows(); ++i) {
        if (ds.labels()[i] == 0) {
            rows.push_back(i);
        } else {
            if (kept_minority[minority_pos]) rows.push_back(i);
            ++minority_pos;
        }
    }
    return SubsampleResult{ds.select_rows(rows), false};
}

Scaler Scaler::fit(const MixedDataset& train) {
    const Index n = train.rows();
    const int d = train.d();
    if (n == 0) throw std::invalid_argument("scaler: empty training data");
    Scaler s;
    s.mean_.resize(d);
    s.std_.resize(d);
    s.constant_.assign(static_cast<std::size_t>(d), false);
    for (int j = 0; j < d; ++j) {
        const auto col = train.continuous().col(j);
        const double mean = col.mean();
        const double var = (col.array() - mean).square().sum() / static_cast<double>(n);
        const double sd = std::sqrt(var);
        s.mean_[j] = mean;
        if (sd > 0.0) {
            s.std_[j] = sd;
        } else {
            s.std_[j] = 1.0;
            s.constant_[static_cast<std::size_t>(j)] = true;
        }
    }
    return s;
}

MixedDataset Scaler::apply(const MixedDataset& ds) const {
    if (ds.d() != mean_.size())
        throw std::invalid_argument("scaler: continuous column count mismatch");
    MatrixRd cont = ds.continuous();
    for (int j = 0; j < ds.d(); ++j) {
        if (constant_[static_cast<std::size_t>(j)]) continue;
        cont.col(j) = (cont.col(j).array() - mean_[j]) / std_[j];
    }
    return MixedDataset(std::move(cont), ds.categorical(), ds.labels(), ds.cardinalities());
}

}  // namespace mgsgrf
