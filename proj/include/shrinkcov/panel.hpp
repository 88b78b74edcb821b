#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "shrinkcov/error.hpp"

namespace shrinkcov {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// An n x d table of observations: rows are time points, columns are
/// coordinates (sensors, assets). Column-major, so each coordinate's series
/// is contiguous. Immutable once constructed; every entry is finite.
class ReturnsPanel {
public:
    ReturnsPanel() = default;

    explicit ReturnsPanel(Matrix data, std::vector<std::string> labels = {})
        : data_(std::move(data)), labels_(std::move(labels)) {
        if (!labels_.empty() && labels_.size() != static_cast<std::size_t>(data_.cols()))
            throw data_error("panel: " + std::to_string(labels_.size()) + " labels for " +
                             std::to_string(data_.cols()) + " columns");
        for (Eigen::Index j = 0; j < data_.cols(); ++j)
            for (Eigen::Index i = 0; i < data_.rows(); ++i)
                if (!std::isfinite(data_(i, j)))
                    throw data_error("panel: non-finite value at row " + std::to_string(i) +
                                     ", column " + std::to_string(j));
    }

    std::size_t rows() const noexcept { return static_cast<std::size_t>(data_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(data_.cols()); }

    const Matrix& data() const noexcept { return data_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    auto column(std::size_t j) const { return data_.col(static_cast<Eigen::Index>(j)); }

    double operator()(std::size_t i, std::size_t j) const {
        return data_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    /// Rows [first, first + count) as a new panel.
    ReturnsPanel slice_rows(std::size_t first, std::size_t count) const {
        return ReturnsPanel(data_.middleRows(static_cast<Eigen::Index>(first),
                                             static_cast<Eigen::Index>(count)),
                            labels_);
    }

    /// Throws unless the panel has at least `min_rows` observations.
    void require_rows(std::size_t min_rows, const char* who) const {
        if (rows() < min_rows)
            throw data_error(std::string(who) + ": need at least " + std::to_string(min_rows) +
                             " observations, got " + std::to_string(rows()));
        if (cols() == 0)
            throw data_error(std::string(who) + ": panel has no columns");
    }

private:
    Matrix data_;
    std::vector<std::string> labels_;
};

} // namespace shrinkcov
