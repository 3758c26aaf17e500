#pragma once

#include <vector>

#include <json.hpp>

#include "losight/core/error.hpp"
#include "losight/core/matrix.hpp"

namespace losight {

/// Matrices as nested row arrays, vectors as flat arrays.
inline nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw DataError("expected a matrix (array of rows)");
    const auto rows = static_cast<Index>(j.size());
    const Index cols = rows == 0 ? 0 : static_cast<Index>(j.front().size());
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) throw DataError("ragged matrix");
        for (Index k = 0; k < cols; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
    return m;
}

inline nlohmann::json vector_to_json(const Vector& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

inline Vector vector_from_json(const nlohmann::json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

inline Matrix select_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
    Matrix out(static_cast<Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<Index>(rows[i]) >= m.rows()) throw UsageError("row index out of range");
        out.row(static_cast<Index>(i)) = m.row(static_cast<Index>(rows[i]));
    }
    return out;
}

}  // namespace losight
