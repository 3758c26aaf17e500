#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "losight/core/matrix.hpp"
#include "losight/eval/metrics.hpp"
#include "losight/eval/wrapper.hpp"

namespace losight::eval {

/// One row of the results table.
struct ResultRow {
    std::string model;
    std::string features;
    double train_mse = 0.0;  // normalized targets
    double test_mse = 0.0;   // normalized targets
    double rmse = 0.0;       // K
    double re = 0.0;
    double rrmse = 0.0;
    double r = 0.0;
};

ResultRow make_result_row(std::string model, std::string features, double train_mse, const MetricReport& test);

/// Columns: model,features,train_mse,test_mse,rmse,re,rrmse,r.
void write_results_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);

/// Columns: segment,rmse,re,rrmse,r.
void write_segment_csv(const std::filesystem::path& path, const MetricReport& report);

/// Columns: rank,group,pca_k,hidden_units,raw_features,train_mse,validation_mse.
void write_selection_csv(const std::filesystem::path& path, const std::vector<FeatureGroupResult>& rows);

/// Six test samples spanning the profile shapes: the minimum, maximum and
/// quintile points of the roughness sum |T[s+1] - 2T[s] + T[s-1]|. Returns
/// row indices into t_true.
std::vector<Index> select_profile_samples(const Matrix& t_true, std::size_t count = 6);

/// Columns: sample,segment,position_cm,t_true,t_pred; one row per segment of
/// each selected sample. `sample_ids` labels the rows of t_true.
void write_profile_csv(const std::filesystem::path& path, const Matrix& t_true, const Matrix& t_pred,
                       const std::vector<Index>& rows, const std::vector<std::size_t>& sample_ids,
                       double total_length);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace losight::eval
