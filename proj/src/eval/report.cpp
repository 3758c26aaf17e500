#include "losight/eval/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "losight/core/error.hpp"

namespace losight::eval {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw DataError("write failed for " + path.string());
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                field += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += ch;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        throw DataError("malformed number '" + s + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw NumericError("cannot format number");
    return std::string(buf, ptr);
}

ResultRow make_result_row(std::string model, std::string features, double train_mse, const MetricReport& test) {
    return {std::move(model), std::move(features), train_mse, test.mse_normalized, test.rmse, test.re, test.rrmse,
            test.r};
}

void write_results_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
    auto out = open_out(path);
    out << "model,features,train_mse,test_mse,rmse,re,rrmse,r\n";
    for (const auto& r : rows) {
        out << quote(r.model) << ',' << quote(r.features) << ',' << format_double(r.train_mse) << ','
            << format_double(r.test_mse) << ',' << format_double(r.rmse) << ',' << format_double(r.re) << ','
            << format_double(r.rrmse) << ',' << format_double(r.r) << '\n';
    }
    finish(out, path);
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "model,features,train_mse,test_mse,rmse,re,rrmse,r")
        throw DataError(path.string() + " is not a results table");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 8) throw DataError("results row has " + std::to_string(f.size()) + " fields");
        rows.push_back({f[0], f[1], parse_double(f[2]), parse_double(f[3]), parse_double(f[4]), parse_double(f[5]),
                        parse_double(f[6]), parse_double(f[7])});
    }
    return rows;
}

void write_segment_csv(const std::filesystem::path& path, const MetricReport& report) {
    auto out = open_out(path);
    out << "segment,rmse,re,rrmse,r\n";
    for (std::size_t s = 0; s < report.segments.size(); ++s) {
        const auto& m = report.segments[s];
        out << s << ',' << format_double(m.rmse) << ',' << format_double(m.re) << ',' << format_double(m.rrmse)
            << ',' << format_double(m.r) << '\n';
    }
    finish(out, path);
}

void write_selection_csv(const std::filesystem::path& path, const std::vector<FeatureGroupResult>& rows) {
    auto out = open_out(path);
    out << "rank,group,pca_k,hidden_units,raw_features,train_mse,validation_mse\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out << i + 1 << ',' << quote(r.name) << ',' << (r.pca_k ? std::to_string(*r.pca_k) : std::string("none"))
            << ',' << r.hidden_units << ',' << r.raw_features << ',' << format_double(r.train_mse) << ','
            << format_double(r.validation_mse) << '\n';
    }
    finish(out, path);
}

std::vector<Index> select_profile_samples(const Matrix& t_true, std::size_t count) {
    const Index n = t_true.rows();
    if (n == 0) return {};
    std::vector<double> rough(static_cast<std::size_t>(n), 0.0);
    for (Index i = 0; i < n; ++i)
        for (Index s = 1; s + 1 < t_true.cols(); ++s)
            rough[static_cast<std::size_t>(i)] += std::abs(t_true(i, s + 1) - 2.0 * t_true(i, s) + t_true(i, s - 1));
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return rough[static_cast<std::size_t>(a)] < rough[static_cast<std::size_t>(b)];
    });
    std::vector<Index> picked;
    const std::size_t k = std::min<std::size_t>(count, order.size());
    for (std::size_t q = 0; q < k; ++q) {
        const std::size_t pos = k == 1 ? 0 : q * (order.size() - 1) / (k - 1);
        const Index row = order[pos];
        if (std::find(picked.begin(), picked.end(), row) == picked.end()) picked.push_back(row);
    }
    return picked;
}

void write_profile_csv(const std::filesystem::path& path, const Matrix& t_true, const Matrix& t_pred,
                       const std::vector<Index>& rows, const std::vector<std::size_t>& sample_ids,
                       double total_length) {
    if (t_true.rows() != t_pred.rows() || t_true.cols() != t_pred.cols())
        throw UsageError("true and predicted profiles differ in shape");
    if (static_cast<Index>(sample_ids.size()) != t_true.rows()) throw UsageError("sample id count mismatch");
    auto out = open_out(path);
    out << "sample,segment,position_cm,t_true,t_pred\n";
    const Index segs = t_true.cols();
    for (Index row : rows) {
        for (Index s = 0; s < segs; ++s) {
            const double pos = (static_cast<double>(s) + 0.5) * total_length / static_cast<double>(segs);
            out << sample_ids[static_cast<std::size_t>(row)] << ',' << s << ',' << format_double(pos) << ','
                << format_double(t_true(row, s)) << ',' << format_double(t_pred(row, s)) << '\n';
        }
    }
    finish(out, path);
}

}  // namespace losight::eval
