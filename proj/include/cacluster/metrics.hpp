#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cacluster/encoding.hpp"
#include "cacluster/parallel.hpp"

namespace cacluster {

class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows * cols) throw InvalidArgument("feature matrix data has the wrong size");
        for (double v : data_)
            if (!std::isfinite(v)) throw InvalidArgument("feature matrix entries must be finite");
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

// Continuous attributes as raw values, categorical ones as one-hot columns
// in codebook order. With standardize, every column is z-scored (population
// deviation; constant columns become zero).
inline FeatureMatrix feature_matrix(const Table& table, const EncodingPlan& plan, bool standardize = false) {
    auto rows = project_rows(plan, table);
    std::size_t cols = 0;
    for (const auto& a : plan.attributes()) cols += a.kind == AttributeKind::Continuous ? 1 : a.codebook.size();
    std::vector<double> data;
    data.reserve(rows.size() * cols);
    for (const auto& row : rows) {
        for (std::size_t a = 0; a < plan.attributes().size(); ++a) {
            const auto& attr = plan.attributes()[a];
            if (attr.kind == AttributeKind::Continuous) {
                auto v = parse_double(row[a]);
                if (!v) throw ParseError("attribute '" + attr.name + "': non-numeric value '" + row[a] + "'");
                data.push_back(*v);
            } else {
                std::size_t hot = attr.category_index(detail::trim(row[a]));
                for (std::size_t i = 0; i < attr.codebook.size(); ++i) data.push_back(i == hot ? 1.0 : 0.0);
            }
        }
    }
    if (standardize && !rows.empty()) {
        const std::size_t t = rows.size();
        for (std::size_t c = 0; c < cols; ++c) {
            double mean = 0;
            for (std::size_t r = 0; r < t; ++r) mean += data[r * cols + c];
            mean /= static_cast<double>(t);
            double var = 0;
            for (std::size_t r = 0; r < t; ++r) var += (data[r * cols + c] - mean) * (data[r * cols + c] - mean);
            double sd = std::sqrt(var / static_cast<double>(t));
            for (std::size_t r = 0; r < t; ++r)
                data[r * cols + c] = sd > 0 ? (data[r * cols + c] - mean) / sd : 0.0;
        }
    }
    return FeatureMatrix(rows.size(), cols, std::move(data));
}

namespace detail {

struct DenseLabels {
    std::vector<std::size_t> index;  // per point, 0..k-1
    std::vector<std::size_t> sizes;
    std::size_t k() const { return sizes.size(); }
};

inline DenseLabels densify(const FeatureMatrix& x, std::span<const unsigned> labels) {
    if (labels.size() != x.rows())
        throw InvalidArgument("label count " + std::to_string(labels.size()) + " differs from row count " +
                              std::to_string(x.rows()));
    std::map<unsigned, std::size_t> ids;
    for (auto l : labels) ids.emplace(l, 0);
    std::size_t next = 0;
    for (auto& [l, i] : ids) i = next++;
    DenseLabels d;
    d.sizes.assign(ids.size(), 0);
    d.index.reserve(labels.size());
    for (auto l : labels) {
        d.index.push_back(ids[l]);
        ++d.sizes[ids[l]];
    }
    return d;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

inline std::vector<double> centroids(const FeatureMatrix& x, const DenseLabels& d) {
    std::vector<double> c(d.k() * x.cols(), 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t j = 0; j < x.cols(); ++j) c[d.index[r] * x.cols() + j] += x.at(r, j);
    for (std::size_t k = 0; k < d.k(); ++k)
        for (std::size_t j = 0; j < x.cols(); ++j) c[k * x.cols() + j] /= static_cast<double>(d.sizes[k]);
    return c;
}

inline void require_clusters(const FeatureMatrix& x, const DenseLabels& d, const char* index) {
    if (x.rows() < 2) throw InvalidArgument(std::string(index) + " needs at least two points");
    if (d.k() < 2) throw InvalidArgument(std::string(index) + " needs at least two clusters");
}

} // namespace detail

// Mean over points of (b - a) / max(a, b); a point alone in its cluster
// contributes 0.
inline double silhouette(const FeatureMatrix& x, std::span<const unsigned> labels, unsigned threads = 1) {
    auto d = detail::densify(x, labels);
    detail::require_clusters(x, d, "silhouette");
    const std::size_t t = x.rows();
    std::vector<double> s(t, 0.0);
    parallel_for(t, threads, [&](std::size_t i) {
        const std::size_t own = d.index[i];
        if (d.sizes[own] == 1) return;
        std::vector<double> sum(d.k(), 0.0);
        auto xi = x.row(i);
        for (std::size_t j = 0; j < t; ++j)
            if (j != i) sum[d.index[j]] += detail::distance(xi, x.row(j));
        double a = sum[own] / static_cast<double>(d.sizes[own] - 1);
        double b = INFINITY;
        for (std::size_t k = 0; k < d.k(); ++k)
            if (k != own) b = std::min(b, sum[k] / static_cast<double>(d.sizes[k]));
        double m = std::max(a, b);
        s[i] = m > 0 ? (b - a) / m : 0.0;
    });
    double total = 0;
    for (double v : s) total += v;
    return total / static_cast<double>(t);
}

// nullopt when two centroids coincide (the index is infinite).
inline std::optional<double> davies_bouldin(const FeatureMatrix& x, std::span<const unsigned> labels) {
    auto d = detail::densify(x, labels);
    detail::require_clusters(x, d, "Davies-Bouldin");
    const std::size_t K = d.k(), m = x.cols();
    auto c = detail::centroids(x, d);
    auto centroid = [&](std::size_t k) { return std::span<const double>(c.data() + k * m, m); };
    std::vector<double> sigma(K, 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) sigma[d.index[r]] += detail::distance(x.row(r), centroid(d.index[r]));
    for (std::size_t k = 0; k < K; ++k) sigma[k] /= static_cast<double>(d.sizes[k]);

    double total = 0;
    for (std::size_t i = 0; i < K; ++i) {
        double worst = 0;
        for (std::size_t j = 0; j < K; ++j) {
            if (j == i) continue;
            double sep = detail::distance(centroid(i), centroid(j));
            if (sep == 0) return std::nullopt;
            worst = std::max(worst, (sigma[i] + sigma[j]) / sep);
        }
        total += worst;
    }
    return total / static_cast<double>(K);
}

// nullopt when the within-cluster dispersion is zero.
inline std::optional<double> calinski_harabasz(const FeatureMatrix& x, std::span<const unsigned> labels) {
    auto d = detail::densify(x, labels);
    detail::require_clusters(x, d, "Calinski-Harabasz");
    const std::size_t N = x.rows(), K = d.k(), m = x.cols();
    if (K >= N) throw InvalidArgument("Calinski-Harabasz needs fewer clusters than points");
    auto c = detail::centroids(x, d);
    std::vector<double> mean(m, 0.0);
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t j = 0; j < m; ++j) mean[j] += x.at(r, j);
    for (auto& v : mean) v /= static_cast<double>(N);

    double between = 0, within = 0;
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t j = 0; j < m; ++j) {
            double diff = c[k * m + j] - mean[j];
            between += static_cast<double>(d.sizes[k]) * diff * diff;
        }
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t j = 0; j < m; ++j) {
            double diff = x.at(r, j) - c[d.index[r] * m + j];
            within += diff * diff;
        }
    if (within == 0) return std::nullopt;
    return (between / static_cast<double>(K - 1)) / (within / static_cast<double>(N - K));
}

struct ScoreReport {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t clusters = 0;
    std::optional<double> silhouette;
    std::optional<double> davies_bouldin;
    std::optional<double> calinski_harabasz;

    void write(std::ostream& os) const {
        auto value = [](const std::optional<double>& v) {
            return v ? detail::format_double(*v) : std::string("OUT_OF_DOMAIN");
        };
        os << "format=cacluster-scores/1\n"
           << "t=" << rows << "\n"
           << "d=" << cols << "\n"
           << "clusters=" << clusters << "\n"
           << "silhouette=" << value(silhouette) << "\n"
           << "davies_bouldin=" << value(davies_bouldin) << "\n"
           << "calinski_harabasz=" << value(calinski_harabasz) << "\n";
    }
};

// All three indices; any that is undefined for this labelling (one
// cluster, one point per cluster, zero dispersion) is left empty.
inline ScoreReport score(const FeatureMatrix& x, std::span<const unsigned> labels, unsigned threads = 1) {
    ScoreReport r;
    r.rows = x.rows();
    r.cols = x.cols();
    auto d = detail::densify(x, labels);
    r.clusters = d.k();
    if (x.rows() < 2 || d.k() < 2) return r;
    r.silhouette = silhouette(x, labels, threads);
    r.davies_bouldin = davies_bouldin(x, labels);
    if (d.k() < x.rows()) r.calinski_harabasz = calinski_harabasz(x, labels);
    return r;
}

} // namespace cacluster
