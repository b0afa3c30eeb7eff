#include "proxcor/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

#include "proxcor/errors.hpp"
#include "proxcor/parallel.hpp"
#include "proxcor/random.hpp"
#include "proxcor/tsphere.hpp"

namespace proxcor {

namespace {

void require_records(const std::vector<EnsembleRecord>& records, std::size_t minimum) {
    if (records.size() < minimum) {
        std::ostringstream msg;
        msg << "need at least " << minimum << " records (got " << records.size() << ")";
        throw Error(ErrorKind::TooFewRecords, msg.str());
    }
}

Eigen::MatrixXd tail_matrix(const std::vector<EnsembleRecord>& records, const OrthonormalBasis& basis) {
    const auto m = static_cast<Eigen::Index>(records.size());
    const auto width = static_cast<Eigen::Index>(basis.dimension() - 2);
    Eigen::MatrixXd tails(m, width);
    for (Eigen::Index j = 0; j < m; ++j) {
        const auto& rec = records[static_cast<std::size_t>(j)];
        if (rec.vector.size() != basis.dimension()) {
            throw Error(ErrorKind::DimensionMismatch, "record " + rec.id + " has the wrong number of subjects");
        }
        const Eigen::VectorXd y = basis.rotate(rec.vector.values());
        tails.row(j) = y.tail(width).transpose();
    }
    return tails;
}

double centered_trace(const Eigen::MatrixXd& tails) {
    const Eigen::RowVectorXd mean = tails.colwise().mean();
    return (tails.rowwise() - mean).squaredNorm() / static_cast<double>(tails.rows() - 1);
}

} // namespace

EnsembleRecord make_record(std::string id, std::string tag, NormalizedVector vector, const NormalizedVector& anchor) {
    const double q_hat = pearson(vector, anchor);
    return {std::move(id), std::move(tag), std::move(vector), q_hat};
}

std::vector<EnsembleRecord> filter_band(const std::vector<EnsembleRecord>& records, double q_lo, double q_hi) {
    if (!(-1.0 <= q_lo && q_lo <= q_hi && q_hi <= 1.0)) {
        std::ostringstream msg;
        msg << "band must satisfy -1 <= q_lo <= q_hi <= 1 (got [" << q_lo << ", " << q_hi << "])";
        throw Error(ErrorKind::InvalidParams, msg.str());
    }
    std::vector<EnsembleRecord> kept;
    std::copy_if(records.begin(), records.end(), std::back_inserter(kept),
                 [&](const EnsembleRecord& r) { return r.q_hat >= q_lo && r.q_hat <= q_hi; });
    if (kept.empty()) {
        std::ostringstream msg;
        msg << "no records with correlation in [" << q_lo << ", " << q_hi << "]";
        throw Error(ErrorKind::EmptyBand, msg.str());
    }
    return kept;
}

DiscProjection disc_projection(const std::vector<EnsembleRecord>& records, const NormalizedVector& anchor) {
    return disc_projection(records, build_basis(anchor));
}

DiscProjection disc_projection(const std::vector<EnsembleRecord>& records, const OrthonormalBasis& basis) {
    require_records(records, 3);
    const Eigen::MatrixXd tails = tail_matrix(records, basis);
    const Eigen::MatrixXd centered = tails.rowwise() - tails.colwise().mean();
    const double denom = static_cast<double>(records.size() - 1);

    DiscProjection out;
    double min_q = 1.0;
    for (const auto& r : records) min_q = std::min(min_q, std::abs(r.q_hat));
    out.radius_bound = std::sqrt(std::max(0.0, 1.0 - min_q * min_q));
    out.points.assign(records.size(), {0.0, 0.0});

    if (centered.squaredNorm() == 0.0) return out; // no spread, no principal axes

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const Eigen::MatrixXd& axes = svd.matrixV();
    const Eigen::Index k = std::min<Eigen::Index>(2, axes.cols());
    // Fix the sign of each axis (largest |component| positive) so output does
    // not depend on SVD internals.
    Eigen::MatrixXd top = Eigen::MatrixXd::Zero(axes.rows(), 2);
    for (Eigen::Index c = 0; c < k; ++c) {
        Eigen::Index arg;
        axes.col(c).cwiseAbs().maxCoeff(&arg);
        top.col(c) = axes(arg, c) < 0.0 ? Eigen::VectorXd(-axes.col(c)) : Eigen::VectorXd(axes.col(c));
    }
    const Eigen::MatrixXd projected = tails * top;
    for (Eigen::Index j = 0; j < projected.rows(); ++j) {
        out.points[static_cast<std::size_t>(j)] = {projected(j, 0), projected(j, 1)};
    }
    out.explained_variance = {sv(0) * sv(0) / denom, k > 1 ? sv(1) * sv(1) / denom : 0.0};
    return out;
}

double covariance_trace(const std::vector<EnsembleRecord>& records, const NormalizedVector& anchor) {
    return covariance_trace(records, build_basis(anchor));
}

double covariance_trace(const std::vector<EnsembleRecord>& records, const OrthonormalBasis& basis) {
    require_records(records, 2);
    return centered_trace(tail_matrix(records, basis));
}

double tail_covariance_trace(const std::vector<std::vector<double>>& tails) {
    if (tails.size() < 2) throw Error(ErrorKind::TooFewRecords, "need at least 2 tails");
    const std::size_t width = tails.front().size();
    std::vector<double> mean(width, 0.0);
    for (const auto& t : tails)
        for (std::size_t i = 0; i < width; ++i) mean[i] += t[i];
    for (auto& x : mean) x /= static_cast<double>(tails.size());
    double ss = 0.0;
    for (const auto& t : tails)
        for (std::size_t i = 0; i < width; ++i) ss += (t[i] - mean[i]) * (t[i] - mean[i]);
    return ss / static_cast<double>(tails.size() - 1);
}

double min_pairwise_corr(const std::vector<EnsembleRecord>& records) {
    require_records(records, 2);
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < records.size(); ++a)
        for (std::size_t b = a + 1; b < records.size(); ++b)
            lowest = std::min(lowest, pearson(records[a].vector, records[b].vector));
    return lowest;
}

std::vector<EnsembleRecord> null_ensemble(const std::vector<EnsembleRecord>& records, const OrthonormalBasis& basis,
                                          std::uint64_t seed, std::uint64_t trial) {
    std::vector<EnsembleRecord> out;
    out.reserve(records.size());
    std::vector<double> tail(basis.dimension() - 2);
    for (std::size_t j = 0; j < records.size(); ++j) {
        Stream stream(seed, trial * records.size() + j, salt::null_disc);
        const double q = records[j].q_hat;
        draw_sphere_point(stream, std::sqrt(std::max(0.0, 1.0 - q * q)), tail);
        out.push_back({"null-" + std::to_string(j), "null", from_tail_coordinates(q, tail, basis), q});
    }
    return out;
}

CoverageReport coverage_significance(const std::vector<EnsembleRecord>& records, const NormalizedVector& anchor,
                                     std::size_t trials, std::uint64_t seed) {
    require_records(records, 3);
    if (trials < 999) throw Error(ErrorKind::InvalidParams, "need at least 999 null trials");
    const auto basis = build_basis(anchor);
    const Eigen::MatrixXd tails = tail_matrix(records, basis);
    const auto m = records.size();
    const std::size_t width = basis.dimension() - 2;

    CoverageReport report;
    report.trials = trials;
    report.seed = seed;
    report.trace_detectors = centered_trace(tails);

    std::vector<double> radius(m);
    double lo = 1.0, hi = -1.0, expected = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double q = records[j].q_hat;
        radius[j] = std::sqrt(std::max(0.0, 1.0 - q * q));
        expected += radius[j] * radius[j];
        lo = std::min(lo, q);
        hi = std::max(hi, q);
    }
    report.expected_null_trace = expected / static_cast<double>(m);
    report.band = {lo, hi};

    // The trace is rotation invariant, so null ensembles are drawn directly
    // in tail coordinates.
    report.null_traces.assign(trials, 0.0);
    parallel_blocks(trials, 64, [&](std::size_t begin, std::size_t end) {
        std::vector<std::vector<double>> sample(m, std::vector<double>(width));
        for (std::size_t t = begin; t < end; ++t) {
            for (std::size_t j = 0; j < m; ++j) {
                Stream stream(seed, t * m + j, salt::coverage_null);
                draw_sphere_point(stream, radius[j], sample[j]);
            }
            report.null_traces[t] = tail_covariance_trace(sample);
        }
    });

    std::size_t at_or_below = 0;
    double sum = 0.0;
    for (double t : report.null_traces) {
        if (t <= report.trace_detectors) ++at_or_below;
        sum += t;
    }
    report.null_mean = sum / static_cast<double>(trials);
    double ss = 0.0;
    for (double t : report.null_traces) ss += (t - report.null_mean) * (t - report.null_mean);
    report.null_sd = std::sqrt(ss / static_cast<double>(trials - 1));
    report.p_value = static_cast<double>(1 + at_or_below) / static_cast<double>(1 + trials);
    report.min_pairwise_corr = min_pairwise_corr(records);

    std::map<std::string, std::vector<Eigen::Index>> by_tag;
    for (std::size_t j = 0; j < m; ++j) by_tag[records[j].tag].push_back(static_cast<Eigen::Index>(j));
    for (const auto& [tag, rows] : by_tag) {
        TagSummary summary;
        summary.count = rows.size();
        summary.trace = std::numeric_limits<double>::quiet_NaN();
        if (rows.size() >= 2) summary.trace = centered_trace(tails(rows, Eigen::all));
        report.tags[tag] = summary;
    }
    return report;
}

} // namespace proxcor
