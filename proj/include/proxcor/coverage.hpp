#pragma once

// How broadly an ensemble of detector output vectors spreads over T^n.
//
// Every record is expressed in the rotated frame of the ensemble's anchor u,
// where its last n - 2 coordinates (the tail) locate it on a sphere of radius
// sqrt(1 - q_hat^2). Spread is measured by the trace of the tail covariance
// and compared against ensembles drawn uniformly from the same spheres.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "proxcor/geometry.hpp"

namespace proxcor {

struct EnsembleRecord {
    std::string id;
    std::string tag;
    NormalizedVector vector;
    double q_hat = 0.0; // rho(vector, anchor)
};

// Builds a record, computing q_hat against the anchor.
EnsembleRecord make_record(std::string id, std::string tag, NormalizedVector vector, const NormalizedVector& anchor);

// Records with q_lo <= q_hat <= q_hi, order preserved. Throws EmptyBand when
// nothing survives.
std::vector<EnsembleRecord> filter_band(const std::vector<EnsembleRecord>& records, double q_lo, double q_hi);

struct DiscProjection {
    std::vector<std::pair<double, double>> points;
    std::pair<double, double> explained_variance{0.0, 0.0};
    double radius_bound = 0.0;
};

// Tails projected onto the top two principal axes of the centred tails. The
// projection is of the uncentred tails, so every point stays inside the disc
// of radius sqrt(1 - min q_hat^2).
DiscProjection disc_projection(const std::vector<EnsembleRecord>& records, const NormalizedVector& anchor);
DiscProjection disc_projection(const std::vector<EnsembleRecord>& records, const OrthonormalBasis& basis);

// Trace of the sample covariance (denominator m - 1) of the tails.
double covariance_trace(const std::vector<EnsembleRecord>& records, const NormalizedVector& anchor);
double covariance_trace(const std::vector<EnsembleRecord>& records, const OrthonormalBasis& basis);

// Same statistic on raw tail rows.
double tail_covariance_trace(const std::vector<std::vector<double>>& tails);

struct TagSummary {
    std::size_t count = 0;
    double trace = 0.0; // NaN when the tag has a single record
};

struct CoverageReport {
    double trace_detectors = 0.0;
    std::vector<double> null_traces;
    double null_mean = 0.0;
    double null_sd = 0.0;
    double expected_null_trace = 0.0; // mean over records of 1 - q_hat^2
    double p_value = 1.0;
    double min_pairwise_corr = 1.0;
    std::pair<double, double> band{-1.0, 1.0};
    std::map<std::string, TagSummary> tags;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
};

// One-tailed Monte Carlo test of "less spread than uniform": the null draws
// each synthetic vector uniformly from T^n at its record's own q_hat.
// p = (1 + #{null <= observed}) / (1 + trials).
CoverageReport coverage_significance(const std::vector<EnsembleRecord>& records, const NormalizedVector& anchor,
                                     std::size_t trials, std::uint64_t seed);

// One synthetic uniform ensemble radius-matched to `records` (null trial
// `trial` of the given seed), as full records tagged "null".
std::vector<EnsembleRecord> null_ensemble(const std::vector<EnsembleRecord>& records, const OrthonormalBasis& basis,
                                          std::uint64_t seed, std::uint64_t trial);

double min_pairwise_corr(const std::vector<EnsembleRecord>& records);

} // namespace proxcor
