#pragma once

// Plain-text file formats used by the command-line tool. Doubles are written
// with 17 significant digits so every value round-trips exactly.

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "proxcor/coverage.hpp"
#include "proxcor/false_correlation.hpp"

namespace proxcor::io {

std::string format_double(double x);

// Single column with header `value`.
std::vector<double> read_vector_csv(const std::filesystem::path& path);
void write_vector_csv(const std::filesystem::path& path, const std::vector<double>& values);

// Header `subject,<id1>,<id2>,...`; one row per subject, one column per detector.
struct EnsembleTable {
    std::vector<std::string> subjects;
    std::vector<std::string> ids;
    std::vector<std::vector<double>> columns; // columns[d][subject]
};

EnsembleTable read_ensemble_csv(const std::filesystem::path& path);
void write_ensemble_csv(const std::filesystem::path& path, const EnsembleTable& table);

// Sidecar `id,tag`.
std::map<std::string, std::string> read_tags_csv(const std::filesystem::path& path);
void write_tags_csv(const std::filesystem::path& path, const std::vector<std::pair<std::string, std::string>>& tags);

// `n,probability`
void write_curve_csv(const std::filesystem::path& path, const std::vector<CurvePoint>& curve);

// `id,tag,p1,p2`
void write_disc_csv(const std::filesystem::path& path, const std::vector<EnsembleRecord>& records,
                    const DiscProjection& disc);

// Table of records as an ensemble file (subjects numbered from 1).
EnsembleTable to_table(const std::vector<EnsembleRecord>& records);

} // namespace proxcor::io
