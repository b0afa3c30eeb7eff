#pragma once

// Zero-mean unit-length measurement vectors and the rotated frame in which
// the set of vectors with a fixed correlation to an anchor becomes a sphere.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace proxcor {

inline constexpr double kValidationTol = 1e-12;
inline constexpr double kConstructionTol = 1e-10;
inline constexpr std::size_t kMinDimension = 3;

// A measurement vector with mean 0 and Euclidean norm 1. Pearson correlation
// between two such vectors is their dot product.
class NormalizedVector {
public:
    // Validates mean and norm against `tol`; throws ConstantVector /
    // DimensionTooSmall / InvalidParams on violation.
    static NormalizedVector from_standardized(std::vector<double> values, double tol = kValidationTol);

    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    Eigen::Map<const Eigen::VectorXd> as_eigen() const {
        return {values_.data(), static_cast<Eigen::Index>(values_.size())};
    }

    bool operator==(const NormalizedVector&) const = default;

private:
    explicit NormalizedVector(std::vector<double> values) : values_(std::move(values)) {}
    friend NormalizedVector standardize(std::span<const double> raw);

    std::vector<double> values_;
};

// Centers and scales to unit l2 norm (not unit standard deviation; the two
// differ by sqrt(n) and correlations are unaffected).
NormalizedVector standardize(std::span<const double> raw);

// Pearson correlation of two standardized vectors, clamped to [-1, 1].
double pearson(const NormalizedVector& a, const NormalizedVector& b);

// Textbook Pearson coefficient of two raw vectors.
double pearson_raw(std::span<const double> x, std::span<const double> y);

// Orthonormal B with row 0 = 1/sqrt(n) (1,...,1), row 1 = u, and, when a
// coplanar vector v is given, row 2 = the unit component of v orthogonal to u.
// Remaining rows are a deterministic completion.
class OrthonormalBasis {
public:
    // Wraps an explicit matrix after checking every basis invariant.
    static OrthonormalBasis from_rows(Eigen::MatrixXd rows, const NormalizedVector& anchor,
                                      std::optional<NormalizedVector> coplanar = std::nullopt);

    std::size_t dimension() const { return static_cast<std::size_t>(rows_.rows()); }
    const Eigen::MatrixXd& rows() const { return rows_; }
    const NormalizedVector& anchor() const { return anchor_; }
    const std::optional<NormalizedVector>& coplanar() const { return coplanar_; }

    // B x
    Eigen::VectorXd rotate(std::span<const double> x) const;
    // B^T y
    Eigen::VectorXd unrotate(std::span<const double> y) const;

private:
    OrthonormalBasis(Eigen::MatrixXd rows, NormalizedVector anchor, std::optional<NormalizedVector> coplanar)
        : rows_(std::move(rows)), anchor_(std::move(anchor)), coplanar_(std::move(coplanar)) {}
    friend OrthonormalBasis build_basis(const NormalizedVector&, const std::optional<NormalizedVector>&);

    Eigen::MatrixXd rows_;
    NormalizedVector anchor_;
    std::optional<NormalizedVector> coplanar_;
};

OrthonormalBasis build_basis(const NormalizedVector& u,
                             const std::optional<NormalizedVector>& v = std::nullopt);

struct TailCoordinates {
    double q_hat = 0.0;
    std::vector<double> tail; // length n - 2
};

// Splits B x into its correlation with the anchor and the n - 2 coordinates
// locating x on the sphere of radius sqrt(1 - q_hat^2).
TailCoordinates tail_coordinates(const NormalizedVector& x, const OrthonormalBasis& basis);

// Inverse of tail_coordinates: B^T (0, q_hat, tail).
NormalizedVector from_tail_coordinates(double q_hat, std::span<const double> tail,
                                       const OrthonormalBasis& basis);

} // namespace proxcor
