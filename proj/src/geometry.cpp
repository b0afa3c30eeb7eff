#include "proxcor/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "proxcor/errors.hpp"

namespace proxcor {

namespace {

void require_dimension(std::size_t n) {
    if (n < kMinDimension) {
        std::ostringstream msg;
        msg << "need at least " << kMinDimension << " subjects, got " << n;
        throw Error(ErrorKind::DimensionTooSmall, msg.str());
    }
}

void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) {
        std::ostringstream msg;
        msg << "vector lengths differ (" << a << " vs " << b << ")";
        throw Error(ErrorKind::DimensionMismatch, msg.str());
    }
}

} // namespace

NormalizedVector NormalizedVector::from_standardized(std::vector<double> values, double tol) {
    require_dimension(values.size());
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    const double norm = std::sqrt(std::inner_product(values.begin(), values.end(), values.begin(), 0.0));
    if (norm == 0.0) throw Error(ErrorKind::ConstantVector, "vector has zero length");
    if (std::abs(mean) > tol || std::abs(norm - 1.0) > tol) {
        std::ostringstream msg;
        msg << "vector is not standardized (mean " << mean << ", norm " << norm << ")";
        throw Error(ErrorKind::InvalidParams, msg.str());
    }
    return NormalizedVector(std::move(values));
}

NormalizedVector standardize(std::span<const double> raw) {
    require_dimension(raw.size());
    const double n = static_cast<double>(raw.size());
    const double mean = std::accumulate(raw.begin(), raw.end(), 0.0) / n;
    std::vector<double> centered(raw.size());
    std::transform(raw.begin(), raw.end(), centered.begin(), [mean](double x) { return x - mean; });
    // Second pass removes the residual mean left by rounding in the first.
    const double residual = std::accumulate(centered.begin(), centered.end(), 0.0) / n;
    for (auto& x : centered) x -= residual;

    const double scale = *std::max_element(centered.begin(), centered.end(),
                                           [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (scale == 0.0 || std::abs(scale) <= 1e-14 * std::max(1.0, std::abs(mean))) {
        throw Error(ErrorKind::ConstantVector, "input has zero variance; correlation is undefined");
    }
    double sumsq = 0.0;
    for (double x : centered) sumsq += (x / scale) * (x / scale);
    const double norm = std::abs(scale) * std::sqrt(sumsq);
    for (auto& x : centered) x /= norm;
    return NormalizedVector(std::move(centered));
}

double pearson(const NormalizedVector& a, const NormalizedVector& b) {
    require_same_size(a.size(), b.size());
    const double dot = std::inner_product(a.values().begin(), a.values().end(), b.values().begin(), 0.0);
    return std::clamp(dot, -1.0, 1.0);
}

double pearson_raw(std::span<const double> x, std::span<const double> y) {
    require_same_size(x.size(), y.size());
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw Error(ErrorKind::ConstantVector, "input has zero variance");
    return sxy / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------------------
// Basis construction

namespace {

// Orthonormal completion by Gram-Schmidt over the identity columns with
// column pivoting: at every step the candidate with the largest residual norm
// is accepted (ties go to the lower index). Each accepted candidate is
// re-orthogonalized once more before normalization.
void complete_basis(Eigen::MatrixXd& rows, Eigen::Index filled) {
    const Eigen::Index n = rows.cols();
    Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(n, n); // candidates as rows
    for (Eigen::Index k = 0; k < filled; ++k) {
        const Eigen::VectorXd proj = residual * rows.row(k).transpose();
        residual -= proj * rows.row(k);
    }
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (Eigen::Index k = filled; k < n; ++k) {
        Eigen::Index best = -1;
        double best_norm = -1.0;
        for (Eigen::Index c = 0; c < n; ++c) {
            if (used[static_cast<std::size_t>(c)]) continue;
            const double norm = residual.row(c).squaredNorm();
            if (norm > best_norm) {
                best_norm = norm;
                best = c;
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        Eigen::RowVectorXd row = residual.row(best);
        for (Eigen::Index j = 0; j < k; ++j) row -= row.dot(rows.row(j)) * rows.row(j);
        row.normalize();
        rows.row(k) = row;
        const Eigen::VectorXd proj = residual * row.transpose();
        residual -= proj * row;
    }
}

void check_basis(const Eigen::MatrixXd& rows, const NormalizedVector& u,
                 const std::optional<NormalizedVector>& v) {
    const Eigen::Index n = rows.rows();
    auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidParams, "basis invariant violated: " + what); };
    if (rows.cols() != n || static_cast<std::size_t>(n) != u.size()) fail("shape");
    const Eigen::MatrixXd gram = rows * rows.transpose();
    if ((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > kConstructionTol) fail("B B^T != I");
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    if ((rows.row(0).array() - inv_sqrt_n).abs().maxCoeff() > kConstructionTol &&
        (rows.row(0).array() + inv_sqrt_n).abs().maxCoeff() > kConstructionTol) {
        fail("first row not proportional to the ones vector");
    }
    Eigen::VectorXd bu = rows * u.as_eigen();
    bu(1) -= 1.0;
    if (bu.cwiseAbs().maxCoeff() > kConstructionTol) fail("B u != e2");
    if (v) {
        const double r = pearson(u, *v);
        Eigen::VectorXd bv = rows * v->as_eigen();
        bv(1) -= r;
        bv(2) -= std::sqrt(std::max(0.0, 1.0 - r * r));
        if (bv.cwiseAbs().maxCoeff() > kConstructionTol) fail("B v != (0, r, sqrt(1 - r^2), 0, ...)");
    }
}

} // namespace

OrthonormalBasis OrthonormalBasis::from_rows(Eigen::MatrixXd rows, const NormalizedVector& anchor,
                                             std::optional<NormalizedVector> coplanar) {
    check_basis(rows, anchor, coplanar);
    return OrthonormalBasis(std::move(rows), anchor, std::move(coplanar));
}

Eigen::VectorXd OrthonormalBasis::rotate(std::span<const double> x) const {
    require_same_size(x.size(), dimension());
    return rows_ * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

Eigen::VectorXd OrthonormalBasis::unrotate(std::span<const double> y) const {
    require_same_size(y.size(), dimension());
    return rows_.transpose() * Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
}

OrthonormalBasis build_basis(const NormalizedVector& u, const std::optional<NormalizedVector>& v) {
    const auto n = static_cast<Eigen::Index>(u.size());
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(n, n);
    rows.row(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
    rows.row(1) = u.as_eigen().transpose();
    Eigen::Index filled = 2;
    if (v) {
        require_same_size(u.size(), v->size());
        const double r = pearson(u, *v);
        if (1.0 - std::abs(r) < kConstructionTol) {
            throw Error(ErrorKind::DegenerateCoplanar, "|rho(u, v)| = 1; the third axis is undefined");
        }
        Eigen::RowVectorXd third = v->as_eigen().transpose() - r * rows.row(1);
        // Clear the tiny components along rows 0 and 1 left by rounding.
        third -= third.dot(rows.row(0)) * rows.row(0);
        third -= third.dot(rows.row(1)) * rows.row(1);
        rows.row(2) = third.normalized();
        filled = 3;
    }
    complete_basis(rows, filled);
    check_basis(rows, u, v);
    return OrthonormalBasis(std::move(rows), u, v);
}

TailCoordinates tail_coordinates(const NormalizedVector& x, const OrthonormalBasis& basis) {
    const Eigen::VectorXd y = basis.rotate(x.values());
    TailCoordinates out;
    out.q_hat = std::clamp(y(1), -1.0, 1.0);
    out.tail.assign(y.data() + 2, y.data() + y.size());
    return out;
}

NormalizedVector from_tail_coordinates(double q_hat, std::span<const double> tail, const OrthonormalBasis& basis) {
    require_same_size(tail.size() + 2, basis.dimension());
    std::vector<double> y(basis.dimension());
    y[1] = q_hat;
    std::copy(tail.begin(), tail.end(), y.begin() + 2);
    const Eigen::VectorXd x = basis.unrotate(y);
    return NormalizedVector::from_standardized(std::vector<double>(x.data(), x.data() + x.size()), kConstructionTol);
}

} // namespace proxcor
