#include "proxcor/ensemble_synth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "proxcor/errors.hpp"
#include "proxcor/random.hpp"
#include "proxcor/tsphere.hpp"

namespace proxcor {

namespace {

constexpr double kEdge = 1e-6;

void validate(const SynthConfig& c) {
    std::ostringstream msg;
    if (!(c.target_q > 0.0 && c.target_q < 1.0)) msg << "target_q must lie in (0, 1)";
    else if (c.clusters < 1) msg << "need at least one cluster";
    else if (c.count_per_cluster < 1) msg << "need at least one record per cluster";
    else if (!(c.within_spread >= 0.0) || !(c.between_spread >= 0.0)) msg << "spreads must be non-negative";
    else if (!(c.q_jitter >= 0.0)) msg << "q_jitter must be non-negative";
    else if (c.within_spread == 0.0 && c.between_spread == 0.0) msg << "within and between spread are both zero";
    if (!msg.str().empty()) throw Error(ErrorKind::InfeasibleConfig, msg.str());
}

} // namespace

std::vector<EnsembleRecord> generate_ensemble(const SynthConfig& config) {
    validate(config);
    const auto basis = build_basis(config.anchor);
    const std::size_t width = basis.dimension() - 2;

    std::vector<std::vector<double>> centres(static_cast<std::size_t>(config.clusters), std::vector<double>(width));
    for (std::size_t k = 0; k < centres.size(); ++k) {
        Stream stream(config.seed, k, salt::synth_center);
        draw_sphere_point(stream, config.between_spread, centres[k]);
    }

    std::vector<EnsembleRecord> records;
    records.reserve(centres.size() * static_cast<std::size_t>(config.count_per_cluster));
    std::vector<double> tail(width);
    std::uint64_t index = 0;
    for (std::size_t k = 0; k < centres.size(); ++k) {
        for (int j = 0; j < config.count_per_cluster; ++j, ++index) {
            Stream stream(config.seed, index, salt::synth_record);
            const double q_hat = std::clamp(config.target_q + config.q_jitter * stream.gaussian(), kEdge, 1.0 - kEdge);
            double sumsq = 0.0;
            for (std::size_t i = 0; i < width; ++i) {
                tail[i] = centres[k][i] + config.within_spread * stream.gaussian();
                sumsq += tail[i] * tail[i];
            }
            if (sumsq == 0.0) throw Error(ErrorKind::InfeasibleConfig, "record tail direction is undefined");
            const double scale = std::sqrt(1.0 - q_hat * q_hat) / std::sqrt(sumsq);
            for (auto& x : tail) x *= scale;
            auto vector = from_tail_coordinates(q_hat, tail, basis);
            std::ostringstream id;
            id << "det-" << k << "-" << j;
            records.push_back(make_record(id.str(), "cluster-" + std::to_string(k), std::move(vector), config.anchor));
        }
    }
    return records;
}

} // namespace proxcor
