// proxcor: command-line front end.
//
// Exit codes: 0 success, 2 rejected input, 3 numeric failure.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "proxcor/coverage.hpp"
#include "proxcor/ensemble_synth.hpp"
#include "proxcor/errors.hpp"
#include "proxcor/false_correlation.hpp"
#include "proxcor/io.hpp"
#include "proxcor/mc_oracle.hpp"
#include "proxcor/sampling_distribution.hpp"
#include "proxcor/tsphere.hpp"

#ifndef PROXCOR_VERSION
#define PROXCOR_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace proxcor;

namespace {

constexpr std::uint64_t kDefaultSeed = 20190611;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

std::uint64_t resolve_seed(const std::string& text) {
    if (text == "random") {
        std::random_device rd;
        return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::InvalidParams, "--seed must be a non-negative integer or 'random'");
    }
    return value;
}

ordered_json envelope(const std::string& command, ordered_json params) {
    ordered_json j;
    j["command"] = command;
    j["tool_version"] = PROXCOR_VERSION;
    j["params"] = std::move(params);
    return j;
}

void emit(const ordered_json& report, bool json, const std::vector<std::pair<std::string, std::string>>& lines) {
    if (json) {
        std::cout << report.dump(2) << '\n';
        return;
    }
    std::size_t width = 0;
    for (const auto& [k, v] : lines) width = std::max(width, k.size());
    for (const auto& [k, v] : lines) std::cout << k << std::string(width - k.size() + 2, ' ') << v << '\n';
}

NormalizedVector load_vector(const fs::path& path) {
    const auto raw = io::read_vector_csv(path);
    std::clog << "proxcor: standardizing " << path.string() << " (" << raw.size()
              << " values) to zero mean and unit length\n";
    return standardize(raw);
}

std::string fmt(double x) { return io::format_double(x); }

// ---------------------------------------------------------------------------

struct ProbArgs {
    int n = 0;
    double q = 0.0, r = 0.0;
    bool marginal = false, json = false;
};

int run_prob(const ProbArgs& a) {
    const auto result = a.marginal ? marginal_false_corr_prob(a.n, a.q, a.r)
                                   : false_corr_prob(FalseCorrParams(a.n, a.q, a.r));
    auto j = envelope("prob", {{"n", a.n}, {"q", a.q}, {"r", a.r}, {"marginal", a.marginal}});
    j["probability"] = result.value;
    j["method"] = std::string(to_string(result.method));
    j["abs_error_bound"] = result.abs_error_bound;
    emit(j, a.json,
         {{"probability", fmt(result.value)},
          {"method", std::string(to_string(result.method))},
          {"abs_error_bound", fmt(result.abs_error_bound)}});
    return 0;
}

struct CurveArgs {
    double q = 0.0, r = 0.0;
    int n_min = 4, n_max = 200;
    bool marginal = false, json = false;
    std::string out;
};

int run_curve(const CurveArgs& a) {
    if (a.n_max > 10'000) throw Error(ErrorKind::InvalidParams, "--n-max must be <= 10000");
    const auto curve = false_corr_curve(a.q, a.r, a.n_min, a.n_max, a.marginal);
    io::write_curve_csv(a.out, curve);
    auto j = envelope("curve", {{"q", a.q}, {"r", a.r}, {"n_min", a.n_min}, {"n_max", a.n_max},
                                {"marginal", a.marginal}, {"out", a.out}});
    j["rows"] = curve.size();
    j["first"] = {{"n", curve.front().n}, {"probability", curve.front().probability}};
    j["last"] = {{"n", curve.back().n}, {"probability", curve.back().probability}};
    emit(j, a.json,
         {{"rows", std::to_string(curve.size())},
          {"out", a.out},
          {"first", std::to_string(curve.front().n) + " " + fmt(curve.front().probability)},
          {"last", std::to_string(curve.back().n) + " " + fmt(curve.back().probability)}});
    return 0;
}

struct ExpectedArgs {
    double q = 0.0, r = 0.0;
    bool json = false;
};

int run_expected(const ExpectedArgs& a) {
    const double e = expected_cross_correlation(a.q, a.r);
    auto j = envelope("expected", {{"q", a.q}, {"r", a.r}});
    j["expected_correlation"] = e;
    emit(j, a.json, {{"expected_correlation", fmt(e)}});
    return 0;
}

struct SampleArgs {
    std::string u, out, seed = std::to_string(kDefaultSeed);
    double q = 0.0;
    std::size_t count = 100;
    bool json = false;
};

int run_sample(const SampleArgs& a) {
    const auto seed = resolve_seed(a.seed);
    const auto anchor = load_vector(a.u);
    const TsphereSpec spec(anchor, a.q);
    const auto batch = sample_tsphere(spec, a.count, seed);

    io::EnsembleTable table;
    for (std::size_t s = 0; s < anchor.size(); ++s) table.subjects.push_back(std::to_string(s + 1));
    for (std::size_t i = 0; i < batch.vectors.size(); ++i) {
        table.ids.push_back("sample-" + std::to_string(i));
        const auto v = batch.vectors[i].values();
        table.columns.emplace_back(v.begin(), v.end());
    }
    io::write_ensemble_csv(a.out, table);

    // Re-verify membership from the file as written.
    const auto reloaded = io::read_ensemble_csv(a.out);
    double worst = 0.0;
    for (const auto& column : reloaded.columns) {
        const auto v = NormalizedVector::from_standardized(column, kConstructionTol);
        worst = std::max(worst, std::abs(pearson(v, anchor) - a.q));
    }
    if (worst > kConstructionTol) throw std::runtime_error("exported samples fail membership check");

    auto j = envelope("sample", {{"u", a.u}, {"q", a.q}, {"count", a.count}, {"out", a.out}});
    j["seed"] = seed;
    j["n"] = anchor.size();
    j["max_membership_error"] = worst;
    emit(j, a.json,
         {{"samples", std::to_string(a.count)},
          {"n", std::to_string(anchor.size())},
          {"seed", std::to_string(seed)},
          {"max_membership_error", fmt(worst)},
          {"out", a.out}});
    return 0;
}

struct McArgs {
    int n = 0;
    double q = 0.0, r = 0.0;
    std::size_t samples = 1'000'000;
    std::string seed = std::to_string(kDefaultSeed);
    bool marginal = false, json = false;
};

int run_mc(const McArgs& a) {
    const auto seed = resolve_seed(a.seed);
    const auto est = a.marginal ? marginal_false_corr_prob_mc(a.n, a.q, a.r, a.samples, seed)
                                : false_corr_prob_mc(a.n, a.q, a.r, a.samples, seed);
    auto j = envelope("mc", {{"n", a.n}, {"q", a.q}, {"r", a.r}, {"samples", a.samples}, {"marginal", a.marginal}});
    j["seed"] = seed;
    j["estimate"] = est.estimate;
    j["stderr"] = est.stderr_;
    emit(j, a.json,
         {{"estimate", fmt(est.estimate)},
          {"stderr", fmt(est.stderr_)},
          {"samples", std::to_string(est.count)},
          {"seed", std::to_string(seed)}});
    return 0;
}

struct CoverageArgs {
    std::string u, ensemble, tags, out_disc, out_null_disc;
    double q_lo = -1.0, q_hi = 1.0;
    std::size_t trials = 9999;
    std::string seed = std::to_string(kDefaultSeed);
    bool json = false;
};

int run_coverage(const CoverageArgs& a) {
    const auto seed = resolve_seed(a.seed);
    const auto anchor = load_vector(a.u);
    const auto table = io::read_ensemble_csv(a.ensemble);
    std::map<std::string, std::string> tags;
    if (!a.tags.empty()) tags = io::read_tags_csv(a.tags);

    std::clog << "proxcor: standardizing " << table.ids.size() << " detector columns\n";
    std::vector<EnsembleRecord> records;
    for (std::size_t d = 0; d < table.ids.size(); ++d) {
        if (table.columns[d].size() != anchor.size()) {
            throw Error(ErrorKind::DimensionMismatch, "detector " + table.ids[d] + " has " +
                                                          std::to_string(table.columns[d].size()) + " subjects, anchor has " +
                                                          std::to_string(anchor.size()));
        }
        const auto it = tags.find(table.ids[d]);
        records.push_back(make_record(table.ids[d], it == tags.end() ? "untagged" : it->second,
                                      standardize(table.columns[d]), anchor));
    }
    const auto band = filter_band(records, a.q_lo, a.q_hi);
    const auto report = coverage_significance(band, anchor, a.trials, seed);

    const auto basis = build_basis(anchor);
    const auto disc = disc_projection(band, basis);
    io::write_disc_csv(a.out_disc, band, disc);
    fs::path null_path = a.out_null_disc;
    if (null_path.empty()) {
        null_path = fs::path(a.out_disc);
        null_path.replace_filename(null_path.stem().string() + "_null" + null_path.extension().string());
    }
    const auto null_records = null_ensemble(band, basis, seed, 0);
    const auto null_disc = disc_projection(null_records, basis);
    io::write_disc_csv(null_path, null_records, null_disc);

    const double band_bound = std::sqrt(std::max(0.0, 1.0 - std::min(a.q_lo * a.q_lo, 1.0)));
    const double radius_bound = a.q_lo >= 0.0 ? band_bound : disc.radius_bound;
    double max_radius = 0.0;
    for (const auto& [p1, p2] : disc.points) max_radius = std::max(max_radius, std::hypot(p1, p2));

    auto j = envelope("coverage", {{"u", a.u}, {"ensemble", a.ensemble}, {"tags", a.tags}, {"q_lo", a.q_lo},
                                   {"q_hi", a.q_hi}, {"trials", a.trials}, {"out_disc", a.out_disc},
                                   {"out_null_disc", null_path.string()}});
    j["seed"] = seed;
    j["records_total"] = records.size();
    j["records_in_band"] = band.size();
    j["trace_detectors"] = report.trace_detectors;
    j["null_mean"] = report.null_mean;
    j["null_sd"] = report.null_sd;
    j["expected_null_trace"] = report.expected_null_trace;
    j["p_value"] = report.p_value;
    j["min_pairwise_corr"] = report.min_pairwise_corr;
    j["band"] = {a.q_lo, a.q_hi};
    j["q_hat_range"] = {report.band.first, report.band.second};
    j["radius_bound"] = radius_bound;
    j["max_disc_radius"] = max_radius;
    j["explained_variance"] = {disc.explained_variance.first, disc.explained_variance.second};
    j["null_explained_variance"] = {null_disc.explained_variance.first, null_disc.explained_variance.second};
    ordered_json per_tag = ordered_json::object();
    for (const auto& [tag, s] : report.tags) {
        per_tag[tag] = {{"count", s.count}, {"trace", std::isnan(s.trace) ? ordered_json(nullptr) : ordered_json(s.trace)}};
    }
    j["tags"] = per_tag;
    j["null_traces"] = report.null_traces;

    std::vector<std::pair<std::string, std::string>> lines = {
        {"records_in_band", std::to_string(band.size()) + " of " + std::to_string(records.size())},
        {"trace_detectors", fmt(report.trace_detectors)},
        {"null_mean", fmt(report.null_mean)},
        {"null_sd", fmt(report.null_sd)},
        {"expected_null_trace", fmt(report.expected_null_trace)},
        {"p_value", fmt(report.p_value)},
        {"min_pairwise_corr", fmt(report.min_pairwise_corr)},
        {"radius_bound", fmt(radius_bound)},
        {"max_disc_radius", fmt(max_radius)},
        {"seed", std::to_string(seed)},
    };
    for (const auto& [tag, s] : report.tags) {
        lines.emplace_back("tag " + tag, std::to_string(s.count) + " records, trace " + fmt(s.trace));
    }
    emit(j, a.json, lines);
    return 0;
}

struct SynthArgs {
    std::string u, out, out_tags;
    double q = 0.6, within = 0.05, between = 1.0, jitter = 0.02;
    int clusters = 2, count = 50;
    std::string seed = std::to_string(kDefaultSeed);
    bool json = false;
};

int run_synth(const SynthArgs& a) {
    const auto seed = resolve_seed(a.seed);
    SynthConfig config{.anchor = load_vector(a.u),
                       .target_q = a.q,
                       .clusters = a.clusters,
                       .within_spread = a.within,
                       .between_spread = a.between,
                       .count_per_cluster = a.count,
                       .q_jitter = a.jitter,
                       .seed = seed};
    const auto records = generate_ensemble(config);
    io::write_ensemble_csv(a.out, io::to_table(records));
    fs::path tags_path = a.out_tags;
    if (tags_path.empty()) {
        tags_path = fs::path(a.out);
        tags_path.replace_filename(tags_path.stem().string() + "_tags" + tags_path.extension().string());
    }
    std::vector<std::pair<std::string, std::string>> tags;
    double mean_q = 0.0;
    for (const auto& r : records) {
        tags.emplace_back(r.id, r.tag);
        mean_q += r.q_hat;
    }
    mean_q /= static_cast<double>(records.size());
    io::write_tags_csv(tags_path, tags);

    auto j = envelope("synth", {{"u", a.u}, {"q", a.q}, {"clusters", a.clusters}, {"within", a.within},
                                {"between", a.between}, {"count", a.count}, {"jitter", a.jitter}, {"out", a.out},
                                {"out_tags", tags_path.string()}});
    j["seed"] = seed;
    j["records"] = records.size();
    j["mean_q_hat"] = mean_q;
    emit(j, a.json,
         {{"records", std::to_string(records.size())},
          {"mean_q_hat", fmt(mean_q)},
          {"seed", std::to_string(seed)},
          {"out", a.out},
          {"out_tags", tags_path.string()}});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlation analysis with proxy measurement instruments"};
    app.set_version_flag("--version", PROXCOR_VERSION);
    app.require_subcommand(1);

    ProbArgs prob;
    auto* sub_prob = app.add_subcommand("prob", "probability that a proxy-based correlation has the wrong sign");
    sub_prob->add_option("--n", prob.n, "number of subjects")->required();
    sub_prob->add_option("--q", prob.q, "detector accuracy (correlation with ground truth)")->required();
    sub_prob->add_option("--r", prob.r, "true correlation")->required();
    sub_prob->add_flag("--marginal", prob.marginal, "average over the sampling distribution of q");
    sub_prob->add_flag("--json", prob.json);

    CurveArgs curve;
    auto* sub_curve = app.add_subcommand("curve", "probability as a function of n, written as CSV");
    sub_curve->add_option("--q", curve.q)->required();
    sub_curve->add_option("--r", curve.r)->required();
    sub_curve->add_option("--n-min", curve.n_min)->required();
    sub_curve->add_option("--n-max", curve.n_max)->required();
    sub_curve->add_flag("--marginal", curve.marginal);
    sub_curve->add_option("--out", curve.out, "output CSV (n,probability)")->required();
    sub_curve->add_flag("--json", curve.json);

    ExpectedArgs expected;
    auto* sub_expected = app.add_subcommand("expected", "expected attenuated correlation q*r");
    sub_expected->add_option("--q", expected.q)->required();
    sub_expected->add_option("--r", expected.r)->required();
    sub_expected->add_flag("--json", expected.json);

    SampleArgs sample;
    auto* sub_sample = app.add_subcommand("sample", "draw vectors uniformly with fixed correlation to u");
    sub_sample->add_option("--u", sample.u, "anchor vector CSV (header 'value')")->required();
    sub_sample->add_option("--q", sample.q)->required();
    sub_sample->add_option("--count", sample.count)->required();
    sub_sample->add_option("--seed", sample.seed, "integer or 'random'");
    sub_sample->add_option("--out", sample.out)->required();
    sub_sample->add_flag("--json", sample.json);

    McArgs mc;
    auto* sub_mc = app.add_subcommand("mc", "Monte Carlo estimate of the wrong-sign probability");
    sub_mc->add_option("--n", mc.n)->required();
    sub_mc->add_option("--q", mc.q)->required();
    sub_mc->add_option("--r", mc.r)->required();
    sub_mc->add_option("--samples", mc.samples);
    sub_mc->add_option("--seed", mc.seed, "integer or 'random'");
    sub_mc->add_flag("--marginal", mc.marginal);
    sub_mc->add_flag("--json", mc.json);

    CoverageArgs cov;
    auto* sub_cov = app.add_subcommand("coverage", "coverage of T^n by an ensemble of detectors");
    sub_cov->add_option("--u", cov.u)->required();
    sub_cov->add_option("--ensemble", cov.ensemble)->required();
    sub_cov->add_option("--tags", cov.tags);
    sub_cov->add_option("--q-lo", cov.q_lo);
    sub_cov->add_option("--q-hi", cov.q_hi);
    sub_cov->add_option("--trials", cov.trials);
    sub_cov->add_option("--seed", cov.seed, "integer or 'random'");
    sub_cov->add_option("--out-disc", cov.out_disc)->required();
    sub_cov->add_option("--out-null-disc", cov.out_null_disc);
    sub_cov->add_flag("--json", cov.json);

    SynthArgs synth;
    auto* sub_synth = app.add_subcommand("synth", "generate a synthetic clustered detector ensemble");
    sub_synth->add_option("--u", synth.u)->required();
    sub_synth->add_option("--q", synth.q);
    sub_synth->add_option("--clusters", synth.clusters);
    sub_synth->add_option("--within", synth.within);
    sub_synth->add_option("--between", synth.between);
    sub_synth->add_option("--count", synth.count, "records per cluster");
    sub_synth->add_option("--jitter", synth.jitter, "sd of per-record accuracy");
    sub_synth->add_option("--seed", synth.seed, "integer or 'random'");
    sub_synth->add_option("--out", synth.out)->required();
    sub_synth->add_option("--out-tags", synth.out_tags);
    sub_synth->add_flag("--json", synth.json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*sub_prob) return run_prob(prob);
        if (*sub_curve) return run_curve(curve);
        if (*sub_expected) return run_expected(expected);
        if (*sub_sample) return run_sample(sample);
        if (*sub_mc) return run_mc(mc);
        if (*sub_cov) return run_coverage(cov);
        if (*sub_synth) return run_synth(synth);
    } catch (const Error& e) {
        std::cerr << "proxcor: " << e.what() << '\n';
        return is_numeric_failure(e.kind()) ? kExitNumeric : kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "proxcor: " << e.what() << '\n';
        return kExitNumeric;
    }
    return 0;
}
