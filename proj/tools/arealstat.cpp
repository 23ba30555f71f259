// arealstat: spatial weights, Moran/LISA inference, and spatial regression
// for areal data, from GeoJSON or CSV inputs.
//
// Exit codes: 0 success, 1 data/numeric error, 2 usage/config error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "areal/design.hpp"
#include "areal/error.hpp"
#include "areal/gwr.hpp"
#include "areal/io_csv.hpp"
#include "areal/io_geojson.hpp"
#include "areal/io_svg.hpp"
#include "areal/linreg.hpp"
#include "areal/model_compare.hpp"
#include "areal/moran.hpp"
#include "areal/parallel.hpp"
#include "areal/reports.hpp"
#include "areal/rng.hpp"
#include "areal/sar.hpp"
#include "areal/synthetic.hpp"
#include "areal/weights.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace areal;

namespace {

struct CommonOptions {
    std::string input;
    std::string out_dir = ".";
    int threads = 0;
};

struct WeightOptions {
    std::vector<std::string> types;  // adjacency | knn | distance | idw
    std::vector<int> ks;
    double d0 = 0.0;
    double quantile = 0.0;
    double alpha = 1.0;
    bool row_standardize = false;
    std::string contiguity = "queen";
    std::string edge_list;
    std::string weights_file;
};

struct InferenceOptions {
    std::string scheme = "randomization";
    int nperm = 999;
    std::uint64_t seed = 42;
    double alpha_level = 0.05;
    bool bonferroni = false;
};

struct RegressionOptions {
    std::string model;
    std::vector<std::string> models;
    std::string response;
    std::string predictors;
    bool log_response = false;
    double prevalence_per = 0.0;
    std::string population = "population";
    std::string kernel = "bisquare";
    std::string bandwidth = "auto";
    std::string criterion = "loocv";
};

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_input = true) {
    auto* in = cmd->add_option("--input", o.input, "Input GeoJSON or CSV file");
    if (needs_input) in->required();
    cmd->add_option("--out", o.out_dir, "Output directory (created if missing)");
    cmd->add_option("--threads", o.threads, "Worker thread cap (0 = hardware)");
}

void add_weight_options(CLI::App* cmd, WeightOptions& o) {
    cmd->add_option("--weights-type", o.types,
                    "Weight builder: adjacency|knn|distance|idw (repeatable)")
        ->check(CLI::IsMember({"adjacency", "knn", "distance", "idw"}));
    cmd->add_option("--k", o.ks, "Neighbour count for knn (consumed in order)");
    cmd->add_option("--d0", o.d0, "Distance-band cutoff");
    cmd->add_option("--quantile", o.quantile,
                    "Distance-band cutoff as a quantile of all pairwise distances");
    cmd->add_option("--alpha", o.alpha, "Inverse-distance power coefficient");
    cmd->add_flag("--row-standardize", o.row_standardize, "Row-standardize the weights");
    cmd->add_option("--contiguity", o.contiguity, "Polygon contiguity rule")
        ->check(CLI::IsMember({"queen", "rook"}));
    cmd->add_option("--edge-list", o.edge_list, "Adjacency from an id<TAB>id edge list");
    cmd->add_option("--weights-file", o.weights_file, "Reuse a serialized weights JSON");
}

void add_inference_options(CLI::App* cmd, InferenceOptions& o) {
    cmd->add_option("--scheme", o.scheme, "Inference scheme")
        ->check(CLI::IsMember({"normality", "randomization", "permutation"}));
    cmd->add_option("--nperm", o.nperm, "Permutation count");
    cmd->add_option("--seed", o.seed, "RNG seed (recorded in outputs)");
    cmd->add_option("--alpha-level", o.alpha_level, "Significance level for LISA classes");
    cmd->add_flag("--bonferroni", o.bonferroni, "Bonferroni-correct the LISA level");
}

UnitCollection load_units(const std::string& path) {
    const auto ext = fs::path(path).extension().string();
    if (ext == ".geojson" || ext == ".json") return read_geojson(path).units;
    if (ext == ".csv") return read_csv_points(path).units;
    throw DataError("unrecognized input extension '" + ext + "' (expected .geojson/.json/.csv)");
}

json weight_spec_json(const WeightMatrix& w) {
    json j = weights_to_json(w);
    j.erase("entries");
    j.erase("n");
    return j;
}

WeightMatrix build_one_weight(const UnitCollection& units, const WeightOptions& o,
                              const std::string& type, std::size_t& k_cursor) {
    const Metric metric = default_metric(units.coordinate_system());
    WeightMatrix w = [&]() -> WeightMatrix {
        if (type == "adjacency") {
            if (!o.edge_list.empty())
                return build_adjacency_edges(units, read_edge_list(o.edge_list));
            return build_adjacency_contiguity(
                units, o.contiguity == "rook" ? Contiguity::rook : Contiguity::queen);
        }
        if (type == "knn") {
            if (k_cursor >= o.ks.size())
                throw ConfigError("each knn weight spec needs a --k value");
            return build_knn(units, o.ks[k_cursor++], metric);
        }
        if (type == "distance") {
            double d0 = o.d0;
            if (d0 <= 0.0 && o.quantile > 0.0) d0 = quantile_distance(units, o.quantile, metric);
            if (d0 <= 0.0) throw ConfigError("distance weights need --d0 or --quantile");
            return build_distance_band(units, d0, metric);
        }
        if (type == "idw") return build_inverse_distance(units, o.alpha, metric);
        throw ConfigError("unknown weight type: " + type);
    }();
    if (w.has_islands())
        std::cerr << "warning: weight matrix has islands (rows with no neighbours)\n";
    return o.row_standardize ? row_standardize(w) : w;
}

// cheap config validation, run before any data is loaded
void validate_weight_options(const WeightOptions& o) {
    if (o.types.empty() && o.weights_file.empty())
        throw ConfigError("no weight specification: pass --weights-type or --weights-file");
}

std::vector<WeightMatrix> build_weights(const UnitCollection& units, const WeightOptions& o) {
    std::vector<WeightMatrix> out;
    if (!o.weights_file.empty()) {
        auto w = weights_from_json(read_json_file(o.weights_file));
        if (w.n() != units.size())
            throw DataError("weights file n does not match the input's unit count");
        out.push_back(o.row_standardize ? row_standardize(w) : std::move(w));
    }
    std::size_t k_cursor = 0;
    for (const auto& type : o.types) out.push_back(build_one_weight(units, o, type, k_cursor));
    if (out.empty()) throw ConfigError("no weight specification: pass --weights-type or --weights-file");
    return out;
}

fs::path prepare_out_dir(const CommonOptions& o) {
    fs::path dir(o.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory: " + o.out_dir);
    return dir;
}

json weight_options_json(const WeightOptions& o) {
    json j{{"types", o.types},         {"k", o.ks},
           {"d0", o.d0},               {"quantile", o.quantile},
           {"alpha", o.alpha},         {"row_standardize", o.row_standardize},
           {"contiguity", o.contiguity}};
    if (!o.edge_list.empty()) j["edge_list"] = o.edge_list;
    if (!o.weights_file.empty()) j["weights_file"] = o.weights_file;
    return j;
}

json inference_options_json(const InferenceOptions& o) {
    return json{{"scheme", o.scheme},
                {"nperm", o.nperm},
                {"seed", o.seed},
                {"alpha_level", o.alpha_level},
                {"bonferroni", o.bonferroni}};
}

// Everything needed to reproduce the run; deliberately excludes --threads,
// which changes scheduling but never results.
json provenance(const std::string& command, const CommonOptions& c, const json& options) {
    return json{{"command", command}, {"input", c.input}, {"options", options}};
}

void echo_seed(std::uint64_t seed) { std::cerr << "seed: " << seed << "\n"; }

Alternative parse_alternative(const std::string& s) {
    if (s == "greater") return Alternative::greater;
    if (s == "less") return Alternative::less;
    return Alternative::two_sided;
}

// ---------------------------------------------------------------- weights

int cmd_weights(const CommonOptions& common, const WeightOptions& wopt) {
    validate_weight_options(wopt);
    const auto units = load_units(common.input);
    const auto weights = build_weights(units, wopt);
    const auto dir = prepare_out_dir(common);
    const auto& w = weights.front();

    json doc = weights_to_json(w);
    doc["provenance"] = provenance("weights", common, weight_options_json(wopt));
    write_json_file(doc, (dir / "weights.json").string());

    const double density = static_cast<double>(w.nnz()) /
                           (static_cast<double>(w.n()) * (w.n() - 1));
    std::printf("n=%d S0=%.6g density=%.6g standardized=%s\n", w.n(), w.s0(), density,
                w.standardized() ? "true" : "false");
    return 0;
}

// ---------------------------------------------------------------- moran

int cmd_moran(const CommonOptions& common, const WeightOptions& wopt,
              const InferenceOptions& iopt, const std::string& attribute,
              const std::string& alternative) {
    if (attribute.empty()) throw ConfigError("--attribute is required");
    validate_weight_options(wopt);
    const auto units = load_units(common.input);
    const auto y = units.attribute(attribute);
    const auto weights = build_weights(units, wopt);
    echo_seed(iopt.seed);

    json rows = json::array();
    std::printf("%-28s %12s %12s %12s %10s\n", "weights", "estimate", "expectation",
                "variance", "p_value");
    for (const auto& w : weights) {
        MoranGlobalResult r;
        const auto alt = parse_alternative(alternative);
        if (iopt.scheme == "permutation")
            r = moran_permutation(y, w, iopt.nperm, iopt.seed, alt);
        else
            r = moran_test(y, w,
                           iopt.scheme == "normality" ? MoranScheme::normality
                                                      : MoranScheme::randomization,
                           alt);
        json row = moran_result_to_json(r);
        row["weights"] = weight_spec_json(w);
        rows.push_back(row);
        std::ostringstream label;
        label << weight_kind_name(w.builder().kind);
        switch (w.builder().kind) {
            case WeightKind::knn: label << "(k=" << w.builder().k << ")"; break;
            case WeightKind::distance_band: label << "(d0=" << w.builder().d0 << ")"; break;
            case WeightKind::inverse_distance: label << "(alpha=" << w.builder().alpha << ")"; break;
            case WeightKind::adjacency:
                if (!w.builder().contiguity.empty()) label << "(" << w.builder().contiguity << ")";
                break;
        }
        std::printf("%-28s %12.5f %12.5f %12.5f %10.5f\n", label.str().c_str(), r.I,
                    r.expectation, r.variance, r.p_value);
    }

    json doc{{"attribute", attribute}, {"rows", rows}};
    json opts = weight_options_json(wopt);
    opts.update(inference_options_json(iopt));
    opts["attribute"] = attribute;
    opts["alternative"] = alternative;
    doc["provenance"] = provenance("moran", common, opts);

    const auto dir = prepare_out_dir(common);
    write_json_file(doc, (dir / "moran.json").string());
    return 0;
}

// ---------------------------------------------------------------- lisa

int cmd_lisa(const CommonOptions& common, const WeightOptions& wopt,
             const InferenceOptions& iopt, const std::string& attribute) {
    if (attribute.empty()) throw ConfigError("--attribute is required");
    validate_weight_options(wopt);
    const auto units = load_units(common.input);
    const auto y = units.attribute(attribute);
    const auto weights = build_weights(units, wopt);
    const auto& w = weights.front();
    echo_seed(iopt.seed);

    const auto result = lisa(y, w, iopt.nperm, iopt.seed, iopt.alpha_level, iopt.bonferroni);

    json opts = weight_options_json(wopt);
    opts.update(inference_options_json(iopt));
    opts["attribute"] = attribute;
    const json prov = provenance("lisa", common, opts);

    const auto dir = prepare_out_dir(common);
    write_lisa_geojson(units, result, (dir / "lisa.geojson").string(), prov);
    if (units.has_polygons())
        write_choropleth_svg(units, result.classes, (dir / "lisa.svg").string(), prov);
    json groups = group_summary_to_json(lisa_group_summary(result.classes, units));
    groups["provenance"] = prov;
    write_json_file(groups, (dir / "lisa_groups.json").string());

    int significant = 0;
    for (auto c : result.classes)
        if (c != LisaClass::NotSignificant) ++significant;
    std::printf("n=%d significant=%d alpha=%.4g nperm=%d\n", units.size(), significant,
                iopt.alpha_level, iopt.nperm);
    return 0;
}

// ---------------------------------------------------------------- regress

DesignSpec design_spec_from(const RegressionOptions& r) {
    DesignSpec spec;
    spec.response = r.response;
    std::stringstream ss(r.predictors);
    std::string name;
    while (std::getline(ss, name, ','))
        if (!name.empty()) spec.predictors.push_back(name);
    spec.log_response = r.log_response;
    if (r.prevalence_per > 0.0) spec.prevalence_per = r.prevalence_per;
    spec.population = r.population;
    return spec;
}

AnyFit fit_one_model(const std::string& model, const Design& d, const UnitCollection& units,
                     const std::vector<WeightMatrix>& weights, const RegressionOptions& ropt) {
    if (model == "ols") return fit_ols(d.X, d.y, d.names);
    if (model == "slm" || model == "sem") {
        if (weights.empty())
            throw ConfigError(model + " needs a weight specification (--weights-type/--weights-file)");
        const auto& w = weights.front();
        return model == "slm" ? fit_slm(d.X, d.y, w, d.names) : fit_sem(d.X, d.y, w, d.names);
    }
    if (model == "gwr") {
        const Metric metric = default_metric(units.coordinate_system());
        std::optional<double> bandwidth;
        if (ropt.bandwidth != "auto") {
            try {
                bandwidth = std::stod(ropt.bandwidth);
            } catch (...) {
                throw ConfigError("--bandwidth must be 'auto' or a number");
            }
        }
        const auto kernel = ropt.kernel == "gaussian" ? GwrKernel::gaussian : GwrKernel::bisquare;
        const auto criterion = ropt.criterion == "aicc" ? BandwidthCriterion::aicc
                                                        : BandwidthCriterion::loocv;
        return fit_gwr(d.X, d.y, units.centroids(), d.names, kernel, bandwidth, criterion, metric);
    }
    throw ConfigError("unknown model: " + model);
}

json regression_options_json(const RegressionOptions& r) {
    return json{{"response", r.response},       {"predictors", r.predictors},
                {"log_response", r.log_response}, {"prevalence_per", r.prevalence_per},
                {"population", r.population},   {"kernel", r.kernel},
                {"bandwidth", r.bandwidth},     {"criterion", r.criterion}};
}

int cmd_regress(const CommonOptions& common, const WeightOptions& wopt,
                const InferenceOptions& iopt, const RegressionOptions& ropt) {
    if (ropt.model.empty()) throw ConfigError("--model is required");
    const auto units = load_units(common.input);
    const auto design = build_design(units, design_spec_from(ropt));
    for (const auto& name : design.dropped)
        std::cerr << "warning: dropped constant predictor '" << name << "'\n";

    std::vector<WeightMatrix> weights;
    if (ropt.model == "slm" || ropt.model == "sem") weights = build_weights(units, wopt);

    const AnyFit fit = fit_one_model(ropt.model, design, units, weights, ropt);

    json opts = regression_options_json(ropt);
    opts["model"] = ropt.model;
    if (ropt.model == "slm" || ropt.model == "sem") opts.update(weight_options_json(wopt));
    const json prov = provenance("regress", common, opts);

    const auto dir = prepare_out_dir(common);
    json doc = std::holds_alternative<GwrFit>(fit)
                   ? gwr_fit_to_json(std::get<GwrFit>(fit))
                   : linear_fit_to_json(std::get<LinearFit>(fit));
    doc["provenance"] = prov;
    if (!design.dropped.empty()) doc["dropped_predictors"] = design.dropped;
    write_json_file(doc, (dir / ("fit_" + ropt.model + ".json")).string());

    if (std::holds_alternative<GwrFit>(fit)) {
        const auto& g = std::get<GwrFit>(fit);
        std::vector<json> extra(static_cast<std::size_t>(units.size()));
        for (int i = 0; i < units.size(); ++i) {
            json props{{"local_r2", g.local_r2[static_cast<std::size_t>(i)]}};
            for (std::size_t k = 0; k < g.names.size(); ++k)
                props["beta_" + g.names[k]] = g.local_coefficients(i, static_cast<Eigen::Index>(k));
            extra[static_cast<std::size_t>(i)] = std::move(props);
        }
        json local = units_to_geojson(units, &extra);
        local["provenance"] = prov;
        write_json_file(local, (dir / "gwr_local.geojson").string());
        std::printf("model=gwr bandwidth=%.6g effective_params=%.4f quasi_r2=%.4f aic=%.4f\n",
                    g.bandwidth, g.effective_params, g.quasi_r2, g.aic);
    } else {
        const auto& l = std::get<LinearFit>(fit);
        std::printf("model=%s aic=%.4f rss=%.4f loglik=%.4f\n",
                    linear_model_name(l.model).c_str(), l.aic, l.rss, l.log_likelihood);
    }
    (void)iopt;
    return 0;
}

// ---------------------------------------------------------------- compare

int cmd_compare(const CommonOptions& common, const WeightOptions& wopt,
                const InferenceOptions& iopt, const RegressionOptions& ropt) {
    if (ropt.models.size() < 2) throw ConfigError("--models needs at least two models");
    validate_weight_options(wopt);
    const auto units = load_units(common.input);
    const auto design = build_design(units, design_spec_from(ropt));
    const auto weights = build_weights(units, wopt);
    const auto& w = weights.front();
    echo_seed(iopt.seed);

    std::vector<AnyFit> fits;
    fits.reserve(ropt.models.size());
    for (const auto& model : ropt.models)
        fits.push_back(fit_one_model(model, design, units, weights, ropt));

    const auto cmp = compare_models(fits, w, iopt.nperm, iopt.seed);

    json opts = regression_options_json(ropt);
    opts["models"] = ropt.models;
    opts.update(weight_options_json(wopt));
    opts.update(inference_options_json(iopt));
    const json prov = provenance("compare", common, opts);

    const auto dir = prepare_out_dir(common);
    json doc = comparison_to_json(cmp);

    // minimum-AIC flag, one per comparison
    std::size_t best = 0;
    for (std::size_t i = 1; i < cmp.rows.size(); ++i)
        if (cmp.rows[i].aic < cmp.rows[best].aic) best = i;
    doc["minimum_aic_model"] = cmp.rows[best].model;
    doc["provenance"] = prov;
    write_json_file(doc, (dir / "comparison.json").string());

    // residual LISA map per model
    for (std::size_t m = 0; m < fits.size(); ++m) {
        const auto& res = fit_residuals(fits[m]);
        AttributeVector rv;
        rv.name = "residuals";
        rv.values.assign(res.data(), res.data() + res.size());
        const auto result = lisa(rv, w, iopt.nperm, derive_seed(iopt.seed, m), iopt.alpha_level);
        if (units.has_polygons())
            write_choropleth_svg(units, result.classes,
                                 (dir / ("residual_lisa_" + cmp.rows[m].model + ".svg")).string(),
                                 prov);
        write_lisa_geojson(units, result,
                           (dir / ("residual_lisa_" + cmp.rows[m].model + ".geojson")).string(),
                           prov);
    }

    for (const auto& row : cmp.rows)
        std::printf("%-4s aic=%10.3f rss=%10.3f residual_moran_p=%.4f%s\n", row.model.c_str(),
                    row.aic, row.rss, row.moran.p_value,
                    cmp.rows[best].model == row.model ? "  <- min AIC" : "");
    return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
    std::string scenario;
    int rows = 10, cols = 10;
    std::string contiguity = "rook";
    double rho = 0.0, lambda = 0.0, sigma = 1.0;
    std::vector<double> beta{1.0, 2.0};
    std::uint64_t seed = 42;
    std::vector<int> block;  // r0,c0,h,w
    double level = 4.0;
};

int cmd_simulate(const CommonOptions& common, const SimulateOptions& s) {
    auto lattice = make_lattice(s.rows, s.cols, s.contiguity == "queen" ? Contiguity::queen
                                                                        : Contiguity::rook);
    echo_seed(s.seed);
    const int n = lattice.units.size();

    json truth{{"scenario", s.scenario}, {"rows", s.rows},  {"cols", s.cols},
               {"contiguity", s.contiguity}, {"sigma", s.sigma}, {"seed", s.seed}};

    std::vector<std::pair<std::string, std::vector<double>>> columns;

    if (s.scenario == "sar_lag" || s.scenario == "sar_error") {
        const auto W = row_standardize(lattice.W);
        const int p = static_cast<int>(s.beta.size()) - 1;
        const Eigen::MatrixXd X = gaussian_design(n, p, derive_seed(s.seed, 17));
        Eigen::VectorXd beta(s.beta.size());
        for (std::size_t i = 0; i < s.beta.size(); ++i) beta(static_cast<Eigen::Index>(i)) = s.beta[i];
        AttributeVector y;
        if (s.scenario == "sar_lag") {
            y = simulate_sar_lag(W, X, beta, s.rho, s.sigma, s.seed);
            truth["rho"] = s.rho;
        } else {
            y = simulate_sar_error(W, X, beta, s.lambda, s.sigma, s.seed);
            truth["lambda"] = s.lambda;
        }
        truth["beta"] = s.beta;
        columns.emplace_back("y", y.values);
        for (int k = 1; k <= p; ++k) {
            std::vector<double> col(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = X(i, k);
            columns.emplace_back("x" + std::to_string(k), col);
        }
    } else if (s.scenario == "gwr_surface") {
        const double u_max = static_cast<double>(s.cols - 1);
        std::vector<CoefficientFn> fns = {
            [](double, double) { return 1.0; },
            [u_max](double u, double) { return u / std::max(1.0, u_max); }};
        const auto data = simulate_gwr_surface(lattice.units.centroids(), fns, s.sigma, s.seed);
        truth["beta0"] = "constant 1";
        truth["beta1"] = "u / u_max ramp";
        std::vector<double> y(static_cast<std::size_t>(n)), x1(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            y[static_cast<std::size_t>(i)] = data.y(i);
            x1[static_cast<std::size_t>(i)] = data.X(i, 1);
        }
        columns.emplace_back("y", y);
        columns.emplace_back("x1", x1);
    } else if (s.scenario == "checkerboard") {
        columns.emplace_back("y", checkerboard(s.rows, s.cols).values);
    } else if (s.scenario == "gradient") {
        columns.emplace_back("y", gradient(s.rows, s.cols).values);
    } else if (s.scenario == "planted_block") {
        BlockExtent extent{s.rows / 2 - 1, s.cols / 2 - 1, 3, 3};
        if (s.block.size() == 4) extent = {s.block[0], s.block[1], s.block[2], s.block[3]};
        columns.emplace_back("y", planted_block(s.rows, s.cols, extent, s.level).values);
        truth["block"] = {extent.row0, extent.col0, extent.rows, extent.cols};
        truth["level"] = s.level;
    } else if (s.scenario == "iid_noise") {
        columns.emplace_back("y", iid_noise(n, s.sigma, s.seed).values);
    } else {
        throw ConfigError("unknown scenario: " + s.scenario);
    }

    // attach attributes to the lattice units
    std::vector<SpatialUnit> units = lattice.units.units();
    for (auto& [name, values] : columns)
        for (int i = 0; i < n; ++i) units[static_cast<std::size_t>(i)].attributes[name] =
            values[static_cast<std::size_t>(i)];
    UnitCollection with_data(std::move(units), CoordinateSystem::planar);

    json opts{{"scenario", s.scenario}, {"rows", s.rows}, {"cols", s.cols},
              {"contiguity", s.contiguity}, {"rho", s.rho}, {"lambda", s.lambda},
              {"sigma", s.sigma}, {"beta", s.beta}, {"seed", s.seed}};
    const json prov = provenance("simulate", common, opts);

    const auto dir = prepare_out_dir(common);
    json geo = units_to_geojson(with_data);
    geo["provenance"] = prov;
    write_json_file(geo, (dir / "lattice.geojson").string());
    write_csv_points(with_data, (dir / "data.csv").string());
    truth["provenance"] = prov;
    write_json_file(truth, (dir / "truth.json").string());

    std::printf("n=%d files: lattice.geojson data.csv truth.json\n", n);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatial statistics for areal data: weights, Moran/LISA, spatial regression"};
    app.require_subcommand(1);
    app.set_config("--config");

    CommonOptions common;
    WeightOptions wopt;
    InferenceOptions iopt;
    RegressionOptions ropt;
    SimulateOptions sopt;
    std::string attribute;
    std::string alternative = "two_sided";

    auto* weights_cmd = app.add_subcommand("weights", "Build and serialize a weight matrix");
    add_common(weights_cmd, common);
    add_weight_options(weights_cmd, wopt);

    auto* moran_cmd = app.add_subcommand("moran", "Global Moran's I with significance tests");
    add_common(moran_cmd, common);
    add_weight_options(moran_cmd, wopt);
    add_inference_options(moran_cmd, iopt);
    moran_cmd->add_option("--attribute", attribute, "Attribute to test")->required();
    moran_cmd->add_option("--alternative", alternative, "two_sided|greater|less")
        ->check(CLI::IsMember({"two_sided", "greater", "less"}));

    auto* lisa_cmd = app.add_subcommand("lisa", "Local Moran map with conditional permutations");
    add_common(lisa_cmd, common);
    add_weight_options(lisa_cmd, wopt);
    add_inference_options(lisa_cmd, iopt);
    lisa_cmd->add_option("--attribute", attribute, "Attribute to map")->required();

    auto* regress_cmd = app.add_subcommand("regress", "Fit OLS, SLM, SEM or GWR");
    add_common(regress_cmd, common);
    add_weight_options(regress_cmd, wopt);
    add_inference_options(regress_cmd, iopt);
    regress_cmd->add_option("--model", ropt.model, "ols|slm|sem|gwr")->required()
        ->check(CLI::IsMember({"ols", "slm", "sem", "gwr"}));
    regress_cmd->add_option("--response", ropt.response, "Response attribute")->required();
    regress_cmd->add_option("--predictors", ropt.predictors, "Comma-separated predictor list")
        ->required();
    regress_cmd->add_flag("--log-response", ropt.log_response, "Model the log response");
    regress_cmd->add_option("--prevalence-per", ropt.prevalence_per,
                            "Scale response to cases per this many residents");
    regress_cmd->add_option("--population", ropt.population, "Population attribute name");
    regress_cmd->add_option("--kernel", ropt.kernel, "GWR kernel")
        ->check(CLI::IsMember({"gaussian", "bisquare"}));
    regress_cmd->add_option("--bandwidth", ropt.bandwidth, "GWR bandwidth: auto or a value");
    regress_cmd->add_option("--criterion", ropt.criterion, "Bandwidth criterion")
        ->check(CLI::IsMember({"loocv", "aicc"}));

    auto* compare_cmd = app.add_subcommand("compare", "Fit several models and compare them");
    add_common(compare_cmd, common);
    add_weight_options(compare_cmd, wopt);
    add_inference_options(compare_cmd, iopt);
    compare_cmd->add_option("--models", ropt.models, "Models to fit (ols slm sem gwr)")
        ->delimiter(',')
        ->check(CLI::IsMember({"ols", "slm", "sem", "gwr"}));
    compare_cmd->add_option("--response", ropt.response, "Response attribute")->required();
    compare_cmd->add_option("--predictors", ropt.predictors, "Comma-separated predictor list")
        ->required();
    compare_cmd->add_flag("--log-response", ropt.log_response, "Model the log response");
    compare_cmd->add_option("--prevalence-per", ropt.prevalence_per,
                            "Scale response to cases per this many residents");
    compare_cmd->add_option("--population", ropt.population, "Population attribute name");
    compare_cmd->add_option("--kernel", ropt.kernel, "GWR kernel");
    compare_cmd->add_option("--bandwidth", ropt.bandwidth, "GWR bandwidth: auto or a value");
    compare_cmd->add_option("--criterion", ropt.criterion, "Bandwidth criterion");

    auto* simulate_cmd = app.add_subcommand("simulate", "Generate synthetic lattice data");
    add_common(simulate_cmd, common, false);
    simulate_cmd->add_option("--scenario", sopt.scenario,
                             "sar_lag|sar_error|gwr_surface|checkerboard|gradient|planted_block|iid_noise")
        ->required();
    simulate_cmd->add_option("--rows", sopt.rows, "Lattice rows");
    simulate_cmd->add_option("--cols", sopt.cols, "Lattice columns");
    simulate_cmd->add_option("--contiguity", sopt.contiguity, "rook|queen")
        ->check(CLI::IsMember({"rook", "queen"}));
    simulate_cmd->add_option("--rho", sopt.rho, "SAR lag coefficient");
    simulate_cmd->add_option("--lambda", sopt.lambda, "SAR error coefficient");
    simulate_cmd->add_option("--sigma", sopt.sigma, "Noise scale");
    simulate_cmd->add_option("--beta", sopt.beta, "Coefficient vector")->delimiter(',');
    simulate_cmd->add_option("--seed", sopt.seed, "RNG seed");
    simulate_cmd->add_option("--block", sopt.block, "Planted block r0,c0,rows,cols")
        ->delimiter(',');
    simulate_cmd->add_option("--level", sopt.level, "Planted block level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        set_max_threads(common.threads);
        if (weights_cmd->parsed()) return cmd_weights(common, wopt);
        if (moran_cmd->parsed()) return cmd_moran(common, wopt, iopt, attribute, alternative);
        if (lisa_cmd->parsed()) return cmd_lisa(common, wopt, iopt, attribute);
        if (regress_cmd->parsed()) return cmd_regress(common, wopt, iopt, ropt);
        if (compare_cmd->parsed()) return cmd_compare(common, wopt, iopt, ropt);
        if (simulate_cmd->parsed()) return cmd_simulate(common, sopt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
