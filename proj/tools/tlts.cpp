// Command-line front end for the transformed-linear time series library.
//
// Subcommands: preprocess, estimate-tpdf, fit, simulate, diagnose, compare.
// All floating-point CSV output carries 17 significant digits so pipelines
// round-trip doubles losslessly. Every randomized subcommand requires an
// explicit --seed and is byte-identical across runs for identical inputs.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tlts/tlts.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitModule = 4;
constexpr int kExitOther = 5;

void warn(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

struct PreprocessOptions {
    std::string input;
    std::string output;
    std::string model_output;
    std::string anomalies_output;
    double tail_prob = 0.025;
    std::string from_date;
    std::string to_date;
    bool no_diurnal = false;
};

int run_preprocess(const PreprocessOptions& opt) {
    std::vector<tlts::Observation> obs = tlts::read_timestamped_csv(opt.input);
    if (!opt.from_date.empty() || !opt.to_date.empty()) {
        const int from_key = opt.from_date.empty() ? 0 : tlts::parse_timestamp(opt.from_date).date_key();
        const int to_key = opt.to_date.empty() ? 99999999 : tlts::parse_timestamp(opt.to_date).date_key();
        std::vector<tlts::Observation> kept;
        for (const auto& o : obs) {
            const int key = o.time.date_key();
            if (key >= from_key && key <= to_key) kept.push_back(o);
        }
        obs = std::move(kept);
    }
    if (obs.empty()) throw tlts::insufficient_data_error("no observations after date filtering");

    std::vector<double> anomalies;
    std::optional<std::array<double, 24>> hourly_means;
    if (opt.no_diurnal) {
        anomalies.reserve(obs.size());
        for (const auto& o : obs) anomalies.push_back(o.value);
    } else {
        std::vector<double> values;
        std::vector<int> hours;
        values.reserve(obs.size());
        hours.reserve(obs.size());
        for (const auto& o : obs) {
            values.push_back(o.value);
            hours.push_back(o.time.hour);
        }
        tlts::DiurnalFit fit = tlts::remove_diurnal(values, hours);
        anomalies = std::move(fit.anomalies);
        hourly_means = fit.hourly_means;
    }

    std::vector<std::string> warnings;
    tlts::MarginalModel model = tlts::fit_marginal(anomalies, opt.tail_prob, &warnings);
    model.hourly_means = hourly_means;
    warn(warnings);

    std::vector<double> frechet(anomalies.size());
    for (std::size_t t = 0; t < anomalies.size(); ++t) frechet[t] = tlts::to_frechet(model, anomalies[t]);

    tlts::write_value_csv(opt.output, frechet);
    tlts::save_json(opt.model_output, tlts::marginal_to_json(model));
    if (!opt.anomalies_output.empty()) tlts::write_value_csv(opt.anomalies_output, anomalies);
    return 0;
}

struct EstimateOptions {
    std::string input;
    std::string output;
    std::size_t max_lag = 30;
    double r0_quantile = 0.975;
    bool no_bias_correct = false;
};

int run_estimate(const EstimateOptions& opt) {
    std::vector<double> x = tlts::read_value_csv(opt.input);
    if (!opt.no_bias_correct) x = tlts::bias_correct(x);
    const tlts::TpdfEstimate est = tlts::estimate_tpdf(x, opt.max_lag, opt.r0_quantile);
    for (std::size_t i = 0; i < est.low_count.size(); ++i) {
        if (est.low_count[i])
            std::cerr << "warning: lag " << (i + 1) << " has only " << est.n_exceed[i]
                      << " radial exceedances\n";
        if (est.out_of_range[i])
            std::cerr << "warning: lag " << (i + 1) << " estimate " << est.sigma_hat[i]
                      << " exceeds 1.1; is the input on the standardized Frechet scale?\n";
    }
    tlts::write_tpdf_csv(opt.output, est);
    return 0;
}

struct FitOptions {
    std::string input;
    std::string output;
    std::string family = "all";
    std::size_t max_lag = 30;
};

tlts::ModelFamily family_from_name(const std::string& name) {
    if (name == "MA1") return tlts::ModelFamily::ma1;
    if (name == "AR1") return tlts::ModelFamily::ar1;
    if (name == "ARMA11") return tlts::ModelFamily::arma11;
    throw tlts::domain_error("unknown family '" + name + "' (expected MA1, AR1 or ARMA11)");
}

void print_fit_table(const std::vector<tlts::FitResult>& fits) {
    std::printf("%-8s %-28s %s\n", "Model", "Parameter estimates", "SS");
    for (const auto& fit : fits) {
        if (fit.failed) {
            std::printf("%-8s %-28s %s\n", tlts::family_name(fit.family), "-", fit.message.c_str());
            continue;
        }
        char params[64];
        if (fit.family == tlts::ModelFamily::ma1)
            std::snprintf(params, sizeof(params), "theta=%.4g", fit.params[0]);
        else if (fit.family == tlts::ModelFamily::ar1)
            std::snprintf(params, sizeof(params), "phi=%.4g", fit.params[0]);
        else
            std::snprintf(params, sizeof(params), "phi=%.4g, theta=%.4g", fit.params[0], fit.params[1]);
        std::printf("%-8s %-28s %.4g\n", tlts::family_name(fit.family), params, fit.ss);
        if (fit.flags.boundary) std::printf("%-8s note: estimate at parameter boundary\n", "");
        if (fit.flags.zero_tpdf) std::printf("%-8s note: fitted TPDF identically zero\n", "");
        if (fit.flags.identifiability) std::printf("%-8s note: parameters not identifiable from the TPDF\n", "");
    }
}

int run_fit(const FitOptions& opt) {
    const tlts::TpdfEstimate est = tlts::read_tpdf_csv(opt.input);
    std::vector<tlts::FitResult> fits;
    if (opt.family == "all") {
        fits = tlts::fit_all(est, opt.max_lag);
    } else {
        fits.push_back(tlts::fit_model(est, family_from_name(opt.family), opt.max_lag));
    }
    nlohmann::json j = nlohmann::json::array();
    for (const auto& fit : fits) j.push_back(tlts::fit_to_json(fit));
    tlts::save_json(opt.output, fits.size() == 1 ? j[0] : j);
    print_fit_table(fits);
    return 0;
}

struct SimulateOptions {
    std::string input;
    std::string output;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::optional<std::size_t> burn_in;
};

tlts::ArmaSpec arma_from_json(const nlohmann::json& j) {
    tlts::ArmaSpec spec;
    spec.ar = j.value("ar", std::vector<double>{});
    spec.ma = j.value("ma", std::vector<double>{});
    return spec;
}

int run_simulate(const SimulateOptions& opt) {
    const nlohmann::json j = tlts::load_json(opt.input);
    const std::string kind = j.value("kind", "transformed");
    std::vector<double> series;
    if (kind == "transformed") {
        tlts::SimulationRequest req;
        if (j.contains("psi")) {
            req.model = tlts::CoefficientSequence(j.at("psi").get<std::vector<double>>());
        } else {
            tlts::ArmaSpec spec = arma_from_json(j);
            warn(tlts::spec_warnings(spec));
            req.model = std::move(spec);
        }
        req.n = opt.n;
        req.seed = opt.seed;
        req.burn_in = opt.burn_in;
        series = tlts::simulate_transformed(req);
    } else if (kind == "gaussian") {
        series = tlts::simulate_gaussian_arma(arma_from_json(j), opt.n, opt.seed);
    } else if (kind == "linear") {
        const std::string domain = j.value("domain", "positive");
        if (domain != "positive" && domain != "two-sided")
            throw tlts::parse_error("linear model domain must be 'positive' or 'two-sided'");
        series = tlts::simulate_linear_rv(arma_from_json(j), opt.n, opt.seed,
                                          domain == "positive" ? tlts::NoiseDomain::positive_only
                                                               : tlts::NoiseDomain::two_sided);
    } else {
        throw tlts::parse_error("unknown model kind '" + kind + "'");
    }
    tlts::write_value_csv(opt.output, series);
    return 0;
}

struct DiagnoseOptions {
    std::string input;
    std::string output;
    std::size_t sum_window = 3;
};

int run_diagnose(const DiagnoseOptions& opt) {
    const std::vector<double> x = tlts::read_value_csv(opt.input);
    const std::vector<double> probs = {0.95, 0.98, 0.99, 0.995, 0.999};
    const std::vector<double> sums = tlts::sum_quantiles(x, opt.sum_window, probs);
    std::ofstream out(opt.output);
    if (!out) throw tlts::error("cannot write '" + opt.output + "'");
    out << "prob,run_mean,run_sd,n_runs,sum_quantile\n";
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const tlts::RunLengthSummary rl = tlts::run_lengths(x, probs[i]);
        if (rl.empty) std::cerr << "warning: no exceedances above the " << probs[i] << " quantile\n";
        out << tlts::detail::format_double(probs[i]) << "," << tlts::detail::format_double(rl.mean) << ","
            << tlts::detail::format_double(rl.sd) << "," << rl.runs.size() << ","
            << tlts::detail::format_double(sums[i]) << "\n";
    }
    return 0;
}

struct CompareOptions {
    std::string input;
    std::string marginal;
    std::string fits;
    std::string output;
    std::size_t n_sim = 0;
    std::uint64_t seed = 0;
    std::string family;
    std::size_t max_lag = 30;
    double r0_quantile = 0.975;
};

tlts::FitResult pick_fit(const nlohmann::json& j, const std::string& family) {
    std::vector<tlts::FitResult> fits;
    if (j.is_array()) {
        for (const auto& item : j) fits.push_back(tlts::fit_from_json(item));
    } else {
        fits.push_back(tlts::fit_from_json(j));
    }
    if (!family.empty()) {
        for (const auto& fit : fits)
            if (tlts::family_name(fit.family) == family) return fit;
        throw tlts::domain_error("no fit with family '" + family + "' in the fits file");
    }
    const tlts::FitResult* best = nullptr;
    for (const auto& fit : fits)
        if (!fit.failed && (!best || fit.ss < best->ss)) best = &fit;
    if (!best) throw tlts::fit_error("fits file contains no usable fit");
    return *best;
}

int run_compare(const CompareOptions& opt) {
    const std::vector<double> data = tlts::read_value_csv(opt.input);
    const tlts::MarginalModel marginal = tlts::marginal_from_json(tlts::load_json(opt.marginal));
    const tlts::FitResult fit = pick_fit(tlts::load_json(opt.fits), opt.family);
    const tlts::ComparisonReport report = tlts::compare_models(
        data, marginal, fit, opt.n_sim, opt.seed, opt.max_lag, opt.r0_quantile);
    tlts::write_report_csv(opt.output, report);
    std::cout << tlts::format_report_text(report);
    for (const auto& col : report.columns)
        if (col.failed) std::cerr << "warning: " << col.name << ": " << col.message << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transformed-linear regularly-varying time series toolkit"};
    app.require_subcommand(1);

    PreprocessOptions pre;
    CLI::App* preprocess = app.add_subcommand(
        "preprocess", "Remove the diurnal cycle, fit the marginal model and transform to the Frechet scale");
    preprocess->add_option("--input", pre.input, "CSV with columns timestamp,value")->required();
    preprocess->add_option("--output", pre.output, "Frechet-scale series CSV")->required();
    preprocess->add_option("--model-output", pre.model_output, "Marginal model JSON")->required();
    preprocess->add_option("--anomalies-output", pre.anomalies_output, "Optional anomaly series CSV");
    preprocess->add_option("--tail-prob", pre.tail_prob, "GPD tail exceedance probability")
        ->check(CLI::Range(1e-6, 0.499));
    preprocess->add_option("--from", pre.from_date, "Keep observations on or after this date (YYYY-MM-DD)");
    preprocess->add_option("--to", pre.to_date, "Keep observations on or before this date (YYYY-MM-DD)");
    preprocess->add_flag("--no-diurnal", pre.no_diurnal, "Skip diurnal-cycle removal");

    EstimateOptions est;
    CLI::App* estimate = app.add_subcommand("estimate-tpdf", "Estimate the empirical TPDF");
    estimate->add_option("--input", est.input, "Frechet-scale series CSV")->required();
    estimate->add_option("--output", est.output, "TPDF CSV (lag,sigma_hat,n_exceed)")->required();
    estimate->add_option("--max-lag", est.max_lag, "Largest lag to estimate")->check(CLI::PositiveNumber);
    estimate->add_option("--r0-quantile", est.r0_quantile, "Radial threshold quantile")
        ->check(CLI::Range(1e-6, 1.0 - 1e-6));
    estimate->add_flag("--no-bias-correct", est.no_bias_correct, "Skip mean subtraction and clamping");

    FitOptions fit;
    CLI::App* fitcmd = app.add_subcommand("fit", "Least-squares fit of model TPDFs to an empirical TPDF");
    fitcmd->add_option("--input", fit.input, "TPDF CSV")->required();
    fitcmd->add_option("--output", fit.output, "Fit result JSON")->required();
    fitcmd->add_option("--family", fit.family, "MA1, AR1, ARMA11 or all (default all)");
    fitcmd->add_option("--max-lag", fit.max_lag, "Number of lags entering the fit")->check(CLI::PositiveNumber);

    SimulateOptions sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Simulate a model described by a spec JSON");
    simulate->add_option("--input", sim.input, "Model spec JSON")->required();
    simulate->add_option("--output", sim.output, "Series CSV")->required();
    simulate->add_option("--n", sim.n, "Series length")->required()->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed, "RNG seed")->required();
    std::size_t burn_in_flag = 0;
    CLI::Option* burn_opt = simulate->add_option("--burn-in", burn_in_flag, "Burn-in length override");

    DiagnoseOptions diag;
    CLI::App* diagnose = app.add_subcommand("diagnose", "Tail summary statistics of a series");
    diagnose->add_option("--input", diag.input, "Series CSV")->required();
    diagnose->add_option("--output", diag.output, "Summary CSV")->required();
    diagnose->add_option("--k", diag.sum_window, "Rolling sum window")->check(CLI::PositiveNumber);

    CompareOptions cmp;
    CLI::App* compare = app.add_subcommand("compare", "Four-way model comparison of tail statistics");
    compare->add_option("--input", cmp.input, "Observed anomaly series CSV")->required();
    compare->add_option("--marginal", cmp.marginal, "Marginal model JSON")->required();
    compare->add_option("--fits", cmp.fits, "Fit result JSON")->required();
    compare->add_option("--output", cmp.output, "Report CSV")->required();
    compare->add_option("--seed", cmp.seed, "RNG seed")->required();
    compare->add_option("--n-sim", cmp.n_sim, "Simulation length (default: data length)");
    compare->add_option("--family", cmp.family, "Use this family from the fits file");
    compare->add_option("--max-lag", cmp.max_lag, "Lags entering the internal baseline fits");
    compare->add_option("--r0-quantile", cmp.r0_quantile, "Radial threshold quantile")
        ->check(CLI::Range(1e-6, 1.0 - 1e-6));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (preprocess->parsed()) return run_preprocess(pre);
        if (estimate->parsed()) return run_estimate(est);
        if (fitcmd->parsed()) return run_fit(fit);
        if (simulate->parsed()) {
            if (*burn_opt) sim.burn_in = burn_in_flag;
            return run_simulate(sim);
        }
        if (diagnose->parsed()) return run_diagnose(diag);
        if (compare->parsed()) return run_compare(cmp);
    } catch (const tlts::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const tlts::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitModule;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed JSON input: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
    return kExitUsage;
}
