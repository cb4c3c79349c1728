#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tlts/diagnostics.hpp"
#include "tlts/errors.hpp"
#include "tlts/estimate.hpp"
#include "tlts/fit.hpp"
#include "tlts/marginal.hpp"

namespace tlts {

struct Timestamp {
    int year = 0;
    int month = 1;
    int day = 1;
    int hour = 0;
    int minute = 0;
    double second = 0.0;

    /// Sortable calendar-date key, used by the --from/--to filters.
    int date_key() const { return year * 10000 + month * 100 + day; }
};

/// Parses "YYYY-MM-DD", optionally followed by "T" or " " and "HH:MM[:SS[.f]]".
inline Timestamp parse_timestamp(const std::string& s) {
    Timestamp ts;
    int consumed = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d%n", &ts.year, &ts.month, &ts.day, &consumed) != 3)
        throw parse_error("malformed timestamp '" + s + "'");
    if (static_cast<std::size_t>(consumed) < s.size()) {
        const char sep = s[static_cast<std::size_t>(consumed)];
        if (sep != 'T' && sep != ' ') throw parse_error("malformed timestamp '" + s + "'");
        const char* rest = s.c_str() + consumed + 1;
        int used = 0;
        if (std::sscanf(rest, "%d:%d%n", &ts.hour, &ts.minute, &used) != 2)
            throw parse_error("malformed timestamp '" + s + "'");
        if (rest[used] == ':') {
            char* end = nullptr;
            ts.second = std::strtod(rest + used + 1, &end);
            if (end == rest + used + 1) throw parse_error("malformed timestamp '" + s + "'");
        }
    }
    if (ts.month < 1 || ts.month > 12 || ts.day < 1 || ts.day > 31 || ts.hour < 0 || ts.hour > 23 ||
        ts.minute < 0 || ts.minute > 59 || ts.second < 0.0 || ts.second >= 60.0)
        throw parse_error("timestamp field out of range in '" + s + "'");
    return ts;
}

struct Observation {
    Timestamp time;
    double value = 0.0;
};

namespace detail {

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

inline double parse_double_field(const std::string& field, const std::string& path, std::size_t lineno) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0')
        throw parse_error(path + ":" + std::to_string(lineno) + ": malformed number '" + field + "'");
    return v;
}

/// 17 significant digits always read back to the identical double.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

/// Reads a CSV with header "timestamp,value".
inline std::vector<Observation> read_timestamped_csv(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty() || lines[0] != "timestamp,value")
        throw parse_error(path + ": expected header 'timestamp,value'");
    std::vector<Observation> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto comma = lines[i].find(',');
        if (comma == std::string::npos)
            throw parse_error(path + ":" + std::to_string(i + 1) + ": expected 'timestamp,value'");
        Observation obs;
        obs.time = parse_timestamp(lines[i].substr(0, comma));
        obs.value = detail::parse_double_field(lines[i].substr(comma + 1), path, i + 1);
        out.push_back(obs);
    }
    return out;
}

/// Reads a CSV with header "value", one value per row.
inline std::vector<double> read_value_csv(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty() || lines[0] != "value")
        throw parse_error(path + ": expected header 'value'");
    std::vector<double> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        out.push_back(detail::parse_double_field(lines[i], path, i + 1));
    }
    return out;
}

inline void write_value_csv(const std::string& path, const std::vector<double>& values) {
    std::ofstream out(path);
    if (!out) throw error("cannot write '" + path + "'");
    out << "value\n";
    for (double v : values) out << detail::format_double(v) << "\n";
}

inline void write_tpdf_csv(const std::string& path, const TpdfEstimate& est) {
    std::ofstream out(path);
    if (!out) throw error("cannot write '" + path + "'");
    out << "lag,sigma_hat,n_exceed\n";
    for (std::size_t i = 0; i < est.sigma_hat.size(); ++i)
        out << (i + 1) << "," << detail::format_double(est.sigma_hat[i]) << "," << est.n_exceed[i] << "\n";
}

inline TpdfEstimate read_tpdf_csv(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty() || lines[0] != "lag,sigma_hat,n_exceed")
        throw parse_error(path + ": expected header 'lag,sigma_hat,n_exceed'");
    TpdfEstimate est;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        std::istringstream row(lines[i]);
        std::string lag_s, sigma_s, count_s;
        if (!std::getline(row, lag_s, ',') || !std::getline(row, sigma_s, ',') || !std::getline(row, count_s))
            throw parse_error(path + ":" + std::to_string(i + 1) + ": expected 'lag,sigma_hat,n_exceed'");
        const double lag = detail::parse_double_field(lag_s, path, i + 1);
        if (lag != static_cast<double>(est.sigma_hat.size() + 1))
            throw parse_error(path + ":" + std::to_string(i + 1) + ": lags must be contiguous from 1");
        est.sigma_hat.push_back(detail::parse_double_field(sigma_s, path, i + 1));
        const double count = detail::parse_double_field(count_s, path, i + 1);
        est.n_exceed.push_back(static_cast<std::size_t>(count));
        est.low_count.push_back(count < 30);
        est.out_of_range.push_back(est.sigma_hat.back() > 1.1);
    }
    return est;
}

// --- JSON persistence -------------------------------------------------------

inline nlohmann::json marginal_to_json(const MarginalModel& model) {
    nlohmann::json j;
    if (model.hourly_means) {
        j["hourly_means"] = std::vector<double>(model.hourly_means->begin(), model.hourly_means->end());
    } else {
        j["hourly_means"] = nullptr;
    }
    j["body"] = model.body;
    j["mu_hat"] = model.mu_hat;
    j["gpd_scale"] = model.gpd_scale;
    j["gpd_shape"] = model.gpd_shape;
    j["tail_prob"] = model.tail_prob;
    return j;
}

inline MarginalModel marginal_from_json(const nlohmann::json& j) {
    MarginalModel model;
    if (!j.at("hourly_means").is_null()) {
        const auto means = j.at("hourly_means").get<std::vector<double>>();
        if (means.size() != 24) throw parse_error("hourly_means must hold 24 values");
        std::array<double, 24> arr{};
        std::copy(means.begin(), means.end(), arr.begin());
        model.hourly_means = arr;
    }
    model.body = j.at("body").get<std::vector<double>>();
    model.mu_hat = j.at("mu_hat").get<double>();
    model.gpd_scale = j.at("gpd_scale").get<double>();
    model.gpd_shape = j.at("gpd_shape").get<double>();
    model.tail_prob = j.at("tail_prob").get<double>();
    return model;
}

inline nlohmann::json fit_to_json(const FitResult& fit) {
    nlohmann::json j;
    j["family"] = family_name(fit.family);
    if (fit.failed) {
        j["error"] = fit.message;
        return j;
    }
    nlohmann::json params;
    switch (fit.family) {
        case ModelFamily::ma1: params["theta"] = fit.params[0]; break;
        case ModelFamily::ar1: params["phi"] = fit.params[0]; break;
        case ModelFamily::arma11:
            params["phi"] = fit.params[0];
            params["theta"] = fit.params[1];
            break;
    }
    j["params"] = params;
    j["ss"] = fit.ss;
    std::vector<std::string> flags;
    if (fit.flags.boundary) flags.push_back("boundary");
    if (fit.flags.zero_tpdf) flags.push_back("zero_tpdf");
    if (fit.flags.identifiability) flags.push_back("identifiability");
    j["flags"] = flags;
    return j;
}

inline FitResult fit_from_json(const nlohmann::json& j) {
    FitResult fit;
    const std::string family = j.at("family").get<std::string>();
    if (family == "MA1")
        fit.family = ModelFamily::ma1;
    else if (family == "AR1")
        fit.family = ModelFamily::ar1;
    else if (family == "ARMA11")
        fit.family = ModelFamily::arma11;
    else
        throw parse_error("unknown model family '" + family + "'");
    if (j.contains("error")) {
        fit.failed = true;
        fit.message = j.at("error").get<std::string>();
        return fit;
    }
    const auto& params = j.at("params");
    if (fit.family == ModelFamily::ma1) {
        fit.params = {params.at("theta").get<double>()};
    } else if (fit.family == ModelFamily::ar1) {
        fit.params = {params.at("phi").get<double>()};
    } else {
        fit.params = {params.at("phi").get<double>(), params.at("theta").get<double>()};
    }
    fit.ss = j.at("ss").get<double>();
    for (const auto& flag : j.value("flags", std::vector<std::string>{})) {
        if (flag == "boundary") fit.flags.boundary = true;
        if (flag == "zero_tpdf") fit.flags.zero_tpdf = true;
        if (flag == "identifiability") fit.flags.identifiability = true;
    }
    return fit;
}

inline nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path + ": " + e.what());
    }
    return j;
}

inline void save_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw error("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

// --- Comparison report ------------------------------------------------------

inline void write_report_csv(const std::string& path, const ComparisonReport& report) {
    std::ofstream out(path);
    if (!out) throw error("cannot write '" + path + "'");
    out << "table,quantile";
    for (const auto& col : report.columns) out << "," << col.name;
    out << "\n";
    out << "seed,";
    for (const auto& col : report.columns) out << "," << col.seed;
    out << "\n";
    const auto emit = [&](const char* table, std::size_t i, const auto& getter) {
        out << table << "," << detail::format_double(report.probs[i]);
        for (const auto& col : report.columns) out << "," << detail::format_double(getter(col, i));
        out << "\n";
    };
    for (std::size_t i = 0; i < report.probs.size(); ++i)
        emit("run_mean", i, [](const ModelColumn& c, std::size_t k) { return c.run_mean[k]; });
    for (std::size_t i = 0; i < report.probs.size(); ++i)
        emit("run_sd", i, [](const ModelColumn& c, std::size_t k) { return c.run_sd[k]; });
    for (std::size_t i = 0; i < report.probs.size(); ++i)
        emit("sum_quantile", i, [](const ModelColumn& c, std::size_t k) { return c.sum_q[k]; });
}

/// Aligned text rendering of the two comparison tables: average run length
/// above a threshold quantile as "mean (sd)", and quantiles of the rolling
/// sum of three consecutive terms.
inline std::string format_report_text(const ComparisonReport& report) {
    std::ostringstream out;
    const int width = 26;
    const auto pad = [&](const std::string& s) {
        std::string t = s.size() > static_cast<std::size_t>(width - 2) ? s.substr(0, width - 2) : s;
        return std::string(static_cast<std::size_t>(width) - t.size(), ' ') + t;
    };
    const auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    };

    out << "Average length of run above a threshold\n";
    out << pad("quantile");
    for (const auto& col : report.columns) out << pad(col.name);
    out << "\n";
    for (std::size_t i = 0; i < report.probs.size(); ++i) {
        out << pad(num(report.probs[i]));
        for (const auto& col : report.columns)
            out << pad(num(col.run_mean[i]) + " (" + num(col.run_sd[i]) + ")");
        out << "\n";
    }
    out << "\nQuantiles for sum of " << report.sum_window << " consecutive terms\n";
    out << pad("quantile");
    for (const auto& col : report.columns) out << pad(col.name);
    out << "\n";
    for (std::size_t i = 0; i < report.probs.size(); ++i) {
        out << pad(num(report.probs[i]));
        for (const auto& col : report.columns) out << pad(num(col.sum_q[i]));
        out << "\n";
    }
    for (const auto& col : report.columns)
        if (col.failed) out << "note: " << col.name << " column failed: " << col.message << "\n";
    return out.str();
}

}  // namespace tlts
