#pragma once

// Command implementations behind the `kapteyn` tool. Each command writes to
// the given streams and returns the process exit code:
//   0 success, 1 usage or domain error, 2 numerical non-convergence.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kapteyn/catalog.hpp"
#include "kapteyn/errors.hpp"
#include "kapteyn/summation.hpp"

namespace kapteyn::cli {

enum class Format { csv, json, text };

struct RunConfig {
    std::string subcommand;
    std::optional<std::string> identity;
    std::optional<std::string> spec_path;
    catalog::Params params;
    double tolerance = 1e-10;
    std::size_t max_terms = 10000;
    std::optional<int> figure;
    std::optional<long> q;
    std::optional<std::string> out;
    std::optional<Format> format;

    /// Throws domain_error with a diagnostic on invalid settings.
    void validate() const {
        if (!(tolerance > 1e-15 && tolerance < 1e-2)) throw domain_error("--tol must lie in (1e-15, 1e-2)");
        if (max_terms < 1) throw domain_error("--max-terms must be >= 1");
        if (identity && !catalog::find_identity(*identity))
            throw domain_error("unknown identity id '" + *identity + "'");
    }

    specfun::AccuracyBudget budget() const { return {tolerance, max_terms}; }
};

inline std::optional<Format> parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    if (s == "text") return Format::text;
    return std::nullopt;
}

/// 17 significant digits, so every printed double round-trips.
inline std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

// ---------------------------------------------------------------------------
// JSON series specifications

namespace detail {

using nlohmann::json;

inline double number_field(const json& j, const std::string& key, double fallback, const std::string& path) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) throw domain_error("spec: field '" + path + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw domain_error("spec: field '" + path + key + "' must be finite");
    return d;
}

inline double required_number(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) throw domain_error("spec: field '" + path + key + "' is required");
    return number_field(j, key, 0.0, path);
}

}  // namespace detail

inline summation::SeriesSpec parse_series_spec(const nlohmann::json& j) {
    using detail::number_field;
    using detail::required_number;
    namespace rule = summation::rule;
    if (!j.is_object()) throw domain_error("spec: document must be a JSON object");

    summation::SeriesSpec s;
    if (!j.contains("kind") || !j.at("kind").is_string()) throw domain_error("spec: field 'kind' must be \"K1\" or \"K2\"");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "K1")
        s.kind = summation::SeriesKind::K1;
    else if (kind == "K2")
        s.kind = summation::SeriesKind::K2;
    else
        throw domain_error("spec: field 'kind' must be \"K1\" or \"K2\"");

    if (j.contains("coeff")) {
        const auto& c = j.at("coeff");
        if (!c.is_object() || !c.contains("rule") || !c.at("rule").is_string())
            throw domain_error("spec: field 'coeff.rule' must be a string");
        const auto name = c.at("rule").get<std::string>();
        const nlohmann::json params = c.contains("params") ? c.at("params") : nlohmann::json::object();
        if (!params.is_object()) throw domain_error("spec: field 'coeff.params' must be an object");
        if (name == "constant")
            s.coeff = rule::Constant{};
        else if (name == "power")
            s.coeff = rule::Power{required_number(params, "s", "coeff.params.")};
        else if (name == "geometric")
            s.coeff = rule::Geometric{required_number(params, "t", "coeff.params.")};
        else if (name == "inverse_quadratic")
            s.coeff = rule::InverseQuadratic{required_number(params, "b", "coeff.params.")};
        else if (name == "inverse_shifted_half") {
            const double n = required_number(params, "n", "coeff.params.");
            if (n != std::nearbyint(n)) throw domain_error("spec: field 'coeff.params.n' must be an integer");
            s.coeff = rule::InverseShiftedHalf{required_number(params, "b", "coeff.params."), static_cast<long>(n)};
        } else
            throw domain_error("spec: field 'coeff.rule' has unknown value '" + name + "'");
    }

    s.alpha = number_field(j, "alpha", s.alpha, "");
    s.beta = number_field(j, "beta", s.beta, "");
    s.gamma = number_field(j, "gamma", s.gamma, "");
    s.epsilon = number_field(j, "epsilon", s.epsilon, "");
    s.c = number_field(j, "c", s.c, "");
    s.b = number_field(j, "b", s.b, "");
    s.f = number_field(j, "f", s.f, "");
    s.g = number_field(j, "g", s.g, "");

    if (j.contains("range")) {
        const auto& r = j.at("range");
        if (r.is_string() && r.get<std::string>() == "bilateral")
            s.range = summation::Range::bilateral();
        else if (r.is_number_integer())
            s.range = summation::Range::from(r.get<long>());
        else if (r.is_object() && r.contains("from") && r.at("from").is_number_integer())
            s.range = summation::Range::from(r.at("from").get<long>());
        else
            throw domain_error("spec: field 'range' must be \"bilateral\", an integer, or {\"from\": n0}");
    }
    s.validate();
    return s;
}

inline summation::SeriesSpec load_series_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("spec: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw domain_error(std::string("spec: invalid JSON: ") + e.what());
    }
    return parse_series_spec(j);
}

// ---------------------------------------------------------------------------
// Commands

namespace detail {

inline void print_report(std::ostream& out, Format format, const std::string& label,
                         const summation::EvalReport& r) {
    switch (format) {
        case Format::csv:
            out << "source,value,err_estimate,terms_used,accelerated,converged\n";
            out << csv_field(label) << ',' << fmt(r.value) << ',' << fmt(r.err_estimate) << ',' << r.terms_used << ','
                << (r.accelerated ? "true" : "false") << ',' << (r.converged ? "true" : "false") << '\n';
            break;
        case Format::json: {
            nlohmann::ordered_json j;
            j["source"] = label;
            j["value"] = r.value;
            j["err_estimate"] = r.err_estimate;
            j["terms_used"] = r.terms_used;
            j["accelerated"] = r.accelerated;
            j["converged"] = r.converged;
            out << j.dump(2) << '\n';
            break;
        }
        case Format::text:
            out << "source: " << label << '\n'
                << "value: " << fmt(r.value) << '\n'
                << "err_estimate: " << fmt(r.err_estimate) << '\n'
                << "terms_used: " << r.terms_used << '\n'
                << "accelerated: " << (r.accelerated ? "yes" : "no") << '\n'
                << "converged: " << (r.converged ? "yes" : "no") << '\n';
            break;
    }
}

// Runs `body` writing to --out if given, else to `out`.
template <typename Body>
int with_output(const RunConfig& cfg, std::ostream& out, std::ostream& err, Body body) {
    if (!cfg.out) return body(out);
    std::ostringstream buffer;
    const int code = body(buffer);
    std::ofstream file(*cfg.out, std::ios::binary);
    if (!file) {
        err << "error: cannot write '" << *cfg.out << "'\n";
        return 1;
    }
    file << buffer.str();
    return code;
}

}  // namespace detail

inline int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        cfg.validate();
        const Format format = cfg.format.value_or(Format::text);
        if (cfg.identity && cfg.spec_path) throw domain_error("eval takes either --identity or --spec, not both");
        summation::EvalReport report;
        std::string label;
        if (cfg.identity) {
            const auto& e = catalog::get_identity(*cfg.identity);
            catalog::Params params = e.defaults.empty() ? catalog::Params{} : e.defaults.front();
            for (const auto& [k, v] : cfg.params) {
                if (std::find(e.param_names.begin(), e.param_names.end(), k) == e.param_names.end())
                    throw domain_error("identity " + e.id + " has no parameter '" + k + "'");
                params[k] = v;
            }
            report = catalog::identity_series(e, params, cfg.budget());
            label = e.id + "(" + catalog::format_params(params) + ")";
        } else if (cfg.spec_path) {
            const auto spec = load_series_spec(*cfg.spec_path);
            report = summation::eval_series(spec, cfg.budget());
            label = *cfg.spec_path;
        } else {
            throw domain_error("eval requires --identity or --spec");
        }
        return detail::with_output(cfg, out, err, [&](std::ostream& o) {
            detail::print_report(o, format, label, report);
            return report.converged ? 0 : 2;
        });
    } catch (const domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const budget_exhausted& e) {
        err << "error: " << e.what() << " (partial value " << fmt(e.partial_value()) << " after " << e.terms_used()
            << " terms)\n";
        return 2;
    } catch (const nonfinite_term& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

inline int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        cfg.validate();
    } catch (const domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    const Format format = cfg.format.value_or(Format::csv);
    std::vector<const catalog::Identity*> selected;
    if (cfg.identity)
        selected.push_back(&catalog::get_identity(*cfg.identity));
    else
        for (const auto& e : catalog::identities()) selected.push_back(&e);

    std::vector<catalog::CheckReport> rows;
    for (const auto* e : selected) {
        std::vector<catalog::Params> cases = e->defaults;
        if (!cfg.params.empty()) {
            catalog::Params merged = e->defaults.empty() ? catalog::Params{} : e->defaults.front();
            for (const auto& [k, v] : cfg.params) merged[k] = v;
            cases = {merged};
        }
        for (const auto& p : cases) {
            try {
                rows.push_back(catalog::identity_check(e->id, p, cfg.budget()));
            } catch (const std::exception& ex) {
                catalog::CheckReport r;
                r.id = e->id;
                r.params = p;
                r.lhs = r.rhs = r.abs_gap = r.gap = std::nan("");
                r.note = ex.what();
                rows.push_back(r);
            }
            if (!rows.back().note.empty()) err << rows.back().id << ": " << rows.back().note << '\n';
        }
    }
    bool all_pass = true;
    for (const auto& r : rows) all_pass = all_pass && r.pass;

    return detail::with_output(cfg, out, err, [&](std::ostream& o) {
        if (format == Format::json) {
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (const auto& r : rows) {
                nlohmann::ordered_json j;
                j["id"] = r.id;
                j["params"] = catalog::format_params(r.params);
                j["lhs"] = fmt(r.lhs);
                j["rhs"] = fmt(r.rhs);
                j["gap"] = fmt(r.gap);
                j["pass"] = r.pass;
                arr.push_back(j);
            }
            o << arr.dump(2) << '\n';
        } else if (format == Format::text) {
            for (const auto& r : rows)
                o << (r.pass ? "PASS " : "FAIL ") << r.id << " [" << catalog::format_params(r.params)
                  << "] lhs=" << fmt(r.lhs) << " rhs=" << fmt(r.rhs) << " gap=" << fmt(r.gap) << '\n';
        } else {
            o << "id,params,lhs,rhs,gap,pass\n";
            for (const auto& r : rows)
                o << r.id << ',' << csv_field(catalog::format_params(r.params)) << ',' << fmt(r.lhs) << ','
                  << fmt(r.rhs) << ',' << fmt(r.gap) << ',' << (r.pass ? "pass" : "fail") << '\n';
        }
        return all_pass ? 0 : 1;
    });
}

namespace detail {

// Grid points lo_index/scale .. hi_index/scale, so integer grid values are exact.
inline std::vector<double> grid(long lo_index, long hi_index, long scale) {
    std::vector<double> v;
    for (long i = lo_index; i <= hi_index; ++i) v.push_back(static_cast<double>(i) / static_cast<double>(scale));
    return v;
}

}  // namespace detail

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        cfg.validate();
        if (!cfg.figure) throw domain_error("sweep requires --figure 1|2|3|4");
        const int fig = *cfg.figure;
        if (fig < 1 || fig > 4) throw domain_error("unknown figure id " + std::to_string(fig) + " (expected 1..4)");
        const auto budget = cfg.budget();
        std::vector<std::string> header;
        std::vector<std::vector<double>> rows;

        if (fig == 1 || fig == 2) {
            const double x = cfg.params.count("x") ? cfg.params.at("x") : 0.45;
            const auto kind = fig == 1 ? catalog::NielsenKind::even : catalog::NielsenKind::odd;
            header = {"nu", fig == 1 ? "even" : "odd"};
            for (double nu : detail::grid(-200, 200, 20)) rows.push_back({nu, catalog::nielsen_rhs(kind, nu, x, budget)});
        } else if (fig == 3) {
            header = {"p", "xi2", "xi3", "xi4", "xi5"};
            for (double p : detail::grid(50, 300, 50)) {
                std::vector<double> row{p};
                for (int k = 2; k <= 5; ++k) row.push_back(catalog::xi(k, p));
                rows.push_back(row);
            }
        } else {
            header = {"z", "q1", "q2", "q3", "q4"};
            for (double z : detail::grid(0, 98, 200)) {
                std::vector<double> row{z};
                for (long q = 1; q <= 4; ++q) row.push_back(catalog::eval_k2_pos(q, z));
                rows.push_back(row);
            }
        }

        const Format format = cfg.format.value_or(Format::csv);
        return detail::with_output(cfg, out, err, [&](std::ostream& o) {
            if (format == Format::json) {
                nlohmann::ordered_json arr = nlohmann::ordered_json::array();
                for (const auto& row : rows) {
                    nlohmann::ordered_json j;
                    for (std::size_t i = 0; i < header.size(); ++i) j[header[i]] = row[i];
                    arr.push_back(j);
                }
                o << arr.dump(2) << '\n';
                return 0;
            }
            const char sep = format == Format::text ? ' ' : ',';
            for (std::size_t i = 0; i < header.size(); ++i) o << (i ? std::string(1, sep) : "") << header[i];
            o << '\n';
            for (const auto& row : rows) {
                for (std::size_t i = 0; i < row.size(); ++i) o << (i ? std::string(1, sep) : "") << fmt(row[i]);
                o << '\n';
            }
            return 0;
        });
    } catch (const domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const budget_exhausted& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

inline int cmd_pq(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        cfg.validate();
        if (!cfg.q) throw domain_error("pq requires --q");
        const long q = *cfg.q;
        if (q < 1) throw domain_error("--q must be >= 1");
        const auto fam = catalog::k2_chain().get(q);
        std::vector<std::string> coeffs;
        for (const auto& c : fam.p.coefficients()) coeffs.push_back(to_string(c));
        const std::string exponent = std::to_string(6 * q + 1) + "/2";
        const std::string rendered = exact::render_term(2, fam.p, -static_cast<int>(6 * q + 1));

        const Format format = cfg.format.value_or(Format::text);
        return detail::with_output(cfg, out, err, [&](std::ostream& o) {
            if (format == Format::json) {
                nlohmann::ordered_json j;
                j["q"] = q;
                j["coefficients"] = coeffs;
                j["exponent"] = exponent;
                j["form"] = rendered;
                o << j.dump(2) << '\n';
            } else if (format == Format::csv) {
                o << "degree,coefficient\n";
                for (std::size_t k = 0; k < coeffs.size(); ++k) o << k << ',' << coeffs[k] << '\n';
            } else {
                o << "q: " << q << '\n' << "P_q: ";
                for (std::size_t k = 0; k < coeffs.size(); ++k) o << (k ? ", " : "") << coeffs[k];
                o << '\n' << "exponent: " << exponent << '\n' << "K2(z," << q << ") = " << rendered << '\n';
            }
            return 0;
        });
    } catch (const domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.subcommand == "eval") return cmd_eval(cfg, out, err);
    if (cfg.subcommand == "check") return cmd_check(cfg, out, err);
    if (cfg.subcommand == "sweep") return cmd_sweep(cfg, out, err);
    if (cfg.subcommand == "pq") return cmd_pq(cfg, out, err);
    err << "error: unknown subcommand '" << cfg.subcommand << "'\n";
    return 1;
}

}  // namespace kapteyn::cli
