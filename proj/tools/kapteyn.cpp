// kapteyn: evaluate Kapteyn series, verify the identity catalog, write
// figure data and print the exact K2 numerator polynomials.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kapteyn/cli.hpp"

namespace {

void add_common(CLI::App* sub, std::vector<std::string>& params, double& tol, std::size_t& max_terms,
                std::string& out, std::string& format) {
    sub->add_option("--param", params, "Parameter assignment k=v (repeatable)");
    sub->add_option("--tol", tol, "Relative tolerance in (1e-15, 1e-2)");
    sub->add_option("--max-terms", max_terms, "Term budget");
    sub->add_option("--out", out, "Write output to this file");
    sub->add_option("--format", format, "csv | json | text");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kapteyn series evaluation and identity checks"};
    app.require_subcommand(1);

    std::string identity, spec, out, format;
    std::vector<std::string> params;
    double tol = 1e-10;
    std::size_t max_terms = 10000;
    int figure = 0;
    long q = 0;

    auto* eval = app.add_subcommand("eval", "Sum a catalog series or a JSON-specified series");
    eval->add_option("--identity,--id", identity, "Catalog identity id");
    eval->add_option("--spec", spec, "JSON series specification file");
    add_common(eval, params, tol, max_terms, out, format);

    auto* check = app.add_subcommand("check", "Verify catalog identities at their default parameters");
    check->add_option("--identity,--id", identity, "Restrict to one identity id");
    add_common(check, params, tol, max_terms, out, format);

    auto* sweep = app.add_subcommand("sweep", "Write figure data as CSV");
    auto* fig_opt = sweep->add_option("--figure", figure, "Figure number 1..4");
    add_common(sweep, params, tol, max_terms, out, format);

    auto* pq = app.add_subcommand("pq", "Print the numerator polynomial P_q");
    auto* q_opt = pq->add_option("--q", q, "Order q >= 1");
    add_common(pq, params, tol, max_terms, out, format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    kapteyn::cli::RunConfig cfg;
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (!identity.empty()) cfg.identity = identity;
    if (!spec.empty()) cfg.spec_path = spec;
    if (!out.empty()) cfg.out = out;
    cfg.tolerance = tol;
    cfg.max_terms = max_terms;
    if (fig_opt->count()) cfg.figure = figure;
    if (q_opt->count()) cfg.q = q;
    if (!format.empty()) {
        cfg.format = kapteyn::cli::parse_format(format);
        if (!cfg.format) {
            std::cerr << "error: --format must be csv, json or text\n";
            return 1;
        }
    }
    for (const auto& kv : params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::cerr << "error: --param expects k=v, got '" << kv << "'\n";
            return 1;
        }
        try {
            std::size_t used = 0;
            const std::string value = kv.substr(eq + 1);
            const double v = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
            cfg.params[kv.substr(0, eq)] = v;
        } catch (const std::exception&) {
            std::cerr << "error: --param value for '" << kv.substr(0, eq) << "' is not a number\n";
            return 1;
        }
    }
    return kapteyn::cli::run(cfg, std::cout, std::cerr);
}
