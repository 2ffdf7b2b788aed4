#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "twistlab/config.hpp"
#include "twistlab/error.hpp"
#include "twistlab/extremal.hpp"
#include "twistlab/laguerre.hpp"
#include "twistlab/oscillatory.hpp"
#include "twistlab/parallel.hpp"
#include "twistlab/projector.hpp"
#include "twistlab/region.hpp"
#include "twistlab/resolvent.hpp"
#include "twistlab/verify.hpp"

using namespace twistlab;
using nlohmann::json;

namespace {

struct Globals {
    std::string config_path;
    std::string out_path;
    int threads = 0;
};

void emit(const Globals& g, const std::string& text) {
    if (g.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(g.out_path, std::ios::binary);
    if (!out) throw DomainError("cannot write " + g.out_path);
    out << text;
}

// Records the subcommand's options in the config so the digest covers them.
void record(RunConfig& cfg, const CLI::App* sub) {
    cfg.command = sub->get_name();
    for (const CLI::Option* opt : sub->get_options()) {
        std::string name = opt->get_name(false, true);
        if (name == "--help" || name == "-h") continue;
        std::string value;
        if (opt->count() > 0) {
            for (const std::string& r : opt->results()) value += (value.empty() ? "" : ",") + r;
        } else {
            value = opt->get_default_str();
        }
        cfg.parameters[name] = value;
    }
}

ExponentPoint parse_point(const std::string& pr, const std::string& qr) {
    return make_point(Rational::parse(pr), Rational::parse(qr));
}

json point_json(const ExponentPoint& x) { return {{"pr", x.pr.str()}, {"qr", x.qr.str()}}; }

json classify_json(const ExponentPoint& x, int d) {
    auto est = classify_estimate(x, d);
    json j;
    j["d"] = d;
    j["pr"] = x.pr.str();
    j["qr"] = x.qr.str();
    j["region"] = to_string(classify_region(x, d));
    j["estimate_class"] = to_string(est.tag);
    j["estimate"] = to_string(est.tag);
    j["rho"] = rho(x, d).str();
    return j;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw DomainError("malformed number '" + item + "'");
        }
    }
    if (out.empty()) throw DomainError("empty list");
    return out;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_doubles(s)) {
        if (v != std::floor(v)) throw DomainError("expected integers in '" + s + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"twistlab: spectral projectors of the twisted Laplacian"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config_path, "JSON file with configuration overrides");
    app.add_option("--out", g.out_path, "output file (default: stdout)");
    app.add_option("--threads", g.threads, "worker threads (overrides TWISTLAB_THREADS)")->check(CLI::PositiveNumber);
    std::uint64_t seed = 7;
    bool seed_given = false;
    app.add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { seed = v; seed_given = true; },
                                           "random seed");

    int d = 1, k = 0;
    std::string pr = "1/2", qr = "1/2";

    auto* rho_cmd = app.add_subcommand("rho", "sharp exponent, region and estimate class at (1/p, 1/q)");
    rho_cmd->add_option("--d", d)->required()->check(CLI::PositiveNumber);
    rho_cmd->add_option("--pr", pr)->required();
    rho_cmd->add_option("--qr", qr)->required();

    auto* classify_cmd = app.add_subcommand("classify", "region, estimate class and resolvent pentagon verdict");
    classify_cmd->add_option("--d", d)->required()->check(CLI::PositiveNumber);
    classify_cmd->add_option("--pr", pr)->required();
    classify_cmd->add_option("--qr", qr)->required();

    auto* points_cmd = app.add_subcommand("points", "canonical points and their duals");
    points_cmd->add_option("--d", d)->required()->check(CLI::PositiveNumber);

    double r_max = 0.0;
    int samples = 200;
    auto* kernel_cmd = app.add_subcommand("kernel", "projection kernel against the Laguerre asymptotic");
    kernel_cmd->add_option("--d", d)->required()->check(CLI::PositiveNumber);
    kernel_cmd->add_option("--k", k)->required()->check(CLI::NonNegativeNumber);
    kernel_cmd->add_option("--r-max", r_max, "largest radius (default: the turning radius)");
    kernel_cmd->add_option("--samples", samples)->check(CLI::PositiveNumber);

    std::string method = "eigen", window, in_path;
    auto* project_cmd = app.add_subcommand("project", "spectral projection of a .twf field");
    project_cmd->add_option("--d", d)->required()->check(CLI::PositiveNumber);
    project_cmd->add_option("--k", k)->required()->check(CLI::NonNegativeNumber);
    project_cmd->add_option("--method", method, "eigen or kernel");
    project_cmd->add_option("--window", window, "psi+:j, psi-:j, phi:k, phi0, psi0 or one");
    project_cmd->add_option("--in", in_path)->required();

    std::string ks = "10,20,40", norm_method = "corner_exact";
    auto* normscan_cmd = app.add_subcommand("normscan", "projector norms or certified lower bounds over k");
    normscan_cmd->add_option("--d", d)->required()->check(CLI::PositiveNumber);
    normscan_cmd->add_option("--k", ks, "comma-separated list of k");
    normscan_cmd->add_option("--pr", pr);
    normscan_cmd->add_option("--qr", qr);
    normscan_cmd->add_option("--method", norm_method,
                             "corner_exact, ring_extremizer, eigenspace_ascent or single_eigenfunction");

    std::string mus = "100,1000,10000", scales = "1,2,3,4,5,6,7,8";
    auto* osc_cmd = app.add_subcommand("oscillatory", "oscillatory integral sweep");
    osc_cmd->add_option("--mu", mus, "comma-separated list of mu");
    osc_cmd->add_option("--scales", scales, "comma-separated list of dyadic scales");

    double c = 1.0;
    int n_max = 50;
    auto* res_cmd = app.add_subcommand("resolvent", "uniform resolvent sweep");
    res_cmd->add_option("--d", d)->check(CLI::PositiveNumber);
    res_cmd->add_option("--pr", pr);
    res_cmd->add_option("--qr", qr);
    res_cmd->add_option("--c", c, "gap constant");
    res_cmd->add_option("--n-max", n_max)->check(CLI::NonNegativeNumber);

    std::string suite = "all";
    auto* verify_cmd = app.add_subcommand("verify", "deterministic self-check suites");
    verify_cmd->add_option("--suite", suite);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        RunConfig cfg = g.config_path.empty() ? RunConfig{} : load_config_file(g.config_path);
        if (seed_given) cfg.seed = seed;
        if (g.threads > 0) cfg.threads = g.threads;
        else if (cfg.threads == 0) cfg.threads = thread_count();
        setenv("TWISTLAB_THREADS", std::to_string(cfg.threads).c_str(), 1);
        CLI::App* sub = app.get_subcommands().front();
        record(cfg, sub);

        if (sub == rho_cmd || sub == classify_cmd) {
            ExponentPoint x = parse_point(pr, qr);
            json j = classify_json(x, d);
            if (sub == classify_cmd && d >= 2) j["pentagon"] = to_string(in_resolvent_pentagon(x, d));
            j["config_sha256"] = cfg.sha256();
            emit(g, j.dump(2) + "\n");
        } else if (sub == points_cmd) {
            CanonicalPoints p = canonical_points(d);
            json j;
            j["d"] = d;
            j["A"] = point_json(p.A);
            j["B"] = point_json(p.B);
            j["C"] = point_json(p.C);
            j["D"] = point_json(p.D);
            j["F"] = point_json(p.F);
            j["A_dual"] = point_json(p.A_dual);
            j["B_dual"] = point_json(p.B_dual);
            j["C_dual"] = point_json(p.C_dual);
            j["D_dual"] = point_json(p.D_dual);
            j["F_dual"] = point_json(p.F_dual);
            j["config_sha256"] = cfg.sha256();
            emit(g, j.dump(2) + "\n");
        } else if (sub == kernel_cmd) {
            SpectralIndex s{d, k};
            LaguerreIndex idx{k, double(d - 1)};
            double nu = 4.0 * k + 2.0 * (d - 1) + 2.0;
            if (r_max <= 0.0) r_max = std::sqrt(2.0 * nu);
            CsvWriter csv({"r", "varsigma", "normalized_laguerre", "asymptotic_main", "error_envelope"});
            for (int i = 1; i <= samples; ++i) {
                double r = r_max * i / samples, t = r * r / 2.0;
                std::string main = "nan", env = "nan";
                if (k >= 1 && t < nu) {
                    AsymptoticEval a = laguerre_asymptotic(idx, t);
                    main = format_double(a.main);
                    env = format_double(a.error_envelope);
                }
                csv.row({format_double(r), format_double(kernel_varsigma(s, r)),
                         format_double(normalized_laguerre(idx, t)), main, env});
            }
            emit(g, csv.finish(cfg));
        } else if (sub == project_cmd) {
            if (g.out_path.empty()) throw DomainError("project needs --out for the projected field");
            Field f = read_twf(in_path);
            if (f.grid().d != d) throw DomainError("--d does not match the field dimension");
            json j;
            if (!window.empty()) {
                if (parse_projection_method(method) != ProjectionMethod::Eigen)
                    throw DomainError("windowed projections use the eigen route");
                Window w = Window::parse(window);
                // Series levels above what the grid resolves are dropped.
                int k_max = cfg.k_max;
                while (k_max > k && !resolves(f.grid(), 2.0 * k_max + d)) --k_max;
                Field out = windowed_projection(f, 2 * k + d, w, {k_max, cfg.alpha_max});
                write_twf(g.out_path, out);
                j["window"] = w.label();
                j["series_k_max"] = k_max;
            } else {
                ProjectionResult r = project(f, {d, k}, parse_projection_method(method));
                write_twf(g.out_path, r.field);
                j["residual_estimate"] = r.residual_estimate;
                j["flagged"] = r.flagged;
            }
            j["method"] = method;
            j["mu"] = 2 * k + d;
            j["config_sha256"] = cfg.sha256();
            std::cout << j.dump(2) << "\n";
        } else if (sub == normscan_cmd) {
            NormMethod m = parse_norm_method(norm_method);
            ExponentPoint xr = parse_point(pr, qr);
            ExponentPointD x = to_double(xr);
            CsvWriter csv({"d", "k", "mu", "pr", "qr", "method", "value", "certified", "seed"});
            for (int kk : parse_ints(ks)) {
                SpectralIndex s{d, kk};
                NormReport rep;
                if (m == NormMethod::CornerExact) {
                    bool found = false;
                    for (const NormReport& r : corner_norms(s))
                        if (r.pr == x.pr && r.qr == x.qr) {
                            rep = r;
                            found = true;
                        }
                    if (!found) throw DomainError("corner_exact is available only at the corners of the square");
                } else {
                    rep = norm_lower_bound(s, x, m, cfg.seed);
                }
                csv.row({std::to_string(d), std::to_string(kk), std::to_string(s.mu()), xr.pr.str(), xr.qr.str(),
                         to_string(rep.method), format_double(rep.value), to_string(rep.certification),
                         std::to_string(rep.seed)});
            }
            emit(g, csv.finish(cfg));
        } else if (sub == osc_cmd) {
            QuadratureOptions opt;
            opt.tolerance = cfg.quadrature_tolerance;
            opt.max_panels = cfg.max_panels;
            auto rows = oscillatory_sweep(parse_doubles(mus), parse_ints(scales), opt);
            CsvWriter csv({"case", "mu", "scale", "separation", "abs_value", "normalized_value"});
            for (const OscillatoryRow& r : rows)
                csv.row({r.kind, format_double(r.mu), std::to_string(r.scale), format_double(r.separation),
                         format_double(r.abs_value), format_double(r.normalized)});
            emit(g, csv.finish(cfg));
        } else if (sub == res_cmd) {
            if (res_cmd->count("--d") == 0) d = 2;
            ExponentPoint xr = parse_point(pr, qr);
            SweepReport rep = uniform_sweep(to_double(xr), d, c, n_max);
            CsvWriter csv({"d", "pr", "qr", "z_re", "z_im", "gap", "test_id", "ratio"});
            for (const SweepRow& r : rep.rows)
                csv.row({std::to_string(d), xr.pr.str(), xr.qr.str(), format_double(r.z.real()),
                         format_double(r.z.imag()), format_double(r.gap), r.test_id, format_double(r.ratio)});
            emit(g, csv.finish(cfg));
            std::cerr << "diagnostic max/min = " << rep.diagnostic << " (" << to_string(rep.verdict) << ")\n";
        } else if (sub == verify_cmd) {
            auto lines = run_verify(suite, cfg.seed);
            bool ok = true;
            for (const VerifyLine& l : lines) ok = ok && l.pass;
            emit(g, format_verify(lines) + "# config-sha256=" + cfg.sha256() + "\n");
            return ok ? 0 : 2;
        }
        return 0;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 1;
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "no convergence: " << e.what() << " (achieved " << e.achieved() << ")\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
