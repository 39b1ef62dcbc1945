// bracketlab command-line front end.
//
//   bracketlab eval   --phi '{a1*n}' --bind vals.txt --n 100
//   bracketlab gowers --phi 'a1*n^2' --bind vals.txt --n 64 --k 3
//   bracketlab recur  --nu 'a1*n' --bind vals.txt --delta 1/10 --n 1000,10000
//   bracketlab nil    --alpha sqrt2 --beta sqrt3 --n 1000
//   bracketlab repro  --experiment uk-floor [--k 3] [--recalibrate]
//
// Exit codes: 0 success, 1 assertion or acceptance failure, 2 usage or parse
// error.  Every JSON report embeds the run configuration; fixed seeds and
// fixed-order reductions make reruns byte-identical.  BRACKETLAB_THREADS
// caps worker threads.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bracketlab/repro.hpp"

using namespace bracketlab;

namespace {

struct CommonOpts {
    std::string phi_text;
    std::string bind_path;
    std::string mode = "float";
    std::string method = "auto";
    std::string out_path;
    std::string format = "json";
    long long n = 100;
    std::string n_list;
    int k = 3;
    long long budget = 2000000000LL;
    std::uint64_t seed = 1;
};

Method parse_method(const std::string& name) {
    if (name == "auto") return Method::Auto;
    if (name == "direct") return Method::Direct;
    if (name == "recursive") return Method::Recursive;
    if (name == "mc") return Method::MonteCarlo;
    throw Error("unknown method: " + name);
}

std::vector<long long> parse_n_list(const std::string& text, long long fallback) {
    if (text.empty()) return {fallback};
    std::vector<long long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoll(item));
    }
    if (out.empty()) throw Error("empty --n list");
    return out;
}

// named constants are allowed on the command line in float mode
double parse_real_arg(const std::string& text) {
    double named;
    if (named_constant(text, named)) return named;
    return to_double(rational_from_string(text));
}

void emit(const CommonOpts& opts, const std::string& body) {
    if (opts.out_path.empty()) {
        std::cout << body;
    } else {
        write_text(opts.out_path, body);
    }
}

Json config_json(const std::string& subcommand, const CommonOpts& o) {
    return Json{{"subcommand", subcommand}, {"phi", o.phi_text}, {"bind", o.bind_path},
                {"mode", o.mode},           {"method", o.method}, {"n", o.n},
                {"k", o.k},                 {"budget", o.budget}, {"seed", o.seed},
                {"format", o.format}};
}

template <class R>
Binding<R> load_binding(const CommonOpts& o) {
    if (o.bind_path.empty()) return {};
    if constexpr (std::is_same_v<R, double>) {
        return parse_binding_text_float(read_text_file(o.bind_path));
    } else {
        return parse_binding_text_exact(read_text_file(o.bind_path));
    }
}

// --- eval: n, phi(n), {phi(n)} --------------------------------------------------

template <class R>
std::string run_eval_mode(const CommonOpts& o) {
    auto form = parse_form(o.phi_text);
    auto poly = realize(form, load_binding<R>(o));
    std::ostringstream csv;
    csv << "n,phi,frac\n";
    for (long long n = 1; n <= o.n; ++n) {
        R v = eval(poly, n);
        if constexpr (std::is_same_v<R, double>) {
            csv.precision(17);
            csv << n << "," << v << "," << frac(v) << "\n";
        } else {
            csv << n << "," << to_string(v) << "," << to_string(frac(v)) << "\n";
        }
    }
    return csv.str();
}

int run_eval(const CommonOpts& o) {
    std::string body = o.mode == "exact" ? run_eval_mode<Rational>(o) : run_eval_mode<double>(o);
    emit(o, body);
    return 0;
}

// --- gowers -----------------------------------------------------------------------

int run_gowers(const CommonOpts& o) {
    if (o.mode == "exact") throw Error("gowers norms are transcendental; use --mode float");
    if (o.k < 2 || o.k > 5) throw Error("--k must be between 2 and 5");
    auto form = parse_form(o.phi_text.empty() ? "0" : o.phi_text);
    auto poly = realize(form, load_binding<double>(o));
    auto f = phase_seq(seq_from_poly(poly, o.n));
    McOptions mc;
    mc.seed = o.seed;
    mc.samples = std::max<long long>(1000, std::min<long long>(o.budget, 200000));
    auto rep = gowers_norm_interval(f, o.k, std::nullopt, parse_method(o.method), mc);
    Json j = to_json(rep);
    j["config"] = config_json("gowers", o);
    emit(o, j.dump(2) + "\n");
    return 0;
}

// --- recur: density scan -----------------------------------------------------------

int run_recur(const CommonOpts& o, const std::vector<std::string>& nu_texts,
              const std::string& delta_text, const std::string& eps_text) {
    if (nu_texts.empty()) throw Error("recur needs at least one --nu");
    IntervalSpec target = IntervalSpec::full();
    if (!delta_text.empty()) {
        target = IntervalSpec::centered(rational_from_string(delta_text));
    } else if (!eps_text.empty()) {
        target = IntervalSpec::centered(Rational(1, 2) - rational_from_string(eps_text));
    } else {
        throw Error("recur needs --delta or --eps");
    }

    auto ns = parse_n_list(o.n_list, o.n);
    std::vector<std::pair<long long, double>> rows;
    for (long long N : ns) {
        double density;
        if (o.mode == "exact") {
            RecurrenceSetSpec<Rational> spec;
            spec.N = N;
            auto b = load_binding<Rational>(o);
            for (const auto& t : nu_texts)
                spec.constraints.emplace_back(realize(parse_form(t), b), target);
            density = spec.density();
        } else {
            RecurrenceSetSpec<double> spec;
            spec.N = N;
            auto b = load_binding<double>(o);
            for (const auto& t : nu_texts)
                spec.constraints.emplace_back(realize(parse_form(t), b), target);
            density = spec.density();
        }
        rows.emplace_back(N, density);
    }

    if (o.format == "csv") {
        std::ostringstream csv;
        csv << "N,density\n";
        csv.precision(17);
        for (const auto& [N, d] : rows) csv << N << "," << d << "\n";
        emit(o, csv.str());
    } else {
        Json cells = Json::array();
        for (const auto& [N, d] : rows) cells.push_back(Json{{"N", N}, {"density", d}});
        Json j{{"schema", kSchemaVersion},
               {"target", target.describe()},
               {"cells", std::move(cells)},
               {"config", config_json("recur", o)}};
        emit(o, j.dump(2) + "\n");
    }
    return 0;
}

// --- nil: orbit dump + closed-form verification --------------------------------------

int run_nil(const CommonOpts& o, const std::string& alpha_text, const std::string& beta_text,
            bool no_check) {
    int rc = 0;
    std::ostringstream csv;
    csv << "n,chi1,chi2,chi3\n";
    csv.precision(17);
    if (o.mode == "exact") {
        Rational alpha = rational_from_string(alpha_text);
        Rational beta = rational_from_string(beta_text);
        auto B = MalcevBasis::heisenberg_classical();
        for (long long n = 1; n <= o.n; ++n) {
            Unitriangular<Rational> g(2, 1);
            g.mats[0].at(0, 1) = Rational(-(alpha * static_cast<long>(n)));
            g.mats[0].at(1, 2) = Rational(beta * static_cast<long>(n));
            auto red = reduce_to_fundamental(g, B);
            csv << n << "," << to_string(red.chi[0]) << "," << to_string(red.chi[1]) << ","
                << to_string(red.chi[2]) << "\n";
        }
        if (!no_check) {
            auto rep = heisenberg_orbit_check<Rational>(alpha, beta, o.n);
            if (!rep.ok) {
                std::cerr << "orbit check failed at n = " << rep.first_bad_n << "\n";
                rc = 1;
            }
        }
    } else {
        double alpha = parse_real_arg(alpha_text);
        double beta = parse_real_arg(beta_text);
        auto B = MalcevBasis::heisenberg_classical();
        for (long long n = 1; n <= o.n; ++n) {
            Unitriangular<double> g(2, 1);
            g.mats[0].at(0, 1) = -alpha * static_cast<double>(n);
            g.mats[0].at(1, 2) = beta * static_cast<double>(n);
            auto red = reduce_to_fundamental(g, B);
            csv << n << "," << red.chi[0] << "," << red.chi[1] << "," << red.chi[2] << "\n";
        }
        if (!no_check) {
            auto rep = heisenberg_orbit_check<double>(alpha, beta, o.n);
            if (!rep.ok) {
                std::cerr << "orbit check failed at n = " << rep.first_bad_n << " (error "
                          << rep.max_error << ")\n";
                rc = 1;
            }
        }
    }
    emit(o, csv.str());
    return rc;
}

// --- repro -------------------------------------------------------------------------

int run_repro(const CommonOpts& o, const std::string& experiment, const std::string& floors_path,
              bool recalibrate, bool k_given) {
    std::optional<int> k_filter;
    if (k_given) k_filter = o.k;
    const long long mc_samples = 100000;

    if (recalibrate) {
        if (experiment != "uk-floor") throw Error("--recalibrate applies to uk-floor");
        Json doc = repro::recalibrate_uk_floors(repro::kPilotSeed, mc_samples, std::nullopt);
        write_text(floors_path, doc.dump(2) + "\n");
        std::cout << "wrote " << floors_path << "\n";
        return 0;
    }

    ReproReport rep;
    if (experiment == "uk-floor") {
        Json floors = Json::parse(read_text_file(floors_path));
        rep = repro::run_uk_floor(floors, k_filter, repro::kPilotSeed, mc_samples);
    } else if (experiment == "recurrence-scan") {
        Json floors = Json::parse(read_text_file(floors_path));
        rep = repro::run_recurrence_scan(floors);
    } else if (experiment == "heisenberg") {
        rep = repro::run_heisenberg();
    } else if (experiment == "appendixC") {
        rep = repro::run_appendix_c(repro::kPilotSeed);
    } else {
        throw Error("unknown experiment: " + experiment +
                    " (expected uk-floor, recurrence-scan, heisenberg or appendixC)");
    }

    Json j = to_json(rep);
    j["config"] = config_json("repro", o);
    j["config"]["experiment"] = experiment;
    j["config"]["floors"] = floors_path;
    emit(o, j.dump(2) + "\n");
    return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bracket polynomial and uniformity-norm laboratory"};
    app.require_subcommand(1);

    CommonOpts o;
    std::vector<std::string> nu_texts;
    std::string delta_text, eps_text;
    std::string alpha_text = "sqrt2", beta_text = "sqrt3";
    std::string experiment = "uk-floor", floors_path = "data/pilot_floors.json";
    bool recalibrate = false, no_check = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--phi", o.phi_text, "bracket expression in the DSL");
        cmd->add_option("--bind", o.bind_path, "binding file: lines 'a<k> = value'");
        cmd->add_option("--mode", o.mode, "float|exact")->check(CLI::IsMember({"float", "exact"}));
        cmd->add_option("--method", o.method, "auto|direct|recursive|mc")
            ->check(CLI::IsMember({"auto", "direct", "recursive", "mc"}));
        cmd->add_option("--budget", o.budget, "tuple/sample budget");
        cmd->add_option("--seed", o.seed, "random seed (recorded in reports)");
        cmd->add_option("--out", o.out_path, "output path (default stdout)");
        cmd->add_option("--format", o.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    };

    auto* eval_cmd = app.add_subcommand("eval", "tabulate phi and {phi} on [N]");
    add_common(eval_cmd);
    eval_cmd->add_option("--n", o.n, "domain size N");

    auto* gowers_cmd = app.add_subcommand("gowers", "U^k[N] norm of e(phi)");
    add_common(gowers_cmd);
    gowers_cmd->add_option("--n", o.n, "domain size N");
    gowers_cmd->add_option("--k", o.k, "norm order, 2..5");

    auto* recur_cmd = app.add_subcommand("recur", "recurrence-set density scan");
    add_common(recur_cmd);
    recur_cmd->add_option("--n", o.n_list, "N or comma-separated list of N");
    recur_cmd->add_option("--nu", nu_texts, "constraint expression (repeatable)");
    recur_cmd->add_option("--delta", delta_text, "targets I_delta = (-delta, delta)");
    recur_cmd->add_option("--eps", eps_text, "targets I_{1/2-eps}");

    auto* nil_cmd = app.add_subcommand("nil", "Heisenberg orbit dump and check");
    add_common(nil_cmd);
    nil_cmd->add_option("--n", o.n, "orbit length");
    nil_cmd->add_option("--alpha", alpha_text, "alpha (number or named constant)");
    nil_cmd->add_option("--beta", beta_text, "beta (number or named constant)");
    nil_cmd->add_flag("--no-check", no_check, "skip the closed-form verification");

    auto* repro_cmd = app.add_subcommand("repro", "registered reproduction experiments");
    add_common(repro_cmd);
    auto* kopt = repro_cmd->add_option("--k", o.k, "restrict uk-floor to one k");
    repro_cmd->add_option("--experiment", experiment,
                          "uk-floor|recurrence-scan|heisenberg|appendixC");
    repro_cmd->add_option("--floors", floors_path, "pilot floors file");
    repro_cmd->add_flag("--recalibrate", recalibrate, "re-measure and write the floors file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (eval_cmd->parsed()) return run_eval(o);
        if (gowers_cmd->parsed()) return run_gowers(o);
        if (recur_cmd->parsed()) return run_recur(o, nu_texts, delta_text, eps_text);
        if (nil_cmd->parsed()) return run_nil(o, alpha_text, beta_text, no_check);
        if (repro_cmd->parsed())
            return run_repro(o, experiment, floors_path, recalibrate, kopt->count() > 0);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
