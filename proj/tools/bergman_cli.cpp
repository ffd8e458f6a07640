// bergman: batch front-end for the disk-analysis laboratory.
//
// Subcommands: norm, lattice, carleson, volterra, compsum, ode,
// kernelcheck. Every run writes a JSON report (stdout or --out) whose
// bytes depend only on the configuration and seed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bergman/bergman.hpp"

namespace {

using namespace bergman;
using bergman::io::json;

enum ExitCode {
    kOk = 0,
    kInput = 2,
    kRegime = 3,
    kDomain = 4,
    kContract = 5,
    kConfig = 6,
    kResolution = 7,
    kUsage = 64,
    kInternal = 70,
};

void emit(const std::string& out_path, json report) {
    if (out_path.empty()) {
        std::cout << io::report_string(std::move(report));
    } else {
        io::write_report(out_path, std::move(report));
    }
}

struct MeasureSource {
    std::string csv_path;
    double radial_power = 0.0;
    CLI::Option* radial_power_opt = nullptr;
    int octaves = 13;
    int rings_per_octave = 3;
    double cell_aspect = 2.0;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--measure", csv_path, "measure atoms CSV (z_re,z_im,weight)");
        radial_power_opt = cmd->add_option(
            "--radial-power", radial_power, "use the density (1-|z|^2)^t dA instead of a CSV");
        cmd->add_option("--octaves", octaves, "density grid depth in dyadic octaves of 1-|z|^2");
        cmd->add_option("--rings-per-octave", rings_per_octave, "density grid radial refinement");
        cmd->add_option("--cell-aspect", cell_aspect, "density grid angular stretch");
    }

    DiscreteMeasure load(json& echo) const {
        echo["octaves"] = octaves;
        echo["rings_per_octave"] = rings_per_octave;
        echo["cell_aspect"] = cell_aspect;
        if (!csv_path.empty()) {
            echo["measure"] = csv_path;
            return io::measure_from_csv(csv_path);
        }
        if (radial_power_opt != nullptr && radial_power_opt->count() > 0) {
            echo["radial_power"] = radial_power;
            return radial_power_measure(radial_power,
                                        graded_disk_rule(octaves, rings_per_octave, cell_aspect));
        }
        throw input_error("carleson: provide --measure CSV or --radial-power t");
    }
};

int run(int argc, char** argv) {
    CLI::App app{"numerical laboratory for Bergman-space operators on the unit disk"};
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("--out", out_path, "report path (default: stdout)");

    // ---- norm ------------------------------------------------------------
    auto* norm = app.add_subcommand("norm", "A^p, derivative-weighted, and sup-type norms");
    std::string norm_kind = "ap", norm_fn;
    double norm_p = 2.0, norm_alpha = 1.0, norm_rcut = 0.999, norm_rcut2 = 0.9999;
    int norm_n = 1, norm_m = 0, norm_radial = 160, norm_angular = 64, norm_max_octave = 14;
    norm->add_option("--kind", norm_kind, "ap | lp | bloch")->default_str("ap");
    norm->add_option("--fn", norm_fn, "function spec JSON")->required();
    norm->add_option("--p", norm_p, "exponent p");
    norm->add_option("--n", norm_n, "derivative order (lp)");
    norm->add_option("--m", norm_m, "derivative order (bloch)");
    norm->add_option("--alpha", norm_alpha, "weight exponent (bloch)");
    norm->add_option("--radial", norm_radial, "radial node count");
    norm->add_option("--angular", norm_angular, "angular node count");
    norm->add_option("--rcut", norm_rcut, "inner boundary cut");
    norm->add_option("--rcut2", norm_rcut2, "outer boundary cut of the extrapolation pair");
    norm->add_option("--max-octave", norm_max_octave, "sup-grid depth (bloch)");

    // ---- lattice ----------------------------------------------------------
    auto* lattice = app.add_subcommand("lattice", "Bergman-metric r-lattice construction");
    double lat_r = 1.0, lat_rmax = 0.995;
    int lat_density = 4;
    std::string lat_csv;
    lattice->add_option("--r", lat_r, "lattice radius")->required();
    lattice->add_option("--rmax", lat_rmax, "covered region |z| <= rmax");
    lattice->add_option("--grid-density", lat_density, "candidate rings per radius r");
    lattice->add_option("--csv", lat_csv, "write lattice points CSV here");

    // ---- carleson ----------------------------------------------------------
    auto* carleson = app.add_subcommand("carleson", "Carleson and Sobolev-Carleson testers");
    carleson->require_subcommand(1);
    auto* geo = carleson->add_subcommand("geometric", "lattice sup statistic (p <= q)");
    auto* integral = carleson->add_subcommand("integral", "L^{p/(p-q)} statistic (q < p)");
    auto* sobolev = carleson->add_subcommand("sobolev", "combined vs per-component rigidity");
    MeasureSource geo_src, int_src, sob_src;
    int car_k = 0;
    double car_p = 2.0, car_q = 2.0, car_r = 1.0, car_rmax = 0.9995;
    geo_src.add_options(geo);
    geo->add_option("--k", car_k, "derivative order k");
    geo->add_option("--p", car_p)->required();
    geo->add_option("--q", car_q)->required();
    geo->add_option("--r", car_r, "Bergman disk radius");
    geo->add_option("--rmax", car_rmax, "lattice depth");

    int int_k = 0;
    double int_p = 2.0, int_q = 1.0, int_r = 1.0, int_rcut = 0.99, int_rcut2 = 0.999;
    int int_radial = 128, int_angular = 256;
    int_src.add_options(integral);
    integral->add_option("--k", int_k, "derivative order k");
    integral->add_option("--p", int_p)->required();
    integral->add_option("--q", int_q)->required();
    integral->add_option("--r", int_r, "Bergman disk radius");
    integral->add_option("--rcut", int_rcut);
    integral->add_option("--rcut2", int_rcut2);
    integral->add_option("--radial", int_radial);
    integral->add_option("--angular", int_angular);

    std::vector<std::string> sob_u;
    double sob_p = 2.0, sob_q = 2.0, sob_r = 1.0, sob_rmax = 0.9995;
    unsigned sob_seed = 0;
    int sob_band_cap = 6, sob_polys = 16;
    sob_src.add_options(sobolev);
    sobolev->add_option("--u", sob_u, "symbol function specs u_0..u_n")->required();
    sobolev->add_option("--p", sob_p)->required();
    sobolev->add_option("--q", sob_q)->required();
    sobolev->add_option("--r", sob_r, "Bergman disk radius");
    sobolev->add_option("--rmax", sob_rmax, "lattice depth");
    sobolev->add_option("--seed", sob_seed, "seed for the random test family")->required();
    sobolev->add_option("--band-cap", sob_band_cap, "kernel anchors kept per dyadic band");
    sobolev->add_option("--polys", sob_polys, "random polynomials in the family");

    // ---- volterra ----------------------------------------------------------
    auto* volterra = app.add_subcommand("volterra", "generalized integral operators");
    volterra->require_subcommand(1);
    auto* vapply = volterra->add_subcommand("apply", "apply the operator to a function");
    auto* vcrit = volterra->add_subcommand("criteria", "boundedness/compactness criteria");
    std::string vop_spec, vop_fn, vop_coeffs;
    std::size_t vop_degree = kDefaultSeriesDegree;
    vapply->add_option("--spec", vop_spec, "operator spec JSON")->required();
    vapply->add_option("--fn", vop_fn, "function spec JSON")->required();
    vapply->add_option("--degree", vop_degree, "working series degree");
    vapply->add_option("--coeffs", vop_coeffs, "write result coefficients CSV here");

    std::string vcrit_spec;
    double vcrit_p = 2.0, vcrit_q = 2.0;
    bool vcrit_empirical = false;
    unsigned vcrit_seed = 20240902;
    vcrit->add_option("--spec", vcrit_spec, "operator spec JSON")->required();
    vcrit->add_option("--p", vcrit_p)->required();
    vcrit->add_option("--q", vcrit_q)->required();
    vcrit->add_flag("--empirical", vcrit_empirical, "also run the witness-norm sweep");
    vcrit->add_option("--seed", vcrit_seed, "seed for the empirical family");

    // ---- compsum ----------------------------------------------------------
    auto* compsum = app.add_subcommand("compsum", "sums of weighted composition-differentiation");
    compsum->require_subcommand(1);
    auto* capply = compsum->add_subcommand("apply", "evaluate the sum on a grid");
    auto* crigid = compsum->add_subcommand("rigidity", "pull-back Carleson rigidity");
    auto* chs = compsum->add_subcommand("hs", "Hilbert-Schmidt test on A^2");
    std::string cop_spec, cop_fn, cop_values;
    int cop_radial = 48, cop_angular = 64;
    capply->add_option("--spec", cop_spec)->required();
    capply->add_option("--fn", cop_fn)->required();
    capply->add_option("--radial", cop_radial);
    capply->add_option("--angular", cop_angular);
    capply->add_option("--values", cop_values, "write node values CSV here");

    std::string crig_spec;
    double crig_p = 2.0, crig_q = 2.0, crig_r = 1.0, crig_rmax = 0.9995;
    unsigned crig_seed = 20240902;
    crigid->add_option("--spec", crig_spec)->required();
    crigid->add_option("--p", crig_p)->required();
    crigid->add_option("--q", crig_q)->required();
    crigid->add_option("--r", crig_r, "Bergman disk radius");
    crigid->add_option("--rmax", crig_rmax, "lattice depth");
    crigid->add_option("--seed", crig_seed, "seed for the empirical family");

    std::string chs_spec;
    int chs_basis = 64;
    chs->add_option("--spec", chs_spec)->required();
    chs->add_option("--basis", chs_basis, "orthonormal basis size");

    // ---- ode ----------------------------------------------------------
    auto* ode = app.add_subcommand("ode", "linear complex differential equations");
    ode->require_subcommand(1);
    auto* osolve = ode->add_subcommand("solve", "fixed-point solver with certificate");
    auto* oracle = ode->add_subcommand("oracle", "independent coefficient recurrence");
    std::string ode_problem, ode_coeffs;
    double ode_p = 2.0, ode_tol = 1e-12;
    int ode_max_iter = 200;
    std::size_t ode_degree = kDefaultSeriesDegree;
    osolve->add_option("--problem", ode_problem, "problem JSON")->required();
    osolve->add_option("--p", ode_p, "space exponent");
    osolve->add_option("--tol", ode_tol, "A^p distance between iterates");
    osolve->add_option("--max-iter", ode_max_iter);
    osolve->add_option("--degree", ode_degree, "working series degree");
    osolve->add_option("--coeffs", ode_coeffs, "write solution coefficients CSV here");

    std::string oracle_problem, oracle_coeffs;
    std::size_t oracle_degree = 64;
    oracle->add_option("--problem", oracle_problem, "problem JSON")->required();
    oracle->add_option("--degree", oracle_degree);
    oracle->add_option("--coeffs", oracle_coeffs, "write coefficients CSV here");

    // ---- kernelcheck ----------------------------------------------------------
    auto* kernelcheck = app.add_subcommand("kernelcheck", "kernel-family verification sweeps");
    kernelcheck->require_subcommand(1);
    auto* lemma23 = kernelcheck->add_subcommand("lemma23", "norm-estimate ratio sweep");
    auto* prop26 = kernelcheck->add_subcommand("prop26", "combination lower-bound sweep");
    auto* bj = kernelcheck->add_subcommand("bj", "alternating product identity residuals");

    double l23_p = 2.0;
    int l23_imax = 3;
    std::string l23_csv;
    lemma23->add_option("--p", l23_p);
    lemma23->add_option("--i-max", l23_imax);
    lemma23->add_option("--csv", l23_csv, "write w_re,w_im,ratio sweep CSV here");

    int p26_nmax = 3, p26_count = 50;
    unsigned p26_seed = 0;
    double p26_gamma = 4.0;
    std::string p26_csv;
    prop26->add_option("--n-max", p26_nmax);
    prop26->add_option("--count", p26_count, "random coefficient draws per (w, n)");
    prop26->add_option("--seed", p26_seed)->required();
    prop26->add_option("--gamma", p26_gamma);
    prop26->add_option("--csv", p26_csv, "write w_re,w_im,ratio sweep CSV here");

    int bj_n = 6;
    double bj_beta = 2.5;
    bj->add_option("--n", bj_n)->required();
    bj->add_option("--beta", bj_beta)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    // ---- dispatch ----------------------------------------------------------
    if (norm->parsed()) {
        const AnalyticFunction f = io::load_function(norm_fn);
        json rep{{"command", "norm"}, {"kind", norm_kind}, {"fn", norm_fn}, {"p", norm_p}};
        if (norm_kind == "ap") {
            rep["rcut_pair"] = {norm_rcut, norm_rcut2};
            rep["radial"] = norm_radial;
            rep["angular"] = norm_angular;
            rep["norm"] =
                ap_norm_extrapolated(f, norm_p, norm_radial, norm_angular, norm_rcut, norm_rcut2);
        } else if (norm_kind == "lp") {
            const auto rule = disk_rule(norm_radial, norm_angular, norm_rcut2);
            rep["n"] = norm_n;
            rep["rcut"] = norm_rcut2;
            rep["norm"] = littlewood_paley_norm(f, norm_p, norm_n, rule);
        } else if (norm_kind == "bloch") {
            BoundaryGrid grid;
            grid.max_octave = norm_max_octave;
            rep["m"] = norm_m;
            rep["alpha"] = norm_alpha;
            rep["bloch"] = io::bloch_json(bloch_norm(f, norm_m, norm_alpha, grid));
            rep["norm"] = rep["bloch"]["norm"];
        } else {
            throw input_error("norm: unknown --kind \"" + norm_kind + "\"");
        }
        emit(out_path, std::move(rep));
        return kOk;
    }

    if (lattice->parsed()) {
        LatticeOptions opt;
        opt.grid_density = lat_density;
        const BergmanLattice lat = build_lattice(lat_r, lat_rmax, opt);
        if (!lat_csv.empty()) io::write_lattice_csv(lat_csv, lat);
        json rep{{"command", "lattice"},
                 {"r", lat.r},
                 {"rmax", lat.r_max},
                 {"grid_density", lat_density},
                 {"points", lat.size()},
                 {"multiplicity_bound", lat.multiplicity_bound},
                 {"min_separation", lat.min_separation},
                 {"max_covering", lat.max_covering},
                 {"grid_size", lat.grid_size}};
        emit(out_path, std::move(rep));
        return kOk;
    }

    if (geo->parsed()) {
        json echo{{"command", "carleson geometric"},
                  {"k", car_k},
                  {"p", car_p},
                  {"q", car_q},
                  {"r", car_r},
                  {"rmax", car_rmax}};
        const DiscreteMeasure mu = geo_src.load(echo);
        const BergmanLattice lat = build_lattice(car_r, car_rmax);
        echo["report"] = io::carleson_json(carleson_statistic(mu, car_k, car_p, car_q, lat));
        emit(out_path, std::move(echo));
        return kOk;
    }

    if (integral->parsed()) {
        json echo{{"command", "carleson integral"},
                  {"k", int_k},
                  {"p", int_p},
                  {"q", int_q},
                  {"r", int_r},
                  {"rcut_pair", {int_rcut, int_rcut2}}};
        const DiscreteMeasure mu = int_src.load(echo);
        const auto lo = disk_rule(int_radial, int_angular, int_rcut);
        const auto hi = disk_rule(int_radial, int_angular, int_rcut2);
        echo["report"] = io::carleson_json(
            carleson_integral_statistic(mu, int_k, int_p, int_q, int_r, lo, hi));
        emit(out_path, std::move(echo));
        return kOk;
    }

    if (sobolev->parsed()) {
        json echo{{"command", "carleson sobolev"},
                  {"p", sob_p},
                  {"q", sob_q},
                  {"r", sob_r},
                  {"rmax", sob_rmax},
                  {"u", sob_u}};
        const DiscreteMeasure mu = sob_src.load(echo);
        std::vector<AnalyticFunction> u;
        for (const auto& path : sob_u) u.push_back(io::load_function(path));
        const BergmanLattice lat = build_lattice(sob_r, sob_rmax);
        SobolevFamilyOptions fam;
        fam.seed = sob_seed;
        fam.per_band_cap = sob_band_cap;
        fam.poly_count = sob_polys;
        const auto lo = disk_rule(96, 192, 0.99);
        const auto hi = disk_rule(96, 192, 0.999);
        echo["report"] =
            io::sobolev_json(sobolev_rigidity_check(mu, u, sob_p, sob_q, lat, lo, hi, fam));
        emit(out_path, std::move(echo));
        return kOk;
    }

    if (vapply->parsed()) {
        const VolterraSpec spec = io::volterra_from_json(io::load_json(vop_spec));
        const AnalyticFunction f = io::load_function(vop_fn);
        const AnalyticFunction out = apply_volterra(spec, f, vop_degree);
        if (!vop_coeffs.empty()) io::write_coefficients_csv(vop_coeffs, out, out.degree());
        json rep{{"command", "volterra apply"},
                 {"spec", vop_spec},
                 {"fn", vop_fn},
                 {"degree", vop_degree},
                 {"result", io::function_to_json(out)}};
        emit(out_path, std::move(rep));
        return kOk;
    }

    if (vcrit->parsed()) {
        const VolterraSpec spec = io::volterra_from_json(io::load_json(vcrit_spec));
        json rep{{"command", "volterra criteria"},
                 {"spec", vcrit_spec},
                 {"p", vcrit_p},
                 {"q", vcrit_q}};
        if (vcrit_p <= vcrit_q) {
            rep["report"] = io::growth_criterion_json(criterion_T13(spec, vcrit_p, vcrit_q));
        } else {
            const auto lo = disk_rule(160, 256, 0.999);
            const auto hi = disk_rule(160, 256, 0.9999);
            rep["rcut_pair"] = {0.999, 0.9999};
            rep["report"] = io::integral_criterion_json(
                criterion_T14(spec, vcrit_p, vcrit_q, lo, hi));
        }
        if (vcrit_empirical) {
            EmpiricalNormOptions opt;
            opt.seed = vcrit_seed;
            rep["empirical"] =
                io::empirical_json(empirical_operator_norm(spec, vcrit_p, vcrit_q, opt));
        }
        emit(out_path, std::move(rep));
        return kOk;
    }

    if (capply->parsed()) {
        const CompositionSumSpec spec = io::compsum_from_json(io::load_json(cop_spec));
        const AnalyticFunction f = io::load_function(cop_fn);
        const auto rule = disk_rule(cop_radial, cop_angular, 0.99);
        const auto values = apply_comp_sum(spec, f, rule.nodes);
        if (!cop_values.empty()) {
            std::ofstream csv(cop_values);
            if (!csv) throw input_error("cannot write " + cop_values);
            csv << "z_re,z_im,re,im\n";
            csv.precision(17);
            for (std::size_t j = 0; j < values.size(); ++j)
                csv << rule.nodes[j].real() << ',' << rule.nodes[j].imag() << ','
                    << values[j].real() << ',' << values[j].imag() << '\n';
        }
        double max_abs = 0.0;
        for (const Complex& v : values) max_abs = std::max(max_abs, std::abs(v));
        json rep{{"command", "compsum apply"},
                 {"spec", cop_spec},
                 {"fn", cop_fn},
                 {"nodes", values.size()},
                 {"max_abs", max_abs}};
        emit(out_path, std::move(rep));
        return kOk;
    }

    if (crigid->parsed()) {
        const CompositionSumSpec spec = io::compsum_from_json(io::load_json(crig_spec));
        const BergmanLattice lat = build_lattice(crig_r, crig_rmax);
        const auto push = graded_disk_rule(13, 3, 2.0);
        const auto lo = disk_rule(96, 192, 0.99);
        const auto hi = disk_rule(96, 192, 0.999);
        EmpiricalNormOptions opt;
        opt.seed = crig_seed;
        json rep{{"command", "compsum rigidity"},
                 {"spec", crig_spec},
                 {"r", crig_r},
                 {"rmax", crig_rmax},
                 {"report",
                  io::rigidity_json(rigidity_T18(spec, crig_p, crig_q, lat, push, lo, hi, opt))}};
        emit(out_path, std::move(rep));
        return kOk;
    }

    if (chs->parsed()) {
        const CompositionSumSpec spec = io::compsum_from_json(io::load_json(chs_spec));
        const auto lo = disk_rule(128, 128, 0.999);
        const auto hi = disk_rule(128, 128, 0.9999);
        json rep{{"command", "compsum hs"},
                 {"spec", chs_spec},
                 {"rcut_pair", {0.999, 0.9999}},
                 {"report", io::hs_json(hilbert_schmidt_check(spec, chs_basis, lo, hi))}};
        emit(out_path, std::move(rep));
        return kOk;
    }

    if (osolve->parsed()) {
        const OdeProblem prob = io::ode_from_json(io::load_json(ode_problem));
        const auto rule = disk_rule(96, 64, 0.999);
        const auto res = neumann_solve(prob, ode_p, ode_max_iter, ode_tol, rule, ode_degree);
        if (res.solution && !ode_coeffs.empty())
            io::write_coefficients_csv(ode_coeffs, *res.solution, res.solution->degree());
        json rep{{"command", "ode solve"},
                 {"problem", ode_problem},
                 {"p", ode_p},
                 {"tol", ode_tol},
                 {"max_iter", ode_max_iter},
                 {"degree", ode_degree},
                 {"certificate", io::neumann_json(res.certificate)}};
        if (res.solution) rep["solution"] = io::function_to_json(*res.solution);
        emit(out_path, std::move(rep));
        return res.certificate.converged ? kOk : kConfig;
    }

    if (oracle->parsed()) {
        const OdeProblem prob = io::ode_from_json(io::load_json(oracle_problem));
        const AnalyticFunction f = taylor_ode_oracle(prob, oracle_degree);
        if (!oracle_coeffs.empty()) io::write_coefficients_csv(oracle_coeffs, f, oracle_degree);
        json rep{{"command", "ode oracle"},
                 {"problem", oracle_problem},
                 {"degree", oracle_degree},
                 {"solution", io::function_to_json(f)}};
        emit(out_path, std::move(rep));
        return kOk;
    }

    if (lemma23->parsed()) {
        const double gamma = default_gamma(l23_p);
        json sweep = json::array();
        std::ofstream csv;
        if (!l23_csv.empty()) {
            csv.open(l23_csv);
            if (!csv) throw input_error("cannot write " + l23_csv);
            csv << "w_re,w_im,i,ratio\n";
            csv.precision(17);
        }
        double lo = 1e300, hi = 0.0;
        for (double aw : {0.0, 0.5, 0.9, 0.99, 0.995}) {
            const int angular = std::max(64, static_cast<int>(8.0 / (1.0 - aw)));
            const auto rule = disk_rule(320, angular, 0.99995);
            for (int i = 0; i <= l23_imax; ++i) {
                const double ratio = kernel_norm_ratio({aw, 0.0}, i, gamma, l23_p, rule);
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
                sweep.push_back({{"w", io::complex_to_json({aw, 0.0})},
                                 {"i", i},
                                 {"ratio", ratio}});
                if (csv.is_open()) csv << aw << ",0," << i << ',' << ratio << '\n';
            }
        }
        json rep{{"command", "kernelcheck lemma23"},
                 {"p", l23_p},
                 {"gamma", gamma},
                 {"window", {lo, hi}},
                 {"spread", hi / lo},
                 {"sweep", std::move(sweep)}};
        emit(out_path, std::move(rep));
        return kOk;
    }

    if (prop26->parsed()) {
        std::mt19937_64 rng(p26_seed);
        std::normal_distribution<double> g(0.0, 1.0);
        std::ofstream csv;
        if (!p26_csv.empty()) {
            csv.open(p26_csv);
            if (!csv) throw input_error("cannot write " + p26_csv);
            csv << "w_re,w_im,ratio\n";
            csv.precision(17);
        }
        double worst = 1.0;
        json worst_case;
        for (double aw : {0.0, 0.3, 0.6, 0.9, 0.99}) {
            for (double angle : {0.0, 2.1, 4.3}) {
                const Complex w = std::polar(aw, angle);
                if (aw == 0.0 && angle > 0.0) continue;
                for (int n = 1; n <= p26_nmax; ++n) {
                    for (int trial = 0; trial < p26_count; ++trial) {
                        std::vector<Complex> alphas(static_cast<std::size_t>(n) + 1);
                        for (Complex& a : alphas) {
                            do {
                                a = Complex{g(rng), g(rng)};
                            } while (std::abs(a) < 1e-3);
                        }
                        const double ratio = combination_lower_ratio_a2(w, alphas, p26_gamma);
                        if (csv.is_open())
                            csv << w.real() << ',' << w.imag() << ',' << ratio << '\n';
                        if (ratio < worst) {
                            worst = ratio;
                            worst_case = {{"w", io::complex_to_json(w)}, {"n", n}};
                        }
                    }
                }
            }
        }
        json rep{{"command", "kernelcheck prop26"},
                 {"gamma", p26_gamma},
                 {"n_max", p26_nmax},
                 {"count", p26_count},
                 {"seed", p26_seed},
                 {"min_ratio", worst},
                 {"worst_case", std::move(worst_case)}};
        emit(out_path, std::move(rep));
        return kOk;
    }

    if (bj->parsed()) {
        json table = json::array();
        double worst = 0.0;
        for (int j = 0; j < bj_n; ++j) {
            const double residual = bj_residual(bj_beta, bj_n, j);
            const double rel = std::abs(residual) / gamma_product(bj_beta, bj_n, 2 * bj_n - j);
            worst = std::max(worst, rel);
            table.push_back({{"j", j}, {"residual", residual}, {"relative", rel}});
        }
        json rep{{"command", "kernelcheck bj"},
                 {"n", bj_n},
                 {"beta", bj_beta},
                 {"max_relative_residual", worst},
                 {"table", std::move(table)}};
        emit(out_path, std::move(rep));
        return kOk;
    }

    throw input_error("unknown command");
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const bergman::input_error& e) {
        std::cerr << "{\"error\":{\"code\":\"INPUT\",\"message\":\"" << e.what() << "\"}}\n";
        return kInput;
    } catch (const bergman::regime_error& e) {
        std::cerr << "{\"error\":{\"code\":\"REGIME\",\"message\":\"" << e.what() << "\"}}\n";
        return kRegime;
    } catch (const bergman::domain_error& e) {
        std::cerr << "{\"error\":{\"code\":\"DOMAIN\",\"message\":\"" << e.what() << "\"}}\n";
        return kDomain;
    } catch (const bergman::contract_error& e) {
        std::cerr << "{\"error\":{\"code\":\"CONTRACT\",\"message\":\"" << e.what() << "\"}}\n";
        return kContract;
    } catch (const bergman::config_error& e) {
        std::cerr << "{\"error\":{\"code\":\"CONFIG\",\"message\":\"" << e.what() << "\"}}\n";
        return kConfig;
    } catch (const bergman::resolution_error& e) {
        std::cerr << "{\"error\":{\"code\":\"RESOLUTION\",\"message\":\"" << e.what() << "\"}}\n";
        return kResolution;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":{\"code\":\"INTERNAL\",\"message\":\"" << e.what() << "\"}}\n";
        return kInternal;
    }
}
