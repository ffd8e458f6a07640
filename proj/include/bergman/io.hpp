#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bergman/analytic.hpp"
#include "bergman/carleson.hpp"
#include "bergman/errors.hpp"
#include "bergman/geometry.hpp"
#include "bergman/norms.hpp"
#include "bergman/ode.hpp"
#include "bergman/operators.hpp"

namespace bergman::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// primitives

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw input_error("expected a complex number as [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

// ---------------------------------------------------------------------------
// analytic functions: {"kind":"taylor","coeffs":[[re,im],...]} or
// {"kind":"kernel","w":[re,im],"i":int,"s":float[,"scale":[re,im]]}

inline json function_to_json(const AnalyticFunction& f) {
    json j;
    if (f.is_taylor()) {
        j["kind"] = "taylor";
        json coeffs = json::array();
        for (const Complex& c : f.coefficients()) coeffs.push_back(complex_to_json(c));
        j["coeffs"] = std::move(coeffs);
    } else {
        const auto& pk = f.kernel_form();
        j["kind"] = "kernel";
        j["w"] = complex_to_json(pk.w);
        j["i"] = pk.zpow;
        j["s"] = pk.exponent;
        if (pk.scale != Complex{1.0, 0.0}) j["scale"] = complex_to_json(pk.scale);
    }
    return j;
}

inline AnalyticFunction function_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw input_error("function spec needs a \"kind\" field");
    const std::string kind = j["kind"].get<std::string>();
    try {
        if (kind == "taylor") {
            if (!j.contains("coeffs") || !j["coeffs"].is_array())
                throw input_error("taylor spec needs a \"coeffs\" array");
            std::vector<Complex> coeffs;
            for (const auto& c : j["coeffs"]) coeffs.push_back(complex_from_json(c));
            return AnalyticFunction::taylor(std::move(coeffs));
        }
        if (kind == "kernel") {
            if (!j.contains("w") || !j.contains("i") || !j.contains("s"))
                throw input_error("kernel spec needs \"w\", \"i\", \"s\"");
            const Complex w = complex_from_json(j["w"]);
            const int i = j["i"].get<int>();
            const double s = j["s"].get<double>();
            const Complex scale =
                j.contains("scale") ? complex_from_json(j["scale"]) : Complex{1.0, 0.0};
            return AnalyticFunction::power_kernel(w, i, s, scale);
        }
    } catch (const contract_error& e) {
        throw input_error(std::string("invalid function spec: ") + e.what());
    } catch (const domain_error& e) {
        throw input_error(std::string("invalid function spec: ") + e.what());
    }
    throw input_error("unknown function kind \"" + kind + "\"");
}

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw input_error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

inline AnalyticFunction load_function(const std::string& path) {
    return function_from_json(load_json(path));
}

// ---------------------------------------------------------------------------
// operator and problem specs

inline VolterraSpec volterra_from_json(const json& j) {
    if (!j.contains("type")) throw input_error("operator spec needs a \"type\"");
    const std::string type = j["type"].get<std::string>();
    if (type == "volterra") {
        if (!j.contains("symbols") || !j["symbols"].is_array() || j["symbols"].empty())
            throw input_error("volterra spec needs a nonempty \"symbols\" array");
        std::vector<AnalyticFunction> symbols;
        for (const auto& s : j["symbols"]) symbols.push_back(function_from_json(s));
        if (j.contains("n") && j["n"].get<int>() != static_cast<int>(symbols.size()))
            throw input_error("volterra spec: \"n\" disagrees with the symbol count");
        return VolterraSpec::general(std::move(symbols));
    }
    if (type == "chalmoukis") {
        if (!j.contains("g") || !j.contains("a") || !j["a"].is_array() || j["a"].empty())
            throw input_error("chalmoukis spec needs \"g\" and a nonempty \"a\" array");
        std::vector<Complex> a;
        for (const auto& c : j["a"]) a.push_back(complex_from_json(c));
        return VolterraSpec::chalmoukis(function_from_json(j["g"]), std::move(a));
    }
    throw input_error("expected a volterra/chalmoukis operator spec, got \"" + type + "\"");
}

/// Self-map validity is certified on the boundary-graded default grid.
inline CompositionSumSpec compsum_from_json(const json& j) {
    if (!j.contains("type") || j["type"].get<std::string>() != "compsum")
        throw input_error("expected a compsum operator spec");
    if (!j.contains("symbols") || !j["symbols"].is_array() || j["symbols"].empty())
        throw input_error("compsum spec needs a nonempty \"symbols\" array");
    if (!j.contains("phi")) throw input_error("compsum spec needs \"phi\"");
    std::vector<AnalyticFunction> u;
    for (const auto& s : j["symbols"]) u.push_back(function_from_json(s));
    if (j.contains("n") && j["n"].get<int>() + 1 != static_cast<int>(u.size()))
        throw input_error("compsum spec: \"n\" disagrees with the symbol count");
    const AnalyticFunction phi = function_from_json(j["phi"]);
    BoundaryGrid grid;
    std::vector<Complex> nodes;
    for (int idx = 0; idx < grid.ring_count(); ++idx) {
        const double rho = grid.ring_radius(idx);
        const int na = std::min(grid.ring_angles(idx), 256);
        for (int k = 0; k < na; ++k) {
            const double th = 2.0 * std::numbers::pi * k / na;
            nodes.emplace_back(rho * std::cos(th), rho * std::sin(th));
        }
    }
    return CompositionSumSpec(std::move(u), SelfMap::checked(phi, nodes));
}

inline OdeProblem ode_from_json(const json& j) {
    OdeProblem prob;
    if (!j.contains("symbols") || !j["symbols"].is_array() || j["symbols"].empty())
        throw input_error("ode problem needs a nonempty \"symbols\" array (g_0..g_{n-1})");
    for (const auto& s : j["symbols"]) prob.coefficients.push_back(function_from_json(s));
    prob.forcing = j.contains("forcing") ? function_from_json(j["forcing"])
                                         : AnalyticFunction::zero();
    if (!j.contains("initial") || !j["initial"].is_array())
        throw input_error("ode problem needs an \"initial\" array");
    for (const auto& c : j["initial"]) prob.initial.push_back(complex_from_json(c));
    if (prob.initial.size() != prob.coefficients.size())
        throw input_error("ode problem needs exactly n initial values");
    if (j.contains("n") && j["n"].get<int>() != prob.order())
        throw input_error("ode problem: \"n\" disagrees with the symbol count");
    return prob;
}

// ---------------------------------------------------------------------------
// CSV: measures, lattices, coefficient tables

inline DiscreteMeasure measure_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    std::string line;
    std::vector<MeasureAtom> atoms;
    bool header_seen = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) { // z_re,z_im,weight
            header_seen = true;
            if (line.find("z_re") != std::string::npos) continue;
        }
        std::istringstream ss(line);
        double re = 0.0, im = 0.0, w = 0.0;
        char c1 = 0, c2 = 0;
        if (!(ss >> re >> c1 >> im >> c2 >> w) || c1 != ',' || c2 != ',')
            throw input_error(path + ":" + std::to_string(lineno) +
                              ": expected \"z_re,z_im,weight\"");
        try {
            atoms.push_back({Complex{re, im}, w});
            if (w < 0.0 || std::abs(atoms.back().z) >= 1.0)
                throw input_error(path + ":" + std::to_string(lineno) +
                                  ": atom outside the disk or negative weight");
        } catch (const domain_error&) {
            throw input_error(path + ":" + std::to_string(lineno) + ": atom outside the disk");
        }
    }
    if (atoms.empty()) throw input_error(path + ": no atoms");
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

inline void write_measure_csv(const std::string& path, const DiscreteMeasure& mu) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path);
    out << "z_re,z_im,weight\n";
    out.precision(17);
    for (const auto& a : mu.atoms())
        out << a.z.real() << ',' << a.z.imag() << ',' << a.weight << '\n';
}

inline void write_lattice_csv(const std::string& path, const BergmanLattice& lat) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path);
    out.precision(17);
    out << "# r=" << lat.r << " multiplicity_bound=" << lat.multiplicity_bound
        << " min_separation=" << lat.min_separation << " max_covering=" << lat.max_covering
        << "\n";
    out << "a_re,a_im\n";
    for (const Complex& a : lat.points) out << a.real() << ',' << a.imag() << '\n';
}

inline void write_coefficients_csv(const std::string& path, const AnalyticFunction& f,
                                   std::size_t degree) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path);
    out << "k,re,im\n";
    out.precision(17);
    for (std::size_t k = 0; k <= degree; ++k) {
        const Complex c = f.taylor_coefficient(k);
        out << k << ',' << c.real() << ',' << c.imag() << '\n';
    }
}

// ---------------------------------------------------------------------------
// reports

inline json thresholds_json(const ProfileThresholds& th) {
    return {{"little_frac", th.little_frac},
            {"slope_tol", th.slope_tol},
            {"slope_window", th.slope_window}};
}

inline json bloch_json(const BlochReport& rep) {
    return {{"norm", rep.norm},
            {"profile", rep.profile},
            {"verdict", to_string(rep.verdict)},
            {"deriv_order", rep.deriv_order},
            {"alpha", rep.alpha},
            {"thresholds", thresholds_json(rep.thresholds)}};
}

inline json carleson_json(const CarlesonReport& rep) {
    json j{{"statistic", rep.statistic},
           {"verdict", to_string(rep.verdict)},
           {"k", rep.k},
           {"p", rep.p},
           {"q", rep.q},
           {"r", rep.r},
           {"regime", rep.regime},
           {"thresholds", thresholds_json(rep.thresholds)}};
    if (rep.regime == "geometric") {
        j["band_sup"] = rep.band_sup;
        j["band_mass_ratio"] = rep.band_mass_ratio;
        j["growth_factor"] = rep.growth_factor;
    } else {
        j["value_lo"] = rep.value_lo;
        j["value_hi"] = rep.value_hi;
    }
    return j;
}

inline json sobolev_json(const SobolevReport& rep) {
    json comps = json::array();
    for (const auto& c : rep.components) comps.push_back(carleson_json(c));
    return {{"combined", rep.combined},
            {"band_sup", rep.band_sup},
            {"combined_verdict", to_string(rep.combined_verdict)},
            {"components", std::move(comps)},
            {"component_aggregate", to_string(rep.component_aggregate)},
            {"agree", rep.agree},
            {"ratio", rep.ratio},
            {"p", rep.p},
            {"q", rep.q},
            {"gamma", rep.gamma},
            {"family",
             {{"seed", rep.family.seed},
              {"poly_count", rep.family.poly_count},
              {"poly_degree", rep.family.poly_degree},
              {"per_band_cap", rep.family.per_band_cap},
              {"stability_tol", rep.family.stability_tol}}},
            {"thresholds", thresholds_json(rep.thresholds)}};
}

inline json growth_criterion_json(const GrowthCriterionReport& rep) {
    json symbols = json::array();
    for (const auto& s : rep.symbols) {
        json item{{"k", s.k}, {"alpha", s.alpha}, {"verdict", to_string(s.verdict)}};
        if (!s.bloch.profile.empty()) item["bloch"] = bloch_json(s.bloch);
        symbols.push_back(std::move(item));
    }
    return {{"criterion", "growth"},
            {"p", rep.p},
            {"q", rep.q},
            {"symbols", std::move(symbols)},
            {"bounded", rep.bounded},
            {"compact", rep.compact}};
}

inline json integral_criterion_json(const IntegralCriterionReport& rep) {
    json symbols = json::array();
    for (const auto& s : rep.symbols)
        symbols.push_back({{"k", s.k},
                           {"value_lo", s.value_lo},
                           {"value_hi", s.value_hi},
                           {"stable", s.stable}});
    json j{{"criterion", "integral"},
           {"p", rep.p},
           {"q", rep.q},
           {"exponent", rep.exponent},
           {"symbols", std::move(symbols)},
           {"bounded", rep.bounded},
           {"compact", rep.bounded}};
    if (rep.has_single_check)
        j["single_symbol_membership"] = {{"value_lo", rep.single_lo},
                                         {"value_hi", rep.single_hi},
                                         {"stable", rep.single_stable}};
    return j;
}

inline json empirical_json(const EmpiricalNormReport& rep) {
    json witnesses = json::array();
    for (const auto& w : rep.witnesses)
        witnesses.push_back(
            {{"w", complex_to_json(w.w)}, {"i", w.i}, {"ratio", w.ratio}});
    return {{"estimate", rep.estimate},
            {"octave_profile", rep.octave_profile},
            {"witnesses", std::move(witnesses)},
            {"poly_ratios", rep.poly_ratios},
            {"growing", rep.growing},
            {"numerator_norm", rep.numerator_norm},
            {"p", rep.p},
            {"q", rep.q},
            {"gamma", rep.gamma}};
}

inline json hs_json(const HSReport& rep) {
    return {{"basis_size", rep.basis_size},
            {"basis_terms", rep.basis_terms},
            {"basis_sum", rep.basis_sum},
            {"tail_ratio", rep.tail_ratio},
            {"integrals", rep.integrals},
            {"integrals_lo", rep.integrals_lo},
            {"integrals_hi", rep.integrals_hi},
            {"integrals_stable", rep.integrals_stable},
            {"hilbert_schmidt", rep.hilbert_schmidt},
            {"adjoint_residual", rep.adjoint_residual}};
}

inline json rigidity_json(const RigidityReport& rep) {
    json comps = json::array();
    for (const auto& c : rep.components) comps.push_back(carleson_json(c));
    return {{"components", std::move(comps)},
            {"component_aggregate", to_string(rep.component_aggregate)},
            {"empirical", empirical_json(rep.empirical)},
            {"agree", rep.agree},
            {"p", rep.p},
            {"q", rep.q}};
}

inline json neumann_json(const NeumannCertificate& cert) {
    return {{"converged", cert.converged},
            {"iterations", cert.iterations},
            {"distances", cert.distances},
            {"ratios", cert.ratios},
            {"bloch_norms", cert.bloch_norms},
            {"residual_sup", cert.residual_sup},
            {"tol", cert.tol},
            {"message", cert.message}};
}

inline void write_report(const std::string& path, json j) {
    j["schema_version"] = kSchemaVersion;
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

inline std::string report_string(json j) {
    j["schema_version"] = kSchemaVersion;
    return j.dump(2) + "\n";
}

} // namespace bergman::io
