#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "bergman/io.hpp"

using namespace bergman;
using bergman::io::json;
using Catch::Approx;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / "bergman_io_test";
        std::filesystem::create_directories(path);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("function specs round-trip through JSON") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Complex> c(1 + static_cast<std::size_t>(trial));
        for (Complex& x : c) x = Complex{g(rng), g(rng)};
        const auto f = AnalyticFunction::taylor(c);
        const auto back = io::function_from_json(io::function_to_json(f));
        REQUIRE(back.is_taylor());
        for (std::size_t k = 0; k < c.size(); ++k)
            REQUIRE(back.coefficients()[k] == c[k]); // bit-exact round trip
    }
    const auto k = AnalyticFunction::power_kernel({0.3, -0.4}, 2, 3.5, {2.0, 1.0});
    const auto back = io::function_from_json(io::function_to_json(k));
    REQUIRE(back.is_power_kernel());
    REQUIRE(back.kernel_form().w == k.kernel_form().w);
    REQUIRE(back.kernel_form().zpow == 2);
    REQUIRE(back.kernel_form().exponent == 3.5);
    REQUIRE(back.kernel_form().scale == Complex{2.0, 1.0});
}

TEST_CASE("malformed function specs raise input errors") {
    REQUIRE_THROWS_AS(io::function_from_json(json::parse("{}")), input_error);
    REQUIRE_THROWS_AS(io::function_from_json(json::parse(R"({"kind":"wavelet"})")),
                      input_error);
    REQUIRE_THROWS_AS(io::function_from_json(json::parse(R"({"kind":"taylor"})")),
                      input_error);
    REQUIRE_THROWS_AS(
        io::function_from_json(json::parse(R"({"kind":"kernel","w":[2.0,0],"i":0,"s":1.0})")),
        input_error);
    REQUIRE_THROWS_AS(
        io::function_from_json(json::parse(R"({"kind":"kernel","w":[0.5,0],"i":-1,"s":1.0})")),
        input_error);
}

TEST_CASE("operator specs parse and validate") {
    const auto vol = io::volterra_from_json(json::parse(
        R"({"type":"volterra","n":2,"symbols":[
            {"kind":"taylor","coeffs":[[1,0]]},
            {"kind":"taylor","coeffs":[[0,0],[1,0]]}]})"));
    REQUIRE(vol.order() == 2);

    REQUIRE_THROWS_AS(io::volterra_from_json(json::parse(
                          R"({"type":"volterra","n":3,"symbols":[
                              {"kind":"taylor","coeffs":[[1,0]]}]})")),
                      input_error);

    const auto chal = io::volterra_from_json(json::parse(
        R"({"type":"chalmoukis","g":{"kind":"taylor","coeffs":[[0,0],[0,0],[0,0],[1,0]]},
            "a":[[1,0],[0.5,0]]})"));
    REQUIRE(chal.order() == 2);
    REQUIRE(chal.is_chalmoukis());

    const auto comp = io::compsum_from_json(json::parse(
        R"({"type":"compsum","n":1,"symbols":[
            {"kind":"taylor","coeffs":[[1,0]]},
            {"kind":"taylor","coeffs":[[0,0]]}],
            "phi":{"kind":"taylor","coeffs":[[0,0],[0.5,0]]}})"));
    REQUIRE(comp.order() == 1);

    // phi failing the self-map certificate surfaces as a domain error
    REQUIRE_THROWS_AS(io::compsum_from_json(json::parse(
                          R"({"type":"compsum","symbols":[
                              {"kind":"taylor","coeffs":[[1,0]]}],
                              "phi":{"kind":"taylor","coeffs":[[0,0],[1.2,0]]}})")),
                      domain_error);
}

TEST_CASE("ode problems parse and validate") {
    const auto prob = io::ode_from_json(json::parse(
        R"({"n":1,"symbols":[{"kind":"taylor","coeffs":[[0.1,0]]}],
            "initial":[[1,0]]})"));
    REQUIRE(prob.order() == 1);
    REQUIRE(prob.forcing.is_identically_zero());

    REQUIRE_THROWS_AS(io::ode_from_json(json::parse(
                          R"({"symbols":[{"kind":"taylor","coeffs":[[0.1,0]]}],
                              "initial":[[1,0],[0,0]]})")),
                      input_error);
}

TEST_CASE("measure CSV round trip and validation") {
    TempDir tmp;
    const auto path = tmp.file("mu.csv");
    const auto mu = radial_power_measure(0.5, graded_disk_rule(4, 2, 2.0));
    io::write_measure_csv(path, mu);
    const auto back = io::measure_from_csv(path);
    REQUIRE(back.size() == mu.size());
    REQUIRE(back.total_mass() == Approx(mu.total_mass()).epsilon(1e-14));
    REQUIRE(back.measure_of_disk({0.3, 0.1}, 1.0) ==
            Approx(mu.measure_of_disk({0.3, 0.1}, 1.0)).epsilon(1e-12));

    std::ofstream bad(tmp.file("bad.csv"));
    bad << "z_re,z_im,weight\n0.5;0.5;1\n";
    bad.close();
    REQUIRE_THROWS_AS(io::measure_from_csv(tmp.file("bad.csv")), input_error);
    REQUIRE_THROWS_AS(io::measure_from_csv(tmp.file("missing.csv")), input_error);

    std::ofstream outside(tmp.file("outside.csv"));
    outside << "z_re,z_im,weight\n1.5,0,1\n";
    outside.close();
    REQUIRE_THROWS_AS(io::measure_from_csv(tmp.file("outside.csv")), input_error);
}

TEST_CASE("lattice CSV carries the certificate header") {
    TempDir tmp;
    const auto lat = build_lattice(1.0, 0.9);
    const auto path = tmp.file("lattice.csv");
    io::write_lattice_csv(path, lat);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    REQUIRE(header.find("r=1") != std::string::npos);
    REQUIRE(header.find("multiplicity_bound=") != std::string::npos);
    std::string columns;
    std::getline(in, columns);
    REQUIRE(columns == "a_re,a_im");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    REQUIRE(rows == lat.size());
}

TEST_CASE("reports serialize deterministically with the schema version") {
    const auto rep = bloch_norm(AnalyticFunction::taylor({{0.0, 0.0}, {1.0, 0.0}}), 0, 1.0);
    const std::string a = io::report_string(io::bloch_json(rep));
    const std::string b = io::report_string(io::bloch_json(rep));
    REQUIRE(a == b);
    REQUIRE(a.find("\"schema_version\": 1") != std::string::npos);
    REQUIRE(a.find("\"thresholds\"") != std::string::npos);
}
