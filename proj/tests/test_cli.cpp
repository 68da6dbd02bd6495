#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "cascade/cli.hpp"
#include "cascade/csv.hpp"

using namespace cascade;
namespace fs = std::filesystem;

namespace {

int call_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "cascade");
    std::vector<char*> argv;
    for (std::string& a : args)
        argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path write_temp(const std::string& name, const std::string& text)
{
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p, std::ios::trunc);
    out << text;
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// data lines only: no '#' comments, no header
std::vector<std::string> data_rows(const fs::path& p)
{
    std::ifstream in(p);
    std::vector<std::string> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#')
            continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        rows.push_back(line);
    }
    return rows;
}

std::string header_row(const fs::path& p)
{
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line.front() != '#')
            return line;
    return "";
}

} // namespace

TEST_CASE("config file parsing")
{
    const fs::path p = write_temp("cli_cfg_ok.txt", R"([system]
chi2 = 0.25       # coupling of the second emitter
gamma_xi = 2.0

[pulse]
area = 3.14159
fwhm = 0.4

[grid]
tol = 1e-9

[scan]
lengths = 0.2 0.4
outputs = intensity g2zero

[spectrum]
n_omega = 301
)");
    const RunConfig cfg = parse_config_file(p.string());
    CHECK(cfg.system.chi2 == 0.25);
    CHECK(cfg.system.gamma_xi == 2.0);
    CHECK(cfg.pulse.area == 3.14159);
    CHECK(cfg.pulse.fwhm == 0.4);
    CHECK(cfg.pulse_fwhm_set);
    CHECK(cfg.grid.tol == 1e-9);
    CHECK(cfg.lengths == std::vector<double>{0.2, 0.4});
    CHECK(cfg.sweep_outputs == std::vector<std::string>{"intensity", "g2zero"});
    CHECK(cfg.n_omega == 301);
    // untouched keys keep their defaults
    CHECK(cfg.system.chi1 == 1.0);
    CHECK(cfg.out_dir == "out");
}

TEST_CASE("config rejection")
{
    CHECK_THROWS(parse_config_file("/nonexistent/config.txt"));

    const fs::path unknown_key = write_temp("cli_cfg_bad1.txt", "[system]\nfoo = 1\n");
    CHECK_THROWS_WITH_AS(parse_config_file(unknown_key.string()),
                         doctest::Contains("unknown config key"),
                         std::invalid_argument);

    const fs::path unknown_section =
        write_temp("cli_cfg_bad2.txt", "[bogus]\nchi2 = 0.5\n");
    CHECK_THROWS_WITH_AS(parse_config_file(unknown_section.string()),
                         doctest::Contains("unknown config section"),
                         std::invalid_argument);

    const fs::path orphan = write_temp("cli_cfg_bad3.txt", "chi2 = 0.5\n");
    CHECK_THROWS(parse_config_file(orphan.string()));

    const fs::path bad_number = write_temp("cli_cfg_bad4.txt", "[system]\nchi2 = abc\n");
    CHECK_THROWS(parse_config_file(bad_number.string()));

    const fs::path out_of_range = write_temp("cli_cfg_bad5.txt", "[system]\nchi2 = 1.5\n");
    CHECK_THROWS(parse_config_file(out_of_range.string()));
}

TEST_CASE("area grid from the scan range")
{
    RunConfig cfg;
    const std::vector<double> areas = area_grid(cfg);
    REQUIRE(areas.size() == 31); // pi/4 .. 4 pi in steps of pi/8
    CHECK(areas.front() == doctest::Approx(M_PI / 4.0).epsilon(1e-14));
    CHECK(areas.back() == doctest::Approx(4.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("emitter names")
{
    CHECK(parse_emitter("source") == Emitter::source);
    CHECK(parse_emitter("target") == Emitter::target);
    CHECK(parse_emitter("flux") == Emitter::flux);
    CHECK_THROWS(parse_emitter("laser"));
}

TEST_CASE("csv numbers survive a text round trip")
{
    for (double v : {1.0 / 3.0, M_PI, 1e-17, -2.5e300})
        CHECK(std::stod(csv_num(v)) == v);
    CHECK(csv_num(std::numeric_limits<double>::quiet_NaN()).empty());
}

TEST_CASE("occupation command end to end")
{
    const fs::path dir = fs::temp_directory_path() / "cli_occ_test";
    fs::remove_all(dir);
    const fs::path cfg = write_temp("cli_occ_cfg.txt", "[pulse]\narea = 3.141592653589793\nfwhm = 0.5\n");

    REQUIRE(call_cli({"occupation", "--config", cfg.string(), "--out", dir.string()}) == 0);

    const fs::path csv = dir / "occupation.csv";
    REQUIRE(fs::exists(csv));
    REQUIRE(fs::exists(dir / "README.txt"));

    CHECK(header_row(csv) == "t,n_source,n_target,n_flux");
    const auto rows = data_rows(csv);
    CHECK(rows.size() > 100);
    for (const std::string& r : {rows.front(), rows.back()})
        CHECK(std::count(r.begin(), r.end(), ',') == 3);

    // resolved configuration is echoed into the header comments
    const std::string text = slurp(csv);
    CHECK(text.find("# engine = ") != std::string::npos);
    CHECK(text.find("# pulse.fwhm = 0.5") != std::string::npos);

    // rerunning overwrites deterministically
    REQUIRE(call_cli({"occupation", "--config", cfg.string(), "--out", dir.string()}) == 0);
    CHECK(slurp(csv) == text);
    fs::remove_all(dir);
}

TEST_CASE("g2 command respects the scan range and the emitter filter")
{
    const fs::path dir = fs::temp_directory_path() / "cli_g2_test";
    fs::remove_all(dir);
    const fs::path cfg = write_temp("cli_g2_cfg.txt", R"([scan]
area_min = 1.5707963267948966
area_max = 3.2
area_step = 1.5707963267948966
)");
    REQUIRE(call_cli({"g2", "--config", cfg.string(), "--out", dir.string(),
                      "--emitter", "source"}) == 0);

    const fs::path csv = dir / "g2.csv";
    REQUIRE(fs::exists(csv));
    CHECK(header_row(csv) == "area,emitter,g2_zero");
    const auto rows = data_rows(csv);
    REQUIRE(rows.size() == 2); // two areas, one emitter
    for (const std::string& r : rows)
        CHECK(r.find(",source,") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("failures exit nonzero")
{
    CHECK(call_cli({"occupation", "--config", "/nonexistent.txt"}) == 1);
    CHECK(call_cli({"occupation", "--emitter", "laser"}) == 1);
    CHECK(call_cli({"nonsense"}) != 0);
    CHECK(call_cli({}) != 0);
}
