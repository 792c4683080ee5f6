#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cspin/commands.hpp"
#include "json.hpp"

using namespace cspin;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "cspin");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "cspin_unit";
    fs::create_directories(dir);
    const auto p = dir / name;
    fs::remove(p);
    return p;
}

fs::path write_config(const std::string& name, const std::string& text) {
    const auto p = scratch(name);
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("evolve writes one CSV row per grid time") {
    const auto cfg = write_config("evolve.ini", "[model]\nepsilon = 0.3\nn_bath = 4\n[run]\nt_end = 5\nsteps = 10\n");
    const auto r = cli({"evolve", "--config", cfg.string()});
    CHECK(r.code == kExitOk);
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("time,rho11,rho12_re,rho12_im,coherence", 0) == 0);
    CHECK(header.substr(header.size() - 6) == ",flags");
    int lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    CHECK(lines == 11);
}

TEST_CASE("malformed config exits 2 and leaves no output") {
    const auto cfg = write_config("bad.ini", "[model]\nepsilon = oops\n");
    const auto out = scratch("bad.csv");
    const auto r = cli({"evolve", "--config", cfg.string(), "--out", out.string()});
    CHECK(r.code == kExitConfig);
    CHECK_FALSE(fs::exists(out));
    CHECK(r.err.find("epsilon") != std::string::npos);

    CHECK(cli({"evolve", "--config", "/nonexistent.ini"}).code == kExitConfig);
    CHECK(cli({"evolve", "--format", "xml"}).code == kExitConfig);
    CHECK(cli({"frobnicate"}).code == kExitConfig);
    CHECK(cli({}).code == kExitConfig);
    CHECK(cli({"sweep", "--preset", "missing"}).code == kExitConfig);
}

TEST_CASE("help exits 0") {
    const auto r = cli({"--help"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("evolve") != std::string::npos);
}

TEST_CASE("JSON output parses and carries metadata") {
    const auto out = scratch("rates.json");
    const auto cfg = write_config("rates.ini", "[model]\nepsilon = 1\nn_bath = 2\ntemperature = 1\n[run]\nt_end = 3\nsteps = 30\n");
    const auto r = cli({"rates", "--config", cfg.string(), "--format", "json", "--out", out.string()});
    CHECK(r.code == kExitOk);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["metadata"]["command"] == "rates");
    CHECK(j["metadata"]["n_bath"] == "2");
    CHECK(j["rows"].size() == 31);
    CHECK(j["columns"].back() == "flags");
}

TEST_CASE("sweep output is identical for any worker count") {
    const auto a = cli({"sweep", "--preset", "coherence_vs_temperature", "--workers", "1"});
    const auto b = cli({"sweep", "--preset", "coherence_vs_temperature", "--workers", "4"});
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK(a.out.size() > 1000);
}

TEST_CASE("environment sets the output path, flags override it") {
    const auto env_out = scratch("env.csv");
    const auto flag_out = scratch("flag.csv");
    setenv("CSPIN_OUT", env_out.string().c_str(), 1);
    CHECK(cli({"average"}).code == kExitOk);
    CHECK(fs::exists(env_out));
    CHECK(cli({"average", "--out", flag_out.string()}).code == kExitOk);
    CHECK(fs::exists(flag_out));
    unsetenv("CSPIN_OUT");
}

TEST_CASE("validate passes on a small oracle grid") {
    const auto cfg = write_config("validate.ini", "[run]\nvalidate_points = 12\nseed = 3\n");
    const auto r = cli({"validate", "--config", cfg.string()});
    CHECK(r.code == kExitOk);
    CHECK(r.err.find("PASS") != std::string::npos);
}

TEST_CASE("resonance, thermo and trapping run") {
    const auto res = write_config("res.ini", "[model]\nn_bath = 100\n[resonance]\neps_min = 0.2\neps_max = 0.3\ncount = 50\n");
    const auto r = cli({"resonance", "--config", res.string()});
    CHECK(r.code == kExitOk);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') > 2);

    const auto th = write_config("thermo.ini", "[model]\nepsilon = 1\nn_bath = 2\ntemperature = 1\n[run]\nt_end = 10\nsteps = 200\nrho11 = 0.8\nrho12_re = 0.2\n");
    const auto t = cli({"thermo", "--config", th.string()});
    CHECK(t.code == kExitOk);
    CHECK(t.out.find("pathology") != std::string::npos);

    CHECK(cli({"trapping"}).code == kExitOk);
}
