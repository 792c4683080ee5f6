#include "doctest.h"

#include <cmath>
#include <sstream>

#include "cspin/core_map.hpp"
#include "cspin/longtime.hpp"
#include "cspin/sweep.hpp"
#include "cspin/table.hpp"
#include "json.hpp"

using namespace cspin;

TEST_CASE("every preset validates") {
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        CHECK_NOTHROW(preset(name).validate());
    }
    CHECK_THROWS_AS(preset("missing"), std::invalid_argument);
}

TEST_CASE("coherence sweep over temperature") {
    SweepSpec s;
    s.base.epsilon = 0.2;
    s.base.n_bath = 5;
    s.axis = SweepAxis::temperature;
    s.values = {0.5, 5.0};
    s.observable = Observable::coherence;
    s.time_grid = {0.0, 4.0, 8};
    s.workers = 2;
    const auto res = run_sweep(s);
    REQUIRE(res.rows.size() == 18);
    for (const auto& row : res.rows) {
        ModelParams p = s.base;
        p.temperature = Temperature(row.axis_value);
        CHECK(row.values[0] == doctest::Approx(std::abs(map_coefficients(p, row.time).delta)));
    }
    CHECK(res.metadata.count("code_version"));
}

TEST_CASE("sweeps do not depend on the worker count") {
    auto s = preset("trapping_vs_temperature");
    s.workers = 1;
    const auto a = run_sweep(s);
    s.workers = 4;
    const auto b = run_sweep(s);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].values == b.rows[i].values);
        CHECK(std::isinf(a.rows[i].time));
        CHECK(a.rows[i].flags.find("long_time") != std::string::npos);
    }
}

TEST_CASE("population ratio of the averaged state") {
    const auto s = preset("population_ratio_vs_rho11");
    const auto res = run_sweep(s);
    REQUIRE(res.rows.size() == s.values.size());
    const auto avg = averaged_populations(s.base);
    for (const auto& row : res.rows) {
        const auto st = time_averaged_state(avg, QubitState(row.axis_value, 0.0));
        if (st.rho22() > 0) CHECK(row.values[0] == doctest::Approx(st.rho11() / st.rho22()));
    }
}

TEST_CASE("invalid sweeps") {
    SweepSpec s;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.values = {1.0};
    s.axis = SweepAxis::rho11_0;
    s.observable = Observable::entanglement;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    CHECK_THROWS(sweep_axis_from_string("pressure"));
    CHECK(observable_from_string(to_string(Observable::sigma)) == Observable::sigma);
}

TEST_CASE("CSV and JSON emission") {
    Table t;
    t.columns = {"time", "value"};
    t.metadata["seed"] = "1";
    t.rows.push_back({{0.1, 1.0 / 3.0}, ""});
    t.rows.push_back({{INFINITY, NAN}, "pole|undefined"});
    std::ostringstream csv;
    write_csv(csv, t);
    CHECK(csv.str() == "time,value,flags\n0.10000000000000001,0.33333333333333331,\ninf,nan,pole|undefined\n");

    std::ostringstream js;
    write_json(js, t);
    const auto j = nlohmann::json::parse(js.str());
    CHECK(j["columns"].size() == 3);
    CHECK(j["rows"].size() == 2);
    CHECK(j["rows"][0][1].get<double>() == 1.0 / 3.0);
    CHECK(j["rows"][1][0].get<std::string>() == "inf");
    CHECK(j["metadata"]["seed"] == "1");
    CHECK(std::stod(format_double(0.1)) == 0.1);
}
