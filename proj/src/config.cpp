#include "cspin/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace cspin {

double kelvin_to_natural(double kelvin) {
    return constants::k_boltzmann * kelvin / (constants::hbar * constants::per_microsecond);
}

OutputFormat output_format_from_string(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw ConfigError("format must be csv or json, got '" + s + "'");
}

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>> kKnown = {
    {"model", {"units", "omega0", "omega", "epsilon", "n_bath", "temperature", "delta_form"}},
    {"run", {"t_start", "t_end", "steps", "rho11", "rho12_re", "rho12_im", "tol", "format", "out", "workers",
             "seed", "validate_points"}},
    {"sweep", {"preset", "axis", "values", "observable"}},
    {"resonance", {"eps_min", "eps_max", "count", "threshold"}},
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    std::optional<std::string> str(const std::string& section, const std::string& key) const {
        const auto sec = tree_.get_child_optional(section);
        if (!sec) return std::nullopt;
        const auto v = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!v) return std::nullopt;
        return trim(*v);
    }

    std::optional<double> num(const std::string& section, const std::string& key) const {
        const auto s = str(section, key);
        if (!s) return std::nullopt;
        return to_double(*s, section + "." + key);
    }

    std::optional<long> integer(const std::string& section, const std::string& key) const {
        const auto s = str(section, key);
        if (!s) return std::nullopt;
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(*s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s->size()) throw ConfigError(section + "." + key + ": expected an integer, got '" + *s + "'");
        return v;
    }

    static double to_double(const std::string& s, const std::string& where) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw ConfigError(where + ": expected a number, got '" + s + "'");
        return v;
    }

private:
    const pt::ptree& tree_;
};

void check_keys(const pt::ptree& tree) {
    for (const auto& [section, body] : tree) {
        const auto known = kKnown.find(section);
        if (known == kKnown.end()) {
            if (body.empty()) throw ConfigError("key '" + section + "' outside of any section");
            throw ConfigError("unknown section [" + section + "]");
        }
        for (const auto& [key, value] : body) {
            if (!known->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
            if (!value.empty()) throw ConfigError("nested key under '" + key + "'");
        }
    }
}

Temperature read_temperature(const std::string& s, Units units) {
    if (s == "inf" || s == "infinite" || s == "infinity") return Temperature::infinite();
    const double v = Reader::to_double(s, "model.temperature");
    if (!(v > 0.0)) throw ConfigError("model.temperature must be positive or inf");
    return Temperature(units == Units::physical ? kelvin_to_natural(v) : v);
}

std::vector<double> read_list(const std::string& s, const std::string& where) {
    std::vector<double> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(where + ": empty list entry");
        out.push_back(Reader::to_double(item, where));
    }
    return out;
}

void read_model(const Reader& r, RunConfig& cfg, ModelParams& m) {
    if (auto v = r.num("model", "omega0")) m.omega0 = *v;
    if (auto v = r.num("model", "omega")) m.omega = *v;
    if (auto v = r.num("model", "epsilon")) m.epsilon = *v;
    if (auto v = r.integer("model", "n_bath")) {
        if (*v < 1 || *v > 100'000'000) throw ConfigError("model.n_bath must be in [1, 1e8]");
        m.n_bath = static_cast<int>(*v);
    }
    if (auto v = r.str("model", "temperature")) m.temperature = read_temperature(*v, cfg.units);
    if (auto v = r.str("model", "delta_form")) {
        try {
            m.delta_form = delta_form_from_string(*v);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("model.delta_form: ") + e.what());
        }
    }
}

} // namespace

RunConfig parse_config(const std::string& text) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config syntax: ") + e.what());
    }
    check_keys(tree);
    const Reader r(tree);
    RunConfig cfg;

    if (auto u = r.str("model", "units")) {
        if (*u == "natural") cfg.units = Units::natural;
        else if (*u == "physical") cfg.units = Units::physical;
        else throw ConfigError("model.units must be natural or physical");
    }

    if (auto v = r.num("run", "t_start")) cfg.grid.start = *v;
    if (auto v = r.num("run", "t_end")) cfg.grid.end = *v;
    if (auto v = r.integer("run", "steps")) cfg.grid.steps = static_cast<int>(*v);
    if (!(cfg.grid.start >= 0.0) || !(cfg.grid.end > cfg.grid.start) || cfg.grid.steps < 1 ||
        cfg.grid.steps > 100'000'000)
        throw ConfigError("run: need 0 <= t_start < t_end and steps >= 1");

    double rho11 = cfg.rho0.rho11();
    cplx rho12 = cfg.rho0.rho12();
    if (auto v = r.num("run", "rho11")) rho11 = *v;
    if (auto v = r.num("run", "rho12_re")) rho12.real(*v);
    if (auto v = r.num("run", "rho12_im")) rho12.imag(*v);
    cfg.rho0 = QubitState(rho11, rho12);
    if (!cfg.rho0.is_valid()) throw ConfigError("run: initial state is not a density matrix");

    if (auto v = r.num("run", "tol")) {
        if (!(*v > 0.0)) throw ConfigError("run.tol must be positive");
        cfg.tol = *v;
    }
    if (auto v = r.str("run", "format")) cfg.format = output_format_from_string(*v);
    if (auto v = r.str("run", "out")) cfg.out_path = *v;
    if (auto v = r.integer("run", "workers")) {
        if (*v < 0) throw ConfigError("run.workers must be >= 0");
        cfg.workers = static_cast<int>(*v);
    }
    if (auto v = r.integer("run", "seed")) cfg.seed = static_cast<unsigned long>(*v);
    if (auto v = r.integer("run", "validate_points")) {
        if (*v < 1) throw ConfigError("run.validate_points must be >= 1");
        cfg.validate_points = static_cast<int>(*v);
    }

    read_model(r, cfg, cfg.model);
    try {
        cfg.model.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }

    if (tree.get_child_optional("sweep")) {
        SweepSpec s;
        const auto preset_name = r.str("sweep", "preset");
        if (preset_name) {
            try {
                s = preset(*preset_name);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("sweep.preset: ") + e.what());
            }
            read_model(r, cfg, s.base);
        } else {
            s.base = cfg.model;
        }
        if (!preset_name || r.str("run", "t_end") || r.str("run", "steps") || r.str("run", "t_start"))
            s.time_grid = cfg.grid;
        if (!preset_name || r.str("run", "rho11") || r.str("run", "rho12_re") || r.str("run", "rho12_im"))
            s.initial_state = cfg.rho0;
        try {
            if (auto v = r.str("sweep", "axis")) s.axis = sweep_axis_from_string(*v);
            if (auto v = r.str("sweep", "observable")) s.observable = observable_from_string(*v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("sweep: ") + e.what());
        }
        if (auto v = r.str("sweep", "values")) s.values = read_list(*v, "sweep.values");
        if (cfg.units == Units::physical && s.axis == SweepAxis::temperature && !(preset_name && !r.str("sweep", "values")))
            for (double& t : s.values) t = std::isinf(t) ? t : kelvin_to_natural(t);
        s.workers = cfg.workers;
        try {
            s.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("sweep: ") + e.what());
        }
        cfg.sweep = std::move(s);
    }

    if (auto v = r.num("resonance", "eps_min")) cfg.resonance.eps_min = *v;
    if (auto v = r.num("resonance", "eps_max")) cfg.resonance.eps_max = *v;
    if (auto v = r.integer("resonance", "count")) cfg.resonance.count = static_cast<int>(*v);
    if (auto v = r.num("resonance", "threshold")) cfg.resonance.threshold = *v;
    if (!(cfg.resonance.eps_min > 0.0) || !(cfg.resonance.eps_max > cfg.resonance.eps_min) || cfg.resonance.count < 2)
        throw ConfigError("resonance: need 0 < eps_min < eps_max and count >= 2");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void apply_environment(RunConfig& cfg) {
    if (const char* out = std::getenv("CSPIN_OUT"); out && *out) cfg.out_path = out;
    if (const char* w = std::getenv("CSPIN_WORKERS"); w && *w) {
        char* end = nullptr;
        const long v = std::strtol(w, &end, 10);
        if (*end != '\0' || v < 0) throw ConfigError("CSPIN_WORKERS must be a non-negative integer");
        cfg.workers = static_cast<int>(v);
        if (cfg.sweep) cfg.sweep->workers = cfg.workers;
    }
}

} // namespace cspin
