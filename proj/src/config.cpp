#include "permsym/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "permsym/trajectory.hpp"

namespace permsym {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

class Reader {
public:
    explicit Reader(const Config& c) : c_(c) {}

    const Config::Entry* entry(const std::string& key) const { return c_.find(key); }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        const auto* e = c_.find(key);
        throw ConfigError(c_.source(), e ? e->line : 0, key, what);
    }

    double number(const std::string& key) const {
        const auto& v = entry(key)->value;
        double out = 0.0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
            fail(key, "expected a number, got '" + v + "'");
        }
        return out;
    }

    int integer(const std::string& key) const {
        const auto& v = entry(key)->value;
        long long out = 0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || out < -1'000'000'000 || out > 1'000'000'000) {
            fail(key, "expected an integer, got '" + v + "'");
        }
        return static_cast<int>(out);
    }

    bool boolean(const std::string& key) const {
        const auto v = lower(entry(key)->value);
        if (v == "true" || v == "yes" || v == "on" || v == "1") {
            return true;
        }
        if (v == "false" || v == "no" || v == "off" || v == "0") {
            return false;
        }
        fail(key, "expected true or false, got '" + entry(key)->value + "'");
    }

    void get(const std::string& key, double& dst) const {
        if (entry(key)) {
            dst = number(key);
        }
    }
    void get(const std::string& key, int& dst) const {
        if (entry(key)) {
            dst = integer(key);
        }
    }
    void get(const std::string& key, bool& dst) const {
        if (entry(key)) {
            dst = boolean(key);
        }
    }

private:
    const Config& c_;
};

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& key, const std::string& what)
    : std::runtime_error([&] {
          std::ostringstream msg;
          msg << source;
          if (line > 0) {
              msg << ":" << line;
          }
          if (!key.empty()) {
              msg << ": key '" << key << "'";
          }
          msg << ": " << what;
          return msg.str();
      }()),
      line_(line),
      key_(key) {}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "model",         "name",          "n_emitters",   "omega_0",       "omega_c",
        "omega_e",       "omega_v",       "lambda_v",     "g",             "dipole_coupling",
        "gamma_c",       "gamma_down",    "levels",       "n_vib_ground",  "n_vib_excited",
        "n_vib",         "n_cav",         "n_exc",        "initial_photons", "t_max_fs",
        "n_samples",     "rel_tol",       "abs_tol",      "positivity_samples", "leakage_threshold",
        "oracle",        "strict",        "center_blocks", "observables",  "output_dir"};
    return keys;
}

Config Config::parse(std::istream& in, std::string source) {
    Config c;
    c.source_ = std::move(source);
    const auto& known = config_keys();
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(std::string_view(raw).substr(0, hash));
        if (text.empty()) {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(c.source_, line, {}, "expected 'key = value', got '" + text + "'");
        }
        const std::string key = trim(std::string_view(text).substr(0, eq));
        const std::string value = trim(std::string_view(text).substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(c.source_, line, {}, "missing key before '='");
        }
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(c.source_, line, key, "unknown key");
        }
        if (value.empty()) {
            throw ConfigError(c.source_, line, key, "missing value");
        }
        if (c.entries_.count(key) != 0) {
            throw ConfigError(c.source_, line, key,
                              "duplicate key (first set on line " + std::to_string(c.entries_[key].line) + ")");
        }
        c.entries_[key] = Entry{value, line};
    }
    return c;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string(), 0, {}, "cannot open config file");
    }
    return parse(in, path.string());
}

const Config::Entry* Config::find(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

void Config::set(const std::string& key, std::string value) {
    const auto& known = config_keys();
    if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw ConfigError(source_, 0, key, "unknown key");
    }
    entries_[key] = Entry{std::move(value), 0};
}

RunConfig resolve(const Config& config) {
    Reader r(config);
    const auto* model = config.find("model");
    if (!model) {
        throw ConfigError(config.source(), 0, "model", "required key is missing (tc, htc, three_level or vsc)");
    }
    const auto kind = parse_kind(model->value);
    if (!kind) {
        r.fail("model", "unknown model '" + model->value + "' (expected tc, htc, three_level or vsc)");
    }
    int n = 1;
    r.get("n_emitters", n);
    if (n < 1) {
        r.fail("n_emitters", "must be >= 1");
    }

    RunConfig run;
    ModelSpec& s = run.spec;
    s = default_spec(*kind, n);
    if (const auto* e = config.find("name")) {
        s.name = e->value;
        if (s.name.find_first_of("/\\") != std::string::npos) {
            r.fail("name", "must not contain path separators");
        }
    }
    r.get("omega_0", s.omega_0);
    r.get("omega_c", s.omega_c);
    r.get("omega_e", s.omega_e);
    r.get("omega_v", s.omega_v);
    r.get("lambda_v", s.lambda_v);
    r.get("g", s.g);
    r.get("dipole_coupling", s.dipole_coupling);
    r.get("gamma_c", s.gamma_c);
    r.get("gamma_down", s.gamma_down);
    r.get("levels", s.levels);
    r.get("n_vib_ground", s.n_vib_ground);
    r.get("n_vib_excited", s.n_vib_excited);
    r.get("n_vib", s.n_vib);
    r.get("initial_photons", s.initial_photons);
    r.get("t_max_fs", s.t_max_fs);
    r.get("n_samples", s.n_samples);
    if (const auto* e = config.find("n_exc")) {
        const auto v = lower(e->value);
        if (v == "none" || v == "inf") {
            s.n_exc.reset();
        } else {
            s.n_exc = r.integer("n_exc");
        }
    }
    // derived defaults follow the parameters they depend on unless set explicitly
    if (s.kind == ModelKind::htc && !config.has("omega_c")) {
        s.omega_c = htc_resonant_cavity(s.omega_e, s.lambda_v, s.omega_v);
    }
    if (s.kind == ModelKind::vsc && !config.has("n_cav")) {
        s.n_cav = (s.n_exc ? std::max(*s.n_exc, s.initial_photons) : s.initial_photons) + 1;
    }
    r.get("n_cav", s.n_cav);

    r.get("rel_tol", run.rel_tol);
    r.get("abs_tol", run.abs_tol);
    if (!(run.rel_tol > 0.0)) {
        r.fail("rel_tol", "must be > 0");
    }
    if (!(run.abs_tol > 0.0)) {
        r.fail("abs_tol", "must be > 0");
    }
    if (config.has("positivity_samples")) {
        const int p = r.integer("positivity_samples");
        if (p < 0) {
            r.fail("positivity_samples", "must be >= 0");
        }
        run.positivity_samples = static_cast<std::size_t>(p);
    }
    r.get("leakage_threshold", run.leakage_threshold);
    r.get("oracle", run.oracle);
    r.get("strict", run.strict);
    r.get("center_blocks", run.center_blocks);
    if (const auto* e = config.find("observables"); e && lower(e->value) != "all") {
        std::stringstream list(e->value);
        std::string item;
        while (std::getline(list, item, ',')) {
            item = trim(item);
            if (item.empty()) {
                r.fail("observables", "empty entry in list");
            }
            run.observables.push_back(item);
        }
    }
    if (const auto* e = config.find("output_dir")) {
        run.output_dir = e->value;
    }

    try {
        validate(s);
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(config.source(), 0, {}, ex.what());
    }
    return run;
}

std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& run) {
    const auto& s = run.spec;
    auto num = [](double v) { return format_double(v); };
    std::vector<std::pair<std::string, std::string>> out = {
        {"model", std::string(kind_name(s.kind))},
        {"name", s.name},
        {"n_emitters", std::to_string(s.n_emitters)},
    };
    auto add = [&out](const std::string& k, std::string v) { out.emplace_back(k, std::move(v)); };
    switch (s.kind) {
        case ModelKind::tc:
            add("omega_0", num(s.omega_0));
            add("omega_c", num(s.omega_c));
            add("g", num(s.g));
            add("gamma_c", num(s.gamma_c));
            break;
        case ModelKind::htc:
            add("omega_e", num(s.omega_e));
            add("omega_v", num(s.omega_v));
            add("lambda_v", num(s.lambda_v));
            add("omega_c", num(s.omega_c));
            add("g", num(s.g));
            add("gamma_c", num(s.gamma_c));
            add("n_vib_ground", std::to_string(s.n_vib_ground));
            add("n_vib_excited", std::to_string(s.n_vib_excited));
            break;
        case ModelKind::three_level:
            add("levels", std::to_string(s.levels));
            add("omega_e", num(s.omega_e));
            add("omega_c", num(s.omega_c));
            add("g", num(s.g));
            add("dipole_coupling", num(s.dipole_coupling));
            add("gamma_c", num(s.gamma_c));
            add("gamma_down", num(s.gamma_down));
            break;
        case ModelKind::vsc:
            add("omega_v", num(s.omega_v));
            add("omega_c", num(s.omega_c));
            add("g", num(s.g));
            add("gamma_c", num(s.gamma_c));
            add("n_vib", std::to_string(s.n_vib));
            add("n_exc", s.n_exc ? std::to_string(*s.n_exc) : "none");
            add("initial_photons", std::to_string(s.initial_photons));
            break;
    }
    add("n_cav", std::to_string(s.n_cav));
    add("t_max_fs", num(s.t_max_fs));
    add("n_samples", std::to_string(s.n_samples));
    add("rel_tol", num(run.rel_tol));
    add("abs_tol", num(run.abs_tol));
    add("positivity_samples", std::to_string(run.positivity_samples));
    add("leakage_threshold", num(run.leakage_threshold));
    add("oracle", run.oracle ? "true" : "false");
    add("strict", run.strict ? "true" : "false");
    add("center_blocks", run.center_blocks ? "true" : "false");
    std::string obs;
    for (const auto& o : run.observables) {
        obs += (obs.empty() ? "" : ",") + o;
    }
    add("observables", obs.empty() ? "all" : obs);
    add("output_dir", run.output_dir);
    return out;
}

}  // namespace permsym
