#include "crane/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace crane {

namespace {

struct RawValue {
    std::string text;
    int line = 0;
    bool consumed = false;
};

using RawMap = std::map<std::string, RawValue>;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

RawMap tokenize(const std::string& text) {
    RawMap map;
    std::vector<std::string> stack;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line == "}") {
            if (stack.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": unmatched '}'",
                                  line_no);
            stack.pop_back();
            continue;
        }
        if (line.back() == '{') {
            const std::string name = trim(line.substr(0, line.size() - 1));
            if (name.empty() || name.find_first_of(" \t={}") != std::string::npos)
                throw ConfigError("line " + std::to_string(line_no) +
                                      ": malformed section header",
                                  line_no);
            stack.push_back(name);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) +
                                  ": expected 'key = value'",
                              line_no);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value",
                              line_no);
        std::string path;
        for (const auto& s : stack) path += s + ".";
        path += key;
        if (map.count(path))
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" +
                                  path + "'",
                              line_no);
        map.emplace(path, RawValue{value, line_no, false});
    }
    if (!stack.empty()) throw ConfigError("unterminated section '" + stack.back() + "'");
    return map;
}

class Reader {
  public:
    explicit Reader(RawMap& map) : map_(map) {}

    bool has(const std::string& path) const { return map_.count(path) != 0; }

    double number(const std::string& path, double fallback) {
        auto* v = find(path);
        if (!v) return fallback;
        return parse_number(*v, path);
    }

    double mandatory_number(const std::string& path) {
        auto* v = find(path);
        if (!v)
            throw ConfigError("missing mandatory field '" + path +
                              "' (absent from the source parameter tables; it must be "
                              "chosen explicitly)");
        return parse_number(*v, path);
    }

    int integer(const std::string& path, int fallback) {
        const double d = number(path, fallback);
        if (d != std::floor(d))
            throw ConfigError("field '" + path + "' must be an integer");
        return static_cast<int>(d);
    }

    bool boolean(const std::string& path, bool fallback) {
        auto* v = find(path);
        if (!v) return fallback;
        if (v->text == "true") return true;
        if (v->text == "false") return false;
        throw ConfigError("line " + std::to_string(v->line) + ": field '" + path +
                              "' must be true or false",
                          v->line);
    }

    std::string word(const std::string& path, const std::string& fallback) {
        auto* v = find(path);
        if (!v) return fallback;
        return v->text;
    }

    std::vector<double> numbers(const std::string& path, std::vector<double> fallback) {
        auto* v = find(path);
        if (!v) return fallback;
        std::vector<double> out;
        std::istringstream ss(v->text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            RawValue tmp{trim(item), v->line, false};
            out.push_back(parse_number(tmp, path));
        }
        if (out.empty())
            throw ConfigError("line " + std::to_string(v->line) + ": empty list for '" +
                                  path + "'",
                              v->line);
        return out;
    }

    std::vector<std::string> words(const std::string& path,
                                   std::vector<std::string> fallback) {
        auto* v = find(path);
        if (!v) return fallback;
        std::vector<std::string> out;
        std::istringstream ss(v->text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }

    void reject_unconsumed() const {
        for (const auto& [path, v] : map_)
            if (!v.consumed)
                throw ConfigError("line " + std::to_string(v.line) + ": unknown key '" +
                                      path + "'",
                                  v.line);
    }

  private:
    RawValue* find(const std::string& path) {
        auto it = map_.find(path);
        if (it == map_.end()) return nullptr;
        it->second.consumed = true;
        return &it->second;
    }

    static double parse_number(const RawValue& v, const std::string& path) {
        std::size_t used = 0;
        double out = 0.0;
        try {
            out = std::stod(v.text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != v.text.size())
            throw ConfigError("line " + std::to_string(v.line) + ": field '" + path +
                                  "' is not a number: '" + v.text + "'",
                              v.line);
        return out;
    }

    RawMap& map_;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
    plant.validate();
    gains.validate();
    pid.validate();
    if (!(nn_eta_min > 0.0 && nn_eta_max >= nn_eta_min))
        throw ConfigError("nn: need 0 < eta_min <= eta_max");
    if (!(lqr_r > 0.0)) throw ConfigError("baselines.lqr: r must be > 0");
    for (double q : lqr_q)
        if (q < 0.0) throw ConfigError("baselines.lqr: Q diagonal must be >= 0");
    if (switch_targets.size() != switch_windows.size() || switch_targets.empty())
        throw ConfigError("reference: targets and windows must have equal, nonzero length");
    sim.validate();
    if (!(T_switch >= sim.dt_ctrl)) throw ConfigError("sim: T_switch must be >= dt_ctrl");
    if (!(rise_time > 0.0)) throw ConfigError("reference: rise_time must be > 0");
    if (seeds.empty()) throw ConfigError("seeds: need at least one seed");
    for (const auto& c : run_controllers)
        if (c != "hsmc" && c != "pid" && c != "lqr")
            throw ConfigError("run.controllers: unknown controller '" + c + "'");
    const auto& names = scenario_names();
    for (const auto& s : run_scenarios)
        if (std::find(names.begin(), names.end(), s) == names.end())
            throw ConfigError("run.scenarios: unknown scenario '" + s + "'");
}

ExperimentConfig parse_config(const std::string& text) {
    RawMap raw = tokenize(text);
    Reader r(raw);
    ExperimentConfig cfg;

    cfg.plant.m_t = r.number("plant.m_t", cfg.plant.m_t);
    cfg.plant.m_r = r.number("plant.m_r", cfg.plant.m_r);
    cfg.plant.L = r.mandatory_number("plant.L");
    cfg.plant.d = r.number("plant.d", cfg.plant.d);
    cfg.plant.EI = r.mandatory_number("plant.EI");
    cfg.plant.c = r.number("plant.c", cfg.plant.c);
    cfg.plant.rho_w = r.number("plant.rho_w", cfg.plant.rho_w);
    cfg.plant.C_a = r.number("plant.C_a", cfg.plant.C_a);
    cfg.plant.C_d = r.number("plant.C_d", cfg.plant.C_d);
    cfg.plant.n_nodes = r.integer("plant.n_nodes", cfg.plant.n_nodes);

    cfg.gains.K0 = r.mandatory_number("gains.K0");
    cfg.gains.Kp1 = r.number("gains.Kp1", cfg.gains.Kp1);
    cfg.gains.Ki1 = r.number("gains.Ki1", cfg.gains.Ki1);
    cfg.gains.Kd1 = r.number("gains.Kd1", cfg.gains.Kd1);
    cfg.gains.Kp2 = r.number("gains.Kp2", cfg.gains.Kp2);
    cfg.gains.Ki2 = r.number("gains.Ki2", cfg.gains.Ki2);
    cfg.gains.Kd2 = r.number("gains.Kd2", cfg.gains.Kd2);
    cfg.gains.alpha = r.number("gains.alpha", cfg.gains.alpha);
    cfg.gains.beta = r.number("gains.beta", cfg.gains.beta);
    cfg.gains.Ks0 = r.number("gains.Ks0", cfg.gains.Ks0);
    cfg.gains.Ks1 = r.number("gains.Ks1", cfg.gains.Ks1);
    cfg.gains.Ks2 = r.number("gains.Ks2", cfg.gains.Ks2);
    cfg.gains.Kr1 = r.mandatory_number("gains.Kr1");
    cfg.gains.Kr2 = r.mandatory_number("gains.Kr2");
    cfg.gains.phi0 = r.mandatory_number("gains.phi0");
    cfg.gains.phi1 = r.mandatory_number("gains.phi1");
    cfg.gains.phi2 = r.mandatory_number("gains.phi2");
    cfg.gains.gamma = r.number("gains.gamma", cfg.gains.gamma);
    cfg.gains.delta = r.mandatory_number("gains.delta");
    cfg.gains.alpha1 = r.number("gains.alpha1", cfg.gains.alpha1);
    cfg.gains.alpha2 = r.number("gains.alpha2", cfg.gains.alpha2);
    cfg.gains.u_min = r.number("gains.u_min", cfg.gains.u_min);
    cfg.gains.u_max = r.number("gains.u_max", cfg.gains.u_max);
    cfg.gains.int_clamp = r.number("gains.int_clamp", cfg.gains.int_clamp);
    const std::string reaching = r.word("gains.reaching", "sat");
    if (reaching != "sat" && reaching != "sign")
        throw ConfigError("gains.reaching must be 'sat' or 'sign'");
    cfg.gains.sign_reaching = (reaching == "sign");
    cfg.gains.theta_clamp = r.boolean("gains.theta_clamp", cfg.gains.theta_clamp);
    cfg.gains.theta_min = r.number("gains.theta_min", cfg.gains.theta_min);

    cfg.unused_gain_keys.clear();
    if (r.has("gains.Ks3")) cfg.unused_gain_keys.push_back("gains.Ks3");
    cfg.Ks3 = r.number("gains.Ks3", cfg.Ks3);
    if (r.has("gains.K_bend")) cfg.unused_gain_keys.push_back("gains.K_bend");
    cfg.K_bend = r.number("gains.K_bend", cfg.K_bend);
    if (r.has("gains.K_w")) cfg.unused_gain_keys.push_back("gains.K_w");
    cfg.K_w = r.number("gains.K_w", cfg.K_w);

    cfg.nn_eta_min = r.number("nn.eta_min", cfg.nn_eta_min);
    cfg.nn_eta_max = r.number("nn.eta_max", cfg.nn_eta_max);

    cfg.pid.kp = r.number("baselines.pid.kp", cfg.pid.kp);
    cfg.pid.ki = r.number("baselines.pid.ki", cfg.pid.ki);
    cfg.pid.kd = r.number("baselines.pid.kd", cfg.pid.kd);
    cfg.pid.int_clamp = r.number("baselines.pid.int_clamp", cfg.pid.int_clamp);
    cfg.pid.u_min = cfg.gains.u_min;  // actuator bounds are shared
    cfg.pid.u_max = cfg.gains.u_max;

    cfg.lqr_q[0] = r.number("baselines.lqr.q_x", cfg.lqr_q[0]);
    cfg.lqr_q[1] = r.number("baselines.lqr.q_xdot", cfg.lqr_q[1]);
    cfg.lqr_q[2] = r.number("baselines.lqr.q_wtip", cfg.lqr_q[2]);
    cfg.lqr_q[3] = r.number("baselines.lqr.q_wdot_tip", cfg.lqr_q[3]);
    cfg.lqr_r = r.number("baselines.lqr.r", cfg.lqr_r);

    cfg.low_amp = r.number("scenarios.low.amp", cfg.low_amp);
    cfg.low_freq = r.number("scenarios.low.freq", cfg.low_freq);
    cfg.high_amp = r.number("scenarios.high.amp", cfg.high_amp);
    cfg.high_freq = r.number("scenarios.high.freq", cfg.high_freq);

    auto read_random = [&](const std::string& base, RandomDisturbanceParams& p) {
        p.amp_low = r.number(base + ".amp_low", p.amp_low);
        p.freq_low = r.number(base + ".freq_low", p.freq_low);
        p.amp_mid = r.number(base + ".amp_mid", p.amp_mid);
        p.freq_mid = r.number(base + ".freq_mid", p.freq_mid);
        p.noise_std = r.number(base + ".noise_std", p.noise_std);
    };
    read_random("scenarios.random", cfg.random);
    read_random("scenarios.random_prose", cfg.random_prose);

    cfg.x_final = r.number("reference.x_final", cfg.x_final);
    cfg.rise_time = r.number("reference.rise_time", cfg.rise_time);
    cfg.switch_targets = r.numbers("reference.targets", cfg.switch_targets);
    cfg.switch_windows = r.numbers("reference.windows", cfg.switch_windows);

    cfg.sim.dt_ctrl = r.number("sim.dt_ctrl", cfg.sim.dt_ctrl);
    cfg.sim.substeps = r.integer("sim.substeps", cfg.sim.substeps);
    cfg.sim.T = r.number("sim.T", cfg.sim.T);
    cfg.T_switch = r.number("sim.T_switch", cfg.T_switch);
    const std::string integ = r.word("sim.integrator", "rk4");
    if (integ == "rk4")
        cfg.sim.integrator = Integrator::rk4;
    else if (integ == "semi_implicit_euler")
        cfg.sim.integrator = Integrator::semi_implicit_euler;
    else
        throw ConfigError("sim.integrator must be 'rk4' or 'semi_implicit_euler'");
    cfg.sim.record_fields = r.words("sim.record_fields", {});

    cfg.run_controllers = r.words("run.controllers", cfg.run_controllers);
    cfg.run_scenarios = r.words("run.scenarios", cfg.run_scenarios);
    cfg.out_dir = r.word("output.dir", cfg.out_dir);

    const auto seed_list = r.numbers("seeds", {1.0});
    cfg.seeds.clear();
    for (double s : seed_list) {
        if (s < 0.0 || s != std::floor(s))
            throw ConfigError("seeds must be non-negative integers");
        cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    }

    r.reject_unconsumed();
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream o;
    o << "plant {\n";
    o << "  m_t = " << fmt(cfg.plant.m_t) << "\n";
    o << "  m_r = " << fmt(cfg.plant.m_r) << "\n";
    o << "  L = " << fmt(cfg.plant.L) << "\n";
    o << "  d = " << fmt(cfg.plant.d) << "\n";
    o << "  EI = " << fmt(cfg.plant.EI) << "\n";
    o << "  c = " << fmt(cfg.plant.c) << "\n";
    o << "  rho_w = " << fmt(cfg.plant.rho_w) << "\n";
    o << "  C_a = " << fmt(cfg.plant.C_a) << "\n";
    o << "  C_d = " << fmt(cfg.plant.C_d) << "\n";
    o << "  n_nodes = " << cfg.plant.n_nodes << "\n";
    o << "}\n\n";

    o << "gains {\n";
    o << "  K0 = " << fmt(cfg.gains.K0) << "\n";
    o << "  Kp1 = " << fmt(cfg.gains.Kp1) << "\n";
    o << "  Ki1 = " << fmt(cfg.gains.Ki1) << "\n";
    o << "  Kd1 = " << fmt(cfg.gains.Kd1) << "\n";
    o << "  Kp2 = " << fmt(cfg.gains.Kp2) << "\n";
    o << "  Ki2 = " << fmt(cfg.gains.Ki2) << "\n";
    o << "  Kd2 = " << fmt(cfg.gains.Kd2) << "\n";
    o << "  alpha = " << fmt(cfg.gains.alpha) << "\n";
    o << "  beta = " << fmt(cfg.gains.beta) << "\n";
    o << "  Ks0 = " << fmt(cfg.gains.Ks0) << "\n";
    o << "  Ks1 = " << fmt(cfg.gains.Ks1) << "\n";
    o << "  Ks2 = " << fmt(cfg.gains.Ks2) << "\n";
    o << "  Kr1 = " << fmt(cfg.gains.Kr1) << "\n";
    o << "  Kr2 = " << fmt(cfg.gains.Kr2) << "\n";
    o << "  phi0 = " << fmt(cfg.gains.phi0) << "\n";
    o << "  phi1 = " << fmt(cfg.gains.phi1) << "\n";
    o << "  phi2 = " << fmt(cfg.gains.phi2) << "\n";
    o << "  gamma = " << fmt(cfg.gains.gamma) << "\n";
    o << "  delta = " << fmt(cfg.gains.delta) << "\n";
    o << "  alpha1 = " << fmt(cfg.gains.alpha1) << "\n";
    o << "  alpha2 = " << fmt(cfg.gains.alpha2) << "\n";
    o << "  u_min = " << fmt(cfg.gains.u_min) << "\n";
    o << "  u_max = " << fmt(cfg.gains.u_max) << "\n";
    o << "  int_clamp = " << fmt(cfg.gains.int_clamp) << "\n";
    o << "  reaching = " << (cfg.gains.sign_reaching ? "sign" : "sat") << "\n";
    o << "  theta_clamp = " << (cfg.gains.theta_clamp ? "true" : "false") << "\n";
    o << "  theta_min = " << fmt(cfg.gains.theta_min) << "\n";
    auto has_unused = [&](const char* key) {
        return std::find(cfg.unused_gain_keys.begin(), cfg.unused_gain_keys.end(),
                         std::string("gains.") + key) != cfg.unused_gain_keys.end();
    };
    if (has_unused("Ks3")) o << "  Ks3 = " << fmt(cfg.Ks3) << "\n";
    if (has_unused("K_bend")) o << "  K_bend = " << fmt(cfg.K_bend) << "\n";
    if (has_unused("K_w")) o << "  K_w = " << fmt(cfg.K_w) << "\n";
    o << "}\n\n";

    o << "nn {\n";
    o << "  eta_min = " << fmt(cfg.nn_eta_min) << "\n";
    o << "  eta_max = " << fmt(cfg.nn_eta_max) << "\n";
    o << "}\n\n";

    o << "baselines {\n";
    o << "  pid {\n";
    o << "    kp = " << fmt(cfg.pid.kp) << "\n";
    o << "    ki = " << fmt(cfg.pid.ki) << "\n";
    o << "    kd = " << fmt(cfg.pid.kd) << "\n";
    o << "    int_clamp = " << fmt(cfg.pid.int_clamp) << "\n";
    o << "  }\n";
    o << "  lqr {\n";
    o << "    q_x = " << fmt(cfg.lqr_q[0]) << "\n";
    o << "    q_xdot = " << fmt(cfg.lqr_q[1]) << "\n";
    o << "    q_wtip = " << fmt(cfg.lqr_q[2]) << "\n";
    o << "    q_wdot_tip = " << fmt(cfg.lqr_q[3]) << "\n";
    o << "    r = " << fmt(cfg.lqr_r) << "\n";
    o << "  }\n";
    o << "}\n\n";

    o << "scenarios {\n";
    o << "  low {\n    amp = " << fmt(cfg.low_amp) << "\n    freq = " << fmt(cfg.low_freq)
      << "\n  }\n";
    o << "  high {\n    amp = " << fmt(cfg.high_amp)
      << "\n    freq = " << fmt(cfg.high_freq) << "\n  }\n";
    auto dump_random = [&](const char* name, const RandomDisturbanceParams& p) {
        o << "  " << name << " {\n";
        o << "    amp_low = " << fmt(p.amp_low) << "\n";
        o << "    freq_low = " << fmt(p.freq_low) << "\n";
        o << "    amp_mid = " << fmt(p.amp_mid) << "\n";
        o << "    freq_mid = " << fmt(p.freq_mid) << "\n";
        o << "    noise_std = " << fmt(p.noise_std) << "\n";
        o << "  }\n";
    };
    dump_random("random", cfg.random);
    dump_random("random_prose", cfg.random_prose);
    o << "}\n\n";

    auto dump_list = [&](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + fmt(v[i]);
        return s;
    };
    o << "reference {\n";
    o << "  x_final = " << fmt(cfg.x_final) << "\n";
    o << "  rise_time = " << fmt(cfg.rise_time) << "\n";
    o << "  targets = " << dump_list(cfg.switch_targets) << "\n";
    o << "  windows = " << dump_list(cfg.switch_windows) << "\n";
    o << "}\n\n";

    o << "sim {\n";
    o << "  dt_ctrl = " << fmt(cfg.sim.dt_ctrl) << "\n";
    o << "  substeps = " << cfg.sim.substeps << "\n";
    o << "  T = " << fmt(cfg.sim.T) << "\n";
    o << "  T_switch = " << fmt(cfg.T_switch) << "\n";
    o << "  integrator = "
      << (cfg.sim.integrator == Integrator::rk4 ? "rk4" : "semi_implicit_euler") << "\n";
    if (!cfg.sim.record_fields.empty()) {
        o << "  record_fields = ";
        for (std::size_t i = 0; i < cfg.sim.record_fields.size(); ++i)
            o << (i ? "," : "") << cfg.sim.record_fields[i];
        o << "\n";
    }
    o << "}\n\n";

    o << "run {\n";
    o << "  controllers = ";
    for (std::size_t i = 0; i < cfg.run_controllers.size(); ++i)
        o << (i ? "," : "") << cfg.run_controllers[i];
    o << "\n  scenarios = ";
    for (std::size_t i = 0; i < cfg.run_scenarios.size(); ++i)
        o << (i ? "," : "") << cfg.run_scenarios[i];
    o << "\n}\n\n";

    o << "output {\n  dir = " << cfg.out_dir << "\n}\n\n";

    o << "seeds = ";
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
        o << (i ? "," : "") << cfg.seeds[i];
    o << "\n";
    return o.str();
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {
        "none",       "low",         "high",          "random",
        "random-prose", "switch-low", "switch-high", "switch-random"};
    return names;
}

bool is_switching_scenario(const std::string& name) {
    return name.rfind("switch-", 0) == 0;
}

namespace {

DisturbanceSpec disturbance_for(const ExperimentConfig& cfg, const std::string& base,
                                std::uint64_t seed) {
    if (base == "none") return DisturbanceSpec::none_spec();
    if (base == "low") return DisturbanceSpec::low(cfg.low_amp, cfg.low_freq);
    if (base == "high") return DisturbanceSpec::high(cfg.high_amp, cfg.high_freq);
    const RandomDisturbanceParams& p =
        (base == "random-prose") ? cfg.random_prose : cfg.random;
    return DisturbanceSpec::random(p.amp_low, p.freq_low, p.amp_mid, p.freq_mid,
                                   p.noise_std, seed, cfg.sim.dt_ctrl);
}

}  // namespace

Scenario make_scenario(const ExperimentConfig& cfg, const std::string& name,
                       std::uint64_t seed) {
    const auto& names = scenario_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw ConfigError("unknown scenario '" + name + "'");

    Scenario sc;
    if (is_switching_scenario(name)) {
        sc.disturbance = disturbance_for(cfg, name.substr(7), seed);
        std::vector<std::pair<double, double>> targets;
        for (std::size_t i = 0; i < cfg.switch_targets.size(); ++i)
            targets.emplace_back(cfg.switch_windows[i], cfg.switch_targets[i]);
        sc.reference = ReferenceSpec::multi_target(std::move(targets), cfg.rise_time);
    } else {
        sc.disturbance = disturbance_for(cfg, name, seed);
        sc.reference = ReferenceSpec::smooth_step(cfg.x_final, cfg.sim.T, cfg.rise_time);
    }
    return sc;
}

double scenario_horizon(const ExperimentConfig& cfg, const std::string& name) {
    return is_switching_scenario(name) ? cfg.T_switch : cfg.sim.T;
}

}  // namespace crane
