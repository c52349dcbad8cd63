#include "ecoupons/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ecoupons {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw std::invalid_argument("config field `" + field + "`: " + msg);
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.contains(key))
            fail(path.empty() ? key : path + "." + key, "unknown key");
    }
}

double get_num(const json& obj, const std::string& key, double fallback,
               const std::string& path) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) fail(path, "expected a number");
    return obj[key].get<double>();
}

std::uint64_t get_uint(const json& obj, const std::string& key, std::uint64_t fallback,
                       const std::string& path) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_unsigned() && !obj[key].is_number_integer())
        fail(path, "expected a non-negative integer");
    auto v = obj[key].get<std::int64_t>();
    if (v < 0) fail(path, "expected a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

int get_int(const json& obj, const std::string& key, int fallback, const std::string& path) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer() && !obj[key].is_number_unsigned())
        fail(path, "expected an integer");
    return obj[key].get<int>();
}

std::string get_str(const json& obj, const std::string& key, const std::string& fallback,
                    const std::string& path) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) fail(path, "expected a string");
    return obj[key].get<std::string>();
}

bool get_bool(const json& obj, const std::string& key, bool fallback,
              const std::string& path) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) fail(path, "expected a boolean");
    return obj[key].get<bool>();
}

}  // namespace

void ScenarioConfig::validate() const {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("config field `beta`: must be in (0,1)");
    if (!(cost_scale > 0.0))
        throw std::invalid_argument("config field `cost_scale`: must be > 0");
    prospect.validate();
    lottery.validate();
    if (!(grid.x_min < 0.0 && grid.x_max > 0.0))
        throw std::invalid_argument("config field `grid`: must satisfy x_min < 0 < x_max");
    regeneration.validate();
    actions.validate();
    thermal.params.validate();
    if (thermal.ambient_interpolation != "hold" && thermal.ambient_interpolation != "linear")
        throw std::invalid_argument(
            "config field `thermal.ambient_interpolation`: expected hold|linear");
    if (solver.win_prob_method != "auto" && solver.win_prob_method != "k1" &&
        solver.win_prob_method != "exact" && solver.win_prob_method != "mc")
        throw std::invalid_argument(
            "config field `solver.win_prob_method`: expected auto|k1|exact|mc");
    if (solver.weighting != "complement" && solver.weighting != "both_tails")
        throw std::invalid_argument(
            "config field `solver.weighting`: expected complement|both_tails");
    for (const auto& rule : coupon_schedule.rules)
        if (rule.rate < 0.0 || rule.rate_above < 0.0)
            throw std::invalid_argument("config field `coupon_schedule`: negative rate");
}

SurplusGrid ScenarioConfig::make_grid() const {
    double step = grid.step > 0.0 ? grid.step
                                  : lattice_step(lottery.win_gain, lottery.loss);
    return SurplusGrid(step, grid.x_min, grid.x_max);
}

WeightingMode ScenarioConfig::weighting_mode() const {
    return solver.weighting == "both_tails" ? WeightingMode::kBothTails
                                            : WeightingMode::kComplement;
}

WinProbMethod ScenarioConfig::win_prob_method() const {
    if (solver.win_prob_method == "k1") return WinProbMethod::kK1;
    if (solver.win_prob_method == "exact") return WinProbMethod::kExact;
    if (solver.win_prob_method == "mc") return WinProbMethod::kMonteCarlo;
    return WinProbMethod::kAuto;
}

MfeOptions ScenarioConfig::mfe_options() const {
    MfeOptions o;
    o.damping = solver.damping;
    o.tol = solver.mfe_tol;
    o.max_iters = solver.mfe_max_iters;
    o.value_tol = solver.value_tol;
    o.value_max_sweeps = solver.value_max_sweeps;
    o.stationary_tol = solver.stationary_tol;
    o.stationary_max_iters = solver.stationary_max_iters;
    o.tie_tol = solver.tie_tol;
    o.cost_scale = cost_scale;
    o.weighting = weighting_mode();
    o.win_prob_method = win_prob_method();
    o.mc_samples = solver.mc_samples;
    o.seed = seed;
    o.enumeration_cap = solver.enumeration_cap;
    return o;
}

SweepContext ScenarioConfig::sweep_context() const {
    SweepContext ctx;
    ctx.table = actions;
    ctx.beta = beta;
    ctx.prospect = prospect;
    ctx.grid_x_min = grid.x_min;
    ctx.grid_x_max = grid.x_max;
    ctx.regen = regeneration;
    ctx.opts = mfe_options();
    ctx.cluster_homes = lottery.cluster_size;
    ctx.winners = lottery.winners;
    return ctx;
}

ScenarioConfig config_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");

    ScenarioConfig cfg;
    check_keys(doc, {"beta", "seed", "cost_scale", "prospect", "lottery", "grid",
                     "regeneration", "actions", "solver", "thermal", "coupon_schedule",
                     "prices_usd_per_mwh", "data"},
               "");

    cfg.beta = get_num(doc, "beta", cfg.beta, "beta");
    cfg.seed = get_uint(doc, "seed", cfg.seed, "seed");
    cfg.cost_scale = get_num(doc, "cost_scale", cfg.cost_scale, "cost_scale");

    if (doc.contains("prospect")) {
        const json& p = doc["prospect"];
        check_keys(p, {"gamma", "loss_aversion", "xi"}, "prospect");
        cfg.prospect.gamma = get_num(p, "gamma", cfg.prospect.gamma, "prospect.gamma");
        cfg.prospect.loss_aversion =
            get_num(p, "loss_aversion", cfg.prospect.loss_aversion, "prospect.loss_aversion");
        cfg.prospect.xi = get_num(p, "xi", cfg.prospect.xi, "prospect.xi");
    }
    if (doc.contains("lottery")) {
        const json& l = doc["lottery"];
        check_keys(l, {"cluster_size", "winners", "prize", "win_gain", "loss"}, "lottery");
        cfg.lottery.cluster_size =
            get_int(l, "cluster_size", cfg.lottery.cluster_size, "lottery.cluster_size");
        cfg.lottery.winners = get_int(l, "winners", cfg.lottery.winners, "lottery.winners");
        if (l.contains("prize") && !l.contains("win_gain") && !l.contains("loss")) {
            cfg.lottery = LotteryConfig::for_prize(get_num(l, "prize", 15.0, "lottery.prize"),
                                                   cfg.lottery.cluster_size,
                                                   cfg.lottery.winners);
        } else {
            cfg.lottery.prize = get_num(l, "prize", cfg.lottery.prize, "lottery.prize");
            cfg.lottery.win_gain = get_num(l, "win_gain", cfg.lottery.win_gain, "lottery.win_gain");
            cfg.lottery.loss = get_num(l, "loss", cfg.lottery.loss, "lottery.loss");
        }
    }
    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        check_keys(g, {"x_min", "x_max", "step"}, "grid");
        cfg.grid.x_min = get_num(g, "x_min", cfg.grid.x_min, "grid.x_min");
        cfg.grid.x_max = get_num(g, "x_max", cfg.grid.x_max, "grid.x_max");
        cfg.grid.step = get_num(g, "step", cfg.grid.step, "grid.step");
    }
    if (doc.contains("regeneration")) {
        const json& r = doc["regeneration"];
        if (!r.is_array()) fail("regeneration", "expected an array of [surplus, mass] pairs");
        cfg.regeneration.atoms.clear();
        for (const auto& atom : r) {
            if (!atom.is_array() || atom.size() != 2 || !atom[0].is_number() ||
                !atom[1].is_number())
                fail("regeneration", "expected [surplus, mass] pairs");
            cfg.regeneration.atoms.emplace_back(atom[0].get<double>(), atom[1].get<double>());
        }
    }
    if (doc.contains("actions")) {
        const json& arr = doc["actions"];
        if (!arr.is_array() || arr.empty()) fail("actions", "expected a non-empty array");
        std::vector<Action> rows;
        std::size_t idx = 0;
        for (const auto& a : arr) {
            std::string path = "actions[" + std::to_string(idx) + "]";
            check_keys(a, {"name", "setpoints", "cost_cents", "savings_cents", "coupons"}, path);
            Action act;
            act.name = get_str(a, "name", "a" + std::to_string(idx), path + ".name");
            if (a.contains("setpoints")) {
                const json& sp = a["setpoints"];
                if (!sp.is_array() || sp.size() != kPeriods)
                    fail(path + ".setpoints", "expected 6 numbers");
                for (int j = 0; j < kPeriods; ++j) act.setpoints_c[j] = sp[j].get<double>();
            }
            act.cost_cents = get_num(a, "cost_cents", 0.0, path + ".cost_cents");
            act.savings_cents = get_num(a, "savings_cents", 0.0, path + ".savings_cents");
            act.coupons = get_num(a, "coupons", 0.0, path + ".coupons");
            rows.push_back(std::move(act));
            ++idx;
        }
        cfg.actions = ActionTable(std::move(rows));
    }
    if (doc.contains("solver")) {
        const json& s = doc["solver"];
        check_keys(s, {"value_tol", "value_max_sweeps", "mfe_tol", "mfe_max_iters", "damping",
                       "stationary_tol", "stationary_max_iters", "tie_tol", "series_tail_mass",
                       "weighting", "win_prob_method", "mc_samples", "enumeration_cap"},
                   "solver");
        cfg.solver.value_tol = get_num(s, "value_tol", cfg.solver.value_tol, "solver.value_tol");
        cfg.solver.value_max_sweeps =
            get_int(s, "value_max_sweeps", cfg.solver.value_max_sweeps, "solver.value_max_sweeps");
        cfg.solver.mfe_tol = get_num(s, "mfe_tol", cfg.solver.mfe_tol, "solver.mfe_tol");
        cfg.solver.mfe_max_iters =
            get_int(s, "mfe_max_iters", cfg.solver.mfe_max_iters, "solver.mfe_max_iters");
        cfg.solver.damping = get_num(s, "damping", cfg.solver.damping, "solver.damping");
        cfg.solver.stationary_tol =
            get_num(s, "stationary_tol", cfg.solver.stationary_tol, "solver.stationary_tol");
        cfg.solver.stationary_max_iters = get_int(s, "stationary_max_iters",
                                                  cfg.solver.stationary_max_iters,
                                                  "solver.stationary_max_iters");
        cfg.solver.tie_tol = get_num(s, "tie_tol", cfg.solver.tie_tol, "solver.tie_tol");
        cfg.solver.series_tail_mass =
            get_num(s, "series_tail_mass", cfg.solver.series_tail_mass, "solver.series_tail_mass");
        cfg.solver.weighting = get_str(s, "weighting", cfg.solver.weighting, "solver.weighting");
        cfg.solver.win_prob_method =
            get_str(s, "win_prob_method", cfg.solver.win_prob_method, "solver.win_prob_method");
        cfg.solver.mc_samples = get_uint(s, "mc_samples", cfg.solver.mc_samples, "solver.mc_samples");
        cfg.solver.enumeration_cap =
            get_uint(s, "enumeration_cap", cfg.solver.enumeration_cap, "solver.enumeration_cap");
    }
    if (doc.contains("thermal")) {
        const json& t = doc["thermal"];
        check_keys(t, {"capacitance_kwh_per_c", "resistance_c_per_kw", "rated_power_kw", "cop",
                       "setpoint_c", "deadband_c", "dt_seconds", "ambient_interpolation",
                       "cost_stats_whole_day", "comfort_lambda", "energy_price_cents_per_kwh"},
                   "thermal");
        auto& p = cfg.thermal.params;
        p.capacitance_kwh_per_c = get_num(t, "capacitance_kwh_per_c", p.capacitance_kwh_per_c,
                                          "thermal.capacitance_kwh_per_c");
        p.resistance_c_per_kw = get_num(t, "resistance_c_per_kw", p.resistance_c_per_kw,
                                        "thermal.resistance_c_per_kw");
        p.rated_power_kw = get_num(t, "rated_power_kw", p.rated_power_kw, "thermal.rated_power_kw");
        p.cop = get_num(t, "cop", p.cop, "thermal.cop");
        p.setpoint_c = get_num(t, "setpoint_c", p.setpoint_c, "thermal.setpoint_c");
        p.deadband_c = get_num(t, "deadband_c", p.deadband_c, "thermal.deadband_c");
        cfg.thermal.dt_seconds = get_num(t, "dt_seconds", cfg.thermal.dt_seconds,
                                         "thermal.dt_seconds");
        cfg.thermal.ambient_interpolation = get_str(t, "ambient_interpolation",
                                                    cfg.thermal.ambient_interpolation,
                                                    "thermal.ambient_interpolation");
        cfg.thermal.cost_stats_whole_day = get_bool(t, "cost_stats_whole_day",
                                                    cfg.thermal.cost_stats_whole_day,
                                                    "thermal.cost_stats_whole_day");
        cfg.thermal.comfort_lambda = get_num(t, "comfort_lambda", cfg.thermal.comfort_lambda,
                                             "thermal.comfort_lambda");
        cfg.thermal.energy_price_cents_per_kwh =
            get_num(t, "energy_price_cents_per_kwh", cfg.thermal.energy_price_cents_per_kwh,
                    "thermal.energy_price_cents_per_kwh");
    }
    if (doc.contains("coupon_schedule")) {
        const json& arr = doc["coupon_schedule"];
        if (!arr.is_array() || arr.size() != kPeriods)
            fail("coupon_schedule", "expected 6 period rules");
        for (int j = 0; j < kPeriods; ++j) {
            std::string path = "coupon_schedule[" + std::to_string(j) + "]";
            const json& r = arr[j];
            check_keys(r, {"rate", "threshold_kwh", "rate_above"}, path);
            CouponRule rule;
            rule.rate = get_num(r, "rate", 0.0, path + ".rate");
            if (r.contains("threshold_kwh")) {
                rule.has_threshold = true;
                rule.threshold_kwh = get_num(r, "threshold_kwh", 0.0, path + ".threshold_kwh");
                rule.rate_above = get_num(r, "rate_above", rule.rate, path + ".rate_above");
            }
            cfg.coupon_schedule.rules[j] = rule;
        }
    }
    if (doc.contains("prices_usd_per_mwh")) {
        const json& arr = doc["prices_usd_per_mwh"];
        if (!arr.is_array() || arr.size() != kPeriods)
            fail("prices_usd_per_mwh", "expected 6 numbers");
        for (int j = 0; j < kPeriods; ++j)
            cfg.prices_usd_per_mwh[j] = arr[j].get<double>();
    }
    if (doc.contains("data")) {
        const json& d = doc["data"];
        check_keys(d, {"ambient_csv", "price_csv"}, "data");
        cfg.data.ambient_csv = get_str(d, "ambient_csv", "", "data.ambient_csv");
        cfg.data.price_csv = get_str(d, "price_csv", "", "data.price_csv");
    }

    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config file not found: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return config_from_json_text(buf.str());
}

std::string config_to_json_text(const ScenarioConfig& cfg, int indent) {
    json doc;
    doc["beta"] = cfg.beta;
    doc["seed"] = cfg.seed;
    doc["cost_scale"] = cfg.cost_scale;
    doc["prospect"] = {{"gamma", cfg.prospect.gamma},
                       {"loss_aversion", cfg.prospect.loss_aversion},
                       {"xi", cfg.prospect.xi}};
    doc["lottery"] = {{"cluster_size", cfg.lottery.cluster_size},
                      {"winners", cfg.lottery.winners},
                      {"prize", cfg.lottery.prize},
                      {"win_gain", cfg.lottery.win_gain},
                      {"loss", cfg.lottery.loss}};
    doc["grid"] = {{"x_min", cfg.grid.x_min}, {"x_max", cfg.grid.x_max}, {"step", cfg.grid.step}};
    json regen = json::array();
    for (const auto& [x, p] : cfg.regeneration.atoms) regen.push_back({x, p});
    doc["regeneration"] = regen;
    json actions = json::array();
    for (const auto& a : cfg.actions.rows()) {
        json sp = json::array();
        for (double s : a.setpoints_c) sp.push_back(s);
        actions.push_back({{"name", a.name},
                           {"setpoints", sp},
                           {"cost_cents", a.cost_cents},
                           {"savings_cents", a.savings_cents},
                           {"coupons", a.coupons}});
    }
    doc["actions"] = actions;
    doc["solver"] = {{"value_tol", cfg.solver.value_tol},
                     {"value_max_sweeps", cfg.solver.value_max_sweeps},
                     {"mfe_tol", cfg.solver.mfe_tol},
                     {"mfe_max_iters", cfg.solver.mfe_max_iters},
                     {"damping", cfg.solver.damping},
                     {"stationary_tol", cfg.solver.stationary_tol},
                     {"stationary_max_iters", cfg.solver.stationary_max_iters},
                     {"tie_tol", cfg.solver.tie_tol},
                     {"series_tail_mass", cfg.solver.series_tail_mass},
                     {"weighting", cfg.solver.weighting},
                     {"win_prob_method", cfg.solver.win_prob_method},
                     {"mc_samples", cfg.solver.mc_samples},
                     {"enumeration_cap", cfg.solver.enumeration_cap}};
    doc["thermal"] = {{"capacitance_kwh_per_c", cfg.thermal.params.capacitance_kwh_per_c},
                      {"resistance_c_per_kw", cfg.thermal.params.resistance_c_per_kw},
                      {"rated_power_kw", cfg.thermal.params.rated_power_kw},
                      {"cop", cfg.thermal.params.cop},
                      {"setpoint_c", cfg.thermal.params.setpoint_c},
                      {"deadband_c", cfg.thermal.params.deadband_c},
                      {"dt_seconds", cfg.thermal.dt_seconds},
                      {"ambient_interpolation", cfg.thermal.ambient_interpolation},
                      {"cost_stats_whole_day", cfg.thermal.cost_stats_whole_day},
                      {"comfort_lambda", cfg.thermal.comfort_lambda},
                      {"energy_price_cents_per_kwh", cfg.thermal.energy_price_cents_per_kwh}};
    json schedule = json::array();
    for (const auto& rule : cfg.coupon_schedule.rules) {
        json r = {{"rate", rule.rate}};
        if (rule.has_threshold) {
            r["threshold_kwh"] = rule.threshold_kwh;
            r["rate_above"] = rule.rate_above;
        }
        schedule.push_back(r);
    }
    doc["coupon_schedule"] = schedule;
    json prices = json::array();
    for (double p : cfg.prices_usd_per_mwh) prices.push_back(p);
    doc["prices_usd_per_mwh"] = prices;
    doc["data"] = {{"ambient_csv", cfg.data.ambient_csv}, {"price_csv", cfg.data.price_csv}};
    return doc.dump(indent);
}

std::string config_hash(const ScenarioConfig& cfg) {
    std::string canonical = config_to_json_text(cfg, -1);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace ecoupons
