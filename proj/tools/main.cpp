// Command-line front end: scenario solving, reward sweeps, the fixed-reward
// benchmark, home simulation, and action-table regeneration from data.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ecoupons/economics.hpp"
#include "ecoupons/io.hpp"
#include "ecoupons/scenario.hpp"

namespace fs = std::filesystem;
using namespace ecoupons;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::int64_t seed = -1;  // -1: keep config seed
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "scenario config JSON (defaults if omitted)");
    cmd->add_option("--out-dir", args.out_dir, "directory for output files");
    cmd->add_option("--seed", args.seed, "override the config random seed");
    cmd->add_option("--threads", args.threads, "worker threads for independent solves");
}

ScenarioConfig load_scenario(const CommonArgs& args) {
    ScenarioConfig cfg =
        args.config_path.empty() ? ScenarioConfig{} : load_config(args.config_path);
    cfg.validate();
    if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
    return cfg;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    fs::create_directories(args.out_dir);
    return (fs::path(args.out_dir) / name).string();
}

// "5:95:5" (inclusive range) or "5,10,25"
std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    if (text.find(':') != std::string::npos) {
        double start, stop, step;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0)
            throw std::invalid_argument("expected start:stop:step with step > 0: " + text);
        for (double v = start; v <= stop + 1e-9; v += step) values.push_back(v);
        return values;
    }
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) values.push_back(std::stod(field));
    if (values.empty()) throw std::invalid_argument("empty value list: " + text);
    return values;
}

int run_solve_mfe(const CommonArgs& args) {
    ScenarioConfig cfg = load_scenario(args);
    std::string hash = config_hash(cfg);
    SurplusGrid grid = cfg.make_grid();
    RegenerationDist psi = cfg.regeneration.materialize(grid);
    Preferences prefs = make_preferences(cfg.prospect);
    MfeResult res =
        solve_mfe(cfg.actions, cfg.lottery, cfg.beta, prefs, grid, psi, {}, cfg.mfe_options());

    double ev = expected_customer_value(res.zeta_star, res.value_star);
    double savings = cluster_savings(res.rho_star, cfg.actions, cfg.lottery.cluster_size);
    double disbursed = cfg.lottery.prize * cfg.lottery.winners;
    double profit = savings - disbursed;

    write_zeta_csv(out_path(args, "zeta.csv"), grid, res.zeta_star, hash);
    write_value_policy_csv(out_path(args, "value_policy.csv"), grid, res.value_star,
                           res.policy_star, hash);
    write_mfe_json(out_path(args, "mfe_result.json"), res, "zeta.csv", "value_policy.csv", ev,
                   hash);

    std::printf("converged: %s in %d iterations%s\n", res.converged ? "yes" : "NO",
                res.iterations, res.note.empty() ? "" : (" (" + res.note + ")").c_str());
    std::printf("rho*:");
    for (double r : res.rho_star) std::printf(" %.4f", r);
    std::printf("\nweekly cluster savings $%.2f, reward $%.2f, profit $%.2f\n", savings,
                disbursed, profit);
    std::printf("expected customer value %.2f, local social welfare %.1f\n", ev,
                lsw_value(ev, profit, cfg.lottery.cluster_size));
    std::printf("outputs: %s\n", out_path(args, "mfe_result.json").c_str());
    return res.converged ? 0 : 1;
}

int run_sweep(const CommonArgs& args, const std::string& scheme, const std::string& rewards,
              const std::string& fractions) {
    ScenarioConfig cfg = load_scenario(args);
    SweepContext ctx = cfg.sweep_context();
    std::vector<SweepPoint> points;
    if (scheme == "lottery") {
        points = sweep_lottery(parse_value_list(rewards), ctx, args.threads);
    } else if (scheme == "benchmark") {
        std::vector<double> fr = parse_value_list(fractions);
        for (double& f : fr) f /= 100.0;  // given in percent
        points = sweep_benchmark(fr, ctx, args.threads);
    } else {
        throw std::invalid_argument("unknown scheme: " + scheme);
    }
    std::string file = out_path(args, "sweep_" + scheme + ".csv");
    write_sweep_csv(file, points, cfg.actions.size(), config_hash(cfg));
    int failures = 0;
    for (const auto& pt : points) {
        if (!pt.error.empty()) {
            ++failures;
            std::fprintf(stderr, "point %.2f failed: %s\n", pt.reward, pt.error.c_str());
        }
    }
    auto be = interpolated_break_even(points);
    std::printf("%zu points written to %s (%d failed)\n", points.size() - failures,
                file.c_str(), failures);
    if (be) std::printf("interpolated break-even at $%.2f\n", *be);
    return failures == 0 ? 0 : 1;
}

int run_benchmark(const CommonArgs& args, double return_fraction, double reward_dollars,
                  bool flat) {
    ScenarioConfig cfg = load_scenario(args);
    SweepContext ctx = cfg.sweep_context();
    SweepPoint pt = flat ? solve_benchmark_flat_point(reward_dollars, ctx)
                         : solve_benchmark_point(return_fraction, ctx);
    if (!pt.error.empty()) {
        std::fprintf(stderr, "error code=solve message=\"%s\"\n", pt.error.c_str());
        return 1;
    }
    nlohmann::json doc;
    doc["config_hash"] = config_hash(cfg);
    doc["scheme"] = flat ? "benchmark-flat" : "benchmark-proportional";
    doc["distribution"] = pt.rho;
    doc["weekly_reward"] = pt.reward;
    doc["weekly_savings"] = pt.savings;
    doc["weekly_profit"] = pt.profit;
    doc["expected_value"] = pt.expected_value;
    doc["lsw"] = pt.lsw;
    std::string file = out_path(args, "benchmark.json");
    std::ofstream(file) << doc.dump(2) << "\n";
    std::printf("distribution:");
    for (double r : pt.rho) std::printf(" %.4f", r);
    std::printf("\nweekly savings $%.2f, reward $%.2f, profit $%.2f\n", pt.savings, pt.reward,
                pt.profit);
    std::printf("output: %s\n", file.c_str());
    return 0;
}

AmbientSeries ambient_from_args(const ScenarioConfig& cfg, const std::string& ambient_csv,
                                double constant_c, int days) {
    if (!ambient_csv.empty()) return load_ambient_csv(ambient_csv);
    if (constant_c > -900.0) return constant_ambient(constant_c, days);
    if (!cfg.data.ambient_csv.empty()) return load_ambient_csv(cfg.data.ambient_csv);
    throw std::invalid_argument(
        "no ambient data: pass --ambient, --ambient-constant, or set data.ambient_csv");
}

int run_simulate_home(const CommonArgs& args, int action_index, const std::string& ambient_csv,
                      double constant_c, int days) {
    ScenarioConfig cfg = load_scenario(args);
    if (action_index < 0 || static_cast<std::size_t>(action_index) >= cfg.actions.size())
        throw std::invalid_argument("action index out of range");
    AmbientSeries ambient = ambient_from_args(cfg, ambient_csv, constant_c, days);
    AmbientInterp interp = cfg.thermal.ambient_interpolation == "linear" ? AmbientInterp::kLinear
                                                                         : AmbientInterp::kHold;
    HomeTrace trace =
        simulate_home(cfg.thermal.params, cfg.actions[action_index].setpoints_c, ambient,
                      cfg.thermal.dt_seconds, std::nullopt, false, interp);
    std::string file = out_path(args, "trace.csv");
    write_trace_csv(file, trace, config_hash(cfg));
    double coupons = award_coupons(trace, cfg.coupon_schedule);
    std::printf("simulated %d day(s), action %d (%s)\n", trace.days, action_index,
                cfg.actions[action_index].name.c_str());
    std::printf("mean daily energy %.2f kWh, coupons/day %.2f\n", trace.mean_daily_kwh(),
                coupons);
    std::printf("trace: %s\n", file.c_str());
    return 0;
}

int run_build_action_table(const CommonArgs& args, const std::string& ambient_csv,
                           const std::string& price_csv) {
    ScenarioConfig cfg = load_scenario(args);
    AmbientSeries ambient = ambient_from_args(cfg, ambient_csv, -999.0, 0);
    PriceSeries prices = price_csv.empty()
                             ? PriceSeries::constant(cfg.prices_usd_per_mwh)
                             : load_price_csv(price_csv);
    AmbientInterp interp = cfg.thermal.ambient_interpolation == "linear" ? AmbientInterp::kLinear
                                                                         : AmbientInterp::kHold;
    std::vector<HomeTrace> traces;
    traces.reserve(cfg.actions.size());
    for (const auto& action : cfg.actions.rows())
        traces.push_back(simulate_home(cfg.thermal.params, action.setpoints_c, ambient,
                                       cfg.thermal.dt_seconds, std::nullopt, false, interp));
    nlohmann::json rows = nlohmann::json::array();
    std::printf("%-10s %-10s %-12s %-10s\n", "action", "cost_c", "savings_c", "coupons");
    for (std::size_t a = 0; a < cfg.actions.size(); ++a) {
        double cost = action_cost_cents(traces[0], traces[a], cfg.thermal.comfort_lambda,
                                        cfg.thermal.energy_price_cents_per_kwh,
                                        cfg.thermal.cost_stats_whole_day);
        double savings = 100.0 * differential_price_usd(traces[0], traces[a], prices);
        double coupons = award_coupons(traces[a], cfg.coupon_schedule);
        nlohmann::json sp = nlohmann::json::array();
        for (double s : cfg.actions[a].setpoints_c) sp.push_back(s);
        rows.push_back({{"name", cfg.actions[a].name},
                        {"setpoints", sp},
                        {"cost_cents", cost},
                        {"savings_cents", savings},
                        {"coupons", coupons}});
        std::printf("%-10s %-10.2f %-12.2f %-10.1f\n", cfg.actions[a].name.c_str(), cost,
                    savings, coupons);
    }
    nlohmann::json doc;
    doc["config_hash"] = config_hash(cfg);
    doc["actions"] = rows;
    std::string file = out_path(args, "action_table.json");
    std::ofstream(file) << doc.dump(2) << "\n";
    std::printf("table: %s\n", file.c_str());
    return 0;
}

int run_validate(const CommonArgs& args) {
    ScenarioConfig cfg = load_scenario(args);  // throws with field diagnostics
    // quick numeric self-checks on the loaded scenario
    Preferences prefs = make_preferences(cfg.prospect);
    if (prefs.weight(0.0) != 0.0 || prefs.weight(1.0) != 1.0)
        throw std::runtime_error("weight endpoints violated");
    SurplusGrid grid = cfg.make_grid();
    RegenerationDist psi = cfg.regeneration.materialize(grid);
    std::vector<double> coupons = cfg.actions.coupon_vector();
    std::vector<double> rho = uniform_profile(cfg.actions.size());
    std::vector<double> p = win_probabilities(rho, coupons, cfg.lottery, cfg.win_prob_method(),
                                              cfg.solver.mc_samples, cfg.seed,
                                              cfg.solver.enumeration_cap);
    WinProbabilityBounds bounds = win_probability_bounds(coupons, cfg.lottery);
    for (double v : p)
        if (v < bounds.lower - 1e-12 || v > bounds.upper + 1e-12)
            throw std::runtime_error("win probability escapes its bounds");
    std::vector<double> theta(cfg.actions.size());
    for (std::size_t a = 0; a < theta.size(); ++a)
        theta[a] = cfg.actions[a].cost_cents * cfg.cost_scale;
    DpProblem dp = make_dp_problem(grid, cfg.beta, theta, p, prefs, cfg.lottery.win_gain,
                                   cfg.lottery.loss, cfg.weighting_mode());
    Policy pol = best_response(dp, std::vector<double>(grid.size(), 0.0), cfg.solver.tie_tol);
    TransitionKernel kernel =
        transition_kernel(p, pol, cfg.beta, psi, grid, cfg.lottery.win_gain, cfg.lottery.loss);
    for (std::size_t i = 0; i < grid.size(); i += std::max<std::size_t>(1, grid.size() / 7)) {
        double sum = 0.0;
        for (double v : kernel.row(i)) sum += v;
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::runtime_error("transition kernel row does not sum to 1");
    }
    std::printf("config ok (hash %s): %zu actions, grid %zu states, step %g\n",
                config_hash(cfg).c_str(), cfg.actions.size(), grid.size(), grid.step());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean-field equilibrium solver for coupon-lottery demand response"};
    app.require_subcommand(1);

    CommonArgs common;
    std::string scheme = "lottery", rewards = "5:95:5", fractions = "1:100:1";
    int action_index = 0, days = 1;
    double return_fraction = -1.0, reward_dollars = 15.0, ambient_const = -999.0;
    std::string ambient_csv, price_csv;

    CLI::App* solve = app.add_subcommand("solve-mfe", "solve the lottery equilibrium");
    add_common(solve, common);

    CLI::App* sweep = app.add_subcommand("sweep", "solve across a range of rewards");
    add_common(sweep, common);
    sweep->add_option("--scheme", scheme, "lottery or benchmark");
    sweep->add_option("--rewards", rewards, "lottery prizes, start:stop:step or list");
    sweep->add_option("--fractions", fractions, "benchmark return percentages");

    CLI::App* bench = app.add_subcommand("benchmark", "fixed-reward scheme, no lottery");
    add_common(bench, common);
    bench->add_option("--return-fraction", return_fraction,
                      "fraction of savings returned per action (proportional mode)");
    bench->add_option("--reward-dollars", reward_dollars,
                      "weekly budget split equally over saving actions (flat mode)");

    CLI::App* sim = app.add_subcommand("simulate-home", "run the thermal home model");
    add_common(sim, common);
    sim->add_option("--action", action_index, "action index from the table");
    sim->add_option("--ambient", ambient_csv, "ambient CSV (timestamp,celsius)");
    sim->add_option("--ambient-constant", ambient_const, "constant ambient temperature, C");
    sim->add_option("--days", days, "days to simulate with --ambient-constant");

    CLI::App* build = app.add_subcommand("build-action-table",
                                         "recompute costs/savings/coupons from data");
    add_common(build, common);
    build->add_option("--ambient", ambient_csv, "ambient CSV (timestamp,celsius)");
    build->add_option("--prices", price_csv, "price CSV (date,period_index,usd_per_mwh)");

    CLI::App* validate = app.add_subcommand("validate", "check a config and its invariants");
    add_common(validate, common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve_mfe(common);
        if (sweep->parsed()) return run_sweep(common, scheme, rewards, fractions);
        if (bench->parsed())
            return run_benchmark(common, return_fraction, reward_dollars,
                                 return_fraction < 0.0);
        if (sim->parsed())
            return run_simulate_home(common, action_index, ambient_csv, ambient_const, days);
        if (build->parsed()) return run_build_action_table(common, ambient_csv, price_csv);
        if (validate->parsed()) return run_validate(common);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error code=config message=\"%s\"\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error code=runtime message=\"%s\"\n", e.what());
        return 1;
    }
    return 0;
}
