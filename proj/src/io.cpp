#include "ecoupons/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace ecoupons {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

// days since 1970-01-01 for a civil date (proleptic Gregorian)
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    unsigned yoe = static_cast<unsigned>(y - era * 400);
    unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                   static_cast<unsigned>(d) - 1u;
    unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::int64_t parse_iso8601(const std::string& s) {
    int y, mo, d, h = 0, mi = 0, se = 0;
    char sep;
    std::istringstream in(s);
    in >> y >> sep >> mo >> sep >> d;
    if (!in) throw std::invalid_argument("bad ISO-8601 timestamp: " + s);
    if (in.peek() == 'T' || in.peek() == ' ') {
        in.get();
        in >> h >> sep >> mi;
        if (in.peek() == ':') {
            in.get();
            in >> se;
        }
    }
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + se;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

}  // namespace

AmbientSeries load_ambient_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("ambient csv not found: " + path);
    AmbientSeries series;
    std::string line;
    std::vector<std::int64_t> times;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_csv_line(line);
        if (fields.size() < 2) continue;
        if (fields[0] == "timestamp") continue;  // header
        times.push_back(parse_iso8601(fields[0]));
        series.celsius.push_back(std::stod(fields[1]));
    }
    if (times.size() < 2) throw std::invalid_argument("ambient csv too short: " + path);
    series.start_epoch_s = times[0];
    series.interval_s = static_cast<double>(times[1] - times[0]);
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] <= times[i - 1])
            throw std::invalid_argument("ambient csv timestamps must be strictly increasing");
        if (std::abs(static_cast<double>(times[i] - times[i - 1]) - series.interval_s) > 1e-9)
            throw std::invalid_argument("ambient csv cadence must be uniform");
    }
    return series;
}

PriceSeries load_price_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("price csv not found: " + path);
    std::map<std::string, std::array<double, kPeriods>> by_date;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_csv_line(line);
        if (fields.size() < 3 || fields[0] == "date") continue;
        int period = std::stoi(fields[1]);
        if (period < 1 || period > kPeriods)
            throw std::invalid_argument("price csv period_index must be in 1..6");
        by_date[fields[0]][period - 1] = std::stod(fields[2]);
    }
    if (by_date.empty()) throw std::invalid_argument("price csv is empty: " + path);
    PriceSeries prices;
    for (const auto& [date, row] : by_date) {
        (void)date;
        prices.daily.push_back(row);
    }
    return prices;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

}  // namespace

void write_zeta_csv(const std::string& path, const SurplusGrid& grid,
                    std::span<const double> zeta, const std::string& config_hash) {
    auto out = open_out(path);
    out << "# config_hash=" << config_hash << "\n";
    out << "x,mass\n";
    for (std::size_t i = 0; i < zeta.size(); ++i)
        out << format_double(grid.x(i)) << ',' << format_double(zeta[i]) << "\n";
}

void write_value_policy_csv(const std::string& path, const SurplusGrid& grid,
                            std::span<const double> value, const Policy& policy,
                            const std::string& config_hash) {
    auto out = open_out(path);
    out << "# config_hash=" << config_hash << "\n";
    out << "x,v";
    for (std::size_t a = 1; a <= policy.n_actions; ++a) out << ",sigma_" << a;
    out << "\n";
    for (std::size_t i = 0; i < value.size(); ++i) {
        out << format_double(grid.x(i)) << ',' << format_double(value[i]);
        for (double w : policy.row(i)) out << ',' << format_double(w);
        out << "\n";
    }
}

void write_sweep_csv(const std::string& path, std::span<const SweepPoint> points,
                     std::size_t n_actions, const std::string& config_hash) {
    auto out = open_out(path);
    out << "# config_hash=" << config_hash << "\n";
    out << "reward,scheme,savings,profit,expected_value,lsw";
    for (std::size_t a = 1; a <= n_actions; ++a) out << ",rho_" << a;
    out << "\n";
    for (const auto& pt : points) {
        if (!pt.error.empty()) continue;
        out << format_double(pt.reward) << ',' << pt.scheme << ',' << format_double(pt.savings)
            << ',' << format_double(pt.profit) << ',' << format_double(pt.expected_value) << ','
            << format_double(pt.lsw);
        for (double r : pt.rho) out << ',' << format_double(r);
        out << "\n";
    }
}

void write_trace_csv(const std::string& path, const HomeTrace& trace,
                     const std::string& config_hash) {
    auto out = open_out(path);
    out << "# config_hash=" << config_hash << "\n";
    out << "t_seconds,tau,q\n";
    for (std::size_t k = 0; k < trace.tau.size(); ++k)
        out << format_double(static_cast<double>(k) * trace.dt_s) << ','
            << format_double(trace.tau[k]) << ',' << int(trace.q[k]) << "\n";
}

void write_mfe_json(const std::string& path, const MfeResult& result,
                    const std::string& zeta_file, const std::string& value_policy_file,
                    double expected_value, const std::string& config_hash) {
    nlohmann::json doc;
    doc["config_hash"] = config_hash;
    doc["rho_star"] = result.rho_star;
    doc["win_prob"] = result.win_prob;
    doc["iterations"] = result.iterations;
    doc["converged"] = result.converged;
    doc["damping_used"] = result.damping_used;
    doc["residual_history"] = result.residual_history;
    doc["expected_value"] = expected_value;
    if (!result.note.empty()) doc["note"] = result.note;
    doc["files"] = {{"zeta", zeta_file}, {"value_policy", value_policy_file}};
    auto out = open_out(path);
    out << doc.dump(2) << "\n";
}

}  // namespace ecoupons
