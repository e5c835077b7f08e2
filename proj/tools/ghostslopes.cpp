#include "verify_suite.hpp"

#include <ghostslopes/ghostslopes.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace ghost;

namespace {

enum Exit { ok = 0, bad_config = 1, domain_failure = 2, verify_failure = 3 };

struct RunConfig {
    std::int64_t p = 7, a = 2, s_eps = 1, global_mult = 1;
    std::string mode = "exploratory";
    std::optional<std::int64_t> k;
    std::string k_range;
    std::int64_t n = 8;
    std::string radius;
    std::string format = "table";
    std::uint64_t seed = 20240601;
    unsigned jobs = 0;
    std::int64_t k_ceiling = 50'000'000;
    std::int64_t stride = 1;
    std::string kind = "threshold";
    bool include_exceptional = false;
    int precision = 6;
};

GhostContext make_context(const RunConfig& c) {
    Mode mode;
    if (c.mode == "strict") mode = Mode::strict;
    else if (c.mode == "exploratory") mode = Mode::exploratory;
    else throw ConfigError("mode must be strict or exploratory");
    GhostContext ctx(c.p, c.a, c.s_eps, c.global_mult, mode, c.k_ceiling);
    if (ctx.exploratory_warning())
        std::cerr << "warning: (p=" << c.p << ", a=" << c.a << ") lies outside the strict hypotheses p >= 11, 2 <= a <= p-5\n";
    return ctx;
}

std::vector<WeightIndex> weights(const GhostContext& ctx, const RunConfig& c) {
    if (c.k) {
        if (!ctx.in_class(*c.k))
            throw ConfigError("k = " + std::to_string(*c.k) + " is not >= 2 with k = " + std::to_string(ctx.k_eps()) +
                              " mod " + std::to_string(ctx.p() - 1));
        return {ctx.weight(*c.k)};
    }
    if (c.k_range.empty()) throw ConfigError("give -k or --k-range lo:hi");
    auto colon = c.k_range.find(':');
    if (colon == std::string::npos) throw ConfigError("--k-range must look like lo:hi");
    std::int64_t lo, hi;
    try {
        lo = std::stoll(c.k_range.substr(0, colon));
        hi = std::stoll(c.k_range.substr(colon + 1));
    } catch (const std::exception&) {
        throw ConfigError("--k-range must look like lo:hi");
    }
    if (lo > hi) throw ConfigError("--k-range is empty");
    if (c.stride < 1) throw ConfigError("--stride must be positive");
    std::vector<WeightIndex> out;
    std::int64_t i = 0;
    for (std::int64_t k = std::max<std::int64_t>(lo, 2); k <= hi; ++k)
        if (ctx.in_class(k) && i++ % c.stride == 0) out.push_back(ctx.weight(k));
    if (out.empty()) throw ConfigError("no weight of the class in --k-range");
    return out;
}

// Memo directory from GHOST_SLOPES_CACHE; absent means no persistence.
class DiskMemo {
public:
    DiskMemo() {
        if (const char* dir = std::getenv("GHOST_SLOPES_CACHE"); dir && *dir) {
            dir_ = dir;
            std::error_code ec;
            fs::create_directories(dir_, ec);
            if (ec) dir_.clear();
        }
    }
    template <class F>
    Json get(const std::string& key, F compute) {
        if (dir_.empty()) return compute();
        fs::path file = fs::path(dir_) / (key + ".json");
        if (std::ifstream in(file); in) {
            try {
                return Json::parse(in);
            } catch (const std::exception&) {
                // unreadable entry: recompute and overwrite
            }
        }
        Json v = compute();
        fs::path tmp = file;
        tmp += ".tmp";
        if (std::ofstream out(tmp); out) {
            out << v.dump();
            out.close();
            std::error_code ec;
            fs::rename(tmp, file, ec);
        }
        return v;
    }

private:
    std::string dir_;
};

std::string key_of(const GhostContext& ctx, const std::string& what, std::int64_t k) {
    std::ostringstream os;
    os << what << "_p" << ctx.p() << "_a" << ctx.a() << "_e" << ctx.s_eps() << "_m" << ctx.global_mult() << "_k" << k;
    return os.str();
}

std::string join(const Json& arr) {
    std::string s;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (i) s += ", ";
        s += arr[i].is_string() ? arr[i].get<std::string>() : arr[i].dump();
    }
    return s;
}

int cmd_ghost(const RunConfig& c) {
    auto ctx = make_context(c);
    if (c.n < 0) throw ConfigError("-n must be >= 0");
    std::vector<GhostPolynomial> gs;
    for (std::int64_t n = 1; n <= c.n; ++n) gs.push_back(ghost_polynomial(ctx, n));
    if (c.format == "json") {
        std::cout << to_json(gs).dump(2) << "\n";
    } else if (c.format == "csv") {
        std::cout << "n,k,mult\n";
        for (const auto& g : gs)
            for (const auto& [k, m] : g.zeros) std::cout << g.n << ',' << k << ',' << m << "\n";
    } else {
        for (const auto& g : gs) std::cout << render_ghost(g) << "\n";
    }
    return ok;
}

int cmd_slopes(const RunConfig& c) {
    auto ctx = make_context(c);
    DiskMemo memo;
    std::optional<Valuation> radius;
    if (!c.radius.empty()) {
        if (c.radius == "inf") radius = Valuation::infinity();
        else {
            try {
                radius = Valuation(parse_rational(c.radius));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
            if (radius->value() <= 0) throw ConfigError("radius must be positive");
        }
    }
    Json all = Json::array();
    for (const auto& k : weights(ctx, c)) {
        Json j = memo.get(key_of(ctx, "derivative", k.k()), [&] { return to_json(*derivative_polygon(ctx, k)); });
        if (radius) {
            auto ns = k_newslopes(ctx, k, WeightPoint{k, *radius});
            j["radius"] = to_json(*radius);
            j["newslopes"] = rational_array(global_stretch(ns, ctx.global_mult()));
        }
        all.push_back(j);
    }
    if (c.format == "json") {
        std::cout << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
    } else if (c.format == "csv") {
        std::cout << "k,d_iw,d_ur,d_new,m_of_k,slope,mult\n";
        for (const auto& j : all)
            for (const auto& run : j["slopes"])
                std::cout << j["k"] << ',' << j["dims"][0] << ',' << j["dims"][1] << ',' << j["dims"][2] << ','
                          << j["m_of_k"].get<std::string>() << ',' << run[0].get<std::string>() << ',' << run[1] << "\n";
    } else {
        for (const auto& j : all) {
            std::cout << "k = " << j["k"] << "  dims (" << join(j["dims"]) << ")  M(k) = " << j["m_of_k"].get<std::string>()
                      << "\n  delta':    " << join(j["delta"]) << "\n  slopes:    ";
            bool first = true;
            for (const auto& run : j["slopes"]) {
                std::cout << (first ? "" : ", ") << run[0].get<std::string>() << " x" << run[1];
                first = false;
            }
            std::cout << "\n";
            if (j.contains("newslopes"))
                std::cout << "  newslopes at r = " << j["radius"].get<std::string>() << ": " << join(j["newslopes"]) << "\n";
        }
    }
    return ok;
}

int cmd_thresholds(const RunConfig& c) {
    auto ctx = make_context(c);
    DiskMemo memo;
    auto ks = weights(ctx, c);
    auto all = parallel_map(
        ks, [&](const WeightIndex& k) { return memo.get(key_of(ctx, "thresholds", k.k()), [&] { return to_json(k_thresholds(ctx, k)); }); },
        c.jobs);
    if (c.format == "json") {
        Json arr(all);
        std::cout << (all.size() == 1 ? all[0] : arr).dump(2) << "\n";
    } else if (c.format == "csv") {
        std::cout << "k,n,threshold,provenance\n";
        for (const auto& j : all)
            for (std::size_t n = 0; n < j["local"].size(); ++n)
                std::cout << j["k"] << ',' << n + 1 << ',' << j["local"][n].get<std::string>() << ','
                          << j["provenance"][n].get<std::string>() << "\n";
    } else {
        for (const auto& j : all)
            std::cout << "k = " << j["k"] << "\n  thresholds: " << join(j["local"]) << "\n  provenance: " << join(j["provenance"])
                      << "\n  global multiplicity: " << j["global_mult"] << "\n";
    }
    return ok;
}

int cmd_predict(const RunConfig& c) {
    auto ctx = make_context(c);
    DiskMemo memo;
    auto ks = weights(ctx, c);
    auto all = parallel_map(
        ks, [&](const WeightIndex& k) { return memo.get(key_of(ctx, "predict", k.k()), [&] { return to_json(predict_slopes(ctx, k)); }); },
        c.jobs);
    if (c.format == "json") {
        Json arr(all);
        std::cout << (all.size() == 1 ? all[0] : arr).dump(2) << "\n";
    } else if (c.format == "csv") {
        std::cout << "k,slope,mult,exceptional,floor\n";
        for (const auto& j : all)
            for (const auto& run : j["linv_known"])
                std::cout << j["k"] << ',' << run[0].get<std::string>() << ',' << run[1] << ',' << j["exceptional"] << ','
                          << j["floor"].get<std::string>() << "\n";
    } else {
        for (const auto& j : all) {
            std::cout << "k = " << j["k"] << "\n  known L-invariant slopes: ";
            bool first = true;
            for (const auto& run : j["linv_known"]) {
                std::cout << (first ? "" : ", ") << run[0].get<std::string>() << " x" << run[1];
                first = false;
            }
            std::cout << "\n  exceptional: " << j["exceptional"] << " (each >= " << j["floor"].get<std::string>() << ")\n";
        }
    }
    return ok;
}

int cmd_dist(const RunConfig& c) {
    auto ctx = make_context(c);
    if (c.n < 1) throw ConfigError("-n must be >= 1 for moments");
    SampleKind kind;
    try {
        kind = parse_kind(c.kind);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    auto ks = weights(ctx, c);
    auto samples = sample_range(ctx, ks, kind, c.include_exceptional, c.jobs);
    std::vector<DistributionSample> nonempty;
    for (auto& s : samples)
        if (!s.values.empty()) nonempty.push_back(std::move(s));
    if (nonempty.empty()) throw DomainError("every sample in the range is empty");

    if (c.format == "csv") {
        std::cout << kMomentCsvHeader << "\n";
        for (const auto& s : nonempty)
            for (std::int64_t n = 1; n <= c.n; ++n) std::cout << moment_csv_row(s, n, c.precision) << "\n";
        return ok;
    }
    Json rows = Json::array();
    for (const auto& s : nonempty) {
        Json m = Json::object();
        for (std::int64_t n = 1; n <= c.n; ++n) m[std::to_string(n)] = to_string(s.moment(n));
        rows.push_back({{"k", s.k.k()}, {"size", s.values.size()}, {"moments", m}, {"discrepancy", to_string(discrepancy(s))}});
    }
    Json trend = Json::array();
    if (nonempty.size() >= 3)
        for (const auto& t : weyl_moments(nonempty, c.n))
            trend.push_back({{"n", t.n},
                             {"target", to_string(t.target)},
                             {"error_first", to_string(t.error_first)},
                             {"error_first_decimal", decimal(t.error_first, c.precision)},
                             {"error_last", to_string(t.error_last)},
                             {"error_last_decimal", decimal(t.error_last, c.precision)},
                             {"monotone_tail", t.monotone_tail}});
    if (c.format == "json") {
        std::cout << Json{{"kind", kind_name(kind)}, {"samples", rows}, {"trend", trend}}.dump(2) << "\n";
    } else {
        for (const auto& s : nonempty) {
            std::cout << "k = " << s.k.k() << "  size " << s.values.size() << "  discrepancy " << decimal(discrepancy(s), c.precision);
            for (std::int64_t n = 1; n <= c.n; ++n) std::cout << "  m" << n << " " << decimal(s.moment(n), c.precision);
            std::cout << "\n";
        }
        for (const auto& t : trend)
            std::cout << "moment " << t["n"] << ": |error| " << t["error_first_decimal"].get<std::string>() << " -> "
                      << t["error_last_decimal"].get<std::string>() << (t["monotone_tail"].get<bool>() ? "  (monotone tail)" : "")
                      << "\n";
    }
    return ok;
}

int cmd_verify(const RunConfig& c) {
    auto ctx = make_context(c);
    std::cout << "seed " << c.seed << "\n";
    std::int64_t k_max = c.k ? *c.k : 2000;
    bool all_ok = true;
    for (const auto& o : verify::Suite(ctx, c.seed, k_max).run()) {
        std::cout << (o.ok ? "PASS " : "FAIL ") << o.name << (o.ok ? "" : ": " + o.detail) << "\n";
        all_ok = all_ok && o.ok;
    }
    return all_ok ? ok : verify_failure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ghost-series slopes, thresholds and L-invariant predictions"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig c;
    app.add_option("-p", c.p, "prime p")->capture_default_str();
    app.add_option("-a", c.a, "the parameter a")->capture_default_str();
    app.add_option("-e", c.s_eps, "s_eps of the weight disc")->capture_default_str();
    app.add_option("-m", c.global_mult, "global multiplicity")->capture_default_str();
    app.add_option("-k", c.k, "weight k");
    app.add_option("--k-range", c.k_range, "weights lo:hi");
    app.add_option("--stride", c.stride, "take every stride-th weight of the range")->capture_default_str();
    app.add_option("-n", c.n, "ghost count, or the largest moment")->capture_default_str();
    app.add_option("-r", c.radius, "radius as num/den, an integer, or inf");
    app.add_option("--format", c.format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}))->capture_default_str();
    app.add_option("--seed", c.seed, "seed for property checks")->capture_default_str();
    app.add_option("--jobs", c.jobs, "worker threads, 0 = all cores")->capture_default_str();
    app.add_option("--mode", c.mode, "strict or exploratory")->capture_default_str();
    app.add_option("--k-ceiling", c.k_ceiling, "largest weight any scan may reach")->capture_default_str();
    app.add_option("--kind", c.kind, "threshold, derivative or linv")->capture_default_str();
    app.add_flag("--include-exceptional", c.include_exceptional, "LINV samples keep the exceptional block at its floor");
    app.add_option("--precision", c.precision, "digits in decimal columns")->capture_default_str();

    int code = ok;
    auto wrap = [&](int (*f)(const RunConfig&)) {
        return [&, f] { code = f(c); };
    };
    app.add_subcommand("ghost", "ghost polynomials g_1..g_n")->callback(wrap(cmd_ghost));
    app.add_subcommand("slopes", "derivative polygon, and k-newslopes at radius -r")->callback(wrap(cmd_slopes));
    app.add_subcommand("thresholds", "k-thresholds with provenance")->callback(wrap(cmd_thresholds));
    app.add_subcommand("predict", "predicted L-invariant slopes")->callback(wrap(cmd_predict));
    app.add_subcommand("dist", "normalized samples, moments and discrepancy")->callback(wrap(cmd_dist));
    app.add_subcommand("verify", "run the invariant checks")->callback(wrap(cmd_verify));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? ok : bad_config;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return bad_config;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return domain_failure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return bad_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return domain_failure;
    }
    return code;
}
