#include "landau/cli_io.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "landau/effective_operator.hpp"
#include "landau/model.hpp"
#include "landau/resonance_search.hpp"
#include "landau/ssf_breit_wigner.hpp"
#include "landau/util.hpp"

namespace landau {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct CliError : std::runtime_error {
    int code;  // 1 validation, 2 numerical
    std::string kind;
    std::string field;
    CliError(int c, std::string k, const std::string& msg, std::string f = "")
        : std::runtime_error(msg), code(c), kind(std::move(k)), field(std::move(f)) {}
};

struct RunContext {
    ValidatedConfig cfg;
    fs::path out_dir;
    std::string subcommand;
    std::string parameters;  // canonical parameter string for the cache key
    bool use_cache = true;
    fs::path cache_root;
    std::vector<std::string> outputs;
};

std::string now_iso() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

std::string cache_key(const RunContext& ctx) {
    return hex64(fnv1a(ctx.cfg.config_hash() + "|" + ctx.subcommand + "|" + ctx.parameters));
}

void write_manifest(const RunContext& ctx, const fs::path& dir) {
    json m;
    m["config_hash"] = ctx.cfg.config_hash();
    m["subcommand"] = ctx.subcommand;
    m["parameters"] = ctx.parameters;
    m["tool_version"] = kToolVersion;
    m["timestamp"] = now_iso();
    m["outputs"] = ctx.outputs;
    std::ofstream f(dir / "manifest.json");
    f << m.dump(2) << "\n";
}

// Returns true when a valid cache entry was replayed into out_dir.
bool cache_lookup(const RunContext& ctx) {
    if (!ctx.use_cache) return false;
    const fs::path entry = ctx.cache_root / cache_key(ctx);
    if (!fs::exists(entry / "manifest.json")) return false;
    try {
        json m = json::parse(std::ifstream(entry / "manifest.json"));
        for (const auto& name : m.at("outputs").get<std::vector<std::string>>())
            if (!fs::exists(entry / name)) throw std::runtime_error("missing artifact");
        fs::create_directories(ctx.out_dir);
        for (const auto& name : m.at("outputs").get<std::vector<std::string>>())
            fs::copy_file(entry / name, ctx.out_dir / name, fs::copy_options::overwrite_existing);
        fs::copy_file(entry / "manifest.json", ctx.out_dir / "manifest.json",
                      fs::copy_options::overwrite_existing);
        return true;
    } catch (const std::exception& e) {
        std::cerr << "{\"warning\":\"corrupt cache entry treated as miss: " << e.what()
                  << "\"}\n";
        return false;
    }
}

void cache_store(const RunContext& ctx) {
    if (!ctx.use_cache) return;
    const fs::path entry = ctx.cache_root / cache_key(ctx);
    std::error_code ec;
    fs::create_directories(entry, ec);
    if (ec) return;
    for (const auto& name : ctx.outputs)
        fs::copy_file(ctx.out_dir / name, entry / name, fs::copy_options::overwrite_existing, ec);
    write_manifest(ctx, entry);
}

std::ofstream open_output(RunContext& ctx, const std::string& name) {
    fs::create_directories(ctx.out_dir);
    ctx.outputs.push_back(name);
    std::ofstream f(ctx.out_dir / name);
    if (!f) throw CliError(1, "validation", "cannot write output file " + name, "--out");
    return f;
}

std::vector<double> parse_window(const std::string& spec) {
    // "a:b:n" -> n+1 uniform samples on [a, b]
    double a = 0, b = 0;
    int n = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(spec);
    if (!(ss >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1)
        throw CliError(1, "validation", "bad --window spec '" + spec + "' (want a:b:n)",
                       "--window");
    std::vector<double> g;
    g.reserve(n + 1);
    for (int i = 0; i <= n; ++i) g.push_back(a + (b - a) * i / n);
    return g;
}

// ------------------------------------------------------------- subcommands

void run_toeplitz_spectrum(RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    ToeplitzSpectrum spec =
        toeplitz_spectrum(cfg.field.q, cfg.potential.radial, cfg.field.b, cfg.trunc);
    auto f = open_output(ctx, "toeplitz_spectrum.csv");
    f << "l,lambda\n";
    for (const auto& [l, lam] : spec.eigenvalues)
        f << l << "," << fmt_double(lam) << "\n";
    if (!spec.floor_reached)
        std::cerr << "{\"warning\":\"truncation floor not reached within l_max\"}\n";

    std::vector<double> s_grid;
    for (int i = 0; i <= 48; ++i) s_grid.push_back(std::pow(10.0, -8.0 + 6.0 * i / 48.0));
    CountingReport rep =
        counting_functions(spec, s_grid, &cfg.potential.radial, cfg.field.b);
    auto g = open_output(ctx, "counting.csv");
    g << "s,n_plus,sigma1,sigma2,ntilde1,ntilde2,law_predicted\n";
    for (const auto& c : rep.samples)
        g << fmt_double(c.s) << "," << fmt_double(c.n_plus) << "," << fmt_double(c.sigma1)
          << "," << fmt_double(c.sigma2) << "," << fmt_double(c.ntilde1) << ","
          << fmt_double(c.ntilde2) << "," << fmt_double(c.law_predicted) << "\n";
}

void run_resonances(RunContext& ctx, const std::string& region_spec) {
    const auto& cfg = ctx.cfg;
    auto region = Region::parse(region_spec);
    if (!region)
        throw CliError(1, "validation", "bad --region spec '" + region_spec + "'", "--region");
    const double disk = std::sqrt(2.0 * cfg.field.b);
    SectorBasis basis = SectorBasis::build(cfg);
    SearchOptions sopt;
    sopt.zq_level = 2.0 * cfg.field.b * cfg.field.q;
    sopt.domain_r_min = 1e-3 * disk;
    sopt.domain_r_max = (1.0 - 1e-3) * disk;
    std::vector<Resonance> res;
    try {
        res = locate_resonances(det_field(basis), *region, sopt);
    } catch (const std::exception& e) {
        throw CliError(2, "numerical", e.what());
    }
    auto f = open_output(ctx, "resonances.json");
    json out = json::array();
    for (const auto& r : res) {
        out.push_back({{"re_k", r.k.real()},
                       {"im_k", r.k.imag()},
                       {"re_z", r.z.real()},
                       {"im_z", r.z.imag()},
                       {"multiplicity", r.multiplicity},
                       {"residual", std::exp(r.residual_log_abs)},
                       {"refined", r.refined}});
    }
    f << out.dump(2) << "\n";
}

void run_census(RunContext& ctx, const std::string& region_spec) {
    const auto& cfg = ctx.cfg;
    // region spec "dyadic:r0:n" -> annuli r0 * 2^{-i}, i = 0..n-1
    double r0 = 0.2 * std::sqrt(2.0 * cfg.field.b);
    int n = 4;
    if (!region_spec.empty()) {
        std::istringstream ss(region_spec);
        std::string tag;
        std::getline(ss, tag, ':');
        if (tag != "dyadic")
            throw CliError(1, "validation", "census wants --region dyadic:r0:n", "--region");
        char c = 0;
        if (!(ss >> r0 >> c >> n) || c != ':' || n < 1 || r0 <= 0)
            throw CliError(1, "validation", "census wants --region dyadic:r0:n", "--region");
    }
    SectorBasis basis = SectorBasis::build(cfg);
    RadialProfile wprof = cfg.potential.radial;
    ToeplitzSpectrum uspec = toeplitz_spectrum(cfg.field.q, wprof, cfg.field.b, cfg.trunc);
    ToeplitzSpectrum wspec = uspec;
    for (auto& p : wspec.eigenvalues) p.second *= cfg.potential.w_amplitude();
    std::vector<double> r_list;
    for (int i = 0; i < n; ++i) r_list.push_back(r0 * std::pow(2.0, -i));
    std::vector<AnnulusCensusRow> rows;
    try {
        rows = annulus_census(det_field(basis), r_list, wspec);
    } catch (const std::exception& e) {
        throw CliError(2, "numerical", e.what());
    }
    auto f = open_output(ctx, "census.csv");
    f << "r,count,n_plus,bound,band_bound\n";
    for (const auto& row : rows)
        f << fmt_double(row.r) << "," << row.count << "," << fmt_double(row.n_plus) << ","
          << fmt_double(row.bound) << "," << fmt_double(row.band_bound) << "\n";
}

void run_ssf(RunContext& ctx, const std::string& window_spec) {
    const auto& cfg = ctx.cfg;
    if (window_spec.empty())
        throw CliError(1, "validation", "ssf needs --window a:b:n", "--window");
    std::vector<double> grid = parse_window(window_spec);
    SectorBasis basis = SectorBasis::build(cfg);
    RadialProfile u = cfg.potential.radial;
    ToeplitzSpectrum wspec = toeplitz_spectrum(cfg.field.q, u, cfg.field.b, cfg.trunc);
    for (auto& p : wspec.eigenvalues) p.second *= cfg.potential.w_amplitude();
    SSFTrace tr;
    try {
        tr = trace_ssf(basis, grid);
    } catch (const std::exception& e) {
        throw CliError(2, "numerical", e.what());
    }
    const double level = 2.0 * cfg.field.b * cfg.field.q;
    auto f = open_output(ctx, "ssf.csv");
    f << "lambda,xi2,correction,xi,phi\n";
    for (const auto& p : tr.pts) {
        const double lam_rel = p.lambda - level;
        const double phi = lam_rel > 0 ? phi_lambda(lam_rel, wspec) : 0.0;
        f << fmt_double(p.lambda) << "," << fmt_double(p.xi2) << ","
          << fmt_double(p.correction) << "," << fmt_double(p.xi) << "," << fmt_double(phi)
          << "\n";
    }
}

void run_bw_check(RunContext& ctx, const std::string& window_spec,
                  const std::string& region_spec) {
    const auto& cfg = ctx.cfg;
    if (window_spec.empty())
        throw CliError(1, "validation", "bw-check needs --window a:b:n", "--window");
    std::vector<double> grid = parse_window(window_spec);
    SectorBasis basis = SectorBasis::build(cfg);
    const double disk = std::sqrt(2.0 * cfg.field.b);
    Region region = Region::annulus(1e-3 * disk, 0.9 * disk);
    if (!region_spec.empty()) {
        auto r = Region::parse(region_spec);
        if (!r) throw CliError(1, "validation", "bad --region spec", "--region");
        region = *r;
    }
    SearchOptions sopt;
    sopt.zq_level = 2.0 * cfg.field.b * cfg.field.q;
    sopt.domain_r_min = 1e-3 * disk;
    sopt.domain_r_max = (1.0 - 1e-3) * disk;
    try {
        std::vector<Resonance> res = locate_resonances(det_field(basis), region, sopt);
        BWDecomposition bw = breit_wigner_residual(basis, grid, res);
        auto f = open_output(ctx, "bw.csv");
        f << "mu,xi_prime,lorentzian_sum,residual\n";
        for (std::size_t i = 0; i < bw.mu.size(); ++i)
            f << fmt_double(bw.mu[i]) << "," << fmt_double(bw.xi_prime[i]) << ","
              << fmt_double(bw.lorentz_sum[i]) << "," << fmt_double(bw.residual[i]) << "\n";
        auto g = open_output(ctx, "bw_summary.json");
        json s;
        s["max_abs_residual"] = bw.max_abs_residual;
        s["smoothness"] = bw.smoothness;
        s["bound_scale"] = bw.bound_scale;
        s["resonances_used"] = bw.used.size();
        g << s.dump(2) << "\n";
    } catch (const CliError&) {
        throw;
    } catch (const std::exception& e) {
        throw CliError(2, "numerical", e.what());
    }
}

void run_trace_formula(RunContext& ctx, const std::string& window_spec, double tf_scale) {
    const auto& cfg = ctx.cfg;
    if (window_spec.empty())
        throw CliError(1, "validation", "trace-formula needs --window w1:w2:unused", "--window");
    std::vector<double> w = parse_window(window_spec);
    const double w1 = w.front(), w2 = w.back();
    BumpWindow bump;
    bump.w1 = w1;
    bump.w2 = w2;
    const double pad = 0.35 * (w2 - w1);
    bump.o1 = w1 - pad;
    bump.o2 = w2 + pad;
    SectorBasis basis = SectorBasis::build(cfg);
    const double disk = std::sqrt(2.0 * cfg.field.b);
    SearchOptions sopt;
    sopt.zq_level = 2.0 * cfg.field.b * cfg.field.q;
    sopt.domain_r_min = 1e-3 * disk;
    sopt.domain_r_max = (1.0 - 1e-3) * disk;
    try {
        RadialProfile u = cfg.potential.radial;
        ToeplitzSpectrum wspec = toeplitz_spectrum(cfg.field.q, u, cfg.field.b, cfg.trunc);
        for (auto& p : wspec.eigenvalues) p.second *= cfg.potential.w_amplitude();
        Region region = Region::annulus(1e-3 * disk, 0.9 * disk);
        std::vector<Resonance> res = locate_resonances(det_field(basis), region, sopt);
        TestFunction f;
        f.a = 1.0;
        TraceFormulaResult tr =
            trace_formula_check(basis, f, bump, tf_scale, res, wspec);
        auto g = open_output(ctx, "trace_formula.json");
        json s;
        s["lhs"] = tr.lhs;
        s["rhs"] = tr.rhs;
        s["error_bound"] = tr.error_bound;
        s["resonances_used"] = tr.resonances_used;
        s["pass"] = std::abs(tr.lhs - tr.rhs) <= tr.error_bound;
        g << s.dump(2) << "\n";
    } catch (const CliError&) {
        throw;
    } catch (const std::exception& e) {
        throw CliError(2, "numerical", e.what());
    }
}

void run_asymptotics_fit(RunContext& ctx) {
    const auto& cfg = ctx.cfg;
    ToeplitzSpectrum spec =
        toeplitz_spectrum(cfg.field.q, cfg.potential.radial, cfg.field.b, cfg.trunc);
    std::vector<double> s_grid;
    for (int i = 0; i <= 40; ++i) s_grid.push_back(std::pow(10.0, -6.0 + 4.0 * i / 40.0));
    CountingReport rep = counting_functions(spec, s_grid, &cfg.potential.radial, cfg.field.b);
    CountingFit fit;
    try {
        fit = fit_counting_exponent(rep, cfg.potential.radial.kind);
    } catch (const std::exception& e) {
        throw CliError(2, "numerical", e.what());
    }
    auto f = open_output(ctx, "asymptotics_fit.json");
    json s;
    s["slope"] = fit.slope;
    s["prefactor"] = fit.prefactor;
    s["residual"] = fit.residual;
    f << s.dump(2) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Resonances of the 3D magnetic Schrodinger operator near Landau levels"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", region_spec, window_spec;
    int threads = 1;
    bool no_cache = false;
    double epsilon_override = -1.0;
    double tf_scale = 0.05;
    app.add_option("--config", config_path, "config JSON path")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker pool size");
    app.add_flag("--no-cache", no_cache, "disable the result cache");
    app.add_option("--region", region_spec, "region spec (annulus:r1:r2 | sector:... | box:...)");
    app.add_option("--window", window_spec, "window spec a:b:n");
    app.add_option("--epsilon", epsilon_override, "override the coupling");
    app.add_option("--tf-scale", tf_scale, "trace-formula window scale r");

    for (const char* name : {"toeplitz-spectrum", "resonances", "census", "ssf", "bw-check",
                             "trace-formula", "asymptotics-fit"})
        app.add_subcommand(name);

    std::vector<const char*> argv;
    argv.push_back("landau-res");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (app.exit(e) == 0) return 0;
        std::cerr << "{\"error\":{\"code\":1,\"kind\":\"validation\",\"message\":\"bad "
                     "arguments\"}}\n";
        return 1;
    }

    try {
        std::ifstream cf(config_path);
        if (!cf) throw CliError(1, "validation", "cannot read config " + config_path, "--config");
        std::stringstream buf;
        buf << cf.rdbuf();
        RunContext ctx;
        try {
            ctx.cfg = config_from_string(buf.str());
        } catch (const ConfigError& e) {
            throw CliError(1, "validation", e.what(), e.field);
        }
        if (epsilon_override >= 0.0) ctx.cfg.potential.coupling = epsilon_override;
        set_global_threads(threads);
        ctx.out_dir = out_dir;
        ctx.subcommand = app.get_subcommands().front()->get_name();
        ctx.parameters = "region=" + region_spec + ";window=" + window_spec +
                         ";tf=" + fmt_double(tf_scale) +
                         ";eps=" + fmt_double(ctx.cfg.potential.coupling);
        ctx.use_cache = !no_cache;
        const char* env = std::getenv("LANDAU_RES_CACHE");
        ctx.cache_root = env ? fs::path(env) : (fs::path(out_dir) / ".cache");

        if (cache_lookup(ctx)) return 0;

        if (ctx.subcommand == "toeplitz-spectrum") run_toeplitz_spectrum(ctx);
        else if (ctx.subcommand == "resonances") run_resonances(ctx, region_spec);
        else if (ctx.subcommand == "census") run_census(ctx, region_spec);
        else if (ctx.subcommand == "ssf") run_ssf(ctx, window_spec);
        else if (ctx.subcommand == "bw-check") run_bw_check(ctx, window_spec, region_spec);
        else if (ctx.subcommand == "trace-formula") run_trace_formula(ctx, window_spec, tf_scale);
        else if (ctx.subcommand == "asymptotics-fit") run_asymptotics_fit(ctx);

        write_manifest(ctx, ctx.out_dir);
        cache_store(ctx);
        return 0;
    } catch (const CliError& e) {
        json err = {{"error",
                     {{"code", e.code}, {"kind", e.kind}, {"message", e.what()},
                      {"field", e.field}}}};
        std::cerr << err.dump() << "\n";
        return e.code;
    } catch (const ThresholdError& e) {
        json err = {{"error", {{"code", 2}, {"kind", "numerical"}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        json err = {{"error", {{"code", 2}, {"kind", "numerical"}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 2;
    }
}

}  // namespace landau
