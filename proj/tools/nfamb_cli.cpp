// Command-line front end: curves and tables as CSV/JSON files.

#include <CLI11.hpp>
#include <json.hpp>

#include <nfamb/nfamb.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fs = std::filesystem;
using namespace nfamb;
using nlohmann::json;

namespace {

/// Collects output files in memory and writes them together, removing any written file if a
/// later one fails.
class Outputs {
public:
    explicit Outputs(std::string dir) : dir_(std::move(dir)) {}

    void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }

    void commit()
    {
        std::vector<fs::path> written;
        try {
            if (!dir_.empty())
                fs::create_directories(dir_);
            for (const auto& [name, content] : files_) {
                const fs::path p = fs::path(dir_) / name;
                std::ofstream os(p, std::ios::binary);
                if (!os)
                    throw Error("cannot open " + p.string());
                written.push_back(p);
                os << content;
                os.close();
                if (!os)
                    throw Error("failed writing " + p.string());
            }
        } catch (...) {
            for (const auto& p : written) {
                std::error_code ec;
                fs::remove(p, ec);
            }
            throw;
        }
        for (const auto& [name, _] : files_)
            std::cout << (fs::path(dir_) / name).string() << '\n';
    }

private:
    std::string dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

std::vector<ArrayKind> kinds_from(const std::vector<std::string>& names, bool all)
{
    if (all || names.empty())
        return {all_kinds.begin(), all_kinds.end()};
    std::vector<ArrayKind> out;
    for (const auto& n : names)
        out.push_back(parse_kind(n));
    return out;
}

std::vector<Mode> modes_from(const std::vector<std::string>& names)
{
    if (names.empty())
        return {all_modes.begin(), all_modes.end()};
    std::vector<Mode> out;
    for (const auto& n : names)
        out.push_back(parse_mode(n));
    return out;
}

std::vector<WindowKind> windows_from(const std::vector<std::string>& names)
{
    if (names.empty())
        return {all_windows.begin(), all_windows.end()};
    std::vector<WindowKind> out;
    for (const auto& n : names)
        out.push_back(parse_window(n));
    return out;
}

SensingConfig make_config(const ArrayGeometry& g, Mode m, double b_frac, std::size_t k, WindowKind w)
{
    return m == Mode::Mimo ? SensingConfig::mimo(g, b_frac, k, w) : SensingConfig::simo(g, b_frac, k, w);
}

json warnings_json(const AmbiguityCurve& c)
{
    json w = json::array();
    for (const auto& s : c.warnings)
        w.push_back(s);
    return w;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------------------------

struct AfArgs {
    std::vector<std::string> kinds;
    bool all_kinds = false;
    double d_ap = 50.0;
    double spacing = 0.5;
    double d_prime = 0.0;
    std::string mode = "simo";
    double span = 3.0;
    double step = 0.05;
};

void run_af(const AfArgs& a, Outputs& out, const std::string& hash, const std::string& format)
{
    const Mode mode = parse_mode(a.mode);
    std::ostringstream csv;
    write_curve_header(csv, hash, true);
    json summary = {{"config_hash", hash}, {"d_prime", a.d_prime}, {"aperture_d", a.d_ap},
                    {"mode", to_string(mode)}, {"curves", json::object()}};
    for (ArrayKind k : kinds_from(a.kinds, a.all_kinds)) {
        const auto g = build_array(k, a.d_ap, a.spacing);
        const double alpha = solve_alpha(k, mode);
        double half = a.span * beamdepth(a.d_ap, a.d_prime, alpha);
        if (!std::isfinite(half))
            half = a.span * a.d_prime;
        const auto grid = RadialGrid::uniform(a.d_prime, std::max(a.step, a.d_prime - half), a.d_prime + half,
                                              a.step, default_ray(k));
        const auto cfg = make_config(g, mode, 0.0, 1024, WindowKind::Rect);
        auto exact = ambiguity_exact(cfg, grid);
        exact.provenance = Provenance::Exact;
        const auto closed = af_only_closed(cfg, grid);
        write_curve_rows(csv, exact, to_string(k));
        write_curve_rows(csv, closed, to_string(k));
        summary["curves"][to_string(k)] = {{"elements", g.size()},
                                           {"alpha", alpha},
                                           {"db_rmse", json_num(db_rmse(exact, closed))},
                                           {"psl_exact_db", json_num(psl(exact))},
                                           {"psl_closed_db", json_num(psl(closed))},
                                           {"warnings", warnings_json(exact)}};
    }
    if (format == "json") {
        summary["csv"] = csv.str();
        out.add("af.json", dump(summary));
    } else {
        out.add("af_curves.csv", csv.str());
        out.add("af_summary.json", dump(summary));
    }
}

// ---------------------------------------------------------------------------------------------

struct CompareArgs {
    std::vector<std::string> kinds;
    bool all_kinds = false;
    std::string mode = "simo";
    double d_ap = 50.0;
    double spacing = 0.5;
    double d_prime = 0.0;
    std::size_t k = 1024;
    std::string window = "rect";
    std::vector<double> products;
    std::string af_source = "exact";
    double span = 3.0;
    double step = 0.05;
};

void run_compare(const CompareArgs& a, Outputs& out, const std::string& hash, const std::string& format)
{
    const Mode mode = parse_mode(a.mode);
    const WindowKind win = parse_window(a.window);
    const double d_prime = a.d_prime > 0.0 ? a.d_prime : 1.2 * a.d_ap;
    ApproxOptions opt;
    if (a.af_source == "exact")
        opt.af = AfSource::Exact;
    else if (a.af_source == "closed")
        opt.af = AfSource::ClosedForm;
    else
        throw InvalidInput("af-source must be exact or closed");
    std::ostringstream csv;
    write_curve_header(csv, hash, true);
    json panels = json::array();
    for (ArrayKind k : kinds_from(a.kinds, a.all_kinds)) {
        const auto g = build_array(k, a.d_ap, a.spacing);
        const double alpha = solve_alpha(k, mode);
        double half = a.span * beamdepth(a.d_ap, d_prime, alpha);
        if (!std::isfinite(half))
            half = a.span * d_prime;
        const auto grid = RadialGrid::uniform(d_prime, std::max(a.step, d_prime - half), d_prime + half, a.step,
                                              default_ray(k));
        const double limit = tabulated_constraint_limit(k, mode);
        std::vector<double> products = a.products;
        if (products.empty())
            products = {limit / 4.0, limit / 2.0, limit};
        for (double prod : products) {
            const double bf = prod / a.d_ap;
            const auto cfg = make_config(g, mode, bf, a.k, win);
            const auto exact = ambiguity_exact_ofdm(cfg, grid);
            const auto approx = ambiguity_approx(cfg, grid, opt);
            const std::string label = to_string(k) + ":" + format_num(prod);
            write_curve_rows(csv, exact, label);
            write_curve_rows(csv, approx, label);
            const auto rep = separability_constraint(k, mode, prod, 0.0);
            json panel = {{"kind", to_string(k)},   {"mode", to_string(mode)},
                          {"product", prod},        {"b_frac", bf},
                          {"d_prime", d_prime},     {"db_rmse", json_num(db_rmse(exact, approx))},
                          {"constraint", to_json(rep)}, {"warnings", warnings_json(exact)}};
            if (prod > limit)
                panel["warnings"].push_back("product exceeds the separability limit " + format_num(limit));
            panels.push_back(panel);
        }
    }
    json summary = {{"config_hash", hash}, {"panels", panels}};
    if (format == "json") {
        summary["csv"] = csv.str();
        out.add("compare.json", dump(summary));
    } else {
        out.add("compare_curves.csv", csv.str());
        out.add("compare_summary.json", dump(summary));
    }
}

// ---------------------------------------------------------------------------------------------

struct MetricsArgs {
    std::vector<std::string> tables;
    std::vector<std::string> curves;
    std::vector<double> d_aps;
    double eta = 1.01;
    std::size_t n_points = 200;
    double b_frac = 0.05;
};

void run_metrics(const MetricsArgs& a, Outputs& out, const std::string& hash, const std::string& format)
{
    std::vector<std::string> tables = a.tables;
    if (tables.empty() && a.curves.empty())
        tables = {"alpha", "constraint", "sizing"};
    const std::vector<double> d_aps = a.d_aps.empty() ? std::vector<double>{50.0, 25.0} : a.d_aps;
    json report = {{"config_hash", hash}};
    for (const auto& t : tables) {
        std::ostringstream csv;
        csv << "# config_hash=" << hash << '\n';
        if (t == "alpha") {
            csv << "kind,mode,alpha,bd_min\n";
            for (auto k : all_kinds)
                for (auto m : all_modes) {
                    const double al = solve_alpha(k, m);
                    csv << to_string(k) << ',' << to_string(m) << ',' << format_num(al) << ','
                        << format_num(bd_min_asymptotic(al)) << '\n';
                    report["alpha"][to_string(k)][to_string(m)] = {{"alpha", al}, {"bd_min", bd_min_asymptotic(al)}};
                }
        } else if (t == "constraint") {
            csv << "kind,mode,limit,recomputed_limit\n";
            for (auto k : all_kinds)
                for (auto m : all_modes) {
                    const auto r = separability_constraint(k, m);
                    csv << to_string(k) << ',' << to_string(m) << ',' << format_num(r.limit) << ','
                        << format_num(r.recomputed_limit) << '\n';
                    report["constraint"].push_back(to_json(r));
                }
        } else if (t == "sizing") {
            csv << "kind,mode,eta,alpha,d_min,bf_min,bf_d_product\n";
            for (auto k : all_kinds)
                for (auto m : all_modes) {
                    const double al = solve_alpha(k, m);
                    csv << to_string(k) << ',' << to_string(m) << ',' << format_num(a.eta) << ','
                        << format_num(al) << ',' << format_num(min_aperture(a.eta, al)) << ','
                        << format_num(min_fbw(a.eta, al)) << ',' << format_num(min_bf_d_product(a.eta)) << '\n';
                }
        } else if (t == "boundary") {
            csv << "kind,mode,d_ap,b_frac,boundary,boundary_clamped,nf_lower,nf_upper\n";
            for (double d : d_aps)
                for (auto k : all_kinds)
                    for (auto m : all_modes) {
                        const double al = solve_alpha(k, m);
                        const auto reg = nf_region(d, al);
                        csv << to_string(k) << ',' << to_string(m) << ',' << format_num(d) << ','
                            << format_num(a.b_frac) << ',' << format_num(boundary_nf_bw(d, a.b_frac, al)) << ','
                            << format_num(boundary_nf_bw_clamped(d, a.b_frac, al)) << ','
                            << format_num(reg.lower) << ',' << format_num(reg.upper) << '\n';
                    }
        } else {
            throw InvalidInput("unknown table: " + t);
        }
        out.add("table_" + t + ".csv", csv.str());
    }
    for (const auto& c : a.curves) {
        std::ostringstream csv;
        csv << "# config_hash=" << hash << '\n';
        if (c == "bd") {
            csv << "d_ap,kind,mode,d_prime,beamdepth\n";
            for (double d : d_aps)
                for (auto k : all_kinds)
                    for (auto m : all_modes) {
                        const double al = solve_alpha(k, m);
                        const auto reg = nf_region(d, al);
                        for (double dp : logspace(reg.lower, reg.upper, a.n_points))
                            csv << format_num(d) << ',' << to_string(k) << ',' << to_string(m) << ','
                                << format_num(dp) << ',' << format_num(beamdepth(d, dp, al)) << '\n';
                    }
        } else if (c == "fig6") {
            csv << "eta,bf_d_product\n";
            for (double e : logspace(1.001, 10.0, a.n_points))
                csv << format_num(e) << ',' << format_num(min_bf_d_product(e)) << '\n';
        } else {
            throw InvalidInput("unknown curve: " + c);
        }
        out.add("curve_" + c + ".csv", csv.str());
    }
    if (format == "json" || report.size() > 1)
        out.add("metrics.json", dump(report));
}

// ---------------------------------------------------------------------------------------------

struct MinBwArgs {
    std::vector<std::string> kinds;
    std::vector<std::string> modes;
    std::vector<std::string> windows;
    double eta = 1.01;
    std::size_t k = 1024;
    std::size_t n_distances = 64;
    bool curves = false;
};

void run_minbw(const MinBwArgs& a, Outputs& out, const std::string& hash)
{
    MinBwOptions opt;
    opt.eta = a.eta;
    opt.k_subcarriers = a.k;
    opt.n_distances = a.n_distances;
    std::ostringstream csv, curves;
    csv << "# config_hash=" << hash << '\n';
    csv << "kind,mode,window,aperture_d,target_psl_db,b_frac,ratio,worst_d_prime\n";
    write_curve_header(curves, hash, true);
    json rows = json::array();
    for (auto k : kinds_from(a.kinds, false))
        for (auto m : modes_from(a.modes))
            for (auto w : windows_from(a.windows)) {
                const auto r = min_bw_for_psl(k, m, w, opt);
                csv << to_string(k) << ',' << to_string(m) << ',' << to_string(w) << ','
                    << format_num(r.aperture_d) << ',' << format_num(r.target_psl_db) << ','
                    << format_num(r.b_frac) << ',' << format_num(r.ratio) << ',' << format_num(r.worst_d_prime)
                    << '\n';
                rows.push_back(to_json(r));
                if (a.curves && std::isfinite(r.b_frac)) {
                    const double alpha = solve_alpha(k, m);
                    const auto g = build_array(k, r.aperture_d, 0.5);
                    const auto cfg = make_config(g, m, r.b_frac, a.k, w);
                    const auto reg = nf_region(r.aperture_d, alpha);
                    for (double dp : logspace(reg.lower, reg.upper, 3)) {
                        const double half = 20.0 / (2.0 * r.b_frac);
                        const auto grid =
                            RadialGrid::uniform(dp, std::max(0.05, dp - half), dp + half, 0.05, default_ray(k));
                        write_curve_rows(curves, ambiguity_approx(cfg, grid),
                                         to_string(k) + ":" + to_string(m) + ":" + to_string(w) + ":" +
                                             format_num(dp));
                    }
                }
            }
    out.add("minbw.csv", csv.str());
    out.add("minbw.json", dump({{"config_hash", hash}, {"rows", rows}}));
    if (a.curves)
        out.add("minbw_curves.csv", curves.str());
}

struct SweepArgs {
    std::vector<std::string> metrics;
    std::vector<std::string> kinds;
    std::vector<std::string> modes;
    double d_ap = 50.0;
    std::string window = "rect";
    std::size_t k = 1024;
    std::size_t n_points = 48;
    std::vector<double> bfs;
    bool min_bw = false;
    std::vector<std::string> minbw_windows;
};

void run_sweep(const SweepArgs& a, Outputs& out, const std::string& hash)
{
    if (a.metrics.empty() && !a.min_bw)
        throw InvalidInput("sweep: give --metric and/or --min-bw");
    const WindowKind win = parse_window(a.window);
    for (const auto& metric : a.metrics) {
        std::ostringstream csv;
        csv << "# config_hash=" << hash << '\n';
        if (metric == "psl" || metric == "isl") {
            csv << "kind,mode,b_frac,d_prime,gain_db,composite_db,baseline_db,note\n";
            for (auto k : kinds_from(a.kinds, false)) {
                const double bf = matched_bandwidth(solve_alpha(k, Mode::SimoMiso));
                for (auto m : modes_from(a.modes)) {
                    GainSetup s;
                    s.kind = k;
                    s.mode = m;
                    s.aperture_d = a.d_ap;
                    s.b_frac = bf;
                    s.k_subcarriers = a.k;
                    s.window = win;
                    const auto reg = nf_region(a.d_ap, solve_alpha(k, m));
                    const auto pts = gain_vs_distance(
                        s, metric == "psl" ? SidelobeMetric::PSL : SidelobeMetric::ISL,
                        logspace(reg.lower, reg.upper, a.n_points));
                    for (const auto& p : pts)
                        csv << to_string(k) << ',' << to_string(m) << ',' << format_num(bf) << ','
                            << format_num(p.d_prime) << ',' << format_num(p.gain_db) << ','
                            << format_num(p.composite_db) << ',' << format_num(p.baseline_db) << ',' << p.note
                            << '\n';
                }
            }
        } else if (metric == "res") {
            csv << "kind,mode,b_frac,d_prime,width,beamdepth,bandwidth_res\n";
            const std::vector<double> bfs = a.bfs.empty() ? std::vector<double>{0.01, 0.05} : a.bfs;
            for (auto k : kinds_from(a.kinds, false))
                for (auto m : modes_from(a.modes))
                    for (double bf : bfs) {
                        const auto reg = nf_region(a.d_ap, solve_alpha(k, m));
                        const auto pts = resolution_vs_distance(k, m, a.d_ap, bf,
                                                                logspace(reg.lower, reg.upper, a.n_points), 0.5, a.k);
                        for (const auto& p : pts)
                            csv << to_string(k) << ',' << to_string(m) << ',' << format_num(bf) << ','
                                << format_num(p.d_prime) << ',' << format_num(p.width) << ','
                                << format_num(p.beamdepth) << ',' << format_num(p.bandwidth_res) << '\n';
                    }
        } else {
            throw InvalidInput("unknown sweep metric: " + metric);
        }
        out.add("sweep_" + metric + ".csv", csv.str());
    }
    if (a.min_bw) {
        MinBwArgs m;
        m.kinds = a.kinds;
        m.modes = a.modes;
        m.windows = a.minbw_windows;
        m.k = a.k;
        run_minbw(m, out, hash);
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Near-field range ambiguity toolkit"};
    app.allow_config_extras(false);
    app.set_config("--config", "", "Key-value config file (INI sections per subcommand)");
    app.require_subcommand(1);
    std::string out_dir = ".";
    std::string format = "csv";
    app.add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    AfArgs af;
    auto* c_af = app.add_subcommand("af", "Exact and closed-form array factors");
    c_af->add_option("--kind", af.kinds, "Geometry (ULA, UCA, URA, UPCA); repeatable");
    c_af->add_flag("--all-kinds", af.all_kinds, "All four geometries");
    c_af->add_option("--d-ap", af.d_ap, "Aperture in wavelengths")->capture_default_str();
    c_af->add_option("--spacing", af.spacing, "Element spacing in wavelengths")->capture_default_str();
    c_af->add_option("--d-prime", af.d_prime, "Target distance in wavelengths")->required();
    c_af->add_option("--mode", af.mode, "simo or mimo")->capture_default_str();
    c_af->add_option("--span", af.span, "Half-width in beamdepths")->capture_default_str();
    c_af->add_option("--step", af.step, "Grid step in wavelengths")->capture_default_str();

    CompareArgs cmp;
    auto* c_cmp = app.add_subcommand("compare", "Exact OFDM matched filter vs separable approximation");
    c_cmp->add_option("--kind", cmp.kinds, "Geometry; repeatable");
    c_cmp->add_flag("--all-kinds", cmp.all_kinds, "All four geometries");
    c_cmp->add_option("--mode", cmp.mode, "simo or mimo")->capture_default_str();
    c_cmp->add_option("--d-ap", cmp.d_ap, "Aperture in wavelengths")->capture_default_str();
    c_cmp->add_option("--spacing", cmp.spacing, "Element spacing")->capture_default_str();
    c_cmp->add_option("--d-prime", cmp.d_prime, "Target distance (default 1.2 D)");
    c_cmp->add_option("--k", cmp.k, "Subcarriers")->capture_default_str();
    c_cmp->add_option("--window", cmp.window, "rect, hamming, hann, blackman")->capture_default_str();
    c_cmp->add_option("--product", cmp.products, "B_f D products (default limit/4, limit/2, limit)");
    c_cmp->add_option("--af-source", cmp.af_source, "exact or closed")->capture_default_str();
    c_cmp->add_option("--span", cmp.span, "Half-width in beamdepths")->capture_default_str();
    c_cmp->add_option("--step", cmp.step, "Grid step in wavelengths")->capture_default_str();

    MetricsArgs met;
    auto* c_met = app.add_subcommand("metrics", "Tables and beamdepth curves");
    c_met->add_option("--table", met.tables, "alpha, constraint, sizing, boundary; repeatable");
    c_met->add_option("--curve", met.curves, "bd or fig6; repeatable");
    c_met->add_option("--d-ap", met.d_aps, "Apertures for curves; repeatable");
    c_met->add_option("--eta", met.eta, "Resolution fraction")->capture_default_str();
    c_met->add_option("--n-points", met.n_points, "Samples per curve")->capture_default_str();
    c_met->add_option("--bf", met.b_frac, "Fractional bandwidth for the boundary table")->capture_default_str();

    SweepArgs sw;
    auto* c_sw = app.add_subcommand("sweep", "Distance sweeps of gains and resolution");
    c_sw->add_option("--metric", sw.metrics, "psl, isl, res; repeatable");
    c_sw->add_option("--kind", sw.kinds, "Geometry; repeatable");
    c_sw->add_option("--mode", sw.modes, "simo or mimo; repeatable");
    c_sw->add_option("--d-ap", sw.d_ap, "Aperture in wavelengths")->capture_default_str();
    c_sw->add_option("--window", sw.window, "Window for gain curves")->capture_default_str();
    c_sw->add_option("--k", sw.k, "Subcarriers")->capture_default_str();
    c_sw->add_option("--n-points", sw.n_points, "Distances per curve")->capture_default_str();
    c_sw->add_option("--bf", sw.bfs, "Fractional bandwidths for --metric res");
    c_sw->add_flag("--min-bw", sw.min_bw, "Also emit minimum-bandwidth tables");
    c_sw->add_option("--min-bw-window", sw.minbw_windows, "Windows for --min-bw; repeatable");

    MinBwArgs mb;
    auto* c_mb = app.add_subcommand("minbw", "Minimum bandwidth for far-field PSL");
    c_mb->add_option("--kind", mb.kinds, "Geometry; repeatable");
    c_mb->add_option("--mode", mb.modes, "simo or mimo; repeatable");
    c_mb->add_option("--window", mb.windows, "Window; repeatable");
    c_mb->add_option("--eta", mb.eta, "Aperture sizing fraction")->capture_default_str();
    c_mb->add_option("--k", mb.k, "Subcarriers")->capture_default_str();
    c_mb->add_option("--n-distances", mb.n_distances, "Distances across the near field")->capture_default_str();
    c_mb->add_flag("--curves", mb.curves, "Also write composite curves at the found bandwidth");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 2;
    }

    try {
        Outputs out(out_dir);
        CLI::App* sub = app.get_subcommands().front();
        const std::string hash = config_hash(sub->get_name() + "\n" + sub->config_to_str(true, false));
        if (sub == c_af)
            run_af(af, out, hash, format);
        else if (sub == c_cmp)
            run_compare(cmp, out, hash, format);
        else if (sub == c_met)
            run_metrics(met, out, hash, format);
        else if (sub == c_sw)
            run_sweep(sw, out, hash);
        else if (sub == c_mb)
            run_minbw(mb, out, hash);
        out.commit();
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
