// lerwlab: Monte Carlo laboratory for loop-erased random walk and radial
// SLE(2). Every experiment writes a CSV with a header row plus a JSON run
// manifest next to it; results depend on (seed, samples) but never on the
// worker count.

#include <chrono>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lerw/curve.hpp"
#include "lerw/errors.hpp"
#include "lerw/estimators.hpp"
#include "lerw/green.hpp"
#include "lerw/io.hpp"
#include "lerw/loewner.hpp"
#include "lerw/measure.hpp"
#include "lerw/parallel.hpp"
#include "lerw/walk.hpp"

using namespace lerw;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitDefect = 4;

Complex parse_point(const std::string& s) {
    double x = 0.0, y = 0.0;
    char comma = 0;
    std::istringstream in(s);
    if (!(in >> x >> comma >> y) || comma != ',')
        throw CLI::ValidationError("point", "expected x,y");
    return {x, y};
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

std::vector<int32_t> parse_int_list(const std::string& s) {
    std::vector<int32_t> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(int32_t(std::stol(item)));
    }
    return out;
}

// Writes the CSV body and the manifest next to it.
class RunWriter {
  public:
    RunWriter(std::string command, std::string out_path, Json config,
              uint64_t seed)
        : manifest_{}, out_path_(std::move(out_path)) {
        manifest_.command = std::move(command);
        manifest_.config = std::move(config);
        manifest_.seed = seed;
        manifest_.started_utc = utc_timestamp();
        start_ = std::chrono::steady_clock::now();
    }

    void write_csv(const std::string& body) {
        write_text_file(out_path_, body);
        manifest_.outputs.push_back(out_path_);
        std::cerr << "wrote " << out_path_ << "\n";
    }

    void add_output(const std::string& path) {
        manifest_.outputs.push_back(path);
        std::cerr << "wrote " << path << "\n";
    }

    ~RunWriter() {
        manifest_.finished_utc = utc_timestamp();
        manifest_.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start_)
                .count();
        try {
            write_manifest(out_path_ + ".manifest.json", manifest_);
        } catch (...) {
            // manifest failure must not mask the run's own status
        }
    }

  private:
    RunManifest manifest_;
    std::string out_path_;
    std::chrono::steady_clock::time_point start_;
};

struct GlobalArgs {
    uint64_t seed = 1;
    uint64_t samples = 10000;
    int workers = 0;
    std::string out;
};

void add_global(CLI::App* sub, GlobalArgs& g, const std::string& default_out) {
    g.out = default_out;
    sub->add_option("--seed", g.seed, "RNG seed");
    sub->add_option("--samples", g.samples, "number of Monte Carlo replicas");
    sub->add_option("--workers", g.workers,
                    "worker threads (0 = hardware); never changes results");
    sub->add_option("--out", g.out, "output CSV path");
}

Json global_config(const GlobalArgs& g) {
    Json j;
    j["seed"] = g.seed;
    j["samples"] = g.samples;
    j["workers"] = g.workers;
    j["out"] = g.out;
    return j;
}

// --config FILE: JSON object mirroring long flags; command-line flags win.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> tokens;
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        std::string t = argv[i];
        if (t == "--config") {
            if (i + 1 >= argc)
                throw CLI::ValidationError("--config", "missing file path");
            config_path = argv[++i];
        } else if (t.rfind("--config=", 0) == 0) {
            config_path = t.substr(9);
        } else {
            tokens.push_back(t);
        }
    }
    if (config_path.empty()) return tokens;

    Json cfg = Json::parse(read_text_file(config_path));
    if (!cfg.is_object())
        throw PreconditionError("config file must hold a JSON object");
    std::vector<std::string> cfg_tokens;
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        std::string value;
        if (it.value().is_string())
            value = it.value().get<std::string>();
        else
            value = it.value().dump();
        cfg_tokens.push_back("--" + it.key() + "=" + value);
    }
    // config tokens go right after the subcommand names so explicit flags
    // override them (TakeLast policy)
    std::vector<std::string> out;
    size_t i = 0;
    while (i < tokens.size() && !tokens[i].empty() && tokens[i][0] != '-') {
        out.push_back(tokens[i]);
        ++i;
    }
    out.insert(out.end(), cfg_tokens.begin(), cfg_tokens.end());
    out.insert(out.end(), tokens.begin() + long(i), tokens.end());
    return out;
}

std::string csv_u64(uint64_t v) { return std::to_string(v); }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo laboratory for loop-erased random walk, radial "
                 "SLE(2), and natural-parametrization experiments"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", version_string());
    app.footer("Every experiment accepts --config FILE (JSON mirroring the "
               "flags; explicit flags override).");

    int exit_code = 0;
    std::string error_kind;

    // ---- lerw-sample ----
    auto* sc_lerw = app.add_subcommand(
        "lerw-sample", "sample one loop-erased walk and write it as JSON");
    struct {
        int32_t n = 64;
        uint64_t seed = 1, stream = 0;
        std::string out = "lerw_sample.json";
        std::string measure_out, raster_out, curve_out;
        double c_n = 0.0; // 0 = n^{5/4}
        int raster_cells = 64;
    } lerw_args;
    sc_lerw->add_option("--n", lerw_args.n, "target radius")->required();
    sc_lerw->add_option("--seed", lerw_args.seed, "RNG seed");
    sc_lerw->add_option("--stream", lerw_args.stream, "stream index");
    sc_lerw->add_option("--out", lerw_args.out, "sample JSON path");
    sc_lerw->add_option("--curve-out", lerw_args.curve_out,
                        "also write the embedded curve JSON");
    sc_lerw->add_option("--measure-out", lerw_args.measure_out,
                        "also write the occupation measure CSV");
    sc_lerw->add_option("--raster-out", lerw_args.raster_out,
                        "also write a coarse raster of the measure");
    sc_lerw->add_option("--raster-cells", lerw_args.raster_cells,
                        "raster resolution");
    sc_lerw->add_option("--c", lerw_args.c_n,
                        "speed constant c_n (default n^(5/4))");
    sc_lerw->callback([&]() {
        Json cfg;
        cfg["n"] = lerw_args.n;
        cfg["seed"] = lerw_args.seed;
        cfg["stream"] = lerw_args.stream;
        double c_n = lerw_args.c_n > 0.0 ? lerw_args.c_n
                                         : std::pow(double(lerw_args.n), 1.25);
        cfg["c"] = c_n;
        RunWriter writer("lerw-sample", lerw_args.out, cfg, lerw_args.seed);

        RngStream rng(lerw_args.seed, lerw_args.stream);
        LerwSample sample = sample_lerw(lerw_args.n, rng);
        write_text_file(lerw_args.out,
                        lerw_sample_to_json(sample, lerw_args.n, lerw_args.seed,
                                            lerw_args.stream)
                                .dump(2) +
                            "\n");
        writer.add_output(lerw_args.out);
        if (!lerw_args.curve_out.empty()) {
            Curve c = embed_lerw(sample, lerw_args.n, SpeedFunction{c_n});
            write_text_file(lerw_args.curve_out,
                            curve_to_json(c).dump(2) + "\n");
            writer.add_output(lerw_args.curve_out);
        }
        if (!lerw_args.measure_out.empty() || !lerw_args.raster_out.empty()) {
            OccupationMeasure mu =
                occupation_from_edges(sample, lerw_args.n, c_n);
            if (!lerw_args.measure_out.empty()) {
                write_measure_csv(lerw_args.measure_out, mu);
                writer.add_output(lerw_args.measure_out);
            }
            if (!lerw_args.raster_out.empty()) {
                write_measure_raster_csv(lerw_args.raster_out, mu,
                                         lerw_args.raster_cells);
                writer.add_output(lerw_args.raster_out);
            }
        }
    });

    // ---- sle-sample ----
    auto* sc_sle = app.add_subcommand(
        "sle-sample", "sample a radial SLE(kappa) trace via the Loewner flow");
    struct {
        double kappa = 2.0, T = 5.0, dt = 1e-3, offset = kTraceOffset;
        uint64_t seed = 1, stream = 0;
        size_t stride = 8;
        bool capacity_clock = false;
        bool fixed_start = false;
        std::string out = "sle_trace.json";
    } sle_args;
    sc_sle->add_option("--kappa", sle_args.kappa, "SLE parameter");
    sc_sle->add_option("--T", sle_args.T, "capacity horizon");
    sc_sle->add_option("--dt", sle_args.dt, "solver step");
    sc_sle->add_option("--offset", sle_args.offset, "trace extraction offset");
    sc_sle->add_option("--stride", sle_args.stride, "trace sample stride");
    sc_sle->add_option("--seed", sle_args.seed, "RNG seed");
    sc_sle->add_option("--stream", sle_args.stream, "stream index");
    sc_sle->add_flag("--capacity-clock", sle_args.capacity_clock,
                     "keep the capacity parametrization");
    sc_sle->add_flag("--fixed-start", sle_args.fixed_start,
                     "start the driving at angle 0 instead of uniformly");
    sc_sle->add_option("--out", sle_args.out, "curve JSON path");
    sc_sle->callback([&]() {
        Json cfg;
        cfg["kappa"] = sle_args.kappa;
        cfg["T"] = sle_args.T;
        cfg["dt"] = sle_args.dt;
        cfg["offset"] = sle_args.offset;
        cfg["stride"] = sle_args.stride;
        cfg["capacity_clock"] = sle_args.capacity_clock;
        cfg["fixed_start"] = sle_args.fixed_start;
        cfg["stream"] = sle_args.stream;
        RunWriter writer("sle-sample", sle_args.out, cfg, sle_args.seed);

        RngStream rng(sle_args.seed, sle_args.stream);
        TraceOptions opt;
        opt.offset = sle_args.offset;
        opt.stride = sle_args.stride;
        opt.finite_lifetime = !sle_args.capacity_clock;
        TraceApprox trace = sample_sle_trace(sle_args.kappa, sle_args.T,
                                             sle_args.dt, rng, opt,
                                             !sle_args.fixed_start);
        Json j = curve_to_json(trace.curve);
        j["parametrization"] = trace.tag == TraceApprox::Tag::FiniteLifetime
                                   ? "finite-lifetime"
                                   : "capacity";
        j["kappa"] = sle_args.kappa;
        j["offset"] = sle_args.offset;
        write_text_file(sle_args.out, j.dump(2) + "\n");
        writer.add_output(sle_args.out);
    });

    // ---- estimate-mn ----
    auto* sc_mn = app.add_subcommand(
        "estimate-mn", "estimate E[M_n] with tightness quantiles");
    GlobalArgs mn_g;
    std::string mn_list = "";
    int32_t mn_n = 0;
    add_global(sc_mn, mn_g, "estimate_mn.csv");
    sc_mn->add_option("--n", mn_n, "single radius");
    sc_mn->add_option("--n-list", mn_list, "comma-separated radii");
    sc_mn->callback([&]() {
        std::vector<int32_t> ns;
        if (mn_n > 0) ns.push_back(mn_n);
        for (int32_t n : parse_int_list(mn_list)) ns.push_back(n);
        if (ns.empty())
            throw CLI::ValidationError("--n", "need --n or --n-list");
        Json cfg = global_config(mn_g);
        cfg["n_list"] = ns;
        RunWriter writer("estimate-mn", mn_g.out, cfg, mn_g.seed);
        std::ostringstream csv;
        csv << "n,estimate,stderr,q50,q90,q99,samples,seed\n";
        for (size_t i = 0; i < ns.size(); ++i) {
            MnEstimate est = estimate_mn(ns[i], mn_g.samples, mn_g.seed,
                                         mn_g.workers, /*stream_tag=*/i);
            csv << est.n << ',' << format_double(est.report.estimate) << ','
                << format_double(est.report.std_error) << ','
                << format_double(est.q50) << ',' << format_double(est.q90)
                << ',' << format_double(est.q99) << ',' << csv_u64(est.samples)
                << ',' << csv_u64(mn_g.seed) << '\n';
        }
        writer.write_csv(csv.str());
    });

    // ---- fit-exponent ----
    auto* sc_fit = app.add_subcommand(
        "fit-exponent", "growth exponent fit of log E[M_n] against log n");
    GlobalArgs fit_g;
    std::string fit_list = "16,32,64,128,256";
    add_global(sc_fit, fit_g, "fit_exponent.csv");
    sc_fit->add_option("--n-list", fit_list, "comma-separated radii");
    sc_fit->callback([&]() {
        std::vector<int32_t> ns = parse_int_list(fit_list);
        Json cfg = global_config(fit_g);
        cfg["n_list"] = ns;
        RunWriter writer("fit-exponent", fit_g.out, cfg, fit_g.seed);
        std::vector<std::pair<double, double>> pts;
        std::vector<MnEstimate> ests;
        for (size_t i = 0; i < ns.size(); ++i) {
            ests.push_back(estimate_mn(ns[i], fit_g.samples, fit_g.seed,
                                       fit_g.workers, i));
            pts.push_back({double(ns[i]), ests.back().report.estimate});
        }
        ExponentFit fit = fit_growth_exponent(pts, fit_g.seed);
        std::ostringstream csv;
        csv << "n,mean_mn,stderr,residual,slope,intercept,half_width,samples,"
               "seed\n";
        for (size_t i = 0; i < ns.size(); ++i) {
            csv << ns[i] << ',' << format_double(ests[i].report.estimate) << ','
                << format_double(ests[i].report.std_error) << ','
                << format_double(fit.residuals[i]) << ','
                << format_double(fit.slope) << ','
                << format_double(fit.intercept) << ','
                << format_double(fit.half_width) << ','
                << csv_u64(fit_g.samples) << ',' << csv_u64(fit_g.seed) << '\n';
        }
        writer.write_csv(csv.str());
    });

    // ---- edge-prob ----
    auto* sc_edge = app.add_subcommand(
        "edge-prob",
        "edge-visit probabilities against the SLE Green's function");
    GlobalArgs edge_g;
    struct {
        int32_t n = 128;
        std::string bins = "0.3,0.5,0.7";
        double halfwidth = 0.02;
        double kappa = 2.0;
        std::string speed = "empirical";
    } edge_args;
    add_global(sc_edge, edge_g, "edge_prob.csv");
    sc_edge->add_option("--n", edge_args.n, "lattice radius");
    sc_edge->add_option("--bins", edge_args.bins, "radial bin centers");
    sc_edge->add_option("--bin-halfwidth", edge_args.halfwidth,
                        "radial bin half-width");
    sc_edge->add_option("--kappa", edge_args.kappa, "SLE parameter for G");
    sc_edge->add_option("--speed", edge_args.speed,
                        "c_n choice: empirical | n54");
    sc_edge->callback([&]() {
        std::vector<std::pair<double, double>> bins;
        for (double c : parse_double_list(edge_args.bins))
            bins.push_back({c - edge_args.halfwidth, c + edge_args.halfwidth});
        bool empirical = edge_args.speed != "n54";
        Json cfg = global_config(edge_g);
        cfg["n"] = edge_args.n;
        cfg["bins"] = edge_args.bins;
        cfg["bin_halfwidth"] = edge_args.halfwidth;
        cfg["kappa"] = edge_args.kappa;
        cfg["speed"] = empirical ? "empirical" : "n54";
        RunWriter writer("edge-prob", edge_g.out, cfg, edge_g.seed);
        EdgeProbResult res = estimate_edge_probability(
            edge_args.n, edge_g.samples, bins, empirical,
            SleParams::make(edge_args.kappa), edge_g.seed, edge_g.workers);
        std::ostringstream csv;
        csv << "r_lo,r_hi,edges,hits,green_sum,scaled_ratio,c_n,mn_mean,"
               "total_edge_hits,mn_sum,samples,seed\n";
        for (const auto& bin : res.bins) {
            csv << format_double(bin.r_lo) << ',' << format_double(bin.r_hi)
                << ',' << csv_u64(bin.edges) << ',' << csv_u64(bin.hits) << ','
                << format_double(bin.green_sum) << ','
                << format_double(bin.scaled_ratio) << ','
                << format_double(res.c_n) << ',' << format_double(res.mn_mean)
                << ',' << csv_u64(res.total_edge_hits) << ','
                << csv_u64(res.mn_sum) << ',' << csv_u64(res.samples) << ','
                << csv_u64(res.seed) << '\n';
        }
        writer.write_csv(csv.str());
    });

    // ---- occupation ----
    auto* sc_occ = app.add_subcommand(
        "occupation", "conditional ball occupation diagnostics");
    GlobalArgs occ_g;
    struct {
        std::string z = "0.4,0";
        std::string eps_list = "0.125,0.0625,0.03125";
        int32_t n = 256;
        std::string speed = "empirical";
    } occ_args;
    add_global(sc_occ, occ_g, "occupation.csv");
    sc_occ->add_option("--z", occ_args.z, "ball center x,y");
    sc_occ->add_option("--eps-list", occ_args.eps_list, "ball radii");
    sc_occ->add_option("--n", occ_args.n, "lattice radius");
    sc_occ->add_option("--speed", occ_args.speed, "c_n choice: empirical | n54");
    sc_occ->callback([&]() {
        Complex z = parse_point(occ_args.z);
        std::vector<double> eps = parse_double_list(occ_args.eps_list);
        bool empirical = occ_args.speed != "n54";
        Json cfg = global_config(occ_g);
        cfg["z"] = occ_args.z;
        cfg["eps_list"] = occ_args.eps_list;
        cfg["n"] = occ_args.n;
        cfg["speed"] = empirical ? "empirical" : "n54";
        RunWriter writer("occupation", occ_g.out, cfg, occ_g.seed);
        ConditionalOccResult res = estimate_conditional_occupation(
            z, eps, occ_args.n, occ_g.samples, occ_g.seed, occ_g.workers,
            empirical);
        std::ostringstream csv;
        csv << "eps,eps_n,hits,hit_rate,cond_mean_steps,cond_stderr,"
               "m_eps_mean,ratio_to_m_eps,ratio_scaled,bound_quotient,"
               "mn_mean,c_n,samples,seed\n";
        for (const auto& row : res.rows) {
            csv << format_double(row.eps) << ',' << row.eps_n << ','
                << csv_u64(row.hits) << ',' << format_double(row.hit_rate)
                << ',' << format_double(row.cond_mean_steps) << ','
                << format_double(row.cond_std_error) << ','
                << format_double(row.m_eps_mean) << ','
                << format_double(row.ratio_to_m_eps) << ','
                << format_double(row.ratio_scaled) << ','
                << format_double(row.bound_quotient) << ','
                << format_double(res.mn_mean) << ',' << format_double(res.c_n)
                << ',' << csv_u64(res.samples) << ',' << csv_u64(res.seed)
                << '\n';
        }
        writer.write_csv(csv.str());
    });

    // ---- es ----
    auto* sc_es = app.add_subcommand(
        "es", "escape probabilities Es(n) and Es(m,n)");
    GlobalArgs es_g;
    struct {
        int32_t n = 64;
        int32_t m = 0;
        std::string eps_list;
    } es_args;
    add_global(sc_es, es_g, "es.csv");
    sc_es->add_option("--n", es_args.n, "outer radius");
    sc_es->add_option("--m", es_args.m, "inner radius for Es(m,n)");
    sc_es->add_option("--eps-list", es_args.eps_list,
                      "scaling run over eps with m = eps n");
    sc_es->callback([&]() {
        Json cfg = global_config(es_g);
        cfg["n"] = es_args.n;
        if (es_args.m > 0) cfg["m"] = es_args.m;
        if (!es_args.eps_list.empty()) cfg["eps_list"] = es_args.eps_list;
        RunWriter writer("es", es_g.out, cfg, es_g.seed);
        std::ostringstream csv;
        if (!es_args.eps_list.empty()) {
            EsScalingResult res =
                es_scaling(es_args.n, parse_double_list(es_args.eps_list),
                           es_g.samples, es_g.seed, es_g.workers);
            csv << "eps,m,n,estimate,stderr,fitted_exponent,samples,seed\n";
            for (const auto& row : res.rows) {
                csv << format_double(row.eps) << ',' << row.m << ',' << res.n
                    << ',' << format_double(row.report.estimate) << ','
                    << format_double(row.report.std_error) << ','
                    << format_double(res.fitted_exponent) << ','
                    << csv_u64(row.report.count) << ',' << csv_u64(es_g.seed)
                    << '\n';
            }
        } else {
            EstimateReport rep =
                es_args.m > 0
                    ? estimate_es2(es_args.m, es_args.n, es_g.samples,
                                   es_g.seed, es_g.workers)
                    : estimate_es(es_args.n, es_g.samples, es_g.seed,
                                  es_g.workers);
            csv << "m,n,estimate,stderr,samples,seed\n";
            csv << es_args.m << ',' << es_args.n << ','
                << format_double(rep.estimate) << ','
                << format_double(rep.std_error) << ',' << csv_u64(rep.count)
                << ',' << csv_u64(es_g.seed) << '\n';
        }
        writer.write_csv(csv.str());
    });

    // ---- hit-prob ----
    auto* sc_hit = app.add_subcommand(
        "hit-prob", "ball hitting probability of the rescaled LERW");
    GlobalArgs hit_g;
    struct {
        std::string z = "0.5,0";
        double eps = 0.1;
        int32_t n = 128;
        bool with_sle = false;
        double kappa = 2.0, T = 5.0, dt = 1e-3;
        uint64_t sle_samples = 400;
    } hit_args;
    add_global(sc_hit, hit_g, "hit_prob.csv");
    sc_hit->add_option("--z", hit_args.z, "ball center x,y");
    sc_hit->add_option("--eps", hit_args.eps, "ball radius");
    sc_hit->add_option("--n", hit_args.n, "lattice radius");
    sc_hit->add_flag("--sle", hit_args.with_sle,
                     "also estimate on radial SLE traces");
    sc_hit->add_option("--kappa", hit_args.kappa, "SLE parameter");
    sc_hit->add_option("--T", hit_args.T, "SLE capacity horizon");
    sc_hit->add_option("--dt", hit_args.dt, "SLE solver step");
    sc_hit->add_option("--sle-samples", hit_args.sle_samples,
                       "SLE replica count");
    sc_hit->callback([&]() {
        Complex z = parse_point(hit_args.z);
        Json cfg = global_config(hit_g);
        cfg["z"] = hit_args.z;
        cfg["eps"] = hit_args.eps;
        cfg["n"] = hit_args.n;
        cfg["sle"] = hit_args.with_sle;
        RunWriter writer("hit-prob", hit_g.out, cfg, hit_g.seed);
        std::ostringstream csv;
        csv << "model,n,estimate,stderr,samples,seed\n";
        EstimateReport lerw_rep = estimate_hit_probability(
            z, hit_args.eps, hit_args.n, hit_g.samples, hit_g.seed,
            hit_g.workers);
        csv << "lerw," << hit_args.n << ','
            << format_double(lerw_rep.estimate) << ','
            << format_double(lerw_rep.std_error) << ','
            << csv_u64(lerw_rep.count) << ',' << csv_u64(hit_g.seed) << '\n';
        if (hit_args.with_sle) {
            EstimateReport sle_rep = sle_hit_probability(
                z, hit_args.eps, hit_args.kappa, hit_args.T, hit_args.dt,
                hit_args.sle_samples, hit_g.seed, hit_g.workers);
            csv << "sle,0," << format_double(sle_rep.estimate) << ','
                << format_double(sle_rep.std_error) << ','
                << csv_u64(sle_rep.count) << ',' << csv_u64(hit_g.seed) << '\n';
        }
        writer.write_csv(csv.str());
    });

    // ---- domain-markov ----
    auto* sc_dm = app.add_subcommand(
        "domain-markov", "chi-square test of the domain Markov property");
    GlobalArgs dm_g;
    struct {
        std::string domain = R"({"kind":"square","side":4})";
        std::string domain_file;
        int32_t scale = 1;
        size_t j = 1;
        bool negative_control = false;
    } dm_args;
    add_global(sc_dm, dm_g, "domain_markov.csv");
    sc_dm->add_option("--domain", dm_args.domain, "domain spec JSON");
    sc_dm->add_option("--domain-file", dm_args.domain_file,
                      "domain spec JSON file");
    sc_dm->add_option("--scale", dm_args.scale, "grid scale n");
    sc_dm->add_option("--j", dm_args.j, "prefix length");
    sc_dm->add_flag("--negative-control", dm_args.negative_control,
                    "use the deliberately wrong comparator");
    sc_dm->callback([&]() {
        std::string spec_text = dm_args.domain_file.empty()
                                    ? dm_args.domain
                                    : read_text_file(dm_args.domain_file);
        DomainSpec spec = domain_spec_from_json(Json::parse(spec_text));
        GridDomain dom = grid_approximation(spec, dm_args.scale);
        Json cfg = global_config(dm_g);
        cfg["domain"] = Json::parse(spec_text);
        cfg["scale"] = dm_args.scale;
        cfg["j"] = dm_args.j;
        cfg["negative_control"] = dm_args.negative_control;
        RunWriter writer("domain-markov", dm_g.out, cfg, dm_g.seed);
        DomainMarkovResult res =
            domain_markov_test(dom, dm_args.j, dm_g.samples, dm_g.seed,
                               dm_g.workers, dm_args.negative_control);
        std::ostringstream csv;
        csv << "p_value,statistic,dof,cells,prefix_count,comparator_count,"
               "prefix,samples,seed\n";
        std::ostringstream prefix;
        for (size_t i = 0; i < res.prefix.size(); ++i) {
            if (i) prefix << ' ';
            prefix << res.prefix[i].x << ':' << res.prefix[i].y;
        }
        csv << format_double(res.chi.p_value) << ','
            << format_double(res.chi.statistic) << ',' << res.chi.dof << ','
            << res.chi.cells_used << ',' << csv_u64(res.prefix_count) << ','
            << csv_u64(res.comparator_count) << ',' << prefix.str() << ','
            << csv_u64(dm_g.samples) << ',' << csv_u64(dm_g.seed) << '\n';
        writer.write_csv(csv.str());
    });

    // ---- martingale-check ----
    auto* sc_mart = app.add_subcommand(
        "martingale-check",
        "mean-constancy of the Green's-function observable");
    GlobalArgs mart_g;
    struct {
        double kappa = 2.0;
        std::string z = "0.5,0";
        std::string t_list = "0.1,0.2,0.3,0.4,0.5";
        double dt = 2e-4;
    } mart_args;
    add_global(sc_mart, mart_g, "martingale_check.csv");
    sc_mart->add_option("--kappa", mart_args.kappa, "SLE parameter");
    sc_mart->add_option("--z", mart_args.z, "observation point x,y");
    sc_mart->add_option("--t-list", mart_args.t_list, "capacity times");
    sc_mart->add_option("--dt", mart_args.dt, "solver step");
    sc_mart->callback([&]() {
        Complex z = parse_point(mart_args.z);
        std::vector<double> ts = parse_double_list(mart_args.t_list);
        if (ts.empty())
            throw CLI::ValidationError("--t-list", "need at least one time");
        SleParams params = SleParams::make(mart_args.kappa);
        Json cfg = global_config(mart_g);
        cfg["kappa"] = mart_args.kappa;
        cfg["z"] = mart_args.z;
        cfg["t_list"] = mart_args.t_list;
        cfg["dt"] = mart_args.dt;
        RunWriter writer("martingale-check", mart_g.out, cfg, mart_g.seed);

        double horizon = ts.back();
        double dt = mart_args.dt;
        std::vector<size_t> idx;
        for (double t : ts) idx.push_back(size_t(std::llround(t / dt)));

        size_t nt = ts.size();
        std::vector<CompensatedSum> sums(nt), sums_sq(nt), diff(nt),
            diff_sq(nt);
        struct Block {
            std::vector<double> sum, sumsq, dsum, dsumsq;
        };
        run_blocks<Block>(
            mart_g.samples, mart_g.workers,
            [&](uint64_t, uint64_t lo, uint64_t hi) {
                Block blk;
                blk.sum.assign(nt, 0.0);
                blk.sumsq.assign(nt, 0.0);
                blk.dsum.assign(nt, 0.0);
                blk.dsumsq.assign(nt, 0.0);
                for (uint64_t r = lo; r < hi; ++r) {
                    RngStream rng(mart_g.seed, r);
                    DrivingFunction drv = sample_driving(
                        mart_args.kappa, horizon, dt, rng, true);
                    LoewnerChain chain(drv);
                    MartingaleSeries series =
                        martingale_observable(chain, z, params);
                    double base = 0.0;
                    for (size_t i = 0; i < nt; ++i) {
                        double v = idx[i] < series.values.size()
                                       ? series.values[idx[i]]
                                       : series.values.back();
                        if (i == 0) base = v;
                        double d = v - base;
                        blk.sum[i] += v;
                        blk.sumsq[i] += v * v;
                        blk.dsum[i] += d;
                        blk.dsumsq[i] += d * d;
                    }
                }
                return blk;
            },
            [&](uint64_t, Block&& blk) {
                for (size_t i = 0; i < nt; ++i) {
                    sums[i].add(blk.sum[i]);
                    sums_sq[i].add(blk.sumsq[i]);
                    diff[i].add(blk.dsum[i]);
                    diff_sq[i].add(blk.dsumsq[i]);
                }
            });

        double ns = double(mart_g.samples);
        std::ostringstream csv;
        csv << "t,mean,stderr,diff_from_first,diff_stderr,green_ref,samples,"
               "seed\n";
        for (size_t i = 0; i < nt; ++i) {
            double mean = sums[i].value() / ns;
            double var = sums_sq[i].value() / ns - mean * mean;
            double se = std::sqrt(std::max(var, 0.0) / ns);
            double dmean = diff[i].value() / ns;
            double dvar = diff_sq[i].value() / ns - dmean * dmean;
            double dse = std::sqrt(std::max(dvar, 0.0) / ns);
            csv << format_double(ts[i]) << ',' << format_double(mean) << ','
                << format_double(se) << ',' << format_double(dmean) << ','
                << format_double(dse) << ','
                << format_double(green_disk(z, params)) << ','
                << csv_u64(mart_g.samples) << ',' << csv_u64(mart_g.seed)
                << '\n';
        }
        writer.write_csv(csv.str());
    });

    // ---- green ----
    auto* sc_green = app.add_subcommand(
        "green", "evaluate the SLE Green's function or integrate it");
    struct {
        double kappa = 2.0;
        std::string z;
        std::string annulus;
        int32_t n = 64;
        double domain_radius = 1.0;
        std::string out;
    } green_args;
    sc_green->add_option("--kappa", green_args.kappa, "SLE parameter");
    sc_green->add_option("--z", green_args.z, "evaluation point x,y");
    auto* sc_green_eval =
        sc_green->add_subcommand("eval", "evaluate G at a point");
    sc_green_eval->add_option("--kappa", green_args.kappa, "SLE parameter");
    sc_green_eval->add_option("--z", green_args.z, "evaluation point x,y");
    auto* sc_green_int = sc_green->add_subcommand(
        "integrate", "Riemann sum of G over an annulus at edge midpoints");
    sc_green_int->add_option("--kappa", green_args.kappa, "SLE parameter");
    sc_green_int->add_option("--annulus", green_args.annulus, "a,b radii")
        ->required();
    sc_green_int->add_option("--n", green_args.n, "grid scale");
    sc_green_int->add_option("--domain-radius", green_args.domain_radius,
                             "disk radius for the grid domain");
    auto green_eval = [&]() {
        if (green_args.z.empty())
            throw CLI::ValidationError("--z", "need a point x,y");
        Complex z = parse_point(green_args.z);
        double g = green_disk(z, SleParams::make(green_args.kappa));
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.8g", g);
        std::cout << buf << "\n";
    };
    sc_green_eval->callback(green_eval);
    sc_green_int->callback([&]() {
        auto ab = parse_double_list(green_args.annulus);
        if (ab.size() != 2)
            throw CLI::ValidationError("--annulus", "expected a,b");
        SleParams params = SleParams::make(green_args.kappa);
        auto dom = grid_approximation(
            DomainSpec::disk(green_args.domain_radius), green_args.n);
        RiemannSum sum = riemann_sum(
            [&](Complex z) { return green_disk(z, params); }, dom, ab[0],
            ab[1]);
        std::cout << "value," << format_double(sum.value) << "\n";
        std::cout << "edges," << sum.edges_used << "\n";
        std::cout << "excluded_edges," << sum.excluded_edges << "\n";
    });
    sc_green->callback([&]() {
        if (sc_green_eval->parsed() || sc_green_int->parsed()) return;
        green_eval();
    });

    // ---- metrics ----
    auto* sc_metrics = app.add_subcommand(
        "metrics", "curve distances d (sup) and rho (reparametrization)");
    struct {
        std::string a, b;
    } metrics_args;
    sc_metrics->add_option("--a", metrics_args.a, "first curve JSON")
        ->required();
    sc_metrics->add_option("--b", metrics_args.b, "second curve JSON")
        ->required();
    sc_metrics->callback([&]() {
        Curve a = curve_from_json(Json::parse(read_text_file(metrics_args.a)));
        Curve b = curve_from_json(Json::parse(read_text_file(metrics_args.b)));
        RhoResult rho = dist_rho_with_error(a, b);
        std::cout << "dist_sup," << format_double(dist_sup(a, b)) << "\n";
        std::cout << "dist_rho," << format_double(rho.value) << "\n";
        std::cout << "dist_rho_error_bound," << format_double(rho.error_bound)
                  << "\n";
    });

    // ---- lp-distance ----
    auto* sc_lp = app.add_subcommand(
        "lp-distance", "Levy-Prokhorov bracket between two measures");
    struct {
        std::string a, b;
        int level = 7;
    } lp_args;
    sc_lp->add_option("--a", lp_args.a, "first measure CSV")->required();
    sc_lp->add_option("--b", lp_args.b, "second measure CSV")->required();
    sc_lp->add_option("--level", lp_args.level, "dyadic family level");
    sc_lp->callback([&]() {
        OccupationMeasure a = read_measure_csv(lp_args.a);
        OccupationMeasure b = read_measure_csv(lp_args.b);
        LpBracket br =
            levy_prokhorov_bracket(a, b, TestFamily::dyadic(lp_args.level));
        std::cout << "lower," << format_double(br.lower) << "\n";
        std::cout << "upper," << format_double(br.upper) << "\n";
        std::cout << "resolution," << format_double(br.resolution) << "\n";
    });

    try {
        auto tokens = expand_config(argc, argv);
        std::vector<const char*> cargs;
        cargs.push_back(argv[0]);
        for (const auto& t : tokens) cargs.push_back(t.c_str());
        app.parse(int(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << R"({"error":")" << e.what() << R"(","kind":"usage"})"
                  << "\n";
        return kExitUsage;
    } catch (const PreconditionError& e) {
        std::cerr << R"({"error":")" << e.what()
                  << R"(","kind":"precondition"})" << "\n";
        return kExitPrecondition;
    } catch (const DefectError& e) {
        std::cerr << R"({"error":")" << e.what() << R"(","kind":"defect"})"
                  << "\n";
        return kExitDefect;
    } catch (const std::exception& e) {
        std::cerr << R"({"error":")" << e.what() << R"(","kind":"internal"})"
                  << "\n";
        return kExitDefect;
    }
    (void)error_kind;
    return exit_code;
}
