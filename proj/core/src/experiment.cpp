#include "nlwlab/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "nlwlab/errors.hpp"
#include "nlwlab/linalg.hpp"
#include "nlwlab/modulation.hpp"
#include "nlwlab/parallel.hpp"
#include "nlwlab/physical.hpp"
#include "nlwlab/presets.hpp"
#include "nlwlab/profiles.hpp"
#include "nlwlab/quadrature.hpp"
#include "nlwlab/selfsimilar.hpp"
#include "nlwlab/toda.hpp"

#ifndef NLWLAB_VERSION
#define NLWLAB_VERSION "unknown"
#endif

namespace nlwlab {

namespace {

enum class KeyType { Real, Int, Bool, Text, RealList };

// Bit mask over ExperimentKind; 0 means common to every kind.
constexpr unsigned kScan = 1u << 0, kWEvolve = 1u << 1, kTrack = 1u << 2, kToda = 1u << 3, kTables = 1u << 4;

struct KeySpec {
    const char* name;
    KeyType type;
    const char* fallback;
    unsigned kinds;
    const char* doc;
};

const std::vector<KeySpec>& schema() {
    static const std::vector<KeySpec> keys = {
        {"kind", KeyType::Text, "", 0, "pde-scan | w-evolve | modulate-track | toda-sweep | tables"},
        {"p", KeyType::Real, "3", 0, "nonlinearity exponent, p > 1"},
        {"variant", KeyType::Text, "signed", 0, "signed (|u|^{p-1}u) or unsigned (|u|^p)"},
        {"seed", KeyType::Int, "1", 0, "seed for randomized initial data"},
        {"threads", KeyType::Int, "1", 0, "worker threads for per-point loops"},
        {"out", KeyType::Text, ".", 0, "output directory"},

        {"preset", KeyType::Text, "odd-sine", kScan, "odd-sine | plateaus-opposite | gaussian-positive | constant-exact"},
        {"dx", KeyType::Real, "0.0009765625", kScan, "grid spacing"},
        {"amplitude", KeyType::Real, "nan", kScan, "preset amplitude, nan for the preset default"},
        {"T_exact", KeyType::Real, "1", kScan, "blow-up time of constant-exact"},
        {"cfl", KeyType::Real, "0.9", kScan, "dt / dx"},
        {"ceiling", KeyType::Real, "1e8", kScan, "per-point freeze level"},
        {"fallback_level", KeyType::Real, "1e6", kScan, "threshold for the crossing-time fallback"},
        {"window_lo", KeyType::Real, "nan", kScan, "scan window, nan for the preset default"},
        {"window_hi", KeyType::Real, "nan", kScan, "scan window, nan for the preset default"},
        {"t_end", KeyType::Real, "nan", kScan, "safety stop, nan for the preset default"},
        {"snapshot_dt", KeyType::Real, "0.001", kScan, "snapshot spacing in t"},
        {"coupling_cells", KeyType::Real, "0.25", kScan, "detach points whose profile width is below this many dx"},
        {"t_fit", KeyType::Text, "amplitude", kScan, "T fit window: amplitude (last decade) or resolved"},
        {"min_tau_cells", KeyType::Real, "2", kScan, "resolved fit ignores samples closer than this many dx to T"},
        {"classify", KeyType::Bool, "true", kScan, "run the R/S classification"},
        {"tau", KeyType::Real, "0.1", kScan, "slope band for S points"},
        {"margin", KeyType::Real, "0.05", kScan, "energy test margin for R points"},
        {"resolution_points", KeyType::Int, "32", kScan, "minimum cone half-width in dx"},
        {"edge_cells", KeyType::Int, "16", kScan, "minimum gap between cone edge and blow-up curve, in dx"},
        {"lines", KeyType::Bool, "true", kScan, "track signed lines at x0"},
        {"x0", KeyType::Real, "0", kScan, "point for signed lines and the corner check"},

        {"xi_max", KeyType::Real, "12", kWEvolve | kTrack, "xi grid half-width"},
        {"n", KeyType::Int, "1025", kWEvolve | kTrack, "xi grid points"},
        {"cone_n", KeyType::Int, "1025", kWEvolve | kTrack, "points of the y grid used for time stepping"},
        {"s_end", KeyType::Real, "4", kWEvolve | kTrack | kToda, "final self-similar time"},
        {"snapshot_ds", KeyType::Real, "0.5", kWEvolve | kTrack, "snapshot spacing in s"},
        {"runs", KeyType::Int, "1", kWEvolve, "number of randomized runs"},
        {"d", KeyType::Real, "0", kWEvolve, "soliton parameter of the base state"},
        {"perturbation", KeyType::Real, "0.1", kWEvolve, "amplitude of the random perturbation"},
        {"k", KeyType::Int, "2", kTrack, "number of planted solitons"},
        {"gap", KeyType::Real, "8", kTrack, "gap between planted centers"},

        {"k_min", KeyType::Int, "2", kToda, "smallest number of centers"},
        {"k_max", KeyType::Int, "4", kToda, "largest number of centers"},
        {"gap0", KeyType::Real, "1", kToda, "initial gap"},
        {"s0", KeyType::Real, "1", kToda, "initial time"},
        {"c1", KeyType::Real, "1", kToda, "interaction constant"},
        {"stress", KeyType::Real, "0", kToda, "stress amplitude C of R_i = e_i C J^{1+delta0}"},
        {"delta0", KeyType::Real, "0.1", kToda, "stress exponent"},
        {"fit_lo", KeyType::Real, "1000", kToda, "equid fit window start"},
        {"fit_hi", KeyType::Real, "10000", kToda, "equid fit window end"},

        {"gaps", KeyType::RealList, "8,10,12,14", kTables, "gaps for the table sweep"},
    };
    return keys;
}

unsigned kind_bit(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::PdeScan: return kScan;
        case ExperimentKind::WEvolve: return kWEvolve;
        case ExperimentKind::ModulateTrack: return kTrack;
        case ExperimentKind::TodaSweep: return kToda;
        default: return kTables;
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& v) {
    if (v == "nan") return std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size()) throw UsageError("key '" + key + "' expects a real number, got '" + v + "'");
    return x;
}

long long parse_int(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    long long x = 0;
    try {
        x = std::stoll(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size()) throw UsageError("key '" + key + "' expects an integer, got '" + v + "'");
    return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw UsageError("key '" + key + "' expects true or false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(key, trim(item)));
    if (out.empty()) throw UsageError("key '" + key + "' expects a comma-separated list");
    return out;
}

const KeySpec* find_key(const std::string& name) {
    for (const auto& k : schema())
        if (name == k.name) return &k;
    return nullptr;
}

// Shortest text that reads back to the same double.
std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::ofstream open_output(const ExperimentConfig& cfg, const std::string& name, RunResult& result) {
    const std::filesystem::path path = std::filesystem::path(cfg.out_dir) / name;
    std::ofstream os(path);
    if (!os) throw InputError("cannot open " + path.string());
    os << std::setprecision(15);
    result.artifacts.push_back(name);
    return os;
}

std::string joined(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_real(v[i]);
    return s;
}

std::string log_line(const std::string& key, double value) {
    std::ostringstream os;
    os << std::setprecision(10) << key << " = " << value;
    return os.str();
}

void run_pde_scan(const ExperimentConfig& cfg, RunResult& result) {
    const Params& params = cfg.params;
    const std::string preset = cfg.text("preset");
    const PresetInfo info = preset_info(preset);
    PresetOptions po;
    po.dx = cfg.real("dx");
    po.amplitude = cfg.real("amplitude");
    po.T = cfg.real("T_exact");
    const CauchyData data = make_preset(preset, params, po);
    if (preset == "plateaus-opposite") {
        const double e = levine_energy(data, params);
        result.log.push_back(log_line("levine_energy", e) + (e < 0.0 ? " (negative)" : " (nonnegative)"));
    }

    PhysicalControls pc;
    pc.cfl = cfg.real("cfl");
    pc.ceiling = cfg.real("ceiling");
    pc.fallback_level = cfg.real("fallback_level");
    pc.snapshot_dt = cfg.real("snapshot_dt");
    pc.coupling_cells = cfg.real("coupling_cells");
    const double wlo = std::isnan(cfg.real("window_lo")) ? info.window_lo : cfg.real("window_lo");
    const double whi = std::isnan(cfg.real("window_hi")) ? info.window_hi : cfg.real("window_hi");
    if (!(wlo < whi)) throw UsageError("window_lo must be below window_hi");
    pc.window_lo = wlo;
    pc.window_hi = whi;
    pc.t_end = std::isnan(cfg.real("t_end")) ? info.t_end : cfg.real("t_end");
    const Evolution evo = evolve_u(data, params, pc);
    result.log.push_back("evolution: " + std::to_string(evo.steps) + " steps, stop: " + evo.stop_reason);

    TFitControls fit;
    fit.fallback_level = pc.fallback_level;
    fit.min_tau_cells = cfg.real("min_tau_cells");
    if (cfg.text("t_fit") == "amplitude")
        fit.mode = TFitMode::Amplitude;
    else if (cfg.text("t_fit") == "resolved")
        fit.mode = TFitMode::Resolved;
    else
        throw UsageError("t_fit must be amplitude or resolved");
    BlowupCurve curve = scan_blowup_curve(evo, wlo, whi, params, fit);
    ClassifyControls cc;
    cc.tau = cfg.real("tau");
    cc.margin = cfg.real("margin");
    cc.resolution_points = cfg.integer("resolution_points");
    cc.edge_cells = cfg.integer("edge_cells");
    cc.threads = cfg.threads;
    if (cfg.flag("classify")) {
        classify_all(curve, evo, params, cc);
        result.log.push_back("points: R=" + std::to_string(curve.count(PointClass::R)) +
                             " S=" + std::to_string(curve.count(PointClass::S)) +
                             " unknown=" + std::to_string(curve.count(PointClass::Unknown)));
    }
    result.log.push_back("lipschitz violations: " + std::to_string(curve.lipschitz_violations));
    write_curve_csv(curve, (std::filesystem::path(cfg.out_dir) / "curve.csv").string());
    result.artifacts.push_back("curve.csv");

    const double x0 = cfg.real("x0");
    const int i0 = curve.index_of(x0);
    if (i0 >= 0 && std::isfinite(curve.T[i0])) {
        result.log.push_back(log_line("T(x0)", curve.T[i0]));
        if (cfg.flag("classify") && curve.cls[i0] == PointClass::S) {
            const ChapeauReport ch = chapeau_bound_check(curve, i0, std::max(2, curve.k_est[i0]), params.p);
            result.log.push_back(log_line("corner beta_fit", ch.beta_fit) + ", expected " +
                                 format_real(ch.beta_expected));
        }
        if (cfg.flag("lines")) {
            double tau_lo = resolvable_tau(curve, i0, cc);
            if (!std::isfinite(tau_lo)) tau_lo = cc.resolution_points * data.line.dx;
            const SignedLines lines =
                signed_lines(evo, curve.x[i0], curve.T[i0], params, tau_lo, 10.0 * tau_lo, cc);
            write_tracks_csv(lines, (std::filesystem::path(cfg.out_dir) / "tracks.csv").string());
            result.artifacts.push_back("tracks.csv");
            result.log.push_back("signed lines: " + std::to_string(lines.tracks.size()) + " tracks" +
                                 (lines.truncated ? " (truncated)" : ""));
        }
    }
}

WState random_state(const ExperimentConfig& cfg, std::mt19937_64& rng) {
    const Params& params = cfg.params;
    const XiGrid grid = XiGrid::symmetric(cfg.real("xi_max"), cfg.integer("n"));
    WState w(grid);
    w.w1 = soliton(zeta_of(cfg.real("d")), grid, params);
    std::uniform_real_distribution<double> amp(-1.0, 1.0), pos(-3.0, 3.0), width(0.5, 2.0);
    const double eps = cfg.real("perturbation");
    for (int b = 0; b < 3; ++b) {
        const double a1 = eps * amp(rng), a2 = eps * amp(rng), c = pos(rng), s = width(rng);
        for (int i = 0; i < grid.n; ++i) {
            const double z = (grid.xi(i) - c) / s;
            const double bump = std::exp(-z * z);
            w.w1[i] += a1 * bump * params.kappa0;
            w.w2[i] += a2 * bump * params.kappa0;
        }
    }
    return w;
}

WControls w_controls(const ExperimentConfig& cfg) {
    WControls wc;
    wc.cone_n = cfg.integer("cone_n");
    wc.snapshot_ds = cfg.real("snapshot_ds");
    return wc;
}

void run_w_evolve(const ExperimentConfig& cfg, RunResult& result) {
    const int runs = cfg.integer("runs");
    if (runs < 1) throw UsageError("runs must be at least 1");
    std::mt19937_64 rng(cfg.seed);
    std::vector<WState> starts;
    for (int r = 0; r < runs; ++r) starts.push_back(random_state(cfg, rng));
    std::vector<WTrajectory> trajs(static_cast<std::size_t>(runs));
    const WControls wc = w_controls(cfg);
    parallel_for(runs, cfg.threads, [&](int r) { trajs[r] = evolve_w(starts[r], cfg.real("s_end"), cfg.params, wc); });

    auto summary = open_output(cfg, "energy.csv", result);
    summary << "run,status,E_start,E_end,violations,max_increase,total_drop,total_dissipated,overall_ratio,"
               "resolved_ratio,resolved_until\n";
    for (int r = 0; r < runs; ++r) {
        const auto& tr = trajs[r];
        const std::string name = "trajectory_" + std::to_string(r) + ".csv";
        write_trajectory_csv(tr, (std::filesystem::path(cfg.out_dir) / name).string());
        result.artifacts.push_back(name);
        const EnergyReport rep = energy_monitor(tr);
        summary << r << ',' << (tr.status == WStatus::Completed ? "completed" : "frame-blowup") << ','
                << tr.energy.front() << ',' << tr.energy.back() << ',' << rep.violations << ',' << rep.max_increase
                << ',' << rep.total_drop << ',' << rep.total_dissipated << ',' << rep.overall_ratio << ','
                << rep.resolved_ratio << ',' << rep.resolved_until << '\n';
        if (!tr.snapshots.empty()) {
            const std::string snap = "final_" + std::to_string(r) + ".csv";
            write_snapshot_csv(tr.snapshots.back(), cfg.params, (std::filesystem::path(cfg.out_dir) / snap).string());
            result.artifacts.push_back(snap);
        }
    }
    result.log.push_back("w-evolve: " + std::to_string(runs) + " runs");
}

void run_modulate_track(const ExperimentConfig& cfg, RunResult& result) {
    const Params& params = cfg.params;
    const int k = cfg.integer("k");
    if (k < 1) throw UsageError("k must be at least 1");
    const double gap = cfg.real("gap");
    std::vector<double> zeta;
    std::vector<int> signs;
    for (int j = 0; j < k; ++j) {
        zeta.push_back((j - 0.5 * (k - 1)) * gap);
        signs.push_back(j % 2 == 0 ? 1 : -1);
    }
    const XiGrid grid = XiGrid::symmetric(cfg.real("xi_max"), cfg.integer("n"));
    const PlantedState planted = planted_state(zeta, signs, grid, params);
    const WTrajectory tr = evolve_w(planted.state, cfg.real("s_end"), params, w_controls(cfg));

    auto os = open_output(cfg, "decomposition.csv", result);
    os << "s,k";
    for (int j = 0; j < k; ++j) os << ",e_" << j + 1 << ",zeta_" << j + 1 << ",alpha1_" << j + 1;
    os << ",A_minus,q_norm";
    for (int j = 0; j < 2 * k; ++j) os << ",residual_" << j + 1;
    os << '\n';
    std::vector<double> guess = zeta;
    for (const auto& snap : tr.snapshots) {
        try {
            const SolitonDecomposition dec = solve_modulation(snap, k, guess, signs, params);
            guess = dec.zeta;
            os << snap.s << ',' << dec.k;
            for (int j = 0; j < k; ++j) os << ',' << dec.signs[j] << ',' << dec.zeta[j] << ',' << dec.alpha1[j];
            os << ',' << dec.A_minus << ',' << dec.q_norm;
            for (double r : dec.residuals) os << ',' << r;
            os << '\n';
        } catch (const NumericalError& e) {
            result.log.push_back("decomposition lost at s=" + format_real(snap.s) + ": " + e.what());
        }
    }
    result.log.push_back("modulate-track: " + std::to_string(tr.snapshots.size()) + " snapshots");
}

void run_toda_sweep(const ExperimentConfig& cfg, RunResult& result) {
    const double p = cfg.params.p;
    const int k_min = cfg.integer("k_min"), k_max = cfg.integer("k_max");
    if (k_min < 2 || k_max < k_min) throw UsageError("need 2 <= k_min <= k_max");
    auto fit_os = open_output(cfg, "equid.csv", result);
    fit_os << "k,i,slope,expected,offset,max_residual\n";
    for (int k = k_min; k <= k_max; ++k) {
        TodaState st;
        st.s = cfg.real("s0");
        st.p = p;
        st.c1 = cfg.real("c1");
        for (int j = 0; j < k; ++j) {
            st.zeta.push_back((j - 0.5 * (k - 1)) * cfg.real("gap0"));
            st.signs.push_back(j % 2 == 0 ? 1 : -1);
        }
        if (cfg.real("stress") != 0.0) st.perturbation = toda_stress(st.signs, cfg.real("stress"), cfg.real("delta0"), p);
        const TodaTrajectory tr = integrate_toda(st, cfg.real("s_end"));
        const std::string name = "toda_k" + std::to_string(k) + ".csv";
        auto os = open_output(cfg, name, result);
        os << "s";
        for (int j = 0; j < k; ++j) os << ",zeta_" << j + 1;
        for (int j = 0; j + 1 < k; ++j) os << ",L_" << j + 1;
        os << ",J,sigma,zeta_mean\n";
        for (const auto& smp : tr.samples) {
            os << smp.s;
            for (double z : smp.zeta) os << ',' << z;
            for (double l : smp.gap.L) os << ',' << l;
            os << ',' << smp.gap.J << ',' << smp.gap.sigma << ',' << smp.zeta_mean << '\n';
        }
        if (cfg.real("s_end") >= cfg.real("fit_hi")) {
            const EquidFit fit = fit_equid(tr, p, cfg.real("fit_lo"), cfg.real("fit_hi"));
            for (int j = 0; j < k; ++j)
                fit_os << k << ',' << j + 1 << ',' << fit.slope[j] << ',' << fit.expected[j] << ',' << fit.offset[j]
                       << ',' << fit.max_residual[j] << '\n';
        }
    }
    result.log.push_back("toda-sweep: k=" + std::to_string(k_min) + ".." + std::to_string(k_max));
}

void run_tables(const ExperimentConfig& cfg, RunResult& result) {
    const double p = cfg.params.p;
    auto os = open_output(cfg, "tables.csv", result);
    os << "entry,params,numeric,model,ratio,gap\n";
    const std::vector<std::pair<double, double>> ab = {{1, 1}, {1, 2}, {2, 1}, {p, 1}};
    // log J against log |A - c1 J| and log B, for the fitted exponents 1 + delta.
    std::vector<double> log_J, log_A, log_B;
    for (double g : cfg.reals("gaps")) {
        for (auto [a, b] : ab) {
            const TableEntry e = I1(a, b, g, p);
            os << "I1,alpha=" << a << " beta=" << b << ',' << e.numeric << ',' << e.model << ',' << e.ratio << ','
               << g << '\n';
        }
        const std::vector<double> c3 = {-g, 0.0, g};
        for (auto [a, b] : ab) {
            const TableEntry e = I2(a, b, 0, 1, c3, p);
            os << "I2,alpha=" << a << " beta=" << b << " i=1 j=2," << e.numeric << ',' << e.model << ','
               << e.ratio << ',' << g << '\n';
        }
        const double model = c1_triple(p) * std::exp(-2.0 * g / (p - 1.0));
        for (int l : {0, 2}) {
            const double a = A_ijl(1, 1, l, c3, p);
            os << "A,i=2 j=2 l=" << l + 1 << ',' << a << ',' << (l > 1 ? model : -model) << ','
               << a / (l > 1 ? model : -model) << ',' << g << '\n';
        }
        const double b = B_ijl(1, 1, 2, c3, p);
        const double J = 2.0 * std::exp(-2.0 * g / (p - 1.0));
        log_J.push_back(-2.0 * g / (p - 1.0));
        log_A.push_back(std::log(std::abs(A_ijl(1, 1, 2, c3, p) - model)));
        log_B.push_back(std::log(std::abs(b)));
        os << "B,i=2 j=2 l=3," << b << ',' << J << ',' << b / J << ',' << g << '\n';
        const JiResult ji = J_i(1, c3, {1, -1, 1}, p);
        os << "J,i=2 alternating," << ji.value << ",nan,nan," << g << '\n';
    }
    os << "c1_triple,p=" << p << ',' << c1_triple(p) << ",nan,nan,nan\n";
    if (log_J.size() >= 2) {
        os << "delta5_fit,A i=2 j=2 l=3," << fit_line(log_J, log_A).slope - 1.0 << ",nan,nan,nan\n";
        os << "delta6_fit,B i=2 j=2 l=3," << fit_line(log_J, log_B).slope - 1.0 << ",nan,nan,nan\n";
    }
    result.log.push_back("tables: " + std::to_string(cfg.reals("gaps").size()) + " gaps");
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::PdeScan: return "pde-scan";
        case ExperimentKind::WEvolve: return "w-evolve";
        case ExperimentKind::ModulateTrack: return "modulate-track";
        case ExperimentKind::TodaSweep: return "toda-sweep";
        default: return "tables";
    }
}

ExperimentKind kind_from_string(const std::string& text) {
    for (auto k : {ExperimentKind::PdeScan, ExperimentKind::WEvolve, ExperimentKind::ModulateTrack,
                   ExperimentKind::TodaSweep, ExperimentKind::Tables})
        if (to_string(k) == text) return k;
    throw UsageError("unknown experiment kind '" + text + "'");
}

Config Config::parse(const std::string& text, const std::string& origin) {
    Config c;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw UsageError(origin + ":" + std::to_string(lineno) + ": empty key");
        c.set(key, trim(line.substr(eq + 1)));
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw UsageError("cannot read config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse(ss.str(), path);
}

double ExperimentConfig::real(const std::string& key) const { return parse_real(key, text(key)); }
int ExperimentConfig::integer(const std::string& key) const { return static_cast<int>(parse_int(key, text(key))); }
bool ExperimentConfig::flag(const std::string& key) const { return parse_bool(key, text(key)); }
std::vector<double> ExperimentConfig::reals(const std::string& key) const { return parse_list(key, text(key)); }

const std::string& ExperimentConfig::text(const std::string& key) const {
    const auto it = resolved.find(key);
    if (it == resolved.end()) throw UsageError("key '" + key + "' is not defined for " + to_string(kind));
    return it->second;
}

ExperimentConfig resolve(const Config& config) {
    ExperimentConfig out;
    if (!config.has("kind")) throw UsageError("config must set 'kind'");
    out.kind = kind_from_string(config.values().at("kind"));
    const unsigned bit = kind_bit(out.kind);
    for (const auto& [key, value] : config.values()) {
        const KeySpec* spec = find_key(key);
        if (!spec) throw UsageError("unknown config key '" + key + "'");
        if (spec->kinds != 0 && !(spec->kinds & bit))
            throw UsageError("key '" + key + "' does not apply to " + to_string(out.kind));
    }
    for (const auto& spec : schema()) {
        if (spec.kinds != 0 && !(spec.kinds & bit)) continue;
        const auto it = config.values().find(spec.name);
        std::string v = it != config.values().end() ? it->second : spec.fallback;
        switch (spec.type) {
            case KeyType::Real: v = format_real(parse_real(spec.name, v)); break;
            case KeyType::Int: v = std::to_string(parse_int(spec.name, v)); break;
            case KeyType::Bool: v = parse_bool(spec.name, v) ? "true" : "false"; break;
            case KeyType::RealList: v = joined(parse_list(spec.name, v)); break;
            case KeyType::Text: break;
        }
        out.resolved[spec.name] = v;
    }
    try {
        out.params = Params(out.real("p"), variant_from_string(out.text("variant")));
    } catch (const InputError& e) {
        throw UsageError(std::string("invalid parameters: ") + e.what());
    }
    const long long seed = parse_int("seed", out.text("seed"));
    if (seed < 0) throw UsageError("seed must be nonnegative");
    out.seed = static_cast<std::uint64_t>(seed);
    out.threads = out.integer("threads");
    if (out.threads < 1) throw UsageError("threads must be at least 1");
    out.out_dir = out.text("out");
    if (out.kind == ExperimentKind::PdeScan) preset_info(out.text("preset"));
    return out;
}

std::string schema_doc() {
    std::ostringstream os;
    const char* types[] = {"real", "int", "bool", "text", "real-list"};
    for (const auto& k : schema()) {
        std::string kinds;
        if (k.kinds == 0) kinds = "all";
        for (auto kind : {ExperimentKind::PdeScan, ExperimentKind::WEvolve, ExperimentKind::ModulateTrack,
                          ExperimentKind::TodaSweep, ExperimentKind::Tables})
            if (k.kinds & kind_bit(kind)) kinds += (kinds.empty() ? "" : ",") + to_string(kind);
        os << std::left << std::setw(18) << k.name << std::setw(10) << types[static_cast<int>(k.type)]
           << std::setw(14) << (std::string(k.fallback).empty() ? "-" : k.fallback) << std::setw(40) << kinds
           << k.doc << '\n';
    }
    return os.str();
}

std::string manifest_text(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "# nlwlab " << NLWLAB_VERSION << " run manifest; replay with --config\n";
    os << "# kappa0 = " << format_real(cfg.params.kappa0) << "\n";
    os << "kind = " << to_string(cfg.kind) << '\n';
    for (const auto& [k, v] : cfg.resolved)
        if (k != "kind") os << k << " = " << v << '\n';
    return os.str();
}

RunResult run(const ExperimentConfig& cfg) {
    RunResult result;
    std::filesystem::create_directories(cfg.out_dir);
    {
        auto os = open_output(cfg, "manifest.cfg", result);
        os << manifest_text(cfg);
    }
    try {
        switch (cfg.kind) {
            case ExperimentKind::PdeScan: run_pde_scan(cfg, result); break;
            case ExperimentKind::WEvolve: run_w_evolve(cfg, result); break;
            case ExperimentKind::ModulateTrack: run_modulate_track(cfg, result); break;
            case ExperimentKind::TodaSweep: run_toda_sweep(cfg, result); break;
            case ExperimentKind::Tables: run_tables(cfg, result); break;
        }
    } catch (const UsageError&) {
        throw;
    } catch (const Error& e) {
        result.status = 2;
        result.log.push_back(to_string(cfg.kind) + " failed: " + e.what());
    }
    return result;
}

}  // namespace nlwlab
