// End-to-end acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

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

using namespace nlwlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// ---- 1: stationarity of kappa(d)

Outcome stationarity() {
    Outcome o{true, ""};
    double worst = 0.0, worst_reduction = std::numeric_limits<double>::infinity();
    for (double p : {2.0, 3.0}) {
        const Params params(p);
        for (double d : {-0.5, 0.0, 0.5}) {
            double res[2];
            for (int r = 0; r < 2; ++r) {
                const XiGrid grid(-12.0, 12.0, r == 0 ? 2049 : 4097);
                WState st(grid);
                st.w1 = soliton(zeta_of(d), grid, params);
                auto [a, b] = rhs_w(st, params);
                res[r] = norm_H(WState(a, b), params);
            }
            worst = std::max(worst, res[0]);
            // d = 0 is stationary to round-off on every grid; no refinement rate to measure.
            const bool rate_applies = res[0] > 1e-12;
            if (rate_applies) worst_reduction = std::min(worst_reduction, res[0] / res[1]);
            if (!(res[0] <= 1e-3 && (!rate_applies || res[0] / res[1] >= 3.5))) o.pass = false;
        }
    }
    o.detail = "max residual " + fmt("%.3g", worst) + " (<= 1e-3), min reduction " + fmt("%.2f", worst_reduction) +
               "x (>= 3.5)";
    return o;
}

// ---- 2: energy law on randomized runs

WState generic_state(const XiGrid& grid, const Params& params, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dd(-0.5, 0.5), amp(-0.1, 0.1), pos(-3.0, 3.0), width(0.5, 2.0);
    WState w(grid);
    w.w1 = soliton(zeta_of(dd(rng)), grid, params);
    for (int b = 0; b < 3; ++b) {
        const double a1 = amp(rng), a2 = amp(rng), c = pos(rng), s = width(rng);
        for (int i = 0; i < grid.n; ++i) {
            const double z = (grid.xi(i) - c) / s;
            w.w1[i] += a1 * std::exp(-z * z) * params.kappa0;
            w.w2[i] += a2 * std::exp(-z * z) * params.kappa0;
        }
    }
    return w;
}

Outcome energy_law() {
    const Params params(3.0);
    const XiGrid grid = XiGrid::symmetric(12.0, 1025);
    std::mt19937_64 rng(20240601);
    std::vector<WState> starts;
    for (int r = 0; r < 10; ++r) starts.push_back(generic_state(grid, params, rng));
    int violations = 0, blowups = 0;
    double coarse_err = 0.0, fine_err = 0.0, max_inc = 0.0;
    for (int level = 0; level < 2; ++level) {
        WControls wc;
        wc.cone_n = level == 0 ? 513 : 1025;
        for (const auto& st : starts) {
            const WTrajectory tr = evolve_w(st, 4.0, params, wc);
            if (tr.status == WStatus::FrameBlowup) ++blowups;
            const EnergyReport rep = energy_monitor(tr, wc.energy_tol);
            violations += rep.violations;
            max_inc = std::max(max_inc, rep.max_increase);
            double& err = level == 0 ? coarse_err : fine_err;
            const double e = std::abs(rep.resolved_ratio - 1.0);
            err = std::isfinite(e) ? std::max(err, e) : std::numeric_limits<double>::infinity();
        }
    }
    Outcome o;
    o.pass = violations == 0 && fine_err <= 0.05 && fine_err <= coarse_err + 1e-3;
    o.detail = "per-step violations " + std::to_string(violations) + " (max increase " + fmt("%.2g", max_inc) +
               "), |dE/diss - 1| " + fmt("%.3g", coarse_err) + " -> " + fmt("%.3g", fine_err) +
               " (<= 0.05) on the resolved segment; frame blow-ups " + std::to_string(blowups) + "/20";
    return o;
}

// ---- 3: projector orthonormality

Outcome orthonormality() {
    double worst = 0.0;
    for (double p : {2.0, 3.0}) {
        const Params params(p);
        const XiGrid grid(-12.0, 12.0, 2049);
        for (int i = 1; i <= 19; ++i) {
            const double d = -0.9 + 0.09 * i;
            const ProjectorBasis b = make_basis_d(d, grid, params);
            for (int lam = 0; lam < 2; ++lam)
                for (int mu = 0; mu < 2; ++mu) {
                    const double v = project(mu == 0 ? b.F0 : b.F1, b, lam, params);
                    worst = std::max(worst, std::abs(v - (lam == mu ? 1.0 : 0.0)));
                }
        }
    }
    return {worst <= 1e-8, "max |pi_l(F_m) - delta| " + fmt("%.3g", worst) + " over 19 d, p in {2,3} (<= 1e-8)"};
}

// ---- 4: Toda k=2 closed form and log growth

Outcome toda_closed_form() {
    double worst_rel = 0.0, worst_slope = 0.0;
    for (double p : {2.0, 3.0}) {
        TodaState st;
        st.s = 1.0;
        st.p = p;
        st.c1 = 1.0;
        st.zeta = {-1.0, 1.0};
        st.signs = {1, -1};
        const TodaTrajectory tr = integrate_toda(st, 1e4);
        std::vector<double> ls, L;
        for (const auto& smp : tr.samples) {
            const double exact = closed_form_k2(smp.s, 2.0, 1.0, 1.0, p);
            worst_rel = std::max(worst_rel, std::abs(smp.gap.L[0] - exact) / exact);
            if (smp.s >= 1e3) {
                ls.push_back(std::log(smp.s));
                L.push_back(smp.gap.L[0]);
            }
        }
        const LineFit f = fit_line(ls, L);
        worst_slope = std::max(worst_slope, std::abs(f.slope / ((p - 1.0) / 2.0) - 1.0));
    }
    return {worst_rel <= 1e-8 && worst_slope <= 0.02,
            "max rel error " + fmt("%.3g", worst_rel) + " (<= 1e-8), slope deviation " + fmt("%.3g", worst_slope) +
                " (<= 0.02)"};
}

// ---- 5: equidistribution pattern

Outcome equid() {
    const double p = 3.0;
    double worst = 0.0, band = 0.0;
    for (int k = 2; k <= 4; ++k) {
        TodaState st;
        st.s = 1.0;
        st.p = p;
        for (int j = 0; j < k; ++j) {
            st.zeta.push_back(j - 0.5 * (k - 1));
            st.signs.push_back(j % 2 == 0 ? 1 : -1);
        }
        const TodaTrajectory tr = integrate_toda(st, 1e4);
        const EquidFit fit = fit_equid(tr, p, 1e3, 1e4);
        for (int i = 0; i < k; ++i) {
            const double e = fit.expected[i];
            const double dev = e == 0.0 ? std::abs(fit.slope[i]) / ((p - 1.0) / 2.0) : std::abs(fit.slope[i] / e - 1.0);
            worst = std::max(worst, dev);
        }
        if (k == 3) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (const auto& smp : tr.samples)
                if (smp.s >= 1e3 && smp.s <= 1e4) {
                    lo = std::min(lo, smp.zeta[1]);
                    hi = std::max(hi, smp.zeta[1]);
                }
            band = hi - lo;
        }
    }
    return {worst <= 0.05 && band <= 0.1,
            "max slope deviation " + fmt("%.3g", worst) + " (<= 0.05), k=3 central band " + fmt("%.3g", band) +
                " (<= 0.1)"};
}

// ---- 6: sign alternation dichotomy

Outcome dichotomy() {
    const double p = 3.0;
    int ok = 0, total = 0;
    std::string note;
    for (double g : {4.0, 6.0, 8.0}) {
        for (bool alternating : {false, true}) {
            ++total;
            TodaState st;
            st.s = 1.0;
            st.p = p;
            st.zeta = {-0.5 * g, 0.5 * g};
            st.signs = {1, alternating ? -1 : 1};
            if (!alternating) {
                try {
                    integrate_toda(st, 1.0 + 2.0 * collapse_time_k2(g, 1.0, p) + 10.0);
                    note += " same-sign gap " + fmt("%g", g) + " did not collapse;";
                } catch (const CollisionError&) {
                    ++ok;
                }
                continue;
            }
            const TodaTrajectory tr = integrate_toda(st, 1e4);
            bool mono = true;
            for (std::size_t i = 1; i < tr.samples.size(); ++i)
                if (tr.samples[i].gap.L[0] < tr.samples[i - 1].gap.L[0]) mono = false;
            if (mono && tr.samples.back().gap.L[0] > g)
                ++ok;
            else
                note += " alternating gap " + fmt("%g", g) + " not monotone;";
        }
    }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " cases as expected" + note};
}

// ---- 7: modulation recovery of planted states

Outcome modulation_recovery() {
    const Params params(3.0);
    const XiGrid grid = XiGrid::symmetric(24.0, 4097);
    double worst_dz = 0.0, worst_res = 0.0;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    std::string note;
    for (int k : {2, 3}) {
        for (double g : {8.0, 10.0, 12.0}) {
            std::vector<double> z;
            std::vector<int> e;
            for (int j = 0; j < k; ++j) {
                z.push_back((j - 0.5 * (k - 1)) * g);
                e.push_back(j % 2 == 0 ? 1 : -1);
            }
            const PlantedState ps = planted_state(z, e, grid, params);
            std::vector<double> guess = z;
            for (int j = 0; j < k; ++j) guess[j] += (j % 2 == 0 ? 0.3 : -0.3);
            try {
                const SolitonDecomposition dec = solve_modulation(ps.state, k, guess, e, params);
                for (int j = 0; j < k; ++j) worst_dz = std::max(worst_dz, std::abs(dec.zeta[j] - z[j]));
                for (double r : dec.residuals) worst_res = std::max(worst_res, r);
                const double ratio = dec.q_norm / ((k - 1) * h_gap(g, params.p));
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            } catch (const NumericalError& ex) {
                note += std::string(" k=") + std::to_string(k) + " gap " + fmt("%g", g) + ": " + ex.what() + ";";
                worst_dz = std::numeric_limits<double>::infinity();
            }
        }
    }
    const double spread = hi / lo;
    return {worst_dz <= 1e-4 && worst_res <= 1e-10 && spread <= 4.0,
            "max |dzeta| " + fmt("%.3g", worst_dz) + " (<= 1e-4), max residual " + fmt("%.3g", worst_res) +
                " (<= 1e-10), |q|/sum h spread " + fmt("%.3g", spread) + " (<= 4)" + note};
}

// ---- 8: integral table

Outcome integral_table() {
    struct Row {
        double drift = 0.0, c1dev = 0.0;
        bool signs = true;
    };
    auto row = [](double p) {
        Row r;
        for (auto [a, b] : std::vector<std::pair<double, double>>{{1, 1}, {1, 2}, {2, 1}, {p, 1}}) {
            const double r10 = I1(a, b, 10.0, p).ratio, r14 = I1(a, b, 14.0, p).ratio;
            r.drift = std::max(r.drift, std::abs(r14 / r10 - 1.0));
        }
        const std::vector<double> c = {-12.0, 0.0, 12.0};
        const double am = A_ijl(1, 1, 0, c, p), ap = A_ijl(1, 1, 2, c, p);
        r.signs = am < 0.0 && ap > 0.0;
        const double scale = std::exp(-2.0 * 12.0 / (p - 1.0));
        for (double v : {am, ap}) r.c1dev = std::max(r.c1dev, std::abs(std::abs(v) / scale / c1_triple(p) - 1.0));
        return r;
    };
    const Row r3 = row(3.0), r2 = row(2.0);
    // p = 2 is informational: with alpha = beta = 1 the exact ratio is 16 kappa0^2 (1 - 1/gap) up to
    // exponentially small terms, a 3.2% drift between gaps 10 and 14.
    return {r3.drift < 0.03 && r3.signs && r3.c1dev <= 0.03,
            "p=3: I1 drift " + fmt("%.3g", r3.drift) + " (< 0.03), A signs " + (r3.signs ? "-,+" : "wrong") +
                ", |A| vs c1_triple " + fmt("%.3g", r3.c1dev) + " (<= 0.03); p=2 info: drift " +
                fmt("%.3g", r2.drift) + ", A signs " + (r2.signs ? "-,+" : "wrong") + ", c1 dev " +
                fmt("%.3g", r2.c1dev)};
}

// ---- shared physical runs

struct Scan {
    Evolution evo;
    BlowupCurve curve;
    CauchyData data;
    PresetInfo info;
};

Scan scan(const std::string& preset, Variant variant, double dx, bool classify, double snapshot_dt = 0.001) {
    const Params params(3.0, variant);
    Scan s;
    s.info = preset_info(preset);
    PresetOptions po;
    po.dx = dx;
    s.data = make_preset(preset, params, po);
    PhysicalControls pc;
    pc.window_lo = s.info.window_lo;
    pc.window_hi = s.info.window_hi;
    pc.t_end = s.info.t_end;
    pc.snapshot_dt = snapshot_dt;
    s.evo = evolve_u(s.data, params, pc);
    TFitControls fit;
    fit.fallback_level = pc.fallback_level;
    s.curve = scan_blowup_curve(s.evo, s.info.window_lo, s.info.window_hi, params, fit);
    if (classify) classify_all(s.curve, s.evo, params);
    return s;
}

// ---- 9: constant data

Outcome constant_exact() {
    const Scan s = scan("constant-exact", Variant::Signed, 1.0 / 256, false);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, qual = 0.0;
    for (std::size_t j = 0; j < s.curve.T.size(); ++j) {
        lo = std::min(lo, s.curve.T[j]);
        hi = std::max(hi, s.curve.T[j]);
        if (std::isfinite(s.curve.quality[j])) qual = std::max(qual, s.curve.quality[j]);
    }
    const double mid = 0.5 * (lo + hi);
    return {std::abs(mid - 1.0) <= 0.01 && hi - lo <= std::max(1e-6, 10.0 * qual),
            "T " + fmt("%.6f", mid) + " vs 1 (<= 1%), spread " + fmt("%.2g", hi - lo)};
}

// ---- 10 and 12: odd data

struct OddRuns {
    Scan coarse, fine;
};

const OddRuns& odd_runs() {
    static const OddRuns runs = [] {
        OddRuns r;
        r.coarse = scan("odd-sine", Variant::Signed, 1.0 / 1024, true);
        r.fine = scan("odd-sine", Variant::Signed, 1.0 / 2048, true);
        return r;
    }();
    return runs;
}

Outcome odd_characteristic() {
    const OddRuns& runs = odd_runs();
    const Params params(3.0);
    const BlowupCurve& cv = runs.fine.curve;
    const int j0 = cv.index_of(0.0);
    const double T0 = cv.T[j0];
    bool strict = true;
    for (std::size_t j = 0; j < cv.x.size(); ++j)
        if (static_cast<int>(j) != j0 && !(cv.T[j] - T0 + std::abs(cv.x[j]) > 0.0)) strict = false;
    const ClassifyControls cc;
    const double tau_lo = resolvable_tau(cv, j0, cc);
    const auto series = energy_series(runs.fine.evo, 0.0, T0, params, cc, tau_lo, 10.0 * tau_lo);
    double emin = std::numeric_limits<double>::infinity();
    for (const auto& pr : series) emin = std::min(emin, pr.energy / soliton_energy(params));
    const BlowupCurve& cc0 = runs.coarse.curve;
    const int c0 = cc0.index_of(0.0);
    const bool pass = cv.cls[j0] == PointClass::S && cv.slope_l[j0] >= 0.9 && cv.slope_r[j0] <= -0.9 && strict &&
                      series.size() >= 5 && emin >= 2.0 * 0.9;
    return {pass, "dx=1/2048: x=0 " + to_string(cv.cls[j0]) + ", slopes " + fmt("%+.3f", cv.slope_l[j0]) + "/" +
                      fmt("%+.3f", cv.slope_r[j0]) + ", strict bound " + (strict ? "holds" : "fails") +
                      ", min E/E(kappa0) " + fmt("%.3f", emin) + " over tau in [" + fmt("%.3g", tau_lo) + ", " +
                      fmt("%.3g", 10 * tau_lo) + "] (" + std::to_string(series.size()) + " probes, >= 1.8)" +
                      "; dx=1/1024: " + to_string(cc0.cls[c0]) + ", slopes " + fmt("%+.3f", cc0.slope_l[c0]) + "/" +
                      fmt("%+.3f", cc0.slope_r[c0])};
}

Outcome signed_line_tracks() {
    const OddRuns& runs = odd_runs();
    const Params params(3.0);
    const BlowupCurve& cv = runs.fine.curve;
    const int j0 = cv.index_of(0.0);
    const double T0 = cv.T[j0];
    const ClassifyControls cc;
    const double tau_lo = resolvable_tau(cv, j0, cc);
    const SignedLines lines = signed_lines(runs.fine.evo, 0.0, T0, params, tau_lo, 10.0 * tau_lo, cc);
    int converging_pos = 0, converging_neg = 0;
    for (const auto& tr : lines.tracks) {
        if (tr.size() < 5) continue;
        bool fixed_sign = true;
        double zmax = 0.0;
        for (const auto& pt : tr) {
            if (pt.sign != tr.front().sign || (pt.u > 0.0 ? 1 : -1) != pt.sign) fixed_sign = false;
            zmax = std::max(zmax, std::abs(pt.z));
        }
        const TrackPoint& last = tr.back();
        const bool converging = std::abs(last.z) <= 0.5 * zmax && std::abs(last.z) < T0 - last.t;
        if (fixed_sign && converging) (tr.front().sign > 0 ? converging_pos : converging_neg)++;
    }
    const bool pass = converging_pos + converging_neg >= 2 && converging_pos >= 1 && converging_neg >= 1;
    return {pass, std::to_string(lines.tracks.size()) + " tracks, converging to x=0: " +
                      std::to_string(converging_pos) + " positive, " + std::to_string(converging_neg) + " negative"};
}

// ---- 11: nonnegativity exclusions

Outcome exclusions() {
    const Params unsigned_params(3.0, Variant::Unsigned);
    const Scan g = scan("gaussian-positive", Variant::Signed, 1.0 / 512, true, 0.002);
    int s_points = g.curve.count(PointClass::S);
    std::string detail = "gaussian signed S=" + std::to_string(s_points);
    int violations = 0;
    for (const std::string preset : {"gaussian-positive", "odd-sine"}) {
        const Scan u = scan(preset, Variant::Unsigned, 1.0 / 512, true, 0.002);
        const int su = u.curve.count(PointClass::S);
        double tmax = 0.0;
        for (double t : u.curve.T)
            if (std::isfinite(t)) tmax = std::max(tmax, t);
        const double R = std::max(std::abs(u.info.window_lo), std::abs(u.info.window_hi));
        const LowerBoundReport lb = lower_bound_monitor(u.evo, u.data, R, tmax, unsigned_params);
        s_points += su;
        violations += lb.violations;
        detail += ", " + preset + " unsigned S=" + std::to_string(su) + " (R=" + std::to_string(u.curve.count(PointClass::R)) +
                  "), min u " + fmt("%.3g", lb.min_u) + " >= -M " + fmt("%.3g", -lb.M);
    }
    return {s_points == 0 && violations == 0, detail + ", monitor violations " + std::to_string(violations)};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nlwlab acceptance criteria"};
    std::vector<int> only;
    app.add_option("--only", only, "criterion numbers to run")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all = {
        {1, "soliton stationarity", stationarity},
        {2, "energy law", energy_law},
        {3, "projector orthonormality", orthonormality},
        {4, "toda closed form k=2", toda_closed_form},
        {5, "equidistribution pattern", equid},
        {6, "sign alternation dichotomy", dichotomy},
        {7, "modulation recovery", modulation_recovery},
        {8, "integral table", integral_table},
        {9, "constant data blow-up time", constant_exact},
        {10, "odd data characteristic point", odd_characteristic},
        {11, "nonnegativity exclusions", exclusions},
        {12, "signed lines", signed_line_tracks},
    };
    const std::set<int> pick(only.begin(), only.end());
    int failed = 0;
    for (const auto& c : all) {
        if (!pick.empty() && !pick.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        std::printf("[%s] %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
