#include "evospec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>

#include "evospec/bounds.hpp"
#include "evospec/csv.hpp"
#include "evospec/errors.hpp"
#include "evospec/quantum_sim.hpp"
#include "evospec/states.hpp"
#include "json.hpp"

namespace evospec {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string scheme_name(Scheme s) { return s == Scheme::Gamma ? "gamma" : "per_term"; }
std::string mode_name(TimeMode m) { return m == TimeMode::RealTime ? "real_time" : "imaginary_time"; }
std::string boundary_name(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }
std::string policy_name(ExecPolicy p) { return p == ExecPolicy::Serial ? "serial" : "parallel"; }

Scheme scheme_from(const std::string& s) {
    if (s == "gamma") return Scheme::Gamma;
    if (s == "per_term") return Scheme::PerTerm;
    throw ConfigError("unknown Trotter scheme '" + s + "'");
}
Boundary boundary_from(const std::string& s) {
    if (s == "open") return Boundary::Open;
    if (s == "periodic") return Boundary::Periodic;
    throw ConfigError("unknown boundary '" + s + "'");
}
ExecPolicy policy_from(const std::string& s) {
    if (s == "serial") return ExecPolicy::Serial;
    if (s == "parallel") return ExecPolicy::Parallel;
    throw ConfigError("unknown execution policy '" + s + "'");
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("field '") + key + "' has the wrong type");
    }
}

std::string read_string(const json& j, const char* key, const std::string& fallback) {
    std::string s = fallback;
    read(j, key, s);
    return s;
}

CsvMeta base_meta(const ExperimentConfig& cfg, const std::string& run) {
    return {{"run", run}, {"config_hash", hex64(config_hash(cfg))}, {"seed", std::to_string(cfg.seed)}};
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

void write_json(const std::string& path, const json& j) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << j.dump(2) << '\n';
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

std::vector<double> exact_levels(const LocalHamiltonian& h) {
    if (h.n() > kDenseCap) return {};
    return exact_spectrum(h);
}

void check_real_time_window(PipelineResult& r, const ShiftedHamiltonian& sh, double dt) {
    if (r.spectrum.size() < 2) {
        r.warnings.push_back("real-time step not verified: n exceeds the dense cap");
        return;
    }
    const double top = (r.spectrum[1] - sh.total_shift) * dt;
    if (top >= kTwoPi || r.spectrum[0] - sh.total_shift < 0.0)
        r.warnings.push_back("shifted ground and first excited energies times dt leave [0, 2pi)");
}

void finish(PipelineResult& r, double TF) {
    r.estimate = recover(r.signal, TF, &r.rank_fallback);
    if (r.spectrum.size() >= 2) r.levels = score_levels(r.estimate.energies, r.spectrum[0], r.spectrum[1]);
    if (r.estimate.complex_pole_warning) r.warnings.push_back("complex pole on a decaying signal");
}

// JSON cannot hold inf; non-finite values become null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json levels_json(const LevelErrors& l) {
    return {{"ground_estimate", finite_or_null(l.ground_estimate)},
            {"excited_estimate", finite_or_null(l.excited_estimate)},
            {"ground_rel_error", finite_or_null(l.ground_rel_error)},
            {"excited_rel_error", finite_or_null(l.excited_rel_error)},
            {"unassigned", l.unassigned}};
}

double median(std::vector<double> v) {
    if (v.empty()) return nan();
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

void ExperimentConfig::validate() const {
    require(n >= 1 && n <= 62, "n must lie in [1, 62]");
    require(boundary == Boundary::Open || n >= 3, "periodic boundary needs n >= 3");
    require(std::isfinite(J) && std::isfinite(g), "J and g must be finite");
    require(state == "plus_product" || state == "phi_optimal", "state must be plus_product or phi_optimal");
    require(tau_step > 0.0 && std::isfinite(tau_step), "tau_step must be positive");
    require(dt > 0.0 && std::isfinite(dt), "dt must be positive");
    require(K >= 2 && K % 2 == 0, "K must be even and >= 2");
    require(trotter.M >= 1, "M must be >= 1");
    require(trotter.order == 1 || (trotter.order >= 2 && trotter.order % 2 == 0), "Trotter order must be 1 or even");
    require(num_samples >= 1, "num_samples must be >= 1");
    require(q >= 1 && static_cast<std::size_t>(q) <= num_samples, "q must lie in [1, num_samples]");
    require(TF > 0.0 && TF < 1.0, "TF must lie in (0, 1)");
    require(repetitions >= 1, "repetitions must be >= 1");
    require(!K_sweep.empty(), "K_sweep must not be empty");
    for (int k : K_sweep) require(k >= 2 && k % 2 == 0, "K_sweep entries must be even and >= 2");
    require(!g_sweep.empty(), "g_sweep must not be empty");
    for (double v : g_sweep) require(std::isfinite(v), "g_sweep entries must be finite");
    require(!sigma_sweep.empty(), "sigma_sweep must not be empty");
    for (std::size_t s : sigma_sweep) require(s >= static_cast<std::size_t>(q), "sigma_sweep entries must be >= q");
    require(!M_sweep.empty(), "M_sweep must not be empty");
    for (int m : M_sweep) require(m >= 1, "M_sweep entries must be >= 1");
    require(trotter_time > 0.0, "trotter_time must be positive");
    require(S >= 1 && S <= 8, "S must lie in [1, 8]");
    require(audit_instances >= 1, "audit_instances must be >= 1");
    require(audit_S_max >= 1 && audit_S_max <= 4, "audit_S_max must lie in [1, 4]");
    require(!out_dir.empty(), "out_dir must not be empty");
}

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known{
        "n",     "J",         "g",          "boundary",        "state",        "tau_step",    "dt",
        "K",     "trotter",   "num_samples", "q",              "estimator",    "TF",          "seed",
        "repetitions", "K_sweep", "g_sweep", "sigma_sweep",    "M_sweep",      "trotter_time", "S",
        "audit_instances", "audit_S_max", "out_dir", "policy"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw ConfigError("unknown key '" + key + "'");

    ExperimentConfig c;
    read(j, "n", c.n);
    read(j, "J", c.J);
    read(j, "g", c.g);
    c.boundary = boundary_from(read_string(j, "boundary", boundary_name(c.boundary)));
    read(j, "state", c.state);
    read(j, "tau_step", c.tau_step);
    read(j, "dt", c.dt);
    read(j, "K", c.K);
    if (j.contains("trotter")) {
        const json& t = j.at("trotter");
        if (!t.is_object()) throw ConfigError("field 'trotter' must be an object");
        for (const auto& [key, value] : t.items())
            if (key != "order" && key != "M" && key != "scheme") throw ConfigError("unknown key 'trotter." + key + "'");
        read(t, "order", c.trotter.order);
        read(t, "M", c.trotter.M);
        c.trotter.scheme = scheme_from(read_string(t, "scheme", scheme_name(c.trotter.scheme)));
    }
    read(j, "num_samples", c.num_samples);
    read(j, "q", c.q);
    c.estimator = estimator_from_string(read_string(j, "estimator", to_string(c.estimator)));
    read(j, "TF", c.TF);
    read(j, "seed", c.seed);
    read(j, "repetitions", c.repetitions);
    read(j, "K_sweep", c.K_sweep);
    read(j, "g_sweep", c.g_sweep);
    read(j, "sigma_sweep", c.sigma_sweep);
    read(j, "M_sweep", c.M_sweep);
    read(j, "trotter_time", c.trotter_time);
    read(j, "S", c.S);
    read(j, "audit_instances", c.audit_instances);
    read(j, "audit_S_max", c.audit_S_max);
    read(j, "out_dir", c.out_dir);
    c.policy = policy_from(read_string(j, "policy", policy_name(c.policy)));
    c.validate();
    return c;
}

namespace {

json config_json(const ExperimentConfig& c) {
    return {{"n", c.n},
            {"J", c.J},
            {"g", c.g},
            {"boundary", boundary_name(c.boundary)},
            {"state", c.state},
            {"tau_step", c.tau_step},
            {"dt", c.dt},
            {"K", c.K},
            {"trotter", {{"order", c.trotter.order}, {"M", c.trotter.M}, {"scheme", scheme_name(c.trotter.scheme)}}},
            {"num_samples", c.num_samples},
            {"q", c.q},
            {"estimator", to_string(c.estimator)},
            {"TF", c.TF},
            {"seed", c.seed},
            {"repetitions", c.repetitions},
            {"K_sweep", c.K_sweep},
            {"g_sweep", c.g_sweep},
            {"sigma_sweep", c.sigma_sweep},
            {"M_sweep", c.M_sweep},
            {"trotter_time", c.trotter_time},
            {"S", c.S},
            {"audit_instances", c.audit_instances},
            {"audit_S_max", c.audit_S_max},
            {"out_dir", c.out_dir},
            {"policy", policy_name(c.policy)}};
}

}  // namespace

std::string to_json(const ExperimentConfig& cfg) { return config_json(cfg).dump(2); }

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    json j = config_json(cfg);
    j.erase("out_dir");
    j.erase("policy");
    return fnv1a(j.dump());
}

LevelErrors score_levels(const std::vector<double>& estimates, double e_ground, double e_excited) {
    const double inf = std::numeric_limits<double>::infinity();
    double best_g = inf, best_e = inf;
    LevelErrors out;
    out.ground_estimate = out.excited_estimate = nan();
    int assigned = 0;
    for (double e : estimates) {
        const double dg = std::abs(e - e_ground), de = std::abs(e - e_excited);
        if (dg <= de) {
            if (dg < best_g) best_g = dg, out.ground_estimate = e;
        } else if (de < best_e) {
            best_e = de, out.excited_estimate = e;
        }
    }
    assigned = (best_g < inf) + (best_e < inf);
    out.ground_rel_error = best_g < inf ? best_g / std::abs(e_ground) : inf;
    out.excited_rel_error = best_e < inf ? best_e / std::abs(e_excited) : inf;
    out.unassigned = static_cast<int>(estimates.size()) - assigned;
    return out;
}

SpectralEstimate recover(const Signal& s, double TF, bool* rank_fallback) {
    SpectralEstimate est;
    bool fell_back = false;
    try {
        est = filtered_esprit(s.values, TF);
    } catch (const RankError&) {
        est = esprit(s.values, s.K() / 2);
        est.TF = TF;
        fell_back = true;
    }
    if (rank_fallback) *rank_fallback = fell_back;
    apply_energy_map(est, s.kind, s.map);
    return est;
}

PipelineResult run_mc_pipeline(const ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const LocalHamiltonian h = cfg.hamiltonian();
    const ShiftedHamiltonian sh = shift_terms(h);
    const StatePtr state = make_state(cfg.state, cfg.n);
    McConfig mc;
    mc.step = cfg.tau_step;
    mc.K = cfg.K;
    mc.trotter = cfg.trotter;
    mc.num_samples = cfg.num_samples;
    mc.q = cfg.q;
    mc.estimator = cfg.estimator;
    mc.seed = seed;
    mc.policy = cfg.policy;

    PipelineResult r;
    r.pipeline = "mc";
    r.seed = seed;
    r.signal.kind = SignalKind::ImaginaryTime;
    r.signal.map = EnergyMap{cfg.tau_step, sh.total_shift, 1.0, 0.0};
    for (const auto& e : estimate_signal(*state, sh.base, mc)) {
        r.signal.values.emplace_back(e.value, 0.0);
        r.signal.num_samples.push_back(e.num_samples);
        r.stderr_proxy.push_back(e.stderr_proxy);
    }
    r.spectrum = exact_levels(h);
    finish(r, cfg.TF);
    return r;
}

PipelineResult run_quantum_pipeline(const ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const LocalHamiltonian h = cfg.hamiltonian();
    const ShiftedHamiltonian sh = shift_terms(h);
    const StateVector phi = make_state_vector(make_state(cfg.state, cfg.n)->dense(kStateVectorCap));
    QuantumConfig qc;
    qc.dt = cfg.dt;
    qc.trotter = cfg.trotter;
    qc.num_samples = cfg.num_samples;
    qc.seed = seed;
    qc.policy = cfg.policy;

    PipelineResult r;
    r.pipeline = "quantum";
    r.seed = seed;
    r.signal.kind = SignalKind::RealTime;
    r.signal.map = EnergyMap{cfg.dt, sh.total_shift, 1.0, 0.0};
    r.signal.values = estimate_gR_series(phi, sh.base, cfg.K, qc);
    r.signal.values[0] = 1.0;  // F(0) = 1 exactly; no measurement needed
    r.signal.num_samples.assign(r.signal.values.size(), cfg.num_samples);
    r.signal.num_samples[0] = 0;
    r.spectrum = exact_levels(h);
    check_real_time_window(r, sh, cfg.dt);
    finish(r, cfg.TF);
    return r;
}

PipelineResult run_dequant_pipeline(const ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const LocalHamiltonian h = cfg.hamiltonian();
    const RescaledHamiltonian rh = rescale_into_half_band(h);
    const StatePtr state = make_state(cfg.state, cfg.n);
    DequantConfig dc;
    dc.num_samples = cfg.num_samples;
    dc.q = cfg.q;
    dc.estimator = cfg.estimator;
    dc.seed = seed;
    dc.policy = cfg.policy;

    PipelineResult r;
    r.pipeline = "dequant";
    r.seed = seed;
    r.signal.kind = SignalKind::OneMinusH;
    r.signal.map = EnergyMap{1.0, -rh.shift, rh.scale, 0.0};
    for (int k = 0; k <= cfg.K; ++k) {
        const SignalEstimate e = estimate_gD(*state, rh, k, dc);
        r.signal.values.emplace_back(e.value, 0.0);
        r.signal.num_samples.push_back(e.num_samples);
        r.stderr_proxy.push_back(e.stderr_proxy);
    }
    r.spectrum = exact_levels(h);
    finish(r, cfg.TF);
    return r;
}

void write_signal_csv(const std::string& path, const PipelineResult& r, const ExperimentConfig& cfg) {
    CsvMeta meta = base_meta(cfg, "signal");
    meta[2].second = std::to_string(r.seed);
    meta.emplace_back("pipeline", r.pipeline);
    meta.emplace_back("kind", to_string(r.signal.kind));
    meta.emplace_back("step", format_double(r.signal.map.step));
    meta.emplace_back("shift", format_double(r.signal.map.offset));
    meta.emplace_back("scale", format_double(r.signal.map.scale));
    const std::size_t n = r.signal.values.size();
    if (r.signal.kind == SignalKind::RealTime) {
        CsvTable t({"k", "re", "im", "num_samples", "seed"});
        for (std::size_t k = 0; k < n; ++k)
            t.row() << static_cast<int>(k) << r.signal.values[k].real() << r.signal.values[k].imag()
                    << r.signal.num_samples[k] << r.seed;
        t.write(path, meta);
    } else {
        CsvTable t({"k", "value", "stderr_proxy", "num_samples", "q", "seed"});
        for (std::size_t k = 0; k < n; ++k)
            t.row() << static_cast<int>(k) << r.signal.values[k].real() << r.stderr_proxy[k] << r.signal.num_samples[k]
                    << cfg.q << r.seed;
        t.write(path, meta);
    }
}

std::string to_json(const PipelineResult& r) {
    json values = json::array();
    for (const cplx& v : r.signal.values) values.push_back({{"re", v.real()}, {"im", v.imag()}});
    json j = {{"pipeline", r.pipeline},
              {"seed", r.seed},
              {"kind", to_string(r.signal.kind)},
              {"map",
               {{"step", r.signal.map.step},
                {"offset", r.signal.map.offset},
                {"scale", r.signal.map.scale},
                {"rate_correction", r.signal.map.rate_correction}}},
              {"signal", values},
              {"stderr_proxy", r.stderr_proxy},
              {"estimate", json::parse(to_json(r.estimate))},
              {"rank_fallback", r.rank_fallback},
              {"exact_spectrum", r.spectrum},
              {"warnings", r.warnings}};
    if (r.spectrum.size() >= 2) j["levels"] = levels_json(r.levels);
    return j.dump(2);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs two or more points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("log-log fit needs positive data");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        den += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return num / den;
}

std::vector<double> random_energies(int S, double lo, double hi, double min_gap, Rng& rng) {
    if (S < 1 || !(hi > lo)) throw InvalidArgument("random_energies needs S >= 1 and hi > lo");
    if ((S - 1) * min_gap * kTwoPi >= hi - lo) throw InvalidArgument("separation cannot fit in the interval");
    for (;;) {
        std::vector<double> e;
        for (int i = 0; i < S; ++i) e.push_back(lo + (hi - lo) * uniform01(rng));
        if (S == 1 || eigenvalue_gap(e) >= min_gap) return e;
    }
}

std::vector<cplx> synthetic_signal(const std::vector<double>& energies, const std::vector<double>& c, SignalKind kind,
                                   int K) {
    if (energies.size() != c.size()) throw InvalidSize("energies and weights differ in length");
    std::vector<cplx> y(static_cast<std::size_t>(K + 1), cplx(0.0));
    for (std::size_t j = 0; j < energies.size(); ++j) {
        const cplx z = energy_to_pole(energies[j], kind);
        cplx p = 1.0;
        for (int k = 0; k <= K; ++k) {
            y[static_cast<std::size_t>(k)] += c[j] * p;
            p *= z;
        }
    }
    return y;
}

RunReport run_figure2_analog(const ExperimentConfig& cfg) {
    cfg.validate();
    RunReport rep;
    CsvTable truth({"kind", "index", "energy"});
    CsvTable est({"kind", "K", "S_used", "index", "energy", "coverage_distance"});
    json summary = {{"run", "figure2"}, {"S", cfg.S}};
    const int Kmax = std::max(4 * cfg.S, 2 * cfg.S + 4);
    for (SignalKind kind : {SignalKind::ImaginaryTime, SignalKind::RealTime}) {
        Rng rng = make_rng(cfg.seed, stream_id(2, static_cast<std::uint64_t>(kind)));
        const std::vector<double> e = random_energies(cfg.S, 0.0, kTwoPi, 0.02, rng);
        const std::vector<double> c(e.size(), 1.0 / cfg.S);
        for (std::size_t i = 0; i < e.size(); ++i) truth.row() << to_string(kind) << static_cast<int>(i) << e[i];
        const std::vector<cplx> full = synthetic_signal(e, c, kind, Kmax);
        int recovered_at = -1;
        json per_k = json::array();
        for (int K = 2; K <= Kmax; K += 2) {
            const std::vector<cplx> y(full.begin(), full.begin() + K + 1);
            const int S_used = std::min(cfg.S, K / 2);
            SpectralEstimate s = esprit(y, S_used);
            apply_energy_map(s, kind, EnergyMap{});
            const double d = coverage_distance(e, s.energies);
            for (std::size_t i = 0; i < s.energies.size(); ++i)
                est.row() << to_string(kind) << K << S_used << static_cast<int>(i) << s.energies[i] << d;
            if (recovered_at < 0 && S_used == cfg.S && d < 1e-7) recovered_at = K;
            per_k.push_back({{"K", K}, {"coverage_distance", d}});
        }
        summary[to_string(kind)] = {{"energies", e}, {"recovered_at_K", recovered_at}, {"per_K", per_k}};
    }
    CsvMeta meta = base_meta(cfg, "figure2");
    meta.emplace_back("S", std::to_string(cfg.S));
    rep.files = {out_path(cfg, "figure2_true.csv"), out_path(cfg, "figure2_estimates.csv"),
                 out_path(cfg, "figure2_summary.json")};
    truth.write(rep.files[0], meta);
    est.write(rep.files[1], meta);
    write_json(rep.files[2], summary);
    rep.summary = summary.dump(2);
    return rep;
}

RunReport run_figure3_analog(const ExperimentConfig& cfg) {
    cfg.validate();
    RunReport rep;
    json summary = {{"run", "figure3"}, {"traces", json::array()}};
    const LocalHamiltonian h = cfg.hamiltonian();
    const ShiftedHamiltonian sh = shift_terms(h);
    const bool dense_ok = cfg.n <= kDenseCap;
    const CMat hd = dense_ok ? dense_matrix(sh.base) : CMat();

    for (const std::string state : {"plus_product", "phi_optimal"}) {
        ExperimentConfig c = cfg;
        c.state = state;
        const CVec phi_dense = make_state(state, cfg.n)->dense(kStateVectorCap);
        const StateVector phi = make_state_vector(phi_dense);

        // Imaginary time: MC estimates against the Trotterized and exact oracles.
        {
            const PipelineResult r = run_mc_pipeline(c, cfg.seed);
            const Signal exact = dense_ok ? exact_signal(phi_dense, hd, cfg.tau_step, cfg.K, SignalKind::ImaginaryTime)
                                          : Signal{};
            CsvTable t({"k", "value", "stderr_proxy", "num_samples", "q", "seed", "trotter_oracle", "exact"});
            double worst = 0.0;
            bool monotone = true;
            for (int k = 0; k <= cfg.K; ++k) {
                const auto kk = static_cast<std::size_t>(k);
                const double trot =
                    trotterized_overlap(phi, sh.base, k * cfg.tau_step, cfg.trotter, TimeMode::ImaginaryTime).real();
                const double v = r.signal.values[kk].real();
                worst = std::max(worst, std::abs(v - trot));
                if (k > 0 && v > r.signal.values[kk - 1].real() + 3.0 * (r.stderr_proxy[kk] + r.stderr_proxy[kk - 1]))
                    monotone = false;
                t.row() << k << v << r.stderr_proxy[kk] << r.signal.num_samples[kk] << cfg.q << cfg.seed << trot
                        << (dense_ok ? exact.values[kk].real() : nan());
            }
            const std::string name = "figure3_" + state + "_imaginary_time.csv";
            CsvMeta meta = base_meta(cfg, "figure3");
            meta.emplace_back("state", state);
            meta.emplace_back("kind", "imaginary_time");
            meta.emplace_back("step", format_double(cfg.tau_step));
            meta.emplace_back("shift", format_double(sh.total_shift));
            t.write(out_path(cfg, name), meta);
            rep.files.push_back(out_path(cfg, name));
            summary["traces"].push_back({{"file", name},
                                         {"state", state},
                                         {"kind", "imaginary_time"},
                                         {"k0", r.signal.values[0].real()},
                                         {"max_abs_deviation_from_trotter_oracle", worst},
                                         {"monotone_within_noise", monotone}});
        }
        // Real time: Hadamard-test estimates, real and imaginary parts.
        {
            const PipelineResult r = run_quantum_pipeline(c, cfg.seed);
            const Signal exact =
                dense_ok ? exact_signal(phi_dense, hd, cfg.dt, cfg.K, SignalKind::RealTime) : Signal{};
            CsvTable t({"k", "re", "im", "num_samples", "seed", "trotter_oracle_re", "trotter_oracle_im", "exact_re",
                        "exact_im"});
            double worst = 0.0;
            for (int k = 0; k <= cfg.K; ++k) {
                const auto kk = static_cast<std::size_t>(k);
                const cplx trot = trotterized_overlap(phi, sh.base, k * cfg.dt, cfg.trotter, TimeMode::RealTime);
                worst = std::max(worst, std::abs(r.signal.values[kk] - trot));
                t.row() << k << r.signal.values[kk].real() << r.signal.values[kk].imag() << r.signal.num_samples[kk]
                        << cfg.seed << trot.real() << trot.imag() << (dense_ok ? exact.values[kk].real() : nan())
                        << (dense_ok ? exact.values[kk].imag() : nan());
            }
            const std::string name = "figure3_" + state + "_real_time.csv";
            CsvMeta meta = base_meta(cfg, "figure3");
            meta.emplace_back("state", state);
            meta.emplace_back("kind", "real_time");
            meta.emplace_back("step", format_double(cfg.dt));
            meta.emplace_back("shift", format_double(sh.total_shift));
            t.write(out_path(cfg, name), meta);
            rep.files.push_back(out_path(cfg, name));
            summary["traces"].push_back({{"file", name},
                                         {"state", state},
                                         {"kind", "real_time"},
                                         {"k0", r.signal.values[0].real()},
                                         {"max_abs_deviation_from_trotter_oracle", worst},
                                         {"warnings", r.warnings}});
        }
    }
    rep.files.push_back(out_path(cfg, "figure3_summary.json"));
    write_json(rep.files.back(), summary);
    rep.summary = summary.dump(2);
    return rep;
}

RunReport run_figure4_analog(const ExperimentConfig& cfg) {
    cfg.validate();
    RunReport rep;
    json summary = {{"run", "figure4"}};

    // Spectral estimates against g and K.
    CsvTable spectrum_rows({"g", "index", "energy"});
    CsvTable vs_g({"g", "K", "pipeline", "index", "energy", "S_effective", "rank_fallback"});
    json g_runs = json::array();
    for (double g : cfg.g_sweep) {
        ExperimentConfig c = cfg;
        c.g = g;
        const std::vector<double> levels = exact_levels(c.hamiltonian());
        for (std::size_t i = 0; i < std::min<std::size_t>(levels.size(), 4); ++i)
            spectrum_rows.row() << g << static_cast<int>(i) << levels[i];
        for (int K : cfg.K_sweep) {
            c.K = K;
            for (const PipelineResult& r : {run_mc_pipeline(c, cfg.seed), run_quantum_pipeline(c, cfg.seed)}) {
                for (std::size_t i = 0; i < r.estimate.energies.size(); ++i)
                    vs_g.row() << g << K << r.pipeline << static_cast<int>(i) << r.estimate.energies[i]
                               << r.estimate.S_effective << static_cast<int>(r.rank_fallback);
                g_runs.push_back({{"g", g},
                                  {"K", K},
                                  {"pipeline", r.pipeline},
                                  {"S_effective", r.estimate.S_effective},
                                  {"ground_rel_error", finite_or_null(r.levels.ground_rel_error)},
                                  {"excited_rel_error", finite_or_null(r.levels.excited_rel_error)},
                                  {"warnings", r.warnings}});
            }
        }
    }
    summary["vs_g"] = g_runs;

    // Relative errors against |Sigma| at the configured g and K.
    CsvTable vs_sigma({"num_samples", "rep", "seed", "pipeline", "ground_estimate", "ground_rel_error",
                       "excited_estimate", "excited_rel_error", "unassigned"});
    json sigma_runs = json::array();
    for (std::size_t sigma : cfg.sigma_sweep) {
        ExperimentConfig c = cfg;
        c.num_samples = sigma;
        std::vector<double> mc_ground, q_ground;
        int quantum_not_worse = 0;
        for (int rep_i = 0; rep_i < cfg.repetitions; ++rep_i) {
            const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(rep_i);
            const PipelineResult mc = run_mc_pipeline(c, seed);
            const PipelineResult qu = run_quantum_pipeline(c, seed);
            for (const PipelineResult* r : {&mc, &qu})
                vs_sigma.row() << sigma << rep_i << seed << r->pipeline << r->levels.ground_estimate
                               << r->levels.ground_rel_error << r->levels.excited_estimate
                               << r->levels.excited_rel_error << r->levels.unassigned;
            mc_ground.push_back(mc.levels.ground_rel_error);
            q_ground.push_back(qu.levels.ground_rel_error);
            quantum_not_worse += qu.levels.excited_rel_error <= mc.levels.excited_rel_error;
        }
        sigma_runs.push_back({{"num_samples", sigma},
                              {"median_ground_rel_error_mc", finite_or_null(median(mc_ground))},
                              {"median_ground_rel_error_quantum", finite_or_null(median(q_ground))},
                              {"quantum_excited_not_worse", quantum_not_worse},
                              {"repetitions", cfg.repetitions}});
    }
    summary["vs_sigma"] = sigma_runs;

    CsvMeta meta = base_meta(cfg, "figure4");
    meta.emplace_back("n", std::to_string(cfg.n));
    rep.files = {out_path(cfg, "figure4_spectrum.csv"), out_path(cfg, "figure4_vs_g.csv"),
                 out_path(cfg, "figure4_vs_sigma.csv"), out_path(cfg, "figure4_summary.json")};
    spectrum_rows.write(rep.files[0], meta);
    vs_g.write(rep.files[1], meta);
    vs_sigma.write(rep.files[2], meta);
    write_json(rep.files[3], summary);
    rep.summary = summary.dump(2);
    return rep;
}

RunReport run_trotter_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.n > kDenseCap) throw ResourceLimit("Trotter sweep needs n <= " + std::to_string(kDenseCap));
    const ShiftedHamiltonian sh = shift_terms(cfg.hamiltonian());
    const CVec phi = make_state(cfg.state, cfg.n)->dense();
    const CMat hd = dense_matrix(sh.base);
    const double t = cfg.trotter_time;

    CsvTable table({"scheme", "mode", "M", "error", "bound", "bound_valid"});
    json curves = json::array();
    bool all_below = true;
    for (Scheme scheme : {Scheme::PerTerm, Scheme::Gamma})
        for (TimeMode mode : {TimeMode::RealTime, TimeMode::ImaginaryTime}) {
            const SignalKind kind = mode == TimeMode::RealTime ? SignalKind::RealTime : SignalKind::ImaginaryTime;
            const cplx exact = exact_signal(phi, hd, t, 1, kind).values[1];
            std::vector<double> Ms, errs;
            bool below = true;
            for (int M : cfg.M_sweep) {
                const CVec v = apply_plan(sh.base, make_plan(sh.base, t, M, 1, mode, scheme), phi);
                const double err = std::abs(phi.dot(v) - exact);
                const TrotterBound b = first_order_error_bound(sh.base, t, M, mode, scheme);
                if (b.valid && err > b.value) below = false;
                table.row() << scheme_name(scheme) << mode_name(mode) << M << err << b.value
                            << static_cast<int>(b.valid);
                Ms.push_back(M);
                errs.push_back(err);
            }
            all_below = all_below && below;
            const bool fit = Ms.size() >= 2 && std::all_of(errs.begin(), errs.end(), [](double e) { return e > 0.0; });
            curves.push_back({{"scheme", scheme_name(scheme)},
                              {"mode", mode_name(mode)},
                              {"slope", fit ? json(loglog_slope(Ms, errs)) : json(nullptr)},
                              {"error_below_bound", below}});
        }
    json summary = {{"run", "trotter"}, {"curves", curves}, {"all_below_bound", all_below}};
    CsvMeta meta = base_meta(cfg, "trotter");
    meta.emplace_back("state", cfg.state);
    meta.emplace_back("time", format_double(t));
    meta.emplace_back("shift", format_double(sh.total_shift));
    RunReport rep;
    rep.files = {out_path(cfg, "trotter_sweep.csv"), out_path(cfg, "trotter_summary.json")};
    table.write(rep.files[0], meta);
    write_json(rep.files[1], summary);
    rep.summary = summary.dump(2);
    return rep;
}

namespace {

struct AuditInstance {
    int S = 1;
    int K = 2;
    double delta = 0.0;
    double C = 0.0;  // gap constant, oscillatory case only
    std::vector<double> energies;
    std::vector<double> c;
    SignalKind kind = SignalKind::RealTime;
};

AuditInstance make_instance(int theorem, int S_max, Rng& rng) {
    AuditInstance a;
    a.S = 1 + static_cast<int>(uniform01(rng) * S_max);
    for (int j = 0; j < a.S; ++j) a.c.push_back(0.2 + 0.8 * uniform01(rng));
    if (theorem == 6) {
        a.kind = SignalKind::RealTime;
        // Keep away from the 0 / 2pi wrap so the matching is not spoiled by aliasing.
        a.energies = random_energies(a.S, 0.3, kTwoPi - 0.3, 0.08, rng);
        a.delta = a.S >= 2 ? eigenvalue_gap(a.energies) : 1.0;
        a.C = 2.5 + 1.5 * uniform01(rng);
        a.K = std::max(static_cast<int>(std::ceil(2.0 * a.C / a.delta)), 2 * a.S - 1);
        a.K += a.K % 2;
        // The square-root argument must stay positive.
        while (1.0 - 2.0 * a.C * a.S / ((a.C - 1.0) * a.K) <= 0.0) a.K += 2;
    } else {
        a.kind = theorem == 7 ? SignalKind::ImaginaryTime : SignalKind::OneMinusH;
        const double hi = theorem == 7 ? kTwoPi : std::numbers::pi;
        a.energies = random_energies(a.S, 0.0, hi, 0.02, rng);
        // S = 1 has no gap; the bounds do not depend on it then.
        a.delta = a.S >= 2 ? eigenvalue_gap(a.energies) : 0.5;
        a.K = a.S * (uniform01(rng) < 0.5 ? 2 : 4);
    }
    return a;
}

RecoveryBoundReport theorem_report(int theorem, const AuditInstance& a, double c_min, double noise) {
    switch (theorem) {
        case 6: return bound_theorem6(a.S, a.C, a.K, c_min, noise);
        case 7: return bound_theorem7(a.S, a.delta, a.K, c_min, noise);
        default: return bound_theorem8(a.S, a.delta, a.K, c_min, noise);
    }
}

}  // namespace

RunReport run_bounds_audit(const ExperimentConfig& cfg) {
    cfg.validate();
    CsvTable table({"theorem", "instance", "S", "K", "delta", "C", "c_min", "noise_norm", "condition_rhs",
                    "condition_satisfied", "distance", "bound"});
    json summary = {{"run", "bounds"}};
    bool clean = true;
    for (int theorem : {6, 7, 8}) {
        Rng rng = make_rng(cfg.seed, stream_id(6, static_cast<std::uint64_t>(theorem)));
        int satisfied = 0, excluded = 0, violations = 0, instance = 0;
        double worst_ratio = 0.0;
        const int max_attempts = 20 * cfg.audit_instances;
        while (satisfied < cfg.audit_instances && instance < max_attempts) {
            const AuditInstance a = make_instance(theorem, cfg.audit_S_max, rng);
            const double c_min = *std::min_element(a.c.begin(), a.c.end());
            std::vector<cplx> y = synthetic_signal(a.energies, a.c, a.kind, a.K);

            // Random noise scaled so that ||H(eta)|| = f * condition_rhs with f in (0, 1.25).
            std::vector<cplx> eta(y.size());
            for (auto& e : eta) {
                const double re = 2.0 * uniform01(rng) - 1.0;
                const double im = a.kind == SignalKind::RealTime ? 2.0 * uniform01(rng) - 1.0 : 0.0;
                e = cplx(re, im);
            }
            const double rhs = theorem_report(theorem, a, c_min, 0.0).condition_rhs;
            const double f = 1.25 * (1.0 - uniform01(rng));
            const double unit = hankel_noise_norms(eta).spectral;
            for (auto& e : eta) e *= f * rhs / unit;
            const double noise = hankel_noise_norms(eta).spectral;
            for (std::size_t k = 0; k < y.size(); ++k) y[k] += eta[k];

            const RecoveryBoundReport r = theorem_report(theorem, a, c_min, noise);
            SpectralEstimate est = esprit(y, a.S);
            apply_energy_map(est, a.kind, EnergyMap{});
            const double d = matching_distance(a.energies, est.energies);
            table.row() << theorem << instance << a.S << a.K << a.delta << a.C << c_min << noise << r.condition_rhs
                        << static_cast<int>(r.condition_satisfied) << d << r.distance_bound;
            ++instance;
            if (!r.condition_satisfied) {
                ++excluded;
                continue;
            }
            ++satisfied;
            if (d > r.distance_bound) ++violations;
            if (r.distance_bound > 0.0) worst_ratio = std::max(worst_ratio, d / r.distance_bound);
        }
        clean = clean && violations == 0 && satisfied >= cfg.audit_instances;
        summary["theorem" + std::to_string(theorem)] = {{"satisfied", satisfied},
                                                        {"excluded", excluded},
                                                        {"violations", violations},
                                                        {"max_distance_over_bound", worst_ratio}};
    }
    summary["violations_total_zero"] = clean;
    CsvMeta meta = base_meta(cfg, "bounds");
    meta.emplace_back("S_max", std::to_string(cfg.audit_S_max));
    RunReport rep;
    rep.files = {out_path(cfg, "bounds_audit.csv"), out_path(cfg, "bounds_summary.json")};
    table.write(rep.files[0], meta);
    write_json(rep.files[1], summary);
    rep.summary = summary.dump(2);
    return rep;
}

}  // namespace evospec
