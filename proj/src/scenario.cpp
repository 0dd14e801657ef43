#include "radreact/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "radreact/darwin.hpp"
#include "radreact/landau_lifshitz.hpp"
#include "radreact/lorentz_dirac.hpp"
#include "radreact/memory.hpp"
#include "radreact/penning.hpp"
#include "radreact/radiation.hpp"

namespace radreact {

using nlohmann::json;

namespace {

// ---- config access -------------------------------------------------------

const json& member(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.is_object()) throw ConfigError(ctx + " must be an object");
    const auto it = j.find(key);
    if (it == j.end()) throw ConfigError("missing '" + key + "' in " + ctx);
    return *it;
}

bool has(const json& j, const std::string& key) { return j.is_object() && j.contains(key); }

double number(const json& j, const std::string& ctx) {
    if (!j.is_number()) throw ConfigError(ctx + " must be a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw ConfigError(ctx + " must be finite");
    return x;
}

double number(const json& j, const std::string& key, const std::string& ctx) {
    return number(member(j, key, ctx), ctx + "." + key);
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& ctx) {
    return has(j, key) ? number(j[key], ctx + "." + key) : fallback;
}

std::string text(const json& j, const std::string& key, const std::string& ctx) {
    const json& v = member(j, key, ctx);
    if (!v.is_string()) throw ConfigError(ctx + "." + key + " must be a string");
    return v.get<std::string>();
}

UnitSystem parse_units(const json& cfg) {
    const json& u = member(cfg, "units", "config");
    if (has(u, "system")) {
        const std::string s = text(u, "system", "units");
        if (s == "electron_natural") return UnitSystem::electron_natural();
        throw ConfigError("unknown unit system '" + s + "'");
    }
    const double L = number(u, "length_m", "units"), M = number(u, "mass_kg", "units");
    if (!(L > 0.0 && M > 0.0)) throw ConfigError("units.length_m and units.mass_kg must be positive");
    return UnitSystem(L, M);
}

struct Ctx {
    UnitSystem units;
};

// A physical scalar: a bare number in internal units, or {"value", "unit"}
// with unit internal | si | gauss (magnetic fields only).
double quantity(const Ctx& c, const json& j, Quantity q, const std::string& ctx) {
    if (j.is_number()) return number(j, ctx);
    if (!j.is_object()) throw ConfigError(ctx + " must be a number or {value, unit}");
    const double v = number(j, "value", ctx);
    const std::string unit = text(j, "unit", ctx);
    if (unit == "internal") return v;
    if (unit == "si") return c.units.to_internal(q, v);
    if (unit == "gauss" && q == Quantity::MagneticField) return c.units.field_from_gauss(v);
    throw ConfigError(ctx + ": unit '" + unit + "' not valid here");
}

double quantity(const Ctx& c, const json& j, const std::string& key, Quantity q, const std::string& ctx) {
    return quantity(c, member(j, key, ctx), q, ctx + "." + key);
}

Vec3 vec3(const Ctx& c, const json& j, Quantity q, const std::string& ctx) {
    const json* arr = &j;
    std::string unit = "internal";
    if (j.is_object()) {
        arr = &member(j, "value", ctx);
        unit = text(j, "unit", ctx);
    }
    if (!arr->is_array() || arr->size() != 3) throw ConfigError(ctx + " must be a 3-vector");
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
        const double x = number((*arr)[i], ctx);
        if (unit == "internal") v[i] = x;
        else if (unit == "si") v[i] = c.units.to_internal(q, x);
        else throw ConfigError(ctx + ": unit '" + unit + "' not valid here");
    }
    return v;
}

Vec3 vec3(const Ctx& c, const json& j, const std::string& key, Quantity q, const std::string& ctx) {
    return vec3(c, member(j, key, ctx), q, ctx + "." + key);
}

ChargeModel parse_particle(const Ctx& c, const json& p, const std::string& ctx) {
    if (has(p, "preset")) {
        const std::string s = text(p, "preset", ctx);
        if (s == "electron") return electron_preset(c.units);
        if (s == "proton") return proton_preset(c.units);
        throw ConfigError(ctx + ": unknown preset '" + s + "'");
    }
    const double e = quantity(c, p, "charge", Quantity::Charge, ctx);
    const double m = quantity(c, p, "mass", Quantity::Mass, ctx);
    const std::string form = has(p, "form") ? text(p, "form", ctx) : "point";
    FormKind kind;
    try {
        kind = form_kind_from_string(form);
    } catch (const Error&) {
        throw ConfigError(ctx + ": unknown form '" + form + "'");
    }
    if (kind == FormKind::PointLimit) return ChargeModel::point(e, m);
    const double R = quantity(c, p, "radius", Quantity::Length, ctx);
    const FormFactor ff = kind == FormKind::SphereShell ? FormFactor::sphere(R) : FormFactor::ball(R);
    const std::string mass_is = text(p, "mass_is", ctx);
    if (mass_is == "experimental") return ChargeModel::with_experimental_mass(e, m, ff);
    if (mass_is == "bare") return ChargeModel::extended(e, m, ff);
    throw ConfigError(ctx + ".mass_is must be 'experimental' or 'bare'");
}

FieldMap parse_field(const Ctx& c, const json& f, const ChargeModel& charge, const std::string& ctx) {
    const std::string type = text(f, "type", ctx);
    if (type == "zero") return zero_field();
    if (type == "uniform_magnetic") {
        const Vec3 axis = has(f, "axis") ? vec3(c, f, "axis", Quantity::Length, ctx) : Vec3::UnitZ();
        return uniform_magnetic(quantity(c, f, "B", Quantity::MagneticField, ctx), axis);
    }
    if (type == "uniform_electric") return uniform_electric(vec3(c, f, "E", Quantity::ElectricField, ctx));
    if (type == "penning")
        return penning_trap(charge.e(), charge.m0(), quantity(c, f, "omega_z", Quantity::Frequency, ctx),
                            quantity(c, f, "B", Quantity::MagneticField, ctx));
    if (type == "harmonic")
        return central_potential(
            harmonic_profile(charge.e(), charge.m0(), quantity(c, f, "omega0", Quantity::Frequency, ctx)));
    if (type == "axial_harmonic")
        return axial_1d(
            harmonic_axial_profile(charge.e(), charge.m0(), quantity(c, f, "omega0", Quantity::Frequency, ctx)));
    if (type == "superpose") {
        const json& list = member(f, "fields", ctx);
        if (!list.is_array()) throw ConfigError(ctx + ".fields must be an array");
        std::vector<FieldMap> maps;
        for (std::size_t i = 0; i < list.size(); ++i)
            maps.push_back(parse_field(c, list[i], charge, ctx + ".fields[" + std::to_string(i) + "]"));
        return superpose(maps);
    }
    throw ConfigError(ctx + ": unknown field type '" + type + "'");
}

template <class Controls>
Controls parse_controls(const json& cfg) {
    Controls k;
    if (!has(cfg, "integrator")) return k;
    const json& j = cfg["integrator"];
    k.atol = number_or(j, "atol", k.atol, "integrator");
    k.rtol = number_or(j, "rtol", k.rtol, "integrator");
    k.initial_step = number_or(j, "initial_step", k.initial_step, "integrator");
    k.max_step = number_or(j, "max_step", k.max_step, "integrator");
    k.max_steps = static_cast<long>(number_or(j, "max_steps", static_cast<double>(k.max_steps), "integrator"));
    if (!(k.atol > 0.0 && k.rtol > 0.0 && k.max_step > 0.0 && k.max_steps > 0))
        throw ConfigError("integrator tolerances and limits must be positive");
    return k;
}

std::pair<double, double> parse_span(const Ctx& c, const json& cfg) {
    const json& s = member(cfg, "t_span", "config");
    if (!s.is_array() || s.size() != 2) throw ConfigError("t_span must be [t0, t1]");
    const double t0 = quantity(c, s[0], Quantity::Time, "t_span[0]");
    const double t1 = quantity(c, s[1], Quantity::Time, "t_span[1]");
    return {t0, t1};
}

double parse_epsilon(const json& cfg) {
    const double eps = number(cfg, "epsilon", "config");
    if (!(eps > 0.0)) throw ConfigError("epsilon must be positive");
    return eps;
}

MassModel parse_mass_model(const json& cfg) {
    const std::string s = text(cfg, "mass_model", "config");
    try {
        return mass_model_from_string(s);
    } catch (const Error&) {
        throw ConfigError("unknown mass_model '" + s + "'");
    }
}

std::size_t parse_stride(const json& cfg) {
    if (!has(cfg, "output") || !has(cfg["output"], "stride")) return 1;
    const double s = number(cfg["output"], "stride", "output");
    if (!(s >= 1.0)) throw ConfigError("output.stride must be >= 1");
    return static_cast<std::size_t>(s);
}

// ---- shared helpers ------------------------------------------------------

struct SingleSetup {
    Ctx ctx;
    ChargeModel charge;
    FieldMap field;
};

SingleSetup parse_single(const json& cfg) {
    Ctx ctx{parse_units(cfg)};
    ChargeModel charge = parse_particle(ctx, member(cfg, "particle", "config"), "particle");
    FieldMap field = parse_field(ctx, member(cfg, "field", "config"), charge, "field");
    return {ctx, charge, field};
}

void trajectory_summary(Summary& s, const std::string& ns, const Trajectory& traj) {
    add(s, ns + ".status", to_string(traj.status));
    add(s, ns + ".samples", std::to_string(traj.samples.size()));
    add(s, ns + ".t_end", traj.back().t);
    add(s, ns + ".final_energy", traj.back().energy);
    add(s, ns + ".final_schott", traj.back().schott);
    add(s, ns + ".total_radiated", traj.back().radiated);
    for (int i = 0; i < 3; ++i) add(s, ns + ".final_q" + std::to_string(i + 1), traj.back().s.q[i]);
}


// ---- scenarios -----------------------------------------------------------

RunReport run_ld_forward(const json& cfg, const std::string& name) {
    const SingleSetup st = parse_single(cfg);
    const LdModel model(parse_mass_model(cfg), st.charge, parse_epsilon(cfg), st.field);
    const json& init = member(cfg, "initial", "config");
    const Vec3 q = vec3(st.ctx, init, "q", Quantity::Length, "initial");
    const Vec3 v = vec3(st.ctx, init, "v", Quantity::Velocity, "initial");
    Vec3 a;
    if (has(init, "a")) a = vec3(st.ctx, init, "a", Quantity::Acceleration, "initial");
    else if (has(init, "a_offset")) a = manifold_acceleration(model, q, v) + vec3(st.ctx, init, "a_offset", Quantity::Acceleration, "initial");
    else throw ConfigError("initial needs 'a' or 'a_offset'");
    const auto [t0, t1] = parse_span(st.ctx, cfg);
    LdControls k = parse_controls<LdControls>(cfg);
    if (has(cfg, "runaway")) {
        const json& r = cfg["runaway"];
        k.runaway_factor = number_or(r, "factor", k.runaway_factor, "runaway");
        k.runaway_steps = static_cast<int>(number_or(r, "steps", k.runaway_steps, "runaway"));
        if (has(r, "detect")) k.detect_runaway = member(r, "detect", "runaway").get<bool>();
    }
    const Trajectory traj = integrate_forward(model, {q, v, a}, t0, t1, k);
    RunReport rep;
    trajectory_summary(rep.summary, "ld", traj);
    add(rep.summary, "ld.predicted_rate", 1.0 / (model.epsilon * model.charge.beta() * gamma_of(v)));
    if (traj.runaway_rate) add(rep.summary, "ld.runaway_rate", *traj.runaway_rate);
    if (!traj.message.empty()) add(rep.summary, "ld.message", traj.message);
    rep.files.push_back({name + ".csv", trajectory_csv(traj, parse_stride(cfg))});
    return rep;
}

RunReport run_ld_backward(const json& cfg, const std::string& name) {
    const SingleSetup st = parse_single(cfg);
    const LdModel model(parse_mass_model(cfg), st.charge, parse_epsilon(cfg), st.field);
    const json& fin = member(cfg, "final", "config");
    const Vec3 q = vec3(st.ctx, fin, "q", Quantity::Length, "final");
    const Vec3 v = vec3(st.ctx, fin, "v", Quantity::Velocity, "final");
    const auto [t0, t1] = parse_span(st.ctx, cfg);
    if (t0 != 0.0) throw ConfigError("ld_backward needs t_span = [0, T]");
    const Trajectory traj = integrate_backward(model, q, v, t1, parse_controls<IntegratorControls>(cfg));
    RunReport rep;
    trajectory_summary(rep.summary, "ld", traj);
    for (int i = 0; i < 3; ++i) add(rep.summary, "ld.initial_v" + std::to_string(i + 1), traj.samples.front().s.v[i]);
    rep.files.push_back({name + ".csv", trajectory_csv(traj, parse_stride(cfg))});
    return rep;
}

RunReport run_ll(const json& cfg, const std::string& name) {
    const SingleSetup st = parse_single(cfg);
    const LlModel model(parse_mass_model(cfg), st.charge, parse_epsilon(cfg), st.field);
    const json& init = member(cfg, "initial", "config");
    const Vec3 q = vec3(st.ctx, init, "q", Quantity::Length, "initial");
    const Vec3 v = vec3(st.ctx, init, "v", Quantity::Velocity, "initial");
    const auto [t0, t1] = parse_span(st.ctx, cfg);
    const Trajectory traj = integrate_ll(model, q, v, t0, t1, parse_controls<IntegratorControls>(cfg));
    RunReport rep;
    trajectory_summary(rep.summary, "ll", traj);
    add(rep.summary, "ll.final_gamma", gamma_of(traj.back().s.v));
    rep.files.push_back({name + ".csv", trajectory_csv(traj, parse_stride(cfg))});
    return rep;
}

RunReport run_synchrotron(const json& cfg, const std::string& name) {
    Ctx ctx{parse_units(cfg)};
    const ChargeModel charge = parse_particle(ctx, member(cfg, "particle", "config"), "particle");
    const double B = quantity(ctx, cfg, "B", Quantity::MagneticField, "config");
    const double gamma0 = number(cfg, "gamma0", "config");
    const double eps = parse_epsilon(cfg);
    const double ratio = number(cfg, "radius_ratio", "config");
    const ConstantBClosedForms cf(charge, B, gamma0, eps);
    RunReport rep;
    Summary& s = rep.summary;
    add(s, "synchrotron.omega_c", cf.omega_c());
    add(s, "synchrotron.beta", cf.beta());
    add(s, "synchrotron.rate", cf.rate());
    add(s, "synchrotron.gamma0", gamma0);
    add(s, "synchrotron.initial_radius", cf.initial_radius());
    add(s, "synchrotron.initial_radius_m", ctx.units.to_si(Quantity::Length, cf.initial_radius()));
    add(s, "synchrotron.speed_ratio_per_revolution", std::exp(-2.0 * M_PI * cf.beta() * cf.omega_c()));
    const double t_r = cf.time_to_radius_ratio(ratio);
    add(s, "synchrotron.time_to_radius_ratio", t_r);
    add(s, "synchrotron.time_to_radius_ratio_s", ctx.units.to_si(Quantity::Time, t_r));
    const double t_u = cf.time_to_radius_ratio_ultrarel(ratio);
    add(s, "synchrotron.time_to_radius_ratio_ultrarel", t_u);
    add(s, "synchrotron.time_to_radius_ratio_ultrarel_s", ctx.units.to_si(Quantity::Time, t_u));
    add(s, "synchrotron.revolutions", cf.revolutions(t_r));
    if (has(cfg, "integrate")) {
        const double damping_times = number(cfg["integrate"], "damping_times", "integrate");
        const double T = damping_times / cf.rate();
        const LlModel model(MassModel::Relativistic, charge, eps, uniform_magnetic(B, Vec3::UnitZ()));
        const Vec3 v0(cf.initial_speed(), 0.0, 0.0);
        const Trajectory traj = integrate_ll(model, Vec3::Zero(), v0, 0.0, T, parse_controls<IntegratorControls>(cfg));
        double worst = 0.0;
        for (const auto& smp : traj.samples) {
            const double g = gamma_of(smp.s.v), gc = cf.gamma_of_t(smp.t);
            worst = std::max(worst, std::abs(g - gc) / gc);
        }
        add(s, "synchrotron.gamma_end_numeric", gamma_of(traj.back().s.v));
        add(s, "synchrotron.gamma_end_closed", cf.gamma_of_t(traj.back().t));
        add(s, "synchrotron.gamma_max_rel_error", worst);
        add(s, "synchrotron.total_radiated", traj.back().radiated);
        rep.files.push_back({name + ".csv", trajectory_csv(traj, parse_stride(cfg))});
    }
    return rep;
}

RunReport run_penning(const json& cfg, const std::string&) {
    Ctx ctx{parse_units(cfg)};
    const ChargeModel charge = parse_particle(ctx, member(cfg, "particle", "config"), "particle");
    const double wz = quantity(ctx, cfg, "omega_z", Quantity::Frequency, "config");
    const double B = quantity(ctx, cfg, "B", Quantity::MagneticField, "config");
    const TrapSpec spec(charge, wz, B);
    const ModeReport m = mode_analysis(spec);
    const double Bc = critical_field(charge, wz);
    RunReport rep;
    Summary& s = rep.summary;
    add(s, "penning.omega_plus", m.omega_plus);
    add(s, "penning.omega_minus", m.omega_minus);
    add(s, "penning.omega_z", m.omega_z);
    add(s, "penning.omega_c", m.omega_c);
    add(s, "penning.lambda", m.lambda);
    add(s, "penning.gamma_plus", m.gamma_plus);
    add(s, "penning.gamma_minus", m.gamma_minus);
    add(s, "penning.gamma_z", m.gamma_z);
    add(s, "penning.lifetime_plus", m.lifetime_plus());
    add(s, "penning.lifetime_minus", m.lifetime_minus());
    add(s, "penning.lifetime_z", m.lifetime_z());
    add(s, "penning.B_c", Bc);
    add(s, "penning.B_c_gauss", ctx.units.field_to_gauss(Bc));
    const auto ev = numeric_eigen_oracle(spec);
    for (int i = 0; i < 4; ++i) {
        add(s, "penning.eigen" + std::to_string(i) + ".re", ev[i].real());
        add(s, "penning.eigen" + std::to_string(i) + ".im", ev[i].imag());
    }
    return rep;
}

RunReport run_memory(const json& cfg, const std::string& name) {
    const SingleSetup st = parse_single(cfg);
    const DdeModel model = DdeModel::from_charge(st.charge, st.field);
    const json& init = member(cfg, "initial", "config");
    const Vec3 q = vec3(st.ctx, init, "q", Quantity::Length, "initial");
    const Vec3 v = vec3(st.ctx, init, "v", Quantity::Velocity, "initial");
    const auto [t0, t1] = parse_span(st.ctx, cfg);
    if (t0 != 0.0) throw ConfigError("memory_dde needs t_span = [0, T]");
    DdeControls k;
    k.substeps_per_radius = static_cast<int>(number_or(cfg, "substeps_per_radius", k.substeps_per_radius, "config"));
    const Trajectory traj = integrate_dde(model, HistoryFunction::constant(v, q), t1, k);
    RunReport rep;
    trajectory_summary(rep.summary, "memory", traj);
    add(rep.summary, "memory.lyapunov_start", traj.samples.front().schott);
    add(rep.summary, "memory.lyapunov_end", traj.back().schott);
    add(rep.summary, "memory.balance_residual",
        traj.back().schott + traj.back().radiated - traj.samples.front().schott);
    rep.files.push_back({name + ".csv", trajectory_csv(traj, parse_stride(cfg))});
    return rep;
}

ManyBodyState parse_many(const Ctx& ctx, const json& cfg) {
    const json& list = member(cfg, "particles", "config");
    if (!list.is_array() || list.empty()) throw ConfigError("particles must be a non-empty array");
    ManyBodyState s;
    s.c = has(cfg, "c") ? number(cfg, "c", "config") : 1.0;
    if (!(s.c > 0.0)) throw ConfigError("c must be positive");
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string c = "particles[" + std::to_string(i) + "]";
        Particle p{parse_particle(ctx, list[i], c)};
        p.q = vec3(ctx, list[i], "q", Quantity::Length, c);
        p.v = vec3(ctx, list[i], "v", Quantity::Velocity, c);
        s.particles.push_back(p);
    }
    return s;
}

void many_summary(Summary& s, const std::string& ns, const ManyBodyState& s0, const ManyBodyRun& run) {
    add(s, ns + ".status", to_string(run.status));
    if (!run.message.empty()) add(s, ns + ".message", run.message);
    ManyBodyState s1 = s0;
    for (std::size_t i = 0; i < s0.size(); ++i) {
        s1.particles[i].q = run.trajectories[i].back().s.q;
        s1.particles[i].v = run.trajectories[i].back().s.v;
    }
    const double E0 = darwin_energy(s0), E1 = darwin_energy(s1);
    const Vec3 P0 = darwin_momentum(s0), P1 = darwin_momentum(s1);
    add(s, ns + ".samples", std::to_string(run.trajectories[0].samples.size()));
    add(s, ns + ".t_end", run.trajectories[0].back().t);
    add(s, ns + ".energy_start", E0);
    add(s, ns + ".energy_end", E1);
    add(s, ns + ".energy_rel_drift", std::abs(E1 - E0) / std::max(std::abs(E0), 1e-300));
    add(s, ns + ".momentum_drift", (P1 - P0).norm());
}

RunReport run_many(const json& cfg, const std::string& name, bool retarded) {
    Ctx ctx{parse_units(cfg)};
    const ManyBodyState s0 = parse_many(ctx, cfg);
    const auto [t0, t1] = parse_span(ctx, cfg);
    const double radius = has(cfg, "collision_radius") ? quantity(ctx, cfg, "collision_radius", Quantity::Length, "config") : 0.0;
    const IntegratorControls k = parse_controls<IntegratorControls>(cfg);
    const ManyBodyRun run = retarded ? retarded_twobody_oracle(s0, t0, t1, k, radius) : integrate_darwin(s0, t0, t1, k, radius);
    RunReport rep;
    const std::string ns = retarded ? "retarded2" : "darwin";
    many_summary(rep.summary, ns, s0, run);
    const std::size_t stride = parse_stride(cfg);
    for (std::size_t i = 0; i < run.trajectories.size(); ++i)
        rep.files.push_back({name + ".p" + std::to_string(i) + ".csv", trajectory_csv(run.trajectories[i], stride)});
    return rep;
}

RunReport dispatch_run(const json& cfg, const std::string& name);

// LL and backward LD from common terminal data at T, for each epsilon.
RunReport compare_ld_ll(const json& cfg, const std::string& name) {
    const SingleSetup st = parse_single(cfg);
    const MassModel mm = parse_mass_model(cfg);
    const json& fin = member(cfg, "final", "config");
    const Vec3 q = vec3(st.ctx, fin, "q", Quantity::Length, "final");
    const Vec3 v = vec3(st.ctx, fin, "v", Quantity::Velocity, "final");
    const double T = quantity(st.ctx, cfg, "horizon", Quantity::Time, "config");
    const json& eps_list = member(cfg, "epsilons", "config");
    if (!eps_list.is_array() || eps_list.size() < 2) throw ConfigError("epsilons must list at least two values");
    const IntegratorControls k = parse_controls<IntegratorControls>(cfg);
    std::vector<double> eps, dev;
    std::string table = "epsilon,max_deviation\n";
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const double e = number(eps_list[i], "epsilons[" + std::to_string(i) + "]");
        if (!(e > 0.0)) throw ConfigError("epsilons must be positive");
        const LdModel model(mm, st.charge, e, st.field);
        const Trajectory ld = integrate_backward(model, q, v, T, k);
        const Trajectory ll = integrate_ll(model, q, v, T, 0.0, k);
        const double d = max_position_deviation(ld, ll);
        eps.push_back(e);
        dev.push_back(d);
        table += format_double(e) + "," + format_double(d) + "\n";
    }
    RunReport rep;
    for (std::size_t i = 0; i < eps.size(); ++i) add(rep.summary, "compare.deviation." + std::to_string(i), dev[i]);
    add(rep.summary, "compare.exponent", fit_exponent(eps, dev));
    rep.files.push_back({name + ".table.csv", table});
    return rep;
}

// Speeds scaled by s, charges by s (pair coupling ~ s^2), horizon by 1/s.
RunReport compare_darwin_retarded(const json& cfg, const std::string& name) {
    Ctx ctx{parse_units(cfg)};
    const ManyBodyState base = parse_many(ctx, cfg);
    if (base.size() != 2) throw ConfigError("compare_darwin_retarded needs two particles");
    const double T = quantity(ctx, cfg, "horizon", Quantity::Time, "config");
    const double skip = number_or(cfg, "skip_crossings", 5.0, "config");
    const json& scales = member(cfg, "speed_scales", "config");
    if (!scales.is_array() || scales.size() < 2) throw ConfigError("speed_scales must list at least two values");
    const IntegratorControls k = parse_controls<IntegratorControls>(cfg);
    std::vector<double> xs, ratios;
    std::string table = "scale,residual_ratio\n";
    for (std::size_t n = 0; n < scales.size(); ++n) {
        const double sc = number(scales[n], "speed_scales[" + std::to_string(n) + "]");
        if (!(sc > 0.0)) throw ConfigError("speed_scales must be positive");
        ManyBodyState s = base;
        for (auto& p : s.particles) {
            p.v *= sc;
            p.charge = p.charge.form().kind == FormKind::PointLimit
                           ? ChargeModel::point(p.charge.e() * sc, p.charge.m0())
                           : ChargeModel::extended(p.charge.e() * sc, p.charge.m_b(), p.charge.form());
        }
        const double t1 = T / sc;
        const double ratio = darwin_retarded_residual_ratio(s, t1, skip * s.min_separation(), k);
        xs.push_back(sc);
        ratios.push_back(ratio);
        table += format_double(sc) + "," + format_double(ratio) + "\n";
    }
    RunReport rep;
    for (std::size_t i = 0; i < xs.size(); ++i) add(rep.summary, "compare.residual_ratio." + std::to_string(i), ratios[i]);
    add(rep.summary, "compare.exponent", fit_exponent(xs, ratios));
    rep.files.push_back({name + ".table.csv", table});
    return rep;
}

Trajectory first_trajectory(const json& cfg);

// Runs two sub-configs and reports the maximal position deviation.
RunReport compare_pair(const json& cfg, const std::string&) {
    const json& a = member(cfg, "a", "config");
    const json& b = member(cfg, "b", "config");
    const Trajectory ta = first_trajectory(a), tb = first_trajectory(b);
    RunReport rep;
    add(rep.summary, "compare.max_deviation", max_position_deviation(ta, tb));
    return rep;
}

// Re-runs a single-trajectory kind and returns the parsed CSV as a trajectory.
Trajectory first_trajectory(const json& cfg) {
    const RunReport r = dispatch_run(cfg, "sub");
    if (r.files.empty()) throw ConfigError("sub-config produces no trajectory");
    Trajectory t;
    std::istringstream in(r.files.front().content);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<double> x;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t next = std::min(line.find(',', pos), line.size());
            x.push_back(std::stod(line.substr(pos, next - pos)));
            pos = next + 1;
        }
        TrajectorySample s;
        s.t = x[0];
        s.s = {Vec3(x[1], x[2], x[3]), Vec3(x[4], x[5], x[6]), Vec3(x[7], x[8], x[9])};
        t.samples.push_back(s);
    }
    return t;
}

RunReport dispatch_run(const json& cfg, const std::string& name) {
    const std::string kind = text(cfg, "kind", "config");
    if (kind == "ld_forward") return run_ld_forward(cfg, name);
    if (kind == "ld_backward") return run_ld_backward(cfg, name);
    if (kind == "ll") return run_ll(cfg, name);
    if (kind == "synchrotron") return run_synchrotron(cfg, name);
    if (kind == "penning") return run_penning(cfg, name);
    if (kind == "memory_dde") return run_memory(cfg, name);
    if (kind == "darwin") return run_many(cfg, name, false);
    if (kind == "retarded2") return run_many(cfg, name, true);
    if (kind == "compare_ld_ll") return compare_ld_ll(cfg, name);
    if (kind == "compare_darwin_retarded") return compare_darwin_retarded(cfg, name);
    if (kind == "compare_pair") return compare_pair(cfg, name);
    throw ConfigError("unknown kind '" + kind + "'");
}

std::string run_label(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "run%03zu", i);
    return buf;
}

RunReport run_sweep(const json& cfg, const std::string& name, int jobs) {
    const json& base = member(cfg, "base", "sweep");
    const std::string param = text(cfg, "parameter", "sweep");
    const json& values = member(cfg, "values", "sweep");
    if (!values.is_array() || values.empty()) throw ConfigError("sweep.values must be a non-empty array");
    json::json_pointer ptr;
    try {
        ptr = json::json_pointer(param);
    } catch (const json::exception& e) {
        throw ConfigError("sweep.parameter is not a JSON pointer: " + std::string(e.what()));
    }
    std::vector<json> configs;
    for (const auto& v : values) {
        json c = base;
        try {
            c[ptr] = v;
        } catch (const json::exception& e) {
            throw ConfigError("cannot set sweep parameter: " + std::string(e.what()));
        }
        if (text(c, "kind", "sweep.base") == "sweep") throw ConfigError("nested sweeps are not supported");
        configs.push_back(std::move(c));
    }
    const std::size_t n = configs.size();
    std::vector<RunReport> reports(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                reports[i] = dispatch_run(configs[i], name + "." + run_label(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    RunReport rep;
    add(rep.summary, "sweep.parameter", param);
    add(rep.summary, "sweep.runs", std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
        add(rep.summary, "sweep." + run_label(i) + ".value", values[i].dump());
        for (const auto& [k, v] : reports[i].summary) add(rep.summary, "sweep." + run_label(i) + "." + k, v);
        for (auto& f : reports[i].files) rep.files.push_back(std::move(f));
    }
    return rep;
}

}  // namespace

double fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("cli", "exponent fit needs two or more points");
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0)) throw DomainError("cli", "exponent fit needs positive data");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        n += 1;
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

json load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config " + path.string());
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

RunReport execute(const json& cfg, Command cmd, const std::string& name, int jobs) {
    try {
        const std::string kind = text(cfg, "kind", "config");
        const bool is_compare = kind.rfind("compare_", 0) == 0;
        switch (cmd) {
            case Command::Sweep:
                if (kind != "sweep") throw ConfigError("the sweep command needs kind 'sweep'");
                return run_sweep(cfg, name, jobs);
            case Command::Compare:
                if (!is_compare) throw ConfigError("the compare command needs a compare_* kind");
                return dispatch_run(cfg, name);
            case Command::Run:
                if (kind == "sweep") return run_sweep(cfg, name, jobs);
                return dispatch_run(cfg, name);
        }
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown command");
}

std::filesystem::path output_dir(const json& cfg) {
    if (const char* env = std::getenv("RADREACT_OUT_DIR"); env && *env) return env;
    if (has(cfg, "output") && has(cfg["output"], "dir")) return text(cfg["output"], "dir", "output");
    return "radreact_out";
}

std::string output_name(const json& cfg, const std::filesystem::path& config_path) {
    if (has(cfg, "output") && has(cfg["output"], "name")) return text(cfg["output"], "name", "output");
    return config_path.stem().string();
}

RunReport run_file(const std::filesystem::path& config_path, Command cmd, int jobs) {
    const json cfg = load_config(config_path);
    const std::filesystem::path dir = output_dir(cfg);
    const std::string name = output_name(cfg, config_path);
    RunReport rep = execute(cfg, cmd, name, jobs);
    for (const auto& f : rep.files) {
        write_atomic(dir / f.name, f.content);
        rep.written.push_back(dir / f.name);
    }
    const auto summary_path = dir / (name + ".summary.txt");
    write_atomic(summary_path, summary_text(rep.summary));
    rep.written.push_back(summary_path);
    return rep;
}

}  // namespace radreact
