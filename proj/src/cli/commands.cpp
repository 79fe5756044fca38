#include <CLI11.hpp>
#include <json.hpp>

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dualrail/cli.hpp"
#include "dualrail/errors.hpp"
#include "dualrail/parallel.hpp"
#include "dualrail/protocols.hpp"
#include "dualrail/units.hpp"

namespace dualrail::cli {

namespace {

using json = nlohmann::ordered_json;
using units::mhz_to_rad_per_us;
using units::rad_per_us_to_mhz;

constexpr int kSchema = 1;
constexpr int kDefaultMaxwellPoints = 201;
constexpr int kDefaultGatePoints = 100;
constexpr double kGateVmax = 0.5;

std::string num(double x) { return fmt::format("{:.12g}", x); }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write_csv(std::ostream& out) const {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

/// Writes `--out` if given. CSV writers receive the stream; JSON is dumped
/// with two-space indentation.
void emit(const RunConfig& config, const std::function<void(std::ostream&)>& csv, const json& doc) {
  if (config.out_path.empty()) return;
  std::ofstream file(config.out_path, std::ios::binary);
  if (!file) throw ConfigError(fmt::format("cannot open '{}' for writing", config.out_path));
  if (config.format == OutputFormat::json) {
    file << doc.dump(2) << '\n';
  } else {
    csv(file);
  }
  if (!file) throw ConfigError(fmt::format("failed writing '{}'", config.out_path));
}

json params_json(const SimulationParams& p) {
  return {{"omega_mhz", rad_per_us_to_mhz(p.omega)},     {"omega_dp_mhz", rad_per_us_to_mhz(p.omega_dp)},
          {"omega_if_mhz", rad_per_us_to_mhz(p.omega_if)}, {"v_mps", p.v_mps},
          {"z0_um", p.z0_um},                             {"t_wait_us", p.t_wait_us},
          {"n_cycles", p.n_gap_cycles}};
}

json outcome_json(const ProtocolOutcome& o) {
  return {{"ground_population", o.ground_population}, {"population_error", o.error()},
          {"ground_phase", o.ground_phase},           {"r3_leak", o.r3_leak},
          {"rydberg_time_us", o.rydberg_time},        {"duration_us", o.duration}};
}

json average_json(const AveragedOutcome& a, double temp_uk) {
  return {{"temp_uk", temp_uk},
          {"grid_points", a.points.size()},
          {"weight_mass", a.weight_mass},
          {"mean_population", a.mean_population},
          {"mean_error", a.mean_error()},
          {"mean_abs_phase", a.mean_abs_phase},
          {"mean_r3_leak", a.mean_r3_leak},
          {"mean_rydberg_time_us", a.mean_rydberg_time},
          {"max_phase_offset_from_pi", a.max_phase_offset_from_pi}};
}

VelocityGrid maxwell_grid(const RunConfig& config, double temp_uk, const AtomSpecies& species) {
  return thermal_grid(temp_uk, species, config.grid_points > 0 ? config.grid_points : kDefaultMaxwellPoints);
}

void print_outcome(std::ostream& out, const ProtocolOutcome& o, bool with_leak) {
  out << fmt::format("ground population  {:.10f}\n", o.ground_population);
  out << fmt::format("population error   {:.6e}\n", o.error());
  out << fmt::format("ground phase       {:.12f} rad\n", o.ground_phase);
  if (with_leak) out << fmt::format("r3 leak            {:.6e}\n", o.r3_leak);
  out << fmt::format("Rydberg time       {:.6f} us\n", o.rydberg_time);
  out << fmt::format("duration           {:.6f} us\n", o.duration);
}

void print_average(std::ostream& out, const AveragedOutcome& a, double temp_uk) {
  out << fmt::format("Maxwell average at {} uK over {} velocities (weight mass {:.8f})\n", temp_uk, a.points.size(),
                     a.weight_mass);
  out << fmt::format("  mean population  {:.10f}\n", a.mean_population);
  out << fmt::format("  mean error       {:.6e}\n", a.mean_error());
  out << fmt::format("  mean |phase|     {:.9f} rad\n", a.mean_abs_phase);
  out << fmt::format("  max ||phase|-pi| {:.3e} rad\n", a.max_phase_offset_from_pi);
}

// ---- single-atom commands ---------------------------------------------------

struct ExciteOptions {
  std::string model = "four-field";
  int samples = 1000;
};

int cmd_excite(const RunConfig& config, const ExciteOptions& ex, std::ostream& out) {
  const auto preset = resolve_preset(config);
  const double k = preset.wavevectors.k_excite;
  const double omega = mhz_to_rad_per_us(config.omega_mhz.value_or(0.5));
  const double t_end = config.t_us.value_or(2.0);
  if (!(omega > 0.0)) throw DomainError("--omega-mhz must be positive");
  if (!(t_end > 0.0)) throw DomainError("--t must be positive");
  if (ex.samples < 0) throw DomainError("--samples must be non-negative");

  auto make_h = [&](Motion m) {
    if (ex.model == "four-field") return h_four_field(omega, k, m);
    if (ex.model == "dual-rail") return h_dual_rail(omega, k, m);
    return h_single_rail(omega, k, m);
  };
  auto options = solver_options(config, false);
  auto run_at = [&](double v, int samples) {
    const auto h = make_h({config.z0_um, v});
    auto opts = options;
    opts.samples_per_stage = samples;
    const auto initial = ComplexState::basis_state(h.basis, "1");
    auto traj = run_schedule(initial, {{"drive", t_end, h}}, opts);
    ProtocolOutcome o;
    o.ground_population = traj.final_state.population("1");
    o.ground_phase = principal_phase(traj.final_state.amplitude("1"));
    o.rydberg_time = traj.rydberg_time;
    o.duration = traj.duration();
    o.trajectory = std::move(traj);
    return o;
  };

  const bool want_trajectory = !config.out_path.empty() && config.format == OutputFormat::csv;
  const auto outcome = run_at(config.v_mps, want_trajectory ? ex.samples : 0);
  out << fmt::format("{} drive, Omega/2pi = {} MHz, v = {} m/s, z0 = {} um, t = {} us\n", ex.model,
                     rad_per_us_to_mhz(omega), config.v_mps, config.z0_um, t_end);
  print_outcome(out, outcome, false);

  json doc{{"schema", kSchema},
           {"command", "excite"},
           {"preset", preset.name},
           {"model", ex.model},
           {"parameters", {{"omega_mhz", rad_per_us_to_mhz(omega)}, {"v_mps", config.v_mps},
                           {"z0_um", config.z0_um}, {"t_us", t_end}}},
           {"result", outcome_json(outcome)}};
  if (config.temp_uk) {
    const auto avg = maxwell_average([&](double v) { return run_at(v, 0); },
                                     maxwell_grid(config, *config.temp_uk, preset.species), config.threads);
    print_average(out, avg, *config.temp_uk);
    doc["average"] = average_json(avg, *config.temp_uk);
  }
  emit(
      config,
      [&](std::ostream& s) {
        write_trajectory_csv(s, outcome.trajectory.final_state.basis, outcome.trajectory.samples);
      },
      doc);
  return kExitOk;
}

enum class SingleAtomProtocol { restore, traditional, gap };

const char* protocol_name(SingleAtomProtocol p) {
  switch (p) {
    case SingleAtomProtocol::restore: return "restore";
    case SingleAtomProtocol::traditional: return "traditional";
    case SingleAtomProtocol::gap: return "gap";
  }
  return "?";
}

SimulationParams protocol_params(const RunConfig& config, SingleAtomProtocol protocol) {
  switch (protocol) {
    case SingleAtomProtocol::restore: return restore_params(config);
    case SingleAtomProtocol::traditional: return traditional_params(config);
    case SingleAtomProtocol::gap: return gap_params(config);
  }
  throw DomainError("unknown protocol");
}

ProtocolOutcome run_protocol(SingleAtomProtocol protocol, const SimulationParams& p, const AtomLaserConfig& preset,
                             const PropagatorOptions& options) {
  switch (protocol) {
    case SingleAtomProtocol::restore: return run_excite_restore(p, preset.wavevectors.k_excite, options);
    case SingleAtomProtocol::traditional: return run_traditional_restore(p, preset.wavevectors.k_excite, options);
    case SingleAtomProtocol::gap: return run_gap_protocol(p, preset.wavevectors, options);
  }
  throw DomainError("unknown protocol");
}

int cmd_protocol(const RunConfig& config, SingleAtomProtocol protocol, std::ostream& out) {
  const auto preset = resolve_preset(config);
  const auto p = protocol_params(config, protocol);
  const auto options = solver_options(config, false);
  const bool want_trajectory = !config.out_path.empty() && config.format == OutputFormat::csv;

  auto traced = options;
  traced.samples_per_stage = want_trajectory ? 1000 : 0;
  const auto outcome = run_protocol(protocol, p, preset, traced);
  out << fmt::format("{} protocol, preset {}, Omega/2pi = {:.6g} MHz, Omega_dp/2pi = {:.6g} MHz, v = {} m/s\n",
                     protocol_name(protocol), preset.name, rad_per_us_to_mhz(p.omega), rad_per_us_to_mhz(p.omega_dp),
                     p.v_mps);
  print_outcome(out, outcome, protocol == SingleAtomProtocol::gap);

  json doc{{"schema", kSchema},
           {"command", protocol == SingleAtomProtocol::gap ? "gap" : "restore"},
           {"protocol", protocol_name(protocol)},
           {"preset", preset.name},
           {"parameters", params_json(p)},
           {"result", outcome_json(outcome)}};
  if (config.temp_uk) {
    const auto avg = maxwell_average(
        [&](double v) {
          auto q = p;
          q.v_mps = v;
          return run_protocol(protocol, q, preset, options);
        },
        maxwell_grid(config, *config.temp_uk, preset.species), config.threads);
    print_average(out, avg, *config.temp_uk);
    doc["average"] = average_json(avg, *config.temp_uk);
  }
  emit(
      config,
      [&](std::ostream& s) {
        write_trajectory_csv(s, outcome.trajectory.final_state.basis, outcome.trajectory.samples);
      },
      doc);
  return kExitOk;
}

// ---- optimize ---------------------------------------------------------------

struct OptimizeOptions {
  std::vector<double> omegas_mhz{2.0};
  int sign = 1;
  double v_ref = 0.05;
  double bracket = 0.1;
};

int cmd_optimize(const RunConfig& config, const OptimizeOptions& opt, std::ostream& out) {
  const auto preset = resolve_preset(config);
  const double k = preset.wavevectors.k_excite;
  const auto options = solver_options(config, false);
  for (double om : opt.omegas_mhz) {
    if (!(om > 0.0)) throw DomainError("--omega-mhz values must be positive");
  }
  const auto results = parallel_map(
      opt.omegas_mhz.size(),
      [&](std::size_t i) {
        return optimize_deexcitation(mhz_to_rad_per_us(opt.omegas_mhz[i]), k, opt.v_ref, opt.sign, opt.bracket,
                                     options);
      },
      config.threads);

  Table table{{"omega_mhz", "sign", "omega_dp_mhz", "ratio", "error", "error_at_omega", "evaluations"}, {}};
  json rows = json::array();
  out << fmt::format("deexcitation optimum at v_ref = {} m/s, sign {:+d}\n", opt.v_ref, opt.sign);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const double om = opt.omegas_mhz[i];
    const double dp = rad_per_us_to_mhz(r.omega_dp);
    out << fmt::format("  Omega/2pi = {:<8g} Omega_dp/2pi = {:+.6f} MHz  ratio {:+.6f}  error {:.4e}  (at |Omega_dp| = "
                       "Omega: {:.4e})\n",
                       om, dp, dp / om, r.error, r.error_at_omega);
    table.rows.push_back({num(om), std::to_string(opt.sign), num(dp), num(dp / om), num(r.error),
                          num(r.error_at_omega), std::to_string(r.evaluations)});
    rows.push_back({{"omega_mhz", om},
                    {"omega_dp_mhz", dp},
                    {"ratio", dp / om},
                    {"error", r.error},
                    {"error_at_omega", r.error_at_omega},
                    {"evaluations", r.evaluations}});
  }
  json doc{{"schema", kSchema}, {"command", "optimize"}, {"preset", preset.name},
           {"v_ref_mps", opt.v_ref}, {"sign", opt.sign},    {"bracket", opt.bracket},
           {"optima", rows}};
  emit(config, [&](std::ostream& s) { table.write_csv(s); }, doc);
  return kExitOk;
}

// ---- gate -------------------------------------------------------------------

struct GateOptions {
  std::string method = "ours";
  std::string target_deexcitation = "negative-omega-t";
  double v_max = kGateVmax;
};

int cmd_gate(const RunConfig& config, const GateOptions& g, std::ostream& out) {
  const auto preset = resolve_preset(config);
  auto p = gate_params(config, preset);
  p.target_deexcitation = g.target_deexcitation == "omega-dp" ? TargetDeexcitation::omega_dp
                                                              : TargetDeexcitation::negative_omega_t;
  const auto method = parse_gate_method(g.method);
  p.validate(method);
  const auto options = solver_options(config, true);

  const auto report = simulate_gate(p, method, options);
  out << fmt::format("{} gate, preset {}, t_w = {:.6f} us, duration {:.6f} us\n", to_string(method), preset.name,
                     p.t_wait(), report.duration);
  out << fmt::format("  a = {:+.10f} {:+.10f}i\n", report.a.real(), report.a.imag());
  out << fmt::format("  b = {:+.10f} {:+.10f}i\n", report.b.real(), report.b.imag());
  out << fmt::format("  c = {:+.10f} {:+.10f}i\n", report.c.real(), report.c.imag());
  out << fmt::format("  E_ro {:.6e}  E_decay {:.6e}\n", report.e_ro, report.e_decay);

  json doc{{"schema", kSchema},
           {"command", "gate"},
           {"method", to_string(method)},
           {"preset", preset.name},
           {"parameters",
            {{"omega_mhz", rad_per_us_to_mhz(p.omega)},
             {"omega_dp_mhz", rad_per_us_to_mhz(p.omega_dp)},
             {"omega_t_mhz", rad_per_us_to_mhz(p.omega_t)},
             {"omega_if_mhz", rad_per_us_to_mhz(p.omega_if)},
             {"n_cycles", p.n_gap_cycles},
             {"t_wait_us", p.t_wait()},
             {"L_um", preset.interactions.separation_um()},
             {"tau_us", p.tau_us},
             {"v_control_mps", p.control.v_mps},
             {"v_target_mps", p.target.v_mps},
             {"z0_um", p.control.z0_um},
             {"solver", options.solver == Solver::dop853 ? "dop853" : "frame"}}},
           {"amplitudes",
            {{"00", complex_json(1.0)},
             {"01", complex_json(report.a)},
             {"10", complex_json(report.b)},
             {"11", complex_json(report.c)}}},
           {"rydberg_time_us",
            {{"01", report.rydberg_time[0]}, {"10", report.rydberg_time[1]}, {"11", report.rydberg_time[2]}}},
           {"e_ro", report.e_ro},
           {"e_decay", report.e_decay},
           {"fidelity", fidelity_from(report.e_ro, report.e_decay)},
           {"duration_us", report.duration}};

  std::optional<GateGridResult> grid;
  if (config.temp_uk) {
    const int points = config.grid_points > 0 ? config.grid_points : kDefaultGatePoints;
    auto rest = p;
    rest.control.v_mps = 0.0;
    rest.target.v_mps = 0.0;
    grid = averaged_rotation_error(rest, *config.temp_uk, preset.species, method, points, g.v_max, options,
                                   config.threads);
    const double e_decay = simulate_gate(rest, method, options).e_decay;
    const double f = fidelity_from(grid->e_ro_bar, e_decay);
    out << fmt::format("  {}x{} grid on [-{}, {}] m/s at {} uK: E_ro_bar {:.6e}  E_decay(v=0) {:.6e}  F {:.6f}\n",
                       points, points, g.v_max, g.v_max, *config.temp_uk, grid->e_ro_bar, e_decay, f);
    doc["grid"] = {{"points", points},
                   {"pairs", points * points},
                   {"v_max_mps", g.v_max},
                   {"temp_uk", *config.temp_uk},
                   {"weight_mass", grid->weight_mass},
                   {"e_ro_bar", grid->e_ro_bar},
                   {"e_decay", e_decay},
                   {"fidelity", f}};
  } else {
    out << fmt::format("  F (no averaging) {:.6f}\n", fidelity_from(report.e_ro, report.e_decay));
  }
  emit(
      config,
      [&](std::ostream& s) {
        if (grid) {
          write_gate_grid_csv(s, *grid);
          return;
        }
        Table t{{"input", "re", "im", "abs", "rydberg_time_us"}, {}};
        t.rows.push_back({"00", num(1.0), num(0.0), num(1.0), num(0.0)});
        const std::array<std::pair<const char*, cplx>, 3> amps{
            {{"01", report.a}, {"10", report.b}, {"11", report.c}}};
        for (std::size_t i = 0; i < amps.size(); ++i) {
          const auto [name, z] = amps[i];
          t.rows.push_back({name, num(z.real()), num(z.imag()), num(std::abs(z)), num(report.rydberg_time[i])});
        }
        t.write_csv(s);
      },
      doc);
  return kExitOk;
}

// ---- sweep ------------------------------------------------------------------

struct SweepOptions {
  std::string axis = "v";
  std::string protocol = "gap";
  std::optional<double> from;
  std::optional<double> to;
  int points = 0;
};

int cmd_sweep(const RunConfig& config, const SweepOptions& sw, std::ostream& out) {
  if (!sw.from || !sw.to) throw ConfigError("--from and --to are required");
  if (sw.points < 1) throw ConfigError("--points must be at least 1");
  if (*sw.from > *sw.to) throw ConfigError("empty range: --from exceeds --to");
  if (sw.points == 1 && *sw.from != *sw.to) throw ConfigError("a single point needs --from equal to --to");
  const auto values = uniform_velocities(*sw.from, *sw.to, sw.points);

  const auto preset = resolve_preset(config);
  const auto options = solver_options(config, false);
  Table table;
  json rows = json::array();

  if (sw.protocol == "phi") {
    if (sw.axis != "v") throw ConfigError("the phi sweep runs over --axis v only");
    const double omega = mhz_to_rad_per_us(config.omega_mhz.value_or(std::numbers::sqrt2));
    const auto fit = fit_phase_linearity(omega, preset.wavevectors.k_excite, values, options, config.threads);
    table.header = {"v_mps", "phi_rad", "ratio"};
    for (std::size_t i = 0; i < values.size(); ++i) {
      table.rows.push_back({num(fit.velocities[i]), num(fit.phases[i]), num(fit.ratios[i])});
      rows.push_back({{"v_mps", fit.velocities[i]}, {"phi_rad", fit.phases[i]}, {"ratio", fit.ratios[i]}});
    }
    out << fmt::format("phi / (2 pi k v / Omega): slope {:.6f}, range [{:.6f}, {:.6f}], residual {:.2e}\n",
                       fit.slope_ratio, fit.min_ratio, fit.max_ratio, fit.residual);
    json doc{{"schema", kSchema}, {"command", "sweep"}, {"axis", sw.axis},        {"protocol", sw.protocol},
             {"preset", preset.name}, {"slope_ratio", fit.slope_ratio}, {"rows", rows}};
    emit(config, [&](std::ostream& s) { table.write_csv(s); }, doc);
    return kExitOk;
  }

  SingleAtomProtocol protocol;
  if (sw.protocol == "restore") {
    protocol = SingleAtomProtocol::restore;
  } else if (sw.protocol == "traditional") {
    protocol = SingleAtomProtocol::traditional;
  } else {
    protocol = SingleAtomProtocol::gap;
  }
  const auto base = protocol_params(config, protocol);

  if (sw.axis == "temp") {
    const auto averages = parallel_map(
        values.size(),
        [&](std::size_t i) {
          return maxwell_average(
              [&](double v) {
                auto q = base;
                q.v_mps = v;
                return run_protocol(protocol, q, preset, options);
              },
              maxwell_grid(config, values[i], preset.species), 1);
        },
        config.threads);
    table.header = {"temp_uk", "mean_pop_error", "mean_abs_phase", "mean_r3_leak", "mean_rydberg_time_us",
                    "weight_mass"};
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto& a = averages[i];
      table.rows.push_back({num(values[i]), num(a.mean_error()), num(a.mean_abs_phase), num(a.mean_r3_leak),
                            num(a.mean_rydberg_time), num(a.weight_mass)});
      auto row = average_json(a, values[i]);
      rows.push_back(row);
    }
  } else {
    if (sw.axis != "v" && sw.axis != "z0" && sw.axis != "omega") {
      throw ConfigError(fmt::format("unknown sweep axis '{}'", sw.axis));
    }
    const auto outcomes = parallel_map(
        values.size(),
        [&](std::size_t i) {
          auto q = base;
          if (sw.axis == "v") {
            q.v_mps = values[i];
          } else if (sw.axis == "z0") {
            q.z0_um = values[i];
          } else {
            // Omega_dp keeps its ratio to Omega; the wait stays fixed.
            const double w = mhz_to_rad_per_us(values[i]);
            q.omega_dp = base.omega_dp * (w / base.omega);
            q.omega = w;
          }
          q.validate(protocol == SingleAtomProtocol::gap);
          return run_protocol(protocol, q, preset, options);
        },
        config.threads);
    if (sw.axis == "omega") {
      table.header = {"omega_mhz", "omega_dp_mhz", "pop_error", "phase_rad", "r3_leak", "rydberg_time_us"};
    }
    std::vector<SweepRow> sweep_rows;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto& o = outcomes[i];
      SweepRow r{base.v_mps, base.z0_um, o.error(), o.ground_phase, o.r3_leak, o.rydberg_time};
      if (sw.axis == "v") r.v_mps = values[i];
      if (sw.axis == "z0") r.z0_um = values[i];
      sweep_rows.push_back(r);
      json row{{"v_mps", r.v_mps}, {"z0_um", r.z0_um}};
      if (sw.axis == "omega") {
        const double dp = rad_per_us_to_mhz(base.omega_dp) * values[i] / rad_per_us_to_mhz(base.omega);
        row = {{"omega_mhz", values[i]}, {"omega_dp_mhz", dp}};
        table.rows.push_back({num(values[i]), num(dp), num(r.pop_error), num(r.phase_rad), num(r.r3_leak),
                              num(r.rydberg_time_us)});
      }
      row["pop_error"] = r.pop_error;
      row["phase_rad"] = r.phase_rad;
      row["r3_leak"] = r.r3_leak;
      row["rydberg_time_us"] = r.rydberg_time_us;
      rows.push_back(row);
    }
    if (sw.axis != "omega") {
      std::ostringstream csv;
      write_sweep_csv(csv, sweep_rows);
      json doc{{"schema", kSchema}, {"command", "sweep"}, {"axis", sw.axis},
               {"protocol", protocol_name(protocol)}, {"preset", preset.name}, {"rows", rows}};
      emit(config, [&](std::ostream& s) { s << csv.str(); }, doc);
      out << fmt::format("{} sweep of {} over {} points, errors {:.3e} .. {:.3e}\n", sw.axis, protocol_name(protocol),
                         values.size(), sweep_rows.front().pop_error, sweep_rows.back().pop_error);
      return kExitOk;
    }
  }
  json doc{{"schema", kSchema}, {"command", "sweep"}, {"axis", sw.axis},
           {"protocol", protocol_name(protocol)}, {"preset", preset.name}, {"rows", rows}};
  emit(config, [&](std::ostream& s) { table.write_csv(s); }, doc);
  out << fmt::format("{} sweep of {} over {} points\n", sw.axis, protocol_name(protocol), values.size());
  return kExitOk;
}

// ---- table ------------------------------------------------------------------

int cmd_table1(const RunConfig& config, std::ostream& out) {
  struct Row {
    double temp_uk;
    int n;
    double ours_pop;
    double trad_pop;
    double trad_phase;
  };
  static constexpr Row kPublished[] = {{10.0, 1, 0.9999797, 0.9999955, 3.024902},
                                   {200.0, 1, 0.9968510, 0.9984545, 2.620949},
                                   {200.0, 2, 0.9922810, 0.9961266, 2.208995}};
  const auto preset = resolve_preset(config);
  const auto options = solver_options(config, false);
  RunConfig base = config;
  base.omega_mhz.reset();
  base.omega_dp_mhz.reset();
  base.omega_if_mhz.reset();
  base.v_mps = 0.0;
  base.z0_um = 0.0;
  base.t_wait_us.reset();

  Table table{{"method", "temp_uk", "t_wait_us", "population", "published_population", "abs_dev", "mean_abs_phase",
               "published_phase"},
              {}};
  json rows = json::array();
  out << "Table 1: state restoration after the wait\n";
  out << fmt::format("{:<12} {:>6} {:>8} {:>11} {:>11} {:>10} {:>10} {:>10}\n", "method", "T(uK)", "t_w(us)",
                     "population", "published", "abs dev", "|phase|", "published");
  for (const auto& row : kPublished) {
    RunConfig rc = base;
    rc.n_cycles = row.n;
    const auto grid = maxwell_grid(config, row.temp_uk, preset.species);
    for (const auto protocol : {SingleAtomProtocol::gap, SingleAtomProtocol::traditional}) {
      const auto p = protocol_params(rc, protocol);
      const auto avg = maxwell_average(
          [&](double v) {
            auto q = p;
            q.v_mps = v;
            return run_protocol(protocol, q, preset, options);
          },
          grid, config.threads);
      const bool ours = protocol == SingleAtomProtocol::gap;
      const double published_pop = ours ? row.ours_pop : row.trad_pop;
      const double published_phase = ours ? std::numbers::pi : row.trad_phase;
      const char* name = ours ? "this-work" : "traditional";
      out << fmt::format("{:<12} {:>6g} {:>8.5f} {:>11.7f} {:>11.7f} {:>10.2e} {:>10.6f} {:>10.6f}\n", name,
                         row.temp_uk, p.t_wait_us, avg.mean_population, published_pop,
                         avg.mean_population - published_pop, avg.mean_abs_phase, published_phase);
      table.rows.push_back({name, num(row.temp_uk), num(p.t_wait_us), num(avg.mean_population), num(published_pop),
                            num(avg.mean_population - published_pop), num(avg.mean_abs_phase), num(published_phase)});
      rows.push_back({{"method", name},
                      {"temp_uk", row.temp_uk},
                      {"t_wait_us", p.t_wait_us},
                      {"population", avg.mean_population},
                      {"published_population", published_pop},
                      {"mean_abs_phase", avg.mean_abs_phase},
                      {"published_phase", published_phase},
                      {"weight_mass", avg.weight_mass}});
    }
  }
  json doc{{"schema", kSchema}, {"command", "table"}, {"table", 1}, {"preset", preset.name}, {"rows", rows}};
  emit(config, [&](std::ostream& s) { table.write_csv(s); }, doc);
  return kExitOk;
}

int cmd_table2(const RunConfig& config, std::ostream& out) {
  struct Row {
    int n;
    double temp_uk;
    GateMethod method;
    double duration;
    double e_ro_bar;
  };
  static constexpr Row kPublished[] = {
      {1, 10.0, GateMethod::dual_rail, 1.405, 2.56e-4},   {1, 10.0, GateMethod::traditional, 1.061, 4.69e-3},
      {1, 200.0, GateMethod::dual_rail, 1.405, 1.99e-3},  {1, 200.0, GateMethod::traditional, 1.061, 8.06e-2},
      {2, 10.0, GateMethod::dual_rail, 2.111, 6.64e-4},   {2, 10.0, GateMethod::traditional, 1.768, 1.41e-2},
      {2, 200.0, GateMethod::dual_rail, 2.111, 5.58e-3},  {2, 200.0, GateMethod::traditional, 1.768, 2.03e-1}};
  const auto preset = resolve_preset(config);
  const auto options = solver_options(config, true);
  const int points = config.grid_points > 0 ? config.grid_points : kDefaultGatePoints;
  RunConfig base;
  base.preset = config.preset;
  base.config_path = config.config_path;
  base.L_um = config.L_um;

  Table table{{"method", "temp_uk", "t_wait_us", "duration_us", "published_duration_us", "e_ro_bar", "published_e_ro_bar",
               "rel_dev", "e_decay", "fidelity"},
              {}};
  json rows = json::array();
  out << fmt::format("Table 2: blockade gate, {}x{} velocity grid\n", points, points);
  out << fmt::format("{:<12} {:>6} {:>8} {:>9} {:>7} {:>11} {:>10} {:>8} {:>9}\n", "method", "T(uK)", "t_w(us)",
                     "dur(us)", "published", "E_ro_bar", "published", "rel dev", "F");
  for (const auto& row : kPublished) {
    RunConfig rc = base;
    rc.n_cycles = row.n;
    const auto p = gate_params(rc, preset);
    const auto grid =
        averaged_rotation_error(p, row.temp_uk, preset.species, row.method, points, kGateVmax, options, config.threads);
    const double duration = gate_duration(p, row.method);
    const double e_decay = simulate_gate(p, row.method, options).e_decay;
    const double f = fidelity_from(grid.e_ro_bar, e_decay);
    const double rel = grid.e_ro_bar / row.e_ro_bar - 1.0;
    const char* name = row.method == GateMethod::dual_rail ? "this-work" : "traditional";
    out << fmt::format("{:<12} {:>6g} {:>8.5f} {:>9.4f} {:>7.3f} {:>11.4e} {:>10.3e} {:>+8.3f} {:>9.5f}\n", name,
                       row.temp_uk, p.t_wait(), duration, row.duration, grid.e_ro_bar, row.e_ro_bar, rel, f);
    table.rows.push_back({name, num(row.temp_uk), num(p.t_wait()), num(duration), num(row.duration),
                          num(grid.e_ro_bar), num(row.e_ro_bar), num(rel), num(e_decay), num(f)});
    rows.push_back({{"method", name},
                    {"temp_uk", row.temp_uk},
                    {"t_wait_us", p.t_wait()},
                    {"duration_us", duration},
                    {"published_duration_us", row.duration},
                    {"e_ro_bar", grid.e_ro_bar},
                    {"published_e_ro_bar", row.e_ro_bar},
                    {"e_decay", e_decay},
                    {"fidelity", f}});
  }
  json doc{{"schema", kSchema}, {"command", "table"}, {"table", 2},    {"preset", preset.name},
           {"grid_points", points}, {"v_max_mps", kGateVmax}, {"rows", rows}};
  emit(config, [&](std::ostream& s) { table.write_csv(s); }, doc);
  return kExitOk;
}

// ---- argument wiring --------------------------------------------------------

void add_common(CLI::App* app, RunConfig& config) {
  app->add_option("--preset", config.preset, "Atom/laser preset name")->capture_default_str();
  app->add_option("--config", config.config_path,
                  fmt::format("Preset INI file searched before the built-ins (default: ${})", kConfigEnv));
  app->add_option("--L", config.L_um, "Atom separation in um (overrides the preset)")
      ->check(CLI::PositiveNumber);
  app->add_option("--out", config.out_path, "Output file");
  app->add_option("--format", config.format, "Output format for --out")
      ->transform(CLI::CheckedTransformer(std::map<std::string, OutputFormat>{{"csv", OutputFormat::csv},
                                                                              {"json", OutputFormat::json}}))
      ->default_str("csv");
  app->add_option("--threads", config.threads, "Worker threads (0: all cores, 1: serial)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--solver", config.solver, "auto, dop853 or frame")
      ->check(CLI::IsMember({"auto", "dop853", "frame"}))
      ->capture_default_str();
}

void add_motion(CLI::App* app, RunConfig& config) {
  app->add_option("--v", config.v_mps, "Velocity along the beams in m/s")->capture_default_str();
  app->add_option("--z0", config.z0_um, "Initial position in um")->capture_default_str();
}

void add_temperature(CLI::App* app, RunConfig& config) {
  app->add_option("--temp", config.temp_uk, "Also average over a Maxwell distribution at this temperature (uK)")
      ->check(CLI::PositiveNumber);
  app->add_option("--grid-points", config.grid_points, "Velocity grid points")->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Doppler-resilient dual-rail Rydberg excitation and blockade-gate simulator", "dualrail"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  RunConfig config;
  ExciteOptions excite_opts;
  OptimizeOptions optimize_opts;
  GateOptions gate_opts;
  SweepOptions sweep_opts;
  bool traditional = false;
  int table_id = 0;

  auto* excite = app.add_subcommand("excite", "Drive from |1> and report the ground-state population and phase");
  add_common(excite, config);
  add_motion(excite, config);
  add_temperature(excite, config);
  excite->add_option("--omega-mhz", config.omega_mhz, "Rabi frequency Omega/2pi (default 0.5)");
  excite->add_option("--t", config.t_us, "Drive duration in us (default 2)")->check(CLI::PositiveNumber);
  excite->add_option("--model", excite_opts.model, "four-field, dual-rail or single-rail")
      ->check(CLI::IsMember({"four-field", "dual-rail", "single-rail"}))
      ->capture_default_str();
  excite->add_option("--samples", excite_opts.samples, "Trajectory samples written with --format csv")
      ->capture_default_str();

  auto* restore = app.add_subcommand("restore", "Pi excitation followed by a 3 pi deexcitation, no wait");
  add_common(restore, config);
  add_motion(restore, config);
  add_temperature(restore, config);
  restore->add_option("--omega-mhz", config.omega_mhz, "Excitation Omega/2pi (default 2, or 2 sqrt2 traditional)");
  restore->add_option("--omega-dp-mhz", config.omega_dp_mhz, "Signed deexcitation Omega_dp/2pi (default -2.0399)");
  restore->add_flag("--traditional", traditional, "Single-rail pi - wait - pi baseline instead");
  restore->add_option("--t-wait", config.t_wait_us, "Traditional wait in us (default: gap time of --n-cycles)");
  restore->add_option("--n-cycles", config.n_cycles, "Infrared cycles defining the default traditional wait")
      ->capture_default_str();
  restore->add_option("--omega-if-mhz", config.omega_if_mhz, "Infrared Omega_IF/2pi for the default wait (default 2)");

  auto* gap = app.add_subcommand("gap", "Excite, infrared wait, 3 pi deexcitation in the {1, r1, r2, r3} model");
  add_common(gap, config);
  add_motion(gap, config);
  add_temperature(gap, config);
  gap->add_option("--omega-mhz", config.omega_mhz, "Excitation Omega/2pi (default 2)");
  gap->add_option("--omega-dp-mhz", config.omega_dp_mhz, "Signed deexcitation Omega_dp/2pi (default -2.0339)");
  gap->add_option("--omega-if-mhz", config.omega_if_mhz, "Infrared Omega_IF/2pi (default: Omega)");
  gap->add_option("--n-cycles", config.n_cycles, "Infrared 4 pi cycles during the wait")->capture_default_str();
  gap->add_option("--t-wait", config.t_wait_us, "Wait in us; must equal 4 n pi/(sqrt2 Omega_IF)");

  auto* optimize = app.add_subcommand("optimize", "Find the deexcitation amplitude that best restores |1>");
  add_common(optimize, config);
  optimize->add_option("--omega-mhz", optimize_opts.omegas_mhz, "Excitation Omega/2pi, one or more values")
      ->capture_default_str();
  optimize->add_option("--sign", optimize_opts.sign, "Sign of Omega_dp")
      ->check(CLI::IsMember({-1, 1}))
      ->capture_default_str();
  optimize->add_option("--v", optimize_opts.v_ref, "Reference velocity in m/s")->capture_default_str();
  optimize->add_option("--bracket", optimize_opts.bracket, "Relative search half-width around Omega")
      ->capture_default_str();

  auto* gate = app.add_subcommand("gate", "Controlled-Z blockade gate: amplitudes, E_ro, E_decay, fidelity");
  add_common(gate, config);
  add_temperature(gate, config);
  gate->add_option("--method", gate_opts.method, "ours or traditional")
      ->check(CLI::IsMember({"ours", "dual_rail", "traditional"}))
      ->capture_default_str();
  gate->add_option("--omega-mhz", config.omega_mhz, "Control Omega/2pi (default 2)");
  gate->add_option("--omega-dp-mhz", config.omega_dp_mhz, "Control deexcitation Omega_dp/2pi (default -2.0339)");
  gate->add_option("--omega-t-mhz", config.omega_t_mhz, "Target Omega_t/2pi (default: Omega)");
  gate->add_option("--omega-if-mhz", config.omega_if_mhz, "Infrared Omega_IF/2pi (default: Omega)");
  gate->add_option("--n-cycles", config.n_cycles, "Infrared 4 pi cycles; sets t_w")->capture_default_str();
  gate->add_option("--t-wait", config.t_wait_us, "Rejected: t_w follows from --n-cycles");
  gate->add_option("--v", config.v_mps, "Control velocity in m/s")->capture_default_str();
  gate->add_option("--vt", config.v_target_mps, "Target velocity in m/s (default: --v)");
  gate->add_option("--z0", config.z0_um, "Initial position of both qubits in um")->capture_default_str();
  gate->add_option("--v-max", gate_opts.v_max, "Velocity grid half-width in m/s")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gate->add_option("--target-deexcitation", gate_opts.target_deexcitation, "negative-omega-t or omega-dp")
      ->check(CLI::IsMember({"negative-omega-t", "omega-dp"}))
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Ordered CSV over velocity, position, Rabi frequency or temperature");
  add_common(sweep, config);
  add_motion(sweep, config);
  sweep->add_option("--grid-points", config.grid_points, "Velocity grid points for --axis temp")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--axis", sweep_opts.axis, "v, z0, omega or temp")
      ->check(CLI::IsMember({"v", "z0", "omega", "temp"}))
      ->capture_default_str();
  sweep->add_option("--protocol", sweep_opts.protocol, "restore, gap, traditional or phi")
      ->check(CLI::IsMember({"restore", "gap", "traditional", "phi"}))
      ->capture_default_str();
  sweep->add_option("--from", sweep_opts.from, "First axis value")->required();
  sweep->add_option("--to", sweep_opts.to, "Last axis value")->required();
  sweep->add_option("--points", sweep_opts.points, "Number of axis values")->required();
  sweep->add_option("--omega-mhz", config.omega_mhz, "Excitation Omega/2pi");
  sweep->add_option("--omega-dp-mhz", config.omega_dp_mhz, "Signed deexcitation Omega_dp/2pi");
  sweep->add_option("--omega-if-mhz", config.omega_if_mhz, "Infrared Omega_IF/2pi");
  sweep->add_option("--n-cycles", config.n_cycles, "Infrared cycles")->capture_default_str();
  sweep->add_option("--t-wait", config.t_wait_us, "Wait in us");

  auto* table = app.add_subcommand("table", "Recompute a results table and compare with the published values");
  add_common(table, config);
  table->add_option("id", table_id, "Table number: 1 (state restoration) or 2 (blockade gate)")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  table->add_option("--grid-points", config.grid_points, "Velocity grid points (default 201 for 1, 100 for 2)")
      ->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  int status = kExitOk;
  try {
    if (*excite) {
      config.subcommand = "excite";
      status = cmd_excite(config, excite_opts, out);
    } else if (*restore) {
      config.subcommand = "restore";
      status = cmd_protocol(config, traditional ? SingleAtomProtocol::traditional : SingleAtomProtocol::restore, out);
    } else if (*gap) {
      config.subcommand = "gap";
      status = cmd_protocol(config, SingleAtomProtocol::gap, out);
    } else if (*optimize) {
      config.subcommand = "optimize";
      status = cmd_optimize(config, optimize_opts, out);
    } else if (*gate) {
      config.subcommand = "gate";
      status = cmd_gate(config, gate_opts, out);
    } else if (*sweep) {
      config.subcommand = "sweep";
      status = cmd_sweep(config, sweep_opts, out);
    } else if (*table) {
      config.subcommand = "table";
      status = table_id == 1 ? cmd_table1(config, out) : cmd_table2(config, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const LookupError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IntegrationError& e) {
    err << fmt::format("integration failed at t = {} us (step {}): {}\n", e.time(), e.step(), e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << fmt::format("wall time {:.3f} s\n", wall);
  return status;
}

}  // namespace dualrail::cli
