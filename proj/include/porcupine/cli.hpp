#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "porcupine/domains.hpp"
#include "porcupine/fiber_maps.hpp"
#include "porcupine/itinerary.hpp"
#include "porcupine/parallel.hpp"
#include "porcupine/report_io.hpp"
#include "porcupine/skew3d.hpp"
#include "porcupine/spectrum.hpp"
#include "porcupine/symbolic.hpp"
#include "porcupine/thermo.hpp"

namespace porcupine::cli {

struct FamilyConfig {
  FiberMapParams params;
  HorseshoeModel model;
};

// Family JSON: {"beta":..,"lambda":..,"c1":..,"shape_controls":{"a0":..,"N":..},
// "resolution":..,"model":{"sigma_s":..,"sigma_u":..}}. Missing keys keep the
// built-in canonical values.
inline FamilyConfig load_family(const std::string& path) {
  FamilyConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("family file does not exist: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("family file is not valid JSON: " + std::string(e.what()));
  }
  auto get = [&](const nlohmann::json& obj, const char* key, double& slot) {
    if (obj.contains(key)) slot = obj.at(key).get<double>();
  };
  get(j, "beta", cfg.params.beta);
  get(j, "lambda", cfg.params.lambda);
  get(j, "c1", cfg.params.c1);
  get(j, "resolution", cfg.params.resolution);
  if (j.contains("shape_controls")) {
    const auto& sc = j.at("shape_controls");
    get(sc, "a0", cfg.params.a0);
    if (sc.contains("N")) cfg.params.N = sc.at("N").get<int>();
  }
  if (j.contains("model")) {
    get(j.at("model"), "sigma_s", cfg.model.sigma_s);
    get(j.at("model"), "sigma_u", cfg.model.sigma_u);
  }
  return cfg;
}

inline void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output path: " + out_path);
  out << text;
}

namespace detail {

inline void orbit_fields(JsonWriter& w, const PeriodicOrbit& o) {
  w.key("word").value(o.word.str());
  w.key("length").value(static_cast<long>(o.word.size()));
  w.key("fix").value(o.fix);
  w.key("multiplier").value(o.multiplier);
  w.key("exponent").value(o.exponent);
  w.key("stability").value(to_string(o.stability));
}

inline std::string params_json_fragment(const FiberMapParams& p) {
  JsonWriter w;
  w.begin_object();
  w.key("beta").value(p.beta);
  w.key("lambda").value(p.lambda);
  w.key("c1").value(p.c1);
  w.key("a0").value(p.a0);
  w.key("N").value(p.N);
  w.key("resolution").value(p.resolution);
  w.end_object();
  return w.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// command handlers (return process exit codes)

inline int cmd_validate(const FamilyConfig& cfg, double resolution, const std::string& out) {
  const FiberMapPair pair = build_pair(cfg.params);
  const ConditionReport rep = validate(pair, resolution);
  JsonWriter w;
  w.begin_object();
  w.key("command").value("validate");
  w.key("family");
  w.begin_object();
  w.key("beta").value(pair.beta);
  w.key("lambda").value(pair.lambda);
  w.key("c1").value(pair.c1);
  w.key("a0").value(pair.a0);
  w.key("b0").value(pair.b0);
  w.key("a1").value(pair.a1);
  w.key("b1").value(pair.b1);
  w.key("N").value(pair.N);
  w.end_object();
  w.key("resolution").value(rep.resolution);
  w.key("all_pass").value(rep.all_pass);
  w.key("alpha").value(rep.alpha);
  w.key("alpha_bar").value(rep.alpha_bar);
  w.key("kappa").value(rep.kappa);
  w.key("recomputed_N").value(rep.recomputed_N);
  w.key("fb_holds").value(rep.fb_holds);
  w.key("checks");
  w.begin_array();
  for (const auto& c : rep.checks) {
    w.begin_object();
    w.key("name").value(c.name);
    w.key("pass").value(c.pass);
    w.key("margin").value(c.margin);
    w.key("witness").value(c.witness);
    w.key("note").value(c.note);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  write_output(w.str(), out);
  return rep.all_pass ? 0 : 1;
}

inline int cmd_lyap(const FamilyConfig& cfg, const std::string& word_text,
                    const std::string& seq_text, double x, int n, const std::string& out) {
  const FiberMapPair pair = build_pair(cfg.params);
  double exponent = 0.0;
  if (!word_text.empty()) {
    exponent = finite_time_exponent(pair, Word::from_string(word_text), x, n);
  } else if (!seq_text.empty()) {
    exponent = finite_time_exponent(pair, parse_seq(seq_text), x, n);
  } else {
    throw std::invalid_argument("lyap needs --word or --seq");
  }
  JsonWriter w;
  w.begin_object();
  w.key("command").value("lyap");
  if (!word_text.empty()) w.key("word").value(word_text);
  if (!seq_text.empty()) w.key("seq").value(seq_text);
  w.key("x").value(x);
  w.key("n").value(n);
  w.key("exponent").value(exponent);
  w.end_object();
  write_output(w.str(), out);
  return 0;
}

inline int cmd_fixed_points(const FamilyConfig& cfg, const std::string& word_text,
                            const std::string& format, const std::string& out) {
  const FiberMapPair pair = build_pair(cfg.params);
  const Word word = Word::from_string(word_text);
  const auto orbits = fixed_points(pair, word);
  if (format == "csv") {
    CsvWriter csv({"word", "fix", "multiplier", "exponent", "stability", "excluded"});
    for (const auto& o : orbits)
      csv.row({o.word.str(), format_double(o.fix), format_double(o.multiplier),
               format_double(o.exponent), to_string(o.stability),
               orbit_excluded(o.word, o.fix) ? "true" : "false"});
    write_output(csv.str(), out);
    return 0;
  }
  JsonWriter w;
  w.begin_object();
  w.key("command").value("fixed-points");
  w.key("word").value(word_text);
  w.key("orbits");
  w.begin_array();
  for (const auto& o : orbits) {
    w.begin_object();
    detail::orbit_fields(w, o);
    w.key("excluded").value(orbit_excluded(o.word, o.fix));
    w.end_object();
  }
  w.end_array();
  w.end_object();
  write_output(w.str(), out);
  return 0;
}

inline int cmd_domain(const FamilyConfig& cfg, const std::string& left_word,
                      const std::string& format, const std::string& out) {
  const FiberMapPair pair = build_pair(cfg.params);
  const Word word = Word::from_string(left_word);
  // nesting table along suffix depths: depth m uses positions -m..-1
  std::vector<std::array<double, 4>> rows;  // depth, lo, hi, bound
  double lg = std::log(pair.gamma), lb = std::log(pair.beta);
  for (std::size_t m = 1; m <= word.size(); ++m) {
    Word suffix;
    std::size_t ones = 0;
    for (std::size_t i = word.size() - m; i < word.size(); ++i) {
      suffix.push_back(word[i]);
      ones += word[i];
    }
    const Interval I = domain_at_depth(pair, suffix);
    const double bound = std::exp(double(ones) * lg + double(m - ones) * lb);
    rows.push_back({static_cast<double>(m), I.lo, I.hi, bound});
  }
  if (format == "csv") {
    CsvWriter csv({"depth", "lo", "hi", "width", "bound"});
    for (const auto& r : rows)
      csv.row({format_double(r[0]), format_double(r[1]), format_double(r[2]),
               format_double(r[2] - r[1]), format_double(r[3])});
    write_output(csv.str(), out);
    return 0;
  }
  JsonWriter w;
  w.begin_object();
  w.key("command").value("domain");
  w.key("left_word").value(left_word);
  const Interval I = domain_at_depth(pair, word);
  w.key("interval");
  w.begin_object();
  w.key("lo").value(I.lo);
  w.key("hi").value(I.hi);
  w.key("width").value(I.width());
  w.end_object();
  w.key("depths");
  w.begin_array();
  for (const auto& r : rows) {
    w.begin_object();
    w.key("depth").value(static_cast<int>(r[0]));
    w.key("lo").value(r[1]);
    w.key("hi").value(r[2]);
    w.key("bound").value(r[3]);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  write_output(w.str(), out);
  return 0;
}

inline int cmd_fiber(const FamilyConfig& cfg, const std::string& seq_text, int max_depth,
                     double width_tol, const std::string& format, const std::string& out) {
  const FiberMapPair pair = build_pair(cfg.params);
  const SeqSpec seq = parse_seq(seq_text);
  const AdmissibleDomain dom = classify_fiber(pair, seq, max_depth, width_tol);
  if (format == "csv") {
    CsvWriter csv({"sequence", "depth", "lo", "hi", "bound", "status"});
    for (std::size_t i = 0; i < dom.approximations.size(); ++i)
      csv.row({format_seq(seq), std::to_string(i + 1), format_double(dom.approximations[i].lo),
               format_double(dom.approximations[i].hi), format_double(dom.bounds[i]),
               to_string(dom.status)});
    write_output(csv.str(), out);
    return 0;
  }
  JsonWriter w;
  w.begin_object();
  w.key("command").value("fiber");
  w.key("seq").value(format_seq(seq));
  w.key("status").value(to_string(dom.status));
  w.key("route").value(dom.route);
  w.key("decided_depth").value(dom.decided_depth);
  w.key("bound").value(dom.upper_bound_width);
  w.key("deepest");
  w.begin_object();
  w.key("lo").value(dom.deepest().lo);
  w.key("hi").value(dom.deepest().hi);
  w.end_object();
  w.end_object();
  write_output(w.str(), out);
  return 0;
}

inline int cmd_family(const FamilyConfig& cfg, double j_lo, double j_hi,
                      const std::string& xi_plus_text, int count, const std::string& out) {
  const FiberMapPair pair = build_pair(cfg.params);
  const SeqSpec xi_plus = xi_plus_text.empty() ? SeqSpec{} : parse_seq(xi_plus_text);
  const auto members = nontrivial_family(pair, Interval(j_lo, j_hi), xi_plus, count);
  JsonWriter w;
  w.begin_object();
  w.key("command").value("family");
  w.key("J");
  w.begin_object();
  w.key("lo").value(j_lo);
  w.key("hi").value(j_hi);
  w.end_object();
  w.key("count").value(count);
  w.key("members");
  w.begin_array();
  for (const auto& s : members) {
    const Interval dom = domain_at_depth(pair, s.left_core);
    w.begin_object();
    w.key("seq").value(format_seq(s));
    w.key("left_word").value(s.left_core.str());
    w.key("depth").value(static_cast<long>(s.left_core.size()));
    w.key("domain_lo").value(dom.lo);
    w.key("domain_hi").value(dom.hi);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  write_output(w.str(), out);
  return 0;
}

inline int cmd_sweep(const FamilyConfig& cfg, double lo, double hi, const std::string& out) {
  const FiberMapPair pair = build_pair(cfg.params);
  const SweepResult sw = sweep(pair, Interval(lo, hi));
  const Interval dhat = lower_fundamental_domain(pair);
  JsonWriter w;
  w.begin_object();
  w.key("command").value("sweep");
  w.key("H");
  w.begin_object();
  w.key("lo").value(lo);
  w.key("hi").value(hi);
  w.end_object();
  w.key("word").value(sw.word.str());
  w.key("word_length").value(static_cast<long>(sw.word.size()));
  w.key("image");
  w.begin_object();
  w.key("lo").value(sw.image.lo);
  w.key("hi").value(sw.image.hi);
  w.end_object();
  w.key("covers_fundamental_domain").value(sw.image.contains(dhat, kBandTol));
  w.end_object();
  write_output(w.str(), out);
  return 0;
}

inline int cmd_near_zero(const FamilyConfig& cfg, const std::string& sign, double eps,
                         int budget, const std::string& out) {
  const FiberMapPair pair = build_pair(cfg.params);
  JsonWriter w;
  w.begin_object();
  w.key("command").value("near-zero");
  w.key("sign").value(sign);
  w.key("eps").value(eps);
  try {
    const PeriodicOrbit o = sign == "neg" ? near_zero_negative(pair, eps, budget)
                                          : near_zero_positive(pair, eps, budget);
    w.key("found").value(true);
    w.key("orbit");
    w.begin_object();
    detail::orbit_fields(w, o);
    w.end_object();
    w.end_object();
    write_output(w.str(), out);
    return 0;
  } catch (const SearchBudgetError& e) {
    w.key("found").value(false);
    w.key("best_exponent").value(e.best_exponent);
    w.key("error").value(e.what());
    w.end_object();
    write_output(w.str(), out);
    return 1;
  }
}

inline int cmd_gap(const FamilyConfig& cfg, int n_max, unsigned threads,
                   const std::string& out) {
  const FiberMapPair pair = build_pair(cfg.params);
  const GapEstimate g = gap_estimate(pair, n_max, threads);
  JsonWriter w;
  w.begin_object();
  w.key("command").value("gap");
  w.key("n_max").value(g.n_max);
  w.key("log_beta").value(std::log(pair.beta));
  w.key("chi_tilde").value(g.chi_tilde);
  w.key("beta_tilde").value(g.beta_tilde);
  w.key("margin").value(g.margin);
  w.key("argmax");
  w.begin_object();
  detail::orbit_fields(w, g.argmax);
  w.end_object();
  w.key("included_count").value(g.included_count);
  w.key("excluded_count").value(g.excluded_count);
  w.key("excluded_description").value(g.excluded_description);
  w.key("note").value(g.note);
  w.end_object();
  write_output(w.str(), out);
  return g.margin > 0.0 ? 0 : 1;
}

inline int cmd_spectrum(const FamilyConfig& cfg, int n_max, unsigned threads,
                        const std::string& format, const std::string& out) {
  const FiberMapPair pair = build_pair(cfg.params);
  const auto sample = spectrum_sample(pair, n_max, threads);
  if (format == "json") {
    JsonWriter w;
    w.begin_object();
    w.key("command").value("spectrum");
    w.key("n_max").value(n_max);
    w.key("points");
    w.begin_array();
    for (const auto& p : sample) {
      w.begin_object();
      w.key("word").value(p.word.str());
      w.key("fix").value(p.fix);
      w.key("multiplier").value(p.multiplier);
      w.key("exponent").value(p.exponent);
      w.key("stability").value(to_string(p.stability));
      w.key("excluded").value(p.excluded);
      w.end_object();
    }
    w.end_array();
    w.end_object();
    write_output(w.str(), out);
    return 0;
  }
  CsvWriter csv({"word", "fix", "multiplier", "exponent", "stability", "excluded"});
  for (const auto& p : sample)
    csv.row({p.word.str(), format_double(p.fix), format_double(p.multiplier),
             format_double(p.exponent), to_string(p.stability), p.excluded ? "true" : "false"});
  write_output(csv.str(), out);
  return 0;
}

inline int cmd_pressure(const FamilyConfig& cfg, int n, double t_lo, double t_hi, int steps,
                        unsigned threads, const std::string& out) {
  const FiberMapPair pair = build_pair(cfg.params);
  const PressureData data = pressure_data(pair, n, threads);
  const PressureCurve curve = pressure_curve_from_data(data, t_lo, t_hi, steps, -1.0, &pair);
  JsonWriter w;
  w.begin_object();
  w.key("command").value("pressure");
  w.key("n").value(curve.n);
  w.key("t_grid");
  w.begin_array();
  for (double t : curve.t_grid) w.value(t);
  w.end_array();
  w.key("values");
  w.begin_array();
  for (double v : curve.values) w.value(v);
  w.end_array();
  w.key("slopes");
  w.begin_array();
  for (double s : curve.slopes) w.value(s);
  w.end_array();
  w.key("kink");
  w.begin_object();
  w.key("detected").value(curve.kink.detected);
  w.key("t_Q").value(curve.kink.t);
  w.key("D_minus").value(curve.kink.left_slope);
  w.key("D_plus").value(curve.kink.right_slope);
  w.key("jump").value(curve.kink.jump);
  w.key("theta_kink").value(curve.theta_kink);
  w.end_object();
  w.key("gap");
  w.begin_object();
  w.key("beta_tilde_n").value(std::exp(curve.chi_included_max));
  w.end_object();
  w.end_object();
  write_output(w.str(), out);
  return 0;
}

inline int cmd_transition(const FamilyConfig& cfg, int n, double t_lo, double t_hi,
                          unsigned threads, const std::string& out) {
  const FiberMapPair pair = build_pair(cfg.params);
  const GapEstimate gap = gap_estimate(pair, n, threads);
  TransitionControls controls;
  controls.t_lo = t_lo;  // curve-export range; detection brackets itself
  controls.t_hi = t_hi;
  const TransitionReport rep = phase_transition(pair, n, gap, controls, threads);
  JsonWriter w;
  w.begin_object();
  w.key("command").value("transition");
  w.key("n").value(n);
  w.key("detected").value(rep.detected);
  w.key("t_Q").value(rep.t_Q);
  w.key("D_minus").value(rep.D_minus);
  w.key("D_plus").value(rep.D_plus);
  w.key("jump").value(rep.jump);
  w.key("log_beta").value(rep.log_beta);
  w.key("log_beta_tilde").value(rep.log_beta_tilde);
  w.key("gap_margin").value(rep.gap_margin);
  w.key("bound_lo").value(rep.bound_lo);
  w.key("bound_ok").value(rep.bound_ok);
  w.key("window_in").value(rep.window_in);
  w.key("window_out").value(rep.window_out);
  w.key("note").value(rep.note);
  w.key("curve");
  w.begin_object();
  w.key("t_grid");
  w.begin_array();
  for (double t : rep.curve.t_grid) w.value(t);
  w.end_array();
  w.key("values");
  w.begin_array();
  for (double v : rep.curve.values) w.value(v);
  w.end_array();
  w.end_object();
  w.end_object();
  write_output(w.str(), out);
  return rep.detected ? 0 : 1;
}

inline int cmd_subgradient(const FamilyConfig& cfg, double t, int n, unsigned threads,
                           const std::string& out) {
  const FiberMapPair pair = build_pair(cfg.params);
  const SubgradientReport rep = subgradient_check(pair, t, n, threads);
  JsonWriter w;
  w.begin_object();
  w.key("command").value("subgradient");
  w.key("t").value(rep.t);
  w.key("n").value(rep.n);
  w.key("dominant_word").value(rep.dominant_word.str());
  w.key("dominant_fix").value(rep.dominant_fix);
  w.key("dominant_exponent").value(rep.dominant_exponent);
  w.key("chi_equilibrium").value(rep.chi_equilibrium);
  w.key("checks");
  w.begin_array();
  for (const auto& c : rep.checks) {
    w.begin_object();
    w.key("s").value(c.s);
    w.key("lhs").value(c.lhs);
    w.key("rhs").value(c.rhs);
    w.key("ok").value(c.ok);
    w.end_object();
  }
  w.end_array();
  w.key("all_ok").value(rep.all_ok);
  w.end_object();
  write_output(w.str(), out);
  return rep.all_ok ? 0 : 1;
}

inline int cmd_spine(const FamilyConfig& cfg, const std::string& seq_text, int max_depth,
                     double width_tol, const std::string& format, const std::string& out) {
  const FiberMapPair pair = build_pair(cfg.params);
  validate_model(cfg.model, pair);
  const SeqSpec seq = parse_seq(seq_text);
  const SpineResult sp = spine(cfg.model, pair, seq, max_depth, width_tol);
  if (format == "csv") {
    CsvWriter csv({"seq", "xs", "xu", "lo", "hi", "status"});
    csv.row({format_seq(seq), format_double(sp.xs), format_double(sp.xu),
             format_double(sp.fiber.deepest().lo), format_double(sp.fiber.deepest().hi),
             to_string(sp.fiber.status)});
    write_output(csv.str(), out);
    return 0;
  }
  JsonWriter w;
  w.begin_object();
  w.key("command").value("spine");
  w.key("seq").value(format_seq(seq));
  w.key("xs").value(sp.xs);
  w.key("xu").value(sp.xu);
  w.key("lo").value(sp.fiber.deepest().lo);
  w.key("hi").value(sp.fiber.deepest().hi);
  w.key("bound").value(sp.fiber.upper_bound_width);
  w.key("status").value(to_string(sp.fiber.status));
  w.key("route").value(sp.fiber.route);
  w.end_object();
  write_output(w.str(), out);
  return 0;
}

inline int cmd_cycle(const FamilyConfig& cfg, int samples, const std::string& out) {
  const FiberMapPair pair = build_pair(cfg.params);
  validate_model(cfg.model, pair);
  const CycleReport rep = verify_cycle(cfg.model, pair, samples);
  JsonWriter w;
  w.begin_object();
  w.key("command").value("cycle");
  w.key("cycle_condition_exact").value(rep.cycle_condition_exact);
  w.key("stable_leaf_ok").value(rep.stable_leaf_ok);
  w.key("unstable_leaf_ok").value(rep.unstable_leaf_ok);
  w.key("transfer_ok").value(rep.transfer_ok);
  w.key("worst_forward_gap").value(rep.worst_forward_gap);
  w.key("worst_backward_gap").value(rep.worst_backward_gap);
  w.key("worst_transfer").value(rep.worst_transfer);
  w.key("pass").value(rep.pass);
  w.end_object();
  write_output(w.str(), out);
  return rep.pass ? 0 : 1;
}

inline int cmd_periodic_near(const FamilyConfig& cfg, double x, double eps,
                             const std::string& out) {
  const FiberMapPair pair = build_pair(cfg.params);
  validate_model(cfg.model, pair);
  const PeriodicOrbit o = periodic_point_near(pair, x, eps);
  const LiftedOrbit lifted = lift_periodic(cfg.model, pair, o);
  JsonWriter w;
  w.begin_object();
  w.key("command").value("periodic-near");
  w.key("x").value(x);
  w.key("eps").value(eps);
  w.key("orbit");
  w.begin_object();
  detail::orbit_fields(w, o);
  w.end_object();
  w.key("lift");
  w.begin_object();
  w.key("xs").value(lifted.xs);
  w.key("xu").value(lifted.xu);
  w.key("index").value(lifted.index);
  w.key("return_error").value(lifted.return_error);
  w.end_object();
  w.end_object();
  write_output(w.str(), out);
  return 0;
}

inline int cmd_orbit(const FamilyConfig& cfg, double xs, double xu, double x, int steps,
                     const std::string& out) {
  const FiberMapPair pair = build_pair(cfg.params);
  validate_model(cfg.model, pair);
  std::string lines;
  Point3 p{xs, xu, x};
  for (int t = 0; t < steps; ++t) {
    const StepResult s = step(cfg.model, pair, p);
    JsonWriter w;
    w.begin_object();
    w.key("t").value(t);
    if (s.escaped) {
      w.key("event").value("escaped");
      w.key("xs").value(p.xs);
      w.key("xu").value(p.xu);
      w.key("x").value(p.x);
      w.end_object();
      lines += w.str();
      lines += '\n';
      break;
    }
    w.key("xs").value(s.point.xs);
    w.key("xu").value(s.point.xu);
    w.key("x").value(s.point.x);
    w.key("rectangle").value(s.rectangle);
    w.end_object();
    lines += w.str();
    lines += '\n';
    p = s.point;
  }
  write_output(lines, out);
  return 0;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv) {
  CLI::App app{"porcupine: a numerical laboratory for a non-contracting interval IFS "
               "and its skew-product horseshoe"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string family_path, out = "-", format = "json";
  unsigned threads = default_thread_count();
  app.add_option("--family", family_path, "family JSON file (defaults to the built-in family)")
      ->expected(1);
  app.add_option("--out", out, "output path, '-' for stdout");
  app.add_option("--threads", threads, "worker threads for enumerations");

  auto* validate_cmd = app.add_subcommand("validate", "check every standing condition");
  double resolution = 0.0;
  validate_cmd->add_option("--resolution", resolution, "grid step (default: family resolution)");

  auto* lyap_cmd = app.add_subcommand("lyap", "finite-time central exponent");
  std::string word_text, seq_text;
  double x = 0.5;
  int n_steps = 32;
  lyap_cmd->add_option("--word", word_text, "cyclic word of symbols");
  lyap_cmd->add_option("--seq", seq_text, "sequence text, e.g. '[0*] 1 . 0 1 [01*]'");
  lyap_cmd->add_option("--x", x, "starting fiber point")->required();
  lyap_cmd->add_option("--n", n_steps, "number of steps")->required();

  auto* fixed_cmd = app.add_subcommand("fixed-points", "all fixed points of a composition");
  std::string fixed_word;
  fixed_cmd->add_option("--word", fixed_word, "composition word")->required();
  fixed_cmd->add_option("--format", format, "json|csv");

  auto* domain_cmd = app.add_subcommand("domain", "finite-depth admissible domain");
  std::string left_word;
  domain_cmd->add_option("--left-word", left_word, "past word, positions -m..-1")->required();
  domain_cmd->add_option("--format", format, "json|csv");

  auto* fiber_cmd = app.add_subcommand("fiber", "classify the fiber over a sequence");
  std::string fiber_seq;
  int max_depth = 64;
  double width_tol = 1e-8;
  fiber_cmd->add_option("--seq", fiber_seq, "sequence text")->required();
  fiber_cmd->add_option("--max-depth", max_depth, "depth cap");
  fiber_cmd->add_option("--width-tol", width_tol, "triviality width tolerance");
  fiber_cmd->add_option("--format", format, "json|csv");

  auto* family_cmd = app.add_subcommand("family", "distinct sequences whose domains contain J");
  double j_lo = 0.3, j_hi = 0.4;
  int count = 10;
  std::string xi_plus;
  family_cmd->add_option("--j-lo", j_lo, "left endpoint of J")->required();
  family_cmd->add_option("--j-hi", j_hi, "right endpoint of J")->required();
  family_cmd->add_option("--count", count, "number of members");
  family_cmd->add_option("--xi-plus", xi_plus, "future half to attach");

  auto* sweep_cmd = app.add_subcommand("sweep", "word sweeping H over the fundamental domain");
  double h_lo = 0.0, h_hi = 0.0;
  sweep_cmd->add_option("--lo", h_lo, "left endpoint of H")->required();
  sweep_cmd->add_option("--hi", h_hi, "right endpoint of H")->required();

  auto* nz_cmd = app.add_subcommand("near-zero", "periodic orbit with exponent near zero");
  std::string sign = "neg";
  double eps = 0.05;
  int budget = 400;
  nz_cmd->add_option("--sign", sign, "neg|pos")->check(CLI::IsMember({"neg", "pos"}));
  nz_cmd->add_option("--eps", eps, "exponent window half-width")->required();
  nz_cmd->add_option("--budget", budget, "loop-length search budget");

  auto* gap_cmd = app.add_subcommand("gap", "spectral-gap certificate from periodic orbits");
  int n_max = 12;
  gap_cmd->add_option("--nmax", n_max, "maximal word length")->required();

  auto* spectrum_cmd = app.add_subcommand("spectrum", "per-period exponents of all orbits");
  spectrum_cmd->add_option("--nmax", n_max, "maximal word length")->required();
  spectrum_cmd->add_option("--format", format, "json|csv");

  auto* pressure_cmd = app.add_subcommand("pressure", "periodic-orbit pressure curve");
  int pn = 12, steps = 200;
  double t_lo = -8.0, t_hi = 1.0, tr_lo = 0.0, tr_hi = 0.0;
  pressure_cmd->add_option("--n", pn, "word length")->required();
  pressure_cmd->add_option("--t-lo", t_lo, "left end of the parameter grid");
  pressure_cmd->add_option("--t-hi", t_hi, "right end of the parameter grid");
  pressure_cmd->add_option("--steps", steps, "grid steps");

  auto* transition_cmd = app.add_subcommand("transition", "locate the first-order transition");
  transition_cmd->add_option("--n", pn, "word length")->required();
  transition_cmd->add_option("--t-lo", tr_lo, "curve export range, left end");
  transition_cmd->add_option("--t-hi", tr_hi, "curve export range, right end");

  auto* subgrad_cmd = app.add_subcommand("subgradient", "check the equilibrium subgradient");
  double sub_t = 0.0;
  subgrad_cmd->add_option("--t", sub_t, "parameter")->required();
  subgrad_cmd->add_option("--n", pn, "word length");

  auto* spine_cmd = app.add_subcommand("spine", "base point and fiber enclosure of a sequence");
  spine_cmd->add_option("--seq", fiber_seq, "sequence text")->required();
  spine_cmd->add_option("--max-depth", max_depth, "depth cap");
  spine_cmd->add_option("--width-tol", width_tol, "triviality width tolerance");
  spine_cmd->add_option("--format", format, "json|csv");

  auto* cycle_cmd = app.add_subcommand("cycle", "verify the heterodimensional cycle");
  int samples = 20;
  cycle_cmd->add_option("--samples", samples, "fiber sample count");

  auto* pnear_cmd = app.add_subcommand("periodic-near", "expanding orbit near a fiber point");
  double target_x = 0.5, radius = 0.05;
  pnear_cmd->add_option("--x", target_x, "target fiber point")->required();
  pnear_cmd->add_option("--eps", radius, "window radius")->required();

  auto* orbit_cmd = app.add_subcommand("orbit", "iterate the skew product, one JSON per step");
  double oxs = 0.0, oxu = 0.0, ox = 0.5;
  int osteps = 100;
  orbit_cmd->add_option("--xs", oxs, "stable base coordinate")->required();
  orbit_cmd->add_option("--xu", oxu, "unstable base coordinate")->required();
  orbit_cmd->add_option("--x", ox, "fiber coordinate")->required();
  orbit_cmd->add_option("--steps", osteps, "step budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const FamilyConfig cfg = load_family(family_path);
    if (validate_cmd->parsed()) return cmd_validate(cfg, resolution, out);
    if (lyap_cmd->parsed()) return cmd_lyap(cfg, word_text, seq_text, x, n_steps, out);
    if (fixed_cmd->parsed()) return cmd_fixed_points(cfg, fixed_word, format, out);
    if (domain_cmd->parsed()) return cmd_domain(cfg, left_word, format, out);
    if (fiber_cmd->parsed()) return cmd_fiber(cfg, fiber_seq, max_depth, width_tol, format, out);
    if (family_cmd->parsed()) return cmd_family(cfg, j_lo, j_hi, xi_plus, count, out);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, h_lo, h_hi, out);
    if (nz_cmd->parsed()) return cmd_near_zero(cfg, sign, eps, budget, out);
    if (gap_cmd->parsed()) return cmd_gap(cfg, n_max, threads, out);
    if (spectrum_cmd->parsed()) return cmd_spectrum(cfg, n_max, threads, format, out);
    if (pressure_cmd->parsed()) return cmd_pressure(cfg, pn, t_lo, t_hi, steps, threads, out);
    if (transition_cmd->parsed()) return cmd_transition(cfg, pn, tr_lo, tr_hi, threads, out);
    if (subgrad_cmd->parsed()) return cmd_subgradient(cfg, sub_t, pn, threads, out);
    if (spine_cmd->parsed()) return cmd_spine(cfg, fiber_seq, max_depth, width_tol, format, out);
    if (cycle_cmd->parsed()) return cmd_cycle(cfg, samples, out);
    if (pnear_cmd->parsed()) return cmd_periodic_near(cfg, target_x, radius, out);
    if (orbit_cmd->parsed()) return cmd_orbit(cfg, oxs, oxu, ox, osteps, out);
    std::cerr << "no command selected\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const SearchBudgetError& e) {
    std::cerr << "search failed: " << e.what() << '\n';
    return 1;
  } catch (const ConstructionError& e) {
    std::cerr << "analysis failed: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace porcupine::cli
