#include "cfp/cli.hpp"

#include <chrono>
#include <sstream>

#include "cfp/bellman.hpp"
#include "cfp/certify.hpp"
#include "cfp/generate.hpp"
#include "cfp/iterate.hpp"
#include "cfp/selftest.hpp"

namespace cfp {

namespace {

struct Outcome {
  int exit_code = 0;
  Json result;
  std::string summary;
};

[[noreturn]] void input_error(const std::string& msg) {
  throw std::invalid_argument(msg);
}

const FiniteMetricSpace& need_space(const ProblemFile& file) {
  if (!file.space) input_error("the input file has no space block");
  return *file.space;
}

const Gauge& need_gauge(const ProblemFile& file, const std::string& name) {
  const auto it = file.gauges.find(name);
  if (it == file.gauges.end()) input_error("unknown gauge '" + name + "'");
  return it->second;
}

/// Contraction gauge eta for orbit selection and potentials: weak and
/// Mizoguchi-Takahashi gauges are reduced first, everything else is used
/// as the eta-class gauge it declares.
Gauge effective_eta(const Gauge& gauge) {
  switch (gauge.kind()) {
    case GaugeKind::WeakTheta:
      return weak_to_gauge(gauge);
    case GaugeKind::MizoguchiTakahashi:
      return mt_to_gauge(gauge);
    default:
      return gauge;
  }
}

/// The condition a bare gauge certifies when --strict asks for one.
ConditionKind condition_for(const Gauge& gauge) {
  switch (gauge.kind()) {
    case GaugeKind::Banach:
      return ConditionKind::Banach;
    case GaugeKind::WeakTheta:
      return ConditionKind::Weak;
    case GaugeKind::MizoguchiTakahashi:
      return ConditionKind::MizoguchiTakahashi;
    default:
      return ConditionKind::Eta;
  }
}

Json audit_json(const TelescopingAudit& audit) {
  return Json{{"pairs", audit.pairs},
              {"max_excess", audit.max_excess},
              {"pass", audit.pass}};
}

Outcome cmd_certify(const CliOptions& opt, const ProblemFile& file) {
  if (opt.condition.empty()) input_error("certify needs --condition");
  const auto kind = condition_kind_from_string(opt.condition);
  if (!kind) input_error("unknown condition '" + opt.condition + "'");

  if (*kind == ConditionKind::RhoBellman) {
    if (!file.bellman) {
      input_error("condition rho-bellman needs a bellman block");
    }
    const BellmanCertificate cert =
        certify_bellman(*file.bellman, opt.samples, opt.seed);
    Outcome out;
    out.result = bellman_certificate_json(cert, *file.bellman);
    out.exit_code = cert.strict_rho.pass ? 0 : 1;
    out.summary = std::string("rho-bellman: strict modulus ") +
                  (cert.strict_rho.pass ? "pass" : "fail") +
                  ", lipschitz route " +
                  (cert.banach_beta.pass ? "pass" : "fail");
    return out;
  }

  if (opt.map_name.empty()) input_error("certify needs --map");
  const auto& space = need_space(file);
  const auto single = file.single_maps.find(opt.map_name);
  const auto multi = file.multi_maps.find(opt.map_name);
  if (single == file.single_maps.end() && multi == file.multi_maps.end()) {
    input_error("unknown map '" + opt.map_name + "'");
  }

  CertifyOptions copt;
  copt.map_name = opt.map_name;

  Certificate cert;
  if (*kind == ConditionKind::Caristi) {
    if (multi != file.multi_maps.end()) {
      input_error("the caristi point condition needs a single-valued map");
    }
    const auto phi = file.point_potentials.find(opt.potential_name);
    if (opt.potential_name.empty() || phi == file.point_potentials.end()) {
      input_error("condition caristi needs --potential naming a point table");
    }
    cert = certify_caristi(space, single->second, phi->second, copt);
  } else if (*kind == ConditionKind::CaristiTwoVar) {
    if (multi != file.multi_maps.end()) {
      input_error("the caristi pair condition needs a single-valued map");
    }
    const auto phi = file.pair_potentials.find(opt.potential_name);
    if (opt.potential_name.empty() || phi == file.pair_potentials.end()) {
      input_error(
          "condition caristi-two-var needs --potential naming a pair table");
    }
    cert = certify_caristi_two_var(space, single->second, phi->second, copt);
  } else if (*kind == ConditionKind::MeirKeeler) {
    cert = single != file.single_maps.end()
               ? certify_meir_keeler(space, single->second, copt)
               : certify_meir_keeler(space, multi->second, copt);
  } else {
    if (opt.gauge_name.empty()) {
      input_error("condition " + opt.condition + " needs --gauge");
    }
    const Gauge& gauge = need_gauge(file, opt.gauge_name);
    cert = single != file.single_maps.end()
               ? certify_map(space, single->second, *kind, gauge, copt)
               : certify_map(space, multi->second, *kind, gauge, copt);
    cert.gauge_name = opt.gauge_name;
  }

  Outcome out;
  out.result = certificate_json(cert, space);
  out.exit_code = cert.pass ? 0 : 1;
  std::ostringstream os;
  os << "certify " << opt.condition << " on map " << opt.map_name << ": "
     << (cert.pass ? "pass" : "fail") << " (" << cert.pairs_checked
     << " checks)";
  out.summary = os.str();
  return out;
}

Outcome cmd_iterate(const CliOptions& opt, const ProblemFile& file) {
  if (opt.map_name.empty()) input_error("iterate needs --map");
  if (opt.start_label.empty()) input_error("iterate needs --start");
  const auto& space = need_space(file);
  const auto start = space.index_of(opt.start_label);
  if (!start) input_error("unknown start point '" + opt.start_label + "'");
  if (opt.max_iter < 1) input_error("--max-iter must be at least 1");

  const Gauge* gauge = nullptr;
  if (!opt.gauge_name.empty()) gauge = &need_gauge(file, opt.gauge_name);
  if (opt.strict && gauge == nullptr) {
    input_error("--strict needs --gauge to certify against");
  }

  Outcome out;
  Json result;
  const StopRule stop{opt.max_iter};

  const auto single = file.single_maps.find(opt.map_name);
  const auto multi = file.multi_maps.find(opt.map_name);
  IterationTrace trace;
  if (single != file.single_maps.end()) {
    std::optional<Gauge> eta;
    if (gauge != nullptr) eta = effective_eta(*gauge);
    if (opt.strict) {
      const Certificate cert = certify_map(space, single->second,
                                           condition_for(*gauge), *gauge,
                                           {{}, opt.map_name});
      result["certificate"] = certificate_json(cert, space);
      if (!cert.pass) {
        input_error("--strict: map '" + opt.map_name +
                     "' is not certified against gauge '" + opt.gauge_name +
                     "'");
      }
    }
    trace = picard_iterate(space, single->second, *start, stop,
                           eta ? &*eta : nullptr);
  } else if (multi != file.multi_maps.end()) {
    if (gauge == nullptr) {
      input_error("set-valued iteration needs --gauge for orbit selection");
    }
    if (opt.strict) {
      const Certificate cert = certify_map(space, multi->second,
                                           condition_for(*gauge), *gauge,
                                           {{}, opt.map_name});
      result["certificate"] = certificate_json(cert, space);
      if (!cert.pass) {
        input_error("--strict: map '" + opt.map_name +
                     "' is not certified against gauge '" + opt.gauge_name +
                     "'");
      }
    }
    const Gauge theta = midpoint_gauge(effective_eta(*gauge));
    trace = multivalued_orbit(space, multi->second, *start, theta, stop);
  } else {
    input_error("unknown map '" + opt.map_name + "'");
  }

  result["trace"] = trace_json(trace, space);
  bool audit_pass = true;
  if (!trace.potential.empty()) {
    const TelescopingAudit audit = audit_telescoping(space, trace, 1e-9);
    result["telescoping"] = audit_json(audit);
    audit_pass = audit.pass;
  }

  out.result = std::move(result);
  out.exit_code = (opt.strict && !audit_pass) ? 1 : 0;
  std::ostringstream os;
  os << "iterate " << opt.map_name << " from " << opt.start_label << ": "
     << to_string(trace.termination);
  if (trace.termination == Termination::FixedPoint) {
    os << " at " << space.label(trace.points.back()) << " in "
       << trace.steps_to_fixed_point() << " steps";
  }
  out.summary = os.str();
  return out;
}

Outcome cmd_hausdorff(const CliOptions& opt, const ProblemFile& file) {
  const auto& space = need_space(file);
  if (opt.set_a.empty() || opt.set_b.empty()) {
    input_error("hausdorff needs --set-a and --set-b");
  }
  const PointSet a = parse_point_set(opt.set_a, space);
  const PointSet b = parse_point_set(opt.set_b, space);
  const double ab = directed_hausdorff(space, a, b);
  const double ba = directed_hausdorff(space, b, a);
  const double h = hausdorff_distance(space, a, b);

  Json labels_a = Json::array();
  for (int i : a.members()) labels_a.push_back(space.label(i));
  Json labels_b = Json::array();
  for (int i : b.members()) labels_b.push_back(space.label(i));

  Outcome out;
  out.result = Json{{"set_a", std::move(labels_a)},
                    {"set_b", std::move(labels_b)},
                    {"distance", h},
                    {"directed_ab", ab},
                    {"directed_ba", ba}};
  std::ostringstream os;
  os << "hausdorff({" << opt.set_a << "}, {" << opt.set_b << "}) = " << h;
  out.summary = os.str();
  return out;
}

Outcome cmd_bellman(const CliOptions& opt, const ProblemFile& file) {
  if (!file.bellman) input_error("the input file has no bellman block");
  const BellmanProblem& problem = *file.bellman;
  if (!(opt.tol > 0.0)) input_error("--tol must be positive");
  if (opt.max_iter < 1) input_error("--max-iter must be at least 1");

  ValueFunction h0(problem.state_count(), 0.0);
  if (!opt.h0_name.empty()) {
    const auto it = file.value_functions.find(opt.h0_name);
    if (it == file.value_functions.end()) {
      input_error("unknown value function '" + opt.h0_name + "'");
    }
    h0 = it->second;
  }

  const BellmanCertificate cert =
      certify_bellman(problem, opt.samples, opt.seed);
  const BellmanSolution sol =
      solve_bellman(problem, h0, opt.tol, opt.max_iter);

  Outcome out;
  out.result = Json{{"certificate", bellman_certificate_json(cert, problem)},
                    {"value", sol.value},
                    {"states", problem.states()},
                    {"solve", solve_trace_json(sol.trace)}};
  out.exit_code = (cert.pass() && sol.trace.converged) ? 0 : 1;
  std::ostringstream os;
  os << "bellman: " << (cert.pass() ? "certified" : "uncertified") << ", "
     << (sol.trace.converged ? "converged" : "not converged") << " in "
     << sol.trace.iterations << " iterations, residual "
     << sol.trace.residual;
  out.summary = os.str();
  return out;
}

Outcome cmd_selftest(const CliOptions& opt) {
  const SelftestReport report = run_selftest(opt.seed);
  Outcome out;
  out.result = selftest_json(report);
  out.exit_code = report.all_pass() ? 0 : 1;
  long passed = 0;
  for (const auto& check : report.checks) passed += check.pass ? 1 : 0;
  std::ostringstream os;
  os << "selftest seed " << opt.seed << ": " << passed << "/"
     << report.checks.size() << " checks passed";
  out.summary = os.str();
  return out;
}

Json args_json(const CliOptions& opt) {
  Json args = Json::object();
  auto put = [&](const char* key, const std::string& value) {
    if (!value.empty()) args[key] = value;
  };
  put("map", opt.map_name);
  put("condition", opt.condition);
  put("gauge", opt.gauge_name);
  put("potential", opt.potential_name);
  put("start", opt.start_label);
  put("set_a", opt.set_a);
  put("set_b", opt.set_b);
  put("h0", opt.h0_name);
  args["seed"] = opt.seed;
  if (opt.command == "bellman" || opt.command == "iterate") {
    args["tol"] = opt.tol;
    args["max_iter"] = opt.max_iter;
  }
  if (opt.command == "bellman" || opt.condition == "rho-bellman") {
    args["samples"] = opt.samples;
  }
  if (opt.strict) args["strict"] = true;
  return args;
}

}  // namespace

CommandResult run_command(const CliOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&t0] {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  Json input;  // null when the command takes no file
  CommandResult result;
  try {
    ProblemFile file;
    if (opt.command != "selftest") {
      if (opt.input_path.empty()) {
        input_error(opt.command + " needs --input");
      }
      const std::string text = read_file(opt.input_path);
      input = Json{{"path", opt.input_path},
                   {"digest", fnv1a64_hex(text)}};
      file = parse_problem(text, opt.input_path);
    }

    Outcome outcome;
    if (opt.command == "certify") {
      outcome = cmd_certify(opt, file);
    } else if (opt.command == "iterate") {
      outcome = cmd_iterate(opt, file);
    } else if (opt.command == "hausdorff") {
      outcome = cmd_hausdorff(opt, file);
    } else if (opt.command == "bellman") {
      outcome = cmd_bellman(opt, file);
    } else if (opt.command == "selftest") {
      outcome = cmd_selftest(opt);
    } else {
      input_error("unknown command '" + opt.command + "'");
    }

    result.exit_code = outcome.exit_code;
    result.summary = std::move(outcome.summary);
    result.report = make_report(opt.command, args_json(opt), std::move(input),
                                std::move(outcome.result), elapsed_ms());
  } catch (const SelectionBoundError& e) {
    result.exit_code = 1;
    result.summary = e.what();
    result.report = make_report(
        opt.command, args_json(opt), std::move(input),
        Json{{"error", e.what()}, {"step", e.step}}, elapsed_ms());
  } catch (const std::exception& e) {
    result.exit_code = 2;
    result.summary = e.what();
    result.report = make_report(opt.command, args_json(opt), std::move(input),
                                Json{{"error", e.what()}}, elapsed_ms());
  }
  return result;
}

}  // namespace cfp
