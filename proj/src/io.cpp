#include "cfp/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace cfp {

namespace {

[[noreturn]] void bail(const std::string& origin, const std::string& msg) {
  throw std::invalid_argument(origin + ": " + msg);
}

const Json& need(const Json& obj, const char* key, const std::string& origin,
                 const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    bail(origin, where + ": missing key '" + key + "'");
  }
  return obj.at(key);
}

double as_number(const Json& j, const std::string& origin,
                 const std::string& where) {
  if (!j.is_number()) bail(origin, where + ": expected a number");
  return j.get<double>();
}

std::string as_string(const Json& j, const std::string& origin,
                      const std::string& where) {
  if (!j.is_string()) bail(origin, where + ": expected a string");
  return j.get<std::string>();
}

std::vector<std::string> as_string_array(const Json& j,
                                         const std::string& origin,
                                         const std::string& where) {
  if (!j.is_array()) bail(origin, where + ": expected an array");
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const auto& item : j) out.push_back(as_string(item, origin, where));
  return out;
}

std::vector<std::vector<double>> as_matrix(const Json& j,
                                           const std::string& origin,
                                           const std::string& where) {
  if (!j.is_array()) bail(origin, where + ": expected a matrix");
  std::vector<std::vector<double>> out;
  out.reserve(j.size());
  for (const auto& row : j) {
    if (!row.is_array()) bail(origin, where + ": expected a matrix row");
    std::vector<double> r;
    r.reserve(row.size());
    for (const auto& item : row) r.push_back(as_number(item, origin, where));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<GaugePoint> as_table(const Json& j, const std::string& origin,
                                 const std::string& where) {
  if (!j.is_array()) bail(origin, where + ": expected a table of [t, value]");
  std::vector<GaugePoint> points;
  points.reserve(j.size());
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != 2) {
      bail(origin, where + ": table rows must be [t, value]");
    }
    points.push_back({as_number(row[0], origin, where),
                      as_number(row[1], origin, where)});
  }
  return points;
}

int resolve_label(const Json& j, const FiniteMetricSpace& space,
                  const std::string& origin, const std::string& where) {
  const std::string label = as_string(j, origin, where);
  const auto idx = space.index_of(label);
  if (!idx) bail(origin, where + ": unknown point '" + label + "'");
  return *idx;
}

FiniteMetricSpace parse_space(const Json& j, const std::string& origin) {
  auto labels = as_string_array(need(j, "labels", origin, "space"), origin,
                                "space.labels");
  auto dist =
      as_matrix(need(j, "dist", origin, "space"), origin, "space.dist");
  try {
    return FiniteMetricSpace(std::move(labels), std::move(dist));
  } catch (const std::exception& e) {
    bail(origin, std::string("space: ") + e.what());
  }
}

void parse_maps(const Json& j, const FiniteMetricSpace& space,
                ProblemFile& out, const std::string& origin) {
  if (!j.is_object()) bail(origin, "maps: expected an object of named maps");
  const int n = space.size();
  for (const auto& [name, def] : j.items()) {
    const std::string where = "maps." + name;
    const std::string type =
        as_string(need(def, "type", origin, where), origin, where + ".type");
    try {
      if (type == "single") {
        const Json& image = need(def, "image", origin, where);
        if (!image.is_array() || static_cast<int>(image.size()) != n) {
          bail(origin, where + ".image: expected " + std::to_string(n) +
                           " point labels");
        }
        std::vector<int> idx;
        idx.reserve(image.size());
        for (const auto& item : image) {
          idx.push_back(resolve_label(item, space, origin, where + ".image"));
        }
        out.single_maps.emplace(name, SingleValuedMap(std::move(idx), n));
      } else if (type == "multi") {
        const Json& images = need(def, "images", origin, where);
        if (!images.is_array() || static_cast<int>(images.size()) != n) {
          bail(origin, where + ".images: expected " + std::to_string(n) +
                           " label sets");
        }
        std::vector<PointSet> sets;
        sets.reserve(images.size());
        for (const auto& set : images) {
          if (!set.is_array()) {
            bail(origin, where + ".images: each image must be a label array");
          }
          std::vector<int> members;
          members.reserve(set.size());
          for (const auto& item : set) {
            members.push_back(
                resolve_label(item, space, origin, where + ".images"));
          }
          sets.emplace_back(std::move(members), n);
        }
        out.multi_maps.emplace(name, MultiValuedMap(std::move(sets), n));
      } else {
        bail(origin, where + ": unknown map type '" + type + "'");
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      bail(origin, where + ": " + e.what());
    }
  }
}

void parse_gauges(const Json& j, ProblemFile& out,
                  const std::string& origin) {
  if (!j.is_object()) {
    bail(origin, "gauges: expected an object of named gauges");
  }
  for (const auto& [name, def] : j.items()) {
    const std::string where = "gauges." + name;
    const std::string kind_text =
        as_string(need(def, "kind", origin, where), origin, where + ".kind");
    const auto kind = gauge_kind_from_string(kind_text);
    if (!kind) bail(origin, where + ": unknown gauge kind '" + kind_text + "'");
    try {
      switch (*kind) {
        case GaugeKind::Banach:
          out.gauges.emplace(
              name, Gauge::banach(as_number(need(def, "alpha", origin, where),
                                            origin, where + ".alpha")));
          break;
        case GaugeKind::Rho:
          out.gauges.emplace(name, Gauge::rho());
          break;
        case GaugeKind::MizoguchiTakahashi:
          if (def.contains("value")) {
            out.gauges.emplace(
                name, Gauge::mt_constant(as_number(def.at("value"), origin,
                                                   where + ".value")));
            break;
          }
          [[fallthrough]];
        default:
          out.gauges.emplace(
              name,
              Gauge::tabulated(*kind, as_table(need(def, "table", origin,
                                                    where),
                                               origin, where + ".table")));
          break;
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      bail(origin, where + ": " + e.what());
    }
  }
}

void parse_potentials(const Json& j, const FiniteMetricSpace& space,
                      ProblemFile& out, const std::string& origin) {
  if (!j.is_object()) {
    bail(origin, "potentials: expected an object of named tables");
  }
  const int n = space.size();
  for (const auto& [name, def] : j.items()) {
    const std::string where = "potentials." + name;
    const std::string type =
        as_string(need(def, "type", origin, where), origin, where + ".type");
    const double tol =
        def.contains("tol")
            ? as_number(def.at("tol"), origin, where + ".tol")
            : 0.0;
    if (type == "points") {
      const Json& values = need(def, "values", origin, where);
      if (!values.is_object()) {
        bail(origin, where + ".values: expected {label: value}");
      }
      PointPotential phi;
      phi.name = name;
      phi.tol = tol;
      phi.value.assign(n, 0.0);
      std::vector<bool> seen(n, false);
      for (const auto& [label, value] : values.items()) {
        const auto idx = space.index_of(label);
        if (!idx) bail(origin, where + ": unknown point '" + label + "'");
        phi.value[*idx] = as_number(value, origin, where + "." + label);
        seen[*idx] = true;
      }
      for (int i = 0; i < n; ++i) {
        if (!seen[i]) {
          bail(origin, where + ": no value for point '" + space.label(i) +
                           "'");
        }
      }
      out.point_potentials.emplace(name, std::move(phi));
    } else if (type == "pairs") {
      PairPotential phi;
      phi.name = name;
      phi.tol = tol;
      phi.value =
          as_matrix(need(def, "matrix", origin, where), origin,
                    where + ".matrix");
      out.pair_potentials.emplace(name, std::move(phi));
    } else {
      bail(origin, where + ": unknown potential type '" + type + "'");
    }
  }
}

Aggregator parse_aggregator(const Json& j, const std::string& origin) {
  const std::string where = "bellman.aggregator";
  const std::string form =
      as_string(need(j, "form", origin, where), origin, where + ".form");
  if (form == "constant") {
    return Aggregator::constant(
        as_number(need(j, "c", origin, where), origin, where + ".c"));
  }
  if (form == "affine") {
    return Aggregator::affine(
        as_number(need(j, "c", origin, where), origin, where + ".c"),
        as_number(need(j, "beta", origin, where), origin, where + ".beta"));
  }
  if (form == "tabulated") {
    return Aggregator::tabulated(
        as_table(need(j, "table", origin, where), origin, where + ".table"));
  }
  bail(origin, where + ": unknown form '" + form + "'");
}

BellmanProblem parse_bellman(const Json& j, const std::string& origin) {
  auto states = as_string_array(need(j, "states", origin, "bellman"), origin,
                                "bellman.states");
  auto decisions = as_string_array(need(j, "decisions", origin, "bellman"),
                                   origin, "bellman.decisions");
  auto reward = as_matrix(need(j, "reward", origin, "bellman"), origin,
                          "bellman.reward");

  const Json& tr = need(j, "transition", origin, "bellman");
  if (!tr.is_array()) bail(origin, "bellman.transition: expected a matrix");
  std::vector<std::vector<int>> transition;
  transition.reserve(tr.size());
  for (const auto& row : tr) {
    if (!row.is_array()) {
      bail(origin, "bellman.transition: expected a matrix row");
    }
    std::vector<int> r;
    r.reserve(row.size());
    for (const auto& item : row) {
      if (item.is_string()) {
        const std::string label = item.get<std::string>();
        const auto it = std::find(states.begin(), states.end(), label);
        if (it == states.end()) {
          bail(origin, "bellman.transition: unknown state '" + label + "'");
        }
        r.push_back(static_cast<int>(it - states.begin()));
      } else if (item.is_number_integer()) {
        r.push_back(item.get<int>());
      } else {
        bail(origin, "bellman.transition: entries must be state labels or "
                     "indices");
      }
    }
    transition.push_back(std::move(r));
  }

  Aggregator agg = parse_aggregator(need(j, "aggregator", origin, "bellman"),
                                    origin);
  try {
    return BellmanProblem(std::move(states), std::move(decisions),
                          std::move(reward), std::move(transition),
                          std::move(agg));
  } catch (const std::exception& e) {
    bail(origin, std::string("bellman: ") + e.what());
  }
}

Json witness_json(const PairWitness& w, const FiniteMetricSpace& space) {
  return Json{{"x", space.label(w.x)},
              {"y", space.label(w.y)},
              {"lhs", w.lhs},
              {"rhs", w.rhs}};
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("cannot read file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << hash;
  return os.str();
}

ProblemFile parse_problem(const std::string& text,
                          const std::string& origin) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    bail(origin, e.what());
  }
  if (!j.is_object()) bail(origin, "top level must be an object");

  ProblemFile out;
  if (j.contains("space")) {
    out.space = parse_space(j.at("space"), origin);
  }
  if (j.contains("maps")) {
    if (!out.space) bail(origin, "maps require a space block");
    parse_maps(j.at("maps"), *out.space, out, origin);
  }
  if (j.contains("gauges")) {
    parse_gauges(j.at("gauges"), out, origin);
  }
  if (j.contains("potentials")) {
    if (!out.space) bail(origin, "potentials require a space block");
    parse_potentials(j.at("potentials"), *out.space, out, origin);
  }
  if (j.contains("bellman")) {
    out.bellman = parse_bellman(j.at("bellman"), origin);
  }
  if (j.contains("value_functions")) {
    if (!out.bellman) {
      bail(origin, "value_functions require a bellman block");
    }
    const Json& vf = j.at("value_functions");
    if (!vf.is_object()) {
      bail(origin, "value_functions: expected an object of named arrays");
    }
    for (const auto& [name, arr] : vf.items()) {
      const std::string where = "value_functions." + name;
      if (!arr.is_array() ||
          static_cast<int>(arr.size()) != out.bellman->state_count()) {
        bail(origin, where + ": expected " +
                         std::to_string(out.bellman->state_count()) +
                         " values in state order");
      }
      ValueFunction h;
      h.reserve(arr.size());
      for (const auto& item : arr) {
        h.push_back(as_number(item, origin, where));
      }
      out.value_functions.emplace(name, std::move(h));
    }
  }
  return out;
}

PointSet parse_point_set(const std::string& csv,
                         const FiniteMetricSpace& space) {
  std::vector<int> members;
  std::string token;
  std::istringstream in(csv);
  while (std::getline(in, token, ',')) {
    const auto first = token.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = token.find_last_not_of(" \t");
    const std::string label = token.substr(first, last - first + 1);
    const auto idx = space.index_of(label);
    if (!idx) {
      throw std::invalid_argument("unknown point '" + label + "' in set '" +
                                  csv + "'");
    }
    members.push_back(*idx);
  }
  return PointSet(std::move(members), space.size());
}

Json gauge_report_json(const GaugeReport& report) {
  Json checks = Json::array();
  for (const auto& check : report.checks) {
    checks.push_back(Json{{"property", check.property},
                          {"pass", check.pass},
                          {"t", check.t},
                          {"lhs", check.lhs},
                          {"rhs", check.rhs}});
  }
  return Json{{"pass", report.all_pass()}, {"checks", std::move(checks)}};
}

Json certificate_json(const Certificate& cert,
                      const FiniteMetricSpace& space) {
  Json j{{"condition", to_string(cert.kind)},
         {"map", cert.map_name},
         {"verdict", cert.pass ? "pass" : "fail"},
         {"pairs_checked", cert.pairs_checked}};
  if (!cert.gauge_name.empty()) j["gauge"] = cert.gauge_name;
  if (cert.witness) j["witness"] = witness_json(*cert.witness, space);
  if (!cert.gauge_report.checks.empty()) {
    j["gauge_report"] = gauge_report_json(cert.gauge_report);
  }
  if (!cert.grid.empty()) j["grid"] = cert.grid;
  if (!cert.levels.empty()) {
    Json levels = Json::array();
    for (const auto& level : cert.levels) {
      levels.push_back(Json{{"level", level.level}, {"delta", level.delta}});
    }
    j["levels"] = std::move(levels);
  }
  return j;
}

Json trace_json(const IterationTrace& trace,
                const FiniteMetricSpace& space) {
  Json points = Json::array();
  for (int p : trace.points) points.push_back(space.label(p));
  Json j{{"points", std::move(points)},
         {"step_dist", trace.step_dist},
         {"termination", to_string(trace.termination)},
         {"relaxed_steps", trace.relaxed_steps}};
  if (!trace.potential.empty()) j["potential"] = trace.potential;
  if (trace.termination == Termination::FixedPoint) {
    j["fixed_point"] = space.label(trace.points.back());
    j["steps"] = trace.steps_to_fixed_point();
  }
  return j;
}

Json bellman_certificate_json(const BellmanCertificate& cert,
                              const BellmanProblem& problem) {
  auto check_json = [&](const BellmanCheck& check) {
    Json j{{"name", check.name},
           {"pass", check.pass},
           {"basis", check.basis},
           {"detail", check.detail}};
    if (check.witness) {
      const auto& w = *check.witness;
      j["witness"] = Json{{"state", problem.states()[w.x]},
                          {"decision", problem.decisions()[w.y]},
                          {"h_at_x", w.h_at_x},
                          {"k_at_x", w.k_at_x},
                          {"d_hk", w.d_hk},
                          {"lhs", w.lhs},
                          {"rhs", w.rhs}};
    }
    return j;
  };
  return Json{{"strict_rho", check_json(cert.strict_rho)},
              {"banach_beta", check_json(cert.banach_beta)},
              {"beta", cert.beta},
              {"samples", cert.samples},
              {"seed", cert.seed},
              {"pass", cert.pass()}};
}

Json solve_trace_json(const SolveTrace& trace) {
  return Json{{"deltas", trace.deltas},
              {"residual", trace.residual},
              {"iterations", trace.iterations},
              {"converged", trace.converged}};
}

Json selftest_json(const SelftestReport& report) {
  Json checks = Json::array();
  for (const auto& check : report.checks) {
    checks.push_back(Json{{"name", check.name},
                          {"pass", check.pass},
                          {"detail", check.detail}});
  }
  return Json{{"seed", report.seed},
              {"pass", report.all_pass()},
              {"checks", std::move(checks)}};
}

Json make_report(const std::string& command, Json args, Json input,
                 Json result, double total_ms) {
  Json report{{"schema", "cfp-1"}, {"command", command}};
  report["args"] = std::move(args);
  if (!input.is_null()) report["input"] = std::move(input);
  report["result"] = std::move(result);
  report["timings"] = Json{{"total_ms", total_ms}};
  return report;
}

}  // namespace cfp
