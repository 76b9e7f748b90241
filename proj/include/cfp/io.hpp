#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cfp/bellman.hpp"
#include "cfp/certify.hpp"
#include "cfp/iterate.hpp"
#include "cfp/metric.hpp"
#include "cfp/selftest.hpp"

namespace cfp {

using Json = nlohmann::json;

/// Parsed problem file: a metric-space block with named maps, gauges and
/// potential tables, and/or a dynamic-programming block with named value
/// functions.  Parsing validates every cross-reference and dimension, so
/// downstream code can assume consistency.
struct ProblemFile {
  std::optional<FiniteMetricSpace> space;
  std::map<std::string, SingleValuedMap> single_maps;
  std::map<std::string, MultiValuedMap> multi_maps;
  std::map<std::string, Gauge> gauges;
  std::map<std::string, PointPotential> point_potentials;
  std::map<std::string, PairPotential> pair_potentials;
  std::optional<BellmanProblem> bellman;
  std::map<std::string, ValueFunction> value_functions;
};

/// Reads a whole file; throws std::invalid_argument when it cannot be read.
std::string read_file(const std::string& path);

/// FNV-1a 64-bit digest, lowercase hex; used to fingerprint input files.
std::string fnv1a64_hex(std::string_view bytes);

/// Parses and validates problem text.  origin (usually the path) prefixes
/// every diagnostic.  Throws std::invalid_argument on malformed input.
ProblemFile parse_problem(const std::string& text, const std::string& origin);

/// Comma-separated point labels -> validated set.
PointSet parse_point_set(const std::string& csv,
                         const FiniteMetricSpace& space);

Json gauge_report_json(const GaugeReport& report);
Json certificate_json(const Certificate& cert,
                      const FiniteMetricSpace& space);
Json trace_json(const IterationTrace& trace, const FiniteMetricSpace& space);
Json bellman_certificate_json(const BellmanCertificate& cert,
                              const BellmanProblem& problem);
Json solve_trace_json(const SolveTrace& trace);
Json selftest_json(const SelftestReport& report);

/// Report envelope: schema tag, command echo, input fingerprint, result
/// payload, and a timing block (the only part allowed to vary between
/// identical runs).
Json make_report(const std::string& command, Json args, Json input,
                 Json result, double total_ms);

}  // namespace cfp
