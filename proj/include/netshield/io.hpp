#pragma once

#include <cstdint>
#include <string>

#include "netshield/allocate.hpp"
#include "netshield/dynamics.hpp"
#include "netshield/graph.hpp"
#include "netshield/heuristics.hpp"

/* File formats shared by the library and the command-line front end: the
 * edge-list graph format, plot-ready CSV emitters, and a JSON codec for
 * solver results.
 *
 * Every numeric value is printed with 17 significant digits, so each
 * generated file re-parses to exactly the object that was written and two
 * runs with the same inputs produce byte-identical files.
 */

namespace netshield {

/// Version string stamped into result files and metadata sidecars.
inline constexpr const char* kFormatVersion = "1.0.0";

/// Shortest-faithful rendering of a double: enough digits (up to 17
/// significant) that parsing the text recovers the identical bits.
std::string format_double(double value);

/// FNV-1a 64-bit hash of a byte string; used to fingerprint resolved
/// configurations in metadata sidecars.
std::uint64_t fnv1a64(const std::string& text);

// ---------------------------------------------------------------------------
// Edge lists
//
// UTF-8 text, one `src,dst,weight` triple per line with 0-based integer
// endpoints and a decimal real weight.  `#` starts a comment that runs to
// the end of the line; blank lines are skipped.  A comment of the exact
// form `# nodes: N` fixes the node count, which is the only way a trailing
// isolated node survives a round trip; without it the count is inferred as
// the largest endpoint + 1.

/// Parses an edge-list document.  `origin` names the source in error
/// messages, which carry the 1-based line number ("origin:line: message").
/// Throws std::runtime_error on malformed lines, endpoints outside the
/// declared node count, non-finite or non-positive weights, duplicate
/// edges, or an empty document with no node-count hint.
Digraph parse_edge_list(const std::string& text, const std::string& origin = "<string>");

/// Reads and parses an edge-list file; throws std::runtime_error when the
/// file cannot be opened.
Digraph read_edge_list(const std::string& path);

/// Renders a graph as an edge list, starting with the `# nodes: N` hint so
/// isolated nodes survive a round trip.
std::string format_edge_list(const Digraph& g);

void write_edge_list(const std::string& path, const Digraph& g);

// ---------------------------------------------------------------------------
// Whole-file helpers

/// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_text(const std::string& path);

/// Writes (replaces) a whole file; throws std::runtime_error on failure.
void write_text(const std::string& path, const std::string& content);

// ---------------------------------------------------------------------------
// Plot-ready CSV

/// Mean-field trajectory: header `t,node_0,...,node_{n-1}`, one row per
/// stored time.
std::string format_trajectory_csv(const Trajectory& trajectory);

/// Stochastic event log: header `t,node,new_state`, one row per transition.
std::string format_event_csv(const Trajectory& trajectory);

/// Strategy comparison table from compare_strategies: header
/// `strategy,spend_node_0,...,spend_node_{n-1},epsilon,efficiency`, one row
/// per greedy strategy and a final `optimum` row with the certified
/// optimizer's per-node spend.  Expects the node-level report that
/// compare_strategies produces.
std::string format_comparison_csv(const EfficiencyReport& report);

/// Centrality table: one row per node, one column per measure, with the
/// given PageRank teleport strength.
std::string format_centrality_csv(const Digraph& g, double alpha);

/// Per-node allocation scatter: header
/// `node,correction_spend,prevention_spend,in_degree,pagerank`.  Edge-level
/// prevention spend is attributed to the edge's destination — the node the
/// reduced rate protects.  PageRank is the classic exposure ranking
/// (walks run along edge direction) with teleport strength 0.85.
std::string format_scatter_csv(const AllocationProblem& problem,
                               const AllocationResult& result);

// ---------------------------------------------------------------------------
// Result JSON

/// Serializes a solve outcome (result + its independent certificate) as a
/// JSON document.
std::string format_result_json(const AllocationResult& result,
                               const CertificationReport& report);

/// Inverse of format_result_json; throws std::runtime_error on malformed
/// documents.  Round trip preserves every field exactly.
void parse_result_json(const std::string& text, AllocationResult& result,
                       CertificationReport& report);

}  // namespace netshield
