#include "netshield/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "json.hpp"
#include "netshield/costs.hpp"
#include "netshield/spectral.hpp"

namespace netshield {

namespace {

[[noreturn]] void parse_fail(const std::string& origin, int line, const std::string& message) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + message);
}

std::string_view trim(std::string_view s) {
    const char* ws = " \t";
    const std::size_t first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const std::size_t last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

bool parse_int_field(std::string_view field, int& out) {
    field = trim(field);
    if (field.empty()) return false;
    const char* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_real_field(std::string_view field, double& out) {
    field = trim(field);
    if (field.empty()) return false;
    const char* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 64> buffer;
    const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), ptr);
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= static_cast<std::uint64_t>(c);
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

Digraph parse_edge_list(const std::string& text, const std::string& origin) {
    std::vector<Edge> edges;
    std::vector<int> edge_lines;
    std::set<std::pair<int, int>> seen;
    int hinted_nodes = -1;
    int max_endpoint = -1;
    int line_no = 0;

    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string_view line = raw;

        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) {
            const std::string_view comment = trim(line.substr(hash + 1));
            if (comment.substr(0, 6) == "nodes:") {
                if (hinted_nodes >= 0) parse_fail(origin, line_no, "duplicate node-count hint");
                int value = 0;
                if (!parse_int_field(comment.substr(6), value) || value <= 0) {
                    parse_fail(origin, line_no,
                               "malformed node-count hint '" + std::string(comment) + "'");
                }
                hinted_nodes = value;
            }
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t c1 = line.find(',');
        const std::size_t c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
        const std::size_t c3 = c2 == std::string_view::npos ? c2 : line.find(',', c2 + 1);
        if (c2 == std::string_view::npos || c3 != std::string_view::npos) {
            parse_fail(origin, line_no, "expected 'src,dst,weight', got '" + std::string(line) + "'");
        }

        Edge e;
        if (!parse_int_field(line.substr(0, c1), e.src) || e.src < 0) {
            parse_fail(origin, line_no,
                       "malformed source index '" + std::string(trim(line.substr(0, c1))) + "'");
        }
        if (!parse_int_field(line.substr(c1 + 1, c2 - c1 - 1), e.dst) || e.dst < 0) {
            parse_fail(origin, line_no,
                       "malformed destination index '" +
                           std::string(trim(line.substr(c1 + 1, c2 - c1 - 1))) + "'");
        }
        if (!parse_real_field(line.substr(c2 + 1), e.weight)) {
            parse_fail(origin, line_no,
                       "malformed weight '" + std::string(trim(line.substr(c2 + 1))) + "'");
        }
        if (!std::isfinite(e.weight) || e.weight <= 0.0) {
            parse_fail(origin, line_no, "weight must be a positive finite real");
        }
        if (!seen.insert({e.src, e.dst}).second) {
            parse_fail(origin, line_no,
                       "duplicate edge " + std::to_string(e.src) + "->" + std::to_string(e.dst));
        }
        max_endpoint = std::max(max_endpoint, std::max(e.src, e.dst));
        edges.push_back(e);
        edge_lines.push_back(line_no);
    }

    int node_count = 0;
    if (hinted_nodes >= 0) {
        node_count = hinted_nodes;
        if (max_endpoint >= hinted_nodes) {
            for (std::size_t k = 0; k < edges.size(); ++k) {
                if (edges[k].src >= hinted_nodes || edges[k].dst >= hinted_nodes) {
                    parse_fail(origin, edge_lines[k],
                               "edge endpoint outside the declared node count " +
                                   std::to_string(hinted_nodes));
                }
            }
        }
    } else if (max_endpoint >= 0) {
        node_count = max_endpoint + 1;
    } else {
        parse_fail(origin, 1, "no edges and no '# nodes: N' hint");
    }
    return Digraph(node_count, edges);
}

Digraph read_edge_list(const std::string& path) {
    return parse_edge_list(read_text(path), path);
}

std::string format_edge_list(const Digraph& g) {
    std::string out = "# nodes: " + std::to_string(g.node_count()) + "\n";
    for (const Edge& e : g.edges()) {
        out += std::to_string(e.src) + "," + std::to_string(e.dst) + "," +
               format_double(e.weight) + "\n";
    }
    return out;
}

void write_edge_list(const std::string& path, const Digraph& g) {
    write_text(path, format_edge_list(g));
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string format_trajectory_csv(const Trajectory& trajectory) {
    const std::size_t n = trajectory.values.empty() ? 0 : trajectory.values.front().size();
    std::string out = "t";
    for (std::size_t i = 0; i < n; ++i) out += ",node_" + std::to_string(i);
    out += "\n";
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
        out += format_double(trajectory.times[k]);
        for (double v : trajectory.values[k]) out += "," + format_double(v);
        out += "\n";
    }
    return out;
}

std::string format_event_csv(const Trajectory& trajectory) {
    std::string out = "t,node,new_state\n";
    for (const StochasticEvent& e : trajectory.events) {
        out += format_double(e.time) + "," + std::to_string(e.node) + "," +
               std::to_string(e.new_state) + "\n";
    }
    return out;
}

std::string format_comparison_csv(const EfficiencyReport& report) {
    const std::size_t n = report.optimum.prevention_spend.size();
    std::string out = "strategy";
    for (std::size_t i = 0; i < n; ++i) out += ",spend_node_" + std::to_string(i);
    out += ",epsilon,efficiency\n";
    for (const StrategyOutcome& s : report.strategies) {
        out += s.name;
        for (double v : s.spends) out += "," + format_double(v);
        out += "," + format_double(s.epsilon) + "," + format_double(s.efficiency) + "\n";
    }
    out += "optimum";
    for (double v : report.optimum.prevention_spend) out += "," + format_double(v);
    out += "," + format_double(report.optimum_epsilon) + "," + format_double(1.0) + "\n";
    return out;
}

std::string format_centrality_csv(const Digraph& g, double alpha) {
    static constexpr std::array<Centrality, 6> measures = {
        Centrality::OutDegree,         Centrality::InDegree,
        Centrality::TotalDegree,       Centrality::PageRankForward,
        Centrality::PageRankReverse,   Centrality::PageRankSymmetrized,
    };
    std::string out = "node";
    std::array<std::vector<double>, measures.size()> scores;
    for (std::size_t m = 0; m < measures.size(); ++m) {
        out += std::string(",") + centrality_name(measures[m]);
        scores[m] = centrality_scores(g, measures[m], alpha);
    }
    out += "\n";
    for (int i = 0; i < g.node_count(); ++i) {
        out += std::to_string(i);
        for (const std::vector<double>& column : scores) {
            out += "," + format_double(column[static_cast<std::size_t>(i)]);
        }
        out += "\n";
    }
    return out;
}

std::string format_scatter_csv(const AllocationProblem& problem,
                               const AllocationResult& result) {
    const Digraph& g = problem.graph;
    const std::size_t n = static_cast<std::size_t>(g.node_count());

    std::vector<double> prevention(n, 0.0);
    if (problem.parameterization == Parameterization::EdgeLevel) {
        for (int e = 0; e < g.edge_count(); ++e) {
            prevention[static_cast<std::size_t>(g.edge(e).dst)] +=
                result.prevention_spend[static_cast<std::size_t>(e)];
        }
    } else {
        prevention = result.prevention_spend;
    }

    const WeightedDegrees degrees = g.weighted_degrees();
    const std::vector<double> ranks = pagerank(g, 0.85, PageRankMode::Reverse);

    std::string out = "node,correction_spend,prevention_spend,in_degree,pagerank\n";
    for (std::size_t i = 0; i < n; ++i) {
        out += std::to_string(i) + "," + format_double(result.correction_spend[i]) + "," +
               format_double(prevention[i]) + "," + format_double(degrees.in[i]) + "," +
               format_double(ranks[i]) + "\n";
    }
    return out;
}

std::string format_result_json(const AllocationResult& result,
                               const CertificationReport& report) {
    nlohmann::json j;
    j["version"] = kFormatVersion;
    j["result"] = {
        {"beta_star", result.beta_star},
        {"delta_star", result.delta_star},
        {"lambda_hat_star", result.lambda_hat_star},
        {"epsilon_star", result.epsilon_star},
        {"perron_u", result.perron_u},
        {"prevention_spend", result.prevention_spend},
        {"correction_spend", result.correction_spend},
        {"total_spend", result.total_spend},
        {"stats",
         {{"barrier_rounds", result.stats.barrier_rounds},
          {"newton_steps", result.stats.newton_steps},
          {"gap_estimate", result.stats.gap_estimate},
          {"max_constraint_value", result.stats.max_constraint_value},
          {"closed_form", result.stats.closed_form}}},
    };
    j["certification"] = {
        {"recomputed_lambda1", report.recomputed_lambda1},
        {"eigenvalue_gap", report.eigenvalue_gap},
        {"min_certificate_slack", report.min_certificate_slack},
        {"budget_residual", report.budget_residual},
        {"budget_binding", report.budget_binding},
        {"saturated", report.saturated},
        {"max_bound_violation", report.max_bound_violation},
        {"certified", report.certified},
        {"detail", report.detail},
    };
    return j.dump(2) + "\n";
}

void parse_result_json(const std::string& text, AllocationResult& result,
                       CertificationReport& report) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        const nlohmann::json& r = j.at("result");
        result.beta_star = r.at("beta_star").get<std::vector<double>>();
        result.delta_star = r.at("delta_star").get<std::vector<double>>();
        result.lambda_hat_star = r.at("lambda_hat_star").get<double>();
        result.epsilon_star = r.at("epsilon_star").get<double>();
        result.perron_u = r.at("perron_u").get<std::vector<double>>();
        result.prevention_spend = r.at("prevention_spend").get<std::vector<double>>();
        result.correction_spend = r.at("correction_spend").get<std::vector<double>>();
        result.total_spend = r.at("total_spend").get<double>();
        const nlohmann::json& s = r.at("stats");
        result.stats.barrier_rounds = s.at("barrier_rounds").get<int>();
        result.stats.newton_steps = s.at("newton_steps").get<int>();
        result.stats.gap_estimate = s.at("gap_estimate").get<double>();
        result.stats.max_constraint_value = s.at("max_constraint_value").get<double>();
        result.stats.closed_form = s.at("closed_form").get<bool>();
        const nlohmann::json& c = j.at("certification");
        report.recomputed_lambda1 = c.at("recomputed_lambda1").get<double>();
        report.eigenvalue_gap = c.at("eigenvalue_gap").get<double>();
        report.min_certificate_slack = c.at("min_certificate_slack").get<double>();
        report.budget_residual = c.at("budget_residual").get<double>();
        report.budget_binding = c.at("budget_binding").get<bool>();
        report.saturated = c.at("saturated").get<bool>();
        report.max_bound_violation = c.at("max_bound_violation").get<double>();
        report.certified = c.at("certified").get<bool>();
        report.detail = c.at("detail").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed result JSON: ") + e.what());
    }
}

}  // namespace netshield
