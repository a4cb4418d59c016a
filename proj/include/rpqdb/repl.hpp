#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "rpqdb/engine.hpp"
#include "rpqdb/graph.hpp"
#include "rpqdb/planner.hpp"

namespace rpqdb {

/// Interactive session settings. All numeric fields stay positive; the
/// semantic applies to queries without an explicit restrictor.
struct SessionConfig {
  size_t result_limit = 100;
  size_t max_recursion_depth = 10;
  size_t max_path_length = 20;
  PathSemantic semantic = PathSemantic::Walk;
  bool optimize = true;
  bool timing = false;

  EvalCaps caps() const {
    return {result_limit, max_recursion_depth, max_path_length};
  }
  RunConfig run_config() const {
    return {semantic, caps(), optimize, std::nullopt};
  }
};

/// "p3 e3(Knows) p2 e4(Knows) p4" — ids alternate, each edge id followed by
/// its label in parentheses.
inline std::string format_path(const Path& p, const Graph& g) {
  std::string out = g.node(p.nodes[0]).id;
  for (size_t i = 0; i < p.edges.size(); ++i) {
    const Edge& e = g.edge(p.edges[i]);
    out += ' ';
    out += e.id;
    out += '(';
    out += e.label;
    out += ')';
    out += ' ';
    out += g.node(p.nodes[i + 1]).id;
  }
  return out;
}

inline std::string format_cell(const Cell& c, const Graph& g) {
  if (c.is_null()) return "null";
  if (c.is_bool()) return c.boolean() ? "true" : "false";
  if (c.is_path()) return format_path(c.path(), g);
  return c.value().to_string();
}

/// Result of resolving the startup file arguments.
struct LoadOutcome {
  Graph graph;
  bool used_default = false;
  std::string warning;  // empty when files loaded as requested
};

/// Loads the node/edge files; any problem (unreadable file, malformed or
/// swapped headers, bad references) falls back to the default graph with a
/// warning, mirroring the permissive CLI behavior.
inline LoadOutcome load_graph_or_default(
    const std::optional<std::string>& nodes_path,
    const std::optional<std::string>& edges_path) {
  if (!nodes_path && !edges_path) return {default_graph(), true, ""};
  if (!nodes_path || !edges_path)
    return {default_graph(), true,
            "both -n and -e are required; loading the default graph"};
  auto fail = [](const std::string& why) {
    return LoadOutcome{default_graph(), true,
                       why + "; loading the default graph"};
  };
  std::ifstream nf(*nodes_path);
  if (!nf) return fail("cannot read '" + *nodes_path + "'");
  std::ifstream ef(*edges_path);
  if (!ef) return fail("cannot read '" + *edges_path + "'");
  try {
    std::vector<NodeRecord> nodes;
    try {
      nodes = parse_node_file(nf);
    } catch (const LoadError& e) {
      return fail(*nodes_path + ": " + e.what());
    }
    std::vector<EdgeRecord> edges;
    try {
      edges = parse_edge_file(ef);
    } catch (const LoadError& e) {
      return fail(*edges_path + ": " + e.what());
    }
    return {build_graph(std::move(nodes), std::move(edges)), false, ""};
  } catch (const GraphError& e) {
    return fail(e.what());
  }
}

/// Line-oriented interactive loop over a loaded graph. '/'-prefixed lines
/// are commands; anything else runs as a path query.
class Repl {
 public:
  Repl(const Graph& g, SessionConfig cfg = {}) : g_(g), cfg_(cfg) {}

  const SessionConfig& config() const { return cfg_; }

  /// Returns the process exit status (0 on /quit or end of input).
  int run(std::istream& in, std::ostream& out) {
    std::string line;
    while (true) {
      out << "> " << std::flush;
      if (!std::getline(in, line)) return 0;
      std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      if (trimmed[0] == '/') {
        if (!command(trimmed, out)) return 0;
      } else {
        query(trimmed, out);
      }
    }
  }

 private:
  static std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static void help(std::ostream& out) {
    out << "Commands:\n"
           "  /h                                    show this help\n"
           "  /limit N                              set the result limit\n"
           "  /depth N                              set the maximum recursion depth\n"
           "  /maxlen N                             set the maximum path length\n"
           "  /semantics walk|trail|acyclic|simple  set the default path semantic\n"
           "  /opt on|off                           toggle plan optimization\n"
           "  /plan QUERY                           show the basic and optimized plans\n"
           "  /time on|off                          toggle timing output\n"
           "  /quit                                 exit\n"
           "Any other input is evaluated as a path query.\n";
  }

  // Returns false when the session should end.
  bool command(const std::string& line, std::ostream& out) {
    std::istringstream ss(line);
    std::string cmd;
    ss >> cmd;
    std::string rest;
    std::getline(ss, rest);
    rest = trim(rest);

    if (cmd == "/quit") return false;
    if (cmd == "/h") {
      help(out);
    } else if (cmd == "/limit" || cmd == "/depth" || cmd == "/maxlen") {
      size_t n = 0;
      if (sscanf(rest.c_str(), "%zu", &n) != 1 || n == 0) {
        out << "error: " << cmd << " expects a positive integer\n";
        return true;
      }
      if (cmd == "/limit") cfg_.result_limit = n;
      if (cmd == "/depth") cfg_.max_recursion_depth = n;
      if (cmd == "/maxlen") cfg_.max_path_length = n;
    } else if (cmd == "/semantics") {
      if (detail::ieq(rest, "walk")) cfg_.semantic = PathSemantic::Walk;
      else if (detail::ieq(rest, "trail")) cfg_.semantic = PathSemantic::Trail;
      else if (detail::ieq(rest, "acyclic")) cfg_.semantic = PathSemantic::Acyclic;
      else if (detail::ieq(rest, "simple")) cfg_.semantic = PathSemantic::Simple;
      else out << "error: /semantics expects walk, trail, acyclic or simple\n";
    } else if (cmd == "/opt" || cmd == "/time") {
      bool on = detail::ieq(rest, "on");
      if (!on && !detail::ieq(rest, "off")) {
        out << "error: " << cmd << " expects on or off\n";
        return true;
      }
      if (cmd == "/opt") cfg_.optimize = on;
      if (cmd == "/time") cfg_.timing = on;
    } else if (cmd == "/plan") {
      plan(rest, out);
    } else {
      out << "unknown command '" << cmd << "'; type /h for help\n";
    }
    return true;
  }

  void plan(const std::string& text, std::ostream& out) {
    if (text.empty()) {
      out << "error: /plan expects a query\n";
      return;
    }
    try {
      ParsedQuery q = parse_query(text);
      PlanPtr basic = translate(q, cfg_.semantic);
      out << "Basic plan:\n" << explain(*basic);
      PlanPtr optimized = optimize(basic->clone());
      out << "Optimized plan:\n" << explain(*optimized);
    } catch (const QueryError& e) {
      out << "error: " << e.what() << "\n";
    }
  }

  void query(const std::string& text, std::ostream& out) {
    try {
      ParsedQuery q = parse_query(text);
      PlanPtr plan = translate(q, cfg_.semantic);
      if (cfg_.optimize) plan = optimize(std::move(plan));
      PhysicalPlan pp = compile(*plan, g_, cfg_.caps());
      ResultSet rs = execute(pp);

      bool with_paths = false;
      for (const ProjectionTerm& t : q.terms)
        if (t.kind == ProjectionTerm::Kind::PathVar) with_paths = true;
      size_t k = 0;
      for (const Row& row : rs.rows) {
        ++k;
        if (with_paths) out << "Path #" << k << " - ";
        for (size_t i = 0; i < row.size(); ++i) {
          if (i) out << '\t';
          out << format_cell(row[i], g_);
        }
        out << '\n';
      }
      if (cfg_.timing) {
        char buf[64];
        snprintf(buf, sizeof buf, "%zu results in %.3f s", rs.rows.size(),
                 rs.elapsed_seconds);
        out << buf << '\n';
      }
    } catch (const std::exception& e) {
      out << "error: " << e.what() << "\n";
    }
  }

  const Graph& g_;
  SessionConfig cfg_;
};

/// Entry point shared by the binary and the CLI tests.
inline int run_cli(const std::optional<std::string>& nodes_path,
                   const std::optional<std::string>& edges_path,
                   std::istream& in, std::ostream& out) {
  LoadOutcome lo = load_graph_or_default(nodes_path, edges_path);
  if (!lo.warning.empty()) out << "warning: " << lo.warning << "\n";
  if (lo.used_default)
    out << "Loaded default graph (" << lo.graph.node_count() << " nodes, "
        << lo.graph.edge_count() << " edges).\n";
  else
    out << "Loaded graph (" << lo.graph.node_count() << " nodes, "
        << lo.graph.edge_count() << " edges).\n";
  out << "Type /h for help.\n";
  Repl repl(lo.graph);
  return repl.run(in, out);
}

}  // namespace rpqdb
