#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rpqdb/repl.hpp"

int main(int argc, char** argv) {
  CLI::App app{"rpqdb: in-memory regular path query engine"};
  std::string nodes_path, edges_path;
  CLI::Option* n = app.add_option("-n,--nodes", nodes_path,
                                  "node file (@id|@label|props...)");
  CLI::Option* e = app.add_option("-e,--edges", edges_path,
                                  "edge file (@id|@label|@source|@target|@dir)");
  CLI11_PARSE(app, argc, argv);

  std::optional<std::string> np, ep;
  if (n->count()) np = nodes_path;
  if (e->count()) ep = edges_path;
  return rpqdb::run_cli(np, ep, std::cin, std::cout);
}
