#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "commands.hpp"

namespace tcone::cli {

struct Context {
  std::string command;
  Json cfg;
  std::filesystem::path out;
  std::ostream& log;

  /// Table carrying the command and the compact config echo as metadata.
  CsvTable table(std::vector<std::string> columns) const;
  void save(const std::string& name, const CsvTable& t) const;
  void plot(const std::string& name, const PlotSpec& spec) const;

  double num(const std::string& key) const;
  int integer(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::vector<double> axis(const std::string& name) const;
};

/// Values joined by ';' for single CSV cells.
std::string join(const std::vector<double>& v);

Json lemma_verify_defaults();
Json lemma_search_defaults();
Json example1_defaults();
Json example2_defaults();
Json cobordism_defaults();
Json gh_defaults();
Json crosscheck_defaults();

int run_lemma_verify(const Context& ctx);
int run_lemma_search(const Context& ctx);
int run_example1(const Context& ctx);
int run_example2(const Context& ctx);
int run_cobordism(const Context& ctx);
int run_gh(const Context& ctx);
int run_crosscheck(const Context& ctx);

}  // namespace tcone::cli
