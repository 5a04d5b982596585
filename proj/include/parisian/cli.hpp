#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "parisian/levy_model.hpp"

namespace parisian::cli {

enum class ExitCode : int {
  ok = 0,
  usage = 2,
  parse = 3,
  validation = 4,
  domain = 5,
  numeric = 6,
  io = 7,
};

enum class Format { csv, jsonl };

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 1;

  std::vector<double> points() const;
};

/// Parses "lo:hi:n"; throws std::invalid_argument.
Grid parse_grid(const std::string& text);

struct RunSpec {
  std::string command;
  std::string model_path;
  std::optional<double> q, p, b, x, a, r;
  std::optional<Grid> x_grid;
  std::string sweep = "p";
  std::optional<Grid> sweep_grid;
  bool sweep_log = false;
  std::optional<std::size_t> n_paths;
  double dt = 1e-3;
  std::optional<double> horizon;
  std::uint64_t seed = 20240611;
  std::string clock = "marks";
  Format format = Format::csv;
  std::string out_path;
};

/// Model document: a JSON object with keys drift, sigma, lambda,
/// jump_weights, jump_rates and optional defaults q, p.
struct ModelDocument {
  LevyModel model;
  std::optional<double> q, p;
};

ModelDocument parse_model_document(const std::string& text);
ModelDocument load_model_document(const std::string& path);

using Cell = std::variant<double, std::int64_t, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Floats are printed with 17 significant digits.
void write_table(const Table& table, Format format, std::ostream& os);

/// Dispatches one command. Errors are caught, written to `err` as a single
/// JSON object and mapped to a nonzero exit code.
int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// Full command-line entry point (argument parsing included).
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace parisian::cli
