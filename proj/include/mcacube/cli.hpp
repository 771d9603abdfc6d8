#pragma once

//
// Command implementations behind the mcacube executable. Each command reads
// its inputs from RunConfig, writes its document to config.out_path and a
// short human-readable summary to `log`.
//

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <mcacube/cube.hpp>

namespace mcacube::cli {

  enum class Command { arrange, evaluate, sweep, render };
  enum class ImageFormat { ppm, svg };

  struct RunConfig {
    Command command = Command::arrange;
    std::string fact_path;
    std::string schema_path;
    std::optional<std::string> arrangement_path;
    std::string out_path;
    std::uint64_t seed = 0;
    std::vector<double> rates;
    std::vector<std::string> slice_dims;
    ImageFormat format = ImageFormat::ppm;
    // arrange only: JSON dump of the MCA system
    std::optional<std::string> debug_dump_path;
  };

  enum ExitCode : int { success = 0, input_error = 2, numerical_failure = 3 };

  void validate(RunConfig const& config);

  void cmd_arrange(RunConfig const& config, std::ostream& log);
  void cmd_evaluate(RunConfig const& config, std::ostream& log);
  void cmd_sweep(RunConfig const& config, std::ostream& log);
  void cmd_render(RunConfig const& config, std::ostream& log);

  // dispatches on config.command and maps exceptions to exit codes
  int run(RunConfig const& config, std::ostream& log, std::ostream& err);

  struct SweepRow {
    double rate = 0.0;
    double sparsity = 0.0;
    double ih_initial = 0.0;
    double ih_arranged = 0.0;
    std::optional<double> gain;
  };

  // Seed for one sweep row, derived from (seed, rate) only.
  std::uint64_t row_seed(std::uint64_t seed, double rate);

  SweepRow sweep_row(Cube const& cube, double rate, std::uint64_t seed);
  std::vector<SweepRow> sweep(Cube const& cube, std::vector<double> const& rates,
                              std::uint64_t seed);
  void write_sweep_table(std::vector<SweepRow> const& rows, std::ostream& out);

  // Binary occupancy of the projection onto dimensions (row_dim, col_dim),
  // row-major rows x cols.
  struct SliceGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> dark;
  };

  SliceGrid project(Cube const& cube, std::size_t row_dim, std::size_t col_dim);
  void write_pbm(SliceGrid const& grid, std::ostream& out);
  void write_svg(SliceGrid const& grid, std::ostream& out);

  // shortest round-trip decimal form
  std::string format_number(double value);

} // namespace mcacube::cli
