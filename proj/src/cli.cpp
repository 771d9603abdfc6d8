#include <mcacube/cli.hpp>

#include <bit>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <mcacube/arrange.hpp>
#include <mcacube/error.hpp>
#include <mcacube/homogeneity.hpp>
#include <mcacube/mca.hpp>

namespace mcacube::cli {

  namespace {

    std::ofstream
    open_output(std::string const& path)
    {
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) {
        throw InputError("cannot write '" + path + "'");
      }
      return out;
    }

    Cube
    load(RunConfig const& config, std::ostream& log)
    {
      auto cube = load_fact_table(config.fact_path, config.schema_path);
      if (cube.degenerate()) {
        log << "warning: fact file has no rows\n";
      }
      return cube;
    }

    std::uint64_t
    splitmix64(std::uint64_t x)
    {
      x += 0x9e3779b97f4a7c15ULL;
      x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
      x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
      return x ^ (x >> 31);
    }

  } // namespace

  std::string
  format_number(double value)
  {
    char buf[64];
    auto const [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
  }

  void
  validate(RunConfig const& config)
  {
    auto require_file = [](std::string const& path, char const* what) {
      if (path.empty()) {
        throw InputError(std::string("missing ") + what + " path");
      }
      if (!std::filesystem::is_regular_file(path)) {
        throw InputError(std::string(what) + " file '" + path + "' does not exist");
      }
    };
    require_file(config.fact_path, "facts");
    require_file(config.schema_path, "schema");
    if (config.arrangement_path) {
      require_file(*config.arrangement_path, "arrangement");
    }
    if (config.out_path.empty()) {
      throw InputError("missing output path");
    }
    if (config.command == Command::sweep) {
      if (config.rates.empty()) {
        throw InputError("sweep needs at least one rate");
      }
      for (auto r : config.rates) {
        if (!(r > 0.0 && r <= 1.0)) {
          throw InputError("rate " + format_number(r) + " outside (0, 1]");
        }
      }
    }
    if (config.command == Command::render && config.slice_dims.size() != 2) {
      throw InputError("render needs exactly two slice dimensions");
    }
  }

  void
  cmd_arrange(RunConfig const& config, std::ostream& log)
  {
    auto const cube = load(config, log);
    auto const arrangement = arrange_cube(cube);
    {
      auto out = open_output(config.out_path);
      write_arrangement_document(arrangement, cube.schema(), out);
    }
    if (config.debug_dump_path) {
      auto const z = build_disjunctive(cube);
      auto const b = burt(z);
      auto const eig = solve_eigen(b, cube.dimension_count());
      auto out = open_output(*config.debug_dump_path);
      write_debug_document(b, eig, out);
    }

    auto const arranged = apply_arrangement(cube, arrangement);
    double const ih_initial = ih(cube);
    double const ih_arranged = ih(arranged);
    log << "facts: " << cube.fact_count() << '\n'
        << "sparsity: " << format_number(sparsity(cube)) << '\n'
        << "ih_initial: " << format_number(ih_initial) << '\n'
        << "ih_arranged: " << format_number(ih_arranged) << '\n';
    log << "gain: " << format_number(gain(ih_initial, ih_arranged)) << '\n';
  }

  void
  cmd_evaluate(RunConfig const& config, std::ostream& log)
  {
    auto const cube = load(config, log);
    HomogeneityReport report;
    if (config.arrangement_path) {
      auto const perms = read_arrangement_permutations(*config.arrangement_path, cube.schema());
      auto const arranged = apply_permutations(cube, perms);
      report = homogeneity_report(arranged);
      double const baseline = ih(cube);
      if (baseline > 0.0) {
        report.gain_vs_baseline = gain(baseline, report.ih);
      }
    } else {
      report = homogeneity_report(cube);
    }
    auto out = open_output(config.out_path);
    write_report_document(report, out);
    log << "ih: " << format_number(report.ih) << '\n';
  }

  std::uint64_t
  row_seed(std::uint64_t seed, double rate)
  {
    return splitmix64(splitmix64(seed) ^ std::bit_cast<std::uint64_t>(rate));
  }

  SweepRow
  sweep_row(Cube const& cube, double rate, std::uint64_t seed)
  {
    auto const sample = sample_facts(cube, rate, row_seed(seed, rate));
    auto const arranged = apply_arrangement(sample, arrange_cube(sample));
    SweepRow row;
    row.rate = rate;
    row.sparsity = sparsity(sample);
    row.ih_initial = ih(sample);
    row.ih_arranged = ih(arranged);
    if (row.ih_initial > 0.0) {
      row.gain = gain(row.ih_initial, row.ih_arranged);
    }
    return row;
  }

  std::vector<SweepRow>
  sweep(Cube const& cube, std::vector<double> const& rates, std::uint64_t seed)
  {
    std::vector<SweepRow> rows;
    rows.reserve(rates.size());
    for (auto rate : rates) {
      rows.push_back(sweep_row(cube, rate, seed));
    }
    return rows;
  }

  void
  write_sweep_table(std::vector<SweepRow> const& rows, std::ostream& out)
  {
    out << "rate,sparsity,ih_initial,ih_arranged,gain\n";
    for (auto const& row : rows) {
      out << format_number(row.rate) << ',' << format_number(row.sparsity) << ','
          << format_number(row.ih_initial) << ',' << format_number(row.ih_arranged) << ',';
      if (row.gain) {
        out << format_number(*row.gain);
      }
      out << '\n';
    }
  }

  void
  cmd_sweep(RunConfig const& config, std::ostream& log)
  {
    auto const cube = load(config, log);
    auto const rows = sweep(cube, config.rates, config.seed);
    auto out = open_output(config.out_path);
    write_sweep_table(rows, out);
    log << "rows: " << rows.size() << '\n';
  }

  SliceGrid
  project(Cube const& cube, std::size_t row_dim, std::size_t col_dim)
  {
    SliceGrid grid;
    grid.rows = cube.shape().at(row_dim);
    grid.cols = cube.shape().at(col_dim);
    grid.dark.assign(grid.rows * grid.cols, 0);
    for (auto index : cube.occupancy()) {
      auto const cell = cube.coords_of(index);
      grid.dark[cell[row_dim] * grid.cols + cell[col_dim]] = 1;
    }
    return grid;
  }

  void
  write_pbm(SliceGrid const& grid, std::ostream& out)
  {
    out << "P1\n" << grid.cols << ' ' << grid.rows << '\n';
    for (std::size_t r = 0; r < grid.rows; ++r) {
      for (std::size_t c = 0; c < grid.cols; ++c) {
        if (c > 0) {
          out << ' ';
        }
        out << (grid.dark[r * grid.cols + c] ? '1' : '0');
      }
      out << '\n';
    }
  }

  void
  write_svg(SliceGrid const& grid, std::ostream& out)
  {
    constexpr int cell = 10;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << grid.cols * cell
        << "\" height=\"" << grid.rows * cell << "\" shape-rendering=\"crispEdges\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t r = 0; r < grid.rows; ++r) {
      for (std::size_t c = 0; c < grid.cols; ++c) {
        if (grid.dark[r * grid.cols + c]) {
          out << "<rect x=\"" << c * cell << "\" y=\"" << r * cell << "\" width=\"" << cell
              << "\" height=\"" << cell << "\" fill=\"black\"/>\n";
        }
      }
    }
    out << "</svg>\n";
  }

  void
  cmd_render(RunConfig const& config, std::ostream& log)
  {
    auto cube = load(config, log);
    std::size_t dims[2];
    for (int k = 0; k < 2; ++k) {
      dims[k] = cube.schema().find_dimension(config.slice_dims.at(static_cast<std::size_t>(k)));
      if (dims[k] == cube.dimension_count()) {
        throw InputError("unknown dimension '" + config.slice_dims[static_cast<std::size_t>(k)] + "'");
      }
    }
    if (config.arrangement_path) {
      cube = apply_permutations(cube, read_arrangement_permutations(*config.arrangement_path,
                                                                    cube.schema()));
    }
    auto const grid = project(cube, dims[0], dims[1]);
    auto out = open_output(config.out_path);
    if (config.format == ImageFormat::svg) {
      write_svg(grid, out);
    } else {
      write_pbm(grid, out);
    }
    log << "dark cells: " << std::count(grid.dark.begin(), grid.dark.end(), 1) << '\n';
  }

  int
  run(RunConfig const& config, std::ostream& log, std::ostream& err)
  {
    try {
      validate(config);
      switch (config.command) {
      case Command::arrange:
        cmd_arrange(config, log);
        break;
      case Command::evaluate:
        cmd_evaluate(config, log);
        break;
      case Command::sweep:
        cmd_sweep(config, log);
        break;
      case Command::render:
        cmd_render(config, log);
        break;
      }
    } catch (InputError const& e) {
      err << "error: " << e.what() << '\n';
      return input_error;
    } catch (NumericalError const& e) {
      err << "error: " << e.what() << '\n';
      return numerical_failure;
    }
    return success;
  }

} // namespace mcacube::cli
