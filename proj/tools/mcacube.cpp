//
// mcacube: reorder the modalities of a sparse data cube with multiple
// correspondence analysis and score the result with the homogeneity index.
//
//   mcacube arrange  --facts F --schema S --out arrangement.json
//   mcacube evaluate --facts F --schema S --out report.json [--arrangement A]
//   mcacube sweep    --facts F --schema S --out sweep.csv --rates 1,0.5 --seed 7
//   mcacube render   --facts F --schema S --out slice.pbm --dims A,B [--format svg]
//

#include <iostream>

#include <CLI11.hpp>

#include <mcacube/cli.hpp>

int
main(int argc, char** argv)
{
  using namespace mcacube::cli;

  CLI::App app{"Arrange sparse data cubes by multiple correspondence analysis"};
  app.require_subcommand(1);

  RunConfig config;
  std::string arrangement;
  std::string debug_dump;
  std::string format = "ppm";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--facts", config.fact_path, "fact table (CSV with header)")->required();
    sub->add_option("--schema", config.schema_path, "schema document (JSON)")->required();
    sub->add_option("--out", config.out_path, "output file")->required();
    sub->add_option("--seed", config.seed, "random seed");
  };

  auto* arrange = app.add_subcommand("arrange", "compute and write the MCA arrangement");
  add_common(arrange);
  arrange->add_option("--dump-mca", debug_dump, "write B, X, eigenvalues and coordinates");

  auto* evaluate = app.add_subcommand("evaluate", "write the homogeneity report");
  add_common(evaluate);
  evaluate->add_option("--arrangement", arrangement, "arrangement document to apply first");

  auto* sweep = app.add_subcommand("sweep", "homogeneity versus sparsity by fact sampling");
  add_common(sweep);
  sweep->add_option("--rates", config.rates, "sampling rates in (0, 1]")
    ->delimiter(',')
    ->required();

  auto* render = app.add_subcommand("render", "occupancy heatmap of a two-dimension projection");
  add_common(render);
  render->add_option("--arrangement", arrangement, "arrangement document to apply first");
  render->add_option("--dims", config.slice_dims, "row and column dimensions")
    ->delimiter(',')
    ->required();
  render->add_option("--format", format, "ppm or svg")
    ->check(CLI::IsMember({"ppm", "svg"}));

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    auto const code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(input_error);
  }

  if (arrange->parsed()) {
    config.command = Command::arrange;
  } else if (evaluate->parsed()) {
    config.command = Command::evaluate;
  } else if (sweep->parsed()) {
    config.command = Command::sweep;
  } else {
    config.command = Command::render;
  }
  if (!arrangement.empty()) {
    config.arrangement_path = arrangement;
  }
  if (!debug_dump.empty()) {
    config.debug_dump_path = debug_dump;
  }
  config.format = format == "svg" ? ImageFormat::svg : ImageFormat::ppm;

  return run(config, std::cout, std::cerr);
}
