#pragma once

//
// Data cube over qualitative dimensions: schema, fact multiset, occupancy.
//
// Modality indices are 0-based everywhere in the library. A cell is
// addressed either by its coordinate tuple or by its row-major linear index
// (first dimension slowest).
//

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <mcacube/arrangement.hpp>

namespace mcacube {

  using Shape = std::vector<std::size_t>;
  using CellCoords = std::vector<std::uint32_t>;

  struct DimensionSpec {
    std::string name;
    std::vector<std::string> modalities;

    std::size_t size() const { return modalities.size(); }
  };

  struct CubeSchema {
    std::vector<DimensionSpec> dimensions;
    std::vector<std::string> measures;

    std::size_t dimension_count() const { return dimensions.size(); }
    Shape shape() const;
    // index of the dimension called `name`, or dimension_count()
    std::size_t find_dimension(std::string const& name) const;
  };

  void validate(CubeSchema const& schema);

  struct Fact {
    CellCoords coords;
    std::vector<double> measures;

    bool operator==(Fact const&) const = default;
  };

  class Cube {
  public:
    Cube() = default;
    // Validates schema and facts; computes occupancy and per-cell sums.
    Cube(CubeSchema schema, std::vector<Fact> facts);

    CubeSchema const& schema() const { return schema_; }
    std::vector<Fact> const& facts() const { return facts_; }
    std::size_t dimension_count() const { return schema_.dimension_count(); }
    std::size_t fact_count() const { return facts_.size(); }
    Shape const& shape() const { return shape_; }
    std::uint64_t cell_count() const { return cell_count_; }

    // sorted, distinct linear indices of the full cells
    std::vector<std::uint64_t> const& occupancy() const { return occupancy_; }
    bool is_full(CellCoords const& cell) const;

    // per-cell measure sums, keyed by linear index; empty without measures
    std::map<std::uint64_t, std::vector<double>> const& cell_aggregates() const
    {
      return aggregates_;
    }

    // n = 0 cubes are legal but cannot be analysed
    bool degenerate() const { return facts_.empty(); }

    std::uint64_t linear_index(std::span<std::uint32_t const> cell) const;
    CellCoords coords_of(std::uint64_t linear) const;

    bool operator==(Cube const& other) const;

  private:
    CubeSchema schema_;
    std::vector<Fact> facts_;
    Shape shape_;
    std::uint64_t cell_count_ = 0;
    std::vector<std::uint64_t> occupancy_;
    std::map<std::uint64_t, std::vector<double>> aggregates_;
  };

  std::uint64_t cell_count(Shape const& shape);
  std::uint64_t linear_index(Shape const& shape, std::span<std::uint32_t const> cell);
  CellCoords coords_of(Shape const& shape, std::uint64_t linear);

  // (cells - full cells) / cells
  double sparsity(Cube const& cube);

  // Uniform subset of ceil(rate * n) facts, drawn without replacement and
  // kept in their original relative order.
  Cube sample_facts(Cube const& cube, double rate, std::uint64_t seed);

  Cube apply_permutations(Cube const& cube, std::vector<Permutation> const& perms);
  Cube apply_arrangement(Cube const& cube, Arrangement const& arrangement);

  //
  // Fact-table ingestion.
  //
  // The schema document is JSON:
  //   { "dimensions": [ {"name": "P", "modalities": ["X", "Y"]}, {"name": "Q"} ],
  //     "measures": ["M1"] }
  // A dimension given without "modalities" (or as a bare string) gets its
  // catalog from first appearance in the fact file.
  //
  struct SchemaDocument {
    struct Dimension {
      std::string name;
      std::optional<std::vector<std::string>> modalities;
    };
    std::vector<Dimension> dimensions;
    std::vector<std::string> measures;
  };

  SchemaDocument parse_schema_document(std::istream& in);
  SchemaDocument read_schema_document(std::string const& path);
  // explicit catalogs for every dimension
  void write_schema_document(CubeSchema const& schema, std::ostream& out);

  Cube load_fact_table(std::istream& facts, SchemaDocument const& schema);
  Cube load_fact_table(std::string const& fact_path, std::string const& schema_path);

  // header row of dimension then measure columns, one row per fact
  void write_fact_table(Cube const& cube, std::ostream& out);

} // namespace mcacube
