#include <mcacube/cube.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include <mcacube/error.hpp>

namespace mcacube {

  Shape
  CubeSchema::shape() const
  {
    Shape shape;
    shape.reserve(dimensions.size());
    for (auto const& dim : dimensions) {
      shape.push_back(dim.size());
    }
    return shape;
  }

  std::size_t
  CubeSchema::find_dimension(std::string const& name) const
  {
    for (std::size_t t = 0; t < dimensions.size(); ++t) {
      if (dimensions[t].name == name) {
        return t;
      }
    }
    return dimensions.size();
  }

  void
  validate(CubeSchema const& schema)
  {
    if (schema.dimensions.empty()) {
      throw InputError("schema has no dimensions");
    }
    std::set<std::string> names;
    for (auto const& dim : schema.dimensions) {
      if (!names.insert(dim.name).second) {
        throw InputError("duplicate column name '" + dim.name + "'");
      }
      if (dim.modalities.empty()) {
        throw InputError("dimension '" + dim.name + "' has no modalities");
      }
      std::set<std::string> labels(dim.modalities.begin(), dim.modalities.end());
      if (labels.size() != dim.modalities.size()) {
        throw InputError("dimension '" + dim.name + "' has duplicate modality labels");
      }
    }
    for (auto const& m : schema.measures) {
      if (!names.insert(m).second) {
        throw InputError("duplicate column name '" + m + "'");
      }
    }
  }

  std::uint64_t
  cell_count(Shape const& shape)
  {
    std::uint64_t count = 1;
    for (auto p : shape) {
      if (p != 0 && count > std::numeric_limits<std::uint64_t>::max() / p) {
        throw InputError("cube has too many cells to index");
      }
      count *= p;
    }
    return count;
  }

  std::uint64_t
  linear_index(Shape const& shape, std::span<std::uint32_t const> cell)
  {
    std::uint64_t index = 0;
    for (std::size_t t = 0; t < shape.size(); ++t) {
      index = index * shape[t] + cell[t];
    }
    return index;
  }

  CellCoords
  coords_of(Shape const& shape, std::uint64_t linear)
  {
    CellCoords cell(shape.size());
    for (std::size_t t = shape.size(); t-- > 0;) {
      cell[t] = static_cast<std::uint32_t>(linear % shape[t]);
      linear /= shape[t];
    }
    return cell;
  }

  Cube::Cube(CubeSchema schema, std::vector<Fact> facts)
    : schema_(std::move(schema)), facts_(std::move(facts))
  {
    validate(schema_);
    shape_ = schema_.shape();
    cell_count_ = mcacube::cell_count(shape_);

    auto const d = shape_.size();
    auto const m = schema_.measures.size();
    occupancy_.reserve(facts_.size());
    for (std::size_t i = 0; i < facts_.size(); ++i) {
      auto const& fact = facts_[i];
      if (fact.coords.size() != d) {
        throw InputError("fact " + std::to_string(i) + " has " +
                         std::to_string(fact.coords.size()) + " coordinates, expected " +
                         std::to_string(d));
      }
      for (std::size_t t = 0; t < d; ++t) {
        if (fact.coords[t] >= shape_[t]) {
          throw InputError("fact " + std::to_string(i) + " references modality " +
                           std::to_string(fact.coords[t]) + " outside dimension '" +
                           schema_.dimensions[t].name + "'");
        }
      }
      if (!fact.measures.empty() && fact.measures.size() != m) {
        throw InputError("fact " + std::to_string(i) + " has the wrong number of measures");
      }
      auto const cell = mcacube::linear_index(shape_, fact.coords);
      occupancy_.push_back(cell);
      if (m > 0 && !fact.measures.empty()) {
        auto& sums = aggregates_[cell];
        sums.resize(m, 0.0);
        for (std::size_t k = 0; k < m; ++k) {
          sums[k] += fact.measures[k];
        }
      }
    }
    std::sort(occupancy_.begin(), occupancy_.end());
    occupancy_.erase(std::unique(occupancy_.begin(), occupancy_.end()), occupancy_.end());
  }

  bool
  Cube::is_full(CellCoords const& cell) const
  {
    return std::binary_search(occupancy_.begin(), occupancy_.end(), linear_index(cell));
  }

  std::uint64_t
  Cube::linear_index(std::span<std::uint32_t const> cell) const
  {
    return mcacube::linear_index(shape_, cell);
  }

  CellCoords
  Cube::coords_of(std::uint64_t linear) const
  {
    return mcacube::coords_of(shape_, linear);
  }

  bool
  Cube::operator==(Cube const& other) const
  {
    if (schema_.measures != other.schema_.measures ||
        schema_.dimensions.size() != other.schema_.dimensions.size()) {
      return false;
    }
    for (std::size_t t = 0; t < schema_.dimensions.size(); ++t) {
      if (schema_.dimensions[t].name != other.schema_.dimensions[t].name ||
          schema_.dimensions[t].modalities != other.schema_.dimensions[t].modalities) {
        return false;
      }
    }
    return facts_ == other.facts_;
  }

  double
  sparsity(Cube const& cube)
  {
    auto const cells = static_cast<double>(cube.cell_count());
    auto const full = static_cast<double>(cube.occupancy().size());
    return (cells - full) / cells;
  }

  Cube
  sample_facts(Cube const& cube, double rate, std::uint64_t seed)
  {
    if (!(rate > 0.0 && rate <= 1.0)) {
      throw InputError("sampling rate must lie in (0, 1]");
    }
    auto const n = cube.fact_count();
    // the relative shave keeps e.g. 0.7 * 100 = 70.000000000000014 at 70
    auto k = static_cast<std::size_t>(
      std::ceil(rate * static_cast<double>(n) * (1.0 - 1e-12)));
    k = std::min(k, n);

    std::vector<Fact> picked;
    picked.reserve(k);
    std::mt19937_64 rng(seed);
    std::sample(cube.facts().begin(), cube.facts().end(), std::back_inserter(picked), k, rng);
    return Cube(cube.schema(), std::move(picked));
  }

  Cube
  apply_permutations(Cube const& cube, std::vector<Permutation> const& perms)
  {
    auto const d = cube.dimension_count();
    if (perms.size() != d) {
      throw InputError("arrangement covers " + std::to_string(perms.size()) +
                       " dimensions, cube has " + std::to_string(d));
    }
    CubeSchema schema = cube.schema();
    std::vector<Permutation> new_position(d);
    for (std::size_t t = 0; t < d; ++t) {
      auto const& dim = cube.schema().dimensions[t];
      if (!is_permutation_of_range(perms[t], dim.size())) {
        throw InputError("permutation for dimension '" + dim.name +
                         "' is not a bijection on its " + std::to_string(dim.size()) +
                         " modalities");
      }
      for (std::size_t k = 0; k < perms[t].size(); ++k) {
        schema.dimensions[t].modalities[k] = dim.modalities[perms[t][k]];
      }
      new_position[t] = inverse_permutation(perms[t]);
    }

    std::vector<Fact> facts = cube.facts();
    for (auto& fact : facts) {
      for (std::size_t t = 0; t < d; ++t) {
        fact.coords[t] = static_cast<std::uint32_t>(new_position[t][fact.coords[t]]);
      }
    }
    return Cube(std::move(schema), std::move(facts));
  }

  Cube
  apply_arrangement(Cube const& cube, Arrangement const& arrangement)
  {
    std::vector<Permutation> perms;
    perms.reserve(arrangement.per_dimension.size());
    for (auto const& dim : arrangement.per_dimension) {
      perms.push_back(dim.permutation);
    }
    return apply_permutations(cube, perms);
  }

} // namespace mcacube
