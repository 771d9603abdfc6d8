#pragma once

//
// Multiple correspondence analysis of a cube's fact multiset.
//
// Facts are flattened to the complete disjunctive table Z (one column block
// per dimension), the Burt table B = Z'Z is formed, and the weighted
// eigenproblem (1/d) X^-1 B phi = lambda phi (X = diag(B)) is solved
// through its symmetric form.
//

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <mcacube/cube.hpp>

namespace mcacube {

  class DisjunctiveTable {
  public:
    DisjunctiveTable() = default;

    std::size_t row_count() const { return rows_; }
    std::size_t dimension_count() const { return block_offsets_.size() - 1; }
    std::size_t column_count() const { return block_offsets_.back(); }

    // block t spans columns [block_offsets()[t], block_offsets()[t + 1])
    std::vector<std::size_t> const& block_offsets() const { return block_offsets_; }
    std::size_t block_of(std::size_t column) const;

    // z_{.j}
    std::vector<std::int64_t> const& column_sums() const { return column_sums_; }

    // the d columns holding a one in row i
    std::span<std::uint32_t const> active_columns(std::size_t row) const;

    std::uint8_t entry(std::size_t row, std::size_t column) const;

    friend DisjunctiveTable build_disjunctive(Cube const& cube);

  private:
    std::size_t rows_ = 0;
    std::vector<std::size_t> block_offsets_{0};
    std::vector<std::uint32_t> active_;
    std::vector<std::int64_t> column_sums_;
  };

  // Throws InputError("empty cube") for n = 0.
  DisjunctiveTable build_disjunctive(Cube const& cube);

  struct BurtTable {
    std::size_t order = 0;
    std::vector<std::size_t> block_offsets;
    // row-major order x order
    std::vector<std::int64_t> entries;
    // diagonal of B, i.e. the diagonal of X
    std::vector<std::int64_t> diagonal_weights;

    std::int64_t operator()(std::size_t i, std::size_t j) const { return entries[i * order + j]; }
    std::size_t dimension_count() const { return block_offsets.size() - 1; }
  };

  BurtTable burt(DisjunctiveTable const& z);

  struct FactorialAxis {
    double eigenvalue = 0.0;
    // one entry per column of Z; zero for dropped (empty) modalities
    std::vector<double> coordinates;
  };

  struct EigenSystem {
    std::int64_t fact_count = 0;
    std::size_t dimension_count = 0;
    std::vector<std::size_t> block_offsets;
    std::vector<std::int64_t> weights;
    // descending eigenvalue; axis alpha of the usual notation is axes[alpha - 1]
    std::vector<FactorialAxis> axes;
    // columns with zero weight, excluded from the eigenproblem
    std::vector<std::size_t> dropped_modalities;
    int sweeps = 0;

    std::size_t column_count() const { return weights.size(); }
    std::size_t nonempty_count() const { return weights.size() - dropped_modalities.size(); }
  };

  struct EigenOptions {
    double jacobi_tolerance = 1e-12;
    int max_sweeps = 100;
    double min_eigenvalue = 1e-12;
    // weighted coordinate standard deviation below which an axis is trivial
    double trivial_tolerance = 1e-9;
    // eigenvalues closer than this are treated as one degenerate eigenspace
    double degeneracy_tolerance = 1e-9;
  };

  // `dimension_count` is d. Throws InputError when every column has zero
  // weight and NumericalError when the eigen iteration does not converge.
  EigenSystem solve_eigen(BurtTable const& b, std::size_t dimension_count,
                          EigenOptions const& options = {});

  struct Contributions {
    // per_modality[axis][column]
    std::vector<std::vector<double>> per_modality;
    // per_dimension[axis][t]
    std::vector<std::vector<double>> per_dimension;
  };

  // Axes with a zero eigenvalue get all-zero rows.
  Contributions contributions(EigenSystem const& eig, DisjunctiveTable const& z);

  // max over columns of |(1/d) X^-1 B phi - lambda phi|
  double eigen_residual(BurtTable const& b, EigenSystem const& eig, std::size_t axis);

  // JSON dump of B, diag(X), eigenvalues and coordinates for cross-checking.
  void write_debug_document(BurtTable const& b, EigenSystem const& eig, std::ostream& out);

} // namespace mcacube
