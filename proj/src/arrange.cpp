#include <mcacube/arrange.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

#include <mcacube/error.hpp>

namespace mcacube {

  namespace {

    constexpr double tie_tolerance = 1e-9;

    bool
    nearly_equal(double a, double b)
    {
      return std::abs(a - b) <= tie_tolerance * std::max({1.0, std::abs(a), std::abs(b)});
    }

    using Iter = std::vector<std::size_t>::iterator;
    using Key = std::vector<double>;

    // Sorts [lo, hi) by keys[level]; runs equal up to rounding are refined
    // with the next key, the last resort being catalog order.
    void
    refine_runs(std::vector<Key> const& keys, std::size_t level, Iter lo, Iter hi)
    {
      if (hi - lo < 2) {
        return;
      }
      if (level == keys.size()) {
        std::sort(lo, hi);
        return;
      }
      auto const& key = keys[level];
      double scale = 1.0;
      for (auto x : key) {
        scale = std::max(scale, std::abs(x));
      }
      std::stable_sort(lo, hi, [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
      for (auto run = lo; run != hi;) {
        auto end = run + 1;
        while (end != hi && key[*end] - key[*(end - 1)] <= tie_tolerance * scale) {
          ++end;
        }
        refine_runs(keys, level + 1, run, end);
        run = end;
      }
    }

    // +1 or -1 so that the secondary key flips together with the primary
    // one: the sign of the first clearly non-zero odd mixed moment.
    // When every moment vanishes the primary key is symmetric with respect
    // to this one and either orientation will do.
    double
    orientation(Key const& primary, Key const& secondary, std::vector<double> const& weights)
    {
      for (auto [a, b] : {std::pair{1, 1}, {1, 3}, {3, 1}, {3, 3}}) {
        double sum = 0.0;
        double mass = 0.0;
        for (std::size_t j = 0; j < primary.size(); ++j) {
          double const term = weights[j] * std::pow(primary[j], a) * std::pow(secondary[j], b);
          sum += term;
          mass += std::abs(term);
        }
        if (std::abs(sum) > tie_tolerance * mass) {
          return sum > 0.0 ? 1.0 : -1.0;
        }
      }
      return 1.0;
    }

  } // namespace

  std::size_t
  select_axis(EigenSystem const& eig, Contributions const& contrib, std::size_t t)
  {
    if (eig.axes.empty()) {
      throw InputError("no retained factorial axis to select from");
    }
    auto score = [&](std::size_t alpha) {
      return eig.axes[alpha].eigenvalue * contrib.per_dimension[alpha][t];
    };

    double best_score = score(0);
    for (std::size_t alpha = 1; alpha < eig.axes.size(); ++alpha) {
      best_score = std::max(best_score, score(alpha));
    }
    double best_lambda = -1.0;
    for (std::size_t alpha = 0; alpha < eig.axes.size(); ++alpha) {
      if (nearly_equal(score(alpha), best_score)) {
        best_lambda = std::max(best_lambda, eig.axes[alpha].eigenvalue);
      }
    }
    for (std::size_t alpha = 0; alpha < eig.axes.size(); ++alpha) {
      if (nearly_equal(score(alpha), best_score) &&
          nearly_equal(eig.axes[alpha].eigenvalue, best_lambda)) {
        return alpha;
      }
    }
    return 0; // unreachable: the maximum itself qualifies
  }

  Permutation
  order_modalities(EigenSystem const& eig, std::size_t t, std::size_t axis)
  {
    auto const first = eig.block_offsets.at(t);
    auto const size = eig.block_offsets.at(t + 1) - first;
    std::vector<std::size_t> nonempty;
    std::vector<std::size_t> empty;
    for (std::size_t j = 0; j < size; ++j) {
      if (eig.weights[first + j] > 0) {
        nonempty.push_back(j);
      } else {
        empty.push_back(j);
      }
    }
    auto block = [&](std::size_t alpha) {
      auto const& c = eig.axes.at(alpha).coordinates;
      return Key(c.begin() + static_cast<std::ptrdiff_t>(first),
                 c.begin() + static_cast<std::ptrdiff_t>(first + size));
    };
    std::vector<double> weights(size);
    for (std::size_t j = 0; j < size; ++j) {
      weights[j] = static_cast<double>(eig.weights[first + j]);
    }

    // ties on the chosen axis are broken by the remaining axes in order,
    // each oriented along the chosen one so that flipping its sign reverses
    // the whole order, then by catalog order
    std::vector<Key> keys{block(axis)};
    for (std::size_t alpha = 0; alpha < eig.axes.size(); ++alpha) {
      if (alpha == axis) {
        continue;
      }
      auto key = block(alpha);
      double const sign = orientation(keys.front(), key, weights);
      for (auto& x : key) {
        x *= sign;
      }
      keys.push_back(std::move(key));
    }
    refine_runs(keys, 0, nonempty.begin(), nonempty.end());
    Permutation perm = std::move(nonempty);
    perm.insert(perm.end(), empty.begin(), empty.end());
    return perm;
  }

  Permutation
  order_without_axis(EigenSystem const& eig, std::size_t t)
  {
    auto const first = eig.block_offsets.at(t);
    auto const size = eig.block_offsets.at(t + 1) - first;
    Permutation perm;
    perm.reserve(size);
    for (std::size_t j = 0; j < size; ++j) {
      if (eig.weights[first + j] > 0) {
        perm.push_back(j);
      }
    }
    for (std::size_t j = 0; j < size; ++j) {
      if (eig.weights[first + j] == 0) {
        perm.push_back(j);
      }
    }
    return perm;
  }

  Arrangement
  arrange_cube(Cube const& cube, EigenOptions const& options)
  {
    auto const z = build_disjunctive(cube);
    auto const b = burt(z);
    auto const d = cube.dimension_count();
    auto const eig = solve_eigen(b, d, options);
    auto const contrib = contributions(eig, z);

    Arrangement arrangement;
    for (auto const& dim : cube.schema().dimensions) {
      arrangement.initial_orders.push_back(dim.modalities);
    }
    for (std::size_t t = 0; t < d; ++t) {
      DimensionArrangement entry;
      entry.dimension = t;
      auto const size = cube.shape()[t];
      if (size == 1) {
        entry.permutation = identity_permutation(1);
      } else if (eig.axes.empty()) {
        // every dimension has a single non-empty modality
        entry.permutation = order_without_axis(eig, t);
      } else {
        auto const alpha = select_axis(eig, contrib, t);
        entry.chosen_axis = alpha;
        entry.eigenvalue = eig.axes[alpha].eigenvalue;
        entry.contribution = contrib.per_dimension[alpha][t];
        entry.score = entry.eigenvalue * entry.contribution;
        entry.permutation = order_modalities(eig, t, alpha);
      }
      arrangement.per_dimension.push_back(std::move(entry));
    }
    return arrangement;
  }

  void
  write_arrangement_document(Arrangement const& arrangement, CubeSchema const& schema,
                             std::ostream& out)
  {
    using nlohmann::json;
    json dims = json::array();
    for (auto const& entry : arrangement.per_dimension) {
      auto const& spec = schema.dimensions.at(entry.dimension);
      std::vector<std::string> order;
      for (auto j : entry.permutation) {
        order.push_back(spec.modalities.at(j));
      }
      json node;
      node["name"] = spec.name;
      if (entry.chosen_axis) {
        node["axis"] = *entry.chosen_axis + 1;
        node["eigenvalue"] = entry.eigenvalue;
        node["contribution"] = entry.contribution;
        node["score"] = entry.score;
      } else {
        node["axis"] = nullptr;
        node["eigenvalue"] = nullptr;
        node["contribution"] = nullptr;
        node["score"] = nullptr;
      }
      node["order"] = order;
      node["initialOrder"] = spec.modalities;
      dims.push_back(std::move(node));
    }
    json doc;
    doc["schemaVersion"] = 1;
    doc["kind"] = "arrangement";
    doc["dimensions"] = dims;
    out << doc.dump(2) << '\n';
  }

  namespace {

    std::vector<Permutation>
    parse_arrangement(std::istream& in, CubeSchema const& schema)
    {
      using nlohmann::json;
      json doc;
      try {
        doc = json::parse(in);
      } catch (json::parse_error const& e) {
        throw InputError(std::string("arrangement: ") + e.what());
      }
      if (!doc.is_object() || !doc.contains("dimensions") || !doc.at("dimensions").is_array()) {
        throw InputError("arrangement: missing 'dimensions' list");
      }

      auto const d = schema.dimension_count();
      std::vector<Permutation> perms(d);
      std::vector<bool> seen(d, false);
      for (auto const& node : doc.at("dimensions")) {
        if (!node.is_object() || !node.contains("name") || !node.contains("order")) {
          throw InputError("arrangement: each dimension needs 'name' and 'order'");
        }
        auto const name = node.at("name").get<std::string>();
        auto const t = schema.find_dimension(name);
        if (t == d) {
          throw InputError("arrangement: unknown dimension '" + name + "'");
        }
        if (seen[t]) {
          throw InputError("arrangement: dimension '" + name + "' listed twice");
        }
        seen[t] = true;

        auto const& catalog = schema.dimensions[t].modalities;
        std::unordered_map<std::string, std::size_t> index;
        for (std::size_t j = 0; j < catalog.size(); ++j) {
          index.emplace(catalog[j], j);
        }
        for (auto const& label : node.at("order")) {
          auto it = index.find(label.get<std::string>());
          if (it == index.end()) {
            throw InputError("arrangement: dimension '" + name + "' has no modality '" +
                             label.get<std::string>() + "'");
          }
          perms[t].push_back(it->second);
        }
        if (!is_permutation_of_range(perms[t], catalog.size())) {
          throw InputError("arrangement: order for '" + name +
                           "' is not a permutation of its " + std::to_string(catalog.size()) +
                           " modalities");
        }
      }
      for (std::size_t t = 0; t < d; ++t) {
        if (!seen[t]) {
          perms[t] = identity_permutation(schema.dimensions[t].size());
        }
      }
      return perms;
    }

  } // namespace

  // Dimensions absent from the document keep their catalog order.
  std::vector<Permutation>
  read_arrangement_permutations(std::istream& in, CubeSchema const& schema)
  {
    try {
      return parse_arrangement(in, schema);
    } catch (nlohmann::json::exception const& e) {
      throw InputError(std::string("arrangement: ") + e.what());
    }
  }

  std::vector<Permutation>
  read_arrangement_permutations(std::string const& path, CubeSchema const& schema)
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw InputError("cannot open '" + path + "'");
    }
    return read_arrangement_permutations(in, schema);
  }

} // namespace mcacube
