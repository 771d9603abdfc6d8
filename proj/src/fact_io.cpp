#include <mcacube/cube.hpp>

#include <charconv>
#include <fstream>
#include <limits>
#include <unordered_map>

#include <json.hpp>

#include <mcacube/csv.hpp>
#include <mcacube/error.hpp>

namespace mcacube {

  namespace {

    using nlohmann::json;

    std::string
    trim(std::string const& s)
    {
      auto const first = s.find_first_not_of(" \t");
      if (first == std::string::npos) {
        return {};
      }
      auto const last = s.find_last_not_of(" \t");
      return s.substr(first, last - first + 1);
    }

    std::optional<double>
    parse_number(std::string const& text)
    {
      auto const s = trim(text);
      if (s.empty()) {
        return std::nullopt;
      }
      char const* begin = s.data();
      if (*begin == '+') {
        ++begin;
      }
      double value = 0.0;
      auto const [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
      if (ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
      }
      return value;
    }

    std::string
    shortest(double value)
    {
      char buf[64];
      auto const [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
      return std::string(buf, ptr);
    }

    std::vector<std::string>
    string_list(json const& node, std::string const& what)
    {
      if (!node.is_array()) {
        throw InputError("schema: '" + what + "' must be a list");
      }
      std::vector<std::string> out;
      for (auto const& item : node) {
        if (!item.is_string()) {
          throw InputError("schema: '" + what + "' entries must be strings");
        }
        out.push_back(item.get<std::string>());
      }
      return out;
    }

    std::ifstream
    open_input(std::string const& path)
    {
      std::ifstream in(path, std::ios::binary);
      if (!in) {
        throw InputError("cannot open '" + path + "'");
      }
      return in;
    }

  } // namespace

  SchemaDocument
  parse_schema_document(std::istream& in)
  {
    json doc;
    try {
      doc = json::parse(in);
    } catch (json::parse_error const& e) {
      throw InputError(std::string("schema: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("dimensions")) {
      throw InputError("schema: missing 'dimensions'");
    }
    auto const& dims = doc.at("dimensions");
    if (!dims.is_array() || dims.empty()) {
      throw InputError("schema: 'dimensions' must be a non-empty list");
    }

    SchemaDocument schema;
    for (auto const& node : dims) {
      SchemaDocument::Dimension dim;
      if (node.is_string()) {
        dim.name = node.get<std::string>();
      } else if (node.is_object() && node.contains("name") && node.at("name").is_string()) {
        dim.name = node.at("name").get<std::string>();
        if (node.contains("modalities") && !node.at("modalities").is_null()) {
          dim.modalities = string_list(node.at("modalities"), dim.name + ".modalities");
        }
      } else {
        throw InputError("schema: each dimension needs a 'name'");
      }
      schema.dimensions.push_back(std::move(dim));
    }
    if (doc.contains("measures") && !doc.at("measures").is_null()) {
      schema.measures = string_list(doc.at("measures"), "measures");
    }
    return schema;
  }

  SchemaDocument
  read_schema_document(std::string const& path)
  {
    auto in = open_input(path);
    return parse_schema_document(in);
  }

  void
  write_schema_document(CubeSchema const& schema, std::ostream& out)
  {
    json doc;
    doc["dimensions"] = json::array();
    for (auto const& dim : schema.dimensions) {
      doc["dimensions"].push_back({{"name", dim.name}, {"modalities", dim.modalities}});
    }
    doc["measures"] = schema.measures;
    out << doc.dump(2) << '\n';
  }

  Cube
  load_fact_table(std::istream& in, SchemaDocument const& doc)
  {
    auto header = csv::read_row(in);
    if (!header) {
      throw InputError("fact file has no header row");
    }
    for (auto& h : *header) {
      h = trim(h);
    }

    auto column_of = [&](std::string const& name) {
      for (std::size_t c = 0; c < header->size(); ++c) {
        if ((*header)[c] == name) {
          return c;
        }
      }
      throw InputError("unknown column '" + name + "'");
    };

    auto const d = doc.dimensions.size();
    auto const m = doc.measures.size();
    std::vector<std::size_t> dim_columns;
    std::vector<std::size_t> measure_columns;
    for (auto const& dim : doc.dimensions) {
      dim_columns.push_back(column_of(dim.name));
    }
    for (auto const& name : doc.measures) {
      measure_columns.push_back(column_of(name));
    }

    CubeSchema schema;
    std::vector<std::unordered_map<std::string, std::uint32_t>> lookup(d);
    for (std::size_t t = 0; t < d; ++t) {
      DimensionSpec spec{doc.dimensions[t].name, {}};
      if (doc.dimensions[t].modalities) {
        spec.modalities = *doc.dimensions[t].modalities;
        for (std::size_t j = 0; j < spec.modalities.size(); ++j) {
          lookup[t].emplace(spec.modalities[j], static_cast<std::uint32_t>(j));
        }
      }
      schema.dimensions.push_back(std::move(spec));
    }
    schema.measures = doc.measures;

    std::vector<Fact> facts;
    std::size_t row_number = 0;
    while (auto row = csv::read_row(in)) {
      if (row->size() == 1 && row->front().empty()) {
        continue;
      }
      ++row_number;
      if (row->size() != header->size()) {
        throw InputError("row " + std::to_string(row_number) + " has " +
                         std::to_string(row->size()) + " fields, header has " +
                         std::to_string(header->size()));
      }
      Fact fact;
      fact.coords.resize(d);
      for (std::size_t t = 0; t < d; ++t) {
        auto const& label = (*row)[dim_columns[t]];
        auto it = lookup[t].find(label);
        if (it == lookup[t].end()) {
          if (doc.dimensions[t].modalities) {
            throw InputError("row " + std::to_string(row_number) + ": modality '" + label +
                             "' is not in the catalog of dimension '" +
                             doc.dimensions[t].name + "'");
          }
          auto& catalog = schema.dimensions[t].modalities;
          it = lookup[t].emplace(label, static_cast<std::uint32_t>(catalog.size())).first;
          catalog.push_back(label);
        }
        fact.coords[t] = it->second;
      }
      fact.measures.reserve(m);
      for (std::size_t k = 0; k < m; ++k) {
        auto const& cell = (*row)[measure_columns[k]];
        auto value = parse_number(cell);
        if (!value) {
          throw InputError("row " + std::to_string(row_number) + ", column '" +
                           doc.measures[k] + "': '" + cell + "' is not a number");
        }
        fact.measures.push_back(*value);
      }
      facts.push_back(std::move(fact));
    }

    // A dimension with no explicit catalog and no facts keeps one placeholder
    // modality so that the schema stays well-formed (n = 0 cubes only).
    for (auto& dim : schema.dimensions) {
      if (dim.modalities.empty()) {
        dim.modalities.push_back("");
      }
    }
    return Cube(std::move(schema), std::move(facts));
  }

  Cube
  load_fact_table(std::string const& fact_path, std::string const& schema_path)
  {
    auto schema = read_schema_document(schema_path);
    auto in = open_input(fact_path);
    return load_fact_table(in, schema);
  }

  void
  write_fact_table(Cube const& cube, std::ostream& out)
  {
    auto const& schema = cube.schema();
    csv::Row row;
    for (auto const& dim : schema.dimensions) {
      row.push_back(dim.name);
    }
    for (auto const& name : schema.measures) {
      row.push_back(name);
    }
    csv::write_row(out, row);

    for (auto const& fact : cube.facts()) {
      row.clear();
      for (std::size_t t = 0; t < fact.coords.size(); ++t) {
        row.push_back(schema.dimensions[t].modalities[fact.coords[t]]);
      }
      for (auto v : fact.measures) {
        row.push_back(shortest(v));
      }
      csv::write_row(out, row);
    }
  }

} // namespace mcacube
