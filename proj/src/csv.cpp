#include <mcacube/csv.hpp>

#include <istream>
#include <ostream>

#include <mcacube/error.hpp>

namespace mcacube::csv {

  std::optional<Row>
  read_row(std::istream& in)
  {
    if (in.peek() == std::char_traits<char>::eof()) {
      return std::nullopt;
    }

    Row row;
    std::string field;
    bool quoted = false;
    bool after_quote = false;
    char c = 0;
    while (in.get(c)) {
      if (quoted) {
        if (c == '"') {
          if (in.peek() == '"') {
            in.get(c);
            field.push_back('"');
          } else {
            quoted = false;
            after_quote = true;
          }
        } else {
          field.push_back(c);
        }
        continue;
      }
      if (c == ',') {
        row.push_back(std::move(field));
        field.clear();
        after_quote = false;
      } else if (c == '\n') {
        break;
      } else if (c == '"' && field.empty() && !after_quote) {
        quoted = true;
      } else if (c == '\r' && in.peek() == '\n') {
        // CRLF line ending
      } else {
        field.push_back(c);
      }
    }
    if (quoted) {
      throw InputError("unterminated quoted field");
    }
    row.push_back(std::move(field));
    return row;
  }

  std::string
  quote(std::string_view field)
  {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
      return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
      if (c == '"') {
        out.push_back('"');
      }
      out.push_back(c);
    }
    out.push_back('"');
    return out;
  }

  void
  write_row(std::ostream& out, Row const& row)
  {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0) {
        out << ',';
      }
      out << quote(row[k]);
    }
    out << '\n';
  }

} // namespace mcacube::csv
