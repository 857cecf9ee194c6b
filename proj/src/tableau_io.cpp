#include "rkfd/tableau_io.hpp"

#include "rkfd/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

namespace rkfd {

namespace {

using nlohmann::json;

constexpr std::int64_t kMaxExactInteger = std::int64_t{1} << 53;

std::int64_t parse_integer(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
  }
  if (value > kMaxExactInteger || value < -kMaxExactInteger) {
    throw std::invalid_argument("integer out of exact range in '" + std::string(whole) + "'");
  }
  return value;
}

// Line of the first occurrence of "key" in the raw text, 0 if absent.
std::size_t line_of_key(std::string_view text, const std::string& key) {
  const std::string quoted = "\"" + key + "\"";
  const auto pos = text.find(quoted);
  if (pos == std::string_view::npos) return 0;
  return static_cast<std::size_t>(std::count(text.begin(), text.begin() + pos, '\n')) + 1;
}

class Reader {
 public:
  Reader(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    throw ParseError(source_, field.empty() ? 0 : line_of_key(text_, field), field, message);
  }

  json parse() const {
    try {
      return json::parse(text_);
    } catch (const json::parse_error& e) {
      const auto byte = std::min<std::size_t>(e.byte, text_.size());
      const auto line = static_cast<std::size_t>(
                            std::count(text_.begin(), text_.begin() + byte, '\n')) + 1;
      throw ParseError(source_, line, "", e.what());
    }
  }

  double number(const json& value, const std::string& field) const {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) {
      try {
        return parse_rational(value.get<std::string>());
      } catch (const std::invalid_argument& e) {
        fail(field, e.what());
      }
    }
    fail(field, "expected a number or a rational string \"p/q\"");
  }

  Eigen::VectorXd vector(const json& obj, const std::string& field) const {
    const json& arr = member(obj, field);
    if (!arr.is_array()) fail(field, "expected an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(arr[i], field);
    return v;
  }

  Eigen::MatrixXd matrix(const json& obj, const std::string& field) const {
    const json& rows = member(obj, field);
    if (!rows.is_array()) fail(field, "expected an array of arrays");
    const std::size_t n = rows.size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (!rows[i].is_array()) fail(field, "expected an array of arrays");
      if (rows[i].size() != n) {
        std::ostringstream msg;
        msg << "row " << i + 1 << " has length " << rows[i].size() << ", expected " << n;
        fail(field, msg.str());
      }
      for (std::size_t j = 0; j < n; ++j) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = number(rows[i][j], field);
      }
    }
    return m;
  }

  const json& member(const json& obj, const std::string& field) const {
    auto it = obj.find(field);
    if (it == obj.end()) fail(field, "missing required field");
    return *it;
  }

  void reject_unknown(const json& obj, const std::set<std::string>& allowed) const {
    for (const auto& item : obj.items()) {
      if (!allowed.contains(item.key())) fail(item.key(), "unknown field");
    }
  }

  template <typename Fn>
  auto validated(Fn&& make) const {
    try {
      return make();
    } catch (const TableauError& e) {
      // TableauError messages start with "field 'x'" when a field is known.
      std::string field;
      std::string what = e.what();
      if (what.rfind("field '", 0) == 0) {
        const auto close = what.find("': ", 7);
        field = what.substr(7, close - 7);
        what = what.substr(close + 3);
      }
      throw ParseError(source_, field.empty() ? 0 : line_of_key(text_, field), field, what);
    }
  }

 private:
  std::string_view text_;
  std::string source_;
};

json vector_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "", "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

double parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return static_cast<double>(parse_integer(text, text));
  }
  const std::int64_t num = parse_integer(text.substr(0, slash), text);
  const std::string_view den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text.front() == '-' || den_text.front() == '+')) {
    throw std::invalid_argument("denominator must be unsigned in '" + std::string(text) + "'");
  }
  const std::int64_t den = parse_integer(den_text, text);
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return static_cast<double>(num) / static_cast<double>(den);
}

AnyTableau parse_any_tableau(std::string_view json_text, const std::string& source) {
  const Reader r(json_text, source);
  const json doc = r.parse();
  if (!doc.is_object()) r.fail("", "top-level value must be an object");

  const json& kind_value = r.member(doc, "kind");
  if (!kind_value.is_string()) r.fail("kind", "expected \"rkfd\" or \"rk\"");
  const std::string kind = kind_value.get<std::string>();

  const json& name_value = r.member(doc, "name");
  if (!name_value.is_string()) r.fail("name", "expected a string");
  const std::string name = name_value.get<std::string>();

  if (kind == "rkfd") {
    r.reject_unknown(doc, {"name", "kind", "c", "a_hat", "b", "bp", "bpp", "bppp", "declared_order"});
    RkfdCoefficients k;
    k.name = name;
    k.c = r.vector(doc, "c");
    k.a_hat = r.matrix(doc, "a_hat");
    k.b = r.vector(doc, "b");
    k.bp = r.vector(doc, "bp");
    k.bpp = r.vector(doc, "bpp");
    k.bppp = r.vector(doc, "bppp");
    if (auto it = doc.find("declared_order"); it != doc.end() && !it->is_null()) {
      if (!it->is_number_integer() || it->get<std::int64_t>() < 1 || it->get<std::int64_t>() > 64) {
        r.fail("declared_order", "expected a positive integer");
      }
      k.declared_order = it->get<int>();
    }
    return r.validated([&] { return AnyTableau(RkfdTableau::create(std::move(k))); });
  }
  if (kind == "rk") {
    r.reject_unknown(doc, {"name", "kind", "c", "A", "b"});
    RkCoefficients k;
    k.name = name;
    k.c = r.vector(doc, "c");
    k.a = r.matrix(doc, "A");
    k.b = r.vector(doc, "b");
    return r.validated([&] { return AnyTableau(RkTableau::create(std::move(k))); });
  }
  r.fail("kind", "expected \"rkfd\" or \"rk\", got \"" + kind + "\"");
}

AnyTableau load_any_tableau(const std::filesystem::path& path) {
  return parse_any_tableau(read_file(path), path.string());
}

RkfdTableau load_tableau(const std::filesystem::path& path) {
  auto any = load_any_tableau(path);
  if (auto* t = std::get_if<RkfdTableau>(&any)) return std::move(*t);
  throw ParseError(path.string(), 0, "kind", "expected an \"rkfd\" tableau, got \"rk\"");
}

RkTableau load_rk_tableau(const std::filesystem::path& path) {
  auto any = load_any_tableau(path);
  if (auto* t = std::get_if<RkTableau>(&any)) return std::move(*t);
  throw ParseError(path.string(), 0, "kind", "expected an \"rk\" tableau, got \"rkfd\"");
}

std::string to_json(const RkfdTableau& t) {
  json doc;
  doc["name"] = t.name();
  doc["kind"] = "rkfd";
  doc["c"] = vector_json(t.c());
  doc["a_hat"] = matrix_json(t.a_hat());
  doc["b"] = vector_json(t.b());
  doc["bp"] = vector_json(t.bp());
  doc["bpp"] = vector_json(t.bpp());
  doc["bppp"] = vector_json(t.bppp());
  if (t.declared_order()) doc["declared_order"] = *t.declared_order();
  return doc.dump(2) + "\n";
}

std::string to_json(const RkTableau& t) {
  json doc;
  doc["name"] = t.name();
  doc["kind"] = "rk";
  doc["c"] = vector_json(t.c());
  doc["A"] = matrix_json(t.a());
  doc["b"] = vector_json(t.b());
  return doc.dump(2) + "\n";
}

void save_tableau(const RkfdTableau& tableau, const std::filesystem::path& path) {
  write_file(path, to_json(tableau));
}

void save_tableau(const RkTableau& tableau, const std::filesystem::path& path) {
  write_file(path, to_json(tableau));
}

}  // namespace rkfd
