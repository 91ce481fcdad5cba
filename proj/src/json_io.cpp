#include "ptsym/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ptsym/format.hpp"

namespace ptsym {

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
    throw ValidationError("matrix file needs fields \"n\" and \"entries\"");
  const int n = j.at("n").get<int>();
  const auto& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != static_cast<size_t>(n) * n)
    throw ValidationError("matrix file: entries count must be n^2");
  std::vector<Complex> data;
  data.reserve(entries.size());
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 2)
      throw ValidationError("matrix file: each entry must be a [re, im] pair");
    data.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return ComplexMatrix(n, std::move(data));
}

nlohmann::ordered_json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::ordered_json j;
  j["n"] = m.dim();
  auto entries = nlohmann::ordered_json::array();
  for (int i = 0; i < m.dim(); ++i)
    for (int k = 0; k < m.dim(); ++k)
      entries.push_back({m(i, k).real(), m(i, k).imag()});
  j["entries"] = std::move(entries);
  return j;
}

namespace {

ComplexMatrix matrix_from_csv(const std::string& text) {
  std::vector<Complex> data;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(row >> re >> comma >> im) || comma != ',')
      throw ValidationError("matrix CSV: each line must be \"re,im\"");
    data.emplace_back(re, im);
  }
  const int n = static_cast<int>(std::lround(std::sqrt(double(data.size()))));
  if (static_cast<size_t>(n) * n != data.size())
    throw ValidationError("matrix CSV: entry count must be a perfect square");
  return ComplexMatrix(n, std::move(data));
}

}  // namespace

ComplexMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return matrix_from_csv(text);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("matrix file: invalid JSON: ") + e.what());
  }
  return matrix_from_json(j);
}

nlohmann::ordered_json complex_to_json(Complex z) {
  return nlohmann::ordered_json::array({z.real(), z.imag()});
}

std::string digest_hex(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a:") + buf;
}

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void dump_rec(const nlohmann::ordered_json& j, std::string& out) {
  switch (j.type()) {
    case nlohmann::ordered_json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        append_escaped(out, it.key());
        out += ':';
        dump_rec(it.value(), out);
      }
      out += '}';
      break;
    }
    case nlohmann::ordered_json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        dump_rec(v, out);
      }
      out += ']';
      break;
    }
    case nlohmann::ordered_json::value_t::string:
      append_escaped(out, j.get_ref<const std::string&>());
      break;
    case nlohmann::ordered_json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case nlohmann::ordered_json::value_t::number_integer:
      out += std::to_string(j.get<int64_t>());
      break;
    case nlohmann::ordered_json::value_t::number_unsigned:
      out += std::to_string(j.get<uint64_t>());
      break;
    case nlohmann::ordered_json::value_t::number_float:
      out += format_g17(j.get<double>());
      break;
    default:
      out += "null";
  }
}

}  // namespace

std::string dump_g17(const nlohmann::ordered_json& j) {
  std::string out;
  dump_rec(j, out);
  return out;
}

}  // namespace ptsym
