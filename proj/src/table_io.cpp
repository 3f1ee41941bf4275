#include <charconv>
#include <fstream>
#include <sstream>

#include "amf/io.hpp"

namespace amf {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

bool parse_number(const std::string& field, double& v) {
  std::size_t b = field.find_first_not_of(" \t"), e = field.find_last_not_of(" \t");
  if (b == std::string::npos) return false;
  const char* first = field.data() + b;
  const char* last = field.data() + e + 1;
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  return res.ec == std::errc() && res.ptr == last;
}

double number_or_throw(const std::string& field, const std::string& context) {
  double v;
  if (!parse_number(field, v)) throw Error(context + ": '" + field + "' is not a number");
  return v;
}

}  // namespace

GrayImage parse_csv_matrix(const std::string& text) {
  std::vector<std::string> lines = lines_of(text);
  if (lines.empty()) throw Error("unexpected end of file");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto fields = split_line(lines[i]);
    std::vector<double> row;
    bool numeric = true;
    for (const auto& f : fields) {
      double v;
      if (!parse_number(f, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (i == 0) continue;  // header
      throw Error("malformed CSV matrix: non-numeric value on line " + std::to_string(i + 1));
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error("dimension mismatch: ragged CSV matrix on line " + std::to_string(i + 1));
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) throw Error("unexpected end of file");
  GrayImage g(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t y = 0; y < rows.size(); ++y)
    for (std::size_t x = 0; x < rows[0].size(); ++x)
      g(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = rows[y][x];
  return g;
}

std::string encode_csv_matrix(const Grid<double>& g) {
  std::string s;
  for (Eigen::Index x = 0; x < g.cols(); ++x) s += (x ? ",x" : "x") + std::to_string(x);
  s += "\n";
  for (Eigen::Index y = 0; y < g.rows(); ++y) {
    for (Eigen::Index x = 0; x < g.cols(); ++x) s += (x ? "," : "") + format_double(g(y, x));
    s += "\n";
  }
  return s;
}

std::string encode_histogram(const Histogram& h) {
  std::string s = "bin_lo,bin_hi,count,frequency\n";
  const auto f = h.frequencies();
  for (std::size_t i = 0; i < h.bins(); ++i)
    s += format_double(h.edges[i]) + "," + format_double(h.edges[i + 1]) + "," +
         std::to_string(h.counts[i]) + "," + format_double(f[i]) + "\n";
  return s;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw Error("CSV has no column '" + name + "'");
}

CsvTable parse_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw Error("unexpected end of file");
  CsvTable t{split_line(lines[0]), {}};
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto row = split_line(lines[i]);
    if (row.size() != t.header.size())
      throw Error("dimension mismatch: CSV line " + std::to_string(i + 1) + " has " +
                  std::to_string(row.size()) + " fields, header has " +
                  std::to_string(t.header.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string encode_feature_table(const FeatureTable& t) {
  std::string s = "id,failure_load";
  for (const auto& c : t.columns) s += "," + c;
  s += "\n";
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    s += t.ids[static_cast<std::size_t>(i)] + "," + format_double(t.failure_load(i));
    for (Eigen::Index j = 0; j < t.features.cols(); ++j) s += "," + format_double(t.features(i, j));
    s += "\n";
  }
  return s;
}

FeatureTable parse_feature_table(const std::string& text) {
  const CsvTable csv = parse_csv(text);
  if (csv.header.size() < 3 || csv.header[0] != "id" || csv.header[1] != "failure_load")
    throw Error("specimen CSV must start with columns id,failure_load and have features");
  FeatureTable t;
  t.columns.assign(csv.header.begin() + 2, csv.header.end());
  for (const auto& row : csv.rows) {
    SpecimenRecord r{row[0], Eigen::VectorXd(static_cast<Eigen::Index>(t.columns.size())),
                     number_or_throw(row[1], "failure_load")};
    for (std::size_t j = 0; j < t.columns.size(); ++j)
      r.features(static_cast<Eigen::Index>(j)) = number_or_throw(row[j + 2], t.columns[j]);
    t.append(r);
  }
  if (t.size() == 0) throw Error("specimen CSV has no records");
  return t;
}

FeatureTable read_feature_table(const std::filesystem::path& path) {
  return parse_feature_table(read_file(path));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error("cannot write '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot write '" + path.string() + "'");
  }
}

}  // namespace amf
