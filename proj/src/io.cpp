#include "pdeit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pdeit {

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, p);
}

std::string format_complex(Complex v) {
  const std::string re = format_double(v.real());
  if (v.imag() == 0.0) return re;
  const std::string im = format_double(std::abs(v.imag()));
  return re + (v.imag() < 0.0 ? "-" : "+") + im + "i";
}

Complex parse_complex(const std::string& token) {
  std::string s = token;
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; }),
          s.end());
  if (s.empty()) throw std::invalid_argument("parse_complex: empty token");
  if (s.back() != 'i') {
    return Complex(std::stod(s), 0.0);
  }
  s.pop_back();
  // split at the sign that separates real and imaginary parts, ignoring
  // leading signs and exponent signs
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    // purely imaginary, e.g. "2i" or "-1.5i" or "i"
    if (s.empty() || s == "+" || s == "-") s += "1";
    return Complex(0.0, std::stod(s));
  }
  const double re = std::stod(s.substr(0, split));
  std::string ims = s.substr(split);
  if (ims == "+" || ims == "-") ims += "1";
  return Complex(re, std::stod(ims));
}

namespace {

template <class Matrix>
void write_matrix_impl(const std::filesystem::path& file, const Matrix& m,
                       const std::vector<std::pair<std::string, std::string>>& header) {
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot open for writing: " + file.string());
  for (const auto& [k, v] : header) os << "# " << k << "=" << v << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ",";
      if constexpr (std::is_same_v<typename Matrix::Scalar, Complex>) {
        os << format_complex(m(i, j));
      } else {
        os << format_double(m(i, j));
      }
    }
    os << "\n";
  }
}

}  // namespace

void write_matrix(const std::filesystem::path& file, const MatrixXcd& m,
                  const std::vector<std::pair<std::string, std::string>>& header) {
  write_matrix_impl(file, m, header);
}

void write_matrix(const std::filesystem::path& file, const MatrixXd& m,
                  const std::vector<std::pair<std::string, std::string>>& header) {
  write_matrix_impl(file, m, header);
}

MatrixFile read_matrix(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw std::runtime_error("cannot open for reading: " + file.string());
  MatrixFile out;
  std::vector<std::vector<Complex>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string key = line.substr(1, eq - 1);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string& s) {
          s.erase(0, s.find_first_not_of(" \t"));
          s.erase(s.find_last_not_of(" \t\r") + 1);
        };
        trim(key);
        trim(val);
        out.header[key] = val;
      }
      continue;
    }
    std::vector<Complex> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(parse_complex(tok));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("ragged matrix text in " + file.string());
    }
    rows.push_back(std::move(row));
  }
  out.values.resize(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) out.values(i, j) = rows[i][j];
  return out;
}

bool KeyValueFile::has(const std::string& key) const {
  return std::any_of(entries.begin(), entries.end(),
                     [&](const auto& e) { return e.first == key; });
}

const std::string& KeyValueFile::get(const std::string& key) const {
  for (const auto& e : entries)
    if (e.first == key) return e.second;
  throw std::out_of_range("missing key: " + key);
}

std::string KeyValueFile::get_or(const std::string& key, const std::string& fallback) const {
  for (const auto& e : entries)
    if (e.first == key) return e.second;
  return fallback;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
  return has(key) ? std::stod(get(key)) : fallback;
}

int KeyValueFile::get_int(const std::string& key, int fallback) const {
  return has(key) ? std::stoi(get(key)) : fallback;
}

Complex KeyValueFile::get_complex(const std::string& key, Complex fallback) const {
  return has(key) ? parse_complex(get(key)) : fallback;
}

void KeyValueFile::set(const std::string& key, const std::string& value) {
  for (auto& e : entries) {
    if (e.first == key) {
      e.second = value;
      return;
    }
  }
  entries.emplace_back(key, value);
}

void KeyValueFile::set_double(const std::string& key, double value) { set(key, format_double(value)); }

void KeyValueFile::set_int(const std::string& key, long long value) {
  set(key, std::to_string(value));
}

void KeyValueFile::set_complex(const std::string& key, Complex value) {
  set(key, format_complex(value));
}

KeyValueFile read_key_value(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw std::runtime_error("cannot open for reading: " + file.string());
  KeyValueFile kv;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!key.empty()) kv.entries.emplace_back(key, val);
  }
  return kv;
}

void write_key_value(const std::filesystem::path& file, const KeyValueFile& kv) {
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot open for writing: " + file.string());
  for (const auto& [k, v] : kv.entries) os << k << " = " << v << "\n";
}

void write_pgm(const std::filesystem::path& file, const MatrixXd& values, double vmin,
               double vmax) {
  if (!(vmax > vmin)) throw std::invalid_argument("write_pgm: vmax must exceed vmin");
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + file.string());
  os << "P5\n# vmin=" << format_double(vmin) << " vmax=" << format_double(vmax) << "\n"
     << values.cols() << " " << values.rows() << "\n255\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      double t = (values(i, j) - vmin) / (vmax - vmin);
      t = std::clamp(t, 0.0, 1.0);
      os.put(static_cast<char>(static_cast<std::uint8_t>(std::lround(t * 255.0))));
    }
  }
}

}  // namespace pdeit
