#pragma once

#include "pdeit/geometry.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pdeit {

// ----- dense matrix text -----------------------------------------------
// One row per line, comma-separated entries. Complex entries are written as
// "a+bi" / "a-bi"; purely real matrices are written as plain numbers.
// Optional leading lines of the form "# key=value" carry header metadata.

std::string format_complex(Complex v);
Complex parse_complex(const std::string& token);

void write_matrix(const std::filesystem::path& file, const MatrixXcd& m,
                  const std::vector<std::pair<std::string, std::string>>& header = {});
void write_matrix(const std::filesystem::path& file, const MatrixXd& m,
                  const std::vector<std::pair<std::string, std::string>>& header = {});

struct MatrixFile {
  MatrixXcd values;
  std::map<std::string, std::string> header;
};
MatrixFile read_matrix(const std::filesystem::path& file);

// ----- key=value text ----------------------------------------------------
// Plain-text "key = value" lines; '#' starts a comment; order preserved on
// write so identical inputs produce byte-identical files.

struct KeyValueFile {
  std::vector<std::pair<std::string, std::string>> entries;

  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  Complex get_complex(const std::string& key, Complex fallback) const;

  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);
  void set_int(const std::string& key, long long value);
  void set_complex(const std::string& key, Complex value);
};

KeyValueFile read_key_value(const std::filesystem::path& file);
void write_key_value(const std::filesystem::path& file, const KeyValueFile& kv);

/// Fixed shortest round-trip formatting for doubles so that repeated runs
/// serialize identically.
std::string format_double(double v);

// ----- portable graymap ---------------------------------------------------
// 8-bit binary PGM with the linear value mapping [vmin, vmax] -> [0, 255].
void write_pgm(const std::filesystem::path& file, const MatrixXd& values, double vmin,
               double vmax);

}  // namespace pdeit
