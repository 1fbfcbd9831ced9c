#pragma once

// Command-line front end: run configuration, table output and the
// eval / validate / coeffs / asymp-compare / reconstruct / asy3d commands.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cdpw/pw.hpp"

namespace cdpw::cli {

enum class Format { Csv, Json };

struct RunConfig {
  Format format = Format::Csv;
  int csv_precision = 17;
  std::uint64_t seed = 1;
  int threads = 1;
  pw::TauOptions tau{};  // tolerances, quadrature budget and routing thresholds

  /// Throws DomainError unless every tolerance and budget is positive.
  void validate() const;
};

/// Sets one key; unknown keys and malformed values throw DomainError.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// key=value lines; blank lines and lines starting with '#' are skipped.
void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin);
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Keys accepted by apply_setting.
std::vector<std::string> config_keys();

/// Parses "1.5", "-2i", "1+0.5i", "0.25-3i".
Complex parse_complex(std::string_view s);

using Cell = std::variant<std::string, double, long long, bool>;

/// Ordered table; CSV gets a header row, JSON one object per line.
class Table {
 public:
  explicit Table(std::vector<std::string> columns);
  void add_row(std::vector<Cell> row);
  /// Summary entry written after the rows.
  void add_note(std::string key, Cell value);
  void write(std::ostream& os, Format format, int csv_precision) const;
  std::size_t size() const noexcept { return rows_.size(); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, Cell>> notes_;
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailure = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the command line; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdpw::cli
