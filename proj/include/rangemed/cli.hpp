#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rangemed/element.hpp"
#include "rangemed/oracle.hpp"
#include "rangemed/range_tree.hpp"

namespace rangemed::cli {

enum class Mode { offline, online_known_k, online, slow, oracle };
enum class Format { csv, human };

std::optional<Mode> parse_mode(const std::string& s);
std::string mode_name(Mode m);

/// Bad input files or arguments; the message is meant for the user.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Mode mode = Mode::offline;
  std::optional<std::size_t> u_override;
  std::optional<std::string> data_path;
  std::optional<std::string> query_path;
  std::optional<Workload> workload;
  std::optional<std::string> output_path;
  Format format = Format::csv;
};

struct QueryRow {
  QueryInterval q;
  Element median;
  std::uint64_t comparisons = 0;
};

struct RunReport {
  std::vector<QueryRow> rows;
  std::uint64_t build_comparisons = 0;
  std::uint64_t total_comparisons = 0;
};

/// One value per line; line i (0-based) becomes index i.
Dataset load_dataset(const std::string& path);
/// One "l r" pair per line, blank lines ignored. Checks 1 <= l <= r <= n.
std::vector<QueryInterval> load_queries(const std::string& path, std::size_t n);

/// Answers `queries` in order with `mode`.
RunReport execute(const Dataset& data, const std::vector<QueryInterval>& queries, Mode mode,
                  std::optional<std::size_t> u_override = std::nullopt);

void write_report(const RunReport& report, Format format, std::ostream& out);

/// Exit status: 0 on success, 2 on any input or contract error.
int run(const RunConfig& config, std::ostream& err);

struct SweepConfig {
  std::vector<std::size_t> ns;
  std::vector<std::size_t> ks;
  std::vector<Mode> modes{Mode::offline};
  std::vector<std::uint64_t> seeds{1};
  bool hierarchical = false;
};

/// n * log2(k + 2) + k * log2(k + 2) * log2(n).
double normalizer(std::size_t n, std::size_t k);

/// CSV: n,k,mode,seed,build_comparisons,total_comparisons,ratio
void sweep(const SweepConfig& config, std::ostream& out);

/// Parses "n1,n2,...xk1,k2,..." into the two lists.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> parse_grid(const std::string& grid);

int main(int argc, char** argv);

}  // namespace rangemed::cli
