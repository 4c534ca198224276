#include "rangemed/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

namespace rangemed::cli {
namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int precision) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  return in;
}

}  // namespace

std::optional<Mode> parse_mode(const std::string& s) {
  if (s == "offline") return Mode::offline;
  if (s == "online-known-k") return Mode::online_known_k;
  if (s == "online") return Mode::online;
  if (s == "slow") return Mode::slow;
  if (s == "oracle") return Mode::oracle;
  return std::nullopt;
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::offline: return "offline";
    case Mode::online_known_k: return "online-known-k";
    case Mode::online: return "online";
    case Mode::slow: return "slow";
    case Mode::oracle: return "oracle";
  }
  return "?";
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = trim(line);
    double v = 0;
    if (!parse_number(t, v)) {
      throw InputError(path + ":" + std::to_string(line_no) + ": not a number: '" + line + "'");
    }
    if (!std::isfinite(v)) {
      throw InputError(path + ":" + std::to_string(line_no) + ": non-finite value");
    }
    values.push_back(v);
  }
  if (values.empty()) throw InputError(path + ": no values");
  return Dataset(values);
}

std::vector<QueryInterval> load_queries(const std::string& path, std::size_t n) {
  std::ifstream in = open_input(path);
  std::vector<QueryInterval> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = trim(line);
    if (t.empty()) continue;
    const auto space = t.find_first_of(" \t");
    std::size_t l = 0;
    std::size_t r = 0;
    if (space == std::string_view::npos || !parse_number(t.substr(0, space), l) ||
        !parse_number(trim(t.substr(space)), r)) {
      throw InputError(path + ":" + std::to_string(line_no) + ": malformed query '" + line + "'");
    }
    if (l < 1 || l > r || r > n) {
      throw InputError(path + ":" + std::to_string(line_no) + ": query [" + std::to_string(l) +
                       ", " + std::to_string(r) + "] outside [1, " + std::to_string(n) + "]");
    }
    out.push_back({l, r});
  }
  return out;
}

RunReport execute(const Dataset& data, const std::vector<QueryInterval>& queries, Mode mode,
                  std::optional<std::size_t> u_override) {
  RunReport report;
  ComparisonLedger build;
  std::vector<ComparisonLedger> per_query(queries.size());
  std::vector<Element> answers;
  answers.reserve(queries.size());
  const std::size_t k = std::max<std::size_t>(queries.size(), 1);
  switch (mode) {
    case Mode::offline: {
      const std::size_t u = u_override ? std::min(*u_override, data.size()) : relaxation_for(k, data.size());
      const MergeTree tree(data, decompose(data.size(), queries), std::max<std::size_t>(u, 1), build);
      for (std::size_t i = 0; i < queries.size(); ++i) {
        answers.push_back(query_offline(tree, queries[i], per_query[i]));
      }
      break;
    }
    case Mode::online_known_k: {
      const OnlineEngine engine(data, k, build, u_override.value_or(0));
      for (std::size_t i = 0; i < queries.size(); ++i) {
        answers.push_back(query_online_known_k(engine, queries[i], per_query[i]));
      }
      break;
    }
    case Mode::online: {
      OnlineEngine engine(data, build);
      for (std::size_t i = 0; i < queries.size(); ++i) {
        answers.push_back(query_online(engine, queries[i], per_query[i]));
      }
      break;
    }
    case Mode::slow:
      answers = query_slow(data, queries, build, per_query);
      break;
    case Mode::oracle:
      for (const QueryInterval& q : queries) answers.push_back(oracle_median(data, q));
      break;
  }
  report.build_comparisons = build.count();
  report.total_comparisons = build.count();
  for (std::size_t i = 0; i < queries.size(); ++i) {
    report.rows.push_back({queries[i], answers[i], per_query[i].count()});
    report.total_comparisons += per_query[i].count();
  }
  return report;
}

void write_report(const RunReport& report, Format format, std::ostream& out) {
  if (format == Format::csv) {
    out << "query_index,l,r,median_value,median_original_index,comparisons_this_query\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      const QueryRow& row = report.rows[i];
      out << i << ',' << row.q.l << ',' << row.q.r << ',' << format_double(row.median.value) << ','
          << row.median.index << ',' << row.comparisons << '\n';
    }
    out << "build_comparisons," << report.build_comparisons << ",total_comparisons,"
        << report.total_comparisons << ",,\n";
    return;
  }
  out << std::setw(8) << "query" << std::setw(10) << "l" << std::setw(10) << "r" << std::setw(16)
      << "median" << std::setw(10) << "index" << std::setw(14) << "comparisons" << '\n';
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const QueryRow& row = report.rows[i];
    out << std::setw(8) << i << std::setw(10) << row.q.l << std::setw(10) << row.q.r
        << std::setw(16) << format_double(row.median.value) << std::setw(10) << row.median.index
        << std::setw(14) << row.comparisons << '\n';
  }
  out << "build comparisons: " << report.build_comparisons << '\n'
      << "total comparisons: " << report.total_comparisons << '\n';
}

int run(const RunConfig& config, std::ostream& err) {
  try {
    const bool from_files = config.data_path.has_value() || config.query_path.has_value();
    if (from_files == config.workload.has_value()) {
      throw InputError("give either --data and --queries, or a generated workload");
    }
    Dataset data;
    std::vector<QueryInterval> queries;
    if (from_files) {
      if (!config.data_path || !config.query_path) {
        throw InputError("--data and --queries must be given together");
      }
      data = load_dataset(*config.data_path);
      queries = load_queries(*config.query_path, data.size());
    } else {
      Instance inst = generate(*config.workload);
      data = std::move(inst.dataset);
      queries = std::move(inst.queries);
    }
    if (config.u_override && *config.u_override < 1) throw InputError("--u must be >= 1");
    const RunReport report = execute(data, queries, config.mode, config.u_override);
    if (config.output_path) {
      std::ofstream out(*config.output_path);
      if (!out) throw InputError("cannot write " + *config.output_path);
      write_report(report, config.format, out);
    } else {
      write_report(report, config.format, std::cout);
    }
    return 0;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << '\n';
  }
  return 2;
}

double normalizer(std::size_t n, std::size_t k) {
  const double lk = std::log2(static_cast<double>(k) + 2.0);
  return static_cast<double>(n) * lk + static_cast<double>(k) * lk * std::log2(static_cast<double>(n));
}

void sweep(const SweepConfig& config, std::ostream& out) {
  if (config.ns.empty() || config.ks.empty()) throw InputError("sweep grid is empty");
  out << "n,k,mode,seed,build_comparisons,total_comparisons,ratio\n";
  for (std::size_t n : config.ns) {
    for (std::size_t k : config.ks) {
      for (Mode mode : config.modes) {
        for (std::uint64_t seed : config.seeds) {
          Workload w;
          w.n = n;
          w.k = k;
          w.data_seed = seed;
          w.query_seed = seed + 0x9e3779b9ULL;
          w.nesting = config.hierarchical ? Nesting::hierarchical : Nesting::random;
          const Instance inst = generate(w);
          const RunReport r = execute(inst.dataset, inst.queries, mode);
          out << n << ',' << k << ',' << mode_name(mode) << ',' << seed << ','
              << r.build_comparisons << ',' << r.total_comparisons << ','
              << format_fixed(static_cast<double>(r.total_comparisons) / normalizer(n, k), 6) << '\n';
        }
      }
    }
  }
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> parse_grid(const std::string& grid) {
  const auto x = grid.find('x');
  if (x == std::string::npos) throw InputError("sweep grid must look like 'n1,n2xk1,k2'");
  auto list = [&](std::string_view s) {
    std::vector<std::size_t> out;
    std::size_t start = 0;
    while (start <= s.size()) {
      const auto comma = s.find(',', start);
      const std::string_view item = trim(s.substr(start, comma == std::string_view::npos ? s.size() - start : comma - start));
      std::size_t v = 0;
      if (!parse_number(item, v) || v == 0) {
        throw InputError("bad sweep grid entry '" + std::string(item) + "'");
      }
      out.push_back(v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return out;
  };
  const std::string_view g(grid);
  return {list(g.substr(0, x)), list(g.substr(x + 1))};
}

int main(int argc, char** argv) {
  CLI::App app{"Batched range-median queries with comparison counting"};
  std::string mode = "offline";
  std::string format = "csv";
  std::optional<std::string> data_path;
  std::optional<std::string> query_path;
  std::optional<std::string> out_path;
  std::optional<std::size_t> gen_n;
  std::optional<std::size_t> gen_k;
  std::uint64_t gen_seed = 1;
  double gen_dup = 0.0;
  bool hierarchical = false;
  std::optional<std::size_t> u;
  std::optional<std::string> grid;
  std::string sweep_modes = "offline";
  std::size_t sweep_seeds = 1;

  app.add_option("--mode", mode, "offline | online-known-k | online | slow | oracle");
  app.add_option("--data", data_path, "dataset file, one value per line");
  app.add_option("--queries", query_path, "query file, one 'l r' pair per line");
  app.add_option("--gen-n", gen_n, "generated dataset size");
  app.add_option("--gen-k", gen_k, "generated query count");
  app.add_option("--gen-seed", gen_seed, "generator seed");
  app.add_option("--gen-dup", gen_dup, "generated duplicate rate in [0, 1]");
  app.add_flag("--hierarchical", hierarchical, "generate nested-or-disjoint queries");
  app.add_option("--u", u, "override the relaxation parameter");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--format", format, "csv | human");
  app.add_option("--sweep-grid", grid, "run a sweep over 'n1,n2,...xk1,k2,...'");
  app.add_option("--sweep-modes", sweep_modes, "comma separated modes for --sweep-grid");
  app.add_option("--sweep-seeds", sweep_seeds, "seeds 1..N for --sweep-grid");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (grid) {
      SweepConfig sc;
      std::tie(sc.ns, sc.ks) = parse_grid(*grid);
      sc.modes.clear();
      std::stringstream ms(sweep_modes);
      std::string item;
      while (std::getline(ms, item, ',')) {
        const auto m = parse_mode(std::string(trim(item)));
        if (!m) throw InputError("unknown mode '" + item + "'");
        sc.modes.push_back(*m);
      }
      sc.seeds.clear();
      for (std::uint64_t s = 1; s <= sweep_seeds; ++s) sc.seeds.push_back(s);
      sc.hierarchical = hierarchical;
      if (out_path) {
        std::ofstream out(*out_path);
        if (!out) throw InputError("cannot write " + *out_path);
        sweep(sc, out);
      } else {
        sweep(sc, std::cout);
      }
      return 0;
    }

    RunConfig config;
    const auto m = parse_mode(mode);
    if (!m) throw InputError("unknown mode '" + mode + "'");
    config.mode = *m;
    if (format == "csv") {
      config.format = Format::csv;
    } else if (format == "human") {
      config.format = Format::human;
    } else {
      throw InputError("unknown format '" + format + "'");
    }
    config.u_override = u;
    config.data_path = data_path;
    config.query_path = query_path;
    config.output_path = out_path;
    if (gen_n || gen_k) {
      if (!gen_n || !gen_k) throw InputError("--gen-n and --gen-k must be given together");
      Workload w;
      w.n = *gen_n;
      w.k = *gen_k;
      w.data_seed = gen_seed;
      w.query_seed = gen_seed + 0x9e3779b9ULL;
      w.duplicate_rate = gen_dup;
      w.nesting = hierarchical ? Nesting::hierarchical : Nesting::random;
      config.workload = w;
    }
    return run(config, std::cerr);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 2;
}

}  // namespace rangemed::cli
