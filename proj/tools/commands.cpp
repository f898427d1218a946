#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "maxrs/approx_maxcrs.hpp"
#include "maxrs/datasets.hpp"
#include "maxrs/emstore.hpp"
#include "maxrs/exact_maxrs.hpp"
#include "maxrs/oracles.hpp"

namespace maxrs::cli {

namespace {

struct Options {
  std::size_t n = 1000;
  double extent = 0.0;
  std::string dist = "uniform";
  std::string weights = "unit";
  std::uint64_t seed = 1;
  std::string in;
  bool normalize = false;
  double d1 = 0.0;
  double d2 = 0.0;
  double diam = 0.0;
  std::optional<double> sigma;
  std::size_t block_records = 8;
  std::size_t mem_records = 128;
  std::size_t fanout = 0;
  std::string disk;
  std::string out;
  std::string csv;
  std::string axis = "n";
  std::vector<std::string> values;
  std::string problem = "maxrs";

  std::optional<std::size_t> n_flag;
};

struct Dataset {
  std::vector<WeightedObject> objects;
  double extent = 1.0;
};

class Failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lines go to stdout and, with --out, to a file as well.
class Report {
 public:
  void line(const std::string& key, const std::string& value) { text_ << key << ": " << value << '\n'; }
  void raw(const std::string& s) { text_ << s << '\n'; }
  std::string str() const { return text_.str(); }

  void emit(std::ostream& out, const std::string& path) const {
    out << text_.str();
    if (!path.empty()) {
      std::ofstream f(path, std::ios::binary | std::ios::trunc);
      if (!f) throw Failure("cannot write " + path);
      f << text_.str();
    }
  }

 private:
  std::ostringstream text_;
};

std::string num(double v) { return format_number(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }

std::string point_str(Point p) { return num(p.x) + " " + num(p.y); }

std::string io_str(const IOStats& io) {
  return "read=" + num(io.blocks_read) + " written=" + num(io.blocks_written) + " total=" + num(io.total());
}

Distribution parse_dist(const std::string& s) { return s == "gaussian" ? Distribution::kGaussian : Distribution::kUniform; }
WeightMode parse_weights(const std::string& s) { return s == "random" ? WeightMode::kRandomInt : WeightMode::kUnit; }

GenSpec spec_for(const Options& o, std::size_t n) {
  GenSpec s = GenSpec::scaled(n, o.seed, parse_dist(o.dist));
  if (o.extent > 0.0) s.extent = o.extent;
  s.weights = parse_weights(o.weights);
  return s;
}

Dataset load_dataset(const Options& o) {
  Dataset ds;
  if (o.in.empty()) {
    const GenSpec s = spec_for(o, o.n);
    ds.objects = generate_objects(s);
    ds.extent = s.extent;
    return ds;
  }
  std::ifstream probe(o.in, std::ios::binary);
  if (!probe) throw Failure("cannot open " + o.in);
  char magic[4] = {};
  probe.read(magic, 4);
  const bool binary = probe.gcount() == 4 && std::string(magic, 4) == "MXRS";
  probe.close();
  ds.objects = binary ? read_object_file(o.in) : parse_text_points(o.in, 1.0, o.normalize);
  if (o.extent > 0.0) {
    ds.extent = o.extent;
  } else if (!binary && o.normalize) {
    ds.extent = kNormalizedExtent;
  } else {
    double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x, lo_y = lo_x, hi_y = -lo_x;
    for (const auto& p : ds.objects) {
      lo_x = std::min(lo_x, p.x);
      hi_x = std::max(hi_x, p.x);
      lo_y = std::min(lo_y, p.y);
      hi_y = std::max(hi_y, p.y);
    }
    const double side = ds.objects.empty() ? 0.0 : std::max(hi_x - lo_x, hi_y - lo_y);
    ds.extent = side > 0.0 ? side : 1.0;
  }
  return ds;
}

EMConfig em_config(const Options& o, std::size_t mem_records) {
  EMConfig c{o.block_records, mem_records, o.fanout};
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw Failure(e.what());
  }
  return c;
}

std::unique_ptr<BlockStore> make_store(const Options& o, std::size_t mem_records) {
  const EMConfig c = em_config(o, mem_records);
  if (o.disk.empty()) return std::make_unique<BlockStore>(c);
  std::filesystem::create_directories(o.disk);
  return std::make_unique<BlockStore>(c, make_directory_storage(o.disk));
}

double rect_side(double given, double extent) { return given > 0.0 ? given : extent / 250.0; }

void add_dataset_flags(CLI::App* app, Options& o) {
  app->add_option("--n", o.n_flag, "Number of generated objects");
  app->add_option("--extent", o.extent, "Domain side; objects lie in [0, extent]^2 (default 4n)")
      ->check(CLI::PositiveNumber);
  app->add_option("--dist", o.dist, "Generated layout")->check(CLI::IsMember({"uniform", "gaussian"}));
  app->add_option("--weights", o.weights, "Object weights")->check(CLI::IsMember({"unit", "random"}));
  app->add_option("--seed", o.seed, "Generator seed");
  app->add_option("--in", o.in, "Object file (MXRS binary) or text points instead of generating")
      ->check(CLI::ExistingFile);
  app->add_flag("--normalize", o.normalize, "Scale text input onto [0, 1000000]^2");
}

void add_em_flags(CLI::App* app, Options& o) {
  app->add_option("--block-records", o.block_records, "Records per block (B)")->check(CLI::PositiveNumber);
  app->add_option("--mem-records", o.mem_records, "Records of memory (M)")->check(CLI::PositiveNumber);
  app->add_option("--fanout", o.fanout, "Slab fan-out m (default max(2, M/B - 2))");
  app->add_option("--disk", o.disk, "Keep simulated block files in this directory");
}

void add_rect_flags(CLI::App* app, Options& o) {
  app->add_option("--d1", o.d1, "Query rectangle width (default extent/250)")->check(CLI::PositiveNumber);
  app->add_option("--d2", o.d2, "Query rectangle height (default extent/250)")->check(CLI::PositiveNumber);
}

void add_circle_flags(CLI::App* app, Options& o) {
  app->add_option("--diam", o.diam, "Query circle diameter (default extent/250)")->check(CLI::PositiveNumber);
  app->add_option("--sigma", o.sigma, "Shifting distance (default sqrt(2)*diam/4)")->check(CLI::PositiveNumber);
}

std::optional<double> sigma_of(const Options& o) {
  return o.sigma;
}

void header_lines(Report& r, const char* algorithm, std::size_t n, const EMConfig& c) {
  r.line("algorithm", algorithm);
  r.line("n", std::to_string(n));
  r.line("B", std::to_string(c.block_records));
  r.line("M", std::to_string(c.memory_records));
  r.line("m", std::to_string(c.effective_fanout()));
}

int cmd_gen(const Options& o, std::ostream& out) {
  if (o.out.empty()) throw Failure("gen requires --out");
  const GenSpec s = spec_for(o, o.n);
  const auto objects = generate_objects(s);
  save_objects(o.out, objects, kGeneratorMt19937_64);
  Report r;
  r.line("wrote", std::to_string(objects.size()) + " objects");
  r.line("extent", num(s.extent));
  r.line("seed", std::to_string(s.seed));
  r.emit(out, "");
  return 0;
}

int cmd_maxrs(const Options& o, std::ostream& out) {
  const Dataset ds = load_dataset(o);
  auto store = make_store(o, o.mem_records);
  const double d1 = rect_side(o.d1, ds.extent);
  const double d2 = rect_side(o.d2, ds.extent);
  const auto file = write_all<WeightedObject>(*store, ds.objects);
  const MaxRSResult res = solve_maxrs(*store, file, d1, d2);

  Report r;
  header_lines(r, "exact_maxrs", ds.objects.size(), store->config());
  r.line("d1", num(d1));
  r.line("d2", num(d2));
  r.line("point", point_str(res.point));
  r.line("value", num(res.region.sum));
  r.line("region", num(res.region.x1) + " " + num(res.region.x2) + " " + num(res.region.y1) + " " +
                       num(res.region.y2));
  r.line("io_sort", io_str(res.sort_io));
  r.line("io_sweep", io_str(res.sweep_io));
  r.line("io_total", num(res.sort_io.total() + res.sweep_io.total()));
  r.line("depth", std::to_string(res.stats.depth));
  r.line("memory_high_water", std::to_string(res.memory_high_water));
  r.emit(out, o.out);
  return 0;
}

int cmd_maxcrs(const Options& o, std::ostream& out) {
  const Dataset ds = load_dataset(o);
  auto store = make_store(o, o.mem_records);
  const double d = rect_side(o.diam, ds.extent);
  const auto file = write_all<WeightedObject>(*store, ds.objects);
  const CrsAnswer ans = approx_maxcrs(*store, file, d, sigma_of(o));

  Report r;
  header_lines(r, "approx_maxcrs", ds.objects.size(), store->config());
  r.line("diam", num(d));
  r.line("sigma", num(ans.sigma));
  r.line("point", point_str(ans.point));
  r.line("value", num(ans.value));
  for (std::size_t i = 0; i < ans.candidates.size(); ++i) {
    r.line("candidate_p" + std::to_string(i), point_str(ans.candidates[i].point) + " value=" +
                                                  num(ans.candidates[i].value));
  }
  r.line("io_sort", io_str(ans.sort_io));
  r.line("io_sweep", io_str(ans.sweep_io));
  r.line("io_scan", io_str(ans.scan_io));
  r.line("io_total", num(ans.sort_io.total() + ans.sweep_io.total() + ans.scan_io.total()));
  r.emit(out, o.out);
  return 0;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  const Dataset ds = load_dataset(o);
  Report r;
  r.line("n", std::to_string(ds.objects.size()));
  if (o.problem == "maxrs") {
    const double d1 = rect_side(o.d1, ds.extent);
    const double d2 = rect_side(o.d2, ds.extent);
    const OracleAnswer a = brute_maxrs(ds.objects, d1, d2);
    r.line("algorithm", "brute_maxrs");
    r.line("d1", num(d1));
    r.line("d2", num(d2));
    r.line("point", point_str(a.point));
    r.line("value", num(a.value));
  } else {
    const double d = rect_side(o.diam, ds.extent);
    const OracleAnswer a = brute_maxcrs(ds.objects, d);
    r.line("algorithm", "brute_maxcrs");
    r.line("diam", num(d));
    r.line("point", point_str(a.point));
    r.line("value", num(a.value));
  }
  r.emit(out, o.out);
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
  Options vo = o;
  if (!o.n_flag) vo.n = 150;
  const Dataset ds = load_dataset(vo);
  auto store = make_store(vo, vo.mem_records);
  const double d1 = rect_side(vo.d1, ds.extent);
  const double d2 = rect_side(vo.d2, ds.extent);
  const double d = rect_side(vo.diam, ds.extent);
  const auto file = write_all<WeightedObject>(*store, ds.objects);

  Report r;
  bool ok = true;
  auto check = [&](const std::string& name, bool pass, const std::string& detail) {
    r.line("check " + name, std::string(pass ? "ok" : "MISMATCH") + " (" + detail + ")");
    ok = ok && pass;
  };

  header_lines(r, "verify", ds.objects.size(), store->config());
  const MaxRSResult exact = solve_maxrs(*store, file, d1, d2);
  const OracleAnswer rs = brute_maxrs(ds.objects, d1, d2);
  std::vector<WeightedRect> rects;
  for (const auto& ob : ds.objects) rects.push_back(rect_of_object(ob, d1, d2));
  const double realized = location_weight(rects, exact.point);
  check("maxrs_value", exact.region.sum == rs.value, "exact=" + num(exact.region.sum) + " oracle=" + num(rs.value));
  check("maxrs_point", realized == exact.region.sum,
        "weight at point=" + num(realized) + " reported=" + num(exact.region.sum));
  check("memory", exact.memory_high_water <= store->config().memory_ceiling(),
        "high_water=" + std::to_string(exact.memory_high_water) +
            " ceiling=" + std::to_string(store->config().memory_ceiling()));

  const CrsAnswer crs = approx_maxcrs(*store, file, d, sigma_of(vo));
  const OracleAnswer cs = brute_maxcrs(ds.objects, d);
  const double ratio = cs.value > 0.0 ? crs.value / cs.value : 1.0;
  check("maxcrs_ratio", crs.value >= 0.25 * cs.value && crs.value <= cs.value,
        "approx=" + num(crs.value) + " oracle=" + num(cs.value) + " ratio=" + num(ratio));
  if (!ds.objects.empty()) {
    const ShiftAudit audit = audit_shifted_cover(ds.objects, crs.candidates[0].point, d, crs.sigma);
    check("shift_cover", audit.uncovered == 0,
          std::to_string(audit.uncovered) + " of " + std::to_string(audit.square_objects) + " uncovered");
    check("shift_bound", audit.four_times_bound,
          "square=" + num(audit.square_weight) + " best_shifted=" + num(audit.best_shifted));
  }
  r.line("result", ok ? "PASS" : "FAIL");
  r.emit(out, o.out);
  return ok ? 0 : 1;
}

std::vector<double> parse_values(const std::vector<std::string>& raw) {
  std::vector<double> vals;
  for (const auto& s : raw) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || !(v > 0.0)) throw Failure("bad --values entry '" + s + "'");
    vals.push_back(v);
  }
  return vals;
}

struct BenchRow {
  std::string algorithm;
  std::size_t n = 0;
  std::size_t B = 0;
  std::size_t M = 0;
  double range = 0.0;
  std::uint64_t io_sort = 0;
  std::uint64_t io_sweep = 0;
  double answer = 0.0;
  double wall_ms = 0.0;

  std::string csv() const {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", wall_ms);
    return algorithm + "," + std::to_string(n) + "," + std::to_string(B) + "," + std::to_string(M) + "," +
           num(range) + "," + num(io_sort) + "," + num(io_sweep) + "," + num(io_sort + io_sweep) + "," +
           num(answer) + "," + ms;
  }
};

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

BenchRow bench_exact(const Options& o, const std::vector<WeightedObject>& objects, std::size_t M, double d1,
                     double d2) {
  auto store = make_store(o, M);
  const auto file = write_all<WeightedObject>(*store, objects);
  const auto t0 = std::chrono::steady_clock::now();
  const MaxRSResult res = solve_maxrs(*store, file, d1, d2);
  return {"exact_maxrs", objects.size(), o.block_records, M, d1, res.sort_io.total(), res.sweep_io.total(),
          res.region.sum, elapsed_ms(t0)};
}

int cmd_bench(const Options& o, std::ostream& out) {
  std::vector<double> values = parse_values(o.values);
  const double base_extent = o.extent > 0.0 ? o.extent : GenSpec::scaled(o.n).extent;
  if (values.empty()) {
    if (o.axis == "n") values = {1000, 2000, 5000, 10000, 20000};
    if (o.axis == "buffer") values = {128, 256, 512, 1024};
    if (o.axis == "range" || o.axis == "diam") {
      for (double f : {1000.0, 500.0, 250.0, 100.0, 50.0}) values.push_back(base_extent / f);
    }
  }

  std::vector<BenchRow> rows;
  for (double v : values) {
    if (o.axis == "n") {
      const GenSpec s = spec_for(o, static_cast<std::size_t>(v));
      const auto objects = generate_objects(s);
      rows.push_back(bench_exact(o, objects, o.mem_records, rect_side(o.d1, s.extent), rect_side(o.d2, s.extent)));
    } else if (o.axis == "buffer") {
      const GenSpec s = spec_for(o, o.n);
      const auto objects = generate_objects(s);
      rows.push_back(bench_exact(o, objects, static_cast<std::size_t>(v), rect_side(o.d1, s.extent),
                                 rect_side(o.d2, s.extent)));
    } else if (o.axis == "range") {
      const GenSpec s = spec_for(o, o.n);
      const auto objects = generate_objects(s);
      rows.push_back(bench_exact(o, objects, o.mem_records, v, v));
    } else {
      const GenSpec s = spec_for(o, o.n);
      const auto objects = generate_objects(s);
      auto store = make_store(o, o.mem_records);
      const auto file = write_all<WeightedObject>(*store, objects);
      auto t0 = std::chrono::steady_clock::now();
      const CrsAnswer ans = approx_maxcrs(*store, file, v, sigma_of(o));
      rows.push_back({"approx_maxcrs", objects.size(), o.block_records, o.mem_records, v, ans.sort_io.total(),
                      ans.sweep_io.total() + ans.scan_io.total(), ans.value, elapsed_ms(t0)});
      if (objects.size() <= 400) {
        t0 = std::chrono::steady_clock::now();
        const OracleAnswer best = brute_maxcrs(objects, v);
        rows.push_back({"brute_maxcrs", objects.size(), o.block_records, o.mem_records, v, 0, 0, best.value,
                        elapsed_ms(t0)});
      }
    }
  }

  if (!o.csv.empty()) {
    const bool fresh = !std::filesystem::exists(o.csv) || std::filesystem::file_size(o.csv) == 0;
    std::ofstream f(o.csv, std::ios::binary | std::ios::app);
    if (!f) throw Failure("cannot write " + o.csv);
    if (fresh) f << kCsvHeader << '\n';
    for (const auto& row : rows) f << row.csv() << '\n';
  }
  out << kCsvHeader << '\n';
  for (const auto& row : rows) out << row.csv() << '\n';
  return 0;
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"External-memory MaxRS / MaxCRS solver", "maxrs"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Generate a synthetic object file");
  add_dataset_flags(gen, o);
  gen->add_option("--out", o.out, "Output object file")->required();

  auto* maxrs = app.add_subcommand("maxrs", "Exact rectangle solver");
  add_dataset_flags(maxrs, o);
  add_em_flags(maxrs, o);
  add_rect_flags(maxrs, o);
  maxrs->add_option("--out", o.out, "Also write the report here");

  auto* maxcrs = app.add_subcommand("maxcrs", "Approximate circle solver");
  add_dataset_flags(maxcrs, o);
  add_em_flags(maxcrs, o);
  add_circle_flags(maxcrs, o);
  maxcrs->add_option("--out", o.out, "Also write the report here");

  auto* oracle = app.add_subcommand("oracle", "Brute-force ground truth");
  add_dataset_flags(oracle, o);
  add_rect_flags(oracle, o);
  add_circle_flags(oracle, o);
  oracle->add_option("--problem", o.problem, "maxrs or maxcrs")->check(CLI::IsMember({"maxrs", "maxcrs"}));
  oracle->add_option("--out", o.out, "Also write the report here");

  auto* verify = app.add_subcommand("verify", "Check both solvers against the oracles");
  add_dataset_flags(verify, o);
  add_em_flags(verify, o);
  add_rect_flags(verify, o);
  add_circle_flags(verify, o);
  verify->add_option("--out", o.out, "Also write the report here");

  auto* bench = app.add_subcommand("bench", "Sweep one parameter and emit CSV rows");
  add_dataset_flags(bench, o);
  add_em_flags(bench, o);
  add_rect_flags(bench, o);
  add_circle_flags(bench, o);
  bench->add_option("--axis", o.axis, "Parameter to vary")->check(CLI::IsMember({"n", "buffer", "range", "diam"}));
  bench->add_option("--values", o.values, "Comma-separated values for the axis")->delimiter(',');
  bench->add_option("--csv", o.csv, "Append rows to this CSV file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  if (o.n_flag) o.n = *o.n_flag;

  try {
    if (gen->parsed()) return cmd_gen(o, out);
    if (maxrs->parsed()) return cmd_maxrs(o, out);
    if (maxcrs->parsed()) return cmd_maxcrs(o, out);
    if (oracle->parsed()) return cmd_oracle(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    return cmd_bench(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace maxrs::cli
