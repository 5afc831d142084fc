#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "frx/analytics.hpp"
#include "frx/constructors.hpp"
#include "frx/cover.hpp"
#include "frx/estimators.hpp"
#include "frx/frx_format.hpp"

namespace frx {

namespace {

struct StageRange {
  int first = 0;
  int last = 0;
};

StageRange parse_stages(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) fail(ErrorKind::kParse, "");
    std::size_t used = 0;
    const std::string a = text.substr(0, dots);
    const std::string b = text.substr(dots + 2);
    StageRange range{std::stoi(a, &used), 0};
    if (used != a.size()) fail(ErrorKind::kParse, "");
    range.last = std::stoi(b, &used);
    if (used != b.size()) fail(ErrorKind::kParse, "");
    if (range.first < 0 || range.last < range.first) fail(ErrorKind::kParse, "");
    return range;
  } catch (const std::exception&) {
    fail(ErrorKind::kParse, "stage range must look like A..B with 0 <= A <= B, got '" + text + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kParse, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) fail(ErrorKind::kParse, "cannot write " + path);
  file << content;
  if (!file) fail(ErrorKind::kParse, "failed writing " + path);
}

Expr load(const std::string& path) { return parse_frx(read_file(path)); }

std::string endpoint_text(const Scalar& x) {
  return x.is_rational() ? to_string(x.rational()) : x.decimal(kDefaultDigits);
}

std::string cover_csv(const BoxCover& cover) {
  std::string csv;
  for (int axis = 0; axis < cover.dim; ++axis) {
    if (axis > 0) csv += ",";
    csv += "x" + std::to_string(axis) + "_lo,x" + std::to_string(axis) + "_hi";
  }
  csv += "\n";
  for (const Box& box : cover.boxes) {
    for (std::size_t axis = 0; axis < box.size(); ++axis) {
      if (axis > 0) csv += ",";
      csv += endpoint_text(box[axis].lo) + "," + endpoint_text(box[axis].hi);
    }
    csv += "\n";
  }
  return csv;
}

/// Pixel span [first, last] covered by [lo, hi] on a grid of `count` cells
/// of width `width` starting at `origin`, using the box-count convention.
std::pair<long, long> pixel_span(const Interval& side, const Scalar& origin, const Scalar& width, long count) {
  long first = floor_of((side.lo - origin) / width).value.get_si();
  long last = ceil_of((side.hi - origin) / width).value.get_si() - 1;
  last = std::max(last, first);
  return {std::clamp(first, 0L, count - 1), std::clamp(last, 0L, count - 1)};
}

std::string render_pgm(const BoxCover& cover, int resolution) {
  if (cover.dim != 1 && cover.dim != 2) {
    fail(ErrorKind::kWrongDimension, "render supports 1-D and 2-D sets, got dimension " + std::to_string(cover.dim));
  }
  const long width = resolution;
  const long height = cover.dim == 2 ? resolution : std::max(1, resolution / 8);
  std::vector<unsigned char> pixels(static_cast<std::size_t>(width * height), 255);
  if (!cover.boxes.empty()) {
    const Box frame = hull(cover.boxes);
    auto cell = [&](std::size_t axis) {
      const Scalar side = frame[axis].length();
      return (side.sign() > 0 ? side : Scalar(1)) / Scalar(resolution);
    };
    const Scalar cell_x = cell(0);
    const Scalar cell_y = cover.dim == 2 ? cell(1) : Scalar(1);
    for (const Box& box : cover.boxes) {
      const auto [x0, x1] = pixel_span(box[0], frame[0].lo, cell_x, width);
      std::pair<long, long> rows{0, height - 1};
      if (cover.dim == 2) {
        const auto [y0, y1] = pixel_span(box[1], frame[1].lo, cell_y, height);
        rows = {height - 1 - y1, height - 1 - y0};
      }
      for (long row = rows.first; row <= rows.second; ++row) {
        std::fill(pixels.begin() + row * width + x0, pixels.begin() + row * width + x1 + 1, 0);
      }
    }
  }
  std::string pgm = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  pgm.append(pixels.begin(), pixels.end());
  return pgm;
}

std::string format_double(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.15f", x);
  const std::string text = buffer;
  if (text.find_first_not_of("-0.") == std::string::npos) return text.substr(text.front() == '-');
  return text;
}

void report_eval(const Expr& expr, const std::string& format, std::ostream& out) {
  const DimReport report = is_fractal(expr);
  if (format == "json") {
    nlohmann::ordered_json doc;
    doc["hausdorff_dim"] = report.hausdorff_dim.value.str();
    doc["hausdorff_dim_decimal"] = report.hausdorff_dim.value.decimal(20);
    doc["hausdorff_dim_exact"] = report.hausdorff_dim.exact;
    doc["inductive_dim"] = report.inductive_dim;
    doc["measure"] = {{"lo", report.lebesgue_measure.lo.str()}, {"hi", report.lebesgue_measure.hi.str()}};
    doc["measure_exact"] = report.lebesgue_measure.is_exact();
    doc["is_fractal"] = report.is_fractal;
    doc["trace"] = report.trace;
    out << doc.dump(2) << "\n";
    return;
  }
  out << "hausdorff_dim: " << report.hausdorff_dim.str() << " (~" << report.hausdorff_dim.value.decimal(20)
      << ")\n";
  out << "inductive_dim: " << report.inductive_dim << "\n";
  out << "measure: " << report.lebesgue_measure.str() << "\n";
  out << "fractal: " << (report.is_fractal ? "true" : "false") << "\n";
  out << "trace:\n";
  for (const std::string& line : report.trace) out << "  " << line << "\n";
}

void report_fit(const FitReport& fit, std::ostream& out) {
  out << "stage,epsilon,count,log_inv_epsilon,log_count,ratio\n";
  for (const FitPoint& p : fit.points) {
    out << p.stage << "," << p.epsilon.str() << "," << p.count << "," << format_double(p.log_inv_epsilon) << ","
        << format_double(p.log_count) << "," << format_double(p.ratio) << "\n";
  }
  out << "slope: " << format_double(fit.slope) << "\n";
  out << "intercept: " << format_double(fit.intercept) << "\n";
  out << "residual: " << format_double(fit.residual) << "\n";
}

struct ConstructArgs {
  std::string kind;
  std::string r;
  std::string l;
  int n = 1;
  int s0 = 1;
  std::vector<std::string> index;
  std::uint64_t seed = 0;
  int truncate = kDefaultTruncation;
  std::string emit;
};

Expr build(const ConstructArgs& args, const CLI::App& cmd) {
  auto rational_flag = [&](const std::string& name, const std::string& text) {
    if (cmd.count("--" + name) == 0) fail(ErrorKind::kParse, args.kind + " needs --" + name);
    return parse_rational(text);
  };
  std::vector<IndexSet> sets;
  for (const std::string& text : args.index) sets.push_back(parse_index_set(text));
  if (args.kind == "nonfractal") return nonfractal_family(args.n, args.seed);
  const Rational r = rational_flag("r", args.r);
  const Rational l = rational_flag("l", args.l);
  if (args.kind == "lemma31") return lemma31(r, l, args.s0, args.truncate);
  if (args.kind == "lemma32") {
    if (sets.size() > 1) fail(ErrorKind::kWrongDimension, "lemma32 takes a single --index");
    return lemma32(r, l, sets.empty() ? IndexSet::naturals() : sets.front(), args.truncate);
  }
  if (sets.size() == 1) sets.assign(static_cast<std::size_t>(std::max(args.n, 1)), sets.front());
  if (args.kind == "lemma33") {
    if (sets.empty()) sets.assign(static_cast<std::size_t>(std::max(args.n, 1)), IndexSet::naturals());
    return lemma33(r, l, args.n, sets, args.truncate);
  }
  ConstructionRequest request;
  request.r = r;
  request.l = l;
  request.n = args.n;
  request.s0 = args.s0;
  request.index_sets = sets;
  request.prune_seed = args.seed;
  request.truncation = args.truncate;
  return thm34(request);
}

int exit_code(const Error& err) {
  switch (err.kind()) {
    case ErrorKind::kInfeasible:
      return kExitInfeasible;
    case ErrorKind::kCapExceeded:
      return kExitCap;
    default:
      return kExitInvalid;
  }
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Construct, analyze and verify uniform Cantor-type sets."};
  app.require_subcommand(1);

  std::string file;
  std::string report_format = "text";
  auto* eval = app.add_subcommand("eval", "Analytic dimension, measure and fractal verdict");
  eval->add_option("FILE", file, ".frx expression")->required();
  eval->add_option("--report", report_format, "Output format")->check(CLI::IsMember({"json", "text"}));

  ConstructArgs cargs;
  auto* construct = app.add_subcommand("construct", "Build a set with prescribed dimension and measure");
  construct->add_option("KIND", cargs.kind, "Construction")
      ->required()
      ->check(CLI::IsMember({"lemma31", "lemma32", "lemma33", "thm34", "nonfractal"}));
  construct->add_option("--r", cargs.r, "Target Hausdorff dimension");
  construct->add_option("--l", cargs.l, "Target Lebesgue measure");
  construct->add_option("--n", cargs.n, "Ambient dimension");
  construct->add_option("--s0", cargs.s0, "Cantor order");
  construct->add_option("--index", cargs.index, "Index set, repeated per axis");
  construct->add_option("--seed", cargs.seed, "Prune seed");
  construct->add_option("--truncate", cargs.truncate, "Indexed union truncation");
  construct->add_option("--emit", cargs.emit, "Output .frx file")->required();

  int stage = 0;
  std::string out_path;
  auto* cover = app.add_subcommand("cover", "Write a stage cover as CSV");
  cover->add_option("FILE", file, ".frx expression")->required();
  cover->add_option("--stage", stage, "Stage")->required()->check(CLI::NonNegativeNumber);
  cover->add_option("--out", out_path, "CSV output")->required();

  std::string stages;
  std::string grid = "natural";
  auto* boxdim = app.add_subcommand("boxdim", "Box-counting slope over a stage range");
  boxdim->add_option("FILE", file, ".frx expression")->required();
  boxdim->add_option("--stages", stages, "Stage range A..B")->required();
  boxdim->add_option("--grid", grid, "Grid scales")->check(CLI::IsMember({"natural", "dyadic"}));

  double tolerance = kDefaultTolerance;
  auto* verify_cmd = app.add_subcommand("verify", "Check cover invariants against the analytics");
  verify_cmd->add_option("FILE", file, ".frx expression")->required();
  verify_cmd->add_option("--stages", stages, "Stage range A..B")->required();
  verify_cmd->add_option("--tol", tolerance, "Numeric tolerance")->check(CLI::NonNegativeNumber);

  int resolution = 0;
  auto* render = app.add_subcommand("render", "Rasterize a stage cover as binary PGM");
  render->add_option("FILE", file, ".frx expression")->required();
  render->add_option("--stage", stage, "Stage")->required()->check(CLI::NonNegativeNumber);
  render->add_option("--resolution", resolution, "Pixels per side")->required()->check(CLI::Range(1, 1 << 14));
  render->add_option("--out", out_path, "PGM output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*eval) {
      report_eval(load(file), report_format, out);
    } else if (*construct) {
      write_file(cargs.emit, emit_frx(build(cargs, *construct)));
    } else if (*cover) {
      write_file(out_path, cover_csv(expr_stage_cover(load(file), stage)));
    } else if (*boxdim) {
      const StageRange range = parse_stages(stages);
      const Expr expr = load(file);
      report_fit(box_dim_fit(expr, range.first, range.last, grid == "dyadic" ? GridMode::kDyadic : GridMode::kNatural),
                 out);
    } else if (*verify_cmd) {
      const StageRange range = parse_stages(stages);
      const VerifyReport report = verify(load(file), range.first, range.last, tolerance);
      out << report.str();
      return report.passed() ? kExitOk : kExitCheckFailed;
    } else if (*render) {
      write_file(out_path, render_pgm(expr_stage_cover(load(file), stage), resolution));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e);
  }
  return kExitOk;
}

}  // namespace frx
