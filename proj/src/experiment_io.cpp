#include "sps/experiment_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "sps/bounds.hpp"
#include "sps/errors.hpp"

namespace sps {

namespace {

std::string trim(const std::string& s) {
  std::size_t first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  std::size_t last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw DataFileError("plan key '" + key + "': not a number: '" + value + "'");
  }
  if (pos != value.size()) {
    throw DataFileError("plan key '" + key + "': not a number: '" + value + "'");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &pos);
  } catch (const std::exception&) {
    throw DataFileError("plan key '" + key + "': not an integer: '" + value + "'");
  }
  if (pos != value.size()) {
    throw DataFileError("plan key '" + key + "': not an integer: '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw DataFileError("plan key '" + key + "': expected true/false");
}

std::vector<int> parse_grid(const std::string& value) {
  std::vector<int> grid;
  auto parse_entry = [&](const std::string& entry) {
    const std::string e = trim(entry);
    const auto c1 = e.find(':');
    if (c1 == std::string::npos) {
      grid.push_back(static_cast<int>(parse_int("n_grid", e)));
      return;
    }
    const auto c2 = e.find(':', c1 + 1);
    const int lo = static_cast<int>(parse_int("n_grid", e.substr(0, c1)));
    const int hi = static_cast<int>(parse_int(
        "n_grid", c2 == std::string::npos ? e.substr(c1 + 1)
                                          : e.substr(c1 + 1, c2 - c1 - 1)));
    const int step =
        c2 == std::string::npos
            ? 1
            : static_cast<int>(parse_int("n_grid", e.substr(c2 + 1)));
    if (step < 1) throw DataFileError("n_grid step must be >= 1");
    if (hi < lo) throw DataFileError("n_grid range must be increasing");
    for (int n = lo; n <= hi; n += step) grid.push_back(n);
  };
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    if (comma == std::string::npos) {
      parse_entry(value.substr(start));
      break;
    }
    parse_entry(value.substr(start, comma - start));
    start = comma + 1;
  }
  if (grid.empty()) throw DataFileError("n_grid is empty");
  return grid;
}

const std::set<std::string> kKnownKeys = {
    "m",          "q",          "p",           "fix_signs", "theta_star",
    "noise",      "noise_scale", "sigma2",     "regressors", "regressor_value",
    "sigma_phi",  "phi_min",    "phi_max",     "delta",     "n_grid",
    "k",          "master_seed", "regime",     "csv",       "svg"};

}  // namespace

ExperimentPlan parse_plan_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataFileError("plan line " + std::to_string(line_no) +
                          ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!kKnownKeys.count(key)) {
      throw DataFileError("plan line " + std::to_string(line_no) +
                          ": unknown key '" + key + "'");
    }
    if (kv.count(key)) {
      throw DataFileError("plan line " + std::to_string(line_no) +
                          ": duplicate key '" + key + "'");
    }
    if (value.empty()) {
      throw DataFileError("plan line " + std::to_string(line_no) +
                          ": empty value for '" + key + "'");
    }
    kv[key] = value;
  }

  auto has = [&](const char* key) { return kv.count(key) != 0; };
  auto require = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) {
      throw DataFileError("plan is missing required key '" + std::string(key) +
                          "'");
    }
    return it->second;
  };

  ExperimentPlan plan;

  if (has("p")) {
    if (has("m") || has("q")) {
      throw DataFileError("give either p or the pair m, q, not both");
    }
    Rational p;
    try {
      p = Rational::parse(kv["p"]);
    } catch (const std::exception& e) {
      throw DataFileError(std::string("plan key 'p': ") + e.what());
    }
    SpsConfig config = config_from_level(p, 2, false);
    plan.m = config.m;
    plan.q = config.q;
  } else {
    plan.m = static_cast<int>(parse_int("m", require("m")));
    plan.q = static_cast<int>(parse_int("q", require("q")));
  }
  plan.fix_signs = has("fix_signs") ? parse_bool("fix_signs", kv["fix_signs"]) : true;
  plan.theta_star = parse_double("theta_star", require("theta_star"));

  const std::string noise = require("noise");
  const double noise_scale =
      has("noise_scale") ? parse_double("noise_scale", kv["noise_scale"]) : 1.0;
  if (noise == "uniform") {
    plan.noise = NoiseModel::uniform(noise_scale);
  } else if (noise == "gaussian") {
    plan.noise = NoiseModel::gaussian(noise_scale);
  } else if (noise == "rademacher") {
    plan.noise = NoiseModel::rademacher(noise_scale);
  } else {
    throw DataFileError("unknown noise model '" + noise + "'");
  }
  if (has("sigma2")) {
    const double sigma2 = parse_double("sigma2", kv["sigma2"]);
    if (!(sigma2 > 0.0)) throw DataFileError("sigma2 must be positive");
    plan.noise.variance_proxy = sigma2;
  }

  const std::string reg = require("regressors");
  if (reg == "constant") {
    plan.regressors = RegressorModel::constant(
        has("regressor_value") ? parse_double("regressor_value", kv["regressor_value"])
                               : 1.0);
  } else if (reg == "gaussian") {
    plan.regressors = RegressorModel::gaussian_iid(
        has("sigma_phi") ? parse_double("sigma_phi", kv["sigma_phi"]) : 1.0);
  } else if (reg == "bounded") {
    plan.regressors = RegressorModel::bounded_iid(
        has("phi_min") ? parse_double("phi_min", kv["phi_min"]) : 0.5,
        has("phi_max") ? parse_double("phi_max", kv["phi_max"]) : 1.5);
  } else {
    throw DataFileError("unknown regressor model '" + reg + "'");
  }

  plan.delta = parse_double("delta", require("delta"));
  plan.k = static_cast<int>(parse_int("k", require("k")));
  plan.master_seed =
      static_cast<std::uint64_t>(parse_int("master_seed", require("master_seed")));

  const std::string regime = require("regime");
  if (regime == "constant") {
    plan.regime = BoundRegime::constant;
  } else if (regime == "bounded") {
    plan.regime = BoundRegime::bounded;
  } else if (regime == "gaussian") {
    plan.regime = BoundRegime::gaussian;
  } else if (regime == "mgf") {
    plan.regime = BoundRegime::mgf;
  } else {
    throw DataFileError("unknown regime '" + regime + "'");
  }

  if (has("n_grid")) {
    plan.n_grid = parse_grid(kv["n_grid"]);
  } else {
    // Default: every n from the inversion validity threshold up to 400.
    int lo = 3;
    try {
      lo = std::max(
          lo, min_valid_sample_size(plan.delta, plan.m, plan.q,
                                    bound_spec_for(plan, BoundTarget::exact_region)));
    } catch (const BoundNotAvailableError&) {
    }
    for (int n = lo; n <= 400; ++n) plan.n_grid.push_back(n);
  }

  if (has("csv")) plan.csv_path = kv["csv"];
  if (has("svg")) plan.svg_path = kv["svg"];

  try {
    plan.validate();
  } catch (const std::exception& e) {
    throw DataFileError(std::string("invalid plan: ") + e.what());
  }
  return plan;
}

ExperimentPlan parse_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataFileError("cannot open plan file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_plan_text(buffer.str());
}

DataSet read_xy_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataFileError("cannot open data file '" + path + "'");

  std::vector<double> phi;
  std::vector<double> y;
  std::string line;
  int line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    bool parsed = false;
    double a = 0.0;
    double b = 0.0;
    if (comma != std::string::npos &&
        line.find(',', comma + 1) == std::string::npos) {
      try {
        a = parse_double("phi", trim(line.substr(0, comma)));
        b = parse_double("y", trim(line.substr(comma + 1)));
        parsed = true;
      } catch (const DataFileError&) {
        parsed = false;
      }
    }
    if (!parsed) {
      if (first_content_line) {
        first_content_line = false;  // header row
        continue;
      }
      throw DataFileError(path + ":" + std::to_string(line_no) +
                          ": expected 'phi,y' with two numeric fields");
    }
    first_content_line = false;
    phi.push_back(a);
    y.push_back(b);
  }
  if (phi.empty()) {
    throw DataFileError(path + ": no data rows found");
  }
  try {
    return DataSet(std::move(phi), std::move(y));
  } catch (const std::exception& e) {
    throw DataFileError(path + ": " + e.what());
  }
}

namespace {

void append_format(std::string& out, const char* fmt, ...) {
  char buffer[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buffer, sizeof(buffer), fmt, args);
  va_end(args);
  out += buffer;
}

std::string timestamp_line(const char* prefix, const char* suffix) {
  std::time_t now = std::time(nullptr);
  char stamp[64];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return std::string(prefix) + "generated " + stamp + suffix + "\n";
}

}  // namespace

std::string results_csv(const ExperimentSummary& summary, bool timestamp) {
  std::string out;
  if (timestamp) out += timestamp_line("# ", "");
  out += "n,emp_exact,emp_outer,theo_exact,theo_outer,coverage,k,seed\n";
  for (const SummaryRow& row : summary.rows) {
    append_format(out, "%d,%.12g,%.12g,%.12g,%.12g,%.12g,%d,%llu\n", row.n,
                  row.emp_exact, row.emp_outer, row.theo_exact, row.theo_outer,
                  row.coverage, row.k,
                  static_cast<unsigned long long>(summary.master_seed));
  }
  return out;
}

namespace {

struct Curve {
  const char* label;
  const char* color;
  std::vector<std::pair<double, double>> points;  // (n, value)
};

}  // namespace

std::string results_svg(const ExperimentSummary& summary,
                        const ExperimentPlan& plan, bool timestamp) {
  const double width = 760.0;
  const double height = 520.0;
  const double ml = 70.0, mr = 20.0, mt = 30.0, mb = 50.0;

  std::vector<Curve> curves = {
      {"empirical exact", "#1f77b4", {}},
      {"bound exact", "#d62728", {}},
      {"empirical outer", "#2ca02c", {}},
      {"bound outer", "#9467bd", {}},
  };
  for (const SummaryRow& row : summary.rows) {
    auto add = [&](int curve, double v) {
      if (std::isfinite(v) && v > 0.0) {
        curves[curve].points.emplace_back(row.n, v);
      }
    };
    add(0, row.emp_exact);
    add(1, row.theo_exact);
    add(2, row.emp_outer);
    add(3, row.theo_outer);
  }
  curves.erase(std::remove_if(curves.begin(), curves.end(),
                              [](const Curve& c) { return c.points.empty(); }),
               curves.end());

  double n_lo = 1e300, n_hi = -1e300, v_lo = 1e300, v_hi = -1e300;
  for (const Curve& c : curves) {
    for (const auto& [n, v] : c.points) {
      n_lo = std::min(n_lo, n);
      n_hi = std::max(n_hi, n);
      v_lo = std::min(v_lo, std::log10(v));
      v_hi = std::max(v_hi, std::log10(v));
    }
  }
  if (curves.empty()) {
    n_lo = 0.0;
    n_hi = 1.0;
    v_lo = 0.0;
    v_hi = 1.0;
  }
  if (n_hi <= n_lo) n_hi = n_lo + 1.0;
  if (v_hi <= v_lo) v_hi = v_lo + 1.0;

  auto x_of = [&](double n) {
    return ml + (n - n_lo) / (n_hi - n_lo) * (width - ml - mr);
  };
  auto y_of = [&](double v) {
    return mt + (1.0 - (std::log10(v) - v_lo) / (v_hi - v_lo)) *
                    (height - mt - mb);
  };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  append_format(out,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" "
                "height=\"%g\" viewBox=\"0 0 %g %g\">\n",
                width, height, width, height);
  if (timestamp) out += timestamp_line("<!-- ", " -->");
  append_format(out, "<!-- curves: %d -->\n", static_cast<int>(curves.size()));
  append_format(out, "<!-- m: %d q: %d k: %d delta: %.12g seed: %llu -->\n",
                plan.m, plan.q, plan.k, summary.delta,
                static_cast<unsigned long long>(summary.master_seed));
  out += "<!-- columns: n,emp_exact,emp_outer,theo_exact,theo_outer,coverage -->\n";
  for (const SummaryRow& row : summary.rows) {
    append_format(out, "<!-- data: %d,%.12g,%.12g,%.12g,%.12g,%.12g -->\n",
                  row.n, row.emp_exact, row.emp_outer, row.theo_exact,
                  row.theo_outer, row.coverage);
  }

  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes
  append_format(out,
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" "
                "stroke=\"black\"/>\n",
                ml, height - mb, width - mr, height - mb);
  append_format(out,
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" "
                "stroke=\"black\"/>\n",
                ml, mt, ml, height - mb);
  // x ticks
  for (int tick = 0; tick <= 4; ++tick) {
    const double n = n_lo + (n_hi - n_lo) * tick / 4.0;
    append_format(out,
                  "<text x=\"%g\" y=\"%g\" font-size=\"12\" "
                  "text-anchor=\"middle\">%.0f</text>\n",
                  x_of(n), height - mb + 18.0, n);
  }
  append_format(out,
                "<text x=\"%g\" y=\"%g\" font-size=\"12\" "
                "text-anchor=\"middle\">sample size n</text>\n",
                ml + (width - ml - mr) / 2.0, height - 10.0);
  // y ticks at powers of ten
  for (int e = static_cast<int>(std::ceil(v_lo - 1e-9));
       e <= static_cast<int>(std::floor(v_hi + 1e-9)); ++e) {
    const double v = std::pow(10.0, e);
    append_format(out,
                  "<text x=\"%g\" y=\"%g\" font-size=\"12\" "
                  "text-anchor=\"end\">1e%d</text>\n",
                  ml - 6.0, y_of(v) + 4.0, e);
  }
  append_format(out,
                "<text x=\"14\" y=\"%g\" font-size=\"12\" "
                "transform=\"rotate(-90 14 %g)\" text-anchor=\"middle\">"
                "interval size</text>\n",
                mt + (height - mt - mb) / 2.0, mt + (height - mt - mb) / 2.0);

  for (const Curve& curve : curves) {
    out += "<polyline fill=\"none\" stroke=\"";
    out += curve.color;
    out += "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [n, v] : curve.points) {
      append_format(out, "%.2f,%.2f ", x_of(n), y_of(v));
    }
    out += "\"/>\n";
  }

  double legend_y = mt + 14.0;
  for (const Curve& curve : curves) {
    append_format(out,
                  "<rect x=\"%g\" y=\"%g\" width=\"18\" height=\"4\" "
                  "fill=\"%s\"/>\n",
                  width - mr - 170.0, legend_y - 4.0, curve.color);
    append_format(out,
                  "<text x=\"%g\" y=\"%g\" font-size=\"12\">%s</text>\n",
                  width - mr - 146.0, legend_y, curve.label);
    legend_y += 18.0;
  }

  out += "</svg>\n";
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataFileError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw DataFileError("failed writing '" + path + "'");
}

}  // namespace sps
