// Command-line front end: evaluate confidence regions on supplied data,
// evaluate or invert tail bounds, run experiment plans, and emit CSV/SVG
// results.
//
// Exit codes: 0 success, 2 usage, 3 input data error, 4 validity error
// (inversion threshold or degenerate data), 5 internal invariant failure.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sps/bounds.hpp"
#include "sps/core.hpp"
#include "sps/errors.hpp"
#include "sps/experiment_io.hpp"
#include "sps/model.hpp"
#include "sps/montecarlo.hpp"
#include "sps/rng.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitValidity = 4;
constexpr int kExitInternal = 5;

int fail(int code, const char* category, const std::string& message) {
  std::fprintf(stderr, "error[%s]: %s\n", category, message.c_str());
  return code;
}

std::uint64_t digest_bytes(std::uint64_t h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;  // FNV-1a
  }
  return h;
}

std::string region_to_string(const sps::ConfidenceRegion& region) {
  if (region.empty()) return "(empty)";
  std::string out;
  char buf[96];
  for (std::size_t j = 0; j < region.intervals.size(); ++j) {
    const auto& iv = region.intervals[j];
    if (j > 0) out += " U ";
    std::snprintf(buf, sizeof(buf), "[%.12g, %.12g]", iv.lo, iv.hi);
    out += buf;
  }
  return out;
}

struct BoundOptions {
  std::string regime = "constant";
  double epsilon = -1.0;
  double delta = -1.0;
  int n = 0;
  int m = 2;
  int q = 1;
  double sigma2 = 1.0;
  double phi_min = 1.0;
  double sigma_phi = 1.0;
  bool outer = false;
};

sps::BoundSpec make_spec(const BoundOptions& opt) {
  sps::BoundSpec spec;
  spec.target = opt.outer ? sps::BoundTarget::outer_approximation
                          : sps::BoundTarget::exact_region;
  const double sigma = std::sqrt(opt.sigma2);
  if (opt.regime == "constant") {
    spec.regime = sps::ConstantInNoise{sigma};
  } else if (opt.regime == "bounded") {
    spec.regime = sps::BoundedRegressor{sigma, opt.phi_min};
  } else if (opt.regime == "gaussian") {
    spec.regime = sps::GaussianRegressor{sigma, opt.sigma_phi};
  } else {
    // The built-in MGF regime uses the centered-normal squared-regressor MGF
    // parameterized by --sigma-phi.
    const double sp2 = opt.sigma_phi * opt.sigma_phi;
    spec.regime = sps::UserRegressorMgf{
        sigma, [sp2](double t) { return 1.0 / std::sqrt(1.0 - 2.0 * t * sp2); }};
  }
  return spec;
}

int cmd_region(const std::string& path, int m, int q, std::uint64_t seed,
               bool fix_signs) {
  sps::DataSet data = sps::read_xy_csv(path);
  if (data.size() < 2) {
    return fail(kExitData, "data", "need at least two data rows");
  }
  if (!(data.sum_phi_squared() > 0.0)) {
    return fail(kExitValidity, "validity",
                "degenerate regressors: sum of squares is zero");
  }
  sps::SpsConfig config(m, q, data.size(), fix_signs);
  sps::Rng rng(seed);
  const sps::SpsInstance inst = sps::initialize(config, rng);

  const double lse = sps::least_squares(data);
  const sps::ConfidenceRegion region = sps::exact_region(data, inst);

  std::uint64_t digest = digest_bytes(0xcbf29ce484222325ull,
                                      inst.signs().data(), inst.signs().size());
  digest = digest_bytes(digest, inst.tie_break().data(),
                        inst.tie_break().size() * sizeof(int));

  std::printf("least_squares: %.12g\n", lse);
  std::printf("region: %s\n", region_to_string(region).c_str());
  try {
    const sps::OuterInterval outer = sps::outer_approximation(data, inst);
    std::printf("outer: [%.12g, %.12g]  center %.12g  half_width %.12g\n",
                outer.lo(), outer.hi(), outer.center, outer.half_width);
  } catch (const sps::UnboundedRegionError&) {
    std::printf("outer: unbounded\n");
  }
  std::printf("instance_digest: %016" PRIx64 "\n", digest);
  return 0;
}

int cmd_bound(const BoundOptions& opt) {
  const bool have_eps = opt.epsilon >= 0.0;
  const bool have_delta = opt.delta >= 0.0;
  if (have_eps == have_delta) {
    return fail(kExitUsage, "usage",
                "give exactly one of --epsilon (evaluate) or --delta (invert)");
  }
  const sps::BoundSpec spec = make_spec(opt);
  if (have_eps) {
    sps::TailQuery query{opt.epsilon, opt.n, opt.m, opt.q, spec};
    const sps::BoundValue value = opt.outer ? sps::outer_tail_bound(query)
                                            : sps::tail_bound(query);
    std::printf("probability: %.12g\n", value.probability());
    std::printf("raw: %.12g\n", value.raw());
  } else {
    sps::RadiusQuery query{opt.delta, opt.n, opt.m, opt.q, spec};
    const int min_n = sps::min_valid_sample_size(opt.delta, opt.m, opt.q, spec);
    const double radius = sps::invert_radius(query);
    if (opt.outer) {
      std::printf("full_width: %.12g\n", radius);
    } else {
      std::printf("radius: %.12g\n", radius);
    }
    std::printf("min_valid_n: %d\n", min_n);
  }
  return 0;
}

int cmd_simulate(const std::string& plan_path, int threads,
                 const std::string& csv_override,
                 const std::string& svg_override, bool deterministic) {
  sps::ExperimentPlan plan = sps::parse_plan_file(plan_path);
  if (!csv_override.empty()) plan.csv_path = csv_override;
  if (!svg_override.empty()) plan.svg_path = svg_override;

  const sps::ExperimentSummary summary = sps::run_experiment(plan, threads);
  const std::string csv = sps::results_csv(summary, !deterministic);
  std::fputs(csv.c_str(), stdout);
  if (!plan.csv_path.empty()) sps::write_file(plan.csv_path, csv);
  if (!plan.svg_path.empty()) {
    sps::write_file(plan.svg_path,
                    sps::results_svg(summary, plan, !deterministic));
  }
  return 0;
}

int cmd_selftest(bool inject_fault) {
  int failures = 0;
  auto report = [&failures](const char* name, bool ok, const std::string& detail) {
    std::printf("%s - %s%s%s\n", ok ? "ok" : "FAIL", name,
                detail.empty() ? "" : ": ", detail.c_str());
    if (!ok) ++failures;
  };

  // Exact region versus dense indicator scan on random instances.
  {
    bool ok = true;
    std::string detail;
    sps::Rng rng(0x5e1f7e57u);
    for (int trial = 0; trial < 20 && ok; ++trial) {
      const int n = 3 + static_cast<int>(rng.below(30));
      const int m = 2 + static_cast<int>(rng.below(5));
      const int q = 1 + static_cast<int>(rng.below(m - 1));
      sps::SpsConfig config(m, q, n, true);
      const auto noise = sps::NoiseModel::uniform(1.0);
      const auto regressors = sps::RegressorModel::constant(1.0);
      auto generated = sps::generate_dataset(n, 5.0, noise, regressors, rng);
      const sps::SpsInstance inst = sps::initialize(config, rng);
      const sps::ConfidenceRegion exact =
          sps::exact_region(generated.data, inst);
      sps::SpsInstance scan_inst = inst;
      if (inject_fault && trial == 3) {
        // flip one free sign so the scan sees a different randomization
        auto signs = inst.signs();
        signs[2] = -signs[2];
        scan_inst = sps::SpsInstance(config, std::move(signs), inst.tie_break());
      }
      if (exact.empty() || !exact.bounded()) {
        ok = false;
        detail = "unexpected empty or unbounded region";
        break;
      }
      // offset by half a step so no grid point lands on a breakpoint tie
      const double step = 1e-3;
      const double lo = exact.intervals.front().lo - 1.0 - step / 2.0;
      const double hi = exact.intervals.back().hi + 1.0;
      const sps::ConfidenceRegion scan =
          sps::grid_scan_region(generated.data, scan_inst, lo, hi, step);
      if (scan.intervals.size() != exact.intervals.size()) {
        ok = false;
        detail = "component count mismatch on trial " + std::to_string(trial);
        break;
      }
      for (std::size_t j = 0; j < scan.intervals.size(); ++j) {
        if (std::abs(scan.intervals[j].lo - exact.intervals[j].lo) > step * 1.01 ||
            std::abs(scan.intervals[j].hi - exact.intervals[j].hi) > step * 1.01) {
          ok = false;
          detail = "endpoint mismatch on trial " + std::to_string(trial);
          break;
        }
      }
    }
    report("region matches dense scan", ok, detail);
  }

  // Inversion round trips.
  {
    bool ok = true;
    std::string detail;
    for (double delta : {0.02, 0.1, 0.4}) {
      for (int n : {50, 400}) {
        sps::BoundSpec spec;
        spec.regime = sps::ConstantInNoise{std::sqrt(1.0 / 3.0)};
        const double eps =
            sps::invert_radius(sps::RadiusQuery{delta, n, 2, 1, spec});
        const double back =
            sps::tail_bound(sps::TailQuery{eps, n, 2, 1, spec}).raw();
        if (std::abs(back - delta) > 1e-10) {
          ok = false;
          detail = "constant regime, delta " + std::to_string(delta);
        }
      }
    }
    report("inversion round trip", ok, detail);
  }

  // Coverage at the configured level.
  {
    const int k = 2000;
    sps::SpsConfig config(2, 1, 25, false);
    const auto noise = sps::NoiseModel::uniform(1.0);
    const auto regressors = sps::RegressorModel::constant(1.0);
    int covered = 0;
    for (int trial = 0; trial < k; ++trial) {
      sps::Rng rng(sps::derive_seed(0xc0ffee, 25, trial));
      covered +=
          sps::run_trial(config, 5.0, noise, regressors, rng).covers_true;
    }
    const double coverage = static_cast<double>(covered) / k;
    const bool ok = std::abs(coverage - 0.5) <= 0.034;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "coverage %.4f", coverage);
    report("coverage matches confidence level", ok, buf);
  }

  return failures == 0 ? 0 : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sign-perturbed sums confidence intervals"};
  app.require_subcommand(1);

  std::string data_path;
  int m = 2;
  int q = 1;
  std::uint64_t seed = 0;
  bool fix_signs = false;
  auto* region =
      app.add_subcommand("region", "exact region and outer approximation for a data file");
  region->add_option("data", data_path, "CSV file with phi,y columns")->required();
  region->add_option("--m", m, "number of sums")->required();
  region->add_option("--q", q, "rank threshold")->required();
  region->add_option("--seed", seed, "randomization seed");
  region->add_flag("--fix-signs", fix_signs, "fix each sign row to start +1, -1");

  BoundOptions bound;
  auto* bound_cmd = app.add_subcommand("bound", "evaluate or invert a tail bound");
  bound_cmd->add_option("--regime", bound.regime, "constant|bounded|gaussian|mgf")
      ->check(CLI::IsMember({"constant", "bounded", "gaussian", "mgf"}));
  bound_cmd->add_option("--epsilon", bound.epsilon, "radius to evaluate at");
  bound_cmd->add_option("--delta", bound.delta, "failure probability to invert");
  bound_cmd->add_option("--n", bound.n, "sample size")->required();
  bound_cmd->add_option("--m", bound.m, "number of sums");
  bound_cmd->add_option("--q", bound.q, "rank threshold");
  bound_cmd->add_option("--sigma2", bound.sigma2, "noise variance proxy");
  bound_cmd->add_option("--phi-min", bound.phi_min, "regressor lower bound");
  bound_cmd->add_option("--sigma-phi", bound.sigma_phi, "regressor stddev");
  bound_cmd->add_flag("--outer", bound.outer, "outer-approximation bound");

  std::string plan_path;
  int threads = 1;
  std::string csv_path;
  std::string svg_path;
  bool deterministic = false;
  auto* simulate = app.add_subcommand("simulate", "run an experiment plan");
  simulate->add_option("plan", plan_path, "plan file")->required();
  simulate->add_option("--threads", threads, "worker threads");
  simulate->add_option("--csv", csv_path, "write results CSV here");
  simulate->add_option("--svg", svg_path, "write results SVG here");
  simulate->add_flag("--deterministic", deterministic,
                     "suppress the timestamp comment");

  bool inject_fault = false;
  auto* selftest = app.add_subcommand("selftest", "run the fast invariant suite");
  selftest
      ->add_flag("--inject-fault", inject_fault,
                 "corrupt a sign matrix to demonstrate detection")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (region->parsed()) {
      if (m < 2 || q <= 0 || q >= m) {
        return fail(kExitUsage, "usage", "need integers 0 < q < m with m >= 2");
      }
      return cmd_region(data_path, m, q, seed, fix_signs);
    }
    if (bound_cmd->parsed()) return cmd_bound(bound);
    if (simulate->parsed()) {
      return cmd_simulate(plan_path, threads, csv_path, svg_path, deterministic);
    }
    return cmd_selftest(inject_fault);
  } catch (const sps::DataFileError& e) {
    return fail(kExitData, "data", e.what());
  } catch (const sps::SampleSizeError& e) {
    return fail(kExitValidity, "validity", e.what());
  } catch (const sps::BoundNotAvailableError& e) {
    return fail(kExitValidity, "validity", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kExitUsage, "usage", e.what());
  } catch (const std::exception& e) {
    return fail(kExitInternal, "internal", e.what());
  }
}
