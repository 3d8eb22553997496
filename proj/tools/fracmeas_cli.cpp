// Command-line front end: constants reports, measure estimation, sigma-sweep
// convergence experiments, the exact 1D oracle, and the self-test suite.
// Exit codes: 0 success, 1 usage error, 2 validation error, 3 selftest failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fracmeas/constants.hpp"
#include "fracmeas/csvout.hpp"
#include "fracmeas/geom.hpp"
#include "fracmeas/manifold_io.hpp"
#include "fracmeas/mc.hpp"
#include "fracmeas/oracle1d.hpp"
#include "fracmeas/selftest.hpp"

namespace {

using namespace fracmeas;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitSelftest = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parseDoubleList(const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    if (item.empty()) throw UsageError("empty entry in numeric list: \"" + text + "\"");
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("not a number: \"" + item + "\"");
    }
    if (used != item.size()) throw UsageError("trailing junk in number: \"" + item + "\"");
    values.push_back(value);
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return values;
}

// Domain spec "c1,..,cn;R": ball center coordinates, then the radius.
DomainBall parseOmega(const std::string& spec) {
  const std::size_t semi = spec.find(';');
  if (semi == std::string::npos) {
    throw UsageError("omega spec must look like \"c1,..,cn;R\"");
  }
  const std::vector<double> center = parseDoubleList(spec.substr(0, semi));
  const std::vector<double> radius = parseDoubleList(spec.substr(semi + 1));
  if (radius.size() != 1) throw UsageError("omega spec needs exactly one radius after ';'");
  DomainBall ball;
  ball.center = Eigen::Map<const Eigen::VectorXd>(center.data(),
                                                  static_cast<Eigen::Index>(center.size()));
  ball.radiusR = radius[0];
  if (!(ball.radiusR > 0.0)) throw UsageError("omega radius must be positive");
  return ball;
}

struct LoadedManifold {
  ManifoldShape shape;
  std::string hash;
};

LoadedManifold loadManifoldFile(const std::string& path) {
  const std::string bytes = readFileBytes(path);
  LoadedManifold loaded{parseManifold(bytes), contentHashHex(bytes)};
  return loaded;
}

std::string joinArguments(int argc, char** argv) {
  std::string joined;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) joined += ' ';
    joined += argv[i];
  }
  return joined;
}

RunManifest makeManifest(const std::string& command, const std::string& arguments,
                         std::uint64_t seed, const std::string& inputHash,
                         const std::string& startedAt) {
  RunManifest manifest;
  manifest.command = command;
  manifest.arguments = arguments;
  manifest.seed = seed;
  manifest.versions = toolVersions();
  manifest.inputHash = inputHash;
  manifest.startedAt = startedAt;
  manifest.finishedAt = isoTimestampUtc();
  return manifest;
}

int cmdConstants(int n, int k, const std::string& outPath, const std::string& arguments) {
  if (n < 1 || n > 12 || k < 0 || k >= n) {
    throw UsageError("constants requires 0 <= k < n <= 12");
  }
  const std::string startedAt = isoTimestampUtc();
  const ConstantsReport report = constantsReport(n, k);
  const double viaBound =
      std::pow(2.0, -0.5 * k) * report.vfboundConstant / static_cast<double>(n - k);
  const double ratioGap =
      std::abs(report.limitConstant - viaBound) / std::abs(viaBound);
  const bool consistent = ratioGap <= 1e-12;

  std::printf("constants for n=%d, k=%d\n", n, k);
  std::printf("  %-24s %.17g\n", "alphaN", report.alphaN);
  std::printf("  %-24s %.17g\n", "omegaNm1", report.omegaNm1);
  std::printf("  %-24s %.17g\n", "soMeasure", report.soMeasure);
  std::printf("  %-24s %.17g\n", "stiefelMeasure", report.stiefelMeasure);
  std::printf("  %-24s %.17g\n", "bladeManifoldMeasure", report.bladeManifoldMeasure);
  std::printf("  %-24s %.17g\n", "wMeasure", report.wMeasure);
  std::printf("  %-24s %.17g\n", "vfboundConstant", report.vfboundConstant);
  std::printf("  %-24s %.17g\n", "limitConstant", report.limitConstant);
  std::printf("  ratio check: limitConstant vs 2^{-k/2}*vfbound/(n-k) = %.17g, "
              "relative gap %.2e (%s)\n",
              viaBound, ratioGap, consistent ? "consistent" : "INCONSISTENT");

  if (!outPath.empty()) {
    CsvTable table;
    table.columns = {"n", "k", "alphaN", "omegaNm1", "soMeasure", "stiefelMeasure",
                     "bladeManifoldMeasure", "wMeasure", "vfboundConstant", "limitConstant",
                     "ratioConsistent"};
    table.rows.push_back({formatInteger(n), formatInteger(k), formatDouble(report.alphaN),
                          formatDouble(report.omegaNm1), formatDouble(report.soMeasure),
                          formatDouble(report.stiefelMeasure),
                          formatDouble(report.bladeManifoldMeasure),
                          formatDouble(report.wMeasure), formatDouble(report.vfboundConstant),
                          formatDouble(report.limitConstant), consistent ? "1" : "0"});
    writeCsvFile(outPath, makeManifest("constants", arguments, 0, "-", startedAt), table);
  }
  return kExitOk;
}

EstimatorConfig assembleConfig(double sigma, long long samples, std::uint64_t seed, int streams,
                               const std::optional<double>& xiAlpha, const DomainBall& ball) {
  EstimatorConfig cfg;
  cfg.sigma = sigma;
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.streams = streams;
  if (xiAlpha) cfg.xiProposal = XiProposal{*xiAlpha, ball.diam()};
  return cfg;
}

void printEstimateLine(const EstimateResult& result) {
  const double fraction =
      static_cast<double>(result.degenerateResampled) /
      static_cast<double>(result.samples + result.degenerateResampled);
  std::printf("sigma=%-8.6g mean=%.10g stderr=%.3g scaledMean=%.10g", result.sigma, result.mean,
              result.stderrOfMean, result.scaledMean);
  if (result.target) {
    std::printf(" target=%.10g relError=%.4g", *result.target,
                std::abs(result.scaledMean - *result.target) / *result.target);
  }
  std::printf(" degenerateResampled=%lld (fraction %.2e) configHash=%016llx\n",
              result.degenerateResampled, fraction,
              static_cast<unsigned long long>(result.configHash));
}

std::vector<std::string> estimateCsvRow(const EstimateResult& result, int streams) {
  const double relError =
      result.target ? std::abs(result.scaledMean - *result.target) / *result.target
                    : std::nan("");
  return {formatDouble(result.sigma),
          formatInteger(result.samples),
          formatInteger(streams),
          formatDouble(result.mean),
          formatDouble(result.stderrOfMean),
          formatDouble(result.scaledMean),
          formatDouble(result.target.value_or(std::nan(""))),
          formatDouble(relError),
          formatInteger(result.degenerateResampled),
          formatUnsigned(result.configHash)};
}

int cmdEstimate(const std::string& manifoldPath, const std::string& omegaSpec, double sigma,
                long long samples, std::uint64_t seed, int streams,
                const std::optional<double>& xiAlpha, const std::string& outPath,
                const std::string& arguments) {
  const std::string startedAt = isoTimestampUtc();
  const LoadedManifold loaded = loadManifoldFile(manifoldPath);
  const DomainBall ball = parseOmega(omegaSpec);
  const EstimatorConfig cfg = assembleConfig(sigma, samples, seed, streams, xiAlpha, ball);
  const EstimateResult result = estimateMeasure(loaded.shape, ball, cfg);
  printEstimateLine(result);
  if (!outPath.empty()) {
    CsvTable table;
    table.columns = {"sigma",      "samples", "streams", "mean",
                     "stderr",     "scaledMean", "target",  "relError",
                     "degenerateResampled", "configHash"};
    table.rows.push_back(estimateCsvRow(result, streams));
    writeCsvFile(outPath, makeManifest("estimate", arguments, seed, loaded.hash, startedAt),
                 table);
  }
  return kExitOk;
}

int cmdConverge(const std::string& manifoldPath, const std::string& omegaSpec,
                const std::string& sigmaSpec, long long samples, std::uint64_t seed, int streams,
                const std::optional<double>& xiAlpha, const std::string& outPath,
                const std::string& arguments) {
  const std::string startedAt = isoTimestampUtc();
  const LoadedManifold loaded = loadManifoldFile(manifoldPath);
  const DomainBall ball = parseOmega(omegaSpec);
  const std::vector<double> sigmas = parseDoubleList(sigmaSpec);
  const EstimatorConfig cfg = assembleConfig(0.5, samples, seed, streams, xiAlpha, ball);
  const std::vector<EstimateResult> results = convergeSweep(loaded.shape, ball, sigmas, cfg);

  CsvTable table;
  table.columns = {"sigma", "mean", "stderr", "scaledMean", "target", "relError"};
  for (const EstimateResult& result : results) {
    printEstimateLine(result);
    const double target = result.target.value_or(std::nan(""));
    table.rows.push_back({formatDouble(result.sigma), formatDouble(result.mean),
                          formatDouble(result.stderrOfMean), formatDouble(result.scaledMean),
                          formatDouble(target),
                          formatDouble(std::abs(result.scaledMean - target) / target)});
  }
  if (!outPath.empty()) {
    writeCsvFile(outPath, makeManifest("converge", arguments, seed, loaded.hash, startedAt),
                 table);
  }
  return kExitOk;
}

int cmdOracle1d(const std::string& selector, double sigma, const std::string& pointsSpec,
                const std::string& omegaSpec, const std::string& outPath,
                const std::string& arguments) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw std::invalid_argument("sigma must lie in (0, 1)");
  }
  const std::string startedAt = isoTimestampUtc();
  const DomainBall ball = parseOmega(omegaSpec);
  if (ball.center.size() != 1) throw UsageError("oracle1d requires a 1-dimensional omega");
  const double center = ball.center(0);
  const double radius = ball.radiusR;

  std::vector<double> points;
  if (selector == "pair") {
    points = {-1.0, 1.0};
  } else if (selector == "left") {
    points = {-1.0};
  } else if (selector == "right") {
    points = {1.0};
  } else if (selector == "custom") {
    if (pointsSpec.empty()) throw UsageError("custom selector requires --points");
    points = parseDoubleList(pointsSpec);
  } else {
    throw UsageError("selector must be one of pair, left, right, custom");
  }

  const double value = oracleMeasure1D(points, center, radius, sigma);
  std::printf("oracle1d %s sigma=%.6g: %.17g\n", selector.c_str(), sigma, value);
  if (selector == "pair") {
    std::printf("  closed form 8/(sigma(1-sigma)) = %.17g\n", 8.0 / (sigma * (1.0 - sigma)));
  } else if (selector == "left" || selector == "right") {
    std::printf("  closed form 2^(3-sigma)/(sigma(1-sigma)) = %.17g\n",
                std::pow(2.0, 3.0 - sigma) / (sigma * (1.0 - sigma)));
  }
  if (!outPath.empty()) {
    CsvTable table;
    table.columns = {"selector", "sigma", "value"};
    table.rows.push_back({selector, formatDouble(sigma), formatDouble(value)});
    writeCsvFile(outPath, makeManifest("oracle1d", arguments, 0, "-", startedAt), table);
  }
  return kExitOk;
}

int cmdSelftest(const std::string& level) {
  const SelftestLevel parsed =
      level == "full" ? SelftestLevel::Full : SelftestLevel::Quick;
  const SelftestReport report = runSelftest(parsed);
  printReport(report, std::cout);
  return report.allPassed() ? kExitOk : kExitSelftest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for the fractional k-dimensional measure of manifolds"};
  app.require_subcommand(1);
  const std::string arguments = joinArguments(argc, argv);

  int n = 0, k = 0;
  std::string outPath;
  CLI::App* constants = app.add_subcommand("constants", "Closed-form constants report");
  constants->add_option("--n", n, "ambient dimension (1..12)")->required();
  constants->add_option("--k", k, "manifold dimension (0 <= k < n)")->required();
  constants->add_option("--out", outPath, "CSV output path");

  std::string manifoldPath, omegaSpec, sigmaSpec, pointsSpec, selector, level = "quick";
  double sigma = 0.5;
  long long samples = 1000000;
  std::uint64_t seed = 1;
  int streams = 1;
  double xiAlphaValue = 0.0;
  bool xiAlphaSet = false;

  CLI::App* estimate = app.add_subcommand("estimate", "Monte-Carlo measure estimate");
  estimate->add_option("--manifold", manifoldPath, "manifold JSON file")->required();
  estimate->add_option("--omega", omegaSpec, "domain ball \"c1,..,cn;R\"")->required();
  estimate->add_option("--sigma", sigma, "fractional order in (0,1)")->required();
  estimate->add_option("--samples", samples, "Monte-Carlo sample count");
  estimate->add_option("--seed", seed, "RNG seed");
  estimate->add_option("--streams", streams, "independent RNG substreams");
  estimate->add_option("--xi-alpha", xiAlphaValue, "proposal tail-shape override")
      ->each([&](const std::string&) { xiAlphaSet = true; });
  estimate->add_option("--out", outPath, "CSV output path");

  CLI::App* converge = app.add_subcommand("converge", "Sigma-sweep convergence experiment");
  converge->add_option("--manifold", manifoldPath, "manifold JSON file")->required();
  converge->add_option("--omega", omegaSpec, "domain ball \"c1,..,cn;R\"")->required();
  converge->add_option("--sigma", sigmaSpec, "comma list of sigmas, strictly increasing")
      ->required();
  converge->add_option("--samples", samples, "Monte-Carlo sample count per sigma");
  converge->add_option("--seed", seed, "RNG seed");
  converge->add_option("--streams", streams, "independent RNG substreams");
  converge->add_option("--xi-alpha", xiAlphaValue, "proposal tail-shape override")
      ->each([&](const std::string&) { xiAlphaSet = true; });
  converge->add_option("--out", outPath, "CSV output path");

  CLI::App* oracle = app.add_subcommand("oracle1d", "Exact 1D point-set measure");
  oracle->add_option("--selector", selector, "pair | left | right | custom")->required();
  oracle->add_option("--sigma", sigma, "fractional order in (0,1)")->required();
  oracle->add_option("--points", pointsSpec, "comma list of points (custom selector)");
  oracle->add_option("--omega", omegaSpec, "interval \"c;R\" (default 0;2)");
  oracle->add_option("--out", outPath, "CSV output path");

  CLI::App* selftest = app.add_subcommand("selftest", "Built-in verification suite");
  selftest->add_option("--level", level, "quick | full")
      ->check(CLI::IsMember({"quick", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const std::optional<double> xiAlpha =
        xiAlphaSet ? std::optional<double>(xiAlphaValue) : std::nullopt;
    if (constants->parsed()) return cmdConstants(n, k, outPath, arguments);
    if (estimate->parsed()) {
      return cmdEstimate(manifoldPath, omegaSpec, sigma, samples, seed, streams, xiAlpha,
                         outPath, arguments);
    }
    if (converge->parsed()) {
      return cmdConverge(manifoldPath, omegaSpec, sigmaSpec, samples, seed, streams, xiAlpha,
                         outPath, arguments);
    }
    if (oracle->parsed()) {
      return cmdOracle1d(selector, sigma, pointsSpec,
                         omegaSpec.empty() ? std::string("0;2") : omegaSpec, outPath, arguments);
    }
    if (selftest->parsed()) return cmdSelftest(level);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
