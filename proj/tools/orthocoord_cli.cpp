// orthocoord: obstruction search, proof certificates and diagonal-metric
// curvature from the command line.
//
// Exit codes: 0 success (certify: all certificates passed), 1 certificate
// failure, 2 usage error.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "orthocoord/orthocoord.hpp"

namespace oc = orthocoord;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit_json(const json& doc, const std::string& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw UsageError("cannot write '" + out + "'");
  f << text;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

oc::Vector parse_point(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("cannot parse coordinate '" + item + "'");
    }
    if (used != item.size()) throw UsageError("cannot parse coordinate '" + item + "'");
    vals.push_back(v);
  }
  if (vals.empty()) throw UsageError("--at needs comma-separated coordinates");
  return Eigen::Map<oc::Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

int cmd_check(const std::string& space_text, const oc::SearchConfig& cfg, const std::string& out) {
  const oc::ModelSpace space = oc::parse_model_space(space_text);
  const oc::ResidualSpec spec(oc::oracle_for(space));
  oc::ObstructionReport report = oc::minimize(spec, cfg);
  report.space = oc::label(space);
  if (!out.empty()) {
    emit_json(oc::to_json(report), out);
    if (out == "-") return kExitOk;
  }
  std::cout << "space          " << report.space << "\n"
            << "n              " << report.n << "\n"
            << "best_residual  " << fmt(report.best_residual) << "\n"
            << "converged      " << (report.converged ? "yes" : "no") << "\n"
            << "restarts       " << report.restarts_used << " (best: #" << report.best_restart << ")\n"
            << "seed           " << report.seed << "\n";
  auto quads = report.per_quadruple;
  std::sort(quads.begin(), quads.end(),
            [](const auto& a, const auto& b) { return std::abs(a.value) > std::abs(b.value); });
  const std::size_t shown = std::min<std::size_t>(quads.size(), 6);
  if (shown > 0) std::cout << "largest distinct-quadruple components:\n";
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& q = quads[i];
    std::cout << "  R(e" << q.ijkl[0] + 1 << ",e" << q.ijkl[1] + 1 << ",e" << q.ijkl[2] + 1 << ",e" << q.ijkl[3] + 1
              << ") = " << fmt(q.value) << "\n";
  }
  return kExitOk;
}

int print_certificates(const std::vector<oc::CertificateResult>& certs, const std::string& out) {
  bool all = true;
  json arr = json::array();
  for (const auto& c : certs) {
    all = all && c.passed;
    arr.push_back(oc::to_json(c));
  }
  if (!out.empty()) emit_json(arr, out);
  if (out != "-") {
    for (const auto& c : certs) {
      std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name << "\n";
      for (const auto& q : c.computed) {
        if (c.computed.size() > 12 && q.name.rfind("R(", 0) == 0) continue;
        std::cout << "        " << std::left << std::setw(44) << q.name << fmt(q.value) << "\n";
      }
    }
  }
  return all ? kExitOk : kExitFailed;
}

int cmd_certify(const std::string& space_text, int trials, std::uint64_t seed, const std::string& out) {
  const oc::ModelSpace space = oc::parse_model_space(space_text);
  if (const auto* cp = std::get_if<oc::ComplexProjective>(&space); cp && cp->m == 2) {
    return print_certificates(oc::cp2_suite(100, seed), out);
  }
  if (const auto* hp = std::get_if<oc::QuaternionicProjective>(&space); hp && hp->q >= 2) {
    return print_certificates(oc::hpq_suite(hp->q, trials, 100, seed), out);
  }
  throw UsageError("certify supports cp:2 and hp:Q with Q >= 2, not '" + space_text + "'");
}

int cmd_lemma(int trials, std::uint64_t seed, double tol, const std::string& out) {
  return print_certificates({oc::lemma_easy_battery(trials, seed, tol)}, out);
}

int cmd_curvature(const std::string& chart_text, const std::string& at, const std::string& out) {
  const oc::DiagonalChart chart = oc::resolve_chart(chart_text);
  const oc::ChartPoint p{parse_point(at)};
  if (p.x.size() != chart.dim()) throw UsageError("--at has the wrong number of coordinates");
  if (!chart.domain().contains(p.x)) throw UsageError("point lies outside the chart domain");

  const int n = chart.dim();
  const oc::Tensor4 R = oc::diagonal_curvature(chart, p);
  const double koszul = oc::koszul_check(chart, p);

  json doc;
  doc["chart"] = chart.name();
  doc["point"] = std::vector<double>(p.x.data(), p.x.data() + n);
  json sectional = json::array();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) sectional.push_back({{"ij", {i + 1, j + 1}}, {"value", R(i, j, i, j)}});
  doc["sectional"] = sectional;
  doc["koszul_deviation"] = koszul;
  json quads = json::array();
  double worst = 0.0;
  for (const auto& q : oc::distinct_quadruples(n)) {
    const double v = R(q[0], q[1], q[2], q[3]);
    worst = std::max(worst, std::abs(v));
    quads.push_back({{"ijkl", {q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1}}, {"value", v}});
  }
  doc["distinct_quadruples"] = quads;
  doc["max_abs_distinct_quadruple"] = worst;
  try {
    const auto frob = oc::frobenius_residual(oc::coframe_field(chart, p.x, 1e-3, 3));
    doc["frobenius_residual"] = frob;
  } catch (const oc::Error&) {
    doc["frobenius_residual"] = nullptr;  // stencil leaves the domain
  }

  if (!out.empty()) {
    emit_json(doc, out);
    if (out == "-") return kExitOk;
  }
  std::cout << "chart               " << chart.name() << "\n"
            << "koszul deviation    " << fmt(koszul) << "\n"
            << "max |R_ijkl| (distinct) " << fmt(worst) << "\n"
            << "sectional curvatures:\n";
  for (const auto& s : sectional) {
    std::cout << "  K(e" << s["ij"][0] << ",e" << s["ij"][1] << ") = " << fmt(s["value"].get<double>()) << "\n";
  }
  return kExitOk;
}

int cmd_report_merge(const std::vector<std::string>& inputs, const std::string& out) {
  if (inputs.empty()) throw UsageError("report-merge needs at least one report file");
  std::vector<oc::ObstructionReport> reports;
  for (const auto& path : inputs) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open '" + path + "'");
    json doc;
    try {
      f >> doc;
    } catch (const json::exception& e) {
      throw UsageError("invalid JSON in '" + path + "'");
    }
    reports.push_back(oc::report_from_json(doc));
  }
  oc::ObstructionReport merged = reports.front();
  int total = 0;
  for (const auto& r : reports) {
    if (r.space != merged.space || r.n != merged.n) throw UsageError("reports describe different spaces");
    total += r.restarts_used;
  }
  for (const auto& r : reports) {
    if (r.best_residual < merged.best_residual) merged = r;
  }
  merged.restarts_used = total;
  emit_json(oc::to_json(merged), out.empty() ? "-" : out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal-coordinate curvature obstructions"};
  app.require_subcommand(1);

  std::string space, chart, at, out;
  oc::SearchConfig cfg;
  cfg.restarts = 20;
  int trials = 1000;
  double lemma_tol = 1e-9;
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;

  auto* check = app.add_subcommand("check", "minimize the obstruction residual over frames");
  check->add_option("--space", space, "flat:N | sphere:N | cp:M | hp:Q")->required();
  check->add_option("--restarts", cfg.restarts, "number of Haar-random restarts")->check(CLI::PositiveNumber);
  check->add_option("--max-iters", cfg.max_iters, "iterations per descent")->check(CLI::PositiveNumber);
  check->add_option("--seed", seed, "base seed");
  check->add_option("--tol-res", cfg.tol_res, "residual treated as zero")->check(CLI::PositiveNumber);
  check->add_option("--tol-grad", cfg.tol_grad, "gradient-norm stop")->check(CLI::PositiveNumber);
  check->add_option("--threads", cfg.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  check->add_option("--out", out, "write JSON report (use - for stdout)");

  auto* certify = app.add_subcommand("certify", "run the proof certificates");
  certify->add_option("--space", space, "cp:2 | hp:Q (Q >= 2)")->required();
  certify->add_option("--trials", trials, "battery size")->check(CLI::PositiveNumber);
  certify->add_option("--seed", seed, "seed for random batteries");
  certify->add_option("--out", out, "write JSON results (use - for stdout)");

  auto* curvature = app.add_subcommand("curvature", "curvature of a diagonal metric at a point");
  curvature->add_option("--chart", chart, "flat:N | polar:N | sphere-stereo:N | chart.json")->required();
  curvature->add_option("--at", at, "comma-separated coordinates")->required();
  curvature->add_option("--out", out, "write JSON (use - for stdout)");

  auto* lemma = app.add_subcommand("lemma", "random battery for the Jv in Rv + V lemma");
  lemma->add_option("--trials", trials, "battery size")->check(CLI::PositiveNumber);
  lemma->add_option("--seed", seed, "seed");
  lemma->add_option("--tol", lemma_tol, "relative reconstruction tolerance")->check(CLI::PositiveNumber);
  lemma->add_option("--out", out, "write JSON (use - for stdout)");

  auto* merge = app.add_subcommand("report-merge", "merge obstruction reports, keeping the best frame");
  merge->add_option("reports", inputs, "report files")->required();
  merge->add_option("--out", out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    cfg.seed = seed;
    if (check->parsed()) return cmd_check(space, cfg, out);
    if (certify->parsed()) return cmd_certify(space, trials, seed, out);
    if (curvature->parsed()) return cmd_curvature(chart, at, out);
    if (lemma->parsed()) return cmd_lemma(trials, seed, lemma_tol, out);
    if (merge->parsed()) return cmd_report_merge(inputs, out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const oc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const bool usage = e.kind() == oc::ErrorKind::ParseError || e.kind() == oc::ErrorKind::InvalidDimension ||
                       e.kind() == oc::ErrorKind::OutOfDomain || e.kind() == oc::ErrorKind::DimensionMismatch;
    return usage ? kExitUsage : kExitFailed;
  }
  return kExitUsage;
}
