// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "gltmean/experiments.hpp"

namespace gltmean {

namespace {

// snprintf in the "C" locale: '.' decimal point, no grouping.
template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[128];
  const int len = std::snprintf(buf, sizeof buf, f, args...);
  return std::string(buf, std::size_t(std::max(0, len)));
}

std::string num(double v) { return fmt("%.10e", v); }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw Error(Errc::io, "failed writing '" + path.string() + "'");
}

}  // namespace

std::string report_csv(const ExperimentReport& r) {
  std::string s = "n,d_n,lambda_min,lambda_max,cond2,zero_fraction,sup_dist,mean_abs_dist\n";
  for (const auto& row : r.rows) {
    s += fmt("%ld,%ld,", row.n, row.d_n) + num(row.lambda_min) + "," + num(row.lambda_max) + "," +
         fmt("%.3e", row.cond2) + "," + fmt("%.6f", row.zero_fraction) + "," + num(row.sup_dist) +
         "," + num(row.mean_abs_dist) + "\n";
  }
  return s;
}

std::string alpha_csv(const ExperimentReport& r) {
  std::string s = "j,alpha_j\n";
  for (std::size_t j = 0; j < r.alpha.size(); ++j) s += fmt("%zu,%.6f\n", j + 1, r.alpha[j]);
  return s;
}

std::string quantiles_csv(const SpectrumSample& sp) {
  std::string s = "t,lambda\n";
  const double dn = double(sp.values.size());
  for (std::size_t i = 0; i < sp.values.size(); ++i)
    s += fmt("%.10f,", (double(i) + 0.5) / dn) + num(sp.values[i]) + "\n";
  return s;
}

std::string symbol_csv(const QuantileCurve& c) {
  std::string s = "t,value\n";
  const double m = double(c.values.size());
  for (std::size_t i = 0; i < c.values.size(); ++i)
    s += fmt("%.10f,", (double(i) + 0.5) / m) + num(c.values[i]) + "\n";
  return s;
}

std::string overlay_svg(const ExperimentReport& r, std::size_t index) {
  const SpectrumSample& sp = r.spectra.at(index);
  constexpr double w = 640, h = 400, pad = 40;
  double top = std::max(r.symbol_max, sp.values.empty() ? 0.0 : sp.values.back());
  double bottom = std::min(0.0, sp.values.empty() ? 0.0 : sp.values.front());
  if (!(top > bottom)) top = bottom + 1;
  auto px = [&](double t) { return pad + t * (w - 2 * pad); };
  auto py = [&](double v) { return h - pad - (v - bottom) / (top - bottom) * (h - 2 * pad); };

  std::string s = fmt("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\">\n", w, h);
  s += fmt("<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"#888\"/>\n",
           pad, pad, w - 2 * pad, h - 2 * pad);
  s += "<text x=\"" + fmt("%g", pad) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" +
       r.id + fmt(", n = %ld", sp.n) + "</text>\n";
  s += "<polyline fill=\"none\" stroke=\"#c00\" stroke-width=\"2\" points=\"";
  const double m = double(r.curve.values.size());
  for (std::size_t i = 0; i < r.curve.values.size(); ++i)
    s += fmt("%.2f,%.2f ", px((double(i) + 0.5) / m), py(r.curve.values[i]));
  s += "\"/>\n";
  const double dn = double(sp.values.size());
  for (std::size_t i = 0; i < sp.values.size(); ++i)
    s += fmt("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1.5\" fill=\"#06c\"/>\n",
             px((double(i) + 0.5) / dn), py(sp.values[i]));
  s += "</svg>\n";
  return s;
}

std::string format_report(const ExperimentReport& r) {
  std::string s = r.id + ": " + r.description + "\n";
  s += std::string("precision ") + precision_name(r.precision) +
       fmt(", symbol range [%.8f, %.8f]\n\n", r.symbol_min, r.symbol_max);

  s += "     n |   tau_j (lambda_min) |  alpha_j\n";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    s += fmt("%6ld | %20.4e | ", r.rows[i].n, r.rows[i].lambda_min);
    s += i == 0 ? std::string("        -") : fmt("%9.4f", r.alpha[i - 1]);
    s += "\n";
  }
  s += "\n     n |  d_n |  Min. eig.  |  Max. eig.  |  cond2(G_n)\n";
  for (const auto& row : r.rows)
    s += fmt("%6ld | %4ld | %11.4e | %11.8f | %11.3e\n", row.n, row.d_n, row.lambda_min,
             row.lambda_max, row.cond2);
  const double target = r.exact_target.value_or(r.target_measure);
  s += fmt("\n     n | Prop.<=%.3g | Target |  Error | sup_dist | mean_abs_dist\n", r.threshold);
  for (const auto& row : r.rows)
    s += fmt("%6ld | %10.4f | %6.4f | %6.4f | %8.4f | %13.4e\n", row.n, row.zero_fraction, target,
             std::abs(target - row.zero_fraction), row.sup_dist, row.mean_abs_dist);
  s += fmt("\nzero measure of the symbol on the grid: %.5f", r.target_measure);
  if (r.exact_target) s += fmt(" (exact %.5f)", *r.exact_target);
  s += "\n";
  return s;
}

std::vector<std::filesystem::path> write_report_files(const ExperimentReport& r,
                                                      const std::filesystem::path& dir, bool svg) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::io, "cannot create output directory '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> files;
  auto emit = [&](const std::string& name, const std::string& text) {
    const auto path = dir / name;
    write_file(path, text);
    files.push_back(path);
  };
  emit("report_" + r.id + ".csv", report_csv(r));
  emit("alpha_" + r.id + ".csv", alpha_csv(r));
  emit("symbol_" + r.id + ".csv", symbol_csv(r.curve));
  for (std::size_t i = 0; i < r.spectra.size(); ++i) {
    const std::string stem = r.id + "_" + std::to_string(r.spectra[i].n);
    emit("quantiles_" + stem + ".csv", quantiles_csv(r.spectra[i]));
    if (svg) emit("overlay_" + stem + ".svg", overlay_svg(r, i));
  }
  return files;
}

}  // namespace gltmean
