#include "mvbandit/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "mvbandit/errors.hpp"

namespace mvbandit {
namespace {

struct CurvePoint {
  double t = 0.0;
  double mean = 0.0;
  double stderr_ = 0.0;
};

struct Curve {
  std::string policy;
  std::vector<CurvePoint> points;
};

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b",
                                    "#17becf", "#7f7f7f"};

std::string fmt2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

double parse_field(const std::string& s, int row, const char* name) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("aggregate CSV row " + std::to_string(row) +
                      ": field " + name + " is not numeric: \"" + s + "\"");
  }
}

}  // namespace

void plot_regret_csv(const std::string& csv_path, const std::string& svg_path,
                     const std::string& title_in) {
  std::ifstream in(csv_path);
  if (!in) throw ConfigError("cannot open " + csv_path);
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("aggregate CSV " + csv_path + " is empty");
  if (line != "policy,scenario,t,mean_regret,stderr,n_seeds")
    throw ConfigError("aggregate CSV row 1: unexpected header \"" + line + "\"");

  std::vector<Curve> curves;
  std::map<std::string, std::size_t> index;
  std::string scenario;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 6)
      throw ConfigError("aggregate CSV row " + std::to_string(row) +
                        ": expected 6 fields, got " +
                        std::to_string(fields.size()));
    CurvePoint pt;
    pt.t = parse_field(fields[2], row, "t");
    pt.mean = parse_field(fields[3], row, "mean_regret");
    pt.stderr_ = parse_field(fields[4], row, "stderr");
    if (pt.t < 1.0)
      throw ConfigError("aggregate CSV row " + std::to_string(row) +
                        ": t must be at least 1");
    scenario = fields[1];
    auto [it, inserted] = index.try_emplace(fields[0], curves.size());
    if (inserted) curves.push_back({fields[0], {}});
    curves[it->second].points.push_back(pt);
  }
  if (curves.empty())
    throw ConfigError("aggregate CSV " + csv_path + " has no data rows");

  double tmin = 1e300, tmax = 0.0, ymax = 0.0;
  for (const auto& c : curves)
    for (const auto& p : c.points) {
      tmin = std::min(tmin, p.t);
      tmax = std::max(tmax, p.t);
      ymax = std::max(ymax, p.mean + p.stderr_);
    }
  if (!(tmax > tmin))
    throw ConfigError("aggregate CSV needs at least two distinct t values");
  if (ymax <= 0.0) ymax = 1.0;
  ymax *= 1.05;

  const double W = 880, H = 560;
  const double L = 72, R = 24, Tm = 34, B = 56;
  const double xlo = std::log10(tmin), xhi = std::log10(tmax);
  auto X = [&](double t) {
    return L + (std::log10(t) - xlo) / (xhi - xlo) * (W - L - R);
  };
  auto Y = [&](double y) { return H - B - y / ymax * (H - B - Tm); };

  std::ofstream out(svg_path);
  if (!out) throw ConfigError("cannot open " + svg_path + " for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H
      << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H
      << "\" fill=\"white\"/>\n";

  // y ticks at a 1/2/5 step
  double rough = ymax / 5.0;
  double mag = std::pow(10.0, std::floor(std::log10(rough)));
  double step = mag;
  if (rough / mag > 5.0)
    step = 10.0 * mag;
  else if (rough / mag > 2.0)
    step = 5.0 * mag;
  else if (rough / mag > 1.0)
    step = 2.0 * mag;
  for (double y = 0.0; y <= ymax; y += step) {
    out << "<line x1=\"" << fmt2(L) << "\" y1=\"" << fmt2(Y(y)) << "\" x2=\""
        << fmt2(W - R) << "\" y2=\"" << fmt2(Y(y))
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt2(L - 8) << "\" y=\"" << fmt2(Y(y) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << (step >= 1.0 ? std::to_string(static_cast<long long>(y)) : fmt2(y))
        << "</text>\n";
  }
  // x ticks at powers of 10
  for (int e = static_cast<int>(std::ceil(xlo)); e <= xhi + 1e-9; ++e) {
    double t = std::pow(10.0, e);
    out << "<line x1=\"" << fmt2(X(t)) << "\" y1=\"" << fmt2(Tm) << "\" x2=\""
        << fmt2(X(t)) << "\" y2=\"" << fmt2(H - B)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt2(X(t)) << "\" y=\"" << fmt2(H - B + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">1e"
        << e << "</text>\n";
  }

  int color = 0;
  for (const auto& c : curves) {
    const char* col = kPalette[color % 8];
    ++color;
    // band: mean + stderr forward, mean - stderr (floored at 0) back
    out << "<polygon fill=\"" << col << "\" fill-opacity=\"0.15\" "
        << "stroke=\"none\" points=\"";
    for (const auto& p : c.points)
      out << fmt2(X(p.t)) << "," << fmt2(Y(p.mean + p.stderr_)) << " ";
    for (auto it = c.points.rbegin(); it != c.points.rend(); ++it)
      out << fmt2(X(it->t)) << ","
          << fmt2(Y(std::max(0.0, it->mean - it->stderr_))) << " ";
    out << "\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"" << col
        << "\" stroke-width=\"1.8\" points=\"";
    for (const auto& p : c.points)
      out << fmt2(X(p.t)) << "," << fmt2(Y(p.mean)) << " ";
    out << "\"/>\n";
  }

  // legend, top-left inside the axes
  double lx = L + 12, ly = Tm + 10;
  color = 0;
  for (const auto& c : curves) {
    const char* col = kPalette[color % 8];
    ++color;
    out << "<line x1=\"" << fmt2(lx) << "\" y1=\"" << fmt2(ly + 5)
        << "\" x2=\"" << fmt2(lx + 26) << "\" y2=\"" << fmt2(ly + 5)
        << "\" stroke=\"" << col << "\" stroke-width=\"2.5\"/>\n";
    out << "<text x=\"" << fmt2(lx + 32) << "\" y=\"" << fmt2(ly + 9)
        << "\" font-family=\"sans-serif\" font-size=\"13\">" << c.policy
        << "</text>\n";
    ly += 18;
  }

  out << "<line x1=\"" << fmt2(L) << "\" y1=\"" << fmt2(H - B) << "\" x2=\""
      << fmt2(W - R) << "\" y2=\"" << fmt2(H - B)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << fmt2(L) << "\" y1=\"" << fmt2(Tm) << "\" x2=\""
      << fmt2(L) << "\" y2=\"" << fmt2(H - B)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << fmt2((L + W - R) / 2) << "\" y=\"" << fmt2(H - 14)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">t (log scale)</text>\n";
  out << "<text x=\"18\" y=\"" << fmt2((Tm + H - B) / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 "
      << fmt2((Tm + H - B) / 2)
      << ")\">mean intermediate regret</text>\n";
  std::string title = title_in.empty() ? scenario : title_in;
  out << "<text x=\"" << fmt2(W / 2) << "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << title << "</text>\n";
  out << "</svg>\n";
}

}  // namespace mvbandit
