#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "smcone/error.hpp"

namespace smcone::bench {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// t[p][s]: seconds for solver s on problem p, +inf on failure.
struct TimingTable {
  std::vector<std::string> solvers;
  std::vector<std::string> problems;
  std::vector<std::vector<double>> t;
};

struct RatioTable {
  std::vector<std::vector<double>> r;  // r[p][s]
  std::vector<bool> all_failed;        // per problem: no solver succeeded
};

/// r[p][s] = t[p][s] / min_s' t[p][s'].
inline RatioTable performance_ratios(const TimingTable& table) {
  if (table.t.empty() || table.solvers.empty()) {
    throw Error(ErrorCode::InvalidParameter, "timing table is empty");
  }
  RatioTable out;
  for (const auto& row : table.t) {
    if (row.size() != table.solvers.size()) {
      throw Error(ErrorCode::DimensionMismatch, "timing table is not rectangular");
    }
    const double best = *std::min_element(row.begin(), row.end());
    std::vector<double> r(row.size(), kInf);
    const bool failed = !std::isfinite(best);
    if (!failed) {
      for (std::size_t s = 0; s < row.size(); ++s) {
        if (std::isfinite(row[s])) r[s] = row[s] / best;
      }
    }
    out.r.push_back(std::move(r));
    out.all_failed.push_back(failed);
  }
  return out;
}

/// rho[s][k] = |{p : r[p][s] <= taus[k]}| / |P|.
inline std::vector<std::vector<double>> dm_profile(const std::vector<std::vector<double>>& r,
                                                   const std::vector<double>& taus) {
  if (r.empty()) return {};
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (taus[k] < 1.0 || (k > 0 && taus[k] < taus[k - 1])) {
      throw Error(ErrorCode::InvalidParameter, "tau grid must be ascending and >= 1");
    }
  }
  const std::size_t nsolvers = r.front().size();
  const double np = double(r.size());
  std::vector<std::vector<double>> rho(nsolvers, std::vector<double>(taus.size(), 0.0));
  for (std::size_t s = 0; s < nsolvers; ++s) {
    for (std::size_t k = 0; k < taus.size(); ++k) {
      std::size_t count = 0;
      for (const auto& row : r) count += row[s] <= taus[k] ? 1 : 0;
      rho[s][k] = double(count) / np;
    }
  }
  return rho;
}

/// Log-spaced grid from 1 to tau_max.
inline std::vector<double> tau_grid(double tau_max, std::size_t points) {
  std::vector<double> taus;
  if (points < 2) return {1.0};
  for (std::size_t k = 0; k < points; ++k) {
    taus.push_back(std::pow(tau_max, double(k) / double(points - 1)));
  }
  taus.front() = 1.0;
  return taus;
}

/// Shifted geometric mean exp(mean ln max(1, sigma + t_p)) - sigma, with
/// failures replaced by 100 times the largest finite time.
inline double sgm(const std::vector<double>& times, double sigma) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidParameter, "sgm shift must be >= 0");
  if (times.empty()) throw Error(ErrorCode::AllFailed, "no times");
  double worst = -kInf;
  for (double t : times) {
    if (std::isfinite(t)) worst = std::max(worst, t);
  }
  if (!std::isfinite(worst)) throw Error(ErrorCode::AllFailed, "every run failed");
  double acc = 0.0;
  for (double t : times) {
    const double tp = std::isfinite(t) ? t : 100.0 * worst;
    acc += std::log(std::max(1.0, sigma + tp));
  }
  return std::exp(acc / double(times.size())) - sigma;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Minimal SVG line plot of the profile (log10 tau on x, rho on y).
// ---------------------------------------------------------------------------

inline void write_profile_svg(std::ostream& os, const std::vector<std::string>& solvers,
                              const std::vector<double>& taus,
                              const std::vector<std::vector<double>>& rho) {
  const double W = 640, H = 400, L = 60, R = 150, T = 20, B = 50;
  const double pw = W - L - R, ph = H - T - B;
  const double xmax = std::max(1e-9, std::log10(taus.empty() ? 10.0 : taus.back()));
  auto px = [&](double tau) { return L + pw * std::log10(tau) / xmax; };
  auto py = [&](double v) { return T + ph * (1.0 - v); };
  static const char* colors[] = {"#0072bd", "#d95319", "#edb120", "#7e2f8e",
                                 "#77ac30", "#4dbeee", "#a2142f"};
  char buf[160];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                "stroke=\"black\"/>\n",
                L, T, pw, ph);
  os << buf;
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"end\">%.2f</text>\n",
                  L - 5, py(v) + 4, v);
    os << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" text-anchor=\"middle\">"
                "log10(tau)  [max %.3g]</text>\n",
                L + pw / 2, H - 15, taus.empty() ? 1.0 : taus.back());
  os << buf;
  for (std::size_t s = 0; s < rho.size(); ++s) {
    const char* color = colors[s % 7];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < taus.size(); ++k) {
      // step plot: horizontal then vertical
      if (k > 0) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(taus[k]), py(rho[s][k - 1]));
        os << buf;
      }
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(taus[k]), py(rho[s][k]));
      os << buf;
    }
    os << "\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" fill=\"%s\">", L + pw + 10,
                  T + 16.0 * double(s + 1), color);
    os << buf << xml_escape(solvers[s]) << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace smcone::bench
