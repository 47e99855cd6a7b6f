#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "expord/experiment.hpp"

namespace expord::svg {

// Geometry is computed in exact rationals and only converted to text at the
// last moment: 600 canvas units per probability unit, six fixed decimals.
// Identical inputs therefore render byte-identical files.
inline constexpr long kScale = 600;
inline constexpr long kMargin = 120;
inline constexpr long kCanvas = 2 * kMargin + kScale;

inline const char* stroke_color(std::size_t series) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  return colors[series % 4];
}

/// Fixed six-decimal rendering of an exact rational (round half away from
/// zero).
inline std::string fixed6(const Rational& v) {
  const Integer million(1000000);
  Integer num = numerator(v) * million * 2 + (v < 0 ? -denominator(v) : denominator(v));
  Integer scaled = num / (denominator(v) * 2);  // truncates toward zero
  const bool neg = scaled < 0;
  Integer mag = neg ? Integer(-scaled) : scaled;
  Integer whole = mag / million, frac = mag % million;
  std::string f = frac.str();
  f.insert(f.begin(), 6 - f.size(), '0');
  return (neg ? "-" : "") + whole.str() + "." + f;
}

inline Rational to_canvas_x(const Rational& x) { return kMargin + Rational(kScale) * x; }
inline Rational to_canvas_y(const Rational& y) {
  return kMargin + Rational(kScale) * (1 - y);  // y axis points up
}

inline std::string point_text(const Rational& x, const Rational& y) {
  return fixed6(to_canvas_x(x)) + "," + fixed6(to_canvas_y(y));
}

/// Exact 2D convex hull (monotone chain), returned counter-clockwise
/// starting from the lexicographically smallest point.
inline std::vector<RatVector> hull2d(std::vector<RatVector> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  auto cross = [](const RatVector& o, const RatVector& a, const RatVector& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<RatVector> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower hull
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {  // upper hull
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

namespace detail {

inline void header(std::ostringstream& out) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\""
      << kCanvas << "\" viewBox=\"0 0 " << kCanvas << " " << kCanvas << "\">\n";
  out << "<rect width=\"" << kCanvas << "\" height=\"" << kCanvas << "\" fill=\"white\"/>\n";
}

inline void axes(std::ostringstream& out) {
  const long x0 = kMargin, y0 = kMargin + kScale;
  out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 + kScale + 40
      << "\" y2=\"" << y0 << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\""
      << y0 - kScale - 40 << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << x0 + kScale + 8 << "\" y=\"" << y0 + 28
      << "\" font-family=\"sans-serif\" font-size=\"20\">E[u] in &#969;1</text>\n";
  out << "<text x=\"" << x0 - 24 << "\" y=\"" << y0 - kScale - 12
      << "\" font-family=\"sans-serif\" font-size=\"20\">E[u] in &#969;2</text>\n";
  out << "<text x=\"" << x0 - 18 << "\" y=\"" << y0 + 24
      << "\" font-family=\"sans-serif\" font-size=\"16\">0</text>\n";
  out << "<text x=\"" << x0 + kScale - 6 << "\" y=\"" << y0 + 24
      << "\" font-family=\"sans-serif\" font-size=\"16\">1</text>\n";
  out << "<text x=\"" << x0 - 24 << "\" y=\"" << y0 - kScale + 6
      << "\" font-family=\"sans-serif\" font-size=\"16\">1</text>\n";
}

inline void legend(std::ostringstream& out, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    const long y = kMargin - 60 + static_cast<long>(i) * 26;
    out << "<rect x=\"" << kMargin << "\" y=\"" << y << "\" width=\"18\" height=\"18\" fill=\""
        << stroke_color(i) << "\" fill-opacity=\"0.5\"/>\n";
    out << "<text x=\"" << kMargin + 26 << "\" y=\"" << y + 15
        << "\" font-family=\"sans-serif\" font-size=\"18\">" << names[i] << "</text>\n";
  }
}

}  // namespace detail

/// Zonotopes of two-state experiments as exact convex polygons.
inline std::string render_zon(const std::vector<Experiment>& es,
                              const std::vector<std::string>& names,
                              std::size_t cap = kRealizationCap) {
  std::ostringstream out;
  detail::header(out);
  detail::axes(out);
  detail::legend(out, names);
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (es[i].states() != 2) throw DimensionCap("zon plots need exactly 2 states");
    const auto hull = hull2d(zonotope_vertices(es[i], cap));
    out << "<polygon points=\"";
    for (std::size_t k = 0; k < hull.size(); ++k) {
      if (k) out << " ";
      out << point_text(hull[k][0], hull[k][1]);
    }
    out << "\" fill=\"" << stroke_color(i) << "\" fill-opacity=\"0.15\" stroke=\""
        << stroke_color(i) << "\" stroke-width=\"2\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

/// Conic spans of two-state experiments: the two extreme-slope boundary
/// rays, clipped exactly to the unit box.
inline std::string render_cone(const std::vector<Experiment>& es,
                               const std::vector<std::string>& names) {
  std::ostringstream out;
  detail::header(out);
  detail::axes(out);
  detail::legend(out, names);
  for (std::size_t i = 0; i < es.size(); ++i) {
    const Experiment& e = es[i];
    if (e.states() != 2) throw DimensionCap("cone plots need exactly 2 states");
    // Extreme columns by exact slope comparison x2/x1 (cross-multiplied).
    std::size_t lo = 0, hi = 0;
    auto less_slope = [&](std::size_t a, std::size_t b) {
      return e.matrix(1, a) * e.matrix(0, b) < e.matrix(1, b) * e.matrix(0, a);
    };
    for (std::size_t j = 1; j < e.realizations(); ++j) {
      if (less_slope(j, lo)) lo = j;
      if (less_slope(hi, j)) hi = j;
    }
    for (std::size_t j : {lo, hi}) {
      const Rational dx = e.matrix(0, j), dy = e.matrix(1, j);
      if (dx == 0 && dy == 0) continue;
      // Clip the ray t (dx, dy), t >= 0 to the unit box.
      Rational t;
      if (dx == 0)
        t = 1 / dy;
      else if (dy == 0)
        t = 1 / dx;
      else
        t = min_value(1 / dx, 1 / dy);
      out << "<line x1=\"" << fixed6(to_canvas_x(0)) << "\" y1=\"" << fixed6(to_canvas_y(0))
          << "\" x2=\"" << fixed6(to_canvas_x(t * dx)) << "\" y2=\""
          << fixed6(to_canvas_y(t * dy)) << "\" stroke=\"" << stroke_color(i)
          << "\" stroke-width=\"2\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

/// Posterior atoms on the simplex: N = 2 on a segment, N = 3 projected to
/// the standard triangle. Circle area is fixed; weights are printed.
inline std::string render_posteriors(const std::vector<Experiment>& es,
                                     const std::vector<std::string>& names,
                                     const Prior& mu0) {
  std::ostringstream out;
  detail::header(out);
  detail::legend(out, names);
  const std::size_t n = es.empty() ? 0 : es[0].states();
  if (n != 2 && n != 3) throw DimensionCap("posterior plots need 2 or 3 states");
  if (n == 2) {
    out << "<line x1=\"" << fixed6(to_canvas_x(0)) << "\" y1=\"" << fixed6(to_canvas_y(rat(1, 2)))
        << "\" x2=\"" << fixed6(to_canvas_x(1)) << "\" y2=\"" << fixed6(to_canvas_y(rat(1, 2)))
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  } else {
    out << "<polygon points=\"" << point_text(0, 0) << " " << point_text(1, 0) << " "
        << point_text(rat(1, 2), 1)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  }
  for (std::size_t i = 0; i < es.size(); ++i) {
    const auto dist = posteriors(es[i], mu0);
    for (const auto& atom : dist.atoms) {
      Rational x, y;
      if (n == 2) {
        x = atom.posterior[0];
        y = rat(1, 2);
      } else {
        // barycentric: corners (0,0), (1,0), (1/2,1)
        x = atom.posterior[1] + atom.posterior[2] / 2;
        y = atom.posterior[2];
      }
      out << "<circle cx=\"" << fixed6(to_canvas_x(x)) << "\" cy=\"" << fixed6(to_canvas_y(y))
          << "\" r=\"7\" fill=\"" << stroke_color(i) << "\" fill-opacity=\"0.7\"/>\n";
      out << "<text x=\"" << fixed6(to_canvas_x(x) + 10) << "\" y=\""
          << fixed6(to_canvas_y(y) - 10) << "\" font-family=\"sans-serif\" font-size=\"14\">"
          << render(atom.weight) << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace expord::svg
