#include "bergman/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "bergman/errors.hpp"

namespace bergman {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_band_csv(const std::string& path, const BandReport& report) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw computation_error("cannot open " + path + " for writing");
  f << "t,z_abs,measured,envelope,ratio,error,lower,upper,ok,excluded\r\n";
  for (const auto& r : report.rows) {
    f << format_double(r.t) << ',' << format_double(r.z_abs) << ','
      << format_double(r.measured) << ',' << format_double(r.envelope) << ','
      << format_double(r.ratio) << ',' << format_double(r.error) << ','
      << format_double(r.lower) << ',' << format_double(r.upper) << ','
      << (r.ok ? 1 : 0) << ',' << (r.excluded ? 1 : 0) << "\r\n";
  }
}

namespace {

struct Mapper {
  double x0, x1, y0, y1;  // data ranges (log10)
  double px0 = 80, px1 = 760, py0 = 540, py1 = 40;
  double x(double lx) const { return px0 + (lx - x0) / (x1 - x0) * (px1 - px0); }
  double y(double ly) const { return py0 + (ly - y0) / (y1 - y0) * (py1 - py0); }
};

}  // namespace

void write_band_svg(const std::string& path, const BandReport& report) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw computation_error("cannot open " + path + " for writing");

  double lx0 = 1e300, lx1 = -1e300, ly0 = 1e300, ly1 = -1e300;
  for (const auto& r : report.rows) {
    if (r.excluded || !(r.ratio > 0.0)) continue;
    lx0 = std::min(lx0, std::log10(r.t));
    lx1 = std::max(lx1, std::log10(r.t));
    ly0 = std::min(ly0, std::log10(r.ratio));
    ly1 = std::max(ly1, std::log10(r.ratio));
  }
  if (lx0 > lx1) {
    lx0 = 0;
    lx1 = 1;
    ly0 = 0;
    ly1 = 1;
  }
  const double pad = std::max(0.2, 0.1 * (ly1 - ly0));
  ly0 -= pad;
  ly1 += pad;
  Mapper m{lx0, lx1, ly0, ly1};

  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
       "viewBox=\"0 0 800 600\">\n";
  f << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  f << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
    << report.name << " (ratio measured/envelope vs t)</text>\n";
  // axes
  f << "<line x1=\"80\" y1=\"540\" x2=\"760\" y2=\"540\" stroke=\"black\"/>\n";
  f << "<line x1=\"80\" y1=\"540\" x2=\"80\" y2=\"40\" stroke=\"black\"/>\n";
  // decade ticks
  for (int d = static_cast<int>(std::ceil(lx0)); d <= std::floor(lx1); ++d) {
    const double px = m.x(d);
    f << "<line x1=\"" << px << "\" y1=\"540\" x2=\"" << px
      << "\" y2=\"544\" stroke=\"black\"/>\n";
    f << "<text x=\"" << px << "\" y=\"560\" text-anchor=\"middle\" font-size=\"11\">1e"
      << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ly0)); d <= std::floor(ly1); ++d) {
    const double py = m.y(d);
    f << "<line x1=\"76\" y1=\"" << py << "\" x2=\"80\" y2=\"" << py
      << "\" stroke=\"black\"/>\n";
    f << "<text x=\"72\" y=\"" << py + 4
      << "\" text-anchor=\"end\" font-size=\"11\">1e" << d << "</text>\n";
  }
  // band reference lines
  for (double band : {report.c_lo, report.c_hi}) {
    if (!(band > 0.0)) continue;
    const double py = m.y(std::log10(band));
    f << "<line x1=\"80\" y1=\"" << py << "\" x2=\"760\" y2=\"" << py
      << "\" stroke=\"#999999\" stroke-dasharray=\"6,4\"/>\n";
  }
  // ratio polyline
  f << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (const auto& r : report.rows) {
    if (r.excluded || !(r.ratio > 0.0)) continue;
    f << m.x(std::log10(r.t)) << ',' << m.y(std::log10(r.ratio)) << ' ';
  }
  f << "\"/>\n";
  f << "<text x=\"400\" y=\"590\" text-anchor=\"middle\" font-size=\"13\">t "
       "(log)</text>\n";
  f << "<text x=\"24\" y=\"300\" text-anchor=\"middle\" font-size=\"13\" "
       "transform=\"rotate(-90 24 300)\">ratio (log)</text>\n";
  f << "</svg>\n";
}

}  // namespace bergman
