#pragma once

#include <string>

#include "bergman/verify.hpp"

namespace bergman {

/// RFC-4180 quoting: fields containing comma, quote or newline are wrapped,
/// embedded quotes doubled.
std::string csv_escape(const std::string& field);

/// Headered CSV, one row per sweep point.
void write_band_csv(const std::string& path, const BandReport& report);

/// Self-contained log-log SVG: ratio curve against t with the empirical band
/// limits as reference lines.
void write_band_svg(const std::string& path, const BandReport& report);

std::string format_double(double v);

}  // namespace bergman
