#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gillum/figures.hpp"

namespace gillum {

enum class OutputFormat { Csv, Json, Svg };

std::string_view to_string(OutputFormat format);
/// Throws ConfigError for an unknown name.
OutputFormat parse_format(std::string_view name);

struct SvgOptions {
  bool log_x = true;
};

/// Throws ConfigError when the set is empty, a curve has no points, a value is
/// not finite or x is not strictly increasing. CSV additionally requires all
/// curves to share one x grid.
void validate_curves(const CurveSet& curves);

/// Header "x,<label>..."; one row per grid point; %.12g numbers.
std::string to_csv(const CurveSet& curves);
std::string to_json(const CurveSet& curves);
/// 800 x 600 canvas, one polyline per curve, ticks and a legend.
std::string to_svg(const CurveSet& curves, const SvgOptions& options = {});

std::string render(const CurveSet& curves, OutputFormat format, const SvgOptions& options = {});

/// Validates and renders before touching the file system; nothing is written
/// when either step fails. Throws std::runtime_error if the file cannot be
/// written.
void emit(const CurveSet& curves, OutputFormat format, const std::filesystem::path& path,
          const SvgOptions& options = {});

/// Parses text produced by to_csv back into a CurveSet (labels from the
/// header, x_label "x").
CurveSet parse_csv(std::string_view text);

}  // namespace gillum
