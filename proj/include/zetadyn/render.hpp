#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>

#include "zetadyn/spiralfit.hpp"

namespace zetadyn::render {

struct DimensionMismatch : Error {
  DimensionMismatch() : Error("overlay: images must share box and resolution") {}
};

using rootfind::Box;
using rootfind::QuadrantClass;

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Fixed palette for the nine quadrant classes (rich = saturated, pale =
/// washed out) plus one error color for pixels whose evaluation failed.
Rgb quadrant_color(QuadrantClass c);
inline constexpr Rgb kErrorColor{255, 0, 255};

/// Per-pixel quadrant classification of g(s) = f(s) - target over a box.
/// Pixel (i, j) tests the cell center; row 0 is the top of the image.
struct QuadrantImage {
  Box box;
  long width = 0, height = 0;
  double disk_radius = 0;
  std::vector<QuadrantClass> pixels;
  std::vector<std::uint8_t> error_mask;

  QuadrantClass at(long i, long j) const { return pixels[j * width + i]; }
  bool failed(long i, long j) const { return error_mask[j * width + i] != 0; }
};

using Evaluator = std::function<mp::Complex(const mp::Complex&, const PrecisionContext&)>;

inline constexpr long kRenderDigits = 30;  // plots run at low fixed precision

QuadrantImage quadrant_plot(const Evaluator& f, const mp::Complex& target_shift, const Box& box,
                            long res, double disk_radius,
                            const PrecisionContext& precision = PrecisionContext::make(kRenderDigits, 10),
                            Exec mode = Exec::Parallel);
QuadrantImage quadrant_plot(const FunctionSpec& f, const mp::Complex& target_shift, const Box& box,
                            long res, double disk_radius,
                            const PrecisionContext& precision = PrecisionContext::make(kRenderDigits, 10),
                            Exec mode = Exec::Parallel);

/// Escape-time style basin image: per-pixel forward orbit fate.
struct BasinImage {
  Box box;
  long width = 0, height = 0;
  std::vector<orbit::Fate> pixels;
  std::vector<std::uint16_t> steps;

  orbit::Fate at(long i, long j) const { return pixels[j * width + i]; }
};

BasinImage basin_plot(const Box& box, long res, long max_iter,
                      const PrecisionContext& precision = PrecisionContext::make(kRenderDigits, 10),
                      Exec mode = Exec::Parallel);

struct RgbImage {
  long width = 0, height = 0;
  std::vector<Rgb> pixels;

  bool operator==(const RgbImage&) const = default;
};

RgbImage colorize(const QuadrantImage& q);
RgbImage colorize(const BasinImage& b);

/// Alpha-blend the quadrant classification over a basin rendering;
/// alpha = 0 keeps the basin, alpha = 1 shows the quadrant plot alone.
RgbImage overlay(const BasinImage& basin, const QuadrantImage& quad, double alpha);

/// Binary PPM (P6); byte-identical output for identical images. A nonempty
/// comment (e.g. the provenance tag) lands in the header.
void write_ppm(const RgbImage& img, const std::string& path, const std::string& comment = "");

/// Scatter/figure description: point series, chord segments, and analytic
/// overlay curves, with the raw data always written next to the rendering.
struct PlotSpec {
  struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
  };
  struct Segment {
    double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  };
  struct Curve {
    std::string name;
    std::vector<std::pair<double, double>> samples;
  };
  std::vector<Series> series;
  std::vector<Segment> chords;
  std::vector<Curve> overlays;
};

enum class ChordMode { None, ZetaMap, IterLMap };

/// Everted branch plot: each element at polar radius log r and angle theta,
/// so inward spirals render outward. Cycle branches place each subsequence
/// on its own displaced center; ZetaMap connects (v, zeta(v)) pairs,
/// IterLMap connects (v, zeta^L(v)) pairs within a subsequence.
PlotSpec everted_plot(const orbit::Branch& b, const spiralfit::PolarSeries& p, ChordMode chords);

RgbImage render_plot(const PlotSpec& spec, long width = 640, long height = 480);
void write_plot_csv(const PlotSpec& spec, const std::string& path);

/// Renders the spec to base_path.ppm and writes base_path.csv.
void stats_plot(const PlotSpec& spec, const std::string& base_path, long width = 640, long height = 480);

}  // namespace zetadyn::render
