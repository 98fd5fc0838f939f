#include "zetadyn/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace zetadyn::render {

using mp::Complex;
using mp::Real;

Rgb quadrant_color(QuadrantClass c) {
  switch (c) {
    case QuadrantClass::Axes: return {0, 0, 0};
    case QuadrantClass::RichI: return {0, 70, 230};      // rich blue
    case QuadrantClass::PaleI: return {160, 190, 255};   // pale blue
    case QuadrantClass::RichII: return {220, 30, 30};    // rich red
    case QuadrantClass::PaleII: return {255, 170, 170};  // pale red
    case QuadrantClass::RichIII: return {230, 200, 0};   // rich yellow
    case QuadrantClass::PaleIII: return {255, 245, 160};  // pale yellow
    case QuadrantClass::RichIV: return {0, 170, 60};     // rich green
    case QuadrantClass::PaleIV: return {170, 255, 190};  // pale green
  }
  return kErrorColor;
}

QuadrantImage quadrant_plot(const Evaluator& f, const Complex& target_shift, const Box& box,
                            long res, double disk_radius, const PrecisionContext& precision,
                            Exec mode) {
  if (res < 16) throw std::invalid_argument("quadrant_plot: resolution must be >= 16");
  QuadrantImage img;
  img.box = box;
  img.width = res;
  img.height = res;
  img.disk_radius = disk_radius;
  img.pixels.assign(res * res, QuadrantClass::Axes);
  img.error_mask.assign(res * res, 0);

  const mpfr_prec_t p = precision.prec();
  const Real step = Real(box.side, p) / res;
  const Real x0 = Real(box.center.re().to_double() - box.side / 2, p);
  const Real y_top = Real(box.center.im().to_double() + box.side / 2, p);
  const double axis_eps = 1e-4 * disk_radius;

  parallel_for(res * res, mode, [&](long idx) {
    long i = idx % res, j = idx / res;
    // cell centers; row 0 at the top of the image
    Complex s{x0 + step * i + step / 2L, y_top - step * j - step / 2L};
    try {
      Complex v = f(s, precision) - target_shift;
      auto cls = rootfind::quadrant_class(v, disk_radius, axis_eps);
      img.pixels[idx] = cls.cls;
      if (cls.flagged) img.error_mask[idx] = 1;
    } catch (const Error&) {
      img.error_mask[idx] = 1;
    }
  });
  return img;
}

QuadrantImage quadrant_plot(const FunctionSpec& f, const Complex& target_shift, const Box& box,
                            long res, double disk_radius, const PrecisionContext& precision,
                            Exec mode) {
  Evaluator ev = [f](const Complex& s, const PrecisionContext& ctx) { return eval_map(f, s, ctx); };
  return quadrant_plot(ev, target_shift, box, res, disk_radius, precision, mode);
}

BasinImage basin_plot(const Box& box, long res, long max_iter, const PrecisionContext& precision,
                      Exec mode) {
  if (res < 16) throw std::invalid_argument("basin_plot: resolution must be >= 16");
  BasinImage img;
  img.box = box;
  img.width = res;
  img.height = res;
  img.pixels.assign(res * res, orbit::Fate::Undecided);
  img.steps.assign(res * res, 0);

  const mpfr_prec_t p = precision.prec();
  const Real step = Real(box.side, p) / res;
  const Real x0 = Real(box.center.re().to_double() - box.side / 2, p);
  const Real y_top = Real(box.center.im().to_double() + box.side / 2, p);

  parallel_for(res * res, mode, [&](long idx) {
    long i = idx % res, j = idx / res;
    Complex s{x0 + step * i + step / 2L, y_top - step * j - step / 2L};
    orbit::OrbitResult r = orbit::forward_classify(s, max_iter, precision);
    img.pixels[idx] = r.fate;
    img.steps[idx] = static_cast<std::uint16_t>(std::min<long>(r.steps, 65535));
  });
  return img;
}

RgbImage colorize(const QuadrantImage& q) {
  RgbImage img;
  img.width = q.width;
  img.height = q.height;
  img.pixels.resize(q.pixels.size());
  for (std::size_t i = 0; i < q.pixels.size(); ++i)
    img.pixels[i] = q.error_mask[i] ? kErrorColor : quadrant_color(q.pixels[i]);
  return img;
}

RgbImage colorize(const BasinImage& b) {
  RgbImage img;
  img.width = b.width;
  img.height = b.height;
  img.pixels.resize(b.pixels.size());
  for (std::size_t i = 0; i < b.pixels.size(); ++i) {
    switch (b.pixels[i]) {
      case orbit::Fate::ConvergedToPhi: img.pixels[i] = {25, 25, 70}; break;   // dark
      case orbit::Fate::Escaped: img.pixels[i] = {235, 235, 225}; break;       // light
      case orbit::Fate::PoleHit: img.pixels[i] = {255, 140, 0}; break;
      case orbit::Fate::Undecided: img.pixels[i] = {120, 120, 120}; break;
    }
  }
  return img;
}

RgbImage overlay(const BasinImage& basin, const QuadrantImage& quad, double alpha) {
  if (basin.width != quad.width || basin.height != quad.height ||
      basin.box.side != quad.box.side)
    throw DimensionMismatch();
  RgbImage base = colorize(basin);
  RgbImage top = colorize(quad);
  RgbImage out;
  out.width = base.width;
  out.height = base.height;
  out.pixels.resize(base.pixels.size());
  auto blend = [alpha](std::uint8_t a, std::uint8_t b) {
    double v = (1.0 - alpha) * a + alpha * b;
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
  };
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    out.pixels[i] = {blend(base.pixels[i].r, top.pixels[i].r),
                     blend(base.pixels[i].g, top.pixels[i].g),
                     blend(base.pixels[i].b, top.pixels[i].b)};
  }
  return out;
}

void write_ppm(const RgbImage& img, const std::string& path, const std::string& comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_ppm: cannot open " + path);
  out << "P6\n";
  if (!comment.empty()) out << "# " << comment << "\n";
  out << img.width << " " << img.height << "\n255\n";
  for (const Rgb& px : img.pixels) {
    char buf[3] = {static_cast<char>(px.r), static_cast<char>(px.g), static_cast<char>(px.b)};
    out.write(buf, 3);
  }
}

PlotSpec everted_plot(const orbit::Branch& b, const spiralfit::PolarSeries& p, ChordMode chords) {
  PlotSpec spec;
  const long L = b.anchor.length();

  auto everted_xy = [](double logr, double theta) {
    return std::pair<double, double>{logr * std::cos(theta), logr * std::sin(theta)};
  };

  if (L == 1) {
    if (p.size() == 0) throw std::invalid_argument("everted_plot: empty series");
    PlotSpec::Series ser;
    ser.name = "branch";
    std::vector<std::pair<double, double>> xy(p.size());
    for (long k = 0; k < p.size(); ++k) xy[k] = everted_xy(p.logr[k], p.theta[k]);
    ser.points = xy;
    spec.series.push_back(std::move(ser));
    if (chords == ChordMode::ZetaMap || chords == ChordMode::IterLMap) {
      for (long k = 1; k < p.size(); ++k)
        spec.chords.push_back({xy[k].first, xy[k].second, xy[k - 1].first, xy[k - 1].second});
    }
    return spec;
  }

  // cycle branch: each subsequence everts around its own limit element,
  // displaced to legible centers on a circle of radius 1000
  const double R = 1000.0;
  std::vector<std::vector<std::pair<double, double>>> coords(L);
  std::vector<std::vector<long>> indices(L);
  for (long j = 0; j < L; ++j) {
    auto sub = spiralfit::unwrap_subsequence(b, j, p.c_offset);
    indices[j] = orbit::subsequence_indices(b, j);
    double cx = R * std::cos(2 * 3.14159265358979323846 * j / L);
    double cy = R * std::sin(2 * 3.14159265358979323846 * j / L);
    PlotSpec::Series ser;
    ser.name = "subsequence_" + std::to_string(j);
    for (long m = 0; m < sub.size(); ++m) {
      auto [x, y] = everted_xy(sub.logr[m], sub.theta[m]);
      ser.points.emplace_back(cx + x, cy + y);
    }
    coords[j] = ser.points;
    spec.series.push_back(std::move(ser));
  }
  // element k lives at subsequence k mod L, position k / L
  auto locate = [&](long k) { return coords[k % L][k / L]; };
  if (chords == ChordMode::ZetaMap) {
    for (long k = 1; k < b.length(); ++k) {
      auto [x1, y1] = locate(k);
      auto [x2, y2] = locate(k - 1);
      spec.chords.push_back({x1, y1, x2, y2});
    }
  } else if (chords == ChordMode::IterLMap) {
    for (long k = L; k < b.length(); ++k) {
      auto [x1, y1] = locate(k);
      auto [x2, y2] = locate(k - L);
      spec.chords.push_back({x1, y1, x2, y2});
    }
  }
  return spec;
}

namespace {

struct Bounds {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
};

Bounds plot_bounds(const PlotSpec& spec) {
  Bounds b;
  bool first = true;
  auto take = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    if (first) {
      b = {x, x, y, y};
      first = false;
    } else {
      b.xmin = std::min(b.xmin, x);
      b.xmax = std::max(b.xmax, x);
      b.ymin = std::min(b.ymin, y);
      b.ymax = std::max(b.ymax, y);
    }
  };
  for (const auto& s : spec.series)
    for (auto [x, y] : s.points) take(x, y);
  for (const auto& c : spec.chords) {
    take(c.x1, c.y1);
    take(c.x2, c.y2);
  }
  for (const auto& c : spec.overlays)
    for (auto [x, y] : c.samples) take(x, y);
  double dx = b.xmax - b.xmin, dy = b.ymax - b.ymin;
  if (dx <= 0) dx = 1;
  if (dy <= 0) dy = 1;
  b.xmin -= 0.05 * dx;
  b.xmax += 0.05 * dx;
  b.ymin -= 0.05 * dy;
  b.ymax += 0.05 * dy;
  return b;
}

const Rgb kSeriesPalette[6] = {{200, 30, 30}, {30, 60, 200}, {20, 150, 60},
                               {200, 140, 0}, {140, 40, 160}, {20, 150, 150}};

void draw_line(RgbImage& img, double x1, double y1, double x2, double y2, Rgb color) {
  long steps = static_cast<long>(std::max(std::abs(x2 - x1), std::abs(y2 - y1))) + 1;
  for (long t = 0; t <= steps; ++t) {
    double u = static_cast<double>(t) / steps;
    long x = static_cast<long>(std::lround(x1 + u * (x2 - x1)));
    long y = static_cast<long>(std::lround(y1 + u * (y2 - y1)));
    if (x >= 0 && x < img.width && y >= 0 && y < img.height) img.pixels[y * img.width + x] = color;
  }
}

}  // namespace

RgbImage render_plot(const PlotSpec& spec, long width, long height) {
  RgbImage img;
  img.width = width;
  img.height = height;
  img.pixels.assign(width * height, {255, 255, 255});
  Bounds b = plot_bounds(spec);

  auto px = [&](double x) { return (x - b.xmin) / (b.xmax - b.xmin) * (width - 1); };
  auto py = [&](double y) { return (b.ymax - y) / (b.ymax - b.ymin) * (height - 1); };

  // frame
  for (long x = 0; x < width; ++x) {
    img.pixels[x] = {200, 200, 200};
    img.pixels[(height - 1) * width + x] = {200, 200, 200};
  }
  for (long y = 0; y < height; ++y) {
    img.pixels[y * width] = {200, 200, 200};
    img.pixels[y * width + width - 1] = {200, 200, 200};
  }

  for (const auto& c : spec.chords) draw_line(img, px(c.x1), py(c.y1), px(c.x2), py(c.y2), {180, 180, 180});

  std::size_t ci = 0;
  for (const auto& curve : spec.overlays) {
    Rgb col = kSeriesPalette[(2 + ci++) % 6];
    for (std::size_t i = 1; i < curve.samples.size(); ++i)
      draw_line(img, px(curve.samples[i - 1].first), py(curve.samples[i - 1].second),
                px(curve.samples[i].first), py(curve.samples[i].second), col);
  }

  std::size_t si = 0;
  for (const auto& ser : spec.series) {
    Rgb col = kSeriesPalette[si++ % 6];
    for (auto [x, y] : ser.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      long cx = static_cast<long>(std::lround(px(x)));
      long cy = static_cast<long>(std::lround(py(y)));
      for (long dy = -1; dy <= 1; ++dy)
        for (long dx = -1; dx <= 1; ++dx) {
          long xx = cx + dx, yy = cy + dy;
          if (xx >= 0 && xx < width && yy >= 0 && yy < height) img.pixels[yy * width + xx] = col;
        }
    }
  }
  return img;
}

void write_plot_csv(const PlotSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("write_plot_csv: cannot open " + path);
  out << "series,x,y\n";
  out.precision(17);
  for (const auto& ser : spec.series)
    for (auto [x, y] : ser.points) out << ser.name << "," << x << "," << y << "\n";
  for (const auto& c : spec.overlays)
    for (auto [x, y] : c.samples) out << c.name << "," << x << "," << y << "\n";
}

void stats_plot(const PlotSpec& spec, const std::string& base_path, long width, long height) {
  write_ppm(render_plot(spec, width, height), base_path + ".ppm");
  write_plot_csv(spec, base_path + ".csv");
}

}  // namespace zetadyn::render
