#include "feasib/experiment/figure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace feasib::experiment {

namespace {

constexpr int kCurveSamples = 720;
constexpr const char* kColorA = "#1f77b4";
constexpr const char* kColorB = "#d62728";
constexpr const char* kColorX = "#2ca02c";
constexpr const char* kColorY = "#9467bd";

std::string n(double v) { return fmt::format("{:.9g}", v); }

struct Bounds {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void add(double x, double y) {
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
  void add(const Vector& p) { add(p[0], p[1]); }
  bool empty() const { return !(min_x <= max_x); }
};

// Closed boundary of a compact 2D body, or nothing for a halfspace.
std::vector<Vector> closed_boundary(const ConvexBody& body) {
  std::vector<Vector> pts;
  auto round = [&](const Vector& c, const Matrix& map) {
    for (int i = 0; i < kCurveSamples; ++i) {
      const double t = 2.0 * std::numbers::pi * i / kCurveSamples;
      Vector u(2);
      u << std::cos(t), std::sin(t);
      pts.push_back(c + map * u);
    }
  };
  if (const auto* e = std::get_if<Ellipsoid>(&body.variant())) {
    const Vector radii = e->eigenvalues().cwiseSqrt().cwiseInverse();
    round(e->center(), e->eigenvectors() * radii.asDiagonal());
  } else if (const auto* b = std::get_if<Ball>(&body.variant())) {
    round(b->center(), b->radius() * Matrix::Identity(2, 2));
  } else if (const auto* b = std::get_if<Box>(&body.variant())) {
    const Vector& lo = b->lower();
    const Vector& hi = b->upper();
    for (const auto& [x, y] : {std::pair{lo[0], lo[1]}, std::pair{hi[0], lo[1]},
                               std::pair{hi[0], hi[1]}, std::pair{lo[0], hi[1]}}) {
      Vector p(2);
      p << x, y;
      pts.push_back(p);
    }
  }
  return pts;
}

std::string polyline(const std::vector<Vector>& pts, bool closed) {
  std::string out;
  for (const Vector& p : pts) out += fmt::format("{},{} ", n(p[0]), n(p[1]));
  if (closed && !pts.empty()) out += fmt::format("{},{}", n(pts.front()[0]), n(pts.front()[1]));
  return out;
}

std::string body_svg(const ConvexBody& body, const char* id, const char* color, const Bounds& view) {
  if (const auto* h = std::get_if<Halfspace>(&body.variant())) {
    const Vector& a = h->normal();
    const Vector base = (h->offset() / a.squaredNorm()) * a;
    Vector tangent(2);
    tangent << -a[1], a[0];
    tangent.normalize();
    const double reach = 4.0 * (std::hypot(view.max_x - view.min_x, view.max_y - view.min_y) +
                                base.norm() + std::hypot(view.min_x, view.min_y) +
                                std::hypot(view.max_x, view.max_y));
    const Vector p = base - reach * tangent;
    const Vector q = base + reach * tangent;
    return fmt::format(
        "  <line id=\"{}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\" "
        "vector-effect=\"non-scaling-stroke\"/>\n",
        id, n(p[0]), n(p[1]), n(q[0]), n(q[1]), color);
  }
  return fmt::format(
      "  <polygon id=\"{}\" points=\"{}\" fill=\"{}\" fill-opacity=\"0.12\" stroke=\"{}\" "
      "stroke-width=\"2\" vector-effect=\"non-scaling-stroke\"/>\n",
      id, polyline(closed_boundary(body), false), color, color);
}

std::string path_svg(const std::vector<Vector>& pts, const char* name, const char* color,
                     double marker_r) {
  if (pts.empty()) return {};
  std::string out = fmt::format(
      "  <polyline id=\"{}-path\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" "
      "vector-effect=\"non-scaling-stroke\"/>\n",
      name, polyline(pts, false), color);
  out += fmt::format("  <g id=\"{}-iterates\" fill=\"{}\">\n", name, color);
  for (const Vector& p : pts) {
    out += fmt::format("    <circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>\n", n(p[0]), n(p[1]), n(0.5 * marker_r));
  }
  out += "  </g>\n";
  out += fmt::format(
      "  <circle id=\"{}-start\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"white\" stroke=\"{}\" "
      "stroke-width=\"1.5\" vector-effect=\"non-scaling-stroke\"/>\n",
      name, n(pts.front()[0]), n(pts.front()[1]), n(marker_r), color);
  out += fmt::format(
      "  <circle id=\"{}-end\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" stroke=\"black\" "
      "stroke-width=\"1\" vector-effect=\"non-scaling-stroke\"/>\n",
      name, n(pts.back()[0]), n(pts.back()[1]), n(marker_r), color);
  return out;
}

}  // namespace

std::string render_svg(const InstanceConfig& config, const std::vector<TraceRow>& trace) {
  if (config.dimension != 2) {
    throw UnsupportedOperation(fmt::format("figures need a 2D instance (got dimension {})", config.dimension));
  }
  const ConvexBody a = build_body(config.set_a);
  const ConvexBody b = build_body(config.set_b);

  std::vector<Vector> xs;
  std::vector<Vector> ys;
  for (const TraceRow& row : trace) {
    if (row.x.size() != 2 || row.y.size() != 2) {
      throw UnsupportedOperation("figures need a 2D trace");
    }
    xs.push_back(row.x);
    ys.push_back(row.y);
  }

  Bounds box;
  for (const ConvexBody* body : {&a, &b}) {
    for (const Vector& p : closed_boundary(*body)) box.add(p);
  }
  for (const Vector& p : xs) box.add(p);
  for (const Vector& p : ys) box.add(p);
  box.add(config.x0);
  if (config.y0) box.add(*config.y0);
  for (const ConvexBody* body : {&a, &b}) {
    if (const auto* h = std::get_if<Halfspace>(&body->variant())) {
      box.add((h->offset() / h->normal().squaredNorm()) * h->normal());
    }
  }
  if (box.empty()) box.add(-1.0, -1.0);
  const double span = std::max({box.max_x - box.min_x, box.max_y - box.min_y, 1e-6});
  const double pad = 0.08 * span;
  Bounds view{box.min_x - pad, box.min_y - pad, box.max_x + pad, box.max_y + pad};
  const double w = view.max_x - view.min_x;
  const double h = view.max_y - view.min_y;
  const double px_w = 800.0;
  const double px_h = std::clamp(px_w * h / w, 200.0, 1600.0);
  const double marker_r = 0.008 * std::max(w, h);

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\" "
      "preserveAspectRatio=\"xMidYMid meet\">\n",
      n(px_w), n(px_h), n(view.min_x), n(-view.max_y), n(w), n(h));
  svg += fmt::format("<title>{} ({})</title>\n", config.name, to_string(config.solver));
  svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
                     n(view.min_x), n(-view.max_y), n(w), n(h));
  svg += "<g id=\"problem\" transform=\"scale(1,-1)\">\n";
  svg += body_svg(a, "set-a", kColorA, view);
  svg += body_svg(b, "set-b", kColorB, view);
  svg += path_svg(xs, "x", kColorX, marker_r);
  svg += path_svg(ys, "y", kColorY, marker_r);
  svg += "</g>\n";

  const double font = 0.03 * std::max(w, h);
  const double lx = view.min_x + 0.02 * w;
  double ly = -view.max_y + 0.02 * h + font;
  svg += fmt::format("<g id=\"legend\" font-family=\"sans-serif\" font-size=\"{}\">\n", n(font));
  const std::pair<const char*, const char*> entries[] = {
      {kColorA, "set A"}, {kColorB, "set B"}, {kColorX, "x iterates (in A)"}, {kColorY, "y iterates (in B)"}};
  for (const auto& [color, label] : entries) {
    svg += fmt::format("  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n", n(lx),
                       n(ly - 0.8 * font), n(font), n(0.8 * font), color);
    svg += fmt::format("  <text x=\"{}\" y=\"{}\">{}</text>\n", n(lx + 1.4 * font), n(ly), label);
    ly += 1.3 * font;
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

void render_figure(const std::filesystem::path& trace_csv, const InstanceConfig& config,
                   const std::filesystem::path& svg_out) {
  const std::string svg = render_svg(config, read_trace_csv(trace_csv));
  if (svg_out.has_parent_path()) std::filesystem::create_directories(svg_out.parent_path());
  std::ofstream out(svg_out, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", svg_out.string()));
  out << svg;
}

}  // namespace feasib::experiment
