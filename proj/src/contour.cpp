#include "spacelike/contour.hpp"

#include <sstream>

namespace spacelike::contour {

void throw_nonfinite(Complex node) {
  std::ostringstream os;
  os << "contour integrand is not finite at node (" << node.real() << ", "
     << node.imag() << "i)";
  throw std::runtime_error(os.str());
}

NodeTable circle_nodes(const CircleContour& c) {
  if (c.radius <= 0.0) throw std::invalid_argument("circle radius must be > 0");
  if (c.node_count < 8) throw std::invalid_argument("circle node_count must be >= 8");
  NodeTable t;
  t.node.reserve(c.node_count);
  t.weight.reserve(c.node_count);
  for (int j = 0; j < c.node_count; ++j) {
    const double th = 2.0 * 3.14159265358979323846 * j / c.node_count;
    const Complex e{std::cos(th), std::sin(th)};
    t.node.push_back(c.center + c.radius * e);
    t.weight.push_back(e * (c.radius / c.node_count));
  }
  return t;
}

NodeTable vline_nodes(const VerticalLineContour& c) {
  if (c.real_part <= 0.0) throw std::invalid_argument("vline real_part must be > 0");
  if (c.half_length <= c.real_part)
    throw std::invalid_argument("vline half_length must exceed real_part");
  const int panels = std::max(1, (c.node_count + 15) / 16);
  const double h = 2.0 * c.half_length / panels;
  NodeTable t;
  t.node.reserve(panels * 16);
  t.weight.reserve(panels * 16);
  const double norm = 0.5 * h / (2.0 * 3.14159265358979323846);
  for (int p = 0; p < panels; ++p) {
    const double mid = -c.half_length + (p + 0.5) * h;
    for (int j = 0; j < 8; ++j) {
      for (int s = -1; s <= 1; s += 2) {
        const double y = mid + s * 0.5 * h * detail::kGL16X[j];
        t.node.push_back(Complex{c.real_part, y});
        t.weight.push_back(Complex{detail::kGL16W[j] * norm, 0.0});
      }
    }
  }
  return t;
}

Integral integrate_circle(const ComplexFunction& f, const CircleContour& c) {
  return integrate_circle([&](Complex z) { return f(z); }, c);
}

Integral integrate_vline(const ComplexFunction& f, const VerticalLineContour& c) {
  return integrate_vline([&](Complex w) { return f(w); }, c);
}

}  // namespace spacelike::contour
