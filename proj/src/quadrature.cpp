#include "hefie/quadrature.hpp"

namespace hefie {

namespace {

QuadratureRule make_rule(std::vector<QuadratureRule::Point> pts, int degree) {
  QuadratureRule r;
  r.points = std::move(pts);
  r.degree = degree;
  return r;
}

// appends the 3 permutations of (a, a, 1-2a)
void add_sym3(std::vector<QuadratureRule::Point>& pts, double a, double w) {
  double b = 1.0 - 2.0 * a;
  pts.push_back({b, a, a, w});
  pts.push_back({a, b, a, w});
  pts.push_back({a, a, b, w});
}

// appends the 6 permutations of (a, b, 1-a-b)
void add_sym6(std::vector<QuadratureRule::Point>& pts, double a, double b,
              double w) {
  double c = 1.0 - a - b;
  pts.push_back({a, b, c, w});
  pts.push_back({a, c, b, w});
  pts.push_back({b, a, c, w});
  pts.push_back({b, c, a, w});
  pts.push_back({c, a, b, w});
  pts.push_back({c, b, a, w});
}

}  // namespace

const QuadratureRule& QuadratureRule::centroid() {
  static const QuadratureRule rule =
      make_rule({{1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0}}, 1);
  return rule;
}

const QuadratureRule& QuadratureRule::order3() {
  static const QuadratureRule rule = [] {
    std::vector<Point> pts;
    add_sym3(pts, 1.0 / 6.0, 1.0 / 3.0);
    return make_rule(std::move(pts), 2);
  }();
  return rule;
}

const QuadratureRule& QuadratureRule::order7() {
  static const QuadratureRule rule = [] {
    std::vector<Point> pts;
    pts.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225});
    add_sym3(pts, 0.470142064105115, 0.132394152788506);
    add_sym3(pts, 0.101286507323456, 0.125939180544827);
    return make_rule(std::move(pts), 5);
  }();
  return rule;
}

const QuadratureRule& QuadratureRule::order13() {
  static const QuadratureRule rule = [] {
    std::vector<Point> pts;
    pts.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, -0.149570044467670});
    add_sym3(pts, 0.260345966079038, 0.175615257433204);
    add_sym3(pts, 0.065130102902216, 0.053347235608839);
    add_sym6(pts, 0.312865496004875, 0.638444188569809, 0.077113760890257);
    return make_rule(std::move(pts), 7);
  }();
  return rule;
}

}  // namespace hefie
