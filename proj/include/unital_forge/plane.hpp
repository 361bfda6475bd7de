#pragma once

// The projective plane NP(F) over a nearfield F of order m:
//   points  (x,y,1)  (1,y,0)  (0,1,0)
//   lines   [s,1,t]  [1,0,t]  [0,0,1]
// with (x,y,z) on [s,u,t] iff x*s + y*u + z*t = 0.
//
// Points and lines are interned to dense ids:
//   (x,y,1) -> x*m + y    (1,y,0) -> m^2 + y    (0,1,0) -> m^2 + m
//   [s,1,t] -> s*m + t    [1,0,t] -> m^2 + t    [0,0,1] -> m^2 + m

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "unital_forge/checks.hpp"
#include "unital_forge/error.hpp"
#include "unital_forge/nearfield.hpp"

namespace uforge {

using PointId = std::uint32_t;
using LineId = std::uint32_t;

enum class PointKind : std::uint8_t { Affine, Infinite, Vertex };
enum class LineKind : std::uint8_t { Oblique, Vertical, AtInfinity };

/// Finer classification of lines used by search constraints: Oblique lines
/// [0,1,t] are Horizontal, the rest Sloped.
enum class LineShape : std::uint8_t { Sloped, Horizontal, Vertical, AtInfinity };

struct Point {
  PointKind kind = PointKind::Vertex;
  Elem x = 0;  // Affine only
  Elem y = 0;  // Affine and Infinite

  static Point affine(Elem x, Elem y) { return {PointKind::Affine, x, y}; }
  static Point infinite(Elem y) { return {PointKind::Infinite, 0, y}; }
  static Point vertex() { return {PointKind::Vertex, 0, 0}; }
  friend bool operator==(const Point&, const Point&) = default;
};

struct Line {
  LineKind kind = LineKind::AtInfinity;
  Elem s = 0;  // Oblique only
  Elem t = 0;  // Oblique and Vertical

  static Line oblique(Elem s, Elem t) { return {LineKind::Oblique, s, t}; }
  static Line vertical(Elem t) { return {LineKind::Vertical, 0, t}; }
  static Line at_infinity() { return {LineKind::AtInfinity, 0, 0}; }
  friend bool operator==(const Line&, const Line&) = default;
};

class Plane {
 public:
  explicit Plane(Nearfield nf) : nf_(std::move(nf)), m_(nf_.order()) {
    const std::size_t n = size();
    on_line_.resize(n * (m_ + 1));
    through_.resize(n * (m_ + 1));
    std::vector<std::uint32_t> fill(n, 0);
    for (LineId l = 0; l < n; ++l) {
      std::vector<PointId> pts = enumerate_line(l);
      std::sort(pts.begin(), pts.end());
      std::copy(pts.begin(), pts.end(), on_line_.begin() + static_cast<std::ptrdiff_t>(l * (m_ + 1)));
      for (PointId p : pts) through_[std::size_t{p} * (m_ + 1) + fill[p]++] = l;
    }
  }

  const Nearfield& nearfield() const { return nf_; }
  const Field& field() const { return nf_.field(); }

  /// Order m of the plane (the nearfield order).
  std::uint32_t order() const { return m_; }
  /// m^2 + m + 1, the number of points and also of lines.
  std::size_t size() const { return std::size_t{m_} * m_ + m_ + 1; }

  PointId id(const Point& p) const {
    switch (p.kind) {
      case PointKind::Affine: return p.x * m_ + p.y;
      case PointKind::Infinite: return m_ * m_ + p.y;
      case PointKind::Vertex: return m_ * m_ + m_;
    }
    return 0;
  }

  LineId id(const Line& l) const {
    switch (l.kind) {
      case LineKind::Oblique: return l.s * m_ + l.t;
      case LineKind::Vertical: return m_ * m_ + l.t;
      case LineKind::AtInfinity: return m_ * m_ + m_;
    }
    return 0;
  }

  Point point(PointId id) const {
    if (id < m_ * m_) return Point::affine(id / m_, id % m_);
    if (id < m_ * m_ + m_) return Point::infinite(id - m_ * m_);
    return Point::vertex();
  }

  Line line(LineId id) const {
    if (id < m_ * m_) return Line::oblique(id / m_, id % m_);
    if (id < m_ * m_ + m_) return Line::vertical(id - m_ * m_);
    return Line::at_infinity();
  }

  PointId vertex() const { return m_ * m_ + m_; }
  LineId line_at_infinity() const { return m_ * m_ + m_; }

  LineShape shape(LineId l) const {
    const Line ln = line(l);
    switch (ln.kind) {
      case LineKind::Oblique: return ln.s == 0 ? LineShape::Horizontal : LineShape::Sloped;
      case LineKind::Vertical: return LineShape::Vertical;
      case LineKind::AtInfinity: return LineShape::AtInfinity;
    }
    return LineShape::Sloped;
  }

  /// The incidence form, evaluated per point/line class.
  bool incident(const Point& p, const Line& l) const {
    switch (p.kind) {
      case PointKind::Affine:
        if (l.kind == LineKind::Oblique) return nf_.add(nf_.add(nf_.mul(p.x, l.s), p.y), l.t) == 0;
        if (l.kind == LineKind::Vertical) return nf_.add(p.x, l.t) == 0;
        return false;
      case PointKind::Infinite:
        if (l.kind == LineKind::Oblique) return nf_.add(l.s, p.y) == 0;
        return l.kind == LineKind::AtInfinity;
      case PointKind::Vertex:
        return l.kind != LineKind::Oblique;
    }
    return false;
  }

  bool incident(PointId p, LineId l) const { return incident(point(p), line(l)); }

  /// Points of a line: affine points by id, then infinite points, then the vertex.
  std::span<const PointId> points_on(LineId l) const {
    return {on_line_.data() + std::size_t{l} * (m_ + 1), m_ + 1};
  }

  std::span<const LineId> lines_through(PointId p) const {
    return {through_.data() + std::size_t{p} * (m_ + 1), m_ + 1};
  }

  /// The unique line through two distinct points, post-verified by incidence.
  LineId line_through(PointId a, PointId b) const {
    if (a == b) fail(ErrorKind::SamePoint, "line_through needs two distinct points");
    const Line l = join(point(a), point(b));
    if (!incident(point(a), l) || !incident(point(b), l))
      fail(ErrorKind::InternalConsistency, "joining line fails the incidence check for " + render(point(a)) + ", " +
                                               render(point(b)));
    return id(l);
  }

  /// The unique common point of two distinct lines.
  PointId meet(LineId a, LineId b) const {
    if (a == b) fail(ErrorKind::SamePoint, "meet needs two distinct lines");
    const Line la = line(a), lb = line(b);
    if (la.kind == LineKind::Oblique && lb.kind == LineKind::Oblique) {
      if (la.s == lb.s) return id(Point::infinite(nf_.neg(la.s)));
      for (Elem x = 0; x < m_; ++x) {
        const Elem y = nf_.neg(nf_.add(nf_.mul(x, la.s), la.t));
        if (nf_.add(nf_.add(nf_.mul(x, lb.s), y), lb.t) == 0) return id(Point::affine(x, y));
      }
      fail(ErrorKind::InternalConsistency, "oblique lines without a common point");
    }
    for (PointId p : points_on(a))
      if (incident(point(p), lb)) return p;
    fail(ErrorKind::InternalConsistency, "lines without a common point");
  }

  std::string render(const Point& p) const {
    const Field& f = field();
    switch (p.kind) {
      case PointKind::Affine: return "(" + f.render(p.x) + "," + f.render(p.y) + ",1)";
      case PointKind::Infinite: return "(1," + f.render(p.y) + ",0)";
      case PointKind::Vertex: return "(0,1,0)";
    }
    return "?";
  }

  std::string render(const Line& l) const {
    const Field& f = field();
    switch (l.kind) {
      case LineKind::Oblique: return "[" + f.render(l.s) + ",1," + f.render(l.t) + "]";
      case LineKind::Vertical: return "[1,0," + f.render(l.t) + "]";
      case LineKind::AtInfinity: return "[0,0,1]";
    }
    return "?";
  }

  std::string render_point(PointId p) const { return render(point(p)); }
  std::string render_line(LineId l) const { return render(line(l)); }

 private:
  Line join(const Point& a, const Point& b) const {
    using K = PointKind;
    if (a.kind == K::Affine && b.kind == K::Affine) {
      if (a.x == b.x) return Line::vertical(nf_.neg(a.x));
      // [-(x-x1)^-1 * (y-y1), 1, x * (x-x1)^-1 * (y-y1) - y]
      const Elem w = nf_.mul(nf_.inv(nf_.sub(a.x, b.x)), nf_.sub(a.y, b.y));
      return Line::oblique(nf_.neg(w), nf_.sub(nf_.mul(a.x, w), a.y));
    }
    if (a.kind != K::Affine && b.kind == K::Affine) return join(b, a);
    if (a.kind == K::Affine) {
      if (b.kind == K::Vertex) return Line::vertical(nf_.neg(a.x));
      const Elem s = nf_.neg(b.y);
      return Line::oblique(s, nf_.neg(nf_.add(nf_.mul(a.x, s), a.y)));
    }
    return Line::at_infinity();
  }

  std::vector<PointId> enumerate_line(LineId lid) const {
    const Line l = line(lid);
    std::vector<PointId> pts;
    pts.reserve(m_ + 1);
    switch (l.kind) {
      case LineKind::Oblique:
        for (Elem x = 0; x < m_; ++x) pts.push_back(id(Point::affine(x, nf_.neg(nf_.add(nf_.mul(x, l.s), l.t)))));
        pts.push_back(id(Point::infinite(nf_.neg(l.s))));
        break;
      case LineKind::Vertical:
        for (Elem y = 0; y < m_; ++y) pts.push_back(id(Point::affine(nf_.neg(l.t), y)));
        pts.push_back(vertex());
        break;
      case LineKind::AtInfinity:
        for (Elem y = 0; y < m_; ++y) pts.push_back(id(Point::infinite(y)));
        pts.push_back(vertex());
        break;
    }
    return pts;
  }

  Nearfield nf_;
  std::uint32_t m_;
  std::vector<PointId> on_line_;
  std::vector<LineId> through_;
};

inline bool incident(const Plane& pl, PointId p, LineId l) { return pl.incident(p, l); }
inline LineId line_through(const Plane& pl, PointId a, PointId b) { return pl.line_through(a, b); }

inline std::vector<PointId> points_on_line(const Plane& pl, LineId l) {
  auto s = pl.points_on(l);
  return {s.begin(), s.end()};
}

/// Exhaustive certification of the projective plane axioms. Incidence is
/// recomputed from the incidence form, independent of the cached line lists.
inline AxiomReport verify_plane_axioms(const Plane& pl) {
  AxiomReport rep;
  const std::size_t n = pl.size();
  const std::size_t m = pl.order();
  rep.add("point-count", n == m * m + m + 1, std::to_string(n));
  rep.add("line-count", n == m * m + m + 1, std::to_string(n));

  std::vector<std::vector<PointId>> rows(n);
  std::vector<std::vector<LineId>> cols(n);
  for (LineId l = 0; l < n; ++l) {
    const Line ln = pl.line(l);
    for (PointId p = 0; p < n; ++p)
      if (pl.incident(pl.point(p), ln)) {
        rows[l].push_back(p);
        cols[p].push_back(l);
      }
  }

  bool sizes_ok = true, cache_ok = true;
  std::string w;
  for (LineId l = 0; l < n; ++l) {
    if (rows[l].size() != m + 1 && sizes_ok) sizes_ok = false, w = pl.render_line(l);
    auto cached = pl.points_on(l);
    if (!std::equal(cached.begin(), cached.end(), rows[l].begin(), rows[l].end())) cache_ok = false;
  }
  for (PointId p = 0; p < n; ++p)
    if (cols[p].size() != m + 1 && sizes_ok) sizes_ok = false, w = pl.render_point(p);
  rep.add("line-and-pencil-size", sizes_ok, w);
  rep.add("cached-incidence", cache_ok);

  const auto pair_check = [n](const std::vector<std::vector<std::uint32_t>>& sets, std::string& wit) {
    std::vector<std::uint8_t> count(n * n, 0);
    for (const auto& s : sets)
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
          auto& c = count[std::size_t{s[i]} * n + s[j]];
          if (c < 255) ++c;
        }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (count[a * n + b] != 1) {
          wit = std::to_string(a) + "," + std::to_string(b) + " x" + std::to_string(count[a * n + b]);
          return false;
        }
    return true;
  };
  std::string wp, wl;
  rep.add("unique-joining-line", pair_check(rows, wp), wp);
  rep.add("unique-meeting-point", pair_check(cols, wl), wl);

  // (0,0,1), (1,0,1), (0,1,1), (1,1,1): no three collinear.
  const PointId quad[4] = {pl.id(Point::affine(0, 0)), pl.id(Point::affine(1, 0)), pl.id(Point::affine(0, 1)),
                           pl.id(Point::affine(1, 1))};
  bool quad_ok = true;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        if (k != i && k != j && pl.incident(quad[k], pl.line_through(quad[i], quad[j]))) quad_ok = false;
  rep.add("quadrangle", quad_ok);
  return rep;
}

}  // namespace uforge
