#include "normgrid/point_set.hpp"

#include <stdexcept>

#include "normgrid/rng.hpp"

namespace normgrid {

PointSet::Frame PointSet::frame_from_name(const std::string& name) {
  if (name == "torus") return Frame::torus;
  if (name == "cube") return Frame::cube;
  throw std::invalid_argument("unknown point frame: " + name);
}

PointSet canonical_grid(const std::vector<std::int64_t>& n) {
  if (n.empty()) throw std::invalid_argument("canonical_grid: dimension 0");
  std::vector<std::int64_t> per_axis(n.size());
  for (std::size_t j = 0; j < n.size(); ++j) {
    if (n[j] < 0) throw std::invalid_argument("canonical_grid: negative extent");
    per_axis[j] = 2 * n[j] + 1;
  }
  return uniform_grid(per_axis);
}

PointSet uniform_grid(const std::vector<std::int64_t>& per_axis) {
  if (per_axis.empty()) throw std::invalid_argument("uniform_grid: dimension 0");
  std::int64_t total = 1;
  for (auto k : per_axis) {
    if (k < 1) throw std::invalid_argument("uniform_grid: axis size < 1");
    total *= k;
    if (total > (std::int64_t{1} << 31))
      throw std::invalid_argument("uniform_grid: grid too large");
  }
  const int dim = static_cast<int>(per_axis.size());
  PointSet p;
  p.dim = dim;
  p.frame = PointSet::Frame::torus;
  p.points.resize(total, dim);
  std::vector<std::int64_t> idx(dim, 0);
  for (std::int64_t row = 0; row < total; ++row) {
    for (int j = 0; j < dim; ++j)
      p.points(row, j) = kTwoPi * static_cast<double>(idx[j]) /
                         static_cast<double>(per_axis[j]);
    int axis = dim - 1;
    while (axis >= 0 && ++idx[axis] == per_axis[axis]) idx[axis--] = 0;
  }
  return p;
}

PointSet random_torus(int m, int dim, std::uint64_t seed) {
  if (m < 0 || dim < 1) throw std::invalid_argument("random_torus: bad sizes");
  PointSet p;
  p.dim = dim;
  p.frame = PointSet::Frame::torus;
  p.points.resize(m, dim);
  SplitMix64 gen(seed);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < dim; ++j) p.points(i, j) = kTwoPi * gen.uniform();
  return p;
}

PointSet cube_points(Matrix pts01) {
  PointSet p;
  p.dim = static_cast<int>(pts01.cols());
  p.frame = PointSet::Frame::cube;
  p.points = std::move(pts01);
  return p;
}

PointSet scale_to_torus(const PointSet& cube) {
  PointSet p = cube;
  p.frame = PointSet::Frame::torus;
  p.points *= kTwoPi;
  return p;
}

PointSet select_rows(const PointSet& ps, const std::vector<Index>& rows) {
  PointSet out;
  out.dim = ps.dim;
  out.frame = ps.frame;
  out.points.resize(static_cast<Index>(rows.size()), ps.dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= ps.points.rows())
      throw std::out_of_range("select_rows: row index out of range");
    out.points.row(static_cast<Index>(i)) = ps.points.row(rows[i]);
  }
  return out;
}

PointSet concat_points(const PointSet& a, const PointSet& b) {
  if (a.size() == 0) return b;
  if (b.size() == 0) return a;
  if (a.dim != b.dim || a.frame != b.frame)
    throw std::invalid_argument("concat_points: frame/dim mismatch");
  PointSet out;
  out.dim = a.dim;
  out.frame = a.frame;
  out.points.resize(a.points.rows() + b.points.rows(), a.dim);
  out.points.topRows(a.points.rows()) = a.points;
  out.points.bottomRows(b.points.rows()) = b.points;
  return out;
}

}  // namespace normgrid
