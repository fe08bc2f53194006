#include "contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "errors.hpp"

namespace litho {

std::vector<Polyline> marching_squares(const ScalarField& f, double level) {
  return marching_squares(f, level, std::min(f.min(), level) - 1.0);
}

std::vector<Polyline> marching_squares(const ScalarField& f, double level, double outside) {
  if (!(outside <= level)) throw ConfigError("marching_squares: padding value must not exceed the level");
  const int W = f.nx() + 2;
  const int H = f.ny() + 2;
  const GridSpec& g = f.grid();
  auto value = [&](int i, int j) {
    if (i <= 0 || j <= 0 || i >= W - 1 || j >= H - 1) return outside;
    return f(i - 1, j - 1);
  };
  auto px = [&](double i) { return g.origin_x + (i - 1.0) * g.spacing; };
  auto py = [&](double j) { return g.origin_y + (j - 1.0) * g.spacing; };

  // Edge ids: horizontal edge (i,j)-(i+1,j) -> 2*(j*W+i), vertical (i,j)-(i,j+1) -> +1.
  auto hedge = [&](int i, int j) { return 2L * (static_cast<long>(j) * W + i); };
  auto vedge = [&](int i, int j) { return 2L * (static_cast<long>(j) * W + i) + 1; };
  auto crossing = [&](long id) {
    const long base = id / 2;
    const int i = static_cast<int>(base % W);
    const int j = static_cast<int>(base / W);
    const int i2 = (id % 2 == 0) ? i + 1 : i;
    const int j2 = (id % 2 == 0) ? j : j + 1;
    const double va = value(i, j);
    const double vb = value(i2, j2);
    const double t = (va - level) / (va - vb);
    return Point{px(i + t * (i2 - i)), py(j + t * (j2 - j))};
  };

  // Directed segments keyed by their starting edge: walking counter-clockwise
  // around a cell, a segment starts where the walk leaves the region and ends
  // where it re-enters, which keeps the region on the left.
  std::unordered_map<long, long> next;
  for (int j = 0; j < H - 1; ++j) {
    for (int i = 0; i < W - 1; ++i) {
      const double c[4] = {value(i, j), value(i + 1, j), value(i + 1, j + 1), value(i, j + 1)};
      bool in[4];
      int n_in = 0;
      for (int k = 0; k < 4; ++k) n_in += (in[k] = c[k] > level);
      if (n_in == 0 || n_in == 4) continue;
      const long edge[4] = {hedge(i, j), vedge(i + 1, j), hedge(i, j + 1), vedge(i, j)};
      const bool saddle = n_in == 2 && in[0] == in[2];
      const bool centre_in = 0.25 * (c[0] + c[1] + c[2] + c[3]) > level;
      for (int k = 0; k < 4; ++k) {
        if (!(in[k] && !in[(k + 1) % 4])) continue;
        int e = -1;
        if (saddle) {
          e = centre_in ? (k + 1) % 4 : (k + 3) % 4;
        } else {
          for (int m = 0; m < 4; ++m)
            if (!in[m] && in[(m + 1) % 4]) e = m;
        }
        next[edge[k]] = edge[e];
      }
    }
  }

  // Deterministic traversal order: sweep edges by id.
  std::vector<long> starts;
  starts.reserve(next.size());
  for (const auto& kv : next) starts.push_back(kv.first);
  std::sort(starts.begin(), starts.end());
  std::unordered_map<long, bool> used;
  std::vector<Polyline> loops;
  for (long s : starts) {
    if (used[s]) continue;
    Polyline loop;
    long e = s;
    while (!used[e]) {
      used[e] = true;
      loop.push_back(crossing(e));
      auto it = next.find(e);
      if (it == next.end()) break;
      e = it->second;
    }
    if (loop.size() >= 2) loops.push_back(std::move(loop));
  }
  return loops;
}

double polyline_length(const Polyline& p) {
  if (p.size() < 2) return 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Point& a = p[k];
    const Point& b = p[(k + 1) % p.size()];
    s += std::hypot(b.x - a.x, b.y - a.y);
  }
  return s;
}

double total_length(const std::vector<Polyline>& loops) {
  double s = 0.0;
  for (const auto& p : loops) s += polyline_length(p);
  return s;
}

Polyline smooth_closed(const Polyline& p) {
  const std::size_t n = p.size();
  if (n < 3) return p;
  Polyline out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Point& a = p[(k + n - 1) % n];
    const Point& b = p[k];
    const Point& c = p[(k + 1) % n];
    out[k] = {0.25 * (a.x + 2.0 * b.x + c.x), 0.25 * (a.y + 2.0 * b.y + c.y)};
  }
  return out;
}

double max_turning_rate(const std::vector<Polyline>& loops, double arc) {
  if (!(arc > 0.0)) throw DomainError("max_turning_rate: arc length must be positive");
  double worst = 0.0;
  for (const auto& p : loops) {
    const std::size_t n = p.size();
    if (n < 3) continue;
    std::vector<double> turn(n), len(n);
    for (std::size_t k = 0; k < n; ++k) {
      const Point& a = p[(k + n - 1) % n];
      const Point& b = p[k];
      const Point& c = p[(k + 1) % n];
      const double ux = b.x - a.x, uy = b.y - a.y, vx = c.x - b.x, vy = c.y - b.y;
      turn[k] = std::atan2(ux * vy - uy * vx, ux * vx + uy * vy);
      len[k] = std::hypot(vx, vy);
    }
    // Windows start at each vertex and extend forward until `arc` is covered.
    for (std::size_t k = 0; k < n; ++k) {
      double t = 0.0, l = 0.0;
      for (std::size_t m = 0; m < n && l < arc; ++m) {
        const std::size_t q = (k + m) % n;
        t += turn[q];
        l += len[q];
      }
      worst = std::max(worst, std::abs(t) / std::max(l, arc));
    }
  }
  return worst;
}

namespace {
std::size_t count_binary(const ScalarField& f) {
  std::size_t n = 0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double v = f[k];
    if (v != 0.0 && v != 1.0) throw ConfigError("binary pattern values must be exactly 0 or 1");
    n += v == 1.0;
  }
  return n;
}
}  // namespace

BinaryPattern::BinaryPattern(ScalarField bitmap) : bitmap_(std::move(bitmap)) {
  count_ = count_binary(bitmap_);
  for (const auto& loop : marching_squares(bitmap_, 0.5, 0.0)) contour_.push_back(smooth_closed(loop));
}

BinaryPattern::BinaryPattern(ScalarField bitmap, std::vector<Polyline> contour)
    : bitmap_(std::move(bitmap)), contour_(std::move(contour)) {
  count_ = count_binary(bitmap_);
}

BinaryPattern BinaryPattern::threshold(const ScalarField& f, double threshold) {
  ScalarField b(f.grid());
  for (std::size_t k = 0; k < f.size(); ++k) b[k] = f[k] > threshold ? 1.0 : 0.0;
  return BinaryPattern(std::move(b));
}

int count_components(const BinaryPattern& p) {
  const int nx = p.grid().nx, ny = p.grid().ny;
  std::vector<int> label(p.grid().size(), 0);
  std::vector<std::pair<int, int>> stack;
  int count = 0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (!p.at(i, j) || label[p.bitmap().index(i, j)]) continue;
      ++count;
      stack.push_back({i, j});
      label[p.bitmap().index(i, j)] = count;
      while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int u = a + di[k], v = b + dj[k];
          if (u < 0 || v < 0 || u >= nx || v >= ny || !p.at(u, v)) continue;
          int& l = label[p.bitmap().index(u, v)];
          if (l) continue;
          l = count;
          stack.push_back({u, v});
        }
      }
    }
  }
  return count;
}

}  // namespace litho
