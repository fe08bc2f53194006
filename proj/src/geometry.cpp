#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace litho {

namespace {

constexpr double kFar = 1e30;

// Felzenszwalb-Huttenlocher lower envelope of parabolas: squared distance
// transform of a sampled function along one line.
void edt_1d(const double* f, double* d, int n, std::vector<int>& v, std::vector<double>& z) {
  v.resize(static_cast<std::size_t>(n));
  z.resize(static_cast<std::size_t>(n) + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -kFar;
  z[1] = kFar;
  for (int q = 1; q < n; ++q) {
    double s;
    for (;;) {
      const int p = v[static_cast<std::size_t>(k)];
      s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (s <= z[static_cast<std::size_t>(k)] && k > 0) {
        --k;
        continue;
      }
      break;
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = kFar;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(k) + 1] < q) ++k;
    const int p = v[static_cast<std::size_t>(k)];
    d[q] = double(q - p) * (q - p) + f[p];
  }
}

// Squared distances in cell units.
std::vector<double> squared_edt(const BinaryPattern& p) {
  const int nx = p.grid().nx, ny = p.grid().ny;
  std::vector<double> g(p.grid().size());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = p.bitmap()[k] != 0.0 ? 0.0 : kFar;
  std::vector<int> v;
  std::vector<double> z, col(static_cast<std::size_t>(ny)), out(static_cast<std::size_t>(std::max(nx, ny)));
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) col[static_cast<std::size_t>(j)] = g[static_cast<std::size_t>(j) * nx + i];
    edt_1d(col.data(), out.data(), ny, v, z);
    for (int j = 0; j < ny; ++j) g[static_cast<std::size_t>(j) * nx + i] = out[static_cast<std::size_t>(j)];
  }
  for (int j = 0; j < ny; ++j) {
    double* row = g.data() + static_cast<std::size_t>(j) * nx;
    edt_1d(row, out.data(), nx, v, z);
    std::copy(out.begin(), out.begin() + nx, row);
  }
  return g;
}

void require_nonempty(const BinaryPattern& p, const BinaryPattern& q, const char* what) {
  if (p.empty() || q.empty()) throw DomainError(std::string(what) + ": empty pattern has no Hausdorff distance");
}

// max over set cells of a of the distance to b.
double directed(const BinaryPattern& a, const ScalarField& dist_b) {
  double m = 0.0;
  for (std::size_t k = 0; k < dist_b.size(); ++k)
    if (a.bitmap()[k] != 0.0) m = std::max(m, dist_b[k]);
  return m;
}

}  // namespace

ScalarField distance_transform(const BinaryPattern& p) {
  ScalarField out(p.grid());
  if (p.empty()) {
    for (auto& v : out.values()) v = std::numeric_limits<double>::infinity();
    return out;
  }
  const std::vector<double> sq = squared_edt(p);
  for (std::size_t k = 0; k < sq.size(); ++k) out[k] = std::sqrt(sq[k]) * p.grid().spacing;
  return out;
}

BinaryPattern boundary_cells(const BinaryPattern& p) {
  const int nx = p.grid().nx, ny = p.grid().ny;
  ScalarField b(p.grid());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (!p.at(i, j)) continue;
      const bool edge = i == 0 || j == 0 || i == nx - 1 || j == ny - 1 || !p.at(i - 1, j) || !p.at(i + 1, j) ||
                        !p.at(i, j - 1) || !p.at(i, j + 1);
      if (edge) b(i, j) = 1.0;
    }
  }
  return BinaryPattern(std::move(b));
}

double perimeter(const BinaryPattern& p) { return total_length(p.contour()); }

double hausdorff_closure(const BinaryPattern& p, const BinaryPattern& q) {
  require_same_grid(p.grid(), q.grid(), "hausdorff_closure");
  require_nonempty(p, q, "hausdorff_closure");
  return std::max(directed(p, distance_transform(q)), directed(q, distance_transform(p)));
}

double hausdorff_boundary(const BinaryPattern& p, const BinaryPattern& q) {
  require_same_grid(p.grid(), q.grid(), "hausdorff_boundary");
  require_nonempty(p, q, "hausdorff_boundary");
  const BinaryPattern bp = boundary_cells(p);
  const BinaryPattern bq = boundary_cells(q);
  return std::max(directed(bp, distance_transform(bq)), directed(bq, distance_transform(bp)));
}

BinaryPattern tube(const BinaryPattern& p, double r) {
  if (!(r >= 0.0)) throw DomainError("tube: radius must be nonnegative");
  if (r == 0.0 || p.empty()) return p;
  const ScalarField d = distance_transform(p);
  ScalarField b(p.grid());
  const double lim = r * (1.0 + 1e-12);
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = d[k] <= lim ? 1.0 : 0.0;
  return BinaryPattern(std::move(b));
}

std::string DistanceReport::csv_header() { return "d1,d1_tilde,d2,d3,perimeter_a,perimeter_b"; }

std::string DistanceReport::csv_row() const {
  std::ostringstream os;
  os << d1.to_string() << ',' << d1_tilde.to_string() << ',' << ExtReal(d2).to_string() << ','
     << ExtReal(d3).to_string() << ',' << ExtReal(perimeter_a).to_string() << ','
     << ExtReal(perimeter_b).to_string();
  return os.str();
}

DistanceReport strict_distance(const BinaryPattern& p, const BinaryPattern& q) {
  require_same_grid(p.grid(), q.grid(), "strict_distance");
  DistanceReport r;
  r.perimeter_a = perimeter(p);
  r.perimeter_b = perimeter(q);
  r.d2 = l1_distance(p.bitmap(), q.bitmap());
  r.d3 = r.d2 + std::abs(r.perimeter_a - r.perimeter_b);
  if (p.empty() && q.empty()) {
    r.d1 = 0.0;
    r.d1_tilde = 0.0;
  } else if (p.empty() || q.empty()) {
    r.d1 = ExtReal::infinity();
    r.d1_tilde = ExtReal::infinity();
  } else {
    r.d1 = hausdorff_closure(p, q);
    r.d1_tilde = hausdorff_boundary(p, q);
  }
  return r;
}

}  // namespace litho
