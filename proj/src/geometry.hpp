#pragma once

#include <string>

#include "contour.hpp"
#include "extreal.hpp"
#include "field.hpp"

namespace litho {

// Exact Euclidean distance (model units) from every cell centre to the nearest
// cell where `set` holds; 0 on the set. All-unset input yields +inf.
ScalarField distance_transform(const BinaryPattern& p);

// Set cells with at least one unset 4-neighbour (outside the window counts as unset).
BinaryPattern boundary_cells(const BinaryPattern& p);

// Isotropic perimeter: length of the smoothed marching-squares contour.
double perimeter(const BinaryPattern& p);

// Symmetric Hausdorff distance between boundaries (d1~) and between filled
// sets (d1). Both throw DomainError if either input is empty.
double hausdorff_boundary(const BinaryPattern& p, const BinaryPattern& q);
double hausdorff_closure(const BinaryPattern& p, const BinaryPattern& q);

// Dilation by the closed disk of radius r (cell centres within r of the set).
BinaryPattern tube(const BinaryPattern& p, double r);

struct DistanceReport {
  ExtReal d1;        // Hausdorff of closures; inf when exactly one side is empty
  ExtReal d1_tilde;  // Hausdorff of boundaries; same convention
  double d2 = 0.0;   // area of the symmetric difference
  double d3 = 0.0;   // d2 + |perimeter_a - perimeter_b|
  double perimeter_a = 0.0;
  double perimeter_b = 0.0;

  static std::string csv_header();
  std::string csv_row() const;
};

DistanceReport strict_distance(const BinaryPattern& p, const BinaryPattern& q);

}  // namespace litho
