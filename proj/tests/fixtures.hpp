#pragma once

#include <vector>

#include "sect/ingest.hpp"
#include "sect/simplicial_complex.hpp"
#include "sect/stats.hpp"

namespace fixtures {

/// Six-vertex complex whose vertical sweep has EC values 1, 2, 2, 3, 3, 2 at
/// the six vertex heights: a filled triangle with a pendant path and an
/// isolated vertex.
sect::SimplicialComplex fig1_complex();

/// The six vertex heights of fig1_complex in increasing order.
std::vector<double> fig1_heights();

/// Closed 12-vertex polygon whose horizontal sweep starts at EC 1 and steps
/// to 2 at x = -0.055.
sect::SimplicialComplex hand_contour();

/// Two 2x3 masks with identical vertical-sweep EC curves but different
/// horizontal ones: a C shape and its mirror.
sect::BinaryImage c_mask();
sect::BinaryImage mirrored_c_mask();

/// Filled disk, and a disk with a hole, on one canvas size.
sect::BinaryImage disk_mask();
sect::BinaryImage annulus_mask();

/// Random complex with at most max_vertices vertices. Coordinates are
/// generic (no two vertex heights coincide for a generic direction).
sect::SimplicialComplex random_complex(sect::Rng& rng, int max_vertices, int dim = 2);

/// Random rectangular mask with at least one foreground pixel and all four
/// corners set (which pins the bounding box).
sect::BinaryImage random_mask(sect::Rng& rng, int width, int height, double density,
                              bool pin_corners = false);

/// Number of 4-connected foreground components, by flood fill.
int flood_fill_components(const sect::BinaryImage& img);

}  // namespace fixtures
