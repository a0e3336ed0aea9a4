#pragma once

#include <string>
#include <vector>

#include "sect/filtration.hpp"

namespace sect {

/// Smooth Euler characteristic curve: the cumulative integral of the centered
/// EC curve, sampled at T uniform thresholds on [a, b]. Piecewise linear,
/// starts at 0, and returns to 0 at b (within rounding).
struct SECCurve {
    Direction direction;
    double a = 0.0;
    double b = 0.0;
    std::vector<double> samples;

    int levels() const { return static_cast<int>(samples.size()); }
    double step() const;
    double threshold(int j) const;
    /// Value at an arbitrary threshold: 0 left of a, the terminal sample
    /// right of b, linear interpolation between grid points.
    double value_at(double t) const;
};

/// Full transform of one shape: one SEC curve per direction, all with the
/// same T. Flattening concatenates curve samples in direction order.
struct SECTProfile {
    std::string source_id;
    int slice_index = -1;
    std::vector<std::string> slices;
    int levels = 0;
    std::vector<Direction> directions;
    std::vector<SECCurve> curves;

    std::vector<double> flattened() const;
};

/// Subtracts the mean of the first T-1 samples from every sample. Excluding
/// the trailing sample makes the cumulative left-rectangle integral of the
/// result vanish at b exactly in exact arithmetic.
std::vector<double> center_curve(const ECCurve& c);

/// Cumulative left-rectangle integral: F_0 = 0, F_j = h * sum of Z_i, i < j.
SECCurve smooth_curve(const std::vector<double>& Z, const Direction& direction,
                      double a, double b);

/// One-direction pipeline: EC sweep, centering, integration.
SECCurve sec_curve(const SimplicialComplex& K, const Direction& nu, int T);

/// Whole-shape transform; directions are processed in parallel.
SECTProfile sect_profile(const SimplicialComplex& K, const std::vector<Direction>& directions,
                         int T);

/// Reference implementation of sect_profile with identical output.
SECTProfile sect_profile_serial(const SimplicialComplex& K,
                                const std::vector<Direction>& directions, int T);

/// Positional mean of per-slice profiles sharing one direction set and T.
SECTProfile aggregate_slices(const std::vector<SECTProfile>& profiles);

/// Discretized SECT pseudo-metric:
/// sqrt((1/m) * sum over directions of h * sum of squared differences),
/// with both curves resampled onto their common interval first.
double sect_distance(const SECTProfile& P, const SECTProfile& Q);

void save_profile(const std::string& path, const SECTProfile& P);
SECTProfile load_profile(const std::string& path);

}  // namespace sect
