#pragma once

#include <vector>

#include "lyaplab/toralmaps.hpp"

namespace lyaplab {

/// Occupancy counts over an equal-volume partition of the fundamental
/// domain [0,1) x [lo, lo + period).
class OccupancyGrid {
public:
    explicit OccupancyGrid(int bins_per_axis = 16, double y2_lo = 0.0,
                           double y2_period = 1.0);

    void add(const TorusPoint& y);

    int bins_per_axis() const { return bins_; }
    long long total() const { return total_; }
    const std::vector<long long>& counts() const { return counts_; }

private:
    int bins_;
    double lo_;
    double period_;
    long long total_ = 0;
    std::vector<long long> counts_;
};

struct ChiSquareResult {
    double statistic = 0.0;
    double p_value = 1.0;
    long long dof = 0;
};

/// Pearson statistic of the counts against the uniform law; p-value from the
/// chi-square distribution with bins^2 - 1 degrees of freedom.  Throws
/// InsufficientSamples when total < 100 * bins^2.
ChiSquareResult chi_square_uniform(const OccupancyGrid& grid);

/// Fraction of empty cells; equidistribution predicts 0 for large samples.
double empty_cell_fraction(const OccupancyGrid& grid);

} // namespace lyaplab
