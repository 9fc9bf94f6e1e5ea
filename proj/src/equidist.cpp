#include "lyaplab/equidist.hpp"

#include <cmath>

#include "lyaplab/errors.hpp"
#include "lyaplab/stats.hpp"

namespace lyaplab {

OccupancyGrid::OccupancyGrid(int bins_per_axis, double y2_lo, double y2_period)
    : bins_(bins_per_axis), lo_(y2_lo), period_(y2_period),
      counts_(static_cast<std::size_t>(bins_per_axis) * bins_per_axis, 0) {}

void OccupancyGrid::add(const TorusPoint& y) {
    const double u = wrap_unit(y.y1);
    const double v = (wrap_into(y.y2, lo_, period_) - lo_) / period_;
    int i = static_cast<int>(u * bins_);
    int j = static_cast<int>(v * bins_);
    if (i >= bins_) i = bins_ - 1;
    if (j >= bins_) j = bins_ - 1;
    counts_[static_cast<std::size_t>(i) * bins_ + j] += 1;
    total_ += 1;
}

ChiSquareResult chi_square_uniform(const OccupancyGrid& grid) {
    const long long cells = static_cast<long long>(grid.bins_per_axis()) * grid.bins_per_axis();
    if (grid.total() < 100 * cells)
        throw InsufficientSamples("need at least 100 samples per cell on average");

    const double expected = static_cast<double>(grid.total()) / static_cast<double>(cells);
    double stat = 0.0;
    for (const long long c : grid.counts()) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    ChiSquareResult out;
    out.statistic = stat;
    out.dof = cells - 1;
    out.p_value = chi_square_tail(stat, static_cast<double>(out.dof));
    return out;
}

double empty_cell_fraction(const OccupancyGrid& grid) {
    long long empty = 0;
    for (const long long c : grid.counts())
        if (c == 0) ++empty;
    return static_cast<double>(empty) / static_cast<double>(grid.counts().size());
}

} // namespace lyaplab
