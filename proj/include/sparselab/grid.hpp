#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "sparselab/dyadic.hpp"
#include "sparselab/errors.hpp"
#include "sparselab/numeric.hpp"

namespace sparselab {

/// Uniformly sampled complex-valued function on [origin, origin + step*count).
/// count is a power of two so the DFT pairs frequency indices exactly.
/// Integrals are step-weighted pairwise sums; the grid is zero-padded and
/// non-periodic for averages (weight tails beyond the grid are dropped).
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(double origin, double step, std::vector<cplx> samples);
    static GridFunction zeros(double origin, double step, std::size_t count);

    double origin() const { return origin_; }
    double step() const { return step_; }
    std::size_t size() const { return samples_.size(); }
    double grid_length() const { return step_ * static_cast<double>(samples_.size()); }
    double x(std::size_t i) const { return origin_ + step_ * static_cast<double>(i); }

    const std::vector<cplx>& samples() const { return samples_; }
    std::vector<cplx>& samples() { return samples_; }
    cplx operator[](std::size_t i) const { return samples_[i]; }
    cplx& operator[](std::size_t i) { return samples_[i]; }

    bool same_grid(const GridFunction& other) const {
        return origin_ == other.origin_ && step_ == other.step_ && size() == other.size();
    }

    /// step * pairwise-sum of samples.
    cplx integral() const;
    double integral_abs() const;
    double norm_l2() const;
    double norm_l1() const;
    double sup_abs() const;

    GridFunction& operator*=(double c);
    GridFunction& operator*=(cplx c);
    GridFunction& operator+=(const GridFunction& other);

    /// CSV with header `x,re,im`; strictly increasing equispaced x.
    void save_csv(const std::string& path) const;
    /// Validates spacing to 1e-9 relative; throws IOFailure on malformed input.
    static GridFunction load_csv(const std::string& path);

private:
    double origin_ = 0.0;
    double step_ = 1.0;
    std::vector<cplx> samples_;
};

/// Weighted L^p average ((1/|I|) \int |f|^p chi~_I^M)^{1/p} as a step-weighted
/// Riemann sum. p = 1 is the plain weighted average ave_I(f).
/// Throws GridTooCoarse when step > |I|.
double lp_average(const GridFunction& f, const DyadicInterval& I, double p, int M);

/// || f * chi~_I^M ||_2 on the grid.
double weighted_l2_norm(const GridFunction& f, const DyadicInterval& I, int M);

/// Plain interior average over the samples lying in I: (1/|I|) \int_I |f|^p,
/// no adapted weight. Used by maximal operators and weight characteristics.
double interior_average_abs_pow(const GridFunction& f, const DyadicInterval& I, double p);

/// L^q(v dx) norm: ( \int |f|^q v dx )^{1/q}; v must share f's grid.
double lq_norm_weighted(const GridFunction& f, const GridFunction& v, double q);

/// Dyadic intervals aligned with the grid: the grid must have dyadic origin
/// and power-of-two length; scales run from the step scale up to the full
/// grid. Ordered coarse to fine.
std::vector<DyadicInterval> interval_universe(const GridFunction& f);

/// The grid as a single dyadic interval (origin and length must be exact
/// powers of two placements; throws BadConfig otherwise).
DyadicInterval grid_root(const GridFunction& f);

} // namespace sparselab
