#include "sparselab/grid.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>

namespace sparselab {

GridFunction::GridFunction(double origin, double step, std::vector<cplx> samples)
    : origin_(origin), step_(step), samples_(std::move(samples)) {
    if (step_ <= 0.0) throw BadConfig("GridFunction: step must be positive");
    if (samples_.empty() || !std::has_single_bit(samples_.size()))
        throw BadConfig("GridFunction: sample count must be a power of two");
}

GridFunction GridFunction::zeros(double origin, double step, std::size_t count) {
    return GridFunction(origin, step, std::vector<cplx>(count, cplx{0.0, 0.0}));
}

cplx GridFunction::integral() const {
    return step_ * pairwise_sum(samples_);
}

double GridFunction::integral_abs() const {
    std::vector<double> a(samples_.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(samples_[i]);
    return step_ * pairwise_sum(a);
}

double GridFunction::norm_l2() const {
    std::vector<double> a(samples_.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::norm(samples_[i]);
    return std::sqrt(step_ * pairwise_sum(a));
}

double GridFunction::norm_l1() const { return integral_abs(); }

double GridFunction::sup_abs() const {
    double m = 0.0;
    for (const cplx& z : samples_) m = std::max(m, std::abs(z));
    return m;
}

GridFunction& GridFunction::operator*=(double c) {
    for (cplx& z : samples_) z *= c;
    return *this;
}

GridFunction& GridFunction::operator*=(cplx c) {
    for (cplx& z : samples_) z *= c;
    return *this;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    if (!same_grid(other)) throw GridMismatch();
    for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
    return *this;
}

void GridFunction::save_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw IOFailure("cannot open " + path);
    os.precision(17);
    os << "x,re,im\n";
    for (std::size_t i = 0; i < samples_.size(); ++i)
        os << x(i) << "," << samples_[i].real() << "," << samples_[i].imag() << "\n";
    if (!os) throw IOFailure("write failed: " + path);
}

GridFunction GridFunction::load_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IOFailure("cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("x,re,im", 0) != 0)
        throw IOFailure("bad header in " + path);
    std::vector<double> xs;
    std::vector<cplx> vals;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double x = 0, re = 0, im = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &re, &im) != 3)
            throw IOFailure("bad row in " + path + ": " + line);
        xs.push_back(x);
        vals.emplace_back(re, im);
    }
    if (xs.size() < 2) throw IOFailure("too few rows in " + path);
    const double step = xs[1] - xs[0];
    if (step <= 0) throw IOFailure("x not increasing in " + path);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double d = xs[i] - xs[i - 1];
        if (std::fabs(d - step) > 1e-9 * std::fabs(step))
            throw IOFailure("non-equispaced x in " + path);
    }
    return GridFunction(xs[0], step, std::move(vals));
}

double lp_average(const GridFunction& f, const DyadicInterval& I, double p, int M) {
    if (p <= 0.0 || !std::isfinite(p)) throw BadConfig("lp_average: p must be positive and finite");
    if (f.step() > I.length()) throw GridTooCoarse("grid step exceeds |I|");
    std::vector<double> terms(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = std::abs(f[i]);
        if (a == 0.0) { terms[i] = 0.0; continue; }
        terms[i] = abs_pow(a, p) * adapted_weight_eval(I, M, f.x(i));
    }
    const double integral = f.step() * pairwise_sum(terms);
    return abs_pow(integral / I.length(), 1.0 / p);
}

double weighted_l2_norm(const GridFunction& f, const DyadicInterval& I, int M) {
    std::vector<double> terms(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double w = adapted_weight_eval(I, M, f.x(i));
        terms[i] = std::norm(f[i]) * w * w;
    }
    return std::sqrt(f.step() * pairwise_sum(terms));
}

double interior_average_abs_pow(const GridFunction& f, const DyadicInterval& I, double p) {
    const double lo = I.lower(), hi = I.upper();
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(I.length() / f.step()) + 2);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double xi = f.x(i);
        if (xi >= lo && xi < hi) terms.push_back(abs_pow(std::abs(f[i]), p));
    }
    if (terms.empty()) throw GridTooCoarse("interval holds no samples");
    return f.step() * pairwise_sum(terms) / I.length();
}

double lq_norm_weighted(const GridFunction& f, const GridFunction& v, double q) {
    if (!f.same_grid(v)) throw GridMismatch();
    std::vector<double> terms(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        terms[i] = abs_pow(f[i], q) * std::abs(v[i]);
    return abs_pow(f.step() * pairwise_sum(terms), 1.0 / q);
}

namespace {
// Exact power-of-two check for step / length placement; returns the exponent.
bool to_pow2_exp(double v, int& e) {
    if (v <= 0.0) return false;
    int exp = 0;
    const double m = std::frexp(v, &exp); // v = m * 2^exp, m in [0.5, 1)
    if (m != 0.5) return false;
    e = exp - 1;
    return true;
}
} // namespace

DyadicInterval grid_root(const GridFunction& f) {
    int kLen = 0;
    if (!to_pow2_exp(f.grid_length(), kLen))
        throw BadConfig("grid length is not a power of two");
    const double idx = f.origin() / f.grid_length();
    const double ridx = std::round(idx);
    if (std::fabs(idx - ridx) > 1e-12)
        throw BadConfig("grid origin is not aligned to its length");
    return DyadicInterval{kLen, static_cast<long long>(ridx)};
}

std::vector<DyadicInterval> interval_universe(const GridFunction& f) {
    const DyadicInterval root = grid_root(f);
    int kStep = 0;
    if (!to_pow2_exp(f.step(), kStep))
        throw BadConfig("grid step is not a power of two");
    return dyadic_subintervals(root, kStep);
}

} // namespace sparselab
