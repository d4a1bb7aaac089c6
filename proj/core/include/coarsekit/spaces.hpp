#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace coarsekit {

using Vec = std::vector<double>;

/// Finite-dimensional l_q coordinate space carrying the p-metric
/// d(x,y) = ||x-y||_q^p.  For q < 1 the subadditivity exponent is p = q,
/// for q >= 1 it is p = 1.
struct QuasiNormedSpace {
    int dim = 1;
    double q = 2.0;
    double p = 1.0;

    static QuasiNormedSpace make(int dim, double q);

    double quasi_norm(std::span<const double> x) const;
    double metric(std::span<const double> x, std::span<const double> y) const;
};

/// Finite labeled sample of a space.  Labels are unique and positional.
struct PointSet {
    QuasiNormedSpace space;
    std::vector<std::string> labels;
    std::vector<Vec> points;

    std::size_t size() const { return points.size(); }
    const Vec& at(std::size_t i) const { return points[i]; }
    /// Index of a label, throws if unknown.
    std::size_t index_of(const std::string& label) const;
    /// Index of a point with exactly these coordinates, or npos.
    std::size_t find_point(std::span<const double> x) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    void validate() const;
};

/// Integer grid {-radius..radius}^dim scaled by step, centered at the
/// origin.  Throws if (2*radius+1)^dim exceeds cap.
PointSet sample_grid(const QuasiNormedSpace& space, int radius, double step,
                     std::size_t cap = 5000);

/// base together with the multiples {k*x : 0 <= k <= n_max}, deduplicated
/// by exact coordinate equality.
PointSet multiples_closure(const PointSet& base, const Vec& x, int n_max);

Vec vec_sub(std::span<const double> a, std::span<const double> b);
Vec vec_add(std::span<const double> a, std::span<const double> b);
Vec vec_scale(std::span<const double> a, double c);
Vec vec_neg(std::span<const double> a);
double euclid_dist2(std::span<const double> a, std::span<const double> b);

std::string coord_label(std::span<const double> x);

}  // namespace coarsekit
