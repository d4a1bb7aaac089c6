#include "coarsekit/spaces.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_set>

namespace coarsekit {

QuasiNormedSpace QuasiNormedSpace::make(int dim, double q) {
    if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    if (!(q > 0.0)) throw std::invalid_argument("q must be > 0");
    QuasiNormedSpace s;
    s.dim = dim;
    s.q = q;
    s.p = q < 1.0 ? q : 1.0;
    return s;
}

double QuasiNormedSpace::quasi_norm(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim)
        throw std::invalid_argument("quasi_norm: dimension mismatch");
    double s = 0.0;
    for (double v : x) s += std::pow(std::abs(v), q);
    return std::pow(s, 1.0 / q);
}

double QuasiNormedSpace::metric(std::span<const double> x,
                                std::span<const double> y) const {
    if (x.size() != y.size())
        throw std::invalid_argument("metric: dimension mismatch");
    return std::pow(quasi_norm(vec_sub(x, y)), p);
}

std::size_t PointSet::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return i;
    throw std::invalid_argument("unknown label: " + label);
}

std::size_t PointSet::find_point(std::span<const double> x) const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != x.size()) continue;
        bool eq = true;
        for (std::size_t k = 0; k < x.size(); ++k)
            if (points[i][k] != x[k]) { eq = false; break; }
        if (eq) return i;
    }
    return npos;
}

void PointSet::validate() const {
    if (labels.size() != points.size())
        throw std::invalid_argument("PointSet: labels/points length mismatch");
    std::unordered_set<std::string> seen;
    for (const auto& l : labels)
        if (!seen.insert(l).second)
            throw std::invalid_argument("PointSet: duplicate label " + l);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (static_cast<int>(points[i].size()) != space.dim)
            throw std::invalid_argument("PointSet: point dim mismatch");
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (space.metric(points[i], points[j]) <= 0.0)
                throw std::invalid_argument("PointSet: duplicate points " +
                                            labels[i] + ", " + labels[j]);
    }
}

std::string coord_label(std::span<const double> x) {
    std::string s = "(";
    char buf[64];
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%g", x[i]);
        if (i) s += ",";
        s += buf;
    }
    s += ")";
    return s;
}

PointSet sample_grid(const QuasiNormedSpace& space, int radius, double step,
                     std::size_t cap) {
    if (radius < 1) throw std::invalid_argument("radius must be >= 1");
    if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
    std::size_t side = 2 * static_cast<std::size_t>(radius) + 1;
    std::size_t count = 1;
    for (int d = 0; d < space.dim; ++d) {
        count *= side;
        if (count > cap)
            throw std::invalid_argument("sample_grid: point cap exceeded");
    }
    PointSet ps;
    ps.space = space;
    std::vector<int> idx(space.dim, -radius);
    for (;;) {
        Vec pt(space.dim);
        for (int d = 0; d < space.dim; ++d) pt[d] = idx[d] * step;
        ps.labels.push_back(coord_label(pt));
        ps.points.push_back(std::move(pt));
        int d = 0;
        for (; d < space.dim; ++d) {
            if (++idx[d] <= radius) break;
            idx[d] = -radius;
        }
        if (d == space.dim) break;
    }
    return ps;
}

PointSet multiples_closure(const PointSet& base, const Vec& x, int n_max) {
    PointSet out = base;
    for (int k = 0; k <= n_max; ++k) {
        Vec kx = vec_scale(x, static_cast<double>(k));
        if (out.find_point(kx) == PointSet::npos) {
            out.labels.push_back(coord_label(kx));
            out.points.push_back(std::move(kx));
        }
    }
    return out;
}

Vec vec_sub(std::span<const double> a, std::span<const double> b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec vec_add(std::span<const double> a, std::span<const double> b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec vec_scale(std::span<const double> a, double c) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c;
    return r;
}

Vec vec_neg(std::span<const double> a) { return vec_scale(a, -1.0); }

double euclid_dist2(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace coarsekit
