#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace pq {

// Finite metric space with a dense symmetric distance matrix.
// Coordinates are optional (generated corpora carry planar coords; distances
// are then Euclidean). triangle_certified is set when the triangle inequality
// is known to hold by construction or has been validated.
struct MetricSpace {
    int n = 0;
    std::vector<double> dist;                       // row-major n*n
    std::vector<std::array<double, 2>> coords;      // empty if unknown
    std::vector<std::string> labels;                // empty if unlabeled
    bool triangle_certified = false;

    double d(int i, int j) const { return dist[static_cast<std::size_t>(i) * n + j]; }
    double& d(int i, int j) { return dist[static_cast<std::size_t>(i) * n + j]; }

    double diameter() const;
    // max over points of the distance to the nearest other point
    double max_nn_distance() const;

    static MetricSpace from_points(const std::vector<std::array<double, 2>>& pts);
    static MetricSpace from_matrix(int n, std::vector<double> matrix);
};

// Sorted, duplicate-free list of point indices into a MetricSpace.
struct SubsetRef {
    std::vector<int> indices;

    static SubsetRef of(std::vector<int> idx);      // sorts + dedups
    static SubsetRef full(int n);
    static SubsetRef complement(const SubsetRef& s, int n);

    bool empty() const { return indices.empty(); }
    int size() const { return static_cast<int>(indices.size()); }
    bool contains(int i) const;
    bool valid_for(int n) const;
};

// Partition of an explicit ground set (the whole space or a subset).
// classes hold global point indices, each sorted; classes are ordered by
// their minimum element so identical partitions compare equal.
struct Partition {
    std::vector<int> ground;                        // sorted global indices
    std::vector<int> class_of;                      // parallel to ground
    std::vector<std::vector<int>> classes;

    int K() const { return static_cast<int>(classes.size()); }
    bool covers_all(int n) const;
    // class index of global point g; ground must contain g
    int class_of_point(int g) const;

    static Partition singletons(int n);
    static Partition single_class(int n);
    // Build from a class_of array over 0..n-1; class ids are renumbered
    // canonically (by minimum member).
    static Partition from_class_of(const std::vector<int>& class_of);
    // Build from explicit classes over an arbitrary ground set.
    static Partition from_classes(std::vector<std::vector<int>> classes);
    // structural check; throws std::invalid_argument on violation
    void validate(int n, bool must_cover_all) const;
};

struct ValidationIssue {
    std::string check;       // "finite" | "diagonal" | "symmetry" | "positivity" | "triangle"
    std::array<int, 3> idx;  // unused slots = -1
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

// Checks the metric axioms entry-wise. The cubic triangle sweep only runs
// when check_triangle is set; its slack is tri_rel_tol * (matrix maximum).
ValidationReport validate_metric(const MetricSpace& space, bool check_triangle,
                                 double tri_rel_tol = 1e-9);

// min over x in X, y in Y of d(x,y); X, Y must be non-empty
double subset_distance(const MetricSpace& space, const SubsetRef& X, const SubsetRef& Y);

// Components of the graph on S joining points at distance <= delta
// (closed threshold). Returned partition's ground set is S.
Partition epsilon_components(const MetricSpace& space, const SubsetRef& S, double delta);

// Indices within distance r of x: strict (open ball) or <= r (closed).
SubsetRef ball(const MetricSpace& space, int x, double r, bool closed);

}  // namespace pq
