#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pq/metric_space.hpp"

namespace pq {

// K x K matrix of minimum pairwise distances between partition classes.
struct ClassGraph {
    int K = 0;
    std::vector<double> w;  // row-major K*K, zero diagonal, symmetric
    double at(int a, int b) const { return w[static_cast<std::size_t>(a) * K + b]; }
    double& at(int a, int b) { return w[static_cast<std::size_t>(a) * K + b]; }
};

ClassGraph class_graph(const MetricSpace& space, const Partition& partition);

// The partition pseudo-metric: for each pair of points, the cheapest chain of
// class-to-class hops joining their classes. class_delta holds the K x K
// shortest-path closure of the class graph; point values are looked up through
// class membership.
struct QuotientPseudoMetric {
    int n = 0;
    Partition partition;             // full-space partition that generated it
    std::vector<double> class_delta;  // K*K
    double diameter = 0.0;            // of the underlying space (tolerance scaling)

    int K() const { return partition.K(); }
    double at_classes(int a, int b) const {
        return class_delta[static_cast<std::size_t>(a) * K() + b];
    }
    double at(int i, int j) const {
        return at_classes(partition.class_of[i], partition.class_of[j]);
    }
    std::vector<double> dense() const;  // n*n point matrix
};

QuotientPseudoMetric delta_p(const MetricSpace& space, const Partition& partition);

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Independent brute force over all simple class sequences (no repeated
// class); throws CapacityError for K > max_classes. Returns the n*n matrix.
std::vector<double> delta_p_oracle(const MetricSpace& space, const Partition& partition,
                                   int max_classes = 9);

// One optimal class sequence for a class pair, ties broken toward the
// lexicographically smallest next class.
struct StringWitness {
    std::vector<int> class_sequence;
    double total = 0.0;
};

StringWitness string_witness(const ClassGraph& graph, const QuotientPseudoMetric& qpm,
                             int from_class, int to_class);

// Quotient metric space: classes of the zero-delta relation (within
// tau_merge), the induced metric nabla, and the projection pi.
struct QuotientSpace {
    Partition Q;                  // full-space partition into quotient classes
    std::vector<double> nabla;    // |Q| x |Q|
    std::vector<int> pi;          // point index -> Q class index
    double at(int a, int b) const { return nabla[static_cast<std::size_t>(a) * Q.K() + b]; }
    MetricSpace as_metric_space() const;
};

QuotientSpace quotient_space(const QuotientPseudoMetric& qpm, double tau_merge = 0.0);

// Property-check reporting: one row per violated assertion.
struct PropertyViolation {
    std::string check;
    std::array<int, 3> idx;
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
};

struct PropertyReport {
    std::string name;
    std::vector<PropertyViolation> violations;
    long checked = 0;
    std::string notice;  // e.g. vacuous-pass reason
    bool ok() const { return violations.empty(); }
};

// Pseudo-metric axioms plus the three defining inequalities: delta <= d,
// zero on classes, class invariance (delta constant on class blocks).
PropertyReport verify_pseudometric(const MetricSpace& space, const QuotientPseudoMetric& qpm,
                                   double rel_tol = 1e-12);

// For partitions of the form {classes of F} + {singletons of the complement}:
// delta(x,y) >= min(max(dist(x,F), dist(y,F)), d(x,y)).
PropertyReport lower_bound_check(const MetricSpace& space, const QuotientPseudoMetric& qpm,
                                 const SubsetRef& F, double rel_tol = 1e-12);

// On the open ball of radius dist(x,F)/3 about any x outside F, delta equals
// d exactly.
PropertyReport local_isometry_check(const MetricSpace& space, const QuotientPseudoMetric& qpm,
                                    const SubsetRef& F, double rel_tol = 1e-12);

// Shortest paths restricted to F-classes only, with the equality report
// against the unrestricted values for all F-point pairs.
struct FRestrictedDelta {
    std::vector<int> f_classes;        // class ids of the F-side classes
    std::vector<double> delta_f;       // |f_classes|^2 restricted values
    PropertyReport equality;
};

FRestrictedDelta f_restricted_delta(const MetricSpace& space, const QuotientPseudoMetric& qpm,
                                    const SubsetRef& F, double rel_tol = 1e-12);

// nabla > 0 between every pair of distinct listed quotient classes.
PropertyReport separation_check(const QuotientSpace& qspace, const std::vector<int>& f_classes);

// Throws unless every class is either contained in F or a singleton outside F.
void require_f_form(const Partition& partition, const SubsetRef& F, int n);

}  // namespace pq
