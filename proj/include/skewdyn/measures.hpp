#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "skewdyn/skew.hpp"

namespace skewdyn {

// ---------------------------------------------------------------------------
// Empirical measures: finite weighted point clouds on the product space.

struct Atom {
    PointX point;
    double weight;
};

class EmpiricalMeasure {
public:
    // Normalizes to total weight 1 and sorts atoms canonically by
    // (word text, infinity flag, re, im); construction order never shows in
    // serialized output. With merge_tol > 0, atoms with equal words and
    // sphere points within merge_tol are combined first.
    static EmpiricalMeasure from_atoms(std::vector<Atom> atoms, double merge_tol = 0.0);

    const std::vector<Atom>& atoms() const { return atoms_; }
    size_t size() const { return atoms_.size(); }
    double total_weight() const;  // 1 within 1e-12 by construction

    bool stochastic = false;  // estimated from sampled paths
    int sample_count = 0;     // number of paths when stochastic
    std::uint64_t seed = 0;

private:
    std::vector<Atom> atoms_;
};

template <class F>
double integrate(const EmpiricalMeasure& mu, F&& h) {
    double s = 0.0, comp = 0.0;
    for (const Atom& a : mu.atoms()) {  // Kahan; atom counts reach 10^6
        double term = a.weight * h(a.point) - comp;
        double t = s + term;
        comp = (t - s) - term;
        s = t;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Test functions: the finite weak*-probe family.
//
// Sphere part Re(z^p conj(z)^q) / (1 + |z|^2)^s with s >= (p+q)/2, so every
// probe is bounded by 1; an optional cylinder factor restricts the word. The
// value at infinity is 0 when p+q < 2s and 1 when p == q == s.

class TestFunction {
public:
    static TestFunction constant();
    static TestFunction cylinder(Cylinder c);
    static TestFunction moment(int p, int q, int s);
    static TestFunction moment_on_cylinder(int p, int q, int s, Cylinder c);

    double operator()(const PointX& x) const { return eval(x.word, x.z); }

    // Word-like overload for tree walkers carrying path views.
    template <class WordLike>
    double eval(const WordLike& w, const SpherePoint& z) const {
        if (cyl_ && !in_cylinder(w, *cyl_)) return 0.0;
        return sphere_part(z);
    }

    double bound() const { return 1.0; }  // sup over the product space
    const std::string& name() const { return name_; }

private:
    TestFunction() = default;
    double sphere_part(const SpherePoint& z) const;

    bool is_constant_ = false;
    int p_ = 0, q_ = 0, s_ = 0;
    std::optional<Cylinder> cyl_;
    std::string name_;
};

using Dictionary = std::vector<TestFunction>;

// Constant first, then cylinder indicators of length <= 2, then the four
// bounded moments alone and over each length-1 cylinder:
// 1 + (N + N^2) + 4(1 + N) entries.
Dictionary default_dictionary(int N);

// ---------------------------------------------------------------------------
// The measures of interest.

// Uniform mass (d_1 + ... + d_N)^{-n} on the n-th order preimages of `base`.
EmpiricalMeasure preimage_measure(const MapFamily& fam, const PointX& base, int n,
                                  std::size_t budget);

// Stochastic variant: uniform mass over `paths` sampled depth-n preimages.
EmpiricalMeasure preimage_measure_stochastic(const MapFamily& fam, const PointX& base, int n,
                                             int paths, std::uint64_t seed);

// Fixed points of the map composed along one period of a purely periodic
// word, with multiplicity; each is Newton-polished by the root finder.
std::vector<MultPoint> fix_points(const MapFamily& fam, const Word& cycle_word);

struct PeriodicMeasureInfo {
    long long actual_count = 0;      // multiset cardinality: (sum d)^m + N^m
    long long printed_normalizer = 0;  // (sum d)^m + N, kept for comparison
    bool normalizers_differ = false;
};

// Uniform measure on all period-m points (every letter cycle, every fixed
// point of its composed map, multiplicity as weight), normalized by the
// actual multiset cardinality. `info`, when given, receives the cardinality
// bookkeeping including the differing conventional normalizer.
EmpiricalMeasure periodic_measure(const MapFamily& fam, int m,
                                  PeriodicMeasureInfo* info = nullptr);

// Mass 1/n on p, Tp, ..., T^{n-1}p.
EmpiricalMeasure orbital_measure(const MapFamily& fam, const PointX& p, int n);

// Mass 1/m on the orbit of a verified m-periodic point; exactly T-invariant
// as a cycle. Rejects inputs whose m-step return misses by more than tol.
EmpiricalMeasure periodic_orbital_measure(const MapFamily& fam, const PointX& p, int m,
                                          double tol = 1e-6);

double integrate(const EmpiricalMeasure& mu, const TestFunction& h);

// max over the dictionary of |int h dmu - int h dnu|.
double discrepancy(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                   const Dictionary& dict);

// ---------------------------------------------------------------------------
// The averaging operator over first-order preimages.

// (1/(d_1+...+d_N)) sum over letters v and fiber roots of h((v w), root).
double g_apply(const MapFamily& fam, const std::function<double(const PointX&)>& h,
               const PointX& p);
double g_apply(const MapFamily& fam, const TestFunction& h, const PointX& p);

struct GIterateReport {
    int depth = 0;
    std::vector<PointX> bases;
    // values[k][j]: the k+1-fold average of h at base j.
    std::vector<std::vector<double>> values;
    std::vector<double> spreads;            // max - min across bases per depth
    std::vector<double> successive_diffs;   // max_j |values[k][j] - values[k-1][j]|
    bool stochastic = false;
    double standard_error = 0.0;
};

// Iterated averages via depth-m trees (or stochastic estimates past the
// budget); the spread across base points shrinking with m is the convergence
// diagnostic.
GIterateReport g_iterate(const MapFamily& fam, const TestFunction& h,
                         const std::vector<PointX>& bases, int m, std::size_t budget,
                         int stochastic_paths = 10000, std::uint64_t seed = 0);

}  // namespace skewdyn
