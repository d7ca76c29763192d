#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <future>
#include <optional>
#include <span>
#include <vector>

#include "skewdyn/rational_map.hpp"
#include "skewdyn/word.hpp"

namespace skewdyn {

// A point of the product space: (word, sphere point).
struct PointX {
    Word word;
    SpherePoint z;
};

// One step of the skew product: shift the word, apply the map its first
// letter selects.
PointX apply_T(const MapFamily& fam, const PointX& p);

// max of the word metric and the chordal metric.
double point_distance(const PointX& p, const PointX& q);

// Sum of f over p, Tp, ..., T^{n-1}p for any f defined on the product space.
template <class F>
double ergodic_sum(const MapFamily& fam, F&& f, PointX p, int n) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
        s += f(p);
        if (k + 1 < n) p = apply_T(fam, p);
    }
    return s;
}

// Modulus of the m-step derivative cocycle at p, computed chart by chart
// (z -> 1/z whenever |z| > 1). Zero iff the orbit passes through a critical
// point of its step map. For a periodic orbit this is the multiplier modulus;
// elsewhere the value depends on the documented chart convention.
double derivative_Tm(const MapFamily& fam, const PointX& p, int m);

// ---------------------------------------------------------------------------
// Preimage trees.
//
// Descending one level prepends a letter v and solves R_v(child) = parent.
// A node at depth k reached by prepending a_1 (first) ... a_k (last) has word
// (a_k ... a_1 w0) and T^k maps it back to the base. Fibers carry
// multiplicities from clustered roots; leaf count with multiplicity is
// exactly (d_1 + ... + d_N)^n in exhaustive mode.

// Read-only view of a tree path as a word: letter 0 is the letter prepended
// last. Valid only during a walker callback.
class PathWord {
public:
    PathWord(std::span<const Letter> path, const Word& base) : path_(path), base_(&base) {}
    Letter at(size_t i) const {
        return i < path_.size() ? path_[path_.size() - 1 - i] : base_->at(i - path_.size());
    }
    size_t path_length() const { return path_.size(); }
    Word materialize() const;

private:
    std::span<const Letter> path_;
    const Word* base_;
};

// Depth-first walk over the depth-n preimage tree of base_z. enter is called
// for every node below the root with (depth, letter, z, multiplicity, path);
// leave is called when the walk retreats from the node. path[0] is the letter
// prepended at depth 1 (adjacent to the base word). DFS order is fixed by
// letter order and the canonical root order, so traversals are deterministic.
template <class Enter, class Leave>
void walk_preimages(const MapFamily& fam, const SpherePoint& base_z, int depth,
                    Enter&& enter, Leave&& leave) {
    std::vector<Letter> path;
    path.reserve(static_cast<size_t>(depth));
    struct Rec {
        const MapFamily& fam;
        int depth;
        std::vector<Letter>& path;
        Enter& enter;
        Leave& leave;
        void go(const SpherePoint& z) {
            int level = static_cast<int>(path.size());
            if (level == depth) return;
            for (Letter v = 1; v <= static_cast<Letter>(fam.size()); ++v) {
                for (const MultPoint& r : preimages(fam.map(v), z)) {
                    path.push_back(v);
                    enter(level + 1, v, r.point, r.multiplicity,
                          std::span<const Letter>(path.data(), path.size()));
                    go(r.point);
                    leave();
                    path.pop_back();
                }
            }
        }
    } rec{fam, depth, path, enter, leave};
    rec.go(base_z);
}

// Materialized preimage tree (exhaustive unless the stochastic flag is set).
struct PreimageTree {
    struct Node {
        std::int32_t parent;  // index into the previous level, -1 for depth 1
        Letter letter;        // letter prepended at this step
        std::int32_t root_index;  // position within its fiber
        SpherePoint z;
        std::int32_t multiplicity;
    };
    PointX base;
    int depth = 0;
    bool stochastic = false;
    std::vector<std::vector<Node>> levels;  // levels[k-1] = depth-k nodes

    std::size_t leaf_count_with_multiplicity() const;
    // Leaves as points of the product space, with their tree multiplicities.
    std::vector<std::pair<PointX, int>> leaf_points() const;
};

// Exhaustive enumeration to depth n. Throws BudgetError when the leaf count
// (total_degree^n) would exceed the node budget; callers then switch to
// sample_inverse_orbit-based estimates.
PreimageTree enumerate_preimages(const MapFamily& fam, const PointX& base, int n,
                                 std::size_t budget);

// One backward path of length n in compact form: letters[k] is the letter
// prepended at step k+1 and zs[k] the sphere point after k+1 backward steps,
// so the point after step k+1 is ((letters[k] ... letters[0] w0), zs[k]).
// Keeping letters and sphere points separate avoids materializing the
// quadratic total length of all the words along a long path.
struct InversePath {
    std::vector<Letter> letters;
    std::vector<SpherePoint> zs;
    std::uint64_t seed = 0;

    // Word and point after step k+1 (0-based k), built on demand.
    Word word_at(size_t k, const Word& base_word) const;
    PointX point_at(size_t k, const Word& base_word) const;
};

// At each backward step the letter v is chosen with probability
// d_v / (d_1 + ... + d_N) and then one of the d_v fiber roots uniformly
// (multiplicity-weighted), so each depth-n preimage is reached with
// probability (d_1 + ... + d_N)^{-n}. Draws are hashed from
// (seed, path_index, step), deterministic under any thread schedule.
InversePath sample_inverse_path(const MapFamily& fam, const SpherePoint& base_z, int n,
                                std::uint64_t seed, std::uint64_t path_index = 0);

// Materialized form of sample_inverse_path; word lengths grow with the step
// index, so keep n moderate here and use the compact form for long runs.
std::vector<PointX> sample_inverse_orbit(const MapFamily& fam, const PointX& base, int n,
                                         std::uint64_t seed, std::uint64_t path_index = 0);

struct SampleCloud {
    std::vector<PointX> points;
    std::uint64_t seed = 0;
    int burn_in = 0;
};

// Inverse-iteration sample of the Julia set: the last `count` points of a
// stochastic backward orbit after discarding `burn_in` steps.
SampleCloud julia_sample(const MapFamily& fam, const PointX& base, int burn_in, int count,
                         std::uint64_t seed);

// Default base: a repelling fixed point of R_1 paired with the word (1 1 ...).
// Throws NumericError when R_1 has no repelling fixed point.
PointX default_base_point(const MapFamily& fam);

// ---------------------------------------------------------------------------
// Critical data.

struct CriticalData {
    int order = 0;
    // Critical points of each generator (the sphere slice of the critical set).
    std::vector<std::vector<MultPoint>> per_map;
    // Sphere projection of the critical values of order <= `order`, deduplicated.
    std::vector<SpherePoint> values;
    // Order-1 values only: images R_v(c) over critical points c of R_v.
    std::vector<SpherePoint> order1_values;
};

// Forward images of the critical points along every letter path of length <= n.
CriticalData critical_values_up_to(const MapFamily& fam, int n);

// A sphere disk; the symbolic factor is the whole shift space.
struct RegionU {
    SpherePoint center;
    double radius;  // chordal, in (0, 2)

    RegionU(SpherePoint c, double r);
    bool contains(const SpherePoint& q) const { return spherical_distance(center, q) < radius; }
    // K points along the boundary circle, counterclockwise around the center axis.
    std::vector<SpherePoint> boundary_points(int K) const;
};

// ---------------------------------------------------------------------------
// Super-attracting diagnostic.

struct A1Violation {
    Word word;
    SpherePoint z;
    int period;
    double derivative_modulus;
};

struct A1Report {
    int max_period = 0;
    double tol = 0.0;
    int periodic_points_checked = 0;  // all periods, all cycles, with multiplicity
    int near_sample = 0;              // those within tol of the sample cloud
    std::vector<A1Violation> violations;
    bool pass() const { return violations.empty(); }
};

// For every periodic point of period m <= max_period lying within tol of the
// sample cloud, checks |(T^m)'| > tol; violations are report entries.
A1Report check_A1(const MapFamily& fam, const std::vector<PointX>& sample, int max_period,
                  double tol);

// ---------------------------------------------------------------------------
// Deterministic fork-join helper: applies fn(i) for i in [0, count) on up to
// SKEWDYN_THREADS workers and returns results in index order, so merged
// outputs never depend on the schedule.
int worker_count();

template <class Fn>
auto parallel_map(std::size_t count, Fn&& fn) {
    using R = decltype(fn(std::size_t{0}));
    std::vector<std::optional<R>> slots(count);
    int workers = worker_count();
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) slots[i].emplace(fn(i));
    } else {
        std::atomic<std::size_t> next{0};
        auto body = [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                slots[i].emplace(fn(i));
            }
        };
        std::vector<std::future<void>> futs;
        int spawn =
            static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), count));
        futs.reserve(static_cast<size_t>(spawn));
        for (int t = 0; t < spawn; ++t) futs.push_back(std::async(std::launch::async, body));
        for (auto& f : futs) f.get();
    }
    std::vector<R> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace skewdyn
