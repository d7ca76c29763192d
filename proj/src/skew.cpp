#include "skewdyn/skew.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "skewdyn/errors.hpp"
#include "skewdyn/rng.hpp"

namespace skewdyn {

PointX apply_T(const MapFamily& fam, const PointX& p) {
    Letter v = p.word.at(0);
    if (v > fam.size()) throw ConfigError("apply_T: word letter exceeds family size");
    return {shift(p.word), fam.map(v)(p.z)};
}

double point_distance(const PointX& p, const PointX& q) {
    return std::max(word_distance(p.word, q.word), spherical_distance(p.z, q.z));
}

double derivative_Tm(const MapFamily& fam, const PointX& p, int m) {
    double mod = 1.0;
    PointX cur = p;
    for (int k = 0; k < m; ++k) {
        Letter v = cur.word.at(0);
        mod *= chart_derivative_modulus(fam.map(v), cur.z);
        cur = apply_T(fam, cur);
    }
    return mod;
}

Word PathWord::materialize() const {
    std::vector<Letter> rev(path_.rbegin(), path_.rend());
    return prepend(std::span<const Letter>(rev.data(), rev.size()), *base_);
}

std::size_t PreimageTree::leaf_count_with_multiplicity() const {
    if (levels.empty()) return 0;
    // Multiplicities multiply along paths; propagate level by level.
    std::vector<std::size_t> acc;
    for (size_t k = 0; k < levels.size(); ++k) {
        std::vector<std::size_t> next(levels[k].size());
        for (size_t i = 0; i < levels[k].size(); ++i) {
            const Node& nd = levels[k][i];
            std::size_t parent_mult = (k == 0) ? 1 : acc[static_cast<size_t>(nd.parent)];
            next[i] = parent_mult * static_cast<std::size_t>(nd.multiplicity);
        }
        acc = std::move(next);
    }
    std::size_t total = 0;
    for (std::size_t v : acc) total += v;
    return total;
}

std::vector<std::pair<PointX, int>> PreimageTree::leaf_points() const {
    std::vector<std::pair<PointX, int>> out;
    if (levels.empty()) return out;
    const auto& leaves = levels.back();
    out.reserve(leaves.size());
    for (size_t i = 0; i < leaves.size(); ++i) {
        // Reconstruct the letter path root-ward and the product of multiplicities.
        std::vector<Letter> rev;
        int mult = 1;
        size_t level = levels.size() - 1;
        std::int32_t idx = static_cast<std::int32_t>(i);
        for (;;) {
            const Node& nd = levels[level][static_cast<size_t>(idx)];
            rev.push_back(nd.letter);
            mult *= nd.multiplicity;
            if (level == 0) break;
            idx = nd.parent;
            --level;
        }
        // rev now lists letters leaf-to-root, i.e. last-prepended first: that
        // is exactly the word order.
        Word w = prepend(std::span<const Letter>(rev.data(), rev.size()), base.word);
        out.push_back({PointX{std::move(w), leaves[i].z}, mult});
    }
    return out;
}

PreimageTree enumerate_preimages(const MapFamily& fam, const PointX& base, int n,
                                 std::size_t budget) {
    if (n < 1) throw ConfigError("enumerate_preimages: depth must be >= 1");
    double expected = std::pow(static_cast<double>(fam.total_degree()), n);
    if (expected > static_cast<double>(budget))
        throw BudgetError("enumerate_preimages: " + std::to_string(fam.total_degree()) + "^" +
                          std::to_string(n) +
                          " leaves exceed the node budget; use stochastic sampling");
    PreimageTree tree{base, n, false, {}};
    tree.levels.resize(static_cast<size_t>(n));
    struct Frame {
        SpherePoint z;
        std::int32_t index;
    };
    std::vector<Frame> stack;  // one frame per level along the current path
    stack.push_back({base.z, -1});
    auto enter = [&](int depth, Letter letter, const SpherePoint& z, int mult,
                     std::span<const Letter>) {
        auto& level = tree.levels[static_cast<size_t>(depth - 1)];
        std::int32_t parent = stack.back().index;
        // Root index within the fiber: count siblings already present.
        std::int32_t root_index = 0;
        for (auto it = level.rbegin(); it != level.rend() && it->parent == parent &&
                                       it->letter == letter;
             ++it)
            ++root_index;
        level.push_back({parent, letter, root_index, z, mult});
        stack.push_back({z, static_cast<std::int32_t>(level.size() - 1)});
    };
    auto leave = [&]() { stack.pop_back(); };
    walk_preimages(fam, base.z, n, enter, leave);
    return tree;
}

namespace {

// Multiplicity-weighted uniform pick from a fiber.
const MultPoint& pick_root(const std::vector<MultPoint>& fiber, std::uint64_t h, int degree) {
    long long r = static_cast<long long>(h % static_cast<std::uint64_t>(degree));
    for (const MultPoint& mp : fiber) {
        r -= mp.multiplicity;
        if (r < 0) return mp;
    }
    return fiber.back();
}

}  // namespace

Word InversePath::word_at(size_t k, const Word& base_word) const {
    std::vector<Letter> rev(letters.begin(), letters.begin() + static_cast<long>(k) + 1);
    std::reverse(rev.begin(), rev.end());
    return prepend(std::span<const Letter>(rev.data(), rev.size()), base_word);
}

PointX InversePath::point_at(size_t k, const Word& base_word) const {
    return {word_at(k, base_word), zs[k]};
}

InversePath sample_inverse_path(const MapFamily& fam, const SpherePoint& base_z, int n,
                                std::uint64_t seed, std::uint64_t path_index) {
    if (n < 1) throw ConfigError("sample_inverse_path: length must be >= 1");
    InversePath path;
    path.seed = seed;
    path.letters.reserve(static_cast<size_t>(n));
    path.zs.reserve(static_cast<size_t>(n));
    SpherePoint cur = base_z;
    for (int k = 0; k < n; ++k) {
        // Letter with probability d_v / total, via an exact integer threshold.
        std::uint64_t h1 = hash_mix(seed, path_index, static_cast<std::uint64_t>(k), 0);
        long long r = static_cast<long long>(h1 % static_cast<std::uint64_t>(fam.total_degree()));
        Letter v = 1;
        for (; v <= static_cast<Letter>(fam.size()); ++v) {
            r -= fam.map_degree(v);
            if (r < 0) break;
        }
        auto fiber = preimages(fam.map(v), cur);
        std::uint64_t h2 = hash_mix(seed, path_index, static_cast<std::uint64_t>(k), 1);
        cur = pick_root(fiber, h2, fam.map_degree(v)).point;
        path.letters.push_back(v);
        path.zs.push_back(cur);
    }
    return path;
}

std::vector<PointX> sample_inverse_orbit(const MapFamily& fam, const PointX& base, int n,
                                         std::uint64_t seed, std::uint64_t path_index) {
    InversePath path = sample_inverse_path(fam, base.z, n, seed, path_index);
    std::vector<PointX> out;
    out.reserve(static_cast<size_t>(n));
    for (size_t k = 0; k < path.zs.size(); ++k) out.push_back(path.point_at(k, base.word));
    return out;
}

SampleCloud julia_sample(const MapFamily& fam, const PointX& base, int burn_in, int count,
                         std::uint64_t seed) {
    SampleCloud cloud;
    cloud.seed = seed;
    cloud.burn_in = burn_in;
    if (count <= 0) return cloud;
    InversePath path = sample_inverse_path(fam, base.z, burn_in + count, seed);
    cloud.points.reserve(static_cast<size_t>(count));
    for (size_t k = static_cast<size_t>(burn_in); k < path.zs.size(); ++k)
        cloud.points.push_back(path.point_at(k, base.word));
    return cloud;
}

PointX default_base_point(const MapFamily& fam) {
    const RationalMap& R1 = fam.map(1);
    const MultPoint* best = nullptr;
    double best_mod = 1.0;
    std::vector<MultPoint> fixed = sphere_fixed_points(R1);
    for (const MultPoint& mp : fixed) {
        double mod = chart_derivative_modulus(R1, mp.point);
        if (mod > best_mod + 1e-9) {
            best_mod = mod;
            best = &mp;
        }
    }
    if (!best)
        throw NumericError("default_base_point: R_1 has no repelling fixed point; supply a base");
    return {Word::pure_cycle({1}), best->point};
}

CriticalData critical_values_up_to(const MapFamily& fam, int n) {
    if (n < 1) throw ConfigError("critical_values_up_to: order must be >= 1");
    CriticalData data;
    data.order = n;
    data.per_map.resize(static_cast<size_t>(fam.size()));
    for (Letter v = 1; v <= static_cast<Letter>(fam.size()); ++v)
        data.per_map[static_cast<size_t>(v - 1)] = critical_points(fam.map(v));

    auto push_unique = [](std::vector<SpherePoint>& dst, const SpherePoint& p) {
        for (const SpherePoint& q : dst)
            if (spherical_distance(p, q) < 1e-9) return;
        dst.push_back(p);
    };

    // Front of images after k steps along every letter path; a path of length
    // k applied to a critical point of its first map yields an order-k value.
    struct State {
        SpherePoint z;
    };
    std::vector<State> frontier;
    for (Letter first = 1; first <= static_cast<Letter>(fam.size()); ++first) {
        frontier.clear();
        for (const MultPoint& c : data.per_map[static_cast<size_t>(first - 1)])
            frontier.push_back({fam.map(first)(c.point)});
        for (const State& s : frontier) {
            push_unique(data.values, s.z);
            push_unique(data.order1_values, s.z);
        }
        for (int k = 2; k <= n; ++k) {
            std::vector<State> next;
            next.reserve(frontier.size() * static_cast<size_t>(fam.size()));
            for (const State& s : frontier)
                for (Letter v = 1; v <= static_cast<Letter>(fam.size()); ++v)
                    next.push_back({fam.map(v)(s.z)});
            frontier = std::move(next);
            for (const State& s : frontier) push_unique(data.values, s.z);
        }
    }
    return data;
}

RegionU::RegionU(SpherePoint c, double r) : center(c), radius(r) {
    if (!(r > 0.0 && r < 2.0)) throw ConfigError("RegionU: radius must lie in (0, 2)");
}

std::vector<SpherePoint> RegionU::boundary_points(int K) const {
    // The chordal circle of radius r around the center is the spherical circle
    // at polar angle phi = 2 asin(r/2) about the center axis.
    auto c3 = center.to_r3();
    double phi = 2.0 * std::asin(radius / 2.0);
    // Orthonormal frame {e1, e2} perpendicular to the axis.
    std::array<double, 3> ref = std::abs(c3[0]) < 0.9 ? std::array<double, 3>{1.0, 0.0, 0.0}
                                                      : std::array<double, 3>{0.0, 1.0, 0.0};
    auto cross = [](const std::array<double, 3>& u, const std::array<double, 3>& v) {
        return std::array<double, 3>{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                                     u[0] * v[1] - u[1] * v[0]};
    };
    auto e1 = cross(c3, ref);
    double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (double& x : e1) x /= n1;
    auto e2 = cross(c3, e1);

    std::vector<SpherePoint> pts;
    pts.reserve(static_cast<size_t>(K));
    double cp = std::cos(phi), sp = std::sin(phi);
    for (int k = 0; k < K; ++k) {
        double th = 2.0 * M_PI * k / K;
        std::array<double, 3> u;
        for (int i = 0; i < 3; ++i)
            u[static_cast<size_t>(i)] = cp * c3[static_cast<size_t>(i)] +
                                        sp * (std::cos(th) * e1[static_cast<size_t>(i)] +
                                              std::sin(th) * e2[static_cast<size_t>(i)]);
        pts.push_back(SpherePoint::from_r3(u));
    }
    return pts;
}

A1Report check_A1(const MapFamily& fam, const std::vector<PointX>& sample, int max_period,
                  double tol) {
    if (max_period < 1) throw ConfigError("check_A1: max_period must be >= 1");
    A1Report report;
    report.max_period = max_period;
    report.tol = tol;
    for (int m = 1; m <= max_period; ++m) {
        // All N^m letter cycles of length m.
        std::vector<Letter> cycle(static_cast<size_t>(m), 1);
        for (;;) {
            RationalMap comp = compose_cycle(fam, cycle);
            Word w = Word::pure_cycle(cycle);
            for (const MultPoint& fp : sphere_fixed_points(comp)) {
                report.periodic_points_checked += fp.multiplicity;
                bool near = false;
                for (const PointX& s : sample)
                    if (spherical_distance(fp.point, s.z) < tol) {
                        near = true;
                        break;
                    }
                if (!near) continue;
                ++report.near_sample;
                double mod = derivative_Tm(fam, PointX{w, fp.point}, m);
                if (!(mod > tol))
                    report.violations.push_back({w, fp.point, m, mod});
            }
            // Next cycle in odometer order.
            int i = m - 1;
            while (i >= 0 && cycle[static_cast<size_t>(i)] == static_cast<Letter>(fam.size())) {
                cycle[static_cast<size_t>(i)] = 1;
                --i;
            }
            if (i < 0) break;
            ++cycle[static_cast<size_t>(i)];
        }
    }
    return report;
}

int worker_count() {
    if (const char* env = std::getenv("SKEWDYN_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace skewdyn
