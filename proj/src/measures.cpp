#include "skewdyn/measures.hpp"

#include <algorithm>
#include <cmath>

#include "skewdyn/errors.hpp"
#include "skewdyn/io_util.hpp"
#include "skewdyn/rng.hpp"

namespace skewdyn {

namespace {

struct AtomKey {
    std::string word;
    bool inf;
    double re, im;
};

AtomKey key_of(const Atom& a) {
    if (a.point.z.is_infinity()) return {a.point.word.to_text(), true, 0.0, 0.0};
    Complex z = a.point.z.to_complex();
    return {a.point.word.to_text(), false, z.real(), z.imag()};
}

bool key_less(const AtomKey& x, const AtomKey& y) {
    if (x.word != y.word) return x.word < y.word;
    if (x.inf != y.inf) return x.inf < y.inf;
    if (x.re != y.re) return x.re < y.re;
    return x.im < y.im;
}

}  // namespace

EmpiricalMeasure EmpiricalMeasure::from_atoms(std::vector<Atom> atoms, double merge_tol) {
    if (atoms.empty()) throw ConfigError("EmpiricalMeasure: no atoms");
    double total = 0.0;
    for (const Atom& a : atoms) {
        if (!(a.weight >= 0.0)) throw ConfigError("EmpiricalMeasure: negative weight");
        total += a.weight;
    }
    if (!(total > 0.0)) throw ConfigError("EmpiricalMeasure: zero total weight");

    std::vector<std::pair<AtomKey, size_t>> order(atoms.size());
    for (size_t i = 0; i < atoms.size(); ++i) order[i] = {key_of(atoms[i]), i};
    std::sort(order.begin(), order.end(),
              [](const auto& x, const auto& y) { return key_less(x.first, y.first); });

    EmpiricalMeasure mu;
    mu.atoms_.reserve(atoms.size());
    for (const auto& [key, idx] : order) {
        Atom a = atoms[idx];
        a.weight /= total;
        if (merge_tol > 0.0 && !mu.atoms_.empty()) {
            Atom& last = mu.atoms_.back();
            if (last.point.word == a.point.word &&
                spherical_distance(last.point.z, a.point.z) < merge_tol) {
                last.weight += a.weight;
                continue;
            }
        }
        mu.atoms_.push_back(std::move(a));
    }
    return mu;
}

double EmpiricalMeasure::total_weight() const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.weight;
    return s;
}

// ---------------------------------------------------------------------------

TestFunction TestFunction::constant() {
    TestFunction f;
    f.is_constant_ = true;
    f.name_ = "const";
    return f;
}

TestFunction TestFunction::cylinder(Cylinder c) {
    TestFunction f;
    f.is_constant_ = true;  // sphere part identically 1
    f.name_ = "cyl[";
    for (size_t i = 0; i < c.letters.size(); ++i)
        f.name_ += (i ? " " : "") + std::to_string(static_cast<int>(c.letters[i]));
    f.name_ += "]";
    f.cyl_ = std::move(c);
    return f;
}

TestFunction TestFunction::moment(int p, int q, int s) {
    if (p + q > 2 * s || (p + q == 2 * s && p != q))
        throw ConfigError("TestFunction: moment (p, q, s) unbounded or undefined at infinity");
    TestFunction f;
    f.p_ = p;
    f.q_ = q;
    f.s_ = s;
    f.name_ = "mom(" + std::to_string(p) + "," + std::to_string(q) + "," + std::to_string(s) + ")";
    return f;
}

TestFunction TestFunction::moment_on_cylinder(int p, int q, int s, Cylinder c) {
    TestFunction f = moment(p, q, s);
    f.name_ += " cyl[";
    for (size_t i = 0; i < c.letters.size(); ++i)
        f.name_ += (i ? " " : "") + std::to_string(static_cast<int>(c.letters[i]));
    f.name_ += "]";
    f.cyl_ = std::move(c);
    return f;
}

double TestFunction::sphere_part(const SpherePoint& z) const {
    if (is_constant_) return 1.0;
    if (z.is_infinity()) return (p_ == q_ && p_ == s_) ? 1.0 : 0.0;
    Complex zz = z.to_complex();
    double n = std::norm(zz);
    Complex val = std::pow(zz, p_) * std::pow(std::conj(zz), q_);
    return val.real() / std::pow(1.0 + n, s_);
}

Dictionary default_dictionary(int N) {
    if (N < 1) throw ConfigError("default_dictionary: N >= 1 required");
    Dictionary d;
    d.push_back(TestFunction::constant());
    for (Letter v = 1; v <= static_cast<Letter>(N); ++v)
        d.push_back(TestFunction::cylinder(Cylinder({v})));
    for (Letter v = 1; v <= static_cast<Letter>(N); ++v)
        for (Letter u = 1; u <= static_cast<Letter>(N); ++u)
            d.push_back(TestFunction::cylinder(Cylinder({v, u})));
    const int moments[4][3] = {{1, 0, 1}, {2, 0, 2}, {1, 1, 1}, {2, 1, 2}};
    for (const auto& m : moments) d.push_back(TestFunction::moment(m[0], m[1], m[2]));
    for (const auto& m : moments)
        for (Letter v = 1; v <= static_cast<Letter>(N); ++v)
            d.push_back(TestFunction::moment_on_cylinder(m[0], m[1], m[2], Cylinder({v})));
    return d;
}

// ---------------------------------------------------------------------------

EmpiricalMeasure preimage_measure(const MapFamily& fam, const PointX& base, int n,
                                  std::size_t budget) {
    PreimageTree tree = enumerate_preimages(fam, base, n, budget);
    std::vector<Atom> atoms;
    for (auto& [pt, mult] : tree.leaf_points())
        atoms.push_back({std::move(pt), static_cast<double>(mult)});
    return EmpiricalMeasure::from_atoms(std::move(atoms));
}

EmpiricalMeasure preimage_measure_stochastic(const MapFamily& fam, const PointX& base, int n,
                                             int paths, std::uint64_t seed) {
    if (paths < 1) throw ConfigError("preimage_measure_stochastic: need paths >= 1");
    std::vector<Atom> atoms = parallel_map(static_cast<size_t>(paths), [&](size_t i) {
        InversePath path = sample_inverse_path(fam, base.z, n, seed, i);
        return Atom{path.point_at(path.zs.size() - 1, base.word), 1.0};
    });
    EmpiricalMeasure mu = EmpiricalMeasure::from_atoms(std::move(atoms));
    mu.stochastic = true;
    mu.sample_count = paths;
    mu.seed = seed;
    return mu;
}

std::vector<MultPoint> fix_points(const MapFamily& fam, const Word& cycle_word) {
    if (!cycle_word.prefix().empty())
        throw ConfigError("fix_points: word must be purely periodic");
    const std::vector<Letter>& c = cycle_word.cycle();
    RationalMap comp = compose_cycle(fam, std::span<const Letter>(c.data(), c.size()));
    return sphere_fixed_points(comp);
}

EmpiricalMeasure periodic_measure(const MapFamily& fam, int m, PeriodicMeasureInfo* info) {
    if (m < 1) throw ConfigError("periodic_measure: period must be >= 1");
    std::vector<Atom> atoms;
    long long count = 0;
    std::vector<Letter> cycle(static_cast<size_t>(m), 1);
    for (;;) {
        RationalMap comp = compose_cycle(fam, std::span<const Letter>(cycle.data(), cycle.size()));
        Word w = Word::pure_cycle(cycle);
        for (const MultPoint& fp : sphere_fixed_points(comp)) {
            atoms.push_back({PointX{w, fp.point}, static_cast<double>(fp.multiplicity)});
            count += fp.multiplicity;
        }
        int i = m - 1;
        while (i >= 0 && cycle[static_cast<size_t>(i)] == static_cast<Letter>(fam.size())) {
            cycle[static_cast<size_t>(i)] = 1;
            --i;
        }
        if (i < 0) break;
        ++cycle[static_cast<size_t>(i)];
    }
    if (info) {
        info->actual_count = count;
        info->printed_normalizer =
            static_cast<long long>(std::llround(std::pow(fam.total_degree(), m))) + fam.size();
        info->normalizers_differ = (info->printed_normalizer != count);
    }
    return EmpiricalMeasure::from_atoms(std::move(atoms), 1e-9);
}

EmpiricalMeasure orbital_measure(const MapFamily& fam, const PointX& p, int n) {
    if (n < 1) throw ConfigError("orbital_measure: length must be >= 1");
    std::vector<Atom> atoms;
    PointX cur = p;
    for (int k = 0; k < n; ++k) {
        atoms.push_back({cur, 1.0});
        if (k + 1 < n) cur = apply_T(fam, cur);
    }
    return EmpiricalMeasure::from_atoms(std::move(atoms));
}

EmpiricalMeasure periodic_orbital_measure(const MapFamily& fam, const PointX& p, int m,
                                          double tol) {
    if (m < 1) throw ConfigError("periodic_orbital_measure: period must be >= 1");
    PointX cur = p;
    std::vector<Atom> atoms;
    for (int k = 0; k < m; ++k) {
        atoms.push_back({cur, 1.0});
        cur = apply_T(fam, cur);
    }
    if (point_distance(cur, p) > tol)
        throw ConfigError("periodic_orbital_measure: point misses m-periodicity by " +
                          fmt_double(point_distance(cur, p)));
    return EmpiricalMeasure::from_atoms(std::move(atoms));
}

double integrate(const EmpiricalMeasure& mu, const TestFunction& h) {
    return integrate(mu, [&](const PointX& x) { return h(x); });
}

double discrepancy(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                   const Dictionary& dict) {
    if (dict.empty()) throw ConfigError("discrepancy: empty dictionary");
    double worst = 0.0;
    for (const TestFunction& h : dict)
        worst = std::max(worst, std::abs(integrate(mu, h) - integrate(nu, h)));
    return worst;
}

// ---------------------------------------------------------------------------

double g_apply(const MapFamily& fam, const std::function<double(const PointX&)>& h,
               const PointX& p) {
    double s = 0.0;
    for (Letter v = 1; v <= static_cast<Letter>(fam.size()); ++v) {
        Word w = prepend(v, p.word);
        for (const MultPoint& r : preimages(fam.map(v), p.z))
            s += r.multiplicity * h(PointX{w, r.point});
    }
    return s / fam.total_degree();
}

double g_apply(const MapFamily& fam, const TestFunction& h, const PointX& p) {
    return g_apply(fam, std::function<double(const PointX&)>(
                            [&](const PointX& x) { return h(x); }),
                   p);
}

GIterateReport g_iterate(const MapFamily& fam, const TestFunction& h,
                         const std::vector<PointX>& bases, int m, std::size_t budget,
                         int stochastic_paths, std::uint64_t seed) {
    if (m < 1) throw ConfigError("g_iterate: need m >= 1");
    if (bases.empty()) throw ConfigError("g_iterate: need at least one base point");
    GIterateReport report;
    report.depth = m;
    report.bases = bases;
    double leaves = std::pow(static_cast<double>(fam.total_degree()), m);
    report.stochastic = leaves > static_cast<double>(budget);

    // values[k][j] = depth-(k+1) average of h below base j. Exhaustive mode
    // accumulates every depth's sum in a single walk per base.
    report.values.assign(static_cast<size_t>(m), std::vector<double>(bases.size(), 0.0));
    for (size_t j = 0; j < bases.size(); ++j) {
        const PointX& base = bases[j];
        if (!report.stochastic) {
            std::vector<double> sums(static_cast<size_t>(m), 0.0);
            std::vector<double> mults{1.0};
            mults.reserve(static_cast<size_t>(m) + 1);
            auto enter = [&](int depth, Letter, const SpherePoint& z, int mult,
                             std::span<const Letter> path) {
                double wmult = mults.back() * mult;
                mults.push_back(wmult);
                PathWord pw(path, base.word);
                sums[static_cast<size_t>(depth - 1)] += wmult * h.eval(pw, z);
            };
            auto leave = [&]() { mults.pop_back(); };
            walk_preimages(fam, base.z, m, enter, leave);
            for (int k = 1; k <= m; ++k)
                report.values[static_cast<size_t>(k - 1)][j] =
                    sums[static_cast<size_t>(k - 1)] /
                    std::pow(static_cast<double>(fam.total_degree()), k);
        } else {
            // Monte Carlo along backward paths; every prefix of a path is a
            // uniform depth-k preimage draw, so one pass serves all depths.
            std::vector<double> acc(static_cast<size_t>(m), 0.0);
            std::vector<double> acc2(static_cast<size_t>(m), 0.0);
            for (int i = 0; i < stochastic_paths; ++i) {
                InversePath path = sample_inverse_path(fam, base.z, m, seed,
                                                       static_cast<std::uint64_t>(i));
                for (int k = 0; k < m; ++k) {
                    // PathWord reads prepend-ordered letters back to front,
                    // which matches InversePath storage directly.
                    PathWord pw(std::span<const Letter>(path.letters.data(),
                                                        static_cast<size_t>(k) + 1),
                                base.word);
                    double hv = h.eval(pw, path.zs[static_cast<size_t>(k)]);
                    acc[static_cast<size_t>(k)] += hv;
                    acc2[static_cast<size_t>(k)] += hv * hv;
                }
            }
            for (int k = 0; k < m; ++k) {
                double mean = acc[static_cast<size_t>(k)] / stochastic_paths;
                report.values[static_cast<size_t>(k)][j] = mean;
                double var = acc2[static_cast<size_t>(k)] / stochastic_paths - mean * mean;
                report.standard_error = std::max(
                    report.standard_error, std::sqrt(std::max(0.0, var) / stochastic_paths));
            }
        }
    }

    report.spreads.resize(static_cast<size_t>(m));
    report.successive_diffs.assign(static_cast<size_t>(m), 0.0);
    for (int k = 0; k < m; ++k) {
        auto& row = report.values[static_cast<size_t>(k)];
        auto [lo, hi] = std::minmax_element(row.begin(), row.end());
        report.spreads[static_cast<size_t>(k)] = *hi - *lo;
        if (k > 0)
            for (size_t j = 0; j < row.size(); ++j)
                report.successive_diffs[static_cast<size_t>(k)] =
                    std::max(report.successive_diffs[static_cast<size_t>(k)],
                             std::abs(row[j] - report.values[static_cast<size_t>(k - 1)][j]));
    }
    return report;
}

}  // namespace skewdyn
