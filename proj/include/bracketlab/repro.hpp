// Registered reproduction experiments behind the `repro` CLI subcommand.
//
//   uk-floor         U^k[N] norms of the nested bracket phases
//                    phi_{k-1}(n) = a_{k-1} n {a_{k-2} n { ... {a_1 n} ... }}
//                    for k = 3, 4, 5; each cell is compared against a
//                    checked-in pilot floor and the grid must not decay with
//                    N.  k <= 4 is evaluated exactly (recursive transform
//                    method); k = 5 is Monte Carlo and compared through its
//                    99% lower confidence bound.
//   recurrence-scan  density of {n : {nu(n)} near 0}; includes the
//                    constant-offset counterexample {1/2 + cn}, which is
//                    expected to fail and is flagged as such.
//   heisenberg       the closed-form fundamental-domain reduction of the
//                    [[1, -an, 0],[0, 1, bn],[0, 0, 1]] orbit, float and
//                    exact.
//   appendixC        symbolic inverse, triviality depth and layer membership
//                    of polynomial mappings.
//
// Floors live in a versioned pilot file (data/pilot_floors.json); they are
// regenerated only by an explicit recalibration run, which records the
// measured pilot values alongside the floors.

#pragma once

#include <chrono>
#include <functional>

#include "bracketlab/discrepancy.hpp"
#include "bracketlab/parse.hpp"
#include "bracketlab/polymap.hpp"
#include "bracketlab/recurrence.hpp"
#include "bracketlab/report.hpp"

namespace bracketlab {

struct ReproCell {
    std::string label;
    double value = 0.0;
    double floor = 0.0;
    bool expected_fail = false;
    bool pass = false;
    std::string method;
    std::optional<double> mc_stderr;
    std::optional<double> mc_lower99;
};

struct ReproReport {
    std::string experiment;
    std::uint64_t seed = 0;
    std::vector<ReproCell> cells;
    bool pass = false;
    double wall_ms = 0.0;
};

inline Json to_json(const ReproReport& rep) {
    Json cells = Json::array();
    for (const auto& c : rep.cells) {
        Json j{{"label", c.label},   {"value", c.value}, {"floor", c.floor},
               {"pass", c.pass},     {"method", c.method}};
        if (c.expected_fail) j["expected_fail"] = true;
        if (c.mc_stderr) j["mc_stderr"] = *c.mc_stderr;
        if (c.mc_lower99) j["mc_lower99"] = *c.mc_lower99;
        cells.push_back(std::move(j));
    }
    return Json{{"schema", kSchemaVersion},
                {"experiment", rep.experiment},
                {"seed", rep.seed},
                {"cells", std::move(cells)},
                {"pass", rep.pass},
                {"wall_ms", rep.wall_ms}};
}

namespace repro {

inline constexpr std::uint64_t kPilotSeed = 20240801;

// The alpha assignments used across the nested-phase grid.
inline Binding<double> nested_phase_binding() {
    return Binding<double>{{1, std::numbers::sqrt2},
                           {2, std::numbers::sqrt3},
                           {3, 2.23606797749978969640917366873},
                           {4, std::numbers::phi}};
}

// phi_{k-1}(n) = a_{k-1} n {a_{k-2} n { ... {a_1 n} ... }} as DSL text.
inline std::string nested_phase_text(int k) {
    if (k < 2) throw Error("nested phase needs k >= 2");
    if (k == 2) return "a1*n";
    std::string inner = "{a1*n}";
    for (int i = 2; i <= k - 2; ++i)
        inner = "{a" + std::to_string(i) + "*n*" + inner + "}";
    return "a" + std::to_string(k - 1) + "*n*" + inner;
}

inline ComplexSeq nested_phase_seq(int k, long long N) {
    auto phi = realize(parse_form(nested_phase_text(k)), nested_phase_binding());
    return phase_seq(seq_from_poly(phi, N));
}

struct UkGridPoint {
    int k;
    long long N;
    Method method;
};

inline std::vector<UkGridPoint> uk_grid(std::optional<int> k_filter) {
    std::vector<UkGridPoint> grid{
        {3, 64, Method::Recursive},  {3, 128, Method::Recursive}, {3, 256, Method::Recursive},
        {4, 32, Method::Recursive},  {4, 64, Method::Recursive},
        {5, 64, Method::MonteCarlo},
    };
    if (k_filter) {
        std::erase_if(grid, [&](const UkGridPoint& g) { return g.k != *k_filter; });
    }
    return grid;
}

inline GowersReport uk_cell(const UkGridPoint& g, std::uint64_t seed, long long mc_samples) {
    McOptions mc;
    mc.samples = mc_samples;
    mc.seed = seed;
    return gowers_norm_interval(nested_phase_seq(g.k, g.N), g.k, std::nullopt, g.method, mc);
}

// Measures the pilot grid and writes the floors file.  Floors are 0.75 of
// the measured value (k = 5 uses the Monte Carlo lower confidence bound), a
// margin for cross-platform rounding differences.
inline Json recalibrate_uk_floors(std::uint64_t seed, long long mc_samples,
                                  std::optional<int> k_filter = std::nullopt) {
    Json pilot, floors;
    for (const auto& g : uk_grid(k_filter)) {
        auto rep = uk_cell(g, seed, mc_samples);
        double measured = g.method == Method::MonteCarlo ? *rep.mc_lower99 : rep.norm;
        pilot[std::to_string(g.k)][std::to_string(g.N)] = measured;
        floors[std::to_string(g.k)][std::to_string(g.N)] = 0.75 * measured;
    }
    return Json{
        {"schema", kSchemaVersion},
        {"provenance",
         "pilot grid measured with fixed seeds; floor = 0.75 * pilot value "
         "(k = 5 compares 99% lower confidence bounds); regenerate with "
         "'bracketlab repro --experiment uk-floor --recalibrate'"},
        {"seed", seed},
        {"mc_samples", mc_samples},
        {"uk_floor", Json{{"pilot", pilot}, {"floor", floors}}},
        {"recurrence_scan", Json{{"control_floor", 0.15}}},
    };
}

inline ReproReport run_uk_floor(const Json& floors_doc, std::optional<int> k_filter,
                                std::uint64_t seed, long long mc_samples) {
    auto t0 = std::chrono::steady_clock::now();
    ReproReport rep;
    rep.experiment = "uk-floor";
    rep.seed = seed;
    const Json& floors = floors_doc.at("uk_floor").at("floor");

    std::map<int, std::vector<std::pair<long long, double>>> by_k;
    for (const auto& g : uk_grid(k_filter)) {
        auto cell = uk_cell(g, seed, mc_samples);
        ReproCell out;
        out.label = "k=" + std::to_string(g.k) + " N=" + std::to_string(g.N);
        out.method = method_name(cell.method);
        out.value = cell.norm;
        out.mc_stderr = cell.mc_stderr;
        out.mc_lower99 = cell.mc_lower99;
        out.floor = floors.at(std::to_string(g.k)).at(std::to_string(g.N)).get<double>();
        double compare = g.method == Method::MonteCarlo ? *cell.mc_lower99 : cell.norm;
        out.pass = compare >= out.floor;
        by_k[g.k].emplace_back(g.N, cell.norm);
        rep.cells.push_back(std::move(out));
    }

    rep.pass = !rep.cells.empty();
    for (const auto& c : rep.cells) rep.pass = rep.pass && c.pass;
    // no decay across the N grid: largest-N value >= 0.8 * smallest-N value
    for (auto& [k, cells] : by_k) {
        if (cells.size() < 2) continue;
        std::sort(cells.begin(), cells.end());
        bool ok = cells.back().second >= 0.8 * cells.front().second;
        ReproCell decay;
        decay.label = "k=" + std::to_string(k) + " no-decay";
        decay.value = cells.back().second / cells.front().second;
        decay.floor = 0.8;
        decay.method = "ratio";
        decay.pass = ok;
        rep.pass = rep.pass && ok;
        rep.cells.push_back(std::move(decay));
    }
    rep.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0).count();
    return rep;
}

inline ReproReport run_recurrence_scan(const Json& floors_doc) {
    auto t0 = std::chrono::steady_clock::now();
    ReproReport rep;
    rep.experiment = "recurrence-scan";
    double control_floor = floors_doc.at("recurrence_scan").at("control_floor").get<double>();

    // control: {sqrt2 n} hits I_{1/10} on a positive fraction of [N]
    auto nu = realize(parse_form("a1*n"), Binding<double>{{1, std::numbers::sqrt2}});
    for (long long N : {1000LL, 10000LL}) {
        RecurrenceSetSpec<double> spec;
        spec.N = N;
        spec.constraints.emplace_back(nu, IntervalSpec::centered(Rational(1, 10)));
        ReproCell c;
        c.label = "density {sqrt2 n} in I_0.1, N=" + std::to_string(N);
        c.value = spec.density();
        c.floor = control_floor;
        c.method = "exact-scan";
        c.pass = c.value >= c.floor;
        rep.cells.push_back(std::move(c));
    }

    // counterexample: the non-constant-free {1/2 + cn} with c = 1e-6 has
    // empty recurrence set at N = 1000
    auto off = realize(parse_form("1/2 + 1/1000000*n"), Binding<Rational>{});
    RecurrenceSetSpec<Rational> bad;
    bad.N = 1000;
    bad.constraints.emplace_back(off, IntervalSpec::centered(Rational(1, 10)));
    ReproCell c;
    c.label = "density {1/2 + n/10^6} in I_0.1, N=1000";
    c.value = bad.density();
    c.floor = control_floor;
    c.method = "exact-scan";
    c.expected_fail = true;
    c.pass = c.value == 0.0;  // the offset defeats recurrence, by design
    rep.cells.push_back(std::move(c));

    rep.pass = true;
    for (const auto& cc : rep.cells) rep.pass = rep.pass && cc.pass;
    rep.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0).count();
    return rep;
}

inline ReproReport run_heisenberg() {
    auto t0 = std::chrono::steady_clock::now();
    ReproReport rep;
    rep.experiment = "heisenberg";

    auto fl = heisenberg_orbit_check<double>(std::numbers::sqrt2, std::numbers::sqrt3, 1000);
    ReproCell a;
    a.label = "float alpha=sqrt2 beta=sqrt3 n<=1000";
    a.value = fl.max_error;
    a.floor = 1e-9;
    a.method = "reduce";
    a.pass = fl.ok;
    rep.cells.push_back(std::move(a));

    auto ex = heisenberg_orbit_check<Rational>(Rational(1, 2), Rational(1, 3), 1000);
    ReproCell b;
    b.label = "exact alpha=1/2 beta=1/3 n<=1000";
    b.value = ex.max_error;
    b.floor = 0.0;
    b.method = "reduce-exact";
    b.pass = ex.ok;
    rep.cells.push_back(std::move(b));

    rep.pass = rep.cells[0].pass && rep.cells[1].pass;
    rep.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0).count();
    return rep;
}

inline ReproReport run_appendix_c(std::uint64_t seed) {
    auto t0 = std::chrono::steady_clock::now();
    ReproReport rep;
    rep.experiment = "appendixC";
    rep.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dc(-6, 6);

    bool inverses_ok = true, depth_ok = true;
    for (int t = 0; t < 20; ++t) {
        PolynomialMapping<Rational> m(3, 1);
        for (int i = 0; i <= 3; ++i)
            for (int j = i + 1; j <= 3; ++j) {
                std::vector<Rational> c;
                for (int d = 0; d <= 3; ++d) c.emplace_back(dc(rng));
                m.at(0, i, j) = Poly1<Rational>(std::move(c));
            }
        auto inv = poly_map_inverse(m);
        if (!poly_map_product(m, inv).is_identity()) inverses_ok = false;
        int d1 = triviality_depth(m, 17);
        int d2 = triviality_depth(m, 9001);
        if (d1 != d2 || d1 > depth_bound(3, 3)) depth_ok = false;
    }
    ReproCell inv_cell;
    inv_cell.label = "symbolic inverse identity, 20 random degree<=3 mappings in T3";
    inv_cell.value = inverses_ok ? 1.0 : 0.0;
    inv_cell.floor = 1.0;
    inv_cell.method = "exact-symbolic";
    inv_cell.pass = inverses_ok;
    rep.cells.push_back(std::move(inv_cell));

    ReproCell depth_cell;
    depth_cell.label = "triviality depth finite and order-stable";
    depth_cell.value = depth_ok ? 1.0 : 0.0;
    depth_cell.floor = 1.0;
    depth_cell.method = "exact-symbolic";
    depth_cell.pass = depth_ok;
    rep.cells.push_back(std::move(depth_cell));

    // layer membership of the quadratic Heisenberg sequence vs the abelian
    // quadratic mapping
    PolynomialMapping<Rational> heis(2, 1);
    heis.at(0, 0, 1) = Poly1<Rational>({Rational(0), Rational(2)});
    heis.at(0, 1, 2) = Poly1<Rational>({Rational(0), Rational(3)});
    heis.at(0, 0, 2) = Poly1<Rational>({Rational(0), Rational(0), Rational(5)});
    PolynomialMapping<Rational> quad(1, 1);
    quad.at(0, 0, 1) = Poly1<Rational>({Rational(0), Rational(0), Rational(7)});
    bool layering = is_poly_sequence(heis, Filtration::lower_central(2, 1)) &&
                    !is_poly_sequence(quad, Filtration::lower_central(1, 1)) &&
                    is_poly_sequence(quad, finer_filtration(1, 1, 2));
    ReproCell layer_cell;
    layer_cell.label = "derivative layer membership (lower central vs refined)";
    layer_cell.value = layering ? 1.0 : 0.0;
    layer_cell.floor = 1.0;
    layer_cell.method = "exact-symbolic";
    layer_cell.pass = layering;
    rep.cells.push_back(std::move(layer_cell));

    rep.pass = inverses_ok && depth_ok && layering;
    rep.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace repro
}  // namespace bracketlab
