#include "necklace/builtins.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include "necklace/errors.hpp"
#include "necklace/util.hpp"

namespace necklace {

namespace {

using cx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// ex21: 24 similitudes z -> s_j z + a_j on the complex plane. The ratios are
// fixed (1/3 at j in {1,7,13,19}, else 1/15); the translations a_j are pinned
// by 24 linear contact constraints, one per cyclically adjacent pair.
// ---------------------------------------------------------------------------

double ex21_ratio(int j) {
    return (j == 1 || j == 7 || j == 13 || j == 19) ? 1.0 / 3.0 : 1.0 / 15.0;
}

// One linear equation sum coeff_j a_j = rhs.
struct CxEquation {
    std::vector<std::pair<int, cx>> terms;  // (1-based index, coefficient)
    cx rhs;
};

std::vector<CxEquation> ex21_equations() {
    auto s = [](int j) { return cx(ex21_ratio(j), 0.0); };
    const cx i(0.0, 1.0), one(1.0, 0.0), onei = one + i;
    std::vector<CxEquation> eqs;
    auto add = [&](std::vector<std::pair<int, cx>> t, cx rhs) {
        eqs.push_back({std::move(t), rhs});
    };
    // f_24(1) = f_1(f_13(i))
    add({{24, 1}, {13, -s(1)}, {1, -1}}, s(1) * s(13) * i - s(24) * one);
    // f_1(f_13(1)) = f_2(i)
    add({{13, s(1)}, {1, 1}, {2, -1}}, s(2) * i - s(1) * s(13) * one);
    // f_6(1+i) = f_7(f_19(0))
    add({{6, 1}, {19, -s(7)}, {7, -1}}, -s(6) * onei);
    // f_7(f_19(1+i)) = f_8(0)
    add({{19, s(7)}, {7, 1}, {8, -1}}, -s(7) * s(19) * onei);
    // f_12(i) = f_13(f_1(1))
    add({{12, 1}, {1, -s(13)}, {13, -1}}, s(13) * s(1) * one - s(12) * i);
    // f_13(f_1(i)) = f_14(1)
    add({{1, s(13)}, {13, 1}, {14, -1}}, s(14) * one - s(13) * s(1) * i);
    // f_18(0) = f_19(f_7(1+i))
    add({{18, 1}, {7, -s(19)}, {19, -1}}, s(19) * s(7) * onei);
    // f_19(f_7(0)) = f_20(1+i)
    add({{7, s(19)}, {19, 1}, {20, -1}}, s(20) * onei);
    for (int j : {2, 4, 9, 11})  // f_j(1+i) = f_{j+1}(0)
        add({{j, 1}, {j + 1, -1}}, -s(j) * onei);
    for (int j : {3, 5, 20, 22})  // f_j(1) = f_{j+1}(i)
        add({{j, 1}, {j + 1, -1}}, s(j + 1) * i - s(j) * one);
    for (int j : {8, 10, 15, 17})  // f_j(i) = f_{j+1}(1)
        add({{j, 1}, {j + 1, -1}}, s(j + 1) * one - s(j) * i);
    for (int j : {14, 16, 21, 23})  // f_j(0) = f_{j+1}(1+i)
        add({{j, 1}, {j + 1, -1}}, s(j + 1) * onei);
    return eqs;
}

// Gaussian elimination with partial pivoting on a square complex system.
std::vector<cx> solve_complex(std::vector<std::vector<cx>> A, std::vector<cx> b) {
    const std::size_t n = A[0].size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) < 1e-14)
            throw InvalidSystemError("contact constraint system is singular");
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            cx f = A[r][col] / A[col][col];
            if (f == cx(0.0, 0.0)) continue;
            for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<cx> x(n);
    for (std::size_t r = n; r-- > 0;) {
        cx acc = b[r];
        for (std::size_t c = r + 1; c < n; ++c) acc -= A[r][c] * x[c];
        x[r] = acc / A[r][r];
    }
    return x;
}

struct Ex21Data {
    std::vector<cx> a;
    double residual = 0.0;
};

const Ex21Data& ex21_data() {
    static Ex21Data data = [] {
        Ex21Data d;
        auto eqs = ex21_equations();
        const std::size_t n_constraints = eqs.size();
        // The contact constraints are consistent but leave a one-parameter
        // family; pin it by placing the fixed point of f_1 o f_13 at
        // (1/4, 1/4), which anchors the loop in the unit square.
        {
            CxEquation anchor;
            double s1 = ex21_ratio(1), s13 = ex21_ratio(13);
            anchor.terms = {{1, cx(1, 0)}, {13, cx(s1, 0)}};
            anchor.rhs = (1.0 - s1 * s13) * cx(0.25, 0.25);
            eqs.push_back(anchor);
        }
        const std::size_t n = 24, m = eqs.size();
        std::vector<std::vector<cx>> A(m, std::vector<cx>(n, cx(0, 0)));
        std::vector<cx> b(m);
        for (std::size_t r = 0; r < m; ++r) {
            for (auto& [idx, coeff] : eqs[r].terms) A[r][idx - 1] += coeff;
            b[r] = eqs[r].rhs;
        }
        // Least squares via the normal equations; the system is consistent,
        // so the residual check below still demands near-exactness.
        std::vector<std::vector<cx>> N(n, std::vector<cx>(n, cx(0, 0)));
        std::vector<cx> rhs(n, cx(0, 0));
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t i = 0; i < n; ++i) {
                if (A[r][i] == cx(0, 0)) continue;
                cx ci = std::conj(A[r][i]);
                for (std::size_t j = 0; j < n; ++j) N[i][j] += ci * A[r][j];
                rhs[i] += ci * b[r];
            }
        d.a = solve_complex(N, rhs);
        for (std::size_t r = 0; r < n_constraints; ++r) {
            cx lhs(0, 0);
            for (auto& [idx, coeff] : eqs[r].terms) lhs += coeff * d.a[idx - 1];
            d.residual = std::max(d.residual, std::abs(lhs - eqs[r].rhs));
        }
        if (d.residual > 1e-12)
            throw InvalidSystemError("ex21 constraint residual " + fmt12(d.residual) +
                                     " exceeds 1e-12");
        return d;
    }();
    return data;
}

std::vector<AffineMap> ex21_maps() {
    const auto& d = ex21_data();
    std::vector<AffineMap> maps;
    for (int j = 1; j <= 24; ++j)
        maps.push_back({Mat2::scale(ex21_ratio(j)),
                        Vec2{d.a[j - 1].real(), d.a[j - 1].imag()}});
    return maps;
}

// ---------------------------------------------------------------------------

std::vector<AffineMap> fig1a_maps() {
    Vec2 v1{0, 0}, v2{1, 0}, v3{0.5, std::sqrt(3.0) / 2.0};
    std::vector<AffineMap> maps;
    for (Vec2 v : {v1, v2, v3}) maps.push_back({Mat2::scale(0.5), v * 0.5});
    return maps;
}

std::vector<AffineMap> fig1b_maps() {
    std::vector<AffineMap> maps;
    for (int k = 1; k <= 6; ++k) {
        double th = k * kPi / 3.0;
        Vec2 v{std::cos(th), std::sin(th)};
        maps.push_back({Mat2::scale(1.0 / 3.0), v * (2.0 / 3.0)});
    }
    return maps;
}

// Three-map ring: one reflecting half-turn piece anchored at 0, a middle
// third, and a rotated piece anchored at 1. The contact identities close
// exactly: z1 = f1(z3) = 1/3, z2 = f3(z3) = 2/3, z3 = f1(1) = f3(1).
std::vector<AffineMap> ex23L_maps() {
    double r = 1.0 / std::sqrt(3.0);
    std::vector<AffineMap> maps;
    maps.push_back(AffineMap::similitude(r, kPi / 6.0, {0, 0}, /*reflect=*/true));
    maps.push_back({Mat2::scale(1.0 / 3.0), {1.0 / 3.0, 0}});
    maps.push_back(AffineMap::similitude(r, 5.0 * kPi / 6.0, {1.0, 0}));
    return maps;
}

std::vector<AffineMap> ex23R_maps(double alpha) {
    double limit = std::sqrt(3.0) / 6.0;
    if (!(alpha > 0.0) || !(alpha < limit))
        throw InputError("ex23R parameter must lie in (0, " + fmt12(limit) + "), got " +
                         fmt12(alpha));
    Mat2 g1{0.5, 0, 0, alpha / 2.0};
    Mat2 rot23 = Mat2::rotation(2.0 * kPi / 3.0) * g1;
    Mat2 refl3 = Mat2::rotation(kPi / 3.0) * Mat2::conjugation() * g1;
    double s3 = std::sqrt(3.0);
    std::vector<AffineMap> maps;
    maps.push_back({g1, {0, 0}});
    maps.push_back({g1, {0.5, 0}});
    maps.push_back({rot23, {1.0, 0}});
    maps.push_back({rot23, {0.75, s3 / 4.0}});
    maps.push_back({refl3, {0.25, s3 / 4.0}});
    maps.push_back({refl3, {0, 0}});
    return maps;
}

}  // namespace

std::vector<std::string> builtin_names() {
    return {"fig1a", "fig1b", "ex21", "ex23L", "ex23R"};
}

std::vector<Point> ex21_translations() {
    std::vector<Point> out;
    for (const auto& a : ex21_data().a) out.push_back({a.real(), a.imag()});
    return out;
}

double ex21_constraint_residual() { return ex21_data().residual; }

NecklaceSystem builtin(const std::string& name) {
    static std::mutex mu;
    static std::map<std::string, NecklaceSystem> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(name); it != cache.end()) return it->second;
    }

    std::string base = name;
    double alpha = 0.2;
    auto paren = name.find('(');
    if (paren != std::string::npos) {
        if (name.back() != ')') throw InputError("malformed builtin name '" + name + "'");
        base = name.substr(0, paren);
        std::string arg = name.substr(paren + 1, name.size() - paren - 2);
        try {
            alpha = std::stod(arg);
        } catch (...) {
            throw InputError("bad parameter '" + arg + "' in '" + name + "'");
        }
    }

    std::vector<AffineMap> maps;
    if (base == "fig1a")
        maps = fig1a_maps();
    else if (base == "fig1b")
        maps = fig1b_maps();
    else if (base == "ex21")
        maps = ex21_maps();
    else if (base == "ex23L")
        maps = ex23L_maps();
    else if (base == "ex23R")
        maps = ex23R_maps(alpha);
    else
        throw InputError("unknown builtin '" + name + "' (have fig1a, fig1b, ex21, ex23L, ex23R)");

    NecklaceSystem sys = make_system(std::move(maps));
    sys.name = name;
    {
        std::lock_guard<std::mutex> lock(mu);
        cache.emplace(name, sys);
    }
    return sys;
}

}  // namespace necklace
