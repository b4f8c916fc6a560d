#include "epscope/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "epscope/assign.hpp"
#include "epscope/errors.hpp"

namespace epscope {

namespace {

constexpr int kLoopBisectionCap = 14;

Cx herm_dot(const std::vector<Cx>& a, const std::vector<Cx>& b) {
    Cx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

Cx bilinear_dot(const std::vector<Cx>& a, const std::vector<Cx>& b) {
    Cx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double herm_norm(const std::vector<Cx>& a) { return std::sqrt(std::abs(herm_dot(a, a).real())); }

// Scale to v^T v = 1 (unconjugated). The remaining sign freedom is fixed by
// continuity against the previous step. Near an EP the eigenvector becomes
// self-orthogonal and this normalization blows up, which the caller treats
// as a loop-through-coalescence condition.
void bilinear_normalize(std::vector<Cx>& v) {
    const Cx q = bilinear_dot(v, v);
    const double nh = herm_norm(v);
    if (std::abs(q) < 1e-12 * nh * nh)
        throw GaugeBreakdown("bilinear normalization breaks down (self-orthogonal vector)");
    const Cx root = std::sqrt(q);
    for (auto& x : v) x /= root;
}

double min_pairwise_gap(const std::vector<Cx>& e) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j)
            g = std::min(g, std::abs(e[i] - e[j]));
    return g;
}

} // namespace

void LoopSpec::validate() const {
    if (!is_finite(center) || !is_finite(radius))
        throw InvalidInput("LoopSpec: center and radius must be finite");
    if (!(radius > 0.0)) throw InvalidInput("LoopSpec: radius must be > 0");
    if (steps < 64) throw InvalidInput("LoopSpec: need at least 64 steps per loop");
    if (loops < 1) throw InvalidInput("LoopSpec: need at least one loop");
    if (orientation != 1 && orientation != -1)
        throw InvalidInput("LoopSpec: orientation must be +1 or -1");
}

std::vector<Cx> gauge_align(const std::vector<Cx>& prev, const std::vector<Cx>& next_raw) {
    if (prev.size() != next_raw.size())
        throw InvalidInput("gauge_align: dimension mismatch");
    const Cx ov = herm_dot(prev, next_raw);
    const double nn = herm_norm(next_raw);
    if (!(nn > 0.0)) throw InvalidInput("gauge_align: zero vector");
    if (std::abs(ov) < 1e-12 * herm_norm(prev) * nn)
        throw GaugeBreakdown("gauge_align: orthogonal inputs");
    const Cx factor = std::conj(ov) / std::abs(ov) / nn;
    std::vector<Cx> out(next_raw.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = next_raw[i] * factor;
    return out;
}

MonodromyResult encircle(const MatrixFamily& f, const LoopSpec& spec,
                         const SolveOptions& opts) {
    spec.validate();
    f.validate();
    const std::size_t n = f.dim();

    auto lambda_at = [&](double t) {
        const double ang = 2.0 * std::numbers::pi * spec.orientation * t;
        return spec.center + spec.radius * std::polar(1.0, ang);
    };

    auto eigensystem = [&](double t) {
        const ComplexMatrix h = build_general(f, lambda_at(t));
        Spectrum s = eigenvalues_general(h, opts);
        if (min_pairwise_gap(s.eigenvalues) < 1e-8 * (1.0 + s.max_abs_eigenvalue()))
            throw LoopThroughEP(min_pairwise_gap(s.eigenvalues), spec.radius * 0.5);
        std::vector<std::vector<Cx>> vs(n);
        for (std::size_t k = 0; k < n; ++k) {
            vs[k] = eigenvector_general(h, s.eigenvalues[k], opts).v;
            bilinear_normalize(vs[k]);
        }
        return std::make_pair(std::move(s.eigenvalues), std::move(vs));
    };

    auto [e0, v0] = eigensystem(0.0);
    {   // deterministic start labels: sort by (Re, Im)
        std::vector<std::size_t> idx(n);
        for (std::size_t k = 0; k < n; ++k) idx[k] = k;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            if (e0[a].real() != e0[b].real()) return e0[a].real() < e0[b].real();
            return e0[a].imag() < e0[b].imag();
        });
        std::vector<Cx> e(n);
        std::vector<std::vector<Cx>> v(n);
        for (std::size_t k = 0; k < n; ++k) { e[k] = e0[idx[k]]; v[k] = v0[idx[k]]; }
        e0 = std::move(e);
        v0 = std::move(v);
    }

    std::vector<Cx> ecur = e0;
    std::vector<std::vector<Cx>> vcur = v0;
    double drift = 0.0;

    const double t_end = static_cast<double>(spec.loops);
    const double dt0 = 1.0 / static_cast<double>(spec.steps);

    struct Seg { double a, b; int depth; };
    std::vector<Seg> stack;
    const auto total = static_cast<std::size_t>(spec.steps * spec.loops);
    for (std::size_t i = total; i >= 1; --i) {
        const double b = (i == total) ? t_end : dt0 * static_cast<double>(i);
        stack.push_back({dt0 * static_cast<double>(i - 1), b, 0});
    }

    while (!stack.empty()) {
        const Seg seg = stack.back();
        stack.pop_back();
        auto [enext, vnext] = eigensystem(seg.b);
        const Assignment asg = match_eigenvalues(ecur, enext);
        const double gap_prev = min_pairwise_gap(ecur);
        if (asg.total_cost > gap_prev / 2.0) {
            if (seg.depth >= kLoopBisectionCap)
                throw LoopThroughEP(gap_prev, spec.radius * 0.5);
            const double m = 0.5 * (seg.a + seg.b);
            stack.push_back({m, seg.b, seg.depth + 1});
            stack.push_back({seg.a, m, seg.depth + 1});
            continue;
        }

        std::vector<Cx> e(n);
        std::vector<std::vector<Cx>> v(n);
        bool weak_overlap = false;
        double step_deficit = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            e[k] = enext[asg.map[k]];
            v[k] = vnext[asg.map[k]];
            const Cx ov = herm_dot(vcur[k], v[k]);
            const double denom = herm_norm(vcur[k]) * herm_norm(v[k]);
            const double cosang = std::abs(ov) / denom;
            if (cosang < 0.99) weak_overlap = true;
            step_deficit = std::max(step_deficit, 1.0 - cosang);
            if (ov.real() < 0.0)
                for (auto& x : v[k]) x = -x;
        }
        if (weak_overlap && seg.depth < kLoopBisectionCap) {
            const double m = 0.5 * (seg.a + seg.b);
            stack.push_back({m, seg.b, seg.depth + 1});
            stack.push_back({seg.a, m, seg.depth + 1});
            continue;
        }
        drift += step_deficit;
        ecur = std::move(e);
        vcur = std::move(v);
    }

    MonodromyResult out;
    const Assignment close = match_eigenvalues(ecur, e0);
    out.permutation.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.permutation[k] = close.map[k];
    out.phases.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        out.phases[k] = bilinear_dot(v0[out.permutation[k]], vcur[k]);
    out.discretization_error = drift;
    return out;
}

bool sheet_swap_check(const MatrixFamily& f, const EPLocation& ep,
                      const SolveOptions& opts) {
    LoopSpec spec;
    spec.center = ep.lambda_c;
    spec.radius = 0.1 * (1.0 + std::abs(ep.lambda_c));
    spec.steps = 1024;
    spec.loops = 1;

    for (int attempt = 0; attempt < 5; ++attempt) {
        try {
            const MonodromyResult r = encircle(f, spec, opts);
            // labels at the loop start sorted by (Re, Im); the coalescing pair
            // are the two labels whose start eigenvalues sit nearest the EP
            // energy.
            const Spectrum s =
                eigenvalues_general(build_general(f, spec.center + spec.radius), opts);
            std::vector<Cx> e = s.eigenvalues;
            std::sort(e.begin(), e.end(), [](const Cx& a, const Cx& b) {
                if (a.real() != b.real()) return a.real() < b.real();
                return a.imag() < b.imag();
            });
            std::vector<std::size_t> order(e.size());
            for (std::size_t k = 0; k < e.size(); ++k) order[k] = k;
            std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                return std::abs(e[x] - ep.energy) < std::abs(e[y] - ep.energy);
            });
            const std::size_t i = std::min(order[0], order[1]);
            const std::size_t j = std::max(order[0], order[1]);
            for (std::size_t k = 0; k < r.permutation.size(); ++k) {
                const std::size_t expect = (k == i) ? j : (k == j) ? i : k;
                if (r.permutation[k] != expect) return false;
            }
            return true;
        } catch (const LoopThroughEP&) {
            spec.radius *= 0.5; // too close to another coalescence; tighten
        }
    }
    throw SolverFailure("sheet_swap_check: no usable loop radius found");
}

} // namespace epscope
