#include "epscope/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "epscope/assign.hpp"
#include "epscope/errors.hpp"
#include "epscope/monodromy.hpp"

namespace epscope {

namespace {

constexpr int kSweepBisectionCap = 12;

std::vector<Cx> sorted_by_re_im(std::vector<Cx> e) {
    std::sort(e.begin(), e.end(), [](const Cx& a, const Cx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return e;
}

double min_pairwise_gap(const std::vector<Cx>& e) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j)
            g = std::min(g, std::abs(e[i] - e[j]));
    return g;
}

struct SweepState {
    std::vector<double> lambdas;
    std::vector<std::vector<Cx>> energies;
    std::vector<std::vector<std::vector<Cx>>> vectors;
    std::vector<double> costs;
    std::vector<std::size_t> degenerate;
};

std::vector<std::vector<Cx>> eigenvectors_for(const ComplexMatrix& h,
                                              const std::vector<Cx>& labeled,
                                              const SolveOptions& opts) {
    std::vector<std::vector<Cx>> vs;
    vs.reserve(labeled.size());
    for (const Cx& e : labeled) vs.push_back(eigenvector_general(h, e, opts).v);
    return vs;
}

void canonical_phase(std::vector<Cx>& v) {
    std::size_t jmax = 0;
    for (std::size_t j = 1; j < v.size(); ++j)
        if (std::abs(v[j]) > std::abs(v[jmax])) jmax = j;
    const Cx piv = v[jmax];
    if (std::abs(piv) == 0.0) return;
    const Cx rot = std::abs(piv) / piv;
    for (auto& x : v) x *= rot;
}

} // namespace

const char* to_string(CrossingKind k) {
    switch (k) {
        case CrossingKind::RE_AVOID_IM_CROSS: return "RE_AVOID_IM_CROSS";
        case CrossingKind::RE_CROSS_IM_AVOID: return "RE_CROSS_IM_AVOID";
        case CrossingKind::BOTH_CROSS_AT_EP: return "BOTH_CROSS_AT_EP";
    }
    return "?";
}

TrajectorySet sweep_real(const MatrixFamily& f, double lambda_min, double lambda_max,
                         std::size_t steps, bool with_vectors, const SolveOptions& opts) {
    f.validate();
    if (!(lambda_min < lambda_max))
        throw InvalidInput("sweep_real: need lambda_min < lambda_max");
    if (steps < 2) throw InvalidInput("sweep_real: need steps >= 2");

    SweepState st;
    const std::vector<Cx> first =
        sorted_by_re_im(eigenvalues_general(build_general(f, lambda_min), opts).eigenvalues);
    st.lambdas.push_back(lambda_min);
    st.energies.push_back(first);
    if (with_vectors) {
        auto vs = eigenvectors_for(build_general(f, lambda_min), first, opts);
        for (auto& v : vs) canonical_phase(v);
        st.vectors.push_back(std::move(vs));
    }

    // work stack of [a, b] segments, leftmost on top
    struct Seg { double a, b; int depth; };
    std::vector<Seg> stack;
    const double h = (lambda_max - lambda_min) / static_cast<double>(steps - 1);
    for (std::size_t i = steps - 1; i >= 1; --i)
        stack.push_back({lambda_min + h * static_cast<double>(i - 1),
                         lambda_min + h * static_cast<double>(i), 0});

    while (!stack.empty()) {
        const Seg seg = stack.back();
        stack.pop_back();
        const std::vector<Cx>& prev = st.energies.back();
        const double gap_prev = min_pairwise_gap(prev);

        const ComplexMatrix hb = build_general(f, seg.b);
        const Spectrum sb = eigenvalues_general(hb, opts);
        const Assignment asg = match_eigenvalues(prev, sb.eigenvalues);

        const bool too_fast = asg.total_cost > gap_prev / 2.0;
        if (too_fast && seg.depth < kSweepBisectionCap) {
            const double m = 0.5 * (seg.a + seg.b);
            stack.push_back({m, seg.b, seg.depth + 1});
            stack.push_back({seg.a, m, seg.depth + 1});
            continue;
        }

        std::vector<Cx> labeled(prev.size());
        if (too_fast) {
            // bisection exhausted: the trajectory runs through a (near-)
            // coalescence. Extend labels by velocity extrapolation.
            st.degenerate.push_back(st.lambdas.size());
            if (st.lambdas.size() >= 2) {
                const std::size_t t = st.lambdas.size() - 1;
                const double dt_prev = st.lambdas[t] - st.lambdas[t - 1];
                const double dt = seg.b - st.lambdas[t];
                std::vector<Cx> predicted(prev.size());
                for (std::size_t k = 0; k < prev.size(); ++k) {
                    const Cx vel = (st.energies[t][k] - st.energies[t - 1][k]) / dt_prev;
                    predicted[k] = st.energies[t][k] + vel * dt;
                }
                const Assignment asg2 = match_eigenvalues(predicted, sb.eigenvalues);
                for (std::size_t k = 0; k < prev.size(); ++k)
                    labeled[k] = sb.eigenvalues[asg2.map[k]];
            } else {
                for (std::size_t k = 0; k < prev.size(); ++k)
                    labeled[k] = sb.eigenvalues[asg.map[k]];
            }
        } else {
            for (std::size_t k = 0; k < prev.size(); ++k)
                labeled[k] = sb.eigenvalues[asg.map[k]];
        }

        if (with_vectors) {
            const auto& pv = st.vectors.back();
            std::vector<std::vector<Cx>> raw;
            bool misaligned = false;
            try {
                raw = eigenvectors_for(hb, labeled, opts);
            } catch (const SolverFailure&) {
                // eigenvectors are ill-defined through a coalescence; keep
                // the previous step's directions and flag the step
                raw = pv;
                misaligned = true;
            }
            for (std::size_t k = 0; !misaligned && k < raw.size(); ++k) {
                try {
                    raw[k] = gauge_align(pv[k], raw[k]);
                    Cx ov{0.0, 0.0};
                    for (std::size_t j = 0; j < raw[k].size(); ++j)
                        ov += std::conj(pv[k][j]) * raw[k][j];
                    if (std::abs(ov) < 0.99) misaligned = true;
                } catch (const GaugeBreakdown&) {
                    misaligned = true;
                    canonical_phase(raw[k]);
                }
            }
            if (misaligned && seg.depth < kSweepBisectionCap && !too_fast) {
                const double m = 0.5 * (seg.a + seg.b);
                stack.push_back({m, seg.b, seg.depth + 1});
                stack.push_back({seg.a, m, seg.depth + 1});
                continue;
            }
            if (misaligned &&
                (st.degenerate.empty() || st.degenerate.back() != st.lambdas.size()))
                st.degenerate.push_back(st.lambdas.size());
            st.vectors.push_back(std::move(raw));
        }

        st.lambdas.push_back(seg.b);
        st.energies.push_back(std::move(labeled));
        st.costs.push_back(asg.total_cost);
    }

    TrajectorySet out;
    out.lambdas = std::move(st.lambdas);
    out.energies = std::move(st.energies);
    out.vectors = std::move(st.vectors);
    out.pairing_cost = std::move(st.costs);
    out.degenerate_steps = std::move(st.degenerate);
    out.family = f;
    return out;
}

namespace {

// Labeled difference E_i - E_j at an off-grid lambda, labels taken from a
// reference step of the sweep.
Cx labeled_diff_at(const MatrixFamily& f, double lambda, const std::vector<Cx>& ref,
                   std::pair<std::size_t, std::size_t> pair, const SolveOptions& opts) {
    const Spectrum s = eigenvalues_general(build_general(f, lambda), opts);
    const Assignment asg = match_eigenvalues(ref, s.eigenvalues);
    return s.eigenvalues[asg.map[pair.first]] - s.eigenvalues[asg.map[pair.second]];
}

} // namespace

CrossingClass classify_crossing(const TrajectorySet& t,
                                std::pair<std::size_t, std::size_t> pair,
                                const std::vector<EPLocation>& known_eps) {
    const std::size_t n = t.size();
    if (n < 3) throw InvalidInput("classify_crossing: sweep too short");
    if (pair.first >= pair.second || pair.second >= t.levels())
        throw InvalidInput("classify_crossing: bad pair indices");

    std::vector<Cx> d(n);
    std::vector<double> gap(n);
    for (std::size_t k = 0; k < n; ++k) {
        d[k] = t.energies[k][pair.first] - t.energies[k][pair.second];
        gap[k] = std::abs(d[k]);
    }
    std::size_t kmin = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (gap[k] < gap[kmin]) kmin = k;

    // delta-neighborhood tied to the observed gap minimum: the contiguous
    // stretch where the pair stays within 2x of its closest approach, never
    // narrower than max(3 steps, 1% of the sweep).
    const std::size_t w = std::max<std::size_t>(3, (n + 99) / 100);
    std::size_t lo = kmin >= w ? kmin - w : 0;
    std::size_t hi = std::min(n - 1, kmin + w);
    const double gap_ceiling = 2.0 * gap[kmin];
    while (lo > 0 && gap[lo - 1] <= gap_ceiling) --lo;
    while (hi + 1 < n && gap[hi + 1] <= gap_ceiling) ++hi;

    double escale = 0.0;
    for (const auto& e : t.energies[kmin]) escale = std::max(escale, std::abs(e));

    bool degenerate_nearby = false;
    for (std::size_t idx : t.degenerate_steps)
        if (idx >= lo && idx <= hi) degenerate_nearby = true;

    // sign changes below solver noise (identically-zero parts) do not count
    const double noise = 1e-10 * (1.0 + escale);
    std::vector<std::size_t> re_cross, im_cross;
    for (std::size_t k = lo; k < hi; ++k) {
        const double r0 = d[k].real(), r1 = d[k + 1].real();
        const double i0 = d[k].imag(), i1 = d[k + 1].imag();
        if (r0 * r1 < 0.0 && std::min(std::abs(r0), std::abs(r1)) > noise)
            re_cross.push_back(k);
        if (i0 * i1 < 0.0 && std::min(std::abs(i0), std::abs(i1)) > noise)
            im_cross.push_back(k);
    }

    CrossingClass out;
    out.min_gap = gap[kmin];

    const bool coalesced = degenerate_nearby || gap[kmin] < 1e-6 * (1.0 + escale);
    if (coalesced || (!re_cross.empty() && !im_cross.empty())) {
        out.kind = CrossingKind::BOTH_CROSS_AT_EP;
        out.crossing_lambda = t.lambdas[kmin];
    } else if (!re_cross.empty() || !im_cross.empty()) {
        const bool re = !re_cross.empty();
        out.kind = re ? CrossingKind::RE_CROSS_IM_AVOID : CrossingKind::RE_AVOID_IM_CROSS;
        const std::size_t k = re ? re_cross.front() : im_cross.front();
        double a = t.lambdas[k], b = t.lambdas[k + 1];
        if (t.family) {
            // bisect the sign change down to 1e-9
            const std::vector<Cx>& ref = t.energies[k];
            double fa = re ? d[k].real() : d[k].imag();
            while (b - a > 1e-9) {
                const double m = 0.5 * (a + b);
                const Cx dm = labeled_diff_at(*t.family, m, ref, pair, SolveOptions{});
                const double fm = re ? dm.real() : dm.imag();
                if (fa * fm <= 0.0) b = m;
                else { a = m; fa = fm; }
            }
        }
        out.crossing_lambda = 0.5 * (a + b);
    } else {
        throw NoPassage("classify_crossing: neither Re nor Im of the pair difference "
                        "changes sign near the gap minimum");
    }

    if (!known_eps.empty()) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& ep : known_eps) {
            const double dist = std::abs(ep.lambda_c - Cx{out.crossing_lambda, 0.0});
            if (dist < best) {
                best = dist;
                out.ep_distance = std::abs(ep.lambda_c.imag());
            }
        }
    }
    return out;
}

double crossing_angle_at_ep(const MatrixFamily& f, double lambda_c,
                            const SolveOptions& opts) {
    f.validate();
    if (!is_finite(lambda_c)) throw InvalidInput("crossing_angle_at_ep: bad lambda");

    const Spectrum sc = eigenvalues_general(build_general(f, Cx{lambda_c, 0.0}), opts);
    const auto& e = sc.eigenvalues;
    std::size_t pi = 0, pj = 1;
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j) {
            const double g = std::abs(e[i] - e[j]);
            if (g < min_gap) { min_gap = g; pi = i; pj = j; }
        }
    const Cx ec = (e[pi] + e[pj]) / 2.0;
    if (min_gap > 1e-4 * (1.0 + std::abs(ec)))
        throw InvalidEP("crossing_angle_at_ep: lambda_c is not an exceptional point "
                        "(pair gap " + std::to_string(min_gap) + ")");

    const double h = 1e-4 * (1.0 + std::abs(lambda_c));
    auto pair_member = [&](double lam) {
        const Spectrum s = eigenvalues_general(build_general(f, Cx{lam, 0.0}), opts);
        // the coalescing pair are the two eigenvalues nearest the EP energy
        std::vector<Cx> es = s.eigenvalues;
        std::sort(es.begin(), es.end(), [&](const Cx& a, const Cx& b) {
            return std::abs(a - ec) < std::abs(b - ec);
        });
        return es[0];
    };

    const Cx t_in = ec - pair_member(lambda_c - h);
    const Cx t_out = pair_member(lambda_c + h) - ec;
    if (std::abs(t_in) == 0.0 || std::abs(t_out) == 0.0)
        throw SolverFailure("crossing_angle_at_ep: degenerate tangent");

    double deg = std::abs(std::arg(t_out / t_in)) * 180.0 / std::numbers::pi;
    if (deg > 90.0) deg = 180.0 - deg; // fold: outgoing branch choice is arbitrary
    return deg;
}

MixingResult mixing_angle(const std::array<Vec2, 2>& basis_before,
                          const std::array<Vec2, 2>& vecs_after) {
    auto norm2 = [](const Vec2& v) { return std::norm(v[0]) + std::norm(v[1]); };
    for (const auto& v : basis_before)
        if (std::abs(norm2(v) - 1.0) > 1e-6)
            throw InvalidInput("mixing_angle: basis vectors must be unit norm");
    for (const auto& v : vecs_after)
        if (std::abs(norm2(v) - 1.0) > 1e-6)
            throw InvalidInput("mixing_angle: after vectors must be unit norm");

    // remove global phases: largest-modulus component made real positive
    std::array<Vec2, 2> a = vecs_after;
    for (auto& v : a) {
        const std::size_t jm = std::abs(v[0]) >= std::abs(v[1]) ? 0 : 1;
        const Cx rot = std::abs(v[jm]) / v[jm];
        v[0] *= rot;
        v[1] *= rot;
    }
    const Vec2& b0 = basis_before[0];
    const Vec2& b1 = basis_before[1];

    auto resid = [&](double al, int s1, int s2) {
        const double c = std::cos(al), s = std::sin(al);
        double r = 0.0;
        for (std::size_t j = 0; j < 2; ++j) {
            const Cx fit0 = static_cast<double>(s1) * (c * b0[j] - s * b1[j]);
            const Cx fit1 = static_cast<double>(s2) * (s * b0[j] + c * b1[j]);
            r += std::norm(a[0][j] - fit0) + std::norm(a[1][j] - fit1);
        }
        return r;
    };

    MixingResult best;
    double best_r = std::numeric_limits<double>::infinity();
    for (int s1 : {+1, -1}) {
        for (int s2 : {+1, -1}) {
            // coarse grid plus golden-section polish
            const int grid = 256;
            double al0 = 0.0, r0 = resid(0.0, s1, s2);
            for (int g = 1; g <= grid; ++g) {
                const double al = (std::numbers::pi / 2.0) * g / grid;
                const double r = resid(al, s1, s2);
                if (r < r0) { r0 = r; al0 = al; }
            }
            const double span = (std::numbers::pi / 2.0) / grid;
            double lo = std::max(0.0, al0 - span), hi = std::min(std::numbers::pi / 2.0, al0 + span);
            const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
            double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
            double f1 = resid(x1, s1, s2), f2 = resid(x2, s1, s2);
            for (int it = 0; it < 80; ++it) {
                if (f1 < f2) {
                    hi = x2; x2 = x1; f2 = f1;
                    x1 = hi - gr * (hi - lo); f1 = resid(x1, s1, s2);
                } else {
                    lo = x1; x1 = x2; f1 = f2;
                    x2 = lo + gr * (hi - lo); f2 = resid(x2, s1, s2);
                }
            }
            const double al = 0.5 * (lo + hi);
            const double r = resid(al, s1, s2);
            if (r < best_r) {
                best_r = r;
                best.alpha = al;
                best.sign1 = s1;
                best.sign2 = s2;
            }
        }
    }
    best.residual = std::sqrt(best_r);
    return best;
}

} // namespace epscope
