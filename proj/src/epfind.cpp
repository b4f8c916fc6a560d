#include "epscope/epfind.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#ifdef EPSCOPE_HAVE_OPENMP
#include <omp.h>
#endif

#include "epscope/errors.hpp"

namespace epscope {

namespace {

// Characteristic magnitude of the discriminant: energy^(n(n-1)).
double disc_scale(const Spectrum& s) {
    const double base = 1.0 + s.max_abs_eigenvalue();
    const auto n = static_cast<double>(s.size());
    return std::pow(base, n * (n - 1.0));
}

std::vector<Cx> sorted_eigenvalues(Spectrum s) {
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](const Cx& a, const Cx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return s.eigenvalues;
}

Cx disc_from_eigenvalues(const std::vector<Cx>& e) {
    Cx d{1.0, 0.0};
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j) d *= (e[i] - e[j]) * (e[i] - e[j]);
    return d;
}

} // namespace

void SearchRegion::validate() const {
    if (!(re_min < re_max) || !(im_min < im_max))
        throw InvalidInput("SearchRegion: need re_min < re_max and im_min < im_max");
    if (grid_re < 8 || grid_im < 8)
        throw InvalidInput("SearchRegion: grid must be at least 8 per axis");
}

int scan_thread_count() {
#ifdef EPSCOPE_HAVE_OPENMP
    int n = omp_get_max_threads();
#else
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
#endif
    if (const char* env = std::getenv("EPSCOPE_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && cap < n) n = static_cast<int>(cap);
    }
    return n;
}

namespace {

template <bool Parallel>
DiscGrid scan_impl(const MatrixFamily& f, const SearchRegion& region,
                   const SolveOptions& opts) {
    region.validate();
    f.validate();
    const std::size_t nr = region.grid_re, ni = region.grid_im;
    const double dre = (region.re_max - region.re_min) / static_cast<double>(nr - 1);
    const double dim = (region.im_max - region.im_min) / static_cast<double>(ni - 1);

    DiscGrid grid;
    grid.values.assign(nr * ni, 0.0);
    std::size_t failed = 0;

    const auto total = static_cast<long long>(nr * ni);
#ifdef EPSCOPE_HAVE_OPENMP
    const int threads = Parallel ? scan_thread_count() : 1;
#pragma omp parallel for schedule(static) num_threads(threads) reduction(+ : failed)
#endif
    for (long long idx = 0; idx < total; ++idx) {
        const auto i = static_cast<std::size_t>(idx) / ni;
        const auto j = static_cast<std::size_t>(idx) % ni;
        const Cx lambda{region.re_min + dre * static_cast<double>(i),
                        region.im_min + dim * static_cast<double>(j)};
        double v;
        try {
            v = std::abs(discriminant(f, lambda, opts));
        } catch (const SolverFailure&) {
            v = std::numeric_limits<double>::quiet_NaN();
            failed += 1;
        } catch (const InvalidInput&) {
            // per-cell overflow (non-finite intermediates) counts as a failure
            v = std::numeric_limits<double>::quiet_NaN();
            failed += 1;
        }
        grid.values[idx] = v;
    }
    grid.failed = failed;
    return grid;
}

} // namespace

DiscGrid scan_disc_grid_serial(const MatrixFamily& f, const SearchRegion& region,
                               const SolveOptions& opts) {
    return scan_impl<false>(f, region, opts);
}

DiscGrid scan_disc_grid_parallel(const MatrixFamily& f, const SearchRegion& region,
                                 const SolveOptions& opts) {
    return scan_impl<true>(f, region, opts);
}

std::vector<Cx> ep_scan(const MatrixFamily& f, const SearchRegion& region,
                        const SolveOptions& opts) {
    const DiscGrid grid = scan_disc_grid_parallel(f, region, opts);
    const std::size_t nr = region.grid_re, ni = region.grid_im;
    const std::size_t total = nr * ni;
    if (grid.failed * 10 > total) throw ScanUnreliable(grid.failed, total);

    std::vector<double> finite;
    finite.reserve(total);
    for (double v : grid.values)
        if (std::isfinite(v)) finite.push_back(v);
    if (finite.empty()) throw ScanUnreliable(grid.failed, total);
    auto mid = finite.begin() + static_cast<std::ptrdiff_t>(finite.size() / 2);
    std::nth_element(finite.begin(), mid, finite.end());
    const double threshold = 1e-2 * (*mid);

    const double dre = (region.re_max - region.re_min) / static_cast<double>(nr - 1);
    const double dim = (region.im_max - region.im_min) / static_cast<double>(ni - 1);
    const double cell_diag = std::hypot(dre, dim);

    struct Cand { Cx lambda; double value; };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < ni; ++j) {
            const double v = grid.values[i * ni + j];
            if (!std::isfinite(v) || v >= threshold) continue;
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const auto ii = static_cast<std::ptrdiff_t>(i) + di;
                    const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
                    if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(nr) ||
                        jj >= static_cast<std::ptrdiff_t>(ni))
                        continue;
                    const double w = grid.values[static_cast<std::size_t>(ii) * ni +
                                                 static_cast<std::size_t>(jj)];
                    if (std::isfinite(w) && w <= v) { is_min = false; break; }
                }
            }
            if (!is_min) continue;
            cands.push_back({Cx{region.re_min + dre * static_cast<double>(i),
                                region.im_min + dim * static_cast<double>(j)},
                             v});
        }
    }

    // dedupe within one cell diagonal, keeping the deeper minimum
    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return a.value < b.value; });
    std::vector<Cx> out;
    for (const auto& c : cands) {
        bool dup = false;
        for (const auto& kept : out)
            if (std::abs(kept - c.lambda) <= cell_diag) { dup = true; break; }
        if (!dup) out.push_back(c.lambda);
    }
    std::sort(out.begin(), out.end(), [](const Cx& a, const Cx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

EPLocation ep_refine(const MatrixFamily& f, Cx lambda0, const SolveOptions& opts) {
    f.validate();
    if (!is_finite(lambda0)) throw InvalidInput("ep_refine: start must be finite");

    Cx lambda = lambda0;
    Cx best = lambda0;
    double best_abs = std::numeric_limits<double>::infinity();
    const double escape = 1e6 * (1.0 + std::abs(lambda0));

    // Newton on the analytic discriminant: the EP is a simple zero, so the
    // step size converges quadratically; iterate to machine-limit lambda
    // rather than stopping on a |disc| threshold (which would leave the
    // position orders of magnitude less accurate than the pairing checks
    // downstream need).
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
        const Cx d = discriminant(f, lambda, opts);
        if (std::abs(d) < best_abs) { best_abs = std::abs(d); best = lambda; }
        if (d == Cx{0.0, 0.0}) { converged = true; break; }

        const double h = 1e-6 * (1.0 + std::abs(lambda));
        const Cx dp = discriminant(f, lambda + h, opts);
        const Cx dm = discriminant(f, lambda - h, opts);
        const Cx deriv = (dp - dm) / (2.0 * h);
        if (deriv == Cx{0.0, 0.0})
            throw RefineFailure("ep_refine: vanishing discriminant derivative", best, best_abs);
        const Cx step = d / deriv;
        lambda -= step;
        if (!is_finite(lambda) || std::abs(lambda) > escape)
            throw RefineFailure("ep_refine: Newton iteration diverged", best, best_abs);
        if (std::abs(step) <= 1e-13 * (1.0 + std::abs(lambda))) {
            converged = true;
            break;
        }
    }

    const Spectrum s = eigenvalues_general(build_general(f, lambda), opts);
    const Cx d_final = disc_from_eigenvalues(s.eigenvalues);
    best_abs = std::abs(d_final);
    const double tol = 1e-12 * disc_scale(s);
    if (!converged || best_abs >= tol)
        throw RefineFailure("ep_refine: did not reach tolerance", lambda, best_abs);

    const std::vector<Cx> e = sorted_eigenvalues(s);
    std::size_t pi = 0, pj = 1;
    double min_gap = std::numeric_limits<double>::infinity();
    double second_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j) {
            const double g = std::abs(e[i] - e[j]);
            if (g < min_gap) {
                second_gap = min_gap;
                min_gap = g;
                pi = i;
                pj = j;
            } else if (g < second_gap) {
                second_gap = g;
            }
        }
    if (e.size() > 2 && second_gap < 10.0 * min_gap)
        throw RefineFailure("ep_refine: coalescing pair is ambiguous (second gap " +
                                std::to_string(second_gap) + " vs " + std::to_string(min_gap) + ")",
                            lambda, best_abs);

    EPLocation loc;
    loc.lambda_c = lambda;
    loc.pair = {pi, pj};
    loc.residual = best_abs;
    loc.gap = min_gap;
    loc.energy = (e[pi] + e[pj]) / 2.0;
    return loc;
}

std::vector<EPLocation> ep_closed_form(const TwoLevelParams& p, const SolveOptions& opts) {
    p.validate();
    p.require_distinct_slopes();
    const Cx a = p.eps1 - p.eps2;
    const double w = p.omega1 - p.omega2;
    const Cx s{p.sigma1 - p.sigma2, 0.0};
    if (p.mu == 0.0 && std::abs(a) == 0.0)
        throw InvalidInput("ep_closed_form: eps1 == eps2 with mu == 0 has no EP "
                           "(the lone degeneracy at lambda = 0 is diagonal)");

    const MatrixFamily fam = to_family(p);

    // lambda_c = (-a + i mu s e^{+-2i phi2}) e^{-+2i phi1} / w, all four signs,
    // kept only where the discriminant actually vanishes.
    std::vector<Cx> candidates;
    for (int sg2 : {+1, -1}) {
        for (int sg1 : {+1, -1}) {
            const Cx term = -a + Cx{0.0, p.mu} * s * std::polar(1.0, sg2 * 2.0 * p.phi2);
            candidates.push_back(term * std::polar(1.0, sg1 * 2.0 * p.phi1) / w);
        }
    }

    std::vector<EPLocation> out;
    for (const Cx& lc : candidates) {
        const Spectrum sp = eigenvalues_general(build_general(fam, lc), opts);
        const std::vector<Cx> e = sorted_eigenvalues(sp);
        const Cx d = disc_from_eigenvalues(e);
        const double scale = std::max(1.0, disc_scale(sp));
        if (std::abs(d) >= 1e-10 * scale) continue;
        bool dup = false;
        for (const auto& kept : out)
            if (std::abs(kept.lambda_c - lc) <= 1e-12 * (1.0 + std::abs(lc))) {
                dup = true;
                break;
            }
        if (dup) continue;
        EPLocation loc;
        loc.lambda_c = lc;
        loc.pair = {0, 1};
        loc.residual = std::abs(d);
        loc.gap = std::abs(e[0] - e[1]);
        loc.energy = (e[0] + e[1]) / 2.0;
        out.push_back(loc);
    }
    std::sort(out.begin(), out.end(), [](const EPLocation& x, const EPLocation& y) {
        if (x.lambda_c.real() != y.lambda_c.real())
            return x.lambda_c.real() < y.lambda_c.real();
        return x.lambda_c.imag() < y.lambda_c.imag();
    });
    return out;
}

PairingReport conjugate_pairing_check(const std::vector<EPLocation>& eps, double tol) {
    PairingReport report;
    std::vector<bool> used(eps.size(), false);
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (used[i]) continue;
        const Cx conj_i = std::conj(eps[i].lambda_c);
        std::size_t best = eps.size();
        double best_d = tol;
        for (std::size_t j = i + 1; j < eps.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(conj_i - eps[j].lambda_c);
            if (d < best_d) { best_d = d; best = j; }
        }
        if (best < eps.size()) {
            used[i] = used[best] = true;
            report.pairs.emplace_back(i, best);
        } else {
            used[i] = true;
            report.singletons.push_back(i);
        }
    }
    return report;
}

} // namespace epscope
