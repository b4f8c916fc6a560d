#pragma once

#include <vector>
#include <utility>

#include "epscope/model.hpp"
#include "epscope/spectra.hpp"

namespace epscope {

/// A located exceptional point.
struct EPLocation {
    Cx lambda_c;
    std::pair<std::size_t, std::size_t> pair{0, 1}; // i < j, labels of the
        // coalescing eigenvalues in (Re, Im)-sorted order at lambda_c
    double residual = 0.0;  // |disc(lambda_c)|
    double gap = 0.0;       // min |E_i - E_j| at lambda_c
    Cx energy{0.0, 0.0};    // coalesced eigenvalue (pair midpoint)
};

struct SearchRegion {
    double re_min = 0.0, re_max = 0.0;
    double im_min = 0.0, im_max = 0.0;
    std::size_t grid_re = 0, grid_im = 0;

    void validate() const;
};

/// |disc| sampled on the region grid, row-major over (re index, im index).
/// Failed cells are NaN. The serial and parallel kernels produce bitwise
/// identical grids; the parallel one shards cells across OpenMP threads
/// (capped by EPSCOPE_THREADS).
struct DiscGrid {
    std::vector<double> values;
    std::size_t failed = 0;
};

DiscGrid scan_disc_grid_serial(const MatrixFamily& f, const SearchRegion& region,
                               const SolveOptions& opts = {});
DiscGrid scan_disc_grid_parallel(const MatrixFamily& f, const SearchRegion& region,
                                 const SolveOptions& opts = {});

/// Effective thread count for grid scans: machine parallelism, capped by the
/// EPSCOPE_THREADS environment variable when set.
int scan_thread_count();

/// Closed-form EP candidates of the two-level family. All four sign
/// combinations of the formula's two +/- pairs are evaluated; candidates are
/// kept only when the discriminant actually vanishes there.
std::vector<EPLocation> ep_closed_form(const TwoLevelParams& p,
                                       const SolveOptions& opts = {});

/// Grid scan for EP candidates: cells that undercut all neighbours and sit
/// below 1e-2 of the grid's median |disc|, deduplicated within one cell
/// diagonal. Throws ScanUnreliable when more than 10% of cells fail.
std::vector<Cx> ep_scan(const MatrixFamily& f, const SearchRegion& region,
                        const SolveOptions& opts = {});

/// Complex Newton refinement on the discriminant from a nearby start.
EPLocation ep_refine(const MatrixFamily& f, Cx lambda0,
                     const SolveOptions& opts = {});

struct PairingReport {
    std::vector<std::pair<std::size_t, std::size_t>> pairs; // conjugate partners
    std::vector<std::size_t> singletons;                    // absorption signature
};

/// Greedy conjugate matching within tolerance 1e-8. A real-symmetric family
/// pairs every EP; absorption leaves singletons.
PairingReport conjugate_pairing_check(const std::vector<EPLocation>& eps,
                                      double tol = 1e-8);

} // namespace epscope
