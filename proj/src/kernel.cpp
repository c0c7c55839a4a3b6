#include "bosegas/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <unordered_map>

#include "bosegas/gauss.hpp"
#include "bosegas/parallel.hpp"

namespace bosegas {

SymmetrizedKernel::SymmetrizedKernel(double n,
                                     std::shared_ptr<const ModifiedScattering> ms)
    : n_(n), ms_(std::move(ms)) {
    if (n_ < 0.0) throw std::invalid_argument("SymmetrizedKernel: n must be >= 0");
    if (!ms_) throw std::invalid_argument("SymmetrizedKernel: null scattering data");
    k2_ = n_ * ms_->omega_hat(0.0);
}

double SymmetrizedKernel::tilde_value(const Vec3& x, const Vec3& y) const {
    const double lam = ms_->lambda();
    double sum = 0.0;
    for (const Int3& z : neighbor_labels()) {
        const Vec3 c = mirror_point(z, x);
        const double dx = c[0] - y[0], dy = c[1] - y[1], dz = c[2] - y[2];
        const double r2 = dx * dx + dy * dy + dz * dz;
        if (r2 >= lam * lam) continue;
        sum += ms_->omega_lambda(std::sqrt(r2));
    }
    return -n_ * sum;
}

double SymmetrizedKernel::value(const Vec3& x, const Vec3& y) const {
    return tilde_value(x, y) + k2_;
}

double SymmetrizedKernel::mode_coefficient(const NeumannMode& p) const {
    if (p.is_zero()) return 0.0;
    return -n_ * ms_->omega_hat(std::sqrt(p.p_norm_sq()));
}

namespace {

// ---------------------------------------------------------------------------
// Inner integral: int_{box cap B_S} f(|t|) G(t) dt in spherical coordinates.
//
// The boxes arising from the mirror construction clip the support ball on at
// most one side per dimension, so the angular domain at fixed radius is the
// sphere cut by up to three half-spaces: a cos(theta) clamp from dimension 3
// and azimuthal arcs from dimensions 1 and 2. All radial kink shells (the
// clip distances and the breakpoints of f) become panel edges, and the
// cos(theta) panels split where an arc opens or closes.
// ---------------------------------------------------------------------------

struct HalfSpace {
    bool active = false;
    bool lower = false;  // active: t_d >= bound (lower) or t_d <= bound
    double bound = 0.0;
};

struct ClippedBox {
    double lo[3], hi[3];
    HalfSpace clip[3];
    int clip_count = 0;
    double support = 0.0;
};

bool make_clipped_box(const Vec3& c, double S, ClippedBox& box) {
    box.support = S;
    box.clip_count = 0;
    double dmin2 = 0.0;
    for (int d = 0; d < 3; ++d) {
        box.lo[d] = std::max(c[d] - 0.5, -S);
        box.hi[d] = std::min(c[d] + 0.5, S);
        if (box.lo[d] >= box.hi[d] - 1e-14) return false;
        box.clip[d] = HalfSpace{};
        if (box.lo[d] > -S + 1e-14 && box.hi[d] < S - 1e-14)
            throw std::runtime_error("clipped box: two-sided clip (support too large)");
        if (box.lo[d] > -S + 1e-14) {
            box.clip[d] = {true, true, box.lo[d]};
            ++box.clip_count;
        } else if (box.hi[d] < S - 1e-14) {
            box.clip[d] = {true, false, box.hi[d]};
            ++box.clip_count;
        }
        if (box.lo[d] > 0.0)
            dmin2 += box.lo[d] * box.lo[d];
        else if (box.hi[d] < 0.0)
            dmin2 += box.hi[d] * box.hi[d];
    }
    return dmin2 < S * S;
}

// Arc {psi : cos(psi - center) >= cos(halfwidth)} on the circle.
struct Arc {
    double center;
    double halfwidth;  // 0 empty .. pi full
};

// Intersect [0, 2pi) intervals with an arc; intervals stay disjoint, sorted.
void intersect_with_arc(std::vector<std::pair<double, double>>& intervals,
                        const Arc& arc) {
    if (arc.halfwidth >= M_PI - 1e-15) return;
    std::vector<std::pair<double, double>> out;
    if (arc.halfwidth <= 1e-15) {
        intervals.clear();
        return;
    }
    const double a0 = arc.center - arc.halfwidth;
    const double a1 = arc.center + arc.halfwidth;
    for (const auto& [b0, b1] : intervals) {
        // compare against the arc shifted by full turns
        for (int shift = -1; shift <= 1; ++shift) {
            const double lo = std::max(b0, a0 + 2.0 * M_PI * shift);
            const double hi = std::min(b1, a1 + 2.0 * M_PI * shift);
            if (hi > lo + 1e-15) out.emplace_back(lo, hi);
        }
    }
    intervals = std::move(out);
}

// Coordinate permutation: position 2 (the polar axis, clipped by a plain
// cos(theta) clamp) takes a clipped dimension first, so single-clip boxes
// need no azimuthal arcs at all.
struct AxisOrder {
    int axis_of_pos[3];  // original dimension at rotated position
};

AxisOrder choose_axes(const ClippedBox& box) {
    AxisOrder order{{0, 1, 2}};
    int clipped[3], free_dims[3];
    int nc = 0, nf = 0;
    for (int d = 0; d < 3; ++d)
        (box.clip[d].active ? clipped[nc++] : free_dims[nf++]) = d;
    int pos[3], k = 0;
    if (nc > 0) pos[k++] = 2;  // polar axis first
    if (nc > 1) pos[k++] = 0;
    if (nc > 2) pos[k++] = 1;
    for (int i = 0; i < nc; ++i) order.axis_of_pos[pos[i]] = clipped[i];
    int rest[3], nr = 0;
    for (int p = 0; p < 3; ++p) {
        bool used = false;
        for (int i = 0; i < nc; ++i) used = used || pos[i] == p;
        if (!used) rest[nr++] = p;
    }
    for (int i = 0; i < nf; ++i) order.axis_of_pos[rest[i]] = free_dims[i];
    return order;
}

// Visit(t[3], weight) over the clipped ball with f folded into the weight;
// t is reported in the original coordinates.
template <typename F, typename Visitor>
void clipped_ball_quadrature(const ClippedBox& box0, const F& f,
                             std::span<const double> radial_breaks, int radial_order,
                             int angular_order, Visitor&& visit) {
    const AxisOrder axes = choose_axes(box0);
    ClippedBox box;
    box.support = box0.support;
    box.clip_count = box0.clip_count;
    for (int p = 0; p < 3; ++p) {
        box.lo[p] = box0.lo[axes.axis_of_pos[p]];
        box.hi[p] = box0.hi[axes.axis_of_pos[p]];
        box.clip[p] = box0.clip[axes.axis_of_pos[p]];
    }
    const double S = box.support;
    static thread_local std::vector<double> rb;
    rb.assign({0.0, S});
    for (double b : radial_breaks)
        if (b > 0.0 && b < S) rb.push_back(b);
    // clip distances, plus the corner radii where two or three clip planes
    // meet inside the ball (the shell integral kinks there)
    double bounds2[3] = {0.0, 0.0, 0.0};
    for (int d = 0; d < 3; ++d)
        if (box.clip[d].active)
            bounds2[d] = box.clip[d].bound * box.clip[d].bound;
    for (int d = 0; d < 3; ++d) {
        if (!box.clip[d].active) continue;
        const double a = std::sqrt(bounds2[d]);
        if (a > 0.0 && a < S) rb.push_back(a);
        for (int e = d + 1; e < 3; ++e) {
            if (!box.clip[e].active) continue;
            const double pair = std::sqrt(bounds2[d] + bounds2[e]);
            if (pair > 0.0 && pair < S) rb.push_back(pair);
        }
    }
    if (box.clip_count == 3) {
        const double triple = std::sqrt(bounds2[0] + bounds2[1] + bounds2[2]);
        if (triple > 0.0 && triple < S) rb.push_back(triple);
    }
    std::sort(rb.begin(), rb.end());
    rb.erase(std::unique(rb.begin(), rb.end(),
                         [](double u, double v) { return std::abs(u - v) < 1e-14; }),
             rb.end());
    Grid1D rg = composite_grid(rb, radial_order);

    const GaussRule& gl = gauss_rule(angular_order);
    static thread_local std::vector<std::pair<double, double>> intervals;
    static thread_local std::vector<double> usplit, stars;

    for (size_t ir = 0; ir < rg.size(); ++ir) {
        const double s = rg.x[ir];
        const double fw = f(s) * rg.w[ir] * s * s;
        if (fw == 0.0) continue;

        // cos(theta) range from the dimension-3 half-space
        double ulo = -1.0, uhi = 1.0;
        if (box.clip[2].active) {
            const double ratio = box.clip[2].bound / s;
            if (box.clip[2].lower) {
                if (ratio >= 1.0) continue;
                ulo = std::max(ulo, ratio);
            } else {
                if (ratio <= -1.0) continue;
                uhi = std::min(uhi, ratio);
            }
        }
        if (ulo >= uhi) continue;

        // split where the azimuthal arcs of positions 0, 1 open or close;
        // the arc width behaves like sqrt(u - u*) there, handled below by a
        // square-root substitution on the singular panel side
        usplit.clear();
        usplit.push_back(ulo);
        usplit.push_back(uhi);
        const size_t first_star = usplit.size();
        for (int d = 0; d < 2; ++d) {
            if (!box.clip[d].active) continue;
            const double a = std::abs(box.clip[d].bound);
            if (s <= a) continue;
            const double ustar = std::sqrt(1.0 - (a / s) * (a / s));
            if (ustar > ulo && ustar < uhi) usplit.push_back(ustar);
            if (-ustar > ulo && -ustar < uhi) usplit.push_back(-ustar);
        }
        stars.assign(usplit.begin() + first_star, usplit.end());
        std::sort(usplit.begin(), usplit.end());
        usplit.erase(std::unique(usplit.begin(), usplit.end(),
                                 [](double a, double b) { return b - a < 1e-14; }),
                     usplit.end());
        auto is_star = [&](double u) {
            for (double st : stars)
                if (std::abs(u - st) < 1e-13) return true;
            return false;
        };

        for (size_t up = 0; up + 1 < usplit.size(); ++up) {
            double pa = usplit[up], pb = usplit[up + 1];
            if (pb - pa < 1e-15) continue;
            // one sub-panel normally; two when both edges are singular
            const bool sa = is_star(pa), sb = is_star(pb);
            const int subs = (sa && sb) ? 2 : 1;
            for (int sub = 0; sub < subs; ++sub) {
                double qa = pa, qb = pb;
                bool left_sing = sa, right_sing = sb;
                if (subs == 2) {
                    const double mid = 0.5 * (pa + pb);
                    if (sub == 0) {
                        qb = mid;
                        right_sing = false;
                    } else {
                        qa = mid;
                        left_sing = false;
                    }
                }
            for (int iu = 0; iu < angular_order; ++iu) {
                double u, wu;
                if (left_sing || right_sing) {
                    // u = edge -+ (len) xi^2 removes the sqrt kink
                    const double xi = 0.5 * (gl.nodes[iu] + 1.0);
                    const double wxi = 0.5 * gl.weights[iu];
                    const double len = qb - qa;
                    if (left_sing) {
                        u = qa + len * xi * xi;
                        wu = wxi * 2.0 * len * xi;
                    } else {
                        u = qb - len * xi * xi;
                        wu = wxi * 2.0 * len * xi;
                    }
                } else {
                    const double umid = 0.5 * (qa + qb);
                    const double uhalf = 0.5 * (qb - qa);
                    u = umid + uhalf * gl.nodes[iu];
                    wu = uhalf * gl.weights[iu];
                }
                const double rho = s * std::sqrt(std::max(0.0, 1.0 - u * u));

                intervals.assign(1, {0.0, 2.0 * M_PI});
                bool empty = false;
                for (int d = 0; d < 2 && !empty; ++d) {
                    if (!box.clip[d].active) continue;
                    const double ratio =
                        rho > 0.0 ? box.clip[d].bound / rho
                                  : (box.clip[d].bound > 0.0 ? 2.0 : -2.0);
                    Arc arc;
                    const double center = (d == 0) ? 0.0 : 0.5 * M_PI;
                    if (box.clip[d].lower) {
                        // cos(phi - center) >= ratio
                        if (ratio >= 1.0) {
                            empty = true;
                            break;
                        }
                        arc = {center, std::acos(std::max(-1.0, ratio))};
                    } else {
                        // cos(phi - center) <= ratio
                        if (ratio <= -1.0) {
                            empty = true;
                            break;
                        }
                        arc = {center + M_PI,
                               M_PI - std::acos(std::min(1.0, ratio))};
                    }
                    intersect_with_arc(intervals, arc);
                    empty = intervals.empty();
                }
                if (empty) continue;
                for (const auto& [p0, p1] : intervals) {
                    const double pmid = 0.5 * (p0 + p1);
                    const double phalf = 0.5 * (p1 - p0);
                    for (int ip = 0; ip < angular_order; ++ip) {
                        const double phi = pmid + phalf * gl.nodes[ip];
                        const double w = fw * wu * phalf * gl.weights[ip];
                        const double tr[3] = {rho * std::cos(phi),
                                              rho * std::sin(phi), s * u};
                        double t[3];
                        for (int p = 0; p < 3; ++p) t[axes.axis_of_pos[p]] = tr[p];
                        visit(t, w);
                    }
                }
            }
            }
        }
    }
}

// Moment tensor of a clipped box: T[s1 s2 s3][a][b][c] with per-dimension
// factors cos(pi a t_d) (s_d = 0) or sin(pi a t_d) (s_d = 1). The inner
// integral for any shifted mode product is a fixed combination of these.
struct BoxMoments {
    std::vector<double> T;  // 8 * P1^3, layout [sigma][a][b][c]
    uint8_t sig_mask = 0xff;  // bits of sigma blocks actually populated
};

// cos(pi a t), sin(pi a t) for a = 0..P1-1 by the Chebyshev recurrence.
inline void trig_ladder(double t, int P1, double* cs, double* sn) {
    cs[0] = 1.0;
    sn[0] = 0.0;
    if (P1 == 1) return;
    const double c1 = std::cos(M_PI * t), s1 = std::sin(M_PI * t);
    cs[1] = c1;
    sn[1] = s1;
    for (int a = 2; a < P1; ++a) {
        cs[a] = 2.0 * c1 * cs[a - 1] - cs[a - 2];
        sn[a] = 2.0 * c1 * sn[a - 1] - sn[a - 2];
    }
}

template <typename F>
BoxMoments box_moments(const ClippedBox& box, const F& f,
                       std::span<const double> radial_breaks, int P1,
                       int radial_order, int angular_order) {
    BoxMoments mom;
    const int P = P1 * P1 * P1;
    mom.T.assign(8 * P, 0.0);

    // sin moments that the symmetric parts of the rule annihilate exactly
    // (free azimuthal or polar position) are skipped rather than accumulated.
    const AxisOrder axes = choose_axes(box);
    bool sin_zero[3] = {false, false, false};
    for (int pos = 1; pos <= 2; ++pos) {
        const int dim = axes.axis_of_pos[pos];
        if (!box.clip[dim].active) sin_zero[dim] = true;
    }
    int sig_list[8], n_sig = 0;
    for (int sig = 0; sig < 8; ++sig) {
        const bool s[3] = {bool((sig >> 2) & 1), bool((sig >> 1) & 1), bool(sig & 1)};
        bool skip = false;
        for (int d = 0; d < 3; ++d) skip = skip || (s[d] && sin_zero[d]);
        if (!skip) sig_list[n_sig++] = sig;
    }
    mom.sig_mask = 0;
    for (int si = 0; si < n_sig; ++si) mom.sig_mask |= uint8_t(1u << sig_list[si]);

    std::vector<double> trig(6 * P1);
    clipped_ball_quadrature(
        box, f, radial_breaks, radial_order, angular_order,
        [&](const double t[3], double w) {
            for (int d = 0; d < 3; ++d)
                trig_ladder(t[d], P1, &trig[(2 * d) * P1], &trig[(2 * d + 1) * P1]);
            for (int si = 0; si < n_sig; ++si) {
                const int sig = sig_list[si];
                const double* f1 = &trig[((sig >> 2) & 1) * P1];
                const double* f2 = &trig[(2 + ((sig >> 1) & 1)) * P1];
                const double* f3 = &trig[(4 + (sig & 1)) * P1];
                double* out = &mom.T[sig * P];
                for (int a = 0; a < P1; ++a) {
                    const double wa = w * f1[a];
                    for (int b = 0; b < P1; ++b) {
                        const double wab = wa * f2[b];
                        double* row = out + (a * P1 + b) * P1;
                        for (int c = 0; c < P1; ++c) row[c] += wab * f3[c];
                    }
                }
            }
        });
    return mom;
}

// u_q(c - t) per dimension splits as A(a) cos(pi a t) + B(a) sin(pi a t).
inline void mode_shift_coeffs(int a, double c, double& A, double& B) {
    if (a == 0) {
        A = 1.0;
        B = 0.0;
        return;
    }
    A = M_SQRT2 * std::cos(M_PI * a * (c + 0.5));
    B = M_SQRT2 * std::sin(M_PI * a * (c + 0.5));
}

struct BoxKey {
    uint64_t bits[6];
    bool operator==(const BoxKey& other) const {
        return std::memcmp(bits, other.bits, sizeof(bits)) == 0;
    }
};

struct BoxKeyHash {
    size_t operator()(const BoxKey& key) const {
        uint64_t h = 1469598103934665603ull;
        for (uint64_t b : key.bits) {
            h ^= b;
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

BoxKey make_key(const ClippedBox& box) {
    BoxKey key{};
    for (int d = 0; d < 3; ++d) {
        std::memcpy(&key.bits[2 * d], &box.lo[d], sizeof(double));
        std::memcpy(&key.bits[2 * d + 1], &box.hi[d], sizeof(double));
    }
    return key;
}

struct MirrorMatrixConfig {
    double support = 0.0;
    std::vector<double> radial_breaks;
    BoxQuadrature quad;
};

// Matrix <u_p, T_f u_q> over the full lattice |m|_inf <= Q (zero included,
// lexicographic order), T_f the mirror-sum operator of the radial f.
std::vector<double> mirror_mode_matrix(const std::function<double(double)>& f,
                                       const MirrorMatrixConfig& cfg, int Q) {
    const int P1 = Q + 1;
    const int P = P1 * P1 * P1;
    const double S = cfg.support;
    if (S <= 0.0 || S >= 0.5)
        throw std::invalid_argument("mirror_mode_matrix: support must be in (0, 1/2)");
    if (Q > 7) throw std::invalid_argument("mirror_mode_matrix: mode cutoff above 7");

    // Outer grid: boundary layers of width S at their own (lower) order, plus
    // equal interior panels.
    Grid1D og;
    {
        std::vector<double> layer_lo, interior, layer_hi;
        for (int i = 0; i <= cfg.quad.outer_layer_panels; ++i) {
            layer_lo.push_back(-0.5 + S * i / cfg.quad.outer_layer_panels);
            layer_hi.push_back(0.5 - S + S * i / cfg.quad.outer_layer_panels);
        }
        for (int i = 0; i <= cfg.quad.outer_interior_panels; ++i)
            interior.push_back(-0.5 + S +
                               (1.0 - 2.0 * S) * i / cfg.quad.outer_interior_panels);
        for (const Grid1D& part :
             {composite_grid(layer_lo, cfg.quad.outer_layer_order),
              composite_grid(interior, cfg.quad.outer_order),
              composite_grid(layer_hi, cfg.quad.outer_layer_order)}) {
            og.x.insert(og.x.end(), part.x.begin(), part.x.end());
            og.w.insert(og.w.end(), part.w.begin(), part.w.end());
        }
    }
    const size_t N = og.size();

    // ------------------------------------------------------------------
    // Inclusion-exclusion over the clipped dimensions: with comp_d the
    // complement half-space of the box constraint on dimension d,
    //   T(box) = sum_{subsets} (-1)^{|subset|} T(ball cap_{d in subset} comp_d).
    // The ball and the one/two-plane pieces are memoized (two-plane wedges
    // canonicalized under reflections); the tiny three-plane slivers are
    // integrated directly during accumulation.
    // ------------------------------------------------------------------

    // A memoized piece: subset of dims, each with a one-sided constraint.
    struct PieceSpec {
        ClippedBox box;
        uint8_t flip_mask = 0;  // dims reflected to reach the canonical form
        bool empty = true;
        int clips = 0;
    };

    // Complement piece for the subset; canonical form has upper-side
    // constraints (t_d <= bound) on every participating dimension.
    auto make_piece = [&](const ClippedBox& box, int subset_mask) {
        PieceSpec piece;
        ClippedBox& pb = piece.box;
        pb.support = S;
        pb.clip_count = 0;
        double dmin2 = 0.0;
        for (int d = 0; d < 3; ++d) {
            pb.lo[d] = -S;
            pb.hi[d] = S;
            pb.clip[d] = HalfSpace{};
            if (!(subset_mask & (1 << d))) continue;
            // complement of the box constraint on dim d
            double bound;
            bool upper;
            if (box.clip[d].lower) {
                bound = box.clip[d].bound;  // t_d <= bound
                upper = true;
            } else {
                bound = box.clip[d].bound;  // t_d >= bound
                upper = false;
            }
            if (!upper) {
                // reflect so the constraint reads t_d <= -bound
                bound = -bound;
                piece.flip_mask |= uint8_t(1 << d);
            }
            if (bound <= -S + 1e-14) return piece;  // empty piece
            pb.hi[d] = std::min(bound, S);
            pb.clip[d] = {true, false, pb.hi[d]};
            ++pb.clip_count;
            ++piece.clips;
            if (pb.hi[d] < 0.0) dmin2 += pb.hi[d] * pb.hi[d];
        }
        piece.empty = dmin2 >= S * S;
        return piece;
    };

    // Pass A: enumerate distinct memoizable pieces (deterministic order).
    std::unordered_map<BoxKey, uint32_t, BoxKeyHash> memo_index;
    std::vector<ClippedBox> memo_boxes;
    auto memo_insert = [&](const ClippedBox& box) {
        const BoxKey key = make_key(box);
        auto [it, fresh] = memo_index.emplace(key, memo_boxes.size());
        if (fresh) memo_boxes.push_back(box);
        return it->second;
    };
    {
        ClippedBox ball;
        ball.support = S;
        ball.clip_count = 0;
        for (int d = 0; d < 3; ++d) {
            ball.lo[d] = -S;
            ball.hi[d] = S;
            ball.clip[d] = HalfSpace{};
        }
        memo_insert(ball);  // id 0
    }
    for (size_t i1 = 0; i1 < N; ++i1)
        for (size_t i2 = 0; i2 < N; ++i2)
            for (size_t i3 = 0; i3 < N; ++i3) {
                const Vec3 x{og.x[i1], og.x[i2], og.x[i3]};
                for (const Int3& z : neighbor_labels()) {
                    ClippedBox box;
                    if (!make_clipped_box(mirror_point(z, x), S, box)) continue;
                    int clip_mask = 0;
                    for (int d = 0; d < 3; ++d)
                        if (box.clip[d].active) clip_mask |= 1 << d;
                    for (int sub = clip_mask; sub; sub = (sub - 1) & clip_mask) {
                        if (std::popcount(unsigned(sub)) >= 3) continue;  // direct
                        PieceSpec piece = make_piece(box, sub);
                        if (!piece.empty) memo_insert(piece.box);
                    }
                }
            }

    // Pass B: moment tensors for the memoized pieces.
    const auto tb0 = std::chrono::steady_clock::now();
    std::vector<BoxMoments> moments(memo_boxes.size());
    parallel_for(static_cast<int64_t>(memo_boxes.size()), [&](int64_t i) {
        const ClippedBox& box = memo_boxes[i];
        const bool wedge = box.clip_count == 2;
        moments[i] =
            box_moments(box, f, cfg.radial_breaks, P1,
                        wedge ? cfg.quad.edge_order + 2 : cfg.quad.radial_order,
                        wedge ? cfg.quad.edge_order : cfg.quad.angular_order);
    });
    const auto tb1 = std::chrono::steady_clock::now();

    // Pass C: outer accumulation.
    std::vector<double> of(P1 * N);
    for (int a = 0; a < P1; ++a)
        for (size_t i = 0; i < N; ++i) of[a * N + i] = mode_factor(a, og.x[i]);

    std::vector<std::vector<double>> partial(N);
    parallel_for(static_cast<int64_t>(N), [&](int64_t i1) {
        std::vector<double> M(static_cast<size_t>(P) * P, 0.0);
        std::vector<double> inner_acc(P), up(P), tc(8 * P);
        for (size_t i2 = 0; i2 < N; ++i2) {
            for (size_t i3 = 0; i3 < N; ++i3) {
                const Vec3 x{og.x[i1], og.x[i2], og.x[i3]};
                const double wx = og.w[i1] * og.w[i2] * og.w[i3];
                std::fill(inner_acc.begin(), inner_acc.end(), 0.0);
                bool any = false;
                for (const Int3& z : neighbor_labels()) {
                    const Vec3 c = mirror_point(z, x);
                    ClippedBox box;
                    if (!make_clipped_box(c, S, box)) continue;
                    any = true;
                    double A[3][8], B[3][8];
                    for (int d = 0; d < 3; ++d)
                        for (int a = 0; a < P1; ++a)
                            mode_shift_coeffs(a, c[d], A[d][a], B[d][a]);

                    // composite tensor: ball + signed pieces
                    std::fill(tc.begin(), tc.end(), 0.0);
                    uint8_t mask_union = 0;
                    auto add_piece = [&](const BoxMoments& mom, int sign,
                                         uint8_t flip_mask) {
                        for (int sig = 0; sig < 8; ++sig) {
                            if (!(mom.sig_mask & (1u << sig))) continue;
                            // reflections negate sin moments on flipped dims
                            int sgn = sign;
                            if (flip_mask) {
                                const int s0 = (sig >> 2) & 1, s1 = (sig >> 1) & 1,
                                          s2 = sig & 1;
                                if (s0 && (flip_mask & 1)) sgn = -sgn;
                                if (s1 && (flip_mask & 2)) sgn = -sgn;
                                if (s2 && (flip_mask & 4)) sgn = -sgn;
                            }
                            const double* src = &mom.T[sig * P];
                            double* dst = &tc[sig * P];
                            if (sgn > 0)
                                for (int k = 0; k < P; ++k) dst[k] += src[k];
                            else
                                for (int k = 0; k < P; ++k) dst[k] -= src[k];
                            mask_union |= uint8_t(1u << sig);
                        }
                    };
                    add_piece(moments[0], +1, 0);
                    int clip_mask = 0;
                    for (int d = 0; d < 3; ++d)
                        if (box.clip[d].active) clip_mask |= 1 << d;
                    bool has_triple = false;
                    for (int sub = clip_mask; sub; sub = (sub - 1) & clip_mask) {
                        const int bits = std::popcount(unsigned(sub));
                        if (bits >= 3) {
                            has_triple = true;
                            continue;
                        }
                        PieceSpec piece = make_piece(box, sub);
                        if (piece.empty) continue;
                        const int sign = (bits % 2) ? -1 : +1;
                        add_piece(moments.at(memo_index.at(make_key(piece.box))),
                                  sign, piece.flip_mask);
                    }

                    for (int sig = 0; sig < 8; ++sig) {
                        if (!(mask_union & (1u << sig))) continue;
                        const double* c1 = ((sig >> 2) & 1) ? B[0] : A[0];
                        const double* c2 = ((sig >> 1) & 1) ? B[1] : A[1];
                        const double* c3 = (sig & 1) ? B[2] : A[2];
                        const double* T = &tc[sig * P];
                        int q = 0;
                        for (int a = 0; a < P1; ++a)
                            for (int b = 0; b < P1; ++b) {
                                const double cab = c1[a] * c2[b];
                                const double* row = T + (a * P1 + b) * P1;
                                for (int cc = 0; cc < P1; ++cc, ++q)
                                    inner_acc[q] += cab * c3[cc] * row[cc];
                            }
                    }

                    if (has_triple) {
                        // three-plane sliver, subtracted directly
                        PieceSpec triple = make_piece(box, clip_mask);
                        if (!triple.empty) {
                            // evaluate in the reflected (canonical) frame:
                            // flipped dims read their factors at mirrored t
                            const uint8_t fm = triple.flip_mask;
                            clipped_ball_quadrature(
                                triple.box, f, cfg.radial_breaks,
                                cfg.quad.corner_order, cfg.quad.corner_order,
                                [&](const double t[3], double w) {
                                    double fac[3][8], cs[8], sn[8];
                                    for (int d = 0; d < 3; ++d) {
                                        const double td =
                                            (fm & (1 << d)) ? -t[d] : t[d];
                                        trig_ladder(c[d] - td + 0.5, P1, cs, sn);
                                        fac[d][0] = 1.0;
                                        for (int a = 1; a < P1; ++a)
                                            fac[d][a] = M_SQRT2 * cs[a];
                                    }
                                    int q = 0;
                                    for (int a = 0; a < P1; ++a)
                                        for (int b = 0; b < P1; ++b) {
                                            const double wab =
                                                w * fac[0][a] * fac[1][b];
                                            for (int cc = 0; cc < P1; ++cc, ++q)
                                                inner_acc[q] -= wab * fac[2][cc];
                                        }
                                });
                        }
                    }
                }
                if (!any) continue;
                int p = 0;
                for (int a = 0; a < P1; ++a)
                    for (int b = 0; b < P1; ++b) {
                        const double oab = of[a * N + i1] * of[b * N + i2];
                        for (int cc = 0; cc < P1; ++cc, ++p)
                            up[p] = oab * of[cc * N + i3];
                    }
                for (int pp = 0; pp < P; ++pp) {
                    const double wup = wx * up[pp];
                    if (wup == 0.0) continue;
                    double* row = &M[static_cast<size_t>(pp) * P];
                    for (int q = 0; q < P; ++q) row[q] += wup * inner_acc[q];
                }
            }
        }
        partial[i1] = std::move(M);
    });

    std::vector<double> M(static_cast<size_t>(P) * P, 0.0);
    for (const auto& part : partial)
        for (size_t i = 0; i < M.size(); ++i) M[i] += part[i];
    if (std::getenv("BOSEGAS_KERNEL_DEBUG")) {
        const auto tc1 = std::chrono::steady_clock::now();
        int n_wedge = 0;
        for (const auto& b : memo_boxes) n_wedge += b.clip_count == 2;
        std::fprintf(stderr,
                     "mirror_mode_matrix: %zu memo pieces (%d wedges), passB %.2f s, "
                     "passC %.2f s\n",
                     memo_boxes.size(), n_wedge,
                     std::chrono::duration<double>(tb1 - tb0).count(),
                     std::chrono::duration<double>(tc1 - tb1).count());
    }
    return M;
}

size_t lattice_index(const NeumannMode& m, int Q) {
    return (static_cast<size_t>(m.m[0]) * (Q + 1) + m.m[1]) * (Q + 1) + m.m[2];
}

}  // namespace

namespace detail {

double clipped_ball_integral(const Vec3& c, double support,
                             const std::function<double(double)>& f,
                             std::span<const double> radial_breaks, int radial_order,
                             int angular_order,
                             const std::function<double(const Vec3&)>& g) {
    ClippedBox box;
    if (!make_clipped_box(c, support, box)) return 0.0;
    double sum = 0.0;
    clipped_ball_quadrature(box, f, radial_breaks, radial_order, angular_order,
                            [&](const double t[3], double w) {
                                sum += w * g({t[0], t[1], t[2]});
                            });
    return sum;
}

}  // namespace detail

double neumann_coefficient(const std::function<double(double)>& f, double support,
                           const NeumannMode& p, const NeumannMode& q,
                           const BoxQuadrature& quad) {
    int Q = 0;
    for (int d = 0; d < 3; ++d) Q = std::max({Q, p.m[d], q.m[d]});
    MirrorMatrixConfig cfg{support, {0.5 * support}, quad};
    auto M = mirror_mode_matrix(f, cfg, Q);
    const int P = (Q + 1) * (Q + 1) * (Q + 1);
    return M[lattice_index(p, Q) * P + lattice_index(q, Q)];
}

ModeMatrixResult kernel_mode_matrix(const SymmetrizedKernel& kernel,
                                    const ModeLattice& lattice,
                                    const BoxQuadrature& quad, bool refine_check) {
    const ModifiedScattering& ms = kernel.ms();
    const int Q = lattice.cutoff();
    const double support = ms.lambda();
    MirrorMatrixConfig cfg{
        support,
        {ms.solution().range() / ms.ell(), 0.5 * support},
        quad};
    auto f = [&ms](double r) { return ms.omega_lambda(r); };

    auto assemble = [&](const BoxQuadrature& bq) {
        MirrorMatrixConfig c2 = cfg;
        c2.quad = bq;
        auto M = mirror_mode_matrix(f, c2, Q);
        // K = -n T_omega + n omega_hat(0) |u_0><u_0|.
        for (double& v : M) v *= -kernel.n();
        M[0] += kernel.k2();
        return M;
    };

    ModeMatrixResult res;
    res.modes = lattice.modes();
    const size_t P = res.modes.size();
    auto M = assemble(quad);

    res.stability = 0.0;
    if (refine_check) {
        auto M2 = assemble(quad.refined());
        for (size_t i = 0; i < M2.size(); ++i)
            res.stability = std::max(res.stability, std::abs(M2[i] - M[i]));
        M = std::move(M2);
    }

    res.matrix.assign(P * P, 0.0);
    res.expected.assign(P, 0.0);
    const int PQ = (Q + 1) * (Q + 1) * (Q + 1);
    for (size_t i = 0; i < P; ++i) {
        const size_t li = lattice_index(res.modes[i], Q);
        for (size_t j = 0; j < P; ++j)
            res.matrix[i * P + j] = M[li * PQ + lattice_index(res.modes[j], Q)];
        res.expected[i] = kernel.mode_coefficient(res.modes[i]);
    }
    for (size_t i = 0; i < P; ++i) {
        for (size_t j = 0; j < P; ++j) {
            if (i == j) continue;
            res.max_offdiag = std::max(res.max_offdiag, std::abs(res.at(i, j)));
        }
        const double expect = res.expected[i];
        if (expect != 0.0)
            res.max_diag_rel_err = std::max(
                res.max_diag_rel_err, std::abs(res.at(i, i) - expect) / std::abs(expect));
        else
            res.max_offdiag = std::max(res.max_offdiag, std::abs(res.at(i, i)));
    }
    return res;
}

namespace {

double boundary_function_impl(const SymmetrizedKernel& kernel,
                              const RadialPotential& V, const RadialPotential& Vl,
                              const Vec3& x) {
    const ModifiedScattering& ms = kernel.ms();
    const double ell = ms.ell();
    const double n = kernel.n();
    const double reach = V.range() / ell;

    double wall = 0.5;
    for (int d = 0; d < 3; ++d)
        wall = std::min({wall, 0.5 - std::abs(x[d])});

    double integral = 0.0;
    auto integrand = [&](const Vec3& t) {
        const double r = std::sqrt(t[0] * t[0] + t[1] * t[1] + t[2] * t[2]);
        if (r >= reach) return 0.0;
        const Vec3 y{x[0] - t[0], x[1] - t[1], x[2] - t[2]};
        return Vl(r) * (n + kernel.value(x, y));
    };

    if (wall >= reach) {
        // Ball fits inside the box: spherical rule, radial panels on the
        // rescaled sample breakpoints. Odd angular counts keep the rule free
        // of accidental parity exactness.
        std::vector<double> rb{0.0};
        for (double b : V.breakpoints())
            if (b / ell < reach) rb.push_back(b / ell);
        rb.push_back(reach);
        std::sort(rb.begin(), rb.end());
        rb.erase(std::unique(rb.begin(), rb.end()), rb.end());
        Grid1D rg = composite_grid(rb, 8);
        const GaussRule& ug = gauss_rule(7);
        const int nphi = 11;
        for (size_t ir = 0; ir < rg.size(); ++ir) {
            const double s = rg.x[ir];
            double shell = 0.0;
            for (int iu = 0; iu < 7; ++iu) {
                const double u = ug.nodes[iu];
                const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
                double ring = 0.0;
                for (int ip = 0; ip < nphi; ++ip) {
                    const double phi = 2.0 * M_PI * ip / nphi;
                    ring += integrand({s * su * std::cos(phi),
                                       s * su * std::sin(phi), s * u});
                }
                shell += ug.weights[iu] * ring * (2.0 * M_PI / nphi);
            }
            integral += rg.w[ir] * s * s * shell;
        }
    } else {
        // Clipped near the boundary: tensor rule over the intersection box.
        Grid1D g[3];
        for (int d = 0; d < 3; ++d) {
            const double lo = std::max(x[d] - 0.5, -reach);
            const double hi = std::min(x[d] + 0.5, reach);
            auto bp = make_breakpoints(lo, hi, 3, std::array<double, 1>{0.0});
            g[d] = composite_grid(bp, 5);
        }
        for (size_t i = 0; i < g[0].size(); ++i)
            for (size_t j = 0; j < g[1].size(); ++j)
                for (size_t k = 0; k < g[2].size(); ++k)
                    integral += g[0].w[i] * g[1].w[j] * g[2].w[k] *
                                integrand({g[0].x[i], g[1].x[j], g[2].x[k]});
    }
    return integral - 8.0 * M_PI * ms.a() * n / ell;
}

}  // namespace

double boundary_function(const SymmetrizedKernel& kernel, const RadialPotential& V,
                         const Vec3& x) {
    const RadialPotential Vl = V.rescaled(kernel.ms().ell());
    return boundary_function_impl(kernel, V, Vl, x);
}

BoundaryNorms boundary_h_norms(const SymmetrizedKernel& kernel,
                               const RadialPotential& V, int grid_order,
                               int interior_panels) {
    const ModifiedScattering& ms = kernel.ms();
    const RadialPotential Vl = V.rescaled(ms.ell());
    const double reach = V.range() / ms.ell();
    const double lam = ms.lambda();
    std::vector<double> bp{-0.5, -0.5 + reach, -0.5 + lam, 0.5 - lam, 0.5 - reach, 0.5};
    for (int i = 1; i < interior_panels; ++i)
        bp.push_back(-0.5 + lam + (1.0 - 2.0 * lam) * i / interior_panels);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    Grid1D g = composite_grid(bp, grid_order);
    const size_t N = g.size();

    BoundaryNorms norms;
    norms.center_value = boundary_function_impl(kernel, V, Vl, {0.0, 0.0, 0.0});
    std::vector<double> l1_part(N, 0.0), linf_part(N, 0.0);
    parallel_for(static_cast<int64_t>(N), [&](int64_t i) {
        double l1 = 0.0, linf = 0.0;
        for (size_t j = 0; j < N; ++j)
            for (size_t k = 0; k < N; ++k) {
                const double h =
                    boundary_function_impl(kernel, V, Vl, {g.x[i], g.x[j], g.x[k]});
                l1 += g.w[i] * g.w[j] * g.w[k] * std::abs(h);
                linf = std::max(linf, std::abs(h));
            }
        l1_part[i] = l1;
        linf_part[i] = linf;
    });
    for (size_t i = 0; i < N; ++i) {
        norms.l1 += l1_part[i];
        norms.linf = std::max(norms.linf, linf_part[i]);
    }
    return norms;
}

}  // namespace bosegas
