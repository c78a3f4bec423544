#include "turbilink/oracle.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "turbilink/errors.hpp"
#include "turbilink/oam.hpp"
#include "turbilink/parallel.hpp"
#include "turbilink/quadrature.hpp"

namespace turbilink::oracle {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 0.70710678118654752440;

QuadratureSpec box_axis(double half_width, int nodes, double rel_tol, int max_levels) {
    QuadratureSpec s;
    s.method = QuadratureMethod::gauss_legendre;
    s.lower = -half_width;
    s.upper = half_width;
    s.nodes = nodes;
    s.rel_tol = rel_tol;
    s.max_levels = max_levels;
    return s;
}

// Gauss-Hermite abscissa scale for a basis of waist w: exp(-t^2) = exp(-2 x^2 / w^2).
double waist_scale(double waist) { return waist / std::numbers::sqrt2; }

// Orthonormal Hermite functions u_n(x) with waist w, n < count, on the given points.
std::vector<std::vector<double>> hermite_functions(int count, double waist, const std::vector<double>& x) {
    std::vector<std::vector<double>> u(count, std::vector<double>(x.size()));
    const double scale = std::sqrt(std::numbers::sqrt2 / waist) * std::pow(kPi, -0.25);
    for (std::size_t g = 0; g < x.size(); ++g) {
        const double xi = std::numbers::sqrt2 * x[g] / waist;
        double prev = 0.0;
        double cur = scale * std::exp(-0.5 * xi * xi);
        for (int n = 0; n < count; ++n) {
            u[n][g] = cur;
            const double next = std::sqrt(2.0 / (n + 1)) * xi * cur - std::sqrt(static_cast<double>(n) / (n + 1)) * prev;
            prev = cur;
            cur = next;
        }
    }
    return u;
}

}  // namespace

double input_axis_kernel(const PhysicalSetup& setup, double x1s, double x1i, double x2s, double x2i) {
    const double ap = setup.collimated_sum_waist();
    const double am = setup.collimated_diff_waist();
    auto psi = [&](double s, double i) {
        const double p = (s + i) * kInvSqrt2;
        const double m = (s - i) * kInvSqrt2;
        return std::exp(-p * p / (2 * ap * ap) - m * m / (2 * am * am)) / std::sqrt(kPi * ap * am);
    };
    return psi(x1s, x1i) * psi(x2s, x2i);
}

std::complex<double> brute_force_axis(const PhysicalSetup& setup, const TurbulenceChannel& channel,
                                      double z, double x1s, double x1i, double x2s, double x2i,
                                      const BruteForceOptions& options) {
    if (!(z > 0.0)) throw DomainError("z", "must be > 0");
    const double k = setup.wavenumber();
    const double ap = setup.collimated_sum_waist();
    const double am = setup.collimated_diff_waist();
    const ExtendedReal rho0 = coherence_length(channel, setup, z);
    const double inv_rho2 = rho0.reciprocal() * rho0.reciprocal();
    const double norm = 1.0 / (kPi * ap * am);
    const double pref = k / (2.0 * kPi * z);
    const double kz = k / (2.0 * z);
    const bool contour = k * ap * ap / z >= options.contour_fresnel && k * am * am / z >= options.contour_fresnel;

    auto turbulence = [&](cplx src, double obs) { return src * src + src * obs + obs * obs; };
    QuadraticExponent f;
    std::vector<QuadratureSpec> axes;
    if (!contour) {
        f = [&](std::span<const double> v) {
            const double s1 = (v[0] + v[1]) * kInvSqrt2, i1 = (v[0] - v[1]) * kInvSqrt2;
            const double s2 = (v[2] + v[3]) * kInvSqrt2, i2 = (v[2] - v[3]) * kInvSqrt2;
            const double re = -(v[0] * v[0] + v[2] * v[2]) / (2 * ap * ap) -
                              (v[1] * v[1] + v[3] * v[3]) / (2 * am * am) -
                              inv_rho2 * (turbulence(s1 - s2, x1s - x2s).real() +
                                          turbulence(i1 - i2, x1i - x2i).real());
            const double a = x2s - s2, b = x2i - i2, c = x1s - s1, d = x1i - i1;
            const double im = kz * (a * a + b * b - c * c - d * d);
            return cplx(re, im);
        };
        axes = {box_axis(options.box * ap, options.nodes, options.rel_tol, options.max_levels),
                box_axis(options.box * am, options.nodes, options.rel_tol, options.max_levels),
                box_axis(options.box * ap, options.nodes, options.rel_tol, options.max_levels),
                box_axis(options.box * am, options.nodes, options.rel_tol, options.max_levels)};
    } else {
        // Source points moved onto x_obs + exp(-+ i pi/4) t; the Fresnel
        // phases become real Gaussians exp(-k t^2 / 2z) and the Jacobians cancel.
        const cplx down = std::polar(1.0, -0.25 * kPi);
        const cplx up = std::polar(1.0, 0.25 * kPi);
        f = [&, down, up](std::span<const double> v) {
            const cplx s1 = x1s + down * v[0], i1 = x1i + down * v[1];
            const cplx s2 = x2s + up * v[2], i2 = x2i + up * v[3];
            const cplx p1 = (s1 + i1) * kInvSqrt2, m1 = (s1 - i1) * kInvSqrt2;
            const cplx p2 = (s2 + i2) * kInvSqrt2, m2 = (s2 - i2) * kInvSqrt2;
            const cplx e = -(p1 * p1 + p2 * p2) / (2 * ap * ap) - (m1 * m1 + m2 * m2) / (2 * am * am) -
                           inv_rho2 * (turbulence(s1 - s2, x1s - x2s) + turbulence(i1 - i2, x1i - x2i)) -
                           kz * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
            return e;
        };
        const double t = options.box * std::sqrt(z / k);
        axes.assign(4, box_axis(t, options.nodes, options.rel_tol, options.max_levels));
    }
    const NdResult r = integrate_nd_gaussian(f, axes, options.threads);
    return norm * pref * pref * r.value;
}

std::complex<double> brute_force_w2(const PhysicalSetup& setup, const TurbulenceChannel& channel,
                                    double z, const BiphotonCoords& c, const BruteForceOptions& options) {
    return brute_force_axis(setup, channel, z, c.signal1.x(), c.idler1.x(), c.signal2.x(), c.idler2.x(), options) *
           brute_force_axis(setup, channel, z, c.signal1.y(), c.idler1.y(), c.signal2.y(), c.idler2.y(), options);
}

RadialFunction matched_test_function(int l, double waist) {
    const int power = 2 * std::abs(l) + 1;
    return [power, waist](double r) {
        const double x = r / waist;
        return std::pow(r, power) * (std::exp(-1.5 * x * x) + std::exp(-12.0 * x * x));
    };
}

IdentityReport verify_identity(int l, double waist, const RadialFunction& g, int p_max, int nodes) {
    if (p_max < 0 || p_max > 300) throw DomainError("p_max", "must lie in [0, 300]");
    if (!(waist > 0.0)) throw DomainError("waist", "must be > 0");
    const int al = std::abs(l);
    const GaussRule& rule = gauss_legendre_rule(nodes);
    const double upper = 8.0 * waist;
    const std::size_t n = rule.nodes.size();
    std::vector<double> r(n), wr(n), gv(n), x(n);
    IdentityReport rep;
    rep.l = l;
    rep.waist = waist;
    double rhs = 0.0;
    const double w2 = waist * waist;
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = 0.5 * (rule.nodes[i] + 1.0) * upper;
        wr[i] = 0.5 * rule.weights[i] * upper;
        gv[i] = g(r[i]);
        x[i] = 2.0 * r[i] * r[i] / w2;
        rhs += wr[i] * (w2 / (2 * kPi * r[i])) * std::pow(w2 / (2 * r[i] * r[i]), al) *
               std::exp(x[i]) * gv[i] * gv[i];
    }
    rep.collapsed = rhs;
    // Laguerre values advanced in p for all nodes at once
    std::vector<double> prev(n, 0.0), cur(n, 1.0);
    double acc = 0.0;
    for (int p = 0; p <= p_max; ++p) {
        if (p == 1) {
            for (std::size_t i = 0; i < n; ++i) {
                prev[i] = 1.0;
                cur[i] = 1.0 + al - x[i];
            }
        } else if (p >= 2) {
            for (std::size_t i = 0; i < n; ++i) {
                const double next = ((2.0 * p - 1.0 + al - x[i]) * cur[i] - (p - 1.0 + al) * prev[i]) / p;
                prev[i] = cur[i];
                cur[i] = next;
            }
        }
        double overlap = 0.0;
        for (std::size_t i = 0; i < n; ++i) overlap += wr[i] * cur[i] * gv[i];
        const double c = 2.0 / kPi * std::exp(std::lgamma(p + 1.0) - std::lgamma(p + al + 1.0));
        acc += c * overlap * overlap;
        rep.truncated.push_back(acc);
        rep.rel_error.push_back(std::abs(acc - rhs) / std::abs(rhs));
    }
    return rep;
}

double full_oam_check(const PhysicalSetup& setup, const TurbulenceChannel& channel, double z,
                      int l_s, int p_truncation, const FullOamOptions& options) {
    if (p_truncation < 0 || p_truncation > 40) throw DomainError("p_truncation", "must lie in [0, 40]");
    if (options.nodes < 8 || options.nodes > 32) throw DomainError("nodes", "must lie in [8, 32]");
    const PropagatedMoments m = propagated_moments(setup, channel, z);
    const double wa = options.analysis_waist > 0.0 ? options.analysis_waist
                                                   : std::sqrt(0.5 * (m.w * m.w + m.sigma * m.sigma));
    const int al = std::abs(l_s);
    const int nb = 2 * p_truncation + al + 1;  // Hermite orders 0..nb-1
    const int G = options.nodes;

    // Gauss-Hermite grid matched to the basis Gaussian
    const GaussRule gh = gauss_hermite_rule(G);
    std::vector<double> x(G), wx(G);
    for (int g = 0; g < G; ++g) {
        x[g] = waist_scale(wa) * gh.nodes[g];
        wx[g] = gh.weights[g] * waist_scale(wa) * std::exp(gh.nodes[g] * gh.nodes[g]);
    }
    const auto u = hermite_functions(nb, wa, x);

    double phase_rate = 0.0;
    if (options.compensate_curvature) {
        auto rate = [&](const ExtendedReal& r2) { return r2.is_infinite() ? 0.0 : m.wavenumber / (2.0 * r2.value()); };
        phase_rate = 0.5 * (rate(m.r_plus_sq) + rate(m.r_minus_sq));
    }

    // T[c][d][a][b] = int u_c(x1s) u_d(x1i) W(x1s, x1i; x2s, x2i) u_a(x2s) u_b(x2i)
    const std::size_t G2 = static_cast<std::size_t>(G) * G, G3 = G2 * G;
    std::vector<cplx> w(G3 * G);
    for (int a = 0; a < G; ++a)
        for (int b = 0; b < G; ++b)
            for (int c = 0; c < G; ++c)
                for (int d = 0; d < G; ++d) {
                    cplx v = axis_kernel(m, x[a], x[b], x[c], x[d]);
                    if (phase_rate != 0.0)
                        v *= std::polar(1.0, -phase_rate * (x[c] * x[c] + x[d] * x[d] - x[a] * x[a] - x[b] * x[b]));
                    w[((a * G + b) * G + c) * G + d] = v * (wx[a] * wx[b] * wx[c] * wx[d]);
                }
    // contract the last grid index with u, rotating it to the front each time
    std::vector<cplx> t = std::move(w);
    std::size_t dims[4] = {static_cast<std::size_t>(G), static_cast<std::size_t>(G),
                           static_cast<std::size_t>(G), static_cast<std::size_t>(G)};
    for (int step = 0; step < 4; ++step) {
        const std::size_t rest = dims[0] * dims[1] * dims[2];
        const std::size_t last = dims[3];
        std::vector<cplx> out(static_cast<std::size_t>(nb) * rest);
        for (int o = 0; o < nb; ++o)
            for (std::size_t r = 0; r < rest; ++r) {
                cplx acc = 0.0;
                const cplx* row = &t[r * last];
                for (std::size_t g = 0; g < last; ++g) acc += row[g] * u[o][g];
                out[o * rest + r] = acc;
            }
        t = std::move(out);
        dims[3] = dims[2];
        dims[2] = dims[1];
        dims[1] = dims[0];
        dims[0] = static_cast<std::size_t>(nb);
    }
    // four rotations restore the original order: [x1s][x1i][x2s][x2i]
    const std::size_t nn = nb;
    auto T = [&](int c, int d, int a, int b) { return t[((c * nn + d) * nn + a) * nn + b]; };

    // Laguerre-Gauss to Hermite-Gauss coefficients by exact Gauss-Hermite quadrature
    const int nq = nb + 8;
    const GaussRule ghq = gauss_hermite_rule(nq);
    std::vector<double> xq(nq), wq(nq);
    for (int g = 0; g < nq; ++g) {
        xq[g] = waist_scale(wa) * ghq.nodes[g];
        wq[g] = ghq.weights[g] * waist_scale(wa) * std::exp(ghq.nodes[g] * ghq.nodes[g]);
    }
    const auto uq = hermite_functions(nb, wa, xq);
    struct Entry {
        int ax, ay, cx, cy;
        cplx value;
    };
    auto projector = [&](int l) {
        std::vector<Entry> entries;
        for (int p = 0; 2 * p + std::abs(l) < nb && p <= p_truncation; ++p) {
            const int order = 2 * p + std::abs(l);
            std::vector<cplx> coef(order + 1);
            for (int nx = 0; nx <= order; ++nx) {
                const int ny = order - nx;
                cplx acc = 0.0;
                for (int gx = 0; gx < nq; ++gx)
                    for (int gy = 0; gy < nq; ++gy) {
                        const double r = std::hypot(xq[gx], xq[gy]);
                        const double th = std::atan2(xq[gy], xq[gx]);
                        acc += wq[gx] * wq[gy] * uq[nx][gx] * uq[ny][gy] * lg_mode({l, p}, wa, r, th);
                    }
                coef[nx] = acc;
            }
            for (int a = 0; a <= order; ++a)
                for (int c = 0; c <= order; ++c)
                    entries.push_back({a, order - a, c, order - c, std::conj(coef[a]) * coef[c]});
        }
        return entries;
    };
    const auto As = projector(l_s);
    const auto Ai = projector(0);

    // P = sum As[ax,ay,cx,cy] Ai[bx,by,dx,dy] Tx[cx,dx,ax,bx] Ty[cy,dy,ay,by]
    std::vector<cplx> X(static_cast<std::size_t>(nb) * nb * nb * nb);  // [ay][cy][dx][bx]
    for (const Entry& e : As)
        for (int dx = 0; dx < nb; ++dx)
            for (int bx = 0; bx < nb; ++bx)
                X[((e.ay * nb + e.cy) * nb + dx) * nb + bx] += e.value * T(e.cx, dx, e.ax, bx);
    cplx total = 0.0;
    for (const Entry& e : Ai) {
        const int bx = e.ax, by = e.ay, dx = e.cx, dy = e.cy;
        cplx acc = 0.0;
        for (int ay = 0; ay < nb; ++ay)
            for (int cy = 0; cy < nb; ++cy) acc += X[((ay * nb + cy) * nb + dx) * nb + bx] * T(cy, dy, ay, by);
        total += e.value * acc;
    }
    return total.real();
}

double trace_purity_check(const PhysicalSetup& setup, const TurbulenceChannel& channel, double z, int nodes) {
    const PropagatedMoments m = propagated_moments(setup, channel, z);
    // (sum, difference) of the two kernel arguments for each decoupled mode
    auto widths = [](const ModeParameters& p) {
        return std::pair{std::sqrt(p.width_sq / 2.0), 1.0 / std::sqrt(2.0 * (1.0 / p.width_sq + 4.0 * p.inv_coupling_sq))};
    };
    const auto [sp, dp] = widths(m.sum_mode());
    const auto [sm, dm] = widths(m.diff_mode());
    const double box = 9.0;
    std::vector<QuadratureSpec> axes = {box_axis(box * sp, nodes, 1e-10, 3), box_axis(box * dp, nodes, 1e-10, 3),
                                        box_axis(box * sm, nodes, 1e-10, 3), box_axis(box * dm, nodes, 1e-10, 3)};
    auto f = [&](std::span<const double> v) {
        const double p1 = (v[0] - v[1]) * kInvSqrt2, p2 = (v[0] + v[1]) * kInvSqrt2;
        const double m1 = (v[2] - v[3]) * kInvSqrt2, m2 = (v[2] + v[3]) * kInvSqrt2;
        const cplx k = axis_kernel(m, (p1 + m1) * kInvSqrt2, (p1 - m1) * kInvSqrt2, (p2 + m2) * kInvSqrt2,
                                   (p2 - m2) * kInvSqrt2);
        return cplx(std::norm(k), 0.0);
    };
    const double per_axis = integrate_nd(f, axes).value.real();
    return per_axis * per_axis;
}

std::vector<double> literal_oam_joint(const PropagatedMoments& m, int l_max, int radial_nodes, int angle_nodes,
                                      int threads) {
    QuadratureSpec radial;
    radial.scale = 3.0 * std::max(m.w, m.sigma);
    radial.nodes = radial_nodes;
    const GaussRule rr = axis_rule(radial, radial_nodes);
    const int N = angle_nodes;
    std::vector<double> cs(N), sn(N);
    for (int j = 0; j < N; ++j) {
        cs[j] = std::cos(2 * kPi * j / N);
        sn[j] = std::sin(2 * kPi * j / N);
    }
    const std::size_t R = rr.nodes.size();
    std::vector<std::vector<cplx>> rows(R, std::vector<cplx>(l_max + 1));
    parallel_for(R, threads, [&](std::size_t is) {
        const double rs = rr.nodes[is];
        for (std::size_t ii = 0; ii < R; ++ii) {
            const double ri = rr.nodes[ii];
            std::vector<cplx> by_b(N);
            // theta_1s = 0 (global rotation removed); A = theta_1i, B = theta_2s, C = theta_2i
            for (int A = 0; A < N; ++A)
                for (int B = 0; B < N; ++B) {
                    cplx acc = 0.0;
                    for (int C = 0; C < N; ++C) {
                        BiphotonCoords c;
                        c.signal1 = {rs, 0.0};
                        c.idler1 = {ri * cs[A], ri * sn[A]};
                        c.signal2 = {rs * cs[B], rs * sn[B]};
                        c.idler2 = {ri * cs[C], ri * sn[C]};
                        acc += cross_spectral_density(m, c);
                    }
                    by_b[B] += acc;
                }
            const double wgt = rr.weights[is] * rr.weights[ii] * rs * ri;
            for (int l = 0; l <= l_max; ++l) {
                cplx acc = 0.0;
                for (int B = 0; B < N; ++B) acc += by_b[B] * std::polar(1.0, 2 * kPi * l * B / N);
                rows[is][l] += wgt * acc;
            }
        }
    });
    std::vector<double> out(l_max + 1);
    const double h = 2 * kPi / N;
    for (int l = 0; l <= l_max; ++l) {
        cplx acc = 0.0;
        for (std::size_t is = 0; is < R; ++is) acc += rows[is][l];
        // three trapezoid sums, 2 pi for the removed rotation, 1/(4 pi^2) overall
        out[l] = (acc * h * h * h * (2 * kPi) / (4 * kPi * kPi)).real();
    }
    return out;
}

double angle_pdf_closed_form(double kappa) {
    if (!(kappa > -1.0 && kappa < 1.0)) throw DomainError("kappa", "must lie in (-1, 1)");
    const double q = 1.0 - kappa * kappa;
    return 1.0 / q + kappa * (0.5 * kPi + std::asin(kappa)) / (q * std::sqrt(q));
}

double joint_angle_pdf_reference(const PropagatedMoments& m, double theta_s, double theta_i) {
    const double iw = 1.0 / (2.0 * m.w * m.w);
    const double is = 1.0 / (2.0 * m.sigma * m.sigma);
    const double a = iw + is;
    const double fc = (m.w * m.w - m.sigma * m.sigma) / (m.w * m.w + m.sigma * m.sigma);
    return angle_pdf_closed_form(fc * std::cos(theta_s - theta_i)) / (4.0 * a * a);
}

AngleStatsReference angle_stats_reference(const PropagatedMoments& m) {
    const double center = m.w >= m.sigma ? 0.0 : kPi;
    auto pdf = [&](double t) { return joint_angle_pdf_reference(m, center + t, 0.0); };
    boost::math::quadrature::tanh_sinh<double> ts;
    const double half_norm = ts.integrate(pdf, 0.0, kPi, 1e-13);
    const double half_second = ts.integrate([&](double t) { return t * t * pdf(t); }, 0.0, kPi, 1e-13);
    return {std::sqrt(half_second / half_norm), pdf(kPi) / (2.0 * half_norm)};
}

FreeSpaceMoments free_space_reference(const PhysicalSetup& setup, double z) {
    const double k = setup.wavenumber();
    auto width = [&](double a) {
        const double zr = k * a * a;  // Rayleigh-type range of the collimated width
        return a * std::sqrt(1.0 + (z / zr) * (z / zr));
    };
    auto curvature_sq = [&](double a) {
        const double zr = k * a * a;
        return z == 0.0 ? ExtendedReal::infinite() : ExtendedReal::finite(z + zr * zr / z);
    };
    const double ap = setup.collimated_sum_waist();
    const double am = setup.collimated_diff_waist();
    return {width(ap), width(am), curvature_sq(ap), curvature_sq(am)};
}

double laguerre_series(int p, double alpha, double x) {
    // sum_k (-1)^k C(p + alpha, p - k) x^k / k!; alternating, so only
    // trustworthy while the largest term stays modest (small p and x)
    long double sum = 0.0L;
    for (int k = 0; k <= p; ++k) {
        const long double binom = std::exp(std::lgamma(p + alpha + 1.0L) - std::lgamma(p - k + 1.0L) -
                                           std::lgamma(alpha + k + 1.0L));
        sum += (k % 2 ? -1.0L : 1.0L) * binom * std::pow(static_cast<long double>(x), k) / std::tgamma(k + 1.0L);
    }
    return static_cast<double>(sum);
}

}  // namespace turbilink::oracle
