#include "turbilink/oam.hpp"

#include <cmath>
#include <numbers>

#include "turbilink/errors.hpp"

namespace turbilink {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct JointGrid {
    std::vector<double> joint;  // P(l, 0) for l = -L..L
    int nodes_u;
    int nodes_v;
};

// Trapezoid over u = phi_s - phi_i and v = phi_i. Both node counts are
// powers of two, so phi_s = u + v lands on the finer of the two grids and
// the double sum collapses to one DFT of a line of partial sums.
std::vector<std::complex<double>> collapsed_line(const RotationCharacteristic& chi, int nu, int nv) {
    const int n = std::max(nu, nv);
    const int su = n / nu;
    const int sv = n / nv;
    std::vector<std::complex<double>> line(n);
    for (int a = 0; a < nu; ++a) {
        const double u = kTwoPi * a / nu;
        for (int b = 0; b < nv; ++b) {
            const double v = kTwoPi * b / nv;
            line[(a * su + b * sv) % n] += chi(u + v, v);
        }
    }
    return line;
}

std::vector<double> spectrum_from_line(const std::vector<std::complex<double>>& line, int nu,
                                       int nv, int l_max) {
    const int n = static_cast<int>(line.size());
    std::vector<double> out(2 * l_max + 1);
    const double scale = 1.0 / (static_cast<double>(nu) * nv);
    for (int l = -l_max; l <= l_max; ++l) {
        double acc = 0.0;
        for (int c = 0; c < n; ++c) {
            const long long idx = (static_cast<long long>(l) * c) % n;
            const double ang = -kTwoPi * static_cast<double>(idx) / n;
            acc += line[c].real() * std::cos(ang) - line[c].imag() * std::sin(ang);
        }
        out[l + l_max] = acc * scale;
    }
    return out;
}

double max_change(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double idler_zero_probability(const RotationCharacteristic& chi, int start, int max_nodes) {
    auto mean = [&](int n) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < n; ++j) acc += chi(0.0, kTwoPi * j / n);
        return acc.real() / n;
    };
    int n = start;
    double prev = mean(n);
    while (n < max_nodes) {
        n *= 2;
        const double cur = mean(n);
        if (std::abs(cur - prev) <= 1e-14 * std::abs(cur)) return cur;
        prev = cur;
    }
    throw NumericalError("idler marginal did not converge", prev, 0.0);
}

}  // namespace

double OamSpectrum::total() const {
    double s = 0.0;
    for (double p : probabilities) s += p;
    return s;
}

double laguerre_poly(int p, double alpha, double x) {
    if (p < 0) throw DomainError("p", "must be >= 0");
    if (p > 300) throw DomainError("p", "must be <= 300");
    if (!(alpha >= 0.0)) throw DomainError("alpha", "must be >= 0");
    double prev = 1.0;
    if (p == 0) return prev;
    double cur = 1.0 + alpha - x;
    for (int n = 2; n <= p; ++n) {
        const double next = ((2.0 * n - 1.0 + alpha - x) * cur - (n - 1.0 + alpha) * prev) / n;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::complex<double> lg_mode(const LgIndex& index, double waist, double r, double theta) {
    if (!(waist > 0.0)) throw DomainError("waist", "must be > 0");
    if (index.p < 0) throw DomainError("p", "must be >= 0");
    const int al = std::abs(index.l);
    const double norm = std::sqrt(2.0 / std::numbers::pi *
                                  std::exp(std::lgamma(index.p + 1.0) - std::lgamma(index.p + al + 1.0))) /
                        waist;
    const double x = r / waist;
    const double radial = norm * std::pow(std::numbers::sqrt2 * x, al) *
                          laguerre_poly(index.p, al, 2.0 * x * x) * std::exp(-x * x);
    return std::polar(radial, index.l * theta);
}

RotationCharacteristic::RotationCharacteristic(const PropagatedMoments& m) {
    const Eigen::Matrix4cd q = axis_quadratic_form(m);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) q_[a][b] = q(a, b);
    root_det_origin_ = root_det(1, 0, 1, 0, 1, 0);
}

// With u = (x1s, x1i, x2s, x2i) and signal argument 1 rotated by phi_s,
// idler argument 1 by phi_i, the 4x4 Gaussian matrix over (signal, idler)
// positions is [[A I, B], [B^T, D I]] with B = bc I + bs J, J the 90 degree
// rotation. Its determinant is (A D - bc^2 - bs^2)^2, and the root taken
// here is the continuous branch that is positive for real forms.
std::complex<double> RotationCharacteristic::root_det(double cs, double ss, double ci, double si,
                                                      double cd, double sd) const {
    const auto& q = q_;
    const std::complex<double> a = q[0][0] + q[2][2] + 2.0 * q[0][2] * cs;
    const std::complex<double> d = q[1][1] + q[3][3] + 2.0 * q[1][3] * ci;
    const std::complex<double> bc = q[0][1] * cd + q[0][3] * cs + q[2][1] * ci + q[2][3];
    const std::complex<double> bs = q[0][1] * sd - q[0][3] * ss + q[2][1] * si;
    return a * d - bc * bc - bs * bs;
}

std::complex<double> RotationCharacteristic::operator()(double phi_s, double phi_i) const {
    const double dd = phi_i - phi_s;
    return root_det_origin_ / root_det(std::cos(phi_s), std::sin(phi_s), std::cos(phi_i),
                                       std::sin(phi_i), std::cos(dd), std::sin(dd));
}

OamSpectrum conditional_oam_distribution(const PropagatedMoments& m, const PhysicalSetup& setup,
                                         int l_max, double analysis_waist,
                                         const OamOptions& options) {
    (void)setup;
    if (l_max < 1) throw DomainError("l_max", "must be >= 1");
    if (!(analysis_waist > 0.0) || !std::isfinite(analysis_waist))
        throw DomainError("analysis_waist", "must be finite and > 0");
    const int n0 = options.initial_nodes;
    if (n0 < 8 || (n0 & (n0 - 1)) != 0) throw DomainError("initial_nodes", "must be a power of two >= 8");

    const RotationCharacteristic chi(m);
    int L = l_max;
    int nu = n0;
    int nv = n0;
    auto min_nodes = [&]() { return std::max(n0, 4 * L); };
    while (nu < min_nodes()) nu *= 2;
    while (nv < min_nodes()) nv *= 2;

    std::vector<double> joint;
    double error = 0.0;
    double idler_zero = 0.0;
    while (true) {
        // refine each angle separately until doubling it no longer matters
        while (true) {
            if (nu > options.max_nodes || nv > options.max_nodes)
                throw NumericalError("OAM angular grid did not converge", joint.empty() ? 0.0 : joint[L], error);
            const auto base = spectrum_from_line(collapsed_line(chi, nu, nv), nu, nv, L);
            const auto finer_u = spectrum_from_line(collapsed_line(chi, 2 * nu, nv), 2 * nu, nv, L);
            const auto finer_v = spectrum_from_line(collapsed_line(chi, nu, 2 * nv), nu, 2 * nv, L);
            const double du = max_change(base, finer_u);
            const double dv = max_change(base, finer_v);
            joint = base;
            error = du + dv;
            if (du <= options.tolerance && dv <= options.tolerance) break;
            if (du > options.tolerance) nu *= 2;
            if (dv > options.tolerance) nv *= 2;
        }
        idler_zero = idler_zero_probability(chi, std::max(nu, nv), options.max_nodes * 4);
        double sum = 0.0;
        for (double p : joint) sum += p;
        const double tail = 1.0 - sum / idler_zero;
        if (!options.grow_l_max || tail <= options.tail_target || 2 * L > options.l_max_limit) break;
        L *= 2;
        while (nu < min_nodes()) nu *= 2;
        while (nv < min_nodes()) nv *= 2;
    }

    OamSpectrum s;
    s.l_max = L;
    s.probabilities.resize(joint.size());
    for (std::size_t i = 0; i < joint.size(); ++i) {
        double p = joint[i] / idler_zero;
        if (p < 0.0) {
            if (p < -10.0 * options.tolerance)
                throw NumericalError("negative OAM probability", p, error);
            p = 0.0;
        }
        s.probabilities[i] = p;
    }
    s.tail_mass = 1.0 - s.total();
    if (L >= 2) {
        const double p2 = s.at(L - 2), p1 = s.at(L - 1), p0 = s.at(L);
        if (p0 > 0.0 && p0 < p1 && p1 < p2) {
            const double ratio = std::sqrt(p0 / p2);
            s.geometric_tail = 2.0 * p0 * ratio / (1.0 - ratio);
        }
    }
    s.joint_zero = joint[L];
    s.idler_zero = idler_zero;
    s.quadrature_error = error / idler_zero;
    s.nodes_u = nu;
    s.nodes_v = nv;
    s.analysis_waist = analysis_waist;
    s.z = m.z;
    if (s.tail_mass > options.tail_limit)
        throw TruncationError("OAM tail mass " + std::to_string(s.tail_mass) +
                                  " exceeds limit; increase l_max",
                              s.tail_mass);
    return s;
}

double conditional_oam_uncertainty(const OamSpectrum& spectrum) {
    const double total = spectrum.total();
    if (!(total > 0.0)) throw ConsistencyError("empty OAM spectrum");
    double mean = 0.0;
    double second = 0.0;
    for (int l = -spectrum.l_max; l <= spectrum.l_max; ++l) {
        const double p = spectrum.at(l) / total;
        mean += l * p;
        second += static_cast<double>(l) * l * p;
    }
    if (std::abs(mean) > 1e-6) throw ConsistencyError("OAM spectrum mean is not zero");
    return std::sqrt(std::max(0.0, second - mean * mean));
}

}  // namespace turbilink
