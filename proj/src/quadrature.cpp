#include "turbilink/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/legendre.hpp>

#include "turbilink/parallel.hpp"

namespace turbilink {

void QuadratureSpec::validate() const {
    if (nodes < 8) throw DomainError("nodes", "must be >= 8");
    if (!(rel_tol > 1e-14 && rel_tol < 1e-2)) throw DomainError("rel_tol", "must lie in (1e-14, 1e-2)");
    if (max_levels < 0) throw DomainError("max_levels", "must be >= 0");
    if (method == QuadratureMethod::mapped_gauss_legendre) {
        if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("scale", "must be finite and > 0");
    } else if (!(upper > lower) || !std::isfinite(lower) || !std::isfinite(upper)) {
        throw DomainError("interval", "requires finite lower < upper");
    }
}

const GaussRule& gauss_legendre_rule(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    if (n < 1) throw DomainError("nodes", "must be >= 1");
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) {
        auto rule = std::make_unique<GaussRule>();
        const std::vector<double> pos = boost::math::legendre_p_zeros<double>(n);
        auto weight = [n](double x) {
            const double dp = boost::math::legendre_p_prime<double>(n, x);
            return 2.0 / ((1.0 - x * x) * dp * dp);
        };
        // pos holds the non-negative roots in increasing order
        for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
            if (*it == 0.0) continue;
            rule->nodes.push_back(-*it);
            rule->weights.push_back(weight(*it));
        }
        for (double x : pos) {
            rule->nodes.push_back(x);
            rule->weights.push_back(weight(x));
        }
        slot = std::move(rule);
    }
    return *slot;
}

GaussRule axis_rule(const QuadratureSpec& spec, int nodes) {
    GaussRule out;
    out.nodes.resize(nodes);
    out.weights.resize(nodes);
    switch (spec.method) {
        case QuadratureMethod::periodic_trapezoid: {
            const double h = (spec.upper - spec.lower) / nodes;
            for (int j = 0; j < nodes; ++j) {
                out.nodes[j] = spec.lower + h * j;
                out.weights[j] = h;
            }
            break;
        }
        case QuadratureMethod::gauss_legendre: {
            const GaussRule& g = gauss_legendre_rule(nodes);
            const double half = 0.5 * (spec.upper - spec.lower);
            const double mid = 0.5 * (spec.upper + spec.lower);
            for (int j = 0; j < nodes; ++j) {
                out.nodes[j] = mid + half * g.nodes[j];
                out.weights[j] = half * g.weights[j];
            }
            break;
        }
        case QuadratureMethod::mapped_gauss_legendre: {
            const GaussRule& g = gauss_legendre_rule(nodes);
            for (int j = 0; j < nodes; ++j) {
                const double t = 0.5 * (g.nodes[j] + 1.0);
                const double u = 1.0 - t;
                out.nodes[j] = spec.scale * t / u;
                out.weights[j] = 0.5 * g.weights[j] * spec.scale / (u * u);
            }
            break;
        }
    }
    return out;
}

namespace {

std::complex<double> tensor_sum(const NdIntegrand& f, const std::vector<GaussRule>& rules,
                                int threads) {
    const std::size_t d = rules.size();
    const std::size_t outer = rules[0].nodes.size();
    std::vector<std::complex<double>> partial(outer);
    parallel_for(outer, threads, [&](std::size_t i0) {
        std::vector<double> x(d);
        std::vector<std::size_t> idx(d, 0);
        x[0] = rules[0].nodes[i0];
        const double w0 = rules[0].weights[i0];
        std::complex<double> acc = 0.0;
        if (d == 1) {
            partial[i0] = w0 * f(x);
            return;
        }
        while (true) {
            double w = w0;
            for (std::size_t a = 1; a < d; ++a) {
                x[a] = rules[a].nodes[idx[a]];
                w *= rules[a].weights[idx[a]];
            }
            acc += w * f(x);
            std::size_t a = d - 1;
            while (a >= 1 && ++idx[a] == rules[a].nodes.size()) {
                idx[a] = 0;
                --a;
            }
            if (a == 0) break;
        }
        partial[i0] = acc;
    });
    std::complex<double> total = 0.0;
    for (const auto& p : partial) total += p;
    return total;
}

// Factor tables of exp(E) for an at most quadratic exponent E on a tensor
// grid: E(x) = E(0) + sum_j s_j(x_j) + sum_{j<k} p_jk(x_j, x_k).
class QuadraticTables {
public:
    QuadraticTables(const QuadraticExponent& e, const std::vector<GaussRule>& rules) : rules_(rules) {
        const std::size_t d = rules.size();
        std::vector<double> x(d, 0.0);
        e0_ = e(x);
        single_.resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            const std::size_t n = rules[j].nodes.size();
            single_[j].resize(n);
            for (std::size_t a = 0; a < n; ++a) {
                x[j] = rules[j].nodes[a];
                single_[j][a] = e(x) - e0_;
            }
            x[j] = 0.0;
        }
        pair_.resize(d * d);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = j + 1; k < d; ++k) {
                const std::size_t nj = rules[j].nodes.size(), nk = rules[k].nodes.size();
                auto& t = pair_[j * d + k];
                t.resize(nj * nk);
                for (std::size_t a = 0; a < nj; ++a)
                    for (std::size_t b = 0; b < nk; ++b) {
                        x[j] = rules[j].nodes[a];
                        x[k] = rules[k].nodes[b];
                        t[a * nk + b] = e(x) - e0_ - single_[j][a] - single_[k][b];
                    }
                x[j] = x[k] = 0.0;
            }
        check(e);
        // exponentiate, folding the weights into the single-axis factors
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t a = 0; a < single_[j].size(); ++a)
                single_[j][a] = rules[j].weights[a] * std::exp(single_[j][a]);
        for (auto& t : pair_)
            for (auto& v : t) v = std::exp(v);
    }

    std::complex<double> sum(int threads) const {
        const std::size_t d = rules_.size();
        const std::size_t outer = rules_[0].nodes.size();
        std::vector<std::complex<double>> partial(outer);
        parallel_for(outer, threads, [&](std::size_t i0) {
            std::vector<std::size_t> idx(d, 0);
            idx[0] = i0;
            partial[i0] = single_[0][i0] * descend(1, idx);
        });
        std::complex<double> total = 0.0;
        for (const auto& p : partial) total += p;
        return std::exp(e0_) * total;
    }

private:
    // Sum over axes depth..d-1 with the earlier indices fixed.
    std::complex<double> descend(std::size_t depth, std::vector<std::size_t>& idx) const {
        const std::size_t d = rules_.size();
        if (depth == d) return 1.0;
        const std::size_t n = rules_[depth].nodes.size();
        std::complex<double> acc = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            std::complex<double> f = single_[depth][a];
            for (std::size_t j = 0; j < depth; ++j) f *= pair_[j * d + depth][idx[j] * n + a];
            if (depth + 1 < d) {
                idx[depth] = a;
                f *= descend(depth + 1, idx);
            }
            acc += f;
        }
        return acc;
    }

    // The decomposition is exact only for quadratics; spot-check it.
    void check(const QuadraticExponent& e) const {
        const std::size_t d = rules_.size();
        std::vector<double> x(d);
        for (int trial = 0; trial < 4; ++trial) {
            std::vector<std::size_t> idx(d);
            for (std::size_t j = 0; j < d; ++j) {
                const std::size_t n = rules_[j].nodes.size();
                idx[j] = (n * (2 * trial + 1) / 8 + j) % n;
                x[j] = rules_[j].nodes[idx[j]];
            }
            std::complex<double> rebuilt = e0_;
            for (std::size_t j = 0; j < d; ++j) {
                rebuilt += single_[j][idx[j]];
                for (std::size_t k = j + 1; k < d; ++k)
                    rebuilt += pair_[j * d + k][idx[j] * rules_[k].nodes.size() + idx[k]];
            }
            const std::complex<double> direct = e(x);
            if (std::abs(rebuilt - direct) > 1e-8 * (1.0 + std::abs(direct)))
                throw ConsistencyError("exponent is not quadratic in the integration variables");
        }
    }

    const std::vector<GaussRule>& rules_;
    std::complex<double> e0_;
    std::vector<std::vector<std::complex<double>>> single_;
    std::vector<std::vector<std::complex<double>>> pair_;
};

using TensorEval = std::function<std::complex<double>(const std::vector<GaussRule>&)>;

// Each level tries doubling every axis separately and keeps the doublings
// that moved the result.
NdResult refine_tensor(const TensorEval& sum, const std::vector<QuadratureSpec>& axes) {
    const std::size_t d = axes.size();
    if (d == 0 || d > 6) throw DomainError("axes", "dimension must be between 1 and 6");
    double rel_tol = 1.0;
    double abs_tol = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
        axes[a].validate();
        rel_tol = std::min(rel_tol, axes[a].rel_tol);
        abs_tol = a == 0 ? axes[a].abs_tol : std::min(abs_tol, axes[a].abs_tol);
    }

    std::map<std::vector<int>, std::complex<double>> cache;
    auto eval = [&](const std::vector<int>& n) {
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
        std::vector<GaussRule> rules;
        rules.reserve(d);
        for (std::size_t a = 0; a < d; ++a) rules.push_back(axis_rule(axes[a], n[a]));
        const std::complex<double> v = sum(rules);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericalError("tensor quadrature produced a non-finite value", v.real(), 0.0);
        cache.emplace(n, v);
        return v;
    };

    std::vector<int> n(d);
    std::vector<int> level(d, 0);
    for (std::size_t a = 0; a < d; ++a) n[a] = axes[a].nodes;

    while (true) {
        const std::complex<double> base = eval(n);
        std::vector<double> change(d);
        double total = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
            std::vector<int> m = n;
            m[a] *= 2;
            change[a] = std::abs(eval(m) - base);
            total += change[a];
        }
        const double scale = std::abs(base);
        if (total <= rel_tol * scale || total <= abs_tol) return {base, total, n};

        const double share = rel_tol * scale / static_cast<double>(d);
        bool refined = false;
        for (std::size_t a = 0; a < d; ++a) {
            if (change[a] <= share) continue;
            if (level[a] >= axes[a].max_levels)
                throw NumericalError("tensor quadrature did not converge", base.real(), total);
            n[a] *= 2;
            ++level[a];
            refined = true;
        }
        if (!refined) return {base, total, n};
    }
}

}  // namespace

NdResult integrate_nd(const NdIntegrand& f, const std::vector<QuadratureSpec>& axes, int threads) {
    return refine_tensor([&](const std::vector<GaussRule>& rules) { return tensor_sum(f, rules, threads); },
                         axes);
}

NdResult integrate_nd_gaussian(const QuadraticExponent& exponent, const std::vector<QuadratureSpec>& axes,
                               int threads) {
    return refine_tensor(
        [&](const std::vector<GaussRule>& rules) { return QuadraticTables(exponent, rules).sum(threads); },
        axes);
}

GaussRule gauss_hermite_rule(int n) {
    if (n < 1) throw DomainError("nodes", "must be >= 1");
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) jacobi(i, i - 1) = jacobi(i - 1, i) = std::sqrt(0.5 * i);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    GaussRule out;
    out.nodes.resize(n);
    out.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        out.nodes[i] = solver.eigenvalues()(i);
        const double v = solver.eigenvectors()(0, i);
        out.weights[i] = std::sqrt(std::numbers::pi) * v * v;
    }
    return out;
}

}  // namespace turbilink
