#include "rlsc/analytic_nrlsc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rlsc/errors.hpp"

namespace rlsc {

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& A, int e) {
    require(e >= 0, "matrix_power: negative exponent");
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(A.rows(), A.cols());
    Eigen::MatrixXd base = A;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

namespace {

struct Pieces {
    Eigen::MatrixXd Tp;       // T_{zeta-1}
    Eigen::MatrixXd X;        // T_{zeta-1} Gphiphi
    Eigen::MatrixXd M;
    Eigen::VectorXd phi0;     // T_{zeta-1} [Gphi0 stacked]
    Eigen::VectorXd phiz;     // T_{zeta-1} [Gphiz stacked]
    double condition = 1.0;
};

Pieces pieces(const DebtChain& c) {
    Pieces p;
    const int w = c.L() * (c.zeta() - 1);
    p.Tp = c.T(c.zeta() - 1);
    p.X = p.Tp * c.gphiphi();
    p.M = solve_resolvent(p.X, Eigen::MatrixXd::Identity(w, w), &p.condition);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(c.L());
    p.phi0 = p.Tp * c.gphi0() * ones;
    p.phiz = p.Tp * c.gphiz() * ones;
    return p;
}

void check_pi(const DebtChain& c, const Eigen::VectorXd& pi0) {
    require(pi0.size() == c.L(), "pi0 size must equal the number of states");
}

} // namespace

double expected_interval(const DebtChain& c, const Eigen::VectorXd& pi0) {
    check_pi(c, pi0);
    const Eigen::MatrixXd Tz = c.T(c.zeta());
    const Eigen::VectorXd visits = solve_resolvent(Tz * c.Q(), Eigen::VectorXd::Ones(c.L() * c.zeta()));
    return 1.0 + (pi0.transpose() * c.gs() * visits)(0);
}

double expected_lg(const DebtChain& c, const Eigen::VectorXd& pi0, int delta) {
    check_pi(c, pi0);
    require(delta >= 0, "expected_lg: delta must be >= 0");
    const Pieces p = pieces(c);
    // sum_{k >= delta + 2} (k - delta - 1) X^(k-2) = M^2 X^delta
    const Eigen::VectorXd v = p.M * (p.M * (matrix_power(p.X, delta) * p.phi0));
    return (pi0.transpose() * c.g0phi() * v)(0);
}

AnalyticTerms nrlsc_terms(const DebtChain& c, const Eigen::VectorXd& pi0, int delta, int alpha) {
    check_pi(c, pi0);
    require(delta >= 0, "nrlsc: delta must be >= 0");
    require(alpha == c.alpha(), "nrlsc: alpha differs from the chain's alpha");
    AnalyticTerms t;
    const Pieces p = pieces(c);
    t.M = p.M;
    t.condition = p.condition;
    t.psi = std::max(0, delta - alpha - 1);

    t.E_interval = expected_interval(c, pi0);
    t.E_LG = expected_lg(c, pi0, delta);

    const RenewalMatrices r = renewal_transition_matrices(c);
    t.condition = std::max(t.condition, r.condition);
    const Eigen::MatrixXd MM = p.M * p.M + p.M;
    t.m = c.gzz() + c.gzphi() * (MM * p.phiz);
    t.n = c.g0z() + c.g0phi() * (MM * p.phiz);
    const Eigen::MatrixXd tail = p.M * p.M + static_cast<double>(alpha + t.psi - delta) * p.M;
    t.b = -static_cast<double>(std::min(delta, alpha)) * c.gz0() -
          static_cast<double>(alpha) * c.gzphi() * (p.M * p.phi0) +
          c.gzphi() * (tail * (matrix_power(p.X, t.psi) * p.phi0));

    const Eigen::MatrixXd R = r.T0z * solve_resolvent(r.Tzz, Eigen::MatrixXd::Identity(c.L(), c.L()), &t.condition);
    t.E_LB1 = pi0.dot(R * t.m + t.n);
    t.E_LB2 = pi0.dot(R * t.b);

    const double pe = (t.E_LG + t.E_LB1 + t.E_LB2) / t.E_interval;
    if (!(pe >= -1e-9 && pe <= 1.0 + 1e-9)) {
        std::ostringstream os;
        os.precision(17);
        os << "nrlsc: p_e = " << pe << " outside [0, 1] (E_interval=" << t.E_interval << ", E_LG=" << t.E_LG
           << ", E_LB1=" << t.E_LB1 << ", E_LB2=" << t.E_LB2 << ")";
        throw NumericalError(os.str());
    }
    t.pe = std::clamp(pe, 0.0, 1.0);
    return t;
}

double expected_lb1(const DebtChain& c, const Eigen::VectorXd& pi0) {
    return nrlsc_terms(c, pi0, 0, c.alpha()).E_LB1;
}

double expected_lb2(const DebtChain& c, const Eigen::VectorXd& pi0, int delta, int alpha) {
    return nrlsc_terms(c, pi0, delta, alpha).E_LB2;
}

double pe_nrlsc(const DebtChain& c, const Eigen::VectorXd& pi0, int delta, int alpha) {
    return nrlsc_terms(c, pi0, delta, alpha).pe;
}

OracleStats oracle_cycle_statistics(const DebtChain& c, const Eigen::VectorXd& pi0, int delta, int alpha,
                                    int k_max) {
    check_pi(c, pi0);
    const int L = c.L();
    const int z = c.zeta();
    const bool adaptive = k_max <= 0;
    const int horizon = adaptive ? 100000 : k_max;
    const double stop_mass = adaptive ? 1e-12 : 0.0;

    OracleStats out;
    out.restart = Eigen::MatrixXd::Zero(L, L);

    // Per origin state s0 (state of the cycle's first slot): mass[(d-1)*L + s][h]
    // where h is the latest ceiling-hit slot (0: none) and s the current state.
    for (int s0 = 0; s0 < L; ++s0) {
        if (pi0(s0) == 0.0) continue;
        auto finish = [&](int len, int h, int s, double w) {
            // Error slots are 0 < t < bound.
            const int bound = h == 0 ? len - delta : std::max(h - alpha + 1, len - delta);
            const int errors = std::max(0, bound - 1);
            out.mass += w;
            out.E_interval += w * len;
            out.E_errors += w * errors;
            if (h == 0) {
                out.E_LG += w * std::max(0, len - delta - 1);
            } else {
                out.E_LB1 += w * h;
                out.E_LB2 += w * std::max(-alpha, len - delta - 1 - h);
            }
            for (int u = 0; u < L; ++u) out.restart(s0, u) += w * c.T1()(s, u) / pi0(s0);
        };

        std::vector<std::vector<double>> mass(static_cast<std::size_t>(z) * L, std::vector<double>(2, 0.0));
        const Eigen::MatrixXd& g0 = c.gamma(s0);
        finish(1, 0, s0, pi0(s0) * g0(0, 0));
        for (int d = 1; d <= z; ++d) mass[(d - 1) * L + s0][d == z ? 1 : 0] += pi0(s0) * g0(0, d);

        for (int len = 2; len <= horizon; ++len) {
            std::vector<std::vector<double>> next(mass.size(), std::vector<double>(len + 1, 0.0));
            double live = 0.0;
            for (int d = 1; d <= z; ++d)
                for (int s = 0; s < L; ++s) {
                    const auto& row = mass[(d - 1) * L + s];
                    for (int h = 0; h < static_cast<int>(row.size()); ++h) {
                        const double w = row[h];
                        if (w == 0.0) continue;
                        for (int u = 0; u < L; ++u) {
                            const double tu = c.T1()(s, u);
                            if (tu == 0.0) continue;
                            const Eigen::MatrixXd& g = c.gamma(u);
                            for (int e = 0; e <= z; ++e) {
                                const double pr = w * tu * g(d, e);
                                if (pr == 0.0) continue;
                                if (e == 0) {
                                    finish(len, h, u, pr);
                                } else {
                                    next[(e - 1) * L + u][e == z ? len : h] += pr;
                                    live += pr;
                                }
                            }
                        }
                    }
                }
            mass.swap(next);
            out.horizon = std::max(out.horizon, len);
            if (live <= stop_mass * pi0(s0)) break;
        }
    }
    const double pending = 1.0 - out.mass;
    if (pending > 1e-8)
        throw ContractError("pe_oracle_small: unresolved path mass " + std::to_string(pending) +
                            " exceeds 1e-8; raise k_max");
    return out;
}

double pe_oracle_small(const DebtChain& c, const Eigen::VectorXd& pi0, int delta, int alpha, int k_max) {
    const OracleStats s = oracle_cycle_statistics(c, pi0, delta, alpha, k_max);
    return s.E_errors / s.E_interval;
}

} // namespace rlsc
