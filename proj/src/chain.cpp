#include "rlsc/chain.hpp"

#include <cmath>
#include <functional>

#include <spdlog/spdlog.h>

#include "rlsc/errors.hpp"

namespace rlsc {

namespace {

Eigen::MatrixXd block_diag(const std::vector<Eigen::MatrixXd>& blocks) {
    Eigen::Index r = 0, c = 0;
    for (const auto& b : blocks) {
        r += b.rows();
        c += b.cols();
    }
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(r, c);
    r = c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

template <class F>
std::vector<Eigen::MatrixXd> per_state(const std::vector<PartitionBlocks>& blocks, F f) {
    std::vector<Eigen::MatrixXd> out;
    for (const auto& b : blocks) out.push_back(f(b));
    return out;
}

Eigen::MatrixXd scalar(double x) { return Eigen::MatrixXd::Constant(1, 1, x); }

} // namespace

PartitionBlocks PartitionBlocks::split(const Eigen::MatrixXd& g) {
    const int z = static_cast<int>(g.rows()) - 1;
    require(z >= 1 && g.cols() == g.rows(), "partition: debt matrix must be square with zeta >= 1");
    const int w = z - 1;
    PartitionBlocks b;
    b.g00 = g(0, 0);
    b.g0phi = g.block(0, 1, 1, w);
    b.g0z = g(0, z);
    b.gphi0 = g.block(1, 0, w, 1);
    b.gphiphi = g.block(1, 1, w, w);
    b.gphiz = g.block(1, z, w, 1);
    b.gz0 = g(z, 0);
    b.gzphi = g.block(z, 1, 1, w);
    b.gzz = g(z, z);
    return b;
}

Eigen::MatrixXd PartitionBlocks::reassemble() const {
    const auto w = gphiphi.rows();
    Eigen::MatrixXd g(w + 2, w + 2);
    g(0, 0) = g00;
    g.block(0, 1, 1, w) = g0phi;
    g(0, w + 1) = g0z;
    g.block(1, 0, w, 1) = gphi0;
    g.block(1, 1, w, w) = gphiphi;
    g.block(1, w + 1, w, 1) = gphiz;
    g(w + 1, 0) = gz0;
    g.block(w + 1, 1, 1, w) = gzphi;
    g(w + 1, w + 1) = gzz;
    return g;
}

Eigen::MatrixXd PartitionBlocks::q() const {
    const auto w = gphiphi.rows();
    Eigen::MatrixXd m(w + 1, w + 1);
    m.block(0, 0, w, w) = gphiphi;
    m.block(0, w, w, 1) = gphiz;
    m.block(w, 0, 1, w) = gzphi;
    m(w, w) = gzz;
    return m;
}

Eigen::MatrixXd build_debt_transition(const CodeParams& p, const EmissionModel& e) {
    p.validate();
    require(!p.infinite_memory(), "debt transition: finite memory required");
    require(e.N == p.N, "debt transition: emission N differs from code N");
    const int z = p.zeta();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(z + 1, z + 1);
    for (int i = 0; i <= z; ++i)
        for (int c = 0; c <= p.N; ++c) g(i, step_nrlsc(i, c, p)) += e.pmf[c];
    return g;
}

DebtChain DebtChain::build(const CodeParams& p, const ChannelSpec& channel) {
    require(p.mode == Mode::Nonsystematic, "debt chain: non-systematic code required");
    std::vector<Eigen::MatrixXd> g;
    for (const auto& e : channel.emissions) g.push_back(build_debt_transition(p, e));
    return DebtChain(p.K, *p.alpha, std::move(g), channel.T1);
}

DebtChain::DebtChain(int K, int alpha, std::vector<Eigen::MatrixXd> gammas, Eigen::MatrixXd T1)
    : K_(K), alpha_(alpha), zeta_(alpha * K + 1), gamma_(std::move(gammas)), T1_(std::move(T1)) {
    require(!gamma_.empty() && T1_.rows() == L() && T1_.cols() == L(), "debt chain: state count mismatch");
    for (const auto& g : gamma_) {
        require(g.rows() == zeta_ + 1 && g.cols() == zeta_ + 1, "debt chain: matrix size must be zeta + 1");
        for (Eigen::Index i = 0; i < g.rows(); ++i)
            require(std::abs(g.row(i).sum() - 1.0) <= 1e-12, "debt chain: rows must be stochastic");
        blocks_.push_back(PartitionBlocks::split(g));
    }
}

Eigen::MatrixXd DebtChain::T(int n) const {
    const int L = this->L();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(L * n, L * n);
    for (int s = 0; s < L; ++s)
        for (int u = 0; u < L; ++u)
            if (T1_(s, u) != 0.0)
                out.block(s * n, u * n, n, n).diagonal().setConstant(T1_(s, u));
    return out;
}

Eigen::VectorXd DebtChain::g00() const {
    Eigen::VectorXd v(L());
    for (int s = 0; s < L(); ++s) v(s) = blocks_[s].g00;
    return v;
}
Eigen::VectorXd DebtChain::g0z() const {
    Eigen::VectorXd v(L());
    for (int s = 0; s < L(); ++s) v(s) = blocks_[s].g0z;
    return v;
}
Eigen::VectorXd DebtChain::gz0() const {
    Eigen::VectorXd v(L());
    for (int s = 0; s < L(); ++s) v(s) = blocks_[s].gz0;
    return v;
}
Eigen::VectorXd DebtChain::gzz() const {
    Eigen::VectorXd v(L());
    for (int s = 0; s < L(); ++s) v(s) = blocks_[s].gzz;
    return v;
}
Eigen::MatrixXd DebtChain::g0phi() const {
    return block_diag(per_state(blocks_, [](const PartitionBlocks& b) { return Eigen::MatrixXd(b.g0phi); }));
}
Eigen::MatrixXd DebtChain::gzphi() const {
    return block_diag(per_state(blocks_, [](const PartitionBlocks& b) { return Eigen::MatrixXd(b.gzphi); }));
}
Eigen::MatrixXd DebtChain::gphi0() const {
    return block_diag(per_state(blocks_, [](const PartitionBlocks& b) { return Eigen::MatrixXd(b.gphi0); }));
}
Eigen::MatrixXd DebtChain::gphiz() const {
    return block_diag(per_state(blocks_, [](const PartitionBlocks& b) { return Eigen::MatrixXd(b.gphiz); }));
}
Eigen::MatrixXd DebtChain::gphiphi() const {
    return block_diag(per_state(blocks_, [](const PartitionBlocks& b) { return b.gphiphi; }));
}
Eigen::MatrixXd DebtChain::gs() const {
    return block_diag(per_state(blocks_, [](const PartitionBlocks& b) {
        Eigen::MatrixXd r(1, b.g0phi.size() + 1);
        r << b.g0phi, scalar(b.g0z);
        return r;
    }));
}
Eigen::MatrixXd DebtChain::ge() const {
    return block_diag(per_state(blocks_, [](const PartitionBlocks& b) {
        Eigen::MatrixXd c(b.gphi0.size() + 1, 1);
        c << b.gphi0, scalar(b.gz0);
        return c;
    }));
}
Eigen::MatrixXd DebtChain::Q() const {
    return block_diag(per_state(blocks_, [](const PartitionBlocks& b) { return b.q(); }));
}

double interval_pmf(const DebtChain& c, const Eigen::VectorXd& pi0, int k) {
    require(k >= 1, "interval_pmf: k must be >= 1");
    require(pi0.size() == c.L(), "interval_pmf: pi0 size must equal L");
    if (k == 1) return pi0.dot(c.g00());
    const Eigen::MatrixXd Tz = c.T(c.zeta());
    const Eigen::MatrixXd TQ = Tz * c.Q();
    Eigen::RowVectorXd row = pi0.transpose() * c.gs();
    for (int i = 0; i < k - 2; ++i) row = row * TQ;
    return (row * Tz * c.ge()).sum();
}

double interval_pmf_conditional(const DebtChain& c, const Eigen::VectorXd& pi0, int k, IntervalVariant v) {
    require(k >= 2, "interval_pmf_conditional: k must be >= 2");
    require(pi0.size() == c.L(), "interval_pmf_conditional: pi0 size must equal L");
    const Eigen::MatrixXd Tp = c.T(c.zeta() - 1);
    const Eigen::MatrixXd X = Tp * c.gphiphi();
    Eigen::RowVectorXd row = pi0.transpose() * c.g0phi();
    for (int i = 0; i < k - 2; ++i) row = row * X;
    const Eigen::MatrixXd terminal = v == IntervalVariant::NoZetaHit ? c.gphi0() : c.gphiz();
    return (row * Tp * terminal).sum();
}

int interval_tail_length(const DebtChain& c, double tol) {
    const Eigen::MatrixXd TQ = c.T(c.zeta()) * c.Q();
    Eigen::MatrixXd P = TQ;
    constexpr int kCap = 10'000'000;
    for (int k = 1; k < kCap; ++k) {
        if (P.cwiseAbs().rowwise().sum().maxCoeff() <= tol) return k;
        P = P * TQ;
    }
    throw NumericalError("interval tail does not decay (spectral radius of T_zeta Q is 1)");
}

Eigen::MatrixXd solve_resolvent(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double* condition) {
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(A.rows(), A.cols());
    if (A.rows() == 0) return Eigen::MatrixXd::Zero(0, B.cols());
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(I - A);
    const double rc = lu.rcond();
    const double cond = rc > 0.0 ? 1.0 / rc : INFINITY;
    spdlog::debug("resolvent solve: size {}, condition estimate {:.3e}", A.rows(), cond);
    if (!std::isfinite(cond)) throw NumericalError("resolvent: I - A is singular");
    if (cond > 1e10) spdlog::warn("resolvent solve: condition estimate {:.3e} exceeds 1e10", cond);
    if (condition) *condition = std::max(*condition, cond);
    return lu.solve(B);
}

RenewalMatrices renewal_transition_matrices(const DebtChain& c) {
    RenewalMatrices r;
    const Eigen::MatrixXd Tz = c.T(c.zeta());
    const Eigen::MatrixXd Tp = c.T(c.zeta() - 1);
    const Eigen::MatrixXd X = solve_resolvent(Tz * c.Q(), Tz * c.ge(), &r.condition);
    r.T00 = (Eigen::MatrixXd(c.g00().asDiagonal()) + c.gs() * X) * c.T1();
    const Eigen::MatrixXd MTz = solve_resolvent(Tp * c.gphiphi(), Tp * c.gphiz(), &r.condition);
    r.T0z = (Eigen::MatrixXd(c.g0z().asDiagonal()) + c.g0phi() * MTz) * c.T1();
    r.Tzz = (Eigen::MatrixXd(c.gzz().asDiagonal()) + c.gzphi() * MTz) * c.T1();
    return r;
}

Eigen::VectorXd stationary_initial(const DebtChain& c) {
    const int L = c.L();
    const Eigen::MatrixXd R = renewal_transition_matrices(c).T00;
    const Eigen::MatrixXd D = R.transpose() - Eigen::MatrixXd::Identity(L, L);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_rank(D);
    qr_rank.setThreshold(1e-12);
    if (qr_rank.rank() < L - 1)
        throw NumericalError("restart distribution: T00 - I has rank " + std::to_string(qr_rank.rank()) +
                             ", expected " + std::to_string(L - 1));
    Eigen::MatrixXd A(L + 1, L);
    A.topRows(L) = D;
    A.row(L).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(L + 1);
    b(L) = 1.0;
    Eigen::VectorXd pi = A.colPivHouseholderQr().solve(b);
    for (int i = 0; i < L; ++i)
        if (pi(i) < 0.0 && pi(i) > -1e-13) pi(i) = 0.0;
    const double residual = (pi.transpose() * R - pi.transpose()).cwiseAbs().maxCoeff();
    if (residual > 1e-10 || pi.minCoeff() < 0.0)
        throw NumericalError("restart distribution: fixed-point residual " + std::to_string(residual));
    return pi;
}

double trace_enumeration_oracle(const DebtChain& c, const Eigen::VectorXd& pi0, int k) {
    require(k >= 1, "trace enumeration: k must be >= 1");
    const int L = c.L();
    require(std::pow(static_cast<double>(L), k) <= 1e6, "trace enumeration: L^k exceeds 1e6");
    double total = 0.0;
    // v holds the joint mass of (trace prefix, debt) with the debt kept positive.
    std::function<void(int, int, const Eigen::RowVectorXd&)> walk = [&](int depth, int s,
                                                                       const Eigen::RowVectorXd& v) {
        for (int u = 0; u < L; ++u) {
            const double w = c.T1()(s, u);
            if (w == 0.0) continue;
            Eigen::RowVectorXd next = w * (v * c.gamma(u));
            if (depth + 1 == k) {
                total += next(0);
            } else {
                next(0) = 0.0;
                walk(depth + 1, u, next);
            }
        }
    };
    for (int s = 0; s < L; ++s) {
        if (pi0(s) == 0.0) continue;
        Eigen::RowVectorXd v = pi0(s) * c.gamma(s).row(0);
        if (k == 1) {
            total += v(0);
            continue;
        }
        v(0) = 0.0;
        walk(1, s, v);
    }
    return total;
}

} // namespace rlsc
