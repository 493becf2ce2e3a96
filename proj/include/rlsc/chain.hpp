#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rlsc/channels.hpp"
#include "rlsc/debt.hpp"

namespace rlsc {

// One state's debt matrix split by the index sets {0}, phi = {1..zeta-1}, {zeta}.
struct PartitionBlocks {
    double g00 = 0.0;
    Eigen::RowVectorXd g0phi;
    double g0z = 0.0;
    Eigen::VectorXd gphi0;
    Eigen::MatrixXd gphiphi;
    Eigen::VectorXd gphiz;
    double gz0 = 0.0;
    Eigen::RowVectorXd gzphi;
    double gzz = 0.0;

    static PartitionBlocks split(const Eigen::MatrixXd& gamma);
    Eigen::MatrixXd reassemble() const;
    // Nonzero-debt transitions [[gphiphi, gphiz], [gzphi, gzz]].
    Eigen::MatrixXd q() const;
};

// Row i of the result is the distribution of the next debt from debt i.
Eigen::MatrixXd build_debt_transition(const CodeParams& p, const EmissionModel& e);

// Hidden-state-modulated debt chain. Block forms are state-major: the block of
// state s occupies rows/columns [s*n, (s+1)*n) with n the per-state width.
class DebtChain {
public:
    static DebtChain build(const CodeParams& p, const ChannelSpec& channel);
    DebtChain(int K, int alpha, std::vector<Eigen::MatrixXd> gammas, Eigen::MatrixXd T1);

    int L() const { return static_cast<int>(gamma_.size()); }
    int zeta() const { return zeta_; }
    int alpha() const { return alpha_; }
    int K() const { return K_; }
    const Eigen::MatrixXd& gamma(int s) const { return gamma_[s]; }
    const PartitionBlocks& blocks(int s) const { return blocks_[s]; }
    const Eigen::MatrixXd& T1() const { return T1_; }

    // Kronecker(T1, I_n).
    Eigen::MatrixXd T(int n) const;

    Eigen::VectorXd g00() const;  // per-state scalars as L-vectors
    Eigen::VectorXd g0z() const;
    Eigen::VectorXd gz0() const;
    Eigen::VectorXd gzz() const;
    Eigen::MatrixXd g0phi() const;    // L x L(zeta-1)
    Eigen::MatrixXd gzphi() const;    // L x L(zeta-1)
    Eigen::MatrixXd gphi0() const;    // L(zeta-1) x L
    Eigen::MatrixXd gphiz() const;    // L(zeta-1) x L
    Eigen::MatrixXd gphiphi() const;  // L(zeta-1) x L(zeta-1)
    Eigen::MatrixXd gs() const;       // L x L*zeta, rows [g0phi g0z]
    Eigen::MatrixXd ge() const;       // L*zeta x L, columns [gphi0; gz0]
    Eigen::MatrixXd Q() const;        // L*zeta x L*zeta

private:
    int K_;
    int alpha_;
    int zeta_;
    std::vector<Eigen::MatrixXd> gamma_;
    std::vector<PartitionBlocks> blocks_;
    Eigen::MatrixXd T1_;
};

enum class IntervalVariant { NoZetaHit, FirstZetaHit };

// Pr(t_{i+1} - t_i = k) starting from state distribution pi0.
double interval_pmf(const DebtChain& c, const Eigen::VectorXd& pi0, int k);
// k >= 2: Pr(interval = k without a ceiling hit), or Pr(first ceiling hit at k).
double interval_pmf_conditional(const DebtChain& c, const Eigen::VectorXd& pi0, int k, IntervalVariant v);

// Smallest k with ||(T_zeta Q)^k||_inf <= tol.
int interval_tail_length(const DebtChain& c, double tol = 1e-12);

struct RenewalMatrices {
    Eigen::MatrixXd T00;
    Eigen::MatrixXd T0z;
    Eigen::MatrixXd Tzz;
    double condition = 1.0;  // worst condition estimate among the solves
};

RenewalMatrices renewal_transition_matrices(const DebtChain& c);

// Stationary distribution of the hidden state at debt-zero restarts.
Eigen::VectorXd stationary_initial(const DebtChain& c);

// Brute-force interval probability: sums over all L^k state traces.
double trace_enumeration_oracle(const DebtChain& c, const Eigen::VectorXd& pi0, int k);

// Solves (I - A) X = B by LU, tracking a condition estimate.
Eigen::MatrixXd solve_resolvent(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double* condition = nullptr);

} // namespace rlsc
