#pragma once

#include <Eigen/Dense>

#include "rlsc/chain.hpp"

namespace rlsc {

struct AnalyticTerms {
    double E_interval = 0.0;
    double E_LG = 0.0;
    double E_LB1 = 0.0;
    double E_LB2 = 0.0;
    double pe = 0.0;
    int psi = 0;
    Eigen::MatrixXd M;  // (I - T_{zeta-1} Gphiphi)^-1
    Eigen::VectorXd m, n, b;
    double condition = 1.0;
};

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& A, int e);

double expected_interval(const DebtChain& c, const Eigen::VectorXd& pi0);
double expected_lg(const DebtChain& c, const Eigen::VectorXd& pi0, int delta);
double expected_lb1(const DebtChain& c, const Eigen::VectorXd& pi0);
double expected_lb2(const DebtChain& c, const Eigen::VectorXd& pi0, int delta, int alpha);

// All terms and their ratio. Throws NumericalError when the ratio leaves [0, 1]
// by more than 1e-9; smaller excursions are clamped.
AnalyticTerms nrlsc_terms(const DebtChain& c, const Eigen::VectorXd& pi0, int delta, int alpha);
double pe_nrlsc(const DebtChain& c, const Eigen::VectorXd& pi0, int delta, int alpha);

struct OracleStats {
    double mass = 0.0;        // probability of cycles shorter than the horizon
    double E_interval = 0.0;  // restricted to those cycles
    double E_errors = 0.0;
    double E_LG = 0.0;
    double E_LB1 = 0.0;
    double E_LB2 = 0.0;
    int horizon = 0;
    Eigen::MatrixXd restart;  // row s: next-cycle first-slot state given first-slot state s
};

// Forward enumeration of every debt/state path from zero back to zero, with the
// latest ceiling hit carried along. k_max = 0 extends the horizon until the
// unresolved mass is below 1e-12 (capped at 100000 slots).
OracleStats oracle_cycle_statistics(const DebtChain& c, const Eigen::VectorXd& pi0, int delta, int alpha,
                                    int k_max = 0);
double pe_oracle_small(const DebtChain& c, const Eigen::VectorXd& pi0, int delta, int alpha, int k_max = 0);

} // namespace rlsc
