#pragma once

#include "dcla/corpus.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace dcla {

/// Regression data for the session-quality model: one row per scored
/// session, intercept column first, one raw-count column per scheme label.
struct DesignData {
    Eigen::VectorXd y;                    // IC scores
    Eigen::MatrixXd X;                    // n x (1 + K)
    std::vector<int> group_index;         // row -> group ordinal [0, n_groups)
    int n_groups = 0;
    std::vector<std::string> column_names; // "(Intercept)" + labels
    std::vector<std::string> group_names;
    std::vector<std::string> session_ids;
    std::vector<std::string> warnings;     // skipped sessions, single group
};

DesignData build_design(const Corpus& corpus, const MoveScheme& scheme,
                        bool proportions = false);

struct LmmFit {
    std::vector<std::string> column_names; // kept columns
    Eigen::VectorXd beta;
    Eigen::VectorXd se;
    Eigen::VectorXd t_values;
    Eigen::VectorXd p_values;
    std::vector<std::string> dropped_columns; // all-zero predictors
    double sigma_group = 0.0;   // random-intercept SD
    double sigma_resid = 0.0;   // residual SD
    double theta = 0.0;         // variance ratio sigma_group^2 / sigma_resid^2
    double reml_criterion = 0.0; // restricted log-likelihood at theta
    bool converged = false;
    bool boundary = false;       // theta pinned at 0
    bool identifiable = true;    // false with one session per group
    std::string df_method;
    double df = 0.0;
    int n = 0;
    int p = 0;
    int n_groups = 0;
};

struct LmmOptions {
    double theta_max = 1e6;
    double theta_tol = 1e-8;
    int max_iterations = 10000;
    std::string df_method = "residual"; // residual: n - p - (groups - 1); or "n-p"
};

/// Profiled REML for y = X beta + Z b + e with a single random intercept per
/// group: a 1-D derivative-free maximization over theta in [0, theta_max],
/// with beta and sigma_e^2 in closed form by generalized least squares at
/// each theta. Boundary convergence at theta = 0 is reported, not an error.
LmmFit fit_reml(const DesignData& data, const LmmOptions& options = {});

/// Restricted log-likelihood profile used by fit_reml; exposed so callers
/// can audit the criterion at arbitrary theta.
double reml_log_likelihood(const DesignData& data, double theta);

struct ResultRow {
    std::string category;
    std::string label;
    double estimate = 0.0;
    double se = 0.0;
    double t = 0.0;
    double p = 1.0;
    std::string marker;
    bool dropped = false;
};

struct ResultsTable {
    std::vector<ResultRow> rows;   // scheme order; intercept last
    double sigma_group = 0.0;
    double sigma_resid = 0.0;
    std::string df_method;
    double df = 0.0;
    std::string legend;            // significance marker legend
};

/// Per-coefficient estimate/SE/t/two-sided p with significance markers at
/// the .1/.05/.001 levels; df from the stated method, always printed.
ResultsTable wald_table(const LmmFit& fit, const MoveScheme& scheme,
                        const std::string& df_method = "residual");

std::string render_markdown(const ResultsTable& table);

void save_lmm_json(const LmmFit& fit, const std::string& path);

} // namespace dcla
