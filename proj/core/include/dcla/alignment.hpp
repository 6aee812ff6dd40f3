#pragma once

#include "dcla/cluster.hpp"
#include "dcla/corpus.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace dcla {

/// Cluster-label over-representation: lift(c,l) = P(l|c) / P(l) with 0/0
/// defined as 0. Label priors run over all coded utterances (noise points
/// included); conditionals over a cluster's members.
struct LiftMatrix {
    std::vector<int> clusters;            // row order
    std::vector<std::string> labels;      // scheme order
    Eigen::MatrixXd lift;                 // clusters x labels
    Eigen::MatrixXi support;              // raw counts per cell
    std::vector<double> label_priors;     // P(l)
    std::vector<long long> label_totals;
    std::vector<long long> cluster_sizes;
    long long total_coded = 0;
    bool priors_include_noise = true;     // recorded choice

    std::size_t row_of(int cluster) const;
};

LiftMatrix lift_matrix(const ClusterModel& model, const Corpus& corpus);

enum class VerdictKind { Aligned, NovelNoDominant, NovelMultiDominant };
std::string_view verdict_kind_name(VerdictKind kind);

struct ClusterVerdict {
    int cluster_id = 0;
    VerdictKind kind = VerdictKind::NovelNoDominant;
    std::vector<std::string> dominant_labels; // lift >= threshold, scheme order
};

struct VerdictSummary {
    std::vector<ClusterVerdict> verdicts;
    std::size_t aligned = 0;
    std::size_t novel_no_dominant = 0;
    std::size_t novel_multi_dominant = 0;
};

/// One verdict per cluster: Aligned when exactly one label reaches the
/// threshold, NovelNoDominant when none does, NovelMultiDominant otherwise.
VerdictSummary classify_clusters(const LiftMatrix& lift, double threshold);

/// Writes the machine-readable matrix + verdicts as JSON and a standalone
/// SVG heatmap (threshold-exceeding cells outlined). Either path may be
/// empty to skip that artifact.
void export_heatmap(const LiftMatrix& lift, const VerdictSummary& verdicts, double threshold,
                    const std::string& json_path, const std::string& svg_path);

/// Re-reads the JSON emitted by export_heatmap.
LiftMatrix load_lift_json(const std::string& path);

} // namespace dcla
