#pragma once

#include "dcla/corpus.hpp"
#include "dcla/embedding.hpp"

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

namespace dcla {

/// Assignment value for points that belong to no stable cluster.
inline constexpr int kNoise = -1;

struct ClusterParams {
    int min_cluster_size = 15;
    int min_samples = 15;
    double merge_threshold = 0.5;
    int reduced_dim = 10;
    bool normalized = true;
};

struct MergeStep {
    int first = 0;
    int second = 0;
    int new_id = 0;
    double similarity = 0.0;
};

struct ClusterModel {
    std::map<std::string, int> assignments;     // utt_id -> cluster id or kNoise
    std::map<int, Eigen::VectorXd> centroids;   // cluster id -> member mean
    std::vector<MergeStep> merge_log;
    ClusterParams params;
    bool all_noise = false;                     // TooFewPoints outcome

    std::size_t cluster_count() const { return centroids.size(); }
    std::size_t noise_count() const;
    /// Member utterance ids per cluster, ids ascending.
    std::map<int, std::vector<std::string>> members() const;
};

/// Density clustering on the (reduced) vectors: k-nearest-neighbor core
/// distances (k = min_samples, a point counts as its own first neighbor),
/// mutual reachability max(core(a), core(b), d(a,b)), minimum spanning tree,
/// single-linkage dendrogram, condensed tree at min_cluster_size, and
/// excess-of-mass cluster extraction. Points in no stable cluster get kNoise.
/// Deterministic: points are processed in ascending utterance-id order and
/// all ties break on that order.
ClusterModel hdbscan_fit(const EmbeddingSet& points, int min_cluster_size, int min_samples);

/// Agglomerative post-merge: repeatedly merges the cluster pair with maximal
/// centroid cosine similarity while that maximum is >= threshold. Centroids
/// are recomputed as member means after each merge and every step lands in
/// merge_log. Noise points are never touched.
ClusterModel merge_clusters(const ClusterModel& model, const EmbeddingSet& points,
                            double threshold);

/// Ranked characteristic terms per cluster via class-based tf-idf:
/// weight(t,c) = tf(t,c) * log(1 + A / f(t)) with A the mean token count per
/// cluster and f(t) the frequency of t across all clustered text. Whitespace
/// tokenization, lowercased; ties break lexicographically.
std::map<int, std::vector<std::pair<std::string, double>>>
ctfidf_keywords(const Corpus& corpus, const ClusterModel& model, int top_k);

/// Writes utt_id,cluster_id rows (noise as -1) in utterance-id order.
void save_assignments(const ClusterModel& model, const std::string& path);

/// Serializes centroids, merge log and parameters.
void save_cluster_model(const ClusterModel& model, const std::string& path);
ClusterModel load_cluster_model(const std::string& model_path,
                                const std::string& assignments_path);

} // namespace dcla
