#pragma once

#include "dcla/corpus.hpp"

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

namespace dcla {

/// Dense per-utterance vectors, keyed by utterance id. The map keeps ids in
/// ascending order, which is the canonical point order used by every
/// downstream consumer (tie-breaking and determinism rely on it).
struct EmbeddingSet {
    int dim = 0;
    bool normalized = false; // L2 pre-normalization applied
    std::map<std::string, Eigen::VectorXd> vectors;

    std::size_t size() const { return vectors.size(); }
    std::vector<std::string> ids() const;
    /// Rows in id order.
    Eigen::MatrixXd matrix() const;
};

/// Reads a JSON-lines embeddings file ({"utt_id", "vector": [...]}) and checks
/// it against the corpus: one finite vector of a common dimension per coded
/// utterance.
EmbeddingSet load_embeddings(const std::string& path, const Corpus& corpus);

void save_embeddings(const EmbeddingSet& embeddings, const std::string& path);

/// Scales every vector to unit L2 norm (zero vectors are left unchanged).
EmbeddingSet l2_normalize(const EmbeddingSet& embeddings);

struct PcaResult {
    EmbeddingSet reduced;
    Eigen::MatrixXd components;       // achieved_dim x dim, rows are axes
    Eigen::VectorXd mean;             // column means of the input
    std::vector<double> explained_variance_ratio;
    bool rank_deficient = false;      // achieved fewer axes than requested
    int requested_dim = 0;
};

/// Mean-centered projection onto the top principal axes. Deterministic sign
/// convention: the largest-magnitude component of each axis is positive.
/// When the centered data has rank below target_dim the projection keeps the
/// achievable rank and sets rank_deficient.
PcaResult pca_reduce(const EmbeddingSet& embeddings, int target_dim);

} // namespace dcla
