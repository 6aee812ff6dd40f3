#include "dcla/embedding.hpp"

#include "dcla/error.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace dcla {

using nlohmann::json;

std::vector<std::string> EmbeddingSet::ids() const {
    std::vector<std::string> out;
    out.reserve(vectors.size());
    for (const auto& [id, _] : vectors) {
        out.push_back(id);
    }
    return out;
}

Eigen::MatrixXd EmbeddingSet::matrix() const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(vectors.size()), dim);
    Eigen::Index row = 0;
    for (const auto& [_, v] : vectors) {
        m.row(row++) = v.transpose();
    }
    return m;
}

EmbeddingSet load_embeddings(const std::string& path, const Corpus& corpus) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::MissingFile, "cannot open " + path);
    }
    EmbeddingSet set;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& ex) {
            throw Error(ErrorCode::SchemaViolation,
                        path + " row " + std::to_string(line_no) + ": invalid JSON (" +
                            ex.what() + ")");
        }
        std::string id;
        Eigen::VectorXd vec;
        try {
            id = obj.at("utt_id").get<std::string>();
            const auto& arr = obj.at("vector");
            vec.resize(static_cast<Eigen::Index>(arr.size()));
            Eigen::Index i = 0;
            for (const auto& value : arr) {
                vec[i++] = value.get<double>();
            }
        } catch (const json::exception& ex) {
            throw Error(ErrorCode::SchemaViolation,
                        path + " row " + std::to_string(line_no) + ": " + ex.what());
        }
        if (set.dim == 0) {
            set.dim = static_cast<int>(vec.size());
        }
        if (static_cast<int>(vec.size()) != set.dim || vec.size() == 0) {
            throw Error(ErrorCode::DimensionMismatch,
                        "utterance '" + id + "' has dim " + std::to_string(vec.size()) +
                            ", expected " + std::to_string(set.dim));
        }
        if (!vec.allFinite()) {
            throw Error(ErrorCode::NonFiniteValue, "utterance '" + id + "'");
        }
        if (set.vectors.count(id)) {
            throw Error(ErrorCode::DuplicateId, "embedding '" + id + "'");
        }
        set.vectors.emplace(std::move(id), std::move(vec));
    }

    // Exactly one vector per coded utterance.
    for (const auto& session : corpus.sessions) {
        for (const auto& u : session.utterances) {
            if (u.code && !set.vectors.count(u.utt_id)) {
                throw Error(ErrorCode::MissingUtterance, "'" + u.utt_id + "'");
            }
        }
    }
    return set;
}

void save_embeddings(const EmbeddingSet& embeddings, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path);
    }
    for (const auto& [id, vec] : embeddings.vectors) {
        nlohmann::ordered_json obj;
        obj["utt_id"] = id;
        auto arr = nlohmann::ordered_json::array();
        for (Eigen::Index i = 0; i < vec.size(); ++i) {
            arr.push_back(vec[i]);
        }
        obj["vector"] = std::move(arr);
        out << obj.dump() << "\n";
    }
}

EmbeddingSet l2_normalize(const EmbeddingSet& embeddings) {
    EmbeddingSet out;
    out.dim = embeddings.dim;
    out.normalized = true;
    for (const auto& [id, vec] : embeddings.vectors) {
        const double norm = vec.norm();
        out.vectors.emplace(id, norm > 0.0 ? Eigen::VectorXd(vec / norm) : vec);
    }
    return out;
}

PcaResult pca_reduce(const EmbeddingSet& embeddings, int target_dim) {
    const Eigen::Index n = static_cast<Eigen::Index>(embeddings.size());
    if (n < 2) {
        throw Error(ErrorCode::EmptyInput, "pca_reduce needs at least 2 vectors");
    }
    if (target_dim < 1 || target_dim > embeddings.dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    "target_dim " + std::to_string(target_dim) + " outside [1, dim]");
    }

    PcaResult result;
    result.requested_dim = target_dim;
    Eigen::MatrixXd data = embeddings.matrix();
    result.mean = data.colwise().mean();
    data.rowwise() -= result.mean.transpose();

    Eigen::BDCSVD<Eigen::MatrixXd> svd(data, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double total_variance = sigma.squaredNorm();

    // Effective rank: singular values above a scale-relative floor.
    const double floor = sigma.size() > 0 ? sigma[0] * 1e-12 : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma[i] > floor) {
            ++rank;
        }
    }
    int achieved = std::min(target_dim, rank);
    if (achieved == 0) {
        achieved = 1; // all-identical points project to a single axis of zeros
        result.rank_deficient = true;
    }
    if (achieved < target_dim) {
        result.rank_deficient = true;
    }

    Eigen::MatrixXd axes = svd.matrixV().leftCols(achieved).transpose(); // achieved x dim
    // Sign convention: largest-magnitude component of each axis positive.
    for (Eigen::Index r = 0; r < axes.rows(); ++r) {
        Eigen::Index arg = 0;
        axes.row(r).cwiseAbs().maxCoeff(&arg);
        if (axes(r, arg) < 0.0) {
            axes.row(r) = -axes.row(r);
        }
    }
    result.components = axes;
    result.explained_variance_ratio.resize(achieved, 0.0);
    for (int i = 0; i < achieved; ++i) {
        result.explained_variance_ratio[i] =
            total_variance > 0.0 ? sigma[i] * sigma[i] / total_variance : 0.0;
    }

    Eigen::MatrixXd projected = data * axes.transpose(); // n x achieved
    result.reduced.dim = achieved;
    result.reduced.normalized = embeddings.normalized;
    Eigen::Index row = 0;
    for (const auto& [id, _] : embeddings.vectors) {
        result.reduced.vectors.emplace(id, projected.row(row++).transpose());
    }
    return result;
}

} // namespace dcla
