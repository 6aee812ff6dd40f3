#include "dcla/alignment.hpp"

#include "dcla/error.hpp"
#include "dcla/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

namespace dcla {

std::size_t LiftMatrix::row_of(int cluster) const {
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        if (clusters[i] == cluster) {
            return i;
        }
    }
    throw Error(ErrorCode::EmptyCluster, "cluster " + std::to_string(cluster) + " not in matrix");
}

std::string_view verdict_kind_name(VerdictKind kind) {
    switch (kind) {
    case VerdictKind::Aligned: return "Aligned";
    case VerdictKind::NovelNoDominant: return "NovelNoDominant";
    case VerdictKind::NovelMultiDominant: return "NovelMultiDominant";
    }
    return "?";
}

LiftMatrix lift_matrix(const ClusterModel& model, const Corpus& corpus) {
    LiftMatrix out;
    out.labels = corpus.scheme.labels();
    if (out.labels.empty()) {
        throw Error(ErrorCode::NoLabels, "scheme has no labels");
    }
    const std::size_t n_labels = out.labels.size();

    std::unordered_map<std::string, std::size_t> label_pos;
    for (std::size_t i = 0; i < n_labels; ++i) {
        label_pos.emplace(out.labels[i], i);
    }
    std::unordered_map<std::string, std::size_t> code_of; // utt -> label index
    out.label_totals.assign(n_labels, 0);
    for (const auto& session : corpus.sessions) {
        for (const auto& u : session.utterances) {
            if (!u.code) {
                continue;
            }
            auto it = label_pos.find(*u.code);
            if (it == label_pos.end()) {
                throw Error(ErrorCode::UnknownLabel, "'" + *u.code + "'");
            }
            code_of.emplace(u.utt_id, it->second);
            // Priors cover every coded utterance, whether clustered or noise.
            ++out.label_totals[it->second];
            ++out.total_coded;
        }
    }
    if (out.total_coded == 0) {
        throw Error(ErrorCode::NoLabels, "corpus has no coded utterances");
    }
    out.label_priors.resize(n_labels);
    for (std::size_t l = 0; l < n_labels; ++l) {
        out.label_priors[l] = static_cast<double>(out.label_totals[l]) /
                              static_cast<double>(out.total_coded);
    }

    const auto members = model.members();
    out.clusters.reserve(members.size());
    for (const auto& [cluster, _] : members) {
        out.clusters.push_back(cluster);
    }
    const std::size_t n_clusters = out.clusters.size();
    out.support = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(n_clusters),
                                        static_cast<Eigen::Index>(n_labels));
    out.lift = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_clusters),
                                     static_cast<Eigen::Index>(n_labels));
    out.cluster_sizes.assign(n_clusters, 0);

    for (std::size_t row = 0; row < n_clusters; ++row) {
        const auto& ids = members.at(out.clusters[row]);
        if (ids.empty()) {
            throw Error(ErrorCode::EmptyCluster, std::to_string(out.clusters[row]));
        }
        for (const auto& id : ids) {
            auto it = code_of.find(id);
            if (it == code_of.end()) {
                throw Error(ErrorCode::UncodedUtterance,
                            "'" + id + "' is clustered but carries no code");
            }
            ++out.support(static_cast<Eigen::Index>(row),
                          static_cast<Eigen::Index>(it->second));
            ++out.cluster_sizes[row];
        }
        // Counts divide once at the end: lift = (n_lc * N) / (|c| * n_l).
        for (std::size_t l = 0; l < n_labels; ++l) {
            const long long n_lc = out.support(static_cast<Eigen::Index>(row),
                                               static_cast<Eigen::Index>(l));
            const long long n_l = out.label_totals[l];
            if (n_lc == 0 || n_l == 0) {
                continue; // includes the 0/0 = 0 convention
            }
            out.lift(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(l)) =
                static_cast<double>(n_lc * out.total_coded) /
                static_cast<double>(out.cluster_sizes[row] * n_l);
        }
    }
    return out;
}

VerdictSummary classify_clusters(const LiftMatrix& lift, double threshold) {
    if (threshold <= 0.0) {
        throw Error(ErrorCode::InvalidConfig, "lift threshold must be > 0");
    }
    VerdictSummary summary;
    for (std::size_t row = 0; row < lift.clusters.size(); ++row) {
        ClusterVerdict verdict;
        verdict.cluster_id = lift.clusters[row];
        for (std::size_t l = 0; l < lift.labels.size(); ++l) {
            if (lift.lift(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(l)) >=
                threshold) {
                verdict.dominant_labels.push_back(lift.labels[l]);
            }
        }
        if (verdict.dominant_labels.size() == 1) {
            verdict.kind = VerdictKind::Aligned;
            ++summary.aligned;
        } else if (verdict.dominant_labels.empty()) {
            verdict.kind = VerdictKind::NovelNoDominant;
            ++summary.novel_no_dominant;
        } else {
            verdict.kind = VerdictKind::NovelMultiDominant;
            ++summary.novel_multi_dominant;
        }
        summary.verdicts.push_back(std::move(verdict));
    }
    return summary;
}

void export_heatmap(const LiftMatrix& lift, const VerdictSummary& verdicts, double threshold,
                    const std::string& json_path, const std::string& svg_path) {
    if (lift.clusters.empty() || lift.labels.empty()) {
        throw Error(ErrorCode::EmptyInput, "empty lift matrix");
    }

    if (!json_path.empty()) {
        nlohmann::ordered_json doc;
        doc["threshold"] = threshold;
        doc["priors-include-noise"] = lift.priors_include_noise;
        doc["total-coded"] = lift.total_coded;
        doc["clusters"] = lift.clusters;
        doc["labels"] = lift.labels;
        doc["label-totals"] = lift.label_totals;
        doc["label-priors"] = lift.label_priors;
        doc["cluster-sizes"] = lift.cluster_sizes;
        auto matrix = nlohmann::ordered_json::array();
        auto support = nlohmann::ordered_json::array();
        for (Eigen::Index r = 0; r < lift.lift.rows(); ++r) {
            auto lrow = nlohmann::ordered_json::array();
            auto srow = nlohmann::ordered_json::array();
            for (Eigen::Index c = 0; c < lift.lift.cols(); ++c) {
                lrow.push_back(lift.lift(r, c));
                srow.push_back(lift.support(r, c));
            }
            matrix.push_back(std::move(lrow));
            support.push_back(std::move(srow));
        }
        doc["lift"] = std::move(matrix);
        doc["support"] = std::move(support);
        auto vlist = nlohmann::ordered_json::array();
        for (const auto& v : verdicts.verdicts) {
            vlist.push_back({{"cluster", v.cluster_id},
                             {"kind", std::string(verdict_kind_name(v.kind))},
                             {"dominant-labels", v.dominant_labels}});
        }
        doc["verdicts"] = std::move(vlist);
        doc["summary"] = {{"aligned", verdicts.aligned},
                          {"novel-no-dominant", verdicts.novel_no_dominant},
                          {"novel-multi-dominant", verdicts.novel_multi_dominant}};
        std::ofstream out(json_path, std::ios::binary);
        if (!out) {
            throw Error(ErrorCode::IoError, "cannot write " + json_path);
        }
        out << doc.dump(2) << "\n";
    }

    if (!svg_path.empty()) {
        const double cell = 28.0;
        const double left = 180.0;
        const double top = 24.0;
        const double legend = 40.0;
        const std::size_t rows = lift.clusters.size();
        const std::size_t cols = lift.labels.size();
        svg::Document doc(left + cell * cols + 20.0, top + cell * rows + legend + 90.0);
        const double max_lift = std::max(lift.lift.maxCoeff(), 1e-12);
        for (std::size_t r = 0; r < rows; ++r) {
            doc.text(left - 8.0, top + cell * r + cell * 0.65,
                     "cluster " + std::to_string(lift.clusters[r]), 11.0, "end");
            for (std::size_t c = 0; c < cols; ++c) {
                const double value = lift.lift(static_cast<Eigen::Index>(r),
                                               static_cast<Eigen::Index>(c));
                const bool hot = value >= threshold;
                doc.rect(left + cell * c, top + cell * r, cell - 1.0, cell - 1.0, "#2166ac",
                         value / max_lift, hot ? "#b2182b" : "#cccccc", hot ? 2.0 : 0.5);
            }
        }
        for (std::size_t c = 0; c < cols; ++c) {
            // label text rendered below the grid, angled columns kept simple
            doc.text(left + cell * c + cell * 0.5, top + cell * rows + 14.0 + 12.0 * (c % 4),
                     lift.labels[c], 9.0, "middle");
        }
        doc.text(left, top + cell * rows + legend + 70.0,
                 "cell opacity ~ lift; outlined cells reach the threshold", 11.0);
        doc.save(svg_path);
    }
}

LiftMatrix load_lift_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::MissingFile, "cannot open " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::SchemaViolation, path + ": " + ex.what());
    }
    LiftMatrix out;
    try {
        out.priors_include_noise = doc.at("priors-include-noise").get<bool>();
        out.total_coded = doc.at("total-coded").get<long long>();
        out.clusters = doc.at("clusters").get<std::vector<int>>();
        out.labels = doc.at("labels").get<std::vector<std::string>>();
        out.label_totals = doc.at("label-totals").get<std::vector<long long>>();
        out.label_priors = doc.at("label-priors").get<std::vector<double>>();
        out.cluster_sizes = doc.at("cluster-sizes").get<std::vector<long long>>();
        const auto& matrix = doc.at("lift");
        const auto& support = doc.at("support");
        out.lift.resize(static_cast<Eigen::Index>(out.clusters.size()),
                        static_cast<Eigen::Index>(out.labels.size()));
        out.support.resize(static_cast<Eigen::Index>(out.clusters.size()),
                           static_cast<Eigen::Index>(out.labels.size()));
        for (Eigen::Index r = 0; r < out.lift.rows(); ++r) {
            for (Eigen::Index c = 0; c < out.lift.cols(); ++c) {
                out.lift(r, c) = matrix.at(r).at(c).get<double>();
                out.support(r, c) = support.at(r).at(c).get<int>();
            }
        }
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::SchemaViolation, path + ": " + ex.what());
    }
    return out;
}

} // namespace dcla
