#include "dcla/cluster.hpp"

#include "dcla/csv.hpp"
#include "dcla/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace dcla {

std::size_t ClusterModel::noise_count() const {
    std::size_t n = 0;
    for (const auto& [_, cluster] : assignments) {
        if (cluster == kNoise) {
            ++n;
        }
    }
    return n;
}

std::map<int, std::vector<std::string>> ClusterModel::members() const {
    std::map<int, std::vector<std::string>> out;
    for (const auto& [id, cluster] : assignments) {
        if (cluster != kNoise) {
            out[cluster].push_back(id); // map iteration keeps ids ascending
        }
    }
    return out;
}

ClusterModel merge_clusters(const ClusterModel& model, const EmbeddingSet& points,
                            double threshold) {
    ClusterModel out = model;
    out.params.merge_threshold = threshold;

    // Running sums keep centroids exact member means across merges.
    std::map<int, Eigen::VectorXd> sums;
    std::map<int, long long> sizes;
    for (const auto& [id, cluster] : out.assignments) {
        if (cluster == kNoise) {
            continue;
        }
        auto it = points.vectors.find(id);
        if (it == points.vectors.end()) {
            throw Error(ErrorCode::MissingUtterance, "'" + id + "' has no vector");
        }
        auto [sit, inserted] = sums.emplace(cluster, it->second);
        if (!inserted) {
            sit->second += it->second;
        }
        sizes[cluster] += 1;
    }

    int next_id = 0;
    for (const auto& [cluster, _] : sums) {
        next_id = std::max(next_id, cluster + 1);
    }

    auto cosine = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        const double na = a.norm();
        const double nb = b.norm();
        if (na <= 0.0 || nb <= 0.0) {
            return -1.0;
        }
        return a.dot(b) / (na * nb);
    };

    while (sums.size() >= 2) {
        int best_a = -1;
        int best_b = -1;
        double best_sim = -std::numeric_limits<double>::infinity();
        for (auto ia = sums.begin(); ia != sums.end(); ++ia) {
            const Eigen::VectorXd ca = ia->second / static_cast<double>(sizes.at(ia->first));
            auto ib = ia;
            for (++ib; ib != sums.end(); ++ib) {
                const Eigen::VectorXd cb = ib->second / static_cast<double>(sizes.at(ib->first));
                const double sim = cosine(ca, cb);
                if (sim > best_sim) {
                    best_sim = sim;
                    best_a = ia->first;
                    best_b = ib->first;
                }
            }
        }
        if (best_sim < threshold) {
            break;
        }
        const int merged_id = next_id++;
        sums[merged_id] = sums.at(best_a) + sums.at(best_b);
        sizes[merged_id] = sizes.at(best_a) + sizes.at(best_b);
        sums.erase(best_a);
        sums.erase(best_b);
        sizes.erase(best_a);
        sizes.erase(best_b);
        for (auto& [id, cluster] : out.assignments) {
            if (cluster == best_a || cluster == best_b) {
                cluster = merged_id;
            }
        }
        out.merge_log.push_back({best_a, best_b, merged_id, best_sim});
    }

    out.centroids.clear();
    for (const auto& [cluster, sum] : sums) {
        out.centroids[cluster] = sum / static_cast<double>(sizes.at(cluster));
    }
    return out;
}

std::map<int, std::vector<std::pair<std::string, double>>>
ctfidf_keywords(const Corpus& corpus, const ClusterModel& model, int top_k) {
    std::unordered_map<std::string, const Utterance*> by_id;
    for (const auto& session : corpus.sessions) {
        for (const auto& u : session.utterances) {
            by_id.emplace(u.utt_id, &u);
        }
    }

    auto tokenize = [](const std::string& text, std::vector<std::string>& out) {
        std::istringstream stream(text);
        std::string token;
        while (stream >> token) {
            for (auto& ch : token) {
                ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            }
            out.push_back(token);
        }
    };

    std::map<int, std::unordered_map<std::string, long long>> tf;
    std::unordered_map<std::string, long long> corpus_tf;
    long long total_tokens = 0;
    bool any_text = false;
    for (const auto& [id, cluster] : model.assignments) {
        if (cluster == kNoise) {
            continue;
        }
        auto it = by_id.find(id);
        if (it == by_id.end() || !it->second->text) {
            continue;
        }
        any_text = true;
        std::vector<std::string> tokens;
        tokenize(*it->second->text, tokens);
        auto& cluster_tf = tf[cluster];
        for (auto& token : tokens) {
            ++cluster_tf[token];
            ++corpus_tf[token];
            ++total_tokens;
        }
    }
    if (!any_text) {
        throw Error(ErrorCode::NoTextAvailable, "no clustered utterance carries text");
    }

    const double mean_tokens = static_cast<double>(total_tokens) /
                               static_cast<double>(std::max<std::size_t>(tf.size(), 1));

    std::map<int, std::vector<std::pair<std::string, double>>> out;
    for (const auto& [cluster, terms] : tf) {
        std::vector<std::pair<std::string, double>> ranked;
        ranked.reserve(terms.size());
        for (const auto& [term, count] : terms) {
            const double idf = std::log(1.0 + mean_tokens /
                                                  static_cast<double>(corpus_tf.at(term)));
            ranked.emplace_back(term, static_cast<double>(count) * idf);
        }
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        if (top_k >= 0 && ranked.size() > static_cast<std::size_t>(top_k)) {
            ranked.resize(top_k);
        }
        out.emplace(cluster, std::move(ranked));
    }
    return out;
}

void save_assignments(const ClusterModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path);
    }
    out << "utt_id,cluster_id\n";
    for (const auto& [id, cluster] : model.assignments) {
        out << csv::escape(id) << "," << cluster << "\n";
    }
}

void save_cluster_model(const ClusterModel& model, const std::string& path) {
    nlohmann::ordered_json doc;
    doc["params"] = {{"min-cluster-size", model.params.min_cluster_size},
                     {"min-samples", model.params.min_samples},
                     {"merge-threshold", model.params.merge_threshold},
                     {"reduced-dim", model.params.reduced_dim},
                     {"normalized", model.params.normalized}};
    doc["all-noise"] = model.all_noise;
    auto centroids = nlohmann::ordered_json::object();
    for (const auto& [cluster, centroid] : model.centroids) {
        auto arr = nlohmann::ordered_json::array();
        for (Eigen::Index i = 0; i < centroid.size(); ++i) {
            arr.push_back(centroid[i]);
        }
        centroids[std::to_string(cluster)] = std::move(arr);
    }
    doc["centroids"] = std::move(centroids);
    auto log = nlohmann::ordered_json::array();
    for (const auto& step : model.merge_log) {
        log.push_back({{"merged", {step.first, step.second}},
                       {"new-id", step.new_id},
                       {"similarity", step.similarity}});
    }
    doc["merge-log"] = std::move(log);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path);
    }
    out << doc.dump(2) << "\n";
}

ClusterModel load_cluster_model(const std::string& model_path,
                                const std::string& assignments_path) {
    std::ifstream in(model_path);
    if (!in) {
        throw Error(ErrorCode::MissingFile, "cannot open " + model_path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::SchemaViolation, model_path + ": " + ex.what());
    }
    ClusterModel model;
    try {
        const auto& params = doc.at("params");
        model.params.min_cluster_size = params.at("min-cluster-size").get<int>();
        model.params.min_samples = params.at("min-samples").get<int>();
        model.params.merge_threshold = params.at("merge-threshold").get<double>();
        model.params.reduced_dim = params.at("reduced-dim").get<int>();
        model.params.normalized = params.at("normalized").get<bool>();
        model.all_noise = doc.at("all-noise").get<bool>();
        for (const auto& [key, arr] : doc.at("centroids").items()) {
            Eigen::VectorXd centroid(arr.size());
            Eigen::Index i = 0;
            for (const auto& value : arr) {
                centroid[i++] = value.get<double>();
            }
            model.centroids.emplace(std::stoi(key), std::move(centroid));
        }
        for (const auto& step : doc.at("merge-log")) {
            model.merge_log.push_back({step.at("merged").at(0).get<int>(),
                                       step.at("merged").at(1).get<int>(),
                                       step.at("new-id").get<int>(),
                                       step.at("similarity").get<double>()});
        }
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::SchemaViolation, model_path + ": " + ex.what());
    }

    const auto rows = csv::read_file(assignments_path);
    if (rows.empty() || rows.front() != csv::Row{"utt_id", "cluster_id"}) {
        throw Error(ErrorCode::SchemaViolation,
                    assignments_path + ": header must be utt_id,cluster_id");
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != 2) {
            throw Error(ErrorCode::SchemaViolation,
                        assignments_path + " row " + std::to_string(r + 1) +
                            ": expected 2 fields");
        }
        try {
            model.assignments[rows[r][0]] = std::stoi(rows[r][1]);
        } catch (const std::exception&) {
            throw Error(ErrorCode::SchemaViolation,
                        assignments_path + " row " + std::to_string(r + 1) +
                            ": cluster_id not an integer");
        }
    }
    return model;
}

} // namespace dcla
