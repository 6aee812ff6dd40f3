#include "dcla/cluster.hpp"
#include "dcla/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace dcla {

namespace {

// Distances at or below this are treated as coincident points; keeps the
// lambda = 1/distance transform finite for duplicate inputs.
constexpr double kMinSplitDistance = 1e-12;

double to_lambda(double distance) {
    return 1.0 / std::max(distance, kMinSplitDistance);
}

struct DendroNode {
    int left = -1;   // < n: leaf index, otherwise dendrogram node
    int right = -1;
    double distance = 0.0;
    int size = 1;
};

struct CondensedCluster {
    int parent = -1;
    double birth_lambda = 0.0;
    long long size = 0;
    std::vector<int> children;
    std::vector<std::pair<int, double>> points; // (point index, lambda at exit)
    double stability = 0.0;
};

// Builds the single-linkage dendrogram from MST edges sorted ascending.
// Leaves are 0..n-1; internal nodes n..2n-2; returns the node table.
std::vector<DendroNode> single_linkage(int n,
                                       std::vector<std::tuple<double, int, int>> edges) {
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
        if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
        return std::get<2>(a) < std::get<2>(b);
    });

    std::vector<DendroNode> nodes(2 * n - 1);
    std::vector<int> rep(2 * n - 1);
    std::iota(rep.begin(), rep.end(), 0);

    // path-compressing find
    auto find = [&rep](int x) {
        int root = x;
        while (rep[root] != root) root = rep[root];
        while (rep[x] != root) {
            int next = rep[x];
            rep[x] = root;
            x = next;
        }
        return root;
    };

    int next_node = n;
    for (const auto& [w, u, v] : edges) {
        const int ru = find(u);
        const int rv = find(v);
        DendroNode& parent = nodes[next_node];
        parent.left = ru;
        parent.right = rv;
        parent.distance = w;
        parent.size = nodes[ru].size + nodes[rv].size;
        rep[ru] = next_node;
        rep[rv] = next_node;
        ++next_node;
    }
    return nodes;
}

void collect_leaves(const std::vector<DendroNode>& nodes, int n, int start,
                    std::vector<int>& out) {
    std::vector<int> stack{start};
    while (!stack.empty()) {
        const int m = stack.back();
        stack.pop_back();
        if (m < n) {
            out.push_back(m);
            continue;
        }
        stack.push_back(nodes[m].left);
        stack.push_back(nodes[m].right);
    }
}

// Condensed tree: cluster 0 is the root holding all points; true splits
// (both sides >= min_cluster_size) create child clusters, smaller side
// points fall out at the split lambda.
std::vector<CondensedCluster> condense(const std::vector<DendroNode>& nodes, int n,
                                       int min_cluster_size) {
    std::vector<CondensedCluster> clusters(1);
    clusters[0].parent = -1;
    clusters[0].birth_lambda = 0.0;
    clusters[0].size = n;

    std::vector<std::pair<int, int>> stack; // (dendrogram node, condensed cluster)
    stack.emplace_back(2 * n - 2, 0);
    while (!stack.empty()) {
        auto [m, c] = stack.back();
        stack.pop_back();
        const DendroNode& node = nodes[m];
        const double lambda = to_lambda(node.distance);
        const int left = node.left;
        const int right = node.right;
        const int left_size = left < n ? 1 : nodes[left].size;
        const int right_size = right < n ? 1 : nodes[right].size;
        const bool left_big = left_size >= min_cluster_size;
        const bool right_big = right_size >= min_cluster_size;

        if (left_big && right_big) {
            for (int child : {left, right}) {
                const int id = static_cast<int>(clusters.size());
                CondensedCluster cc;
                cc.parent = c;
                cc.birth_lambda = lambda;
                cc.size = child < n ? 1 : nodes[child].size;
                clusters.push_back(std::move(cc));
                clusters[c].children.push_back(id);
                stack.emplace_back(child, id);
            }
            continue;
        }
        std::vector<int> fell;
        if (!left_big) {
            collect_leaves(nodes, n, left, fell);
        }
        if (!right_big) {
            collect_leaves(nodes, n, right, fell);
        }
        std::sort(fell.begin(), fell.end());
        for (int p : fell) {
            clusters[c].points.emplace_back(p, lambda);
        }
        if (left_big) {
            stack.emplace_back(left, c);
        } else if (right_big) {
            stack.emplace_back(right, c);
        }
    }

    for (auto& cluster : clusters) {
        double s = 0.0;
        for (const auto& [_, lambda] : cluster.points) {
            s += lambda - cluster.birth_lambda;
        }
        for (int child : cluster.children) {
            s += (clusters[child].birth_lambda - cluster.birth_lambda) *
                 static_cast<double>(clusters[child].size);
        }
        cluster.stability = s;
    }
    return clusters;
}

// Excess-of-mass selection over all clusters except the root. Children first;
// a parent is kept when its stability reaches the sum of its subtree's.
std::vector<int> extract_eom(const std::vector<CondensedCluster>& clusters) {
    const int nc = static_cast<int>(clusters.size());
    std::vector<bool> selected(nc, false);
    std::vector<double> subtree(nc, 0.0);
    for (int c = nc - 1; c >= 1; --c) {
        if (clusters[c].children.empty()) {
            selected[c] = true;
            subtree[c] = clusters[c].stability;
            continue;
        }
        double child_sum = 0.0;
        for (int child : clusters[c].children) {
            child_sum += subtree[child];
        }
        if (clusters[c].stability >= child_sum) {
            selected[c] = true;
            subtree[c] = clusters[c].stability;
        } else {
            subtree[c] = child_sum;
        }
    }

    // Keep the shallowest selected clusters; never the root.
    std::vector<int> chosen;
    std::vector<int> stack(clusters[0].children.rbegin(), clusters[0].children.rend());
    while (!stack.empty()) {
        const int c = stack.back();
        stack.pop_back();
        if (selected[c]) {
            chosen.push_back(c);
            continue;
        }
        for (auto it = clusters[c].children.rbegin(); it != clusters[c].children.rend(); ++it) {
            stack.push_back(*it);
        }
    }
    return chosen;
}

} // namespace

ClusterModel hdbscan_fit(const EmbeddingSet& points, int min_cluster_size, int min_samples) {
    if (min_cluster_size < 2) {
        throw Error(ErrorCode::InvalidConfig, "min_cluster_size must be >= 2");
    }
    if (min_samples < 1) {
        throw Error(ErrorCode::InvalidConfig, "min_samples must be >= 1");
    }

    ClusterModel model;
    model.params.min_cluster_size = min_cluster_size;
    model.params.min_samples = min_samples;
    model.params.reduced_dim = points.dim;
    model.params.normalized = points.normalized;

    const std::vector<std::string> ids = points.ids();
    const int n = static_cast<int>(ids.size());
    for (const auto& id : ids) {
        model.assignments[id] = kNoise;
    }
    if (n < min_cluster_size) {
        model.all_noise = true;
        return model;
    }

    const Eigen::MatrixXd data = points.matrix();

    // Core distances: distance to the min_samples-th nearest neighbor, the
    // point itself counting as its own first neighbor.
    const int k = std::min(min_samples, n);
    std::vector<double> core(n, 0.0);
    {
        std::vector<double> row(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                row[j] = (data.row(i) - data.row(j)).norm();
            }
            std::nth_element(row.begin(), row.begin() + (k - 1), row.end());
            core[i] = row[k - 1];
        }
    }

    // Prim's MST over the complete mutual-reachability graph; ties resolve
    // toward the smallest point index.
    std::vector<std::tuple<double, int, int>> mst;
    mst.reserve(n - 1);
    {
        std::vector<bool> in_tree(n, false);
        std::vector<double> best(n, std::numeric_limits<double>::infinity());
        std::vector<int> link(n, 0);
        in_tree[0] = true;
        for (int j = 1; j < n; ++j) {
            const double d = (data.row(0) - data.row(j)).norm();
            best[j] = std::max({core[0], core[j], d});
        }
        for (int step = 1; step < n; ++step) {
            int pick = -1;
            for (int j = 0; j < n; ++j) {
                if (!in_tree[j] && (pick < 0 || best[j] < best[pick])) {
                    pick = j;
                }
            }
            in_tree[pick] = true;
            mst.emplace_back(best[pick], std::min(link[pick], pick),
                             std::max(link[pick], pick));
            for (int j = 0; j < n; ++j) {
                if (in_tree[j]) {
                    continue;
                }
                const double d = (data.row(pick) - data.row(j)).norm();
                const double mr = std::max({core[pick], core[j], d});
                if (mr < best[j]) {
                    best[j] = mr;
                    link[j] = pick;
                }
            }
        }
    }

    const auto dendrogram = single_linkage(n, std::move(mst));
    const auto condensed = condense(dendrogram, n, min_cluster_size);
    const auto chosen = extract_eom(condensed);
    if (chosen.empty()) {
        model.all_noise = true;
        return model;
    }

    // Point index -> chosen cluster via the nearest chosen ancestor of the
    // condensed cluster the point fell out of.
    std::vector<int> owner(condensed.size(), -1);
    for (int c : chosen) {
        owner[c] = c;
    }
    std::vector<int> point_cluster(n, -1);
    for (std::size_t c = 0; c < condensed.size(); ++c) {
        // resolve nearest chosen ancestor for cluster c
        int cur = static_cast<int>(c);
        int found = -1;
        while (cur != -1) {
            if (owner[cur] != -1) {
                found = owner[cur];
                break;
            }
            cur = condensed[cur].parent;
        }
        if (found == -1) {
            continue;
        }
        for (const auto& [p, _] : condensed[c].points) {
            point_cluster[p] = found;
        }
    }

    // Canonical labels: ascending order of the smallest member id.
    std::map<int, int> relabel;
    for (int p = 0; p < n; ++p) {
        if (point_cluster[p] != -1 && !relabel.count(point_cluster[p])) {
            const int next = static_cast<int>(relabel.size());
            relabel[point_cluster[p]] = next;
        }
    }
    std::map<int, std::pair<Eigen::VectorXd, long long>> sums;
    for (int p = 0; p < n; ++p) {
        if (point_cluster[p] == -1) {
            continue;
        }
        const int label = relabel.at(point_cluster[p]);
        model.assignments[ids[p]] = label;
        auto it = sums.find(label);
        if (it == sums.end()) {
            sums.emplace(label, std::make_pair(data.row(p).transpose().eval(), 1LL));
        } else {
            it->second.first += data.row(p).transpose();
            it->second.second += 1;
        }
    }
    for (const auto& [label, acc] : sums) {
        model.centroids[label] = acc.first / static_cast<double>(acc.second);
    }
    return model;
}

} // namespace dcla
