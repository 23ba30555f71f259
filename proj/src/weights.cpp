#include "areal/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "areal/error.hpp"

namespace areal {

std::string weight_kind_name(WeightKind kind) {
    switch (kind) {
        case WeightKind::adjacency: return "adjacency";
        case WeightKind::knn: return "knn";
        case WeightKind::distance_band: return "distance_band";
        case WeightKind::inverse_distance: return "inverse_distance";
    }
    return "?";
}

WeightMatrix::WeightMatrix(int n, std::vector<Triplet> entries, WeightBuilderInfo builder,
                           bool standardized)
    : n_(n), standardized_(standardized), builder_(std::move(builder)) {
    if (n < 2) throw DataError("weight matrix needs n >= 2");
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
    col_.reserve(entries.size());
    val_.reserve(entries.size());
    int prev_i = -1, prev_j = -1;
    for (const auto& e : entries) {
        if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n)
            throw DataError("weight entry index out of range");
        if (e.i == e.j) throw DataError("weight matrix diagonal must be zero");
        if (e.w < 0.0 || !std::isfinite(e.w))
            throw DataError("weights must be finite and nonnegative");
        if (e.i == prev_i && e.j == prev_j) throw DataError("duplicate weight entry");
        prev_i = e.i;
        prev_j = e.j;
        if (e.w == 0.0) continue;  // keep the matrix truly sparse
        ++row_ptr_[static_cast<std::size_t>(e.i) + 1];
        col_.push_back(e.j);
        val_.push_back(e.w);
    }
    for (int i = 0; i < n; ++i) row_ptr_[static_cast<std::size_t>(i) + 1] += row_ptr_[static_cast<std::size_t>(i)];

    // derived sums and the island flag
    std::vector<double> rs(static_cast<std::size_t>(n), 0.0), cs(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int t = row_ptr_[i]; t < row_ptr_[i + 1]; ++t) {
            rs[static_cast<std::size_t>(i)] += val_[static_cast<std::size_t>(t)];
            cs[static_cast<std::size_t>(col_[static_cast<std::size_t>(t)])] += val_[static_cast<std::size_t>(t)];
        }
        if (row_ptr_[i] == row_ptr_[i + 1]) has_islands_ = true;
    }
    s0_ = std::accumulate(rs.begin(), rs.end(), 0.0);
    if (s0_ <= 0.0) throw DataError("weight matrix has S0 = 0 (no positive weights)");
    for (int i = 0; i < n; ++i) {
        for (int t = row_ptr_[i]; t < row_ptr_[i + 1]; ++t) {
            const double wij = val_[static_cast<std::size_t>(t)];
            const double wji = at(col_[static_cast<std::size_t>(t)], i);
            s1_ += 0.5 * (wij + wji) * (wij + wji);
            // the ordered pair (j, i) is never visited when w_ji = 0
            if (wji == 0.0) s1_ += 0.5 * wij * wij;
        }
        const double rc = rs[static_cast<std::size_t>(i)] + cs[static_cast<std::size_t>(i)];
        s2_ += rc * rc;
    }
    if (standardized_) {
        for (int i = 0; i < n; ++i) {
            const double r = rs[static_cast<std::size_t>(i)];
            if (r > 0.0 && std::fabs(r - 1.0) > 1e-12)
                throw DataError("standardized weight matrix has a row not summing to 1");
        }
    }
}

double WeightMatrix::at(int i, int j) const {
    const int lo = row_ptr_[i], hi = row_ptr_[i + 1];
    auto begin = col_.begin() + lo, end = col_.begin() + hi;
    auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return 0.0;
    return val_[static_cast<std::size_t>(lo + (it - begin))];
}

double WeightMatrix::row_sum(int i) const {
    double s = 0.0;
    for (double w : weights(i)) s += w;
    return s;
}

bool WeightMatrix::pattern_symmetric() const {
    for (int i = 0; i < n_; ++i)
        for (int t = row_ptr_[i]; t < row_ptr_[i + 1]; ++t)
            if (at(col_[static_cast<std::size_t>(t)], i) <= 0.0) return false;
    return true;
}

bool WeightMatrix::value_symmetric(double tol) const {
    for (int i = 0; i < n_; ++i)
        for (int t = row_ptr_[i]; t < row_ptr_[i + 1]; ++t)
            if (std::fabs(at(col_[static_cast<std::size_t>(t)], i) - val_[static_cast<std::size_t>(t)]) > tol)
                return false;
    return true;
}

std::vector<WeightMatrix::Triplet> WeightMatrix::triplets() const {
    std::vector<Triplet> out;
    out.reserve(col_.size());
    for (int i = 0; i < n_; ++i)
        for (int t = row_ptr_[i]; t < row_ptr_[i + 1]; ++t)
            out.push_back({i, col_[static_cast<std::size_t>(t)], val_[static_cast<std::size_t>(t)]});
    return out;
}

WeightMatrix build_adjacency_edges(const UnitCollection& units,
                                   const std::vector<std::pair<std::string, std::string>>& edges) {
    std::vector<WeightMatrix::Triplet> entries;
    std::map<std::pair<int, int>, bool> seen;
    for (const auto& [a, b] : edges) {
        const int i = units.index_of(a);
        const int j = units.index_of(b);
        if (i < 0) throw DataError("edge list references unknown id: " + a);
        if (j < 0) throw DataError("edge list references unknown id: " + b);
        if (i == j) throw DataError("edge list contains a self-loop at id: " + a);
        for (auto [p, q] : {std::pair{i, j}, std::pair{j, i}}) {
            if (!seen.emplace(std::pair{p, q}, true).second) continue;
            entries.push_back({p, q, 1.0});
        }
    }
    return WeightMatrix(units.size(), std::move(entries),
                        WeightBuilderInfo{WeightKind::adjacency, 0, 0.0, 0.0, "edge_list"});
}

namespace {

// 1e-9 snap grid so floating-point seams in polygon files still match up.
using SnapPoint = std::pair<long long, long long>;

SnapPoint snap(const Point& p) {
    return {std::llround(p.x * 1e9), std::llround(p.y * 1e9)};
}

}  // namespace

WeightMatrix build_adjacency_contiguity(const UnitCollection& units, Contiguity rule) {
    const int n = units.size();
    for (int i = 0; i < n; ++i)
        if (units[i].polygon.empty())
            throw DataError("polygon contiguity requires polygons on all units; unit " +
                            units[i].id + " has none");

    std::map<std::pair<int, int>, bool> linked;
    auto link = [&](int a, int b) {
        if (a == b) return;
        linked.emplace(std::pair{std::min(a, b), std::max(a, b)}, true);
    };

    if (rule == Contiguity::queen) {
        std::map<SnapPoint, std::vector<int>> owners;
        for (int i = 0; i < n; ++i)
            for (const auto& ring : units[i].polygon)
                for (std::size_t v = 0; v + 1 < ring.size(); ++v)  // skip closing duplicate
                    owners[snap(ring[v])].push_back(i);
        for (auto& [_, ids] : owners) {
            std::sort(ids.begin(), ids.end());
            ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
            for (std::size_t a = 0; a < ids.size(); ++a)
                for (std::size_t b = a + 1; b < ids.size(); ++b) link(ids[a], ids[b]);
        }
    } else {
        std::map<std::pair<SnapPoint, SnapPoint>, std::vector<int>> owners;
        for (int i = 0; i < n; ++i)
            for (const auto& ring : units[i].polygon)
                for (std::size_t v = 0; v + 1 < ring.size(); ++v) {
                    auto p = snap(ring[v]), q = snap(ring[v + 1]);
                    if (q < p) std::swap(p, q);
                    if (p != q) owners[{p, q}].push_back(i);
                }
        for (auto& [_, ids] : owners) {
            std::sort(ids.begin(), ids.end());
            ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
            for (std::size_t a = 0; a < ids.size(); ++a)
                for (std::size_t b = a + 1; b < ids.size(); ++b) link(ids[a], ids[b]);
        }
    }

    std::vector<WeightMatrix::Triplet> entries;
    entries.reserve(2 * linked.size());
    for (const auto& [pair, _] : linked) {
        entries.push_back({pair.first, pair.second, 1.0});
        entries.push_back({pair.second, pair.first, 1.0});
    }
    return WeightMatrix(n, std::move(entries),
                        WeightBuilderInfo{WeightKind::adjacency, 0, 0.0, 0.0,
                                          rule == Contiguity::queen ? "queen" : "rook"});
}

WeightMatrix build_knn(const UnitCollection& units, int k, Metric metric) {
    require_metric_match(units, metric);
    const int n = units.size();
    if (k < 1) throw ConfigError("knn requires k >= 1");
    if (k >= n) throw ConfigError("knn requires k <= n-1 (got k=" + std::to_string(k) +
                                  ", n=" + std::to_string(n) + ")");
    std::vector<WeightMatrix::Triplet> entries;
    entries.reserve(static_cast<std::size_t>(n) * k);
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto row = distance_row(units, i, metric);
        std::iota(order.begin(), order.end(), 0);
        order.erase(order.begin() + i);
        // ties at the k-th distance break by ascending unit index
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return row[static_cast<std::size_t>(a)] != row[static_cast<std::size_t>(b)]
                       ? row[static_cast<std::size_t>(a)] < row[static_cast<std::size_t>(b)]
                       : a < b;
        });
        for (int t = 0; t < k; ++t) entries.push_back({i, order[static_cast<std::size_t>(t)], 1.0});
        order.resize(static_cast<std::size_t>(n));
    }
    return WeightMatrix(n, std::move(entries), WeightBuilderInfo{WeightKind::knn, k, 0.0, 0.0, ""});
}

WeightMatrix build_distance_band(const UnitCollection& units, double d0, Metric metric) {
    require_metric_match(units, metric);
    if (!(d0 > 0.0)) throw ConfigError("distance band requires d0 > 0");
    const int n = units.size();
    std::vector<WeightMatrix::Triplet> entries;
    for (int i = 0; i < n; ++i) {
        const auto row = distance_row(units, i, metric);
        for (int j = 0; j < n; ++j)
            if (j != i && row[static_cast<std::size_t>(j)] < d0) entries.push_back({i, j, 1.0});
    }
    return WeightMatrix(n, std::move(entries),
                        WeightBuilderInfo{WeightKind::distance_band, 0, d0, 0.0, ""});
}

WeightMatrix build_inverse_distance(const UnitCollection& units, double alpha, Metric metric) {
    require_metric_match(units, metric);
    if (!(alpha > 0.0)) throw ConfigError("inverse distance requires alpha > 0");
    const int n = units.size();
    std::vector<WeightMatrix::Triplet> entries;
    entries.reserve(static_cast<std::size_t>(n) * (n - 1));
    for (int i = 0; i < n; ++i) {
        const auto row = distance_row(units, i, metric);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = row[static_cast<std::size_t>(j)];
            if (d == 0.0)
                throw DataError("units " + units[i].id + " and " + units[j].id +
                                " share a centroid; inverse distance weight undefined");
            entries.push_back({i, j, std::pow(d, -alpha)});
        }
    }
    return WeightMatrix(n, std::move(entries),
                        WeightBuilderInfo{WeightKind::inverse_distance, 0, 0.0, alpha, ""});
}

WeightMatrix row_standardize(const WeightMatrix& w) {
    if (w.standardized()) return w;
    std::vector<WeightMatrix::Triplet> entries = w.triplets();
    std::vector<double> rs(static_cast<std::size_t>(w.n()), 0.0);
    for (const auto& e : entries) rs[static_cast<std::size_t>(e.i)] += e.w;
    for (auto& e : entries)
        if (rs[static_cast<std::size_t>(e.i)] > 0.0) e.w /= rs[static_cast<std::size_t>(e.i)];
    return WeightMatrix(w.n(), std::move(entries), w.builder(), true);
}

nlohmann::json weights_to_json(const WeightMatrix& w) {
    nlohmann::json params = nlohmann::json::object();
    const auto& b = w.builder();
    switch (b.kind) {
        case WeightKind::adjacency: params["contiguity"] = b.contiguity; break;
        case WeightKind::knn: params["k"] = b.k; break;
        case WeightKind::distance_band: params["d0"] = b.d0; break;
        case WeightKind::inverse_distance: params["alpha"] = b.alpha; break;
    }
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : w.triplets()) entries.push_back({e.i, e.j, e.w});
    return nlohmann::json{{"n", w.n()},
                          {"standardized", w.standardized()},
                          {"builder", {{"kind", weight_kind_name(b.kind)}, {"params", params}}},
                          {"entries", entries}};
}

WeightMatrix weights_from_json(const nlohmann::json& j) {
    try {
        const int n = j.at("n").get<int>();
        const bool standardized = j.at("standardized").get<bool>();
        const auto& builder = j.at("builder");
        const std::string kind = builder.at("kind").get<std::string>();
        WeightBuilderInfo info;
        const auto& params = builder.at("params");
        if (kind == "adjacency") {
            info.kind = WeightKind::adjacency;
            info.contiguity = params.value("contiguity", "");
        } else if (kind == "knn") {
            info.kind = WeightKind::knn;
            info.k = params.value("k", 0);
        } else if (kind == "distance_band") {
            info.kind = WeightKind::distance_band;
            info.d0 = params.value("d0", 0.0);
        } else if (kind == "inverse_distance") {
            info.kind = WeightKind::inverse_distance;
            info.alpha = params.value("alpha", 0.0);
        } else {
            throw DataError("unknown weight builder kind: " + kind);
        }
        std::vector<WeightMatrix::Triplet> entries;
        for (const auto& e : j.at("entries"))
            entries.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
        return WeightMatrix(n, std::move(entries), info, standardized);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed weights JSON: ") + e.what());
    }
}

std::vector<std::pair<std::string, std::string>> read_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open edge list: " + path);
    std::vector<std::pair<std::string, std::string>> edges;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw DataError("edge list line " + std::to_string(lineno) + ": expected id<TAB>id");
        edges.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return edges;
}

}  // namespace areal
