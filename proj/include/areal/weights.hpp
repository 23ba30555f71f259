#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "areal/distance.hpp"
#include "areal/units.hpp"

namespace areal {

enum class WeightKind { adjacency, knn, distance_band, inverse_distance };

std::string weight_kind_name(WeightKind kind);

struct WeightBuilderInfo {
    WeightKind kind = WeightKind::adjacency;
    int k = 0;               // knn
    double d0 = 0.0;         // distance_band
    double alpha = 0.0;      // inverse_distance
    std::string contiguity;  // "queen" | "rook" | "edge_list" for adjacency
};

/// Sparse nonnegative spatial-influence matrix (CSR, zero diagonal).
/// Carries builder provenance, the standardization state, and the sums
/// S0 = sum w_ij, S1 = 1/2 sum (w_ij + w_ji)^2, S2 = sum_i (r_i + c_i)^2.
class WeightMatrix {
public:
    struct Triplet {
        int i, j;
        double w;
    };

    WeightMatrix(int n, std::vector<Triplet> entries, WeightBuilderInfo builder,
                 bool standardized = false);

    int n() const { return n_; }
    int nnz() const { return static_cast<int>(col_.size()); }
    std::span<const int> neighbors(int i) const {
        return {col_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
    }
    std::span<const double> weights(int i) const {
        return {val_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
    }
    int degree(int i) const { return row_ptr_[i + 1] - row_ptr_[i]; }
    double at(int i, int j) const;  // 0 when absent
    double row_sum(int i) const;

    bool standardized() const { return standardized_; }
    bool has_islands() const { return has_islands_; }
    const WeightBuilderInfo& builder() const { return builder_; }

    double s0() const { return s0_; }
    double s1() const { return s1_; }
    double s2() const { return s2_; }

    /// w_ij > 0 iff w_ji > 0 for all pairs.
    bool pattern_symmetric() const;
    bool value_symmetric(double tol = 0.0) const;

    /// Entries sorted by (i, j).
    std::vector<Triplet> triplets() const;

private:
    int n_ = 0;
    std::vector<int> row_ptr_, col_;
    std::vector<double> val_;
    bool standardized_ = false;
    bool has_islands_ = false;
    WeightBuilderInfo builder_;
    double s0_ = 0.0, s1_ = 0.0, s2_ = 0.0;
};

enum class Contiguity { queen, rook };

/// 0-1 adjacency from explicit id pairs.
WeightMatrix build_adjacency_edges(const UnitCollection& units,
                                   const std::vector<std::pair<std::string, std::string>>& edges);

/// 0-1 adjacency from polygon contiguity.  Queen: shared vertex within a
/// 1e-9 snap tolerance; rook: shared edge segment.
WeightMatrix build_adjacency_contiguity(const UnitCollection& units, Contiguity rule);

/// w_ij = 1 when j is one of the k nearest neighbours of i; ties at the
/// k-th distance break by ascending unit index.
WeightMatrix build_knn(const UnitCollection& units, int k, Metric metric);

/// w_ij = 1 when d_ij < d0 (strict).
WeightMatrix build_distance_band(const UnitCollection& units, double d0, Metric metric);

/// w_ij = d_ij^(-alpha).
WeightMatrix build_inverse_distance(const UnitCollection& units, double alpha, Metric metric);

/// Divides every nonzero row by its sum; zero rows stay zero.  Idempotent.
WeightMatrix row_standardize(const WeightMatrix& w);

/// {n, standardized, builder:{kind, params}, entries:[[i,j,w],...]}
nlohmann::json weights_to_json(const WeightMatrix& w);
WeightMatrix weights_from_json(const nlohmann::json& j);

/// One "id_i<TAB>id_j" pair per line; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_edge_list(const std::string& path);

}  // namespace areal
