#pragma once

#include <cstdint>
#include <vector>

namespace rw2 {

/// Primal network simplex on the dense bipartite transportation graph,
/// following the classic LEMON spanning-tree implementation (parent/thread
/// indices, block-search pivot rule). Deterministic: the pivot scan order is
/// fixed, so identical inputs give identical bases and plans.
class NetworkSimplex {
public:
    enum class Status { success, supply_mismatch, infeasible, unbounded, max_iter };

    NetworkSimplex(std::int64_t n_sources, std::int64_t n_sinks);

    /// Row-major n_sources x n_sinks arc costs; fill before solve().
    std::vector<double>& costs() { return cost_; }

    /// Node supplies: first the sources (positive), then the sinks given as
    /// positive demands (negated internally).
    std::vector<double>& supplies() { return supply_; }

    Status solve();

    double total_cost() const { return total_cost_; }

    /// Flow per arc in the same row-major layout as costs().
    const std::vector<double>& flows() const { return flow_; }

private:
    using Node = std::int64_t;
    using Arc = std::int64_t;

    static constexpr Arc kInvalid = -1;
    enum ArcState : signed char { kStateUpper = -1, kStateTree = 0, kStateLower = 1 };

    Node source_of(Arc a) const { return a / n_sinks_; }
    Node target_of(Arc a) const { return a % n_sinks_ + n_sources_; }

    bool find_entering_arc();
    void find_join_node();
    bool find_leaving_arc();
    void change_flow(bool basis_change);
    void update_tree();
    void update_potentials();
    bool initial_pivots();

    Node n_sources_, n_sinks_, node_num_;
    Arc arc_num_;

    std::vector<double> cost_, supply_, flow_, pi_;
    std::vector<Node> source_, target_;

    // Spanning-tree bookkeeping.
    std::vector<Node> parent_, thread_, rev_thread_, succ_num_, last_succ_, dirty_revs_;
    std::vector<Arc> pred_;
    std::vector<char> forward_;
    std::vector<signed char> state_;

    // Pivot state.
    Arc next_arc_ = 0, in_arc_ = 0;
    Arc block_size_ = 0;
    Node join_ = 0, u_in_ = 0, v_in_ = 0, u_out_ = 0, v_out_ = 0;
    double delta_ = 0.0;

    double total_cost_ = 0.0;
    std::uint64_t max_iter_ = 0;
    double eps_small_ = 0.0, eps_large_ = 0.0;
};

} // namespace rw2
