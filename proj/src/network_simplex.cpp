#include "rw2/network_simplex.hpp"

#include "rw2/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rw2 {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

NetworkSimplex::NetworkSimplex(std::int64_t n_sources, std::int64_t n_sinks)
    : n_sources_(n_sources), n_sinks_(n_sinks) {
    if (n_sources < 1 || n_sinks < 1) throw input_error("NetworkSimplex: empty side");
    node_num_ = n_sources_ + n_sinks_;
    arc_num_ = n_sources_ * n_sinks_;
    cost_.assign(static_cast<std::size_t>(arc_num_), 0.0);
    supply_.assign(static_cast<std::size_t>(node_num_), 0.0);
    eps_small_ = std::numeric_limits<double>::epsilon();
    eps_large_ = 1e3 * std::numeric_limits<double>::epsilon();
    max_iter_ = 1000000ull + 64ull * static_cast<std::uint64_t>(arc_num_);
}

NetworkSimplex::Status NetworkSimplex::solve() {
    const Node all_nodes = node_num_ + 1; // extra root
    const Arc all_arcs = arc_num_ + node_num_;

    pi_.assign(static_cast<std::size_t>(all_nodes), 0.0);
    parent_.assign(static_cast<std::size_t>(all_nodes), 0);
    thread_.assign(static_cast<std::size_t>(all_nodes), 0);
    rev_thread_.assign(static_cast<std::size_t>(all_nodes), 0);
    succ_num_.assign(static_cast<std::size_t>(all_nodes), 0);
    last_succ_.assign(static_cast<std::size_t>(all_nodes), 0);
    pred_.assign(static_cast<std::size_t>(all_nodes), kInvalid);
    forward_.assign(static_cast<std::size_t>(all_nodes), 0);
    supply_.resize(static_cast<std::size_t>(all_nodes));

    cost_.resize(static_cast<std::size_t>(all_arcs));
    flow_.assign(static_cast<std::size_t>(all_arcs), 0.0);
    state_.assign(static_cast<std::size_t>(all_arcs), kStateLower);
    source_.resize(static_cast<std::size_t>(all_arcs));
    target_.resize(static_cast<std::size_t>(all_arcs));
    for (Arc a = 0; a < arc_num_; ++a) {
        source_[a] = source_of(a);
        target_[a] = target_of(a);
    }

    // Sinks carry demands: negate and require overall balance.
    double sum_supplies = 0.0;
    for (Node u = 0; u < n_sources_; ++u) sum_supplies += supply_[u];
    for (Node u = n_sources_; u < node_num_; ++u) sum_supplies += (supply_[u] = -supply_[u]);
    if (std::fabs(sum_supplies) > eps_large_) return Status::supply_mismatch;

    const double art_cost =
        (*std::max_element(cost_.begin(), cost_.begin() + arc_num_) + 1.0) * node_num_;

    // Artificial root with one equality arc per node.
    const Node root = node_num_;
    parent_[root] = kInvalid;
    pred_[root] = kInvalid;
    thread_[root] = 0;
    rev_thread_[0] = root;
    succ_num_[root] = node_num_ + 1;
    last_succ_[root] = root - 1;
    supply_[root] = -sum_supplies;
    pi_[root] = 0.0;

    Arc e = arc_num_;
    for (Node u = 0; u < node_num_; ++u, ++e) {
        parent_[u] = root;
        pred_[u] = e;
        thread_[u] = u + 1;
        rev_thread_[u + 1] = u;
        succ_num_[u] = 1;
        last_succ_[u] = u;
        state_[e] = kStateTree;
        if (supply_[u] >= 0.0) {
            forward_[u] = 1;
            pi_[u] = 0.0;
            source_[e] = u;
            target_[e] = root;
            flow_[e] = supply_[u];
            cost_[e] = 0.0;
        } else {
            forward_[u] = 0;
            pi_[u] = art_cost;
            source_[e] = root;
            target_[e] = u;
            flow_[e] = -supply_[u];
            cost_[e] = art_cost;
        }
    }

    next_arc_ = 0;
    block_size_ = std::max<Arc>(static_cast<Arc>(std::sqrt(static_cast<double>(arc_num_))), 10);

    if (!initial_pivots()) return Status::unbounded;

    std::uint64_t iter = 0;
    while (find_entering_arc()) {
        if (iter++ >= max_iter_) return Status::max_iter;
        find_join_node();
        bool change = find_leaving_arc();
        if (delta_ >= kInf) return Status::unbounded;
        change_flow(change);
        if (change) {
            update_tree();
            update_potentials();
        }
    }

    // Artificial arcs must end up empty (up to roundoff).
    for (Arc a = arc_num_; a < all_arcs; ++a) {
        if (flow_[a] != 0.0) {
            if (std::fabs(flow_[a]) > eps_large_) return Status::infeasible;
            flow_[a] = 0.0;
        }
    }

    total_cost_ = 0.0;
    for (Arc a = 0; a < arc_num_; ++a) total_cost_ += flow_[a] * cost_[a];
    return Status::success;
}

bool NetworkSimplex::find_entering_arc() {
    double min = 0.0;
    Arc e = next_arc_;
    Arc cnt = block_size_;
    auto accept = [&]() {
        double a = std::max(std::fabs(pi_[source_[in_arc_]]), std::fabs(pi_[target_[in_arc_]]));
        a = std::max(a, std::fabs(cost_[in_arc_]));
        return min < -eps_small_ * a;
    };
    for (Arc ind = 0; ind < arc_num_; ++ind, ++e) {
        if (e == arc_num_) e -= arc_num_;
        double c = state_[e] * (cost_[e] + pi_[source_[e]] - pi_[target_[e]]);
        if (c < min) {
            min = c;
            in_arc_ = e;
        }
        if (--cnt == 0) {
            if (accept()) {
                next_arc_ = e;
                return true;
            }
            cnt = block_size_;
        }
    }
    if (min < 0.0 && accept()) {
        next_arc_ = e;
        return true;
    }
    return false;
}

bool NetworkSimplex::initial_pivots() {
    // Heuristic: pivot in the cheapest incoming arc of each sink first.
    for (Node v = n_sources_; v < node_num_; ++v) {
        Arc best = kInvalid;
        double best_cost = std::numeric_limits<double>::max();
        for (Node u = 0; u < n_sources_; ++u) {
            Arc a = u * n_sinks_ + (v - n_sources_);
            if (cost_[a] < best_cost) {
                best_cost = cost_[a];
                best = a;
            }
        }
        if (best == kInvalid) continue;
        in_arc_ = best;
        if (state_[in_arc_] * (cost_[in_arc_] + pi_[source_[in_arc_]] - pi_[target_[in_arc_]]) >=
            0.0)
            continue;
        find_join_node();
        bool change = find_leaving_arc();
        if (delta_ >= kInf) return false;
        change_flow(change);
        if (change) {
            update_tree();
            update_potentials();
        }
    }
    return true;
}

void NetworkSimplex::find_join_node() {
    Node u = source_[in_arc_], v = target_[in_arc_];
    while (u != v) {
        if (succ_num_[u] < succ_num_[v])
            u = parent_[u];
        else
            v = parent_[v];
    }
    join_ = u;
}

bool NetworkSimplex::find_leaving_arc() {
    Node first, second;
    if (state_[in_arc_] == kStateLower) {
        first = source_[in_arc_];
        second = target_[in_arc_];
    } else {
        first = target_[in_arc_];
        second = source_[in_arc_];
    }
    delta_ = kInf;
    char result = 0;
    for (Node u = first; u != join_; u = parent_[u]) {
        double d = forward_[u] ? flow_[pred_[u]] : kInf;
        if (d < delta_) {
            delta_ = d;
            u_out_ = u;
            result = 1;
        }
    }
    for (Node u = second; u != join_; u = parent_[u]) {
        double d = forward_[u] ? kInf : flow_[pred_[u]];
        if (d <= delta_) {
            delta_ = d;
            u_out_ = u;
            result = 2;
        }
    }
    if (result == 1) {
        u_in_ = first;
        v_in_ = second;
    } else {
        u_in_ = second;
        v_in_ = first;
    }
    return result != 0;
}

void NetworkSimplex::change_flow(bool basis_change) {
    if (delta_ > 0.0) {
        double val = state_[in_arc_] * delta_;
        flow_[in_arc_] += val;
        for (Node u = source_[in_arc_]; u != join_; u = parent_[u])
            flow_[pred_[u]] += forward_[u] ? -val : val;
        for (Node u = target_[in_arc_]; u != join_; u = parent_[u])
            flow_[pred_[u]] += forward_[u] ? val : -val;
    }
    if (basis_change) {
        state_[in_arc_] = kStateTree;
        state_[pred_[u_out_]] = flow_[pred_[u_out_]] == 0.0 ? kStateLower : kStateUpper;
    } else {
        state_[in_arc_] = static_cast<signed char>(-state_[in_arc_]);
    }
}

void NetworkSimplex::update_tree() {
    Node u = last_succ_[u_in_];
    const Node old_rev_thread = rev_thread_[u_out_];
    const Node old_succ_num = succ_num_[u_out_];
    const Node old_last_succ = last_succ_[u_out_];
    v_out_ = parent_[u_out_];
    Node right = thread_[u];

    Node last;
    if (old_rev_thread == v_in_)
        last = thread_[last_succ_[u_out_]];
    else
        last = thread_[v_in_];

    // Re-thread the stem between u_in_ and u_out_, reversing parent pointers.
    thread_[v_in_] = u_in_;
    Node stem = u_in_;
    Node par_stem = v_in_;
    dirty_revs_.clear();
    dirty_revs_.push_back(v_in_);
    while (stem != u_out_) {
        Node new_stem = parent_[stem];
        thread_[u] = new_stem;
        dirty_revs_.push_back(u);

        Node w = rev_thread_[stem];
        thread_[w] = right;
        rev_thread_[right] = w;

        parent_[stem] = par_stem;
        par_stem = stem;
        stem = new_stem;

        u = last_succ_[stem] == last_succ_[par_stem] ? rev_thread_[par_stem] : last_succ_[stem];
        right = thread_[u];
    }
    parent_[u_out_] = par_stem;
    thread_[u] = last;
    rev_thread_[last] = last_succ_[u_out_] = u;

    if (old_rev_thread != v_in_) {
        thread_[old_rev_thread] = right;
        rev_thread_[right] = old_rev_thread;
    }
    for (Node n : dirty_revs_) rev_thread_[thread_[n]] = n;

    // Update pred/forward/succ_num/last_succ along the reversed stem.
    Node tmp_sc = 0;
    Node tmp_ls = last_succ_[u_out_];
    u = u_out_;
    while (u != u_in_) {
        Node w = parent_[u];
        pred_[u] = pred_[w];
        forward_[u] = !forward_[w];
        tmp_sc += succ_num_[u] - succ_num_[w];
        succ_num_[u] = tmp_sc;
        last_succ_[w] = tmp_ls;
        u = w;
    }
    pred_[u_in_] = in_arc_;
    forward_[u_in_] = (u_in_ == source_[in_arc_]);
    succ_num_[u_in_] = old_succ_num;

    Node up_limit_in = kInvalid, up_limit_out = kInvalid;
    if (last_succ_[join_] == v_in_)
        up_limit_out = join_;
    else
        up_limit_in = join_;

    for (u = v_in_; u != up_limit_in && last_succ_[u] == v_in_; u = parent_[u])
        last_succ_[u] = last_succ_[u_out_];

    if (join_ != old_rev_thread && v_in_ != old_rev_thread) {
        for (u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ; u = parent_[u])
            last_succ_[u] = old_rev_thread;
    } else {
        for (u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ; u = parent_[u])
            last_succ_[u] = last_succ_[u_out_];
    }

    for (u = v_in_; u != join_; u = parent_[u]) succ_num_[u] += old_succ_num;
    for (u = v_out_; u != join_; u = parent_[u]) succ_num_[u] -= old_succ_num;
}

void NetworkSimplex::update_potentials() {
    double sigma = forward_[u_in_] ? pi_[v_in_] - pi_[u_in_] - cost_[pred_[u_in_]]
                                   : pi_[v_in_] - pi_[u_in_] + cost_[pred_[u_in_]];
    Node end = thread_[last_succ_[u_in_]];
    for (Node u = u_in_; u != end; u = thread_[u]) pi_[u] += sigma;
}

} // namespace rw2
