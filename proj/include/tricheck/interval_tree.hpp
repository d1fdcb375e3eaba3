#pragma once

// Augmented interval tree: an AVL tree ordered by (interval.inf, payload)
// where every node carries the maximum sup over its subtree, so an overlap
// query can prune whole branches. Two instances indexed by the x- and
// y-projections of the current polygon boundary answer "which boundary
// segments might intersect this query segment".

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tricheck/core.hpp"

namespace tricheck {

struct DuplicateSegmentError : std::invalid_argument {
    DuplicateSegmentError() : std::invalid_argument("segment id already stored") {}
};

struct UnknownSegmentError : std::invalid_argument {
    UnknownSegmentError() : std::invalid_argument("segment id not stored") {}
};

struct Interval {
    double inf = 0.0;
    double sup = 0.0;

    bool operator==(const Interval&) const = default;

    // Closed overlap: shared endpoints count.
    bool overlaps(const Interval& o) const { return inf <= o.sup && o.inf <= sup; }
};

inline Interval make_interval(double a, double b) { return a <= b ? Interval{a, b} : Interval{b, a}; }

template <typename Payload>
class IntervalTree {
  public:
    struct Entry {
        Interval interval;
        Payload payload;
    };

    void insert(Interval iv, Payload payload) {
        root_ = insert(std::move(root_), iv, std::move(payload));
        ++size_;
    }

    // Removes the entry with exactly this (interval, payload); false if absent.
    bool remove(Interval iv, const Payload& payload) {
        bool removed = false;
        root_ = remove(std::move(root_), iv, payload, removed);
        if (removed) --size_;
        return removed;
    }

    // All stored entries whose interval overlaps the query (closed overlap),
    // in (inf, payload) order. Left descent prunes on the subtree max; right
    // descent stops once inf exceeds the query sup.
    void search(Interval query, std::vector<Entry>& out) const { search(root_.get(), query, out); }

    std::vector<Entry> search(Interval query) const {
        std::vector<Entry> out;
        search(query, out);
        return out;
    }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    int height() const { return height(root_.get()); }

    // Test hook: recompute the max augmentation everywhere and compare.
    bool augmentation_valid() const { return check_augmentation(root_.get()).second; }

    // Test hook: in-order traversal sorted by (inf, payload).
    bool ordering_valid() const {
        std::vector<Entry> inorder;
        inorder.reserve(size_);
        collect(root_.get(), inorder);
        for (std::size_t i = 1; i < inorder.size(); ++i)
            if (key_less(inorder[i].interval, inorder[i].payload, inorder[i - 1].interval,
                         inorder[i - 1].payload))
                return false;
        return true;
    }

  private:
    struct Node {
        Interval interval;
        Payload payload;
        double maxSup;
        int height = 1;
        std::unique_ptr<Node> left, right;

        Node(Interval iv, Payload p) : interval(iv), payload(std::move(p)), maxSup(iv.sup) {}
    };

    using NodePtr = std::unique_ptr<Node>;

    static int height(const Node* n) { return n ? n->height : 0; }

    static void pull(Node* n) {
        n->height = 1 + std::max(height(n->left.get()), height(n->right.get()));
        n->maxSup = n->interval.sup;
        if (n->left) n->maxSup = std::max(n->maxSup, n->left->maxSup);
        if (n->right) n->maxSup = std::max(n->maxSup, n->right->maxSup);
    }

    static bool key_less(const Interval& aIv, const Payload& aP, const Interval& bIv, const Payload& bP) {
        if (aIv.inf != bIv.inf) return aIv.inf < bIv.inf;
        return aP < bP;
    }

    static NodePtr rotate_right(NodePtr n) {
        NodePtr l = std::move(n->left);
        n->left = std::move(l->right);
        pull(n.get());
        l->right = std::move(n);
        pull(l.get());
        return l;
    }

    static NodePtr rotate_left(NodePtr n) {
        NodePtr r = std::move(n->right);
        n->right = std::move(r->left);
        pull(n.get());
        r->left = std::move(n);
        pull(r.get());
        return r;
    }

    static NodePtr rebalance(NodePtr n) {
        pull(n.get());
        const int bf = height(n->left.get()) - height(n->right.get());
        if (bf > 1) {
            if (height(n->left->left.get()) < height(n->left->right.get()))
                n->left = rotate_left(std::move(n->left));
            return rotate_right(std::move(n));
        }
        if (bf < -1) {
            if (height(n->right->right.get()) < height(n->right->left.get()))
                n->right = rotate_right(std::move(n->right));
            return rotate_left(std::move(n));
        }
        return n;
    }

    static NodePtr insert(NodePtr n, Interval iv, Payload payload) {
        if (!n) return std::make_unique<Node>(iv, std::move(payload));
        if (key_less(iv, payload, n->interval, n->payload))
            n->left = insert(std::move(n->left), iv, std::move(payload));
        else
            n->right = insert(std::move(n->right), iv, std::move(payload));
        return rebalance(std::move(n));
    }

    static NodePtr detach_min(NodePtr n, NodePtr& min) {
        if (!n->left) {
            min = std::move(n);
            return std::move(min->right);
        }
        n->left = detach_min(std::move(n->left), min);
        return rebalance(std::move(n));
    }

    static NodePtr remove(NodePtr n, const Interval& iv, const Payload& payload, bool& removed) {
        if (!n) return nullptr;
        if (key_less(iv, payload, n->interval, n->payload)) {
            n->left = remove(std::move(n->left), iv, payload, removed);
        } else if (key_less(n->interval, n->payload, iv, payload)) {
            n->right = remove(std::move(n->right), iv, payload, removed);
        } else if (n->payload == payload && n->interval == iv) {
            removed = true;
            if (!n->left) return std::move(n->right);
            if (!n->right) return std::move(n->left);
            NodePtr successor;
            n->right = detach_min(std::move(n->right), successor);
            successor->left = std::move(n->left);
            successor->right = std::move(n->right);
            n = std::move(successor);
        } else {
            // key-equal entry with a different sup; insert sends those right
            n->right = remove(std::move(n->right), iv, payload, removed);
        }
        return rebalance(std::move(n));
    }

    static void search(const Node* n, const Interval& query, std::vector<Entry>& out) {
        if (!n) return;
        if (n->left && n->left->maxSup >= query.inf) search(n->left.get(), query, out);
        if (n->interval.overlaps(query)) out.push_back(Entry{n->interval, n->payload});
        if (n->interval.inf <= query.sup) search(n->right.get(), query, out);
    }

    static std::pair<double, bool> check_augmentation(const Node* n) {
        if (!n) return {-std::numeric_limits<double>::infinity(), true};
        auto [lm, lok] = check_augmentation(n->left.get());
        auto [rm, rok] = check_augmentation(n->right.get());
        const double expect = std::max({n->interval.sup, lm, rm});
        return {expect, lok && rok && expect == n->maxSup};
    }

    static void collect(const Node* n, std::vector<Entry>& out) {
        if (!n) return;
        collect(n->left.get(), out);
        out.push_back(Entry{n->interval, n->payload});
        collect(n->right.get(), out);
    }

    NodePtr root_;
    std::size_t size_ = 0;
};

using SegmentId = std::uint64_t;

// Paired X/Y interval trees over a set of segments. A segment id is present
// in both trees or in neither. Single-writer; queries are safe concurrently
// only between mutations.
class SegmentIntervalIndex {
  public:
    void insert(SegmentId id, Point p, Point q) {
        if (membership_.contains(id)) throw DuplicateSegmentError{};
        const Interval ix = make_interval(p.x, q.x);
        const Interval iy = make_interval(p.y, q.y);
        treeX_.insert(ix, id);
        treeY_.insert(iy, id);
        membership_.emplace(id, std::pair<Interval, Interval>{ix, iy});
    }

    void remove(SegmentId id) {
        auto it = membership_.find(id);
        if (it == membership_.end()) throw UnknownSegmentError{};
        treeX_.remove(it->second.first, id);
        treeY_.remove(it->second.second, id);
        membership_.erase(it);
    }

    bool contains(SegmentId id) const { return membership_.contains(id); }
    std::size_t size() const { return membership_.size(); }

    // Segment ids whose x- and y-projections both overlap the query
    // segment's projections, i.e. whose bounding boxes overlap the query's
    // bounding box. Sorted for determinism.
    std::vector<SegmentId> segment_search(Point p, Point q) const {
        std::vector<SegmentId> out;
        segment_search(p, q, out);
        return out;
    }

    void segment_search(Point p, Point q, std::vector<SegmentId>& out) const {
        out.clear();
        std::vector<IntervalTree<SegmentId>::Entry> xHits;
        treeX_.search(make_interval(p.x, q.x), xHits);
        if (xHits.empty()) return;
        std::unordered_set<SegmentId> xSet;
        xSet.reserve(xHits.size() * 2);
        for (const auto& e : xHits) xSet.insert(e.payload);
        std::vector<IntervalTree<SegmentId>::Entry> yHits;
        treeY_.search(make_interval(p.y, q.y), yHits);
        for (const auto& e : yHits)
            if (xSet.contains(e.payload)) out.push_back(e.payload);
        std::sort(out.begin(), out.end());
    }

    const IntervalTree<SegmentId>& tree_x() const { return treeX_; }
    const IntervalTree<SegmentId>& tree_y() const { return treeY_; }
    const std::unordered_map<SegmentId, std::pair<Interval, Interval>>& membership() const {
        return membership_;
    }

  private:
    IntervalTree<SegmentId> treeX_, treeY_;
    std::unordered_map<SegmentId, std::pair<Interval, Interval>> membership_;
};

}  // namespace tricheck
