// CTC prefix beam search core.
//
// Must stay operation-for-operation identical to _pykernels.beam_search:
// same log_add formula, same accumulation order, same tie-break. Do not
// compile with -ffast-math or FP contraction.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace unitrans {

inline double log_add(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -INFINITY) return a;
    return a + std::log1p(std::exp(b - a));
}

struct BeamResult {
    std::vector<int> labels;
    double score;
};

class PrefixTrie {
  public:
    explicit PrefixTrie(int vocab) : vocab_(vocab) {
        parent_.push_back(-1);
        token_.push_back(-1);
    }

    int find(int parent, int token) const {
        auto it = children_.find(key(parent, token));
        return it == children_.end() ? -1 : it->second;
    }

    int insert(int parent, int token) {
        int id = static_cast<int>(parent_.size());
        parent_.push_back(parent);
        token_.push_back(token);
        children_.emplace(key(parent, token), id);
        return id;
    }

    int size() const { return static_cast<int>(parent_.size()); }

    // Token sequence of the prefix (parent's labels followed by `token`,
    // or just parent's labels when token < 0).
    void labels(int parent, int token, std::vector<int>& out) const {
        out.clear();
        if (token >= 0) out.push_back(token);
        for (int n = parent; n > 0; n = parent_[n]) out.push_back(token_[n]);
        std::reverse(out.begin(), out.end());
    }

    int token_of(int node) const { return token_[node]; }
    int parent_of(int node) const { return parent_[node]; }

  private:
    int64_t key(int parent, int token) const {
        return static_cast<int64_t>(parent) * vocab_ + token;
    }

    int vocab_;
    std::vector<int> parent_;
    std::vector<int> token_;
    std::unordered_map<int64_t, int> children_;
};

struct Candidate {
    int node;    // -1 until materialized in the trie
    int parent;  // trie node of the prefix minus its last token
    int token;   // last token, -1 for the empty prefix
    double pb;
    double pnb;
    double total;
};

struct BeamEntry {
    int node;
    double pb;
    double pnb;
};

inline BeamResult prefix_beam_search(const double* logp, int T, int V, int blank,
                                     int beam_size) {
    const double NEG = -INFINITY;
    PrefixTrie trie(V);
    std::vector<BeamEntry> beam{{0, 0.0, NEG}};
    std::vector<Candidate> cands;
    std::vector<int> node_slot(1, -1);
    std::vector<int> seq_a, seq_b;

    auto less = [&](const Candidate& x, const Candidate& y) {
        if (x.total != y.total) return x.total > y.total;
        // siblings differ only in their last token
        if (x.parent == y.parent && x.token >= 0 && y.token >= 0) return x.token < y.token;
        trie.labels(x.parent, x.token, seq_a);
        trie.labels(y.parent, y.token, seq_b);
        return std::lexicographical_compare(seq_a.begin(), seq_a.end(), seq_b.begin(),
                                            seq_b.end());
    };

    for (int t = 0; t < T; ++t) {
        const double* row = logp + static_cast<int64_t>(t) * V;
        cands.clear();
        if (static_cast<int>(node_slot.size()) < trie.size()) node_slot.resize(trie.size(), -1);

        for (const BeamEntry& b : beam) {
            int tok = b.node == 0 ? -1 : trie.token_of(b.node);
            int par = b.node == 0 ? -1 : trie.parent_of(b.node);
            node_slot[b.node] = static_cast<int>(cands.size());
            cands.push_back({b.node, par, tok, NEG, NEG, NEG});
        }

        for (size_t i = 0; i < beam.size(); ++i) {
            const BeamEntry b = beam[i];
            const double total = log_add(b.pb, b.pnb);
            const int last = b.node == 0 ? -1 : trie.token_of(b.node);

            Candidate& self = cands[node_slot[b.node]];
            self.pb = log_add(self.pb, total + row[blank]);
            if (last >= 0) self.pnb = log_add(self.pnb, b.pnb + row[last]);

            for (int c = 0; c < V; ++c) {
                if (c == blank) continue;
                const double add = (c == last ? b.pb : total) + row[c];
                int q = trie.find(b.node, c);
                int slot = -1;
                if (q >= 0) slot = node_slot[q];
                if (slot < 0) {
                    slot = static_cast<int>(cands.size());
                    cands.push_back({q, b.node, c, NEG, NEG, NEG});
                    if (q >= 0) node_slot[q] = slot;
                }
                Candidate& ext = cands[slot];
                ext.pnb = log_add(ext.pnb, add);
            }
        }

        for (Candidate& c : cands) {
            c.total = log_add(c.pb, c.pnb);
            if (c.node >= 0) node_slot[c.node] = -1;
        }

        const size_t keep = std::min(cands.size(), static_cast<size_t>(beam_size));
        std::partial_sort(cands.begin(), cands.begin() + keep, cands.end(), less);

        beam.clear();
        for (size_t i = 0; i < keep; ++i) {
            Candidate& c = cands[i];
            if (c.node < 0) {
                c.node = trie.find(c.parent, c.token);
                if (c.node < 0) c.node = trie.insert(c.parent, c.token);
            }
            beam.push_back({c.node, c.pb, c.pnb});
        }
        if (static_cast<int>(node_slot.size()) < trie.size()) node_slot.resize(trie.size(), -1);
    }

    BeamResult result;
    const BeamEntry& best = beam.front();
    trie.labels(best.node, -1, result.labels);
    result.score = log_add(best.pb, best.pnb);
    return result;
}

}  // namespace unitrans
