#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gibbs/caps.hpp"
#include "gibbs/errors.hpp"
#include "gibbs/parallel.hpp"

namespace gibbs {

/// Anything with a finite, nonempty preimage set per point.
template <class S>
concept PreimageSystem = requires(const S& s, const typename S::point_type& p) {
  typename S::point_type;
  { s.preimages(p) } -> std::same_as<std::vector<typename S::point_type>>;
  { s.forward(p) } -> std::convertible_to<typename S::point_type>;
  { s.max_preimage_count() } -> std::convertible_to<std::size_t>;
};

template <class Phi, class P>
concept PotentialOn = requires(const Phi& phi, const P& p) {
  { phi(p) } -> std::convertible_to<double>;
};

/// Resource and scheduling knobs shared by every tree-based estimator.
struct ExecutionPolicy {
  unsigned threads = 1;
  std::size_t leaf_cap = kDefaultEnumerationCap;
  bool force = false;  ///< ignore leaf_cap
};

/// Levels 0..n of the backward orbit tree of a root point.
///
/// Level i holds every i-preimage, ordered lexicographically by the path of
/// branch indices from the root. Each node carries the partial Birkhoff sum
/// of phi over the path nodes at levels 1..i, so a leaf y holds
/// S_n phi(y) = phi(y) + phi(f y) + ... + phi(f^{n-1} y).
template <PreimageSystem System>
class PreimageTree {
 public:
  using point_type = typename System::point_type;

  struct Node {
    point_type point;
    std::size_t parent = 0;  ///< index into the previous level
    double birkhoff = 0.0;
  };

  template <PotentialOn<point_type> Phi>
  PreimageTree(const System& system, const Phi& phi, point_type root, unsigned depth,
               const ExecutionPolicy& policy = {}) {
    const double d = static_cast<double>(system.max_preimage_count());
    const double bound = std::pow(d, static_cast<double>(depth));
    if (!policy.force && bound > static_cast<double>(policy.leaf_cap))
      throw ResourceCapExceeded("preimage tree of depth " + std::to_string(depth) + " may have " +
                                std::to_string(bound) + " leaves, above the cap of " +
                                std::to_string(policy.leaf_cap));
    levels_.reserve(depth + 1);
    levels_.push_back({Node{std::move(root), 0, 0.0}});
    for (unsigned level = 1; level <= depth; ++level) {
      const auto& parents = levels_.back();
      const unsigned chunks = std::max(1U, policy.threads);
      std::vector<std::vector<Node>> parts(std::min<std::size_t>(chunks, parents.size()));
      for_each_chunk(parents.size(), chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
        auto& out = parts[c];
        for (std::size_t p = begin; p < end; ++p) {
          for (auto& y : system.preimages(parents[p].point)) {
            const double s = parents[p].birkhoff + static_cast<double>(phi(y));
            out.push_back(Node{std::move(y), p, s});
          }
        }
      });
      std::vector<Node> next;
      std::size_t total = 0;
      for (const auto& part : parts) total += part.size();
      if (total == 0) throw Error("a point has no preimages");
      next.reserve(total);
      for (auto& part : parts)
        for (auto& node : part) next.push_back(std::move(node));
      levels_.push_back(std::move(next));
    }
  }

  [[nodiscard]] const point_type& root() const { return levels_.front().front().point; }
  [[nodiscard]] unsigned depth() const { return static_cast<unsigned>(levels_.size() - 1); }
  [[nodiscard]] std::span<const Node> level(unsigned i) const { return levels_.at(i); }
  [[nodiscard]] std::span<const Node> leaves() const { return levels_.back(); }

  /// Leaf weights e^{S_n phi(y)} / sum_z e^{S_n phi(z)}, computed after
  /// subtracting the maximal exponent.
  [[nodiscard]] std::vector<double> leaf_weights() const {
    const auto lv = leaves();
    double mx = -std::numeric_limits<double>::infinity();
    for (const auto& n : lv) mx = std::max(mx, n.birkhoff);
    std::vector<double> w(lv.size());
    double z = 0.0;
    for (std::size_t i = 0; i < lv.size(); ++i) {
      w[i] = std::exp(lv[i].birkhoff - mx);
      z += w[i];
    }
    for (auto& v : w) v /= z;
    return w;
  }

  /// Mass of each node at `level` when leaves carry leaf_weights(): the sum of
  /// the weights of the leaves below it.
  [[nodiscard]] std::vector<std::vector<double>> subtree_masses() const {
    std::vector<std::vector<double>> mass(levels_.size());
    mass.back() = leaf_weights();
    for (std::size_t l = levels_.size() - 1; l > 0; --l) {
      mass[l - 1].assign(levels_[l - 1].size(), 0.0);
      for (std::size_t i = 0; i < levels_[l].size(); ++i) mass[l - 1][levels_[l][i].parent] += mass[l][i];
    }
    return mass;
  }

  /// The chain leaf, f(leaf), ..., f^{n-1}(leaf) read off the parent links.
  [[nodiscard]] std::vector<point_type> orbit_of_leaf(std::size_t leaf) const {
    std::vector<point_type> out;
    std::size_t idx = leaf;
    for (std::size_t l = levels_.size() - 1; l > 0; --l) {
      out.push_back(levels_[l][idx].point);
      idx = levels_[l][idx].parent;
    }
    return out;
  }

 private:
  std::vector<std::vector<Node>> levels_;
};

}  // namespace gibbs
