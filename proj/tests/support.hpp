#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "adnb/balanced.hpp"
#include "adnb/flownet.hpp"
#include "adnb/instance.hpp"
#include "adnb/rational.hpp"

namespace testing {

using adnb::Integer;
using adnb::Rational;

inline Rational Q(const char* s) {
  return adnb::parse_rational(s);
}

inline std::vector<Rational> Qs(std::initializer_list<const char*> items) {
  std::vector<Rational> out;
  for (const char* s : items) out.push_back(Q(s));
  return out;
}

inline adnb::BargainingInstance make(std::initializer_list<std::initializer_list<long>> u,
                                     std::initializer_list<const char*> c) {
  adnb::BargainingInstance inst;
  for (const auto& row : u) {
    std::vector<Integer> r;
    for (long v : row) r.emplace_back(v);
    inst.u.push_back(std::move(r));
  }
  for (const char* s : c) inst.c.push_back(Q(s));
  return inst;
}

// Random fixed-money network: prices and money with small denominators and a
// random edge set in which every good and buyer is touched.
inline adnb::EqNetwork random_network(std::mt19937_64& rng, std::size_t n, std::size_t g) {
  adnb::EqNetwork net;
  net.n = n;
  net.g = g;
  net.mode = adnb::MoneyMode::Fixed;
  auto draw = [&] {
    std::uniform_int_distribution<int> num(1, 8), den(1, 4);
    return adnb::make_rational(num(rng), den(rng));
  };
  for (std::size_t j = 0; j < g; ++j) net.price.push_back(draw());
  for (std::size_t i = 0; i < n; ++i) net.money.push_back(draw());
  net.gamma.assign(n, Rational(1));
  net.good_active.assign(g, true);
  net.buyer_active.assign(n, true);
  std::bernoulli_distribution coin(0.45);
  std::vector<bool> good_hit(g, false), buyer_hit(n, false);
  for (std::size_t j = 0; j < g; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (coin(rng)) {
        net.edges.push_back({j, i});
        good_hit[j] = buyer_hit[i] = true;
      }
    }
  }
  std::uniform_int_distribution<std::size_t> pick_b(0, n - 1), pick_g(0, g - 1);
  for (std::size_t j = 0; j < g; ++j) {
    if (!good_hit[j]) net.edges.push_back({j, pick_b(rng)});
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!buyer_hit[i]) net.edges.push_back({pick_g(rng), i});
  }
  std::sort(net.edges.begin(), net.edges.end());
  net.edges.erase(std::unique(net.edges.begin(), net.edges.end()), net.edges.end());
  return net;
}

// Same network with buyers and goods relabelled: new index of buyer i is bperm[i].
inline adnb::EqNetwork permuted(const adnb::EqNetwork& net, const std::vector<std::size_t>& bperm,
                                const std::vector<std::size_t>& gperm) {
  adnb::EqNetwork out = net;
  for (std::size_t j = 0; j < net.g; ++j) {
    out.price[gperm[j]] = net.price[j];
    out.good_active[gperm[j]] = net.good_active[j];
  }
  for (std::size_t i = 0; i < net.n; ++i) {
    out.money[bperm[i]] = net.money[i];
    out.gamma[bperm[i]] = net.gamma[i];
    out.buyer_active[bperm[i]] = net.buyer_active[i];
  }
  out.edges.clear();
  for (const auto& e : net.edges) out.edges.push_back({gperm[e.good], bperm[e.buyer]});
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

// Max flow into the buyers of `mask` only.
inline Rational sink_capacity(const adnb::EqNetwork& net, unsigned mask) {
  adnb::EqNetwork sub = net;
  for (std::size_t i = 0; i < net.n; ++i) {
    if (!(mask >> i & 1)) sub.money[i] = 0;
  }
  return adnb::max_flow(sub).flow.value;
}

// Surplus vector of the l2-minimal maximum flow. At the optimum every level
// set {theta >= a} is saturated, so it is one of the candidates built from an
// ordered partition of the buyers; keep the best candidate that is a
// realizable sink-flow vector (0 <= y, y(T) <= f(T) for every T).
inline std::vector<Rational> brute_force_surplus(const adnb::EqNetwork& net) {
  const std::size_t n = net.n;
  const unsigned full = (1u << n) - 1;
  std::vector<Rational> f(full + 1);
  for (unsigned T = 0; T <= full; ++T) f[T] = sink_capacity(net, T);

  std::optional<std::vector<Rational>> best;
  Rational best_norm;
  std::vector<int> block(n, 0);
  auto evaluate = [&](int blocks) {
    std::vector<Rational> theta(n);
    unsigned prefix = 0;
    for (int b = 0; b < blocks; ++b) {
      unsigned members = 0;
      Rational money = 0;
      int count = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (block[k] == b) {
          members |= 1u << k;
          money += net.money[k];
          ++count;
        }
      }
      Rational level = (money - (f[prefix | members] - f[prefix])) / count;
      for (std::size_t k = 0; k < n; ++k) {
        if (block[k] == b) theta[k] = level;
      }
      prefix |= members;
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (theta[k] > net.money[k] || theta[k] < 0) return;
    }
    for (unsigned T = 1; T <= full; ++T) {
      Rational y = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (T >> k & 1) y += net.money[k] - theta[k];
      }
      if (y > f[T]) return;
    }
    Rational norm = 0;
    for (const auto& t : theta) norm += t * t;
    if (!best || norm < best_norm) {
      best = theta;
      best_norm = norm;
    }
  };
  // Enumerate set partitions, then block orders via permutations of labels.
  std::function<void(std::size_t, int)> partitions = [&](std::size_t i, int blocks) {
    if (i == n) {
      std::vector<int> order(blocks);
      std::iota(order.begin(), order.end(), 0);
      std::vector<int> base = block;
      do {
        for (std::size_t k = 0; k < n; ++k) block[k] = order[base[k]];
        evaluate(blocks);
      } while (std::next_permutation(order.begin(), order.end()));
      block = base;
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      block[i] = b;
      partitions(i + 1, std::max(blocks, b + 1));
    }
  };
  partitions(0, 0);
  return best.value_or(std::vector<Rational>{});
}

}  // namespace testing
