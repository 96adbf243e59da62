#include "adnb/oracle.hpp"

#include <algorithm>

#include "adnb/fisher.hpp"

namespace adnb {

namespace {

// Gaussian elimination over the rationals. Free variables are set to 0.
// Returns nullopt when the system is inconsistent.
std::optional<std::vector<Rational>> solve_linear(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a.front().size();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pick = r;
    while (pick < rows && a[pick][c] == 0) ++pick;
    if (pick == rows) continue;
    std::swap(a[pick], a[r]);
    std::swap(b[pick], b[r]);
    Rational inv = 1 / a[r][c];
    for (std::size_t k = c; k < cols; ++k) a[r][k] *= inv;
    b[r] *= inv;
    for (std::size_t other = 0; other < rows; ++other) {
      if (other == r || a[other][c] == 0) continue;
      Rational f = a[other][c];
      for (std::size_t k = c; k < cols; ++k) a[other][k] -= f * a[r][k];
      b[other] -= f * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t k = r; k < rows; ++k) {
    if (b[k] != 0) return std::nullopt;
  }
  std::vector<Rational> x(cols, Rational(0));
  for (std::size_t k = 0; k < r; ++k) x[pivot_col[k]] = b[k];
  return x;
}

}  // namespace

OracleResult oracle_solve(const BargainingInstance& inst, std::size_t cap) {
  validate(inst);
  const std::size_t n = inst.n(), g = inst.g();
  if (n * g > cap) throw InputError("oracle cap exceeded: n*g = " + std::to_string(n * g));
  OracleResult out;

  std::vector<Edge> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      if (inst.u[i][j] > 0) pairs.push_back({j, i});
    }
  }
  std::vector<bool> wanted(g, false);
  for (const Edge& e : pairs) wanted[e.good] = true;
  std::vector<std::size_t> goods;
  for (std::size_t j = 0; j < g; ++j) {
    if (wanted[j]) goods.push_back(j);
  }
  std::vector<std::size_t> slot(g, 0);
  for (std::size_t k = 0; k < goods.size(); ++k) slot[goods[k]] = k;

  const std::size_t total = std::size_t{1} << pairs.size();
  for (std::size_t mask = 1; mask < total; ++mask) {
    std::vector<Edge> support;
    std::vector<bool> buyer_hit(n, false), good_hit(g, false);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (mask >> k & 1) {
        support.push_back(pairs[k]);
        buyer_hit[pairs[k].buyer] = true;
        good_hit[pairs[k].good] = true;
      }
    }
    // Every buyer must get something and every wanted good must be sold.
    if (std::find(buyer_hit.begin(), buyer_hit.end(), false) != buyer_hit.end()) continue;
    bool covered = true;
    for (std::size_t j : goods) covered &= good_hit[j];
    if (!covered) continue;
    ++out.supports_tried;

    // unknowns: x on the support, then q_j for wanted goods
    const std::size_t k = support.size(), vars = k + goods.size();
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    for (std::size_t j : goods) {
      std::vector<Rational> row(vars, Rational(0));
      for (std::size_t e = 0; e < k; ++e) {
        if (support[e].good == j) row[e] = 1;
      }
      a.push_back(std::move(row));
      b.push_back(1);
    }
    for (std::size_t e = 0; e < k; ++e) {
      const std::size_t i = support[e].buyer, j = support[e].good;
      std::vector<Rational> row(vars, Rational(0));
      for (std::size_t f = 0; f < k; ++f) {
        if (support[f].buyer == i) row[f] = Rational(inst.u[i][support[f].good]);
      }
      row[k + slot[j]] = -Rational(inst.u[i][j]);
      a.push_back(std::move(row));
      b.push_back(inst.c[i]);
    }
    std::optional<std::vector<Rational>> sol = solve_linear(std::move(a), std::move(b));
    if (!sol) continue;

    bool ok = true;
    Allocation x(n, std::vector<Rational>(g, Rational(0)));
    for (std::size_t e = 0; e < k && ok; ++e) {
      ok = (*sol)[e] >= 0;
      x[support[e].buyer][support[e].good] = (*sol)[e];
    }
    std::vector<Rational> p(g, Rational(0));
    for (std::size_t s = 0; s < goods.size() && ok; ++s) {
      ok = (*sol)[k + s] > 0;
      if (ok) p[goods[s]] = 1 / (*sol)[k + s];
    }
    if (!ok || !check_kkt(inst, p, x)) continue;

    out.feasible = true;
    out.p = p;
    out.x = x;
    out.v.assign(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < g; ++j) out.v[i] += Rational(inst.u[i][j]) * x[i][j];
    }
    out.support = support;
    return out;
  }
  return out;
}

Rational feasibility_lp(const BargainingInstance& inst) {
  validate(inst);
  const std::size_t n = inst.n(), g = inst.g();
  Rational cmax = 0;
  for (const auto& ci : inst.c) cmax = std::max<Rational>(cmax, ci);

  // With t' = t + cmax >= 0 every right-hand side is nonnegative, so the slack
  // basis is feasible. Columns: x_ij (i*g + j), t', then n + g slacks.
  const std::size_t xs = n * g, tcol = xs, slack0 = xs + 1, cols = xs + 1 + n + g, rows = n + g;
  std::vector<std::vector<Rational>> tab(rows, std::vector<Rational>(cols, Rational(0)));
  std::vector<Rational> rhs(rows);
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < g; ++j) tab[i][i * g + j] = -Rational(inst.u[i][j]);
    tab[i][tcol] = 1;
    tab[i][slack0 + i] = 1;
    rhs[i] = cmax - inst.c[i];
    basis[i] = slack0 + i;
  }
  for (std::size_t j = 0; j < g; ++j) {
    const std::size_t r = n + j;
    for (std::size_t i = 0; i < n; ++i) tab[r][i * g + j] = 1;
    tab[r][slack0 + r] = 1;
    rhs[r] = 1;
    basis[r] = slack0 + r;
  }
  // reduced costs of max t': obj row holds c_B B^-1 A - c
  std::vector<Rational> obj(cols, Rational(0));
  obj[tcol] = -1;
  Rational value = 0;

  while (true) {
    // Bland: smallest index with negative reduced cost enters.
    std::size_t enter = cols;
    for (std::size_t c = 0; c < cols; ++c) {
      if (obj[c] < 0) {
        enter = c;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = rows;
    Rational best;
    for (std::size_t r = 0; r < rows; ++r) {
      if (tab[r][enter] <= 0) continue;
      Rational ratio = rhs[r] / tab[r][enter];
      if (leave == rows || ratio < best || (ratio == best && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == rows) throw InternalError("feasibility LP reported unbounded");
    Rational inv = 1 / tab[leave][enter];
    for (auto& a : tab[leave]) a *= inv;
    rhs[leave] *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave || tab[r][enter] == 0) continue;
      Rational f = tab[r][enter];
      for (std::size_t c = 0; c < cols; ++c) {
        if (tab[leave][c] != 0) tab[r][c] -= f * tab[leave][c];
      }
      rhs[r] -= f * rhs[leave];
    }
    Rational f = obj[enter];
    for (std::size_t c = 0; c < cols; ++c) {
      if (tab[leave][c] != 0) obj[c] -= f * tab[leave][c];
    }
    value -= f * rhs[leave];
    basis[leave] = enter;
  }
  return value - cmax;
}

Rational default_limit_eps() {
  return make_rational(1, 1000000);
}

LimitResult limit_algorithm(const BargainingInstance& inst, std::size_t max_iter, const Rational& eps,
                            const std::vector<Rational>* reference) {
  if (reference && reference->size() != inst.g()) throw InputError("reference prices have the wrong length");
  Preprocessed pre = preprocess(inst);
  if (!pre.report.zero_buyers.empty()) throw InputError("limit algorithm needs every buyer to want some good");
  const BargainingInstance& red = pre.instance;
  const std::size_t n = red.n(), g = inst.g();

  LimitResult out;
  std::vector<Rational> m(n, Rational(1));
  out.m_history.push_back(m);
  auto lift = [&](const std::vector<Rational>& reduced) {
    std::vector<Rational> full(g, Rational(0));
    for (std::size_t k = 0; k < pre.kept_goods.size(); ++k) full[pre.kept_goods[k]] = reduced[k];
    return full;
  };

  while (out.iterations < max_iter) {
    ++out.iterations;
    FisherResult fr = fisher_equilibrium({red.u, m});
    std::vector<bool> all(red.g(), true);
    BangPerBuck bpb = bang_per_buck(red.u, fr.p, all);
    std::vector<Rational> next = flexible_money(red.c, bpb.gamma);
    out.p = lift(fr.p);
    out.p_history.push_back(out.p);
    out.m_history.push_back(next);

    Rational gap = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Rational d = next[i] - m[i];
      if (d < 0) d = -d;
      if (d > gap) gap = d;
    }
    m = std::move(next);
    if (reference) {
      Rational dist = 0;
      for (std::size_t j = 0; j < g; ++j) dist = std::max<Rational>(dist, abs(out.p[j] - (*reference)[j]));
      if (dist <= eps) {
        out.converged = out.reached_reference = true;
        out.exact = gap == 0;
        break;
      }
      if (gap == 0) {
        out.exact = true;
        break;
      }
      continue;
    }
    if (gap == 0) {
      out.converged = out.exact = true;
      break;
    }
    if (gap < eps) {
      out.converged = true;
      break;
    }
  }
  out.m = m;
  return out;
}

}  // namespace adnb
