#include "bellsq/chsh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bellsq {

DichotomicRV make_dichotomic(FinSpace space, std::vector<double> values) {
  if (values.size() != space.size())
    throw std::invalid_argument("value count does not match outcome count");
  for (double v : values) {
    if (v != 1.0 && v != -1.0)
      throw std::invalid_argument("dichotomic variable must take values exactly +1 or -1");
  }
  return DichotomicRV{RandomVar{std::move(space), std::move(values)}};
}

namespace {

inline double sign_at(std::uint64_t mask, std::size_t size, std::size_t i) {
  return ((mask >> (size - 1 - i)) & 1u) ? -1.0 : 1.0;
}

// Correlator of one joint under group masks for its two sides. Shared by the
// serial and parallel maximizers so their values agree bit for bit.
double pair_signed_sum(const JointSpace& j, std::uint64_t ma, std::uint64_t mb) {
  const std::size_t na = j.left.size(), nb = j.right.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < na; ++i) {
    const double sa = sign_at(ma, na, i);
    for (std::size_t k = 0; k < nb; ++k) {
      acc += sa * sign_at(mb, nb, k) * j.at(i, k);
    }
  }
  return acc;
}

// Three plus, one minus, always accumulated in pair order.
double combine(const std::array<double, 4>& e, std::size_t minus) {
  double v = 0.0;
  for (std::size_t p = 0; p < 4; ++p) v += (p == minus) ? -e[p] : e[p];
  return v;
}

struct Best {
  double value;
  std::uint64_t mask;
  std::size_t minus;
};

// Deterministic preference: larger value, then smaller mask, then earlier
// minus position.
inline bool better(const Best& a, const Best& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.mask != b.mask) return a.mask < b.mask;
  return a.minus < b.minus;
}

struct MaskSplit {
  std::size_t nq, nr, ns, nt;
  unsigned shift_q, shift_r, shift_s;

  std::uint64_t join(std::uint64_t mq, std::uint64_t mr, std::uint64_t ms,
                     std::uint64_t mt) const {
    return (mq << shift_q) | (mr << shift_r) | (ms << shift_s) | mt;
  }
};

MaskSplit split_for(const BellSquare& bs) {
  MaskSplit m;
  m.nq = bs.q.size();
  m.nr = bs.r.size();
  m.ns = bs.s.size();
  m.nt = bs.t.size();
  for (std::size_t n : {m.nq, m.nr, m.ns, m.nt}) {
    if (n > 12) throw std::invalid_argument("search space too large");
  }
  m.shift_s = static_cast<unsigned>(m.nt);
  m.shift_r = static_cast<unsigned>(m.nt + m.ns);
  m.shift_q = static_cast<unsigned>(m.nt + m.ns + m.nr);
  return m;
}

MaxChshResult finish(const BellSquare& bs, const MaskSplit& m, const Best& best) {
  MaxChshResult out;
  out.value = best.value;
  out.mask = best.mask;
  out.assignment.xq = sign_rv(bs.q, (best.mask >> m.shift_q) & ((1u << m.nq) - 1));
  out.assignment.xr = sign_rv(bs.r, (best.mask >> m.shift_r) & ((1u << m.nr) - 1));
  out.assignment.xs = sign_rv(bs.s, (best.mask >> m.shift_s) & ((1u << m.ns) - 1));
  out.assignment.xt = sign_rv(bs.t, best.mask & ((1u << m.nt) - 1));
  out.assignment.minus_term = static_cast<MeasPair>(best.minus);
  return out;
}

}  // namespace

DichotomicRV sign_rv(const FinSpace& space, std::uint64_t mask) {
  std::vector<double> values(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) values[i] = sign_at(mask, space.size(), i);
  return make_dichotomic(space, std::move(values));
}

RandomVar product_rv(const DichotomicRV& x, const DichotomicRV& y, const JointSpace& j) {
  if (!same_labels(x.rv.space, j.left) || !same_labels(y.rv.space, j.right))
    throw std::invalid_argument("variable spaces do not match the joint's sides");
  RandomVar out;
  out.space = flatten(j);
  out.values.reserve(j.table.size());
  for (std::size_t i = 0; i < j.left.size(); ++i)
    for (std::size_t k = 0; k < j.right.size(); ++k)
      out.values.push_back(x.rv.values[i] * y.rv.values[k]);
  return out;
}

std::array<double, 4> chsh_expectations(const BellSquare& bs, const ChshAssignment& a) {
  return {expectation(product_rv(a.xq, a.xs, bs.qs)),
          expectation(product_rv(a.xr, a.xs, bs.rs)),
          expectation(product_rv(a.xr, a.xt, bs.rt)),
          expectation(product_rv(a.xq, a.xt, bs.qt))};
}

double chsh_value(const BellSquare& bs, const ChshAssignment& a) {
  return combine(chsh_expectations(bs, a), static_cast<std::size_t>(a.minus_term));
}

bool is_violation(const BellSquare& bs, const ChshAssignment& a, double tol) {
  return chsh_value(bs, a) > 2.0 + tol;
}

MaxChshResult max_chsh_serial(const BellSquare& bs) {
  const MaskSplit m = split_for(bs);
  const std::uint64_t total = 1ull << (m.nq + m.nr + m.ns + m.nt);
  Best best{-5.0, 0, 0};
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    const std::uint64_t mq = (mask >> m.shift_q) & ((1u << m.nq) - 1);
    const std::uint64_t mr = (mask >> m.shift_r) & ((1u << m.nr) - 1);
    const std::uint64_t ms = (mask >> m.shift_s) & ((1u << m.ns) - 1);
    const std::uint64_t mt = mask & ((1u << m.nt) - 1);
    const std::array<double, 4> e{
        pair_signed_sum(bs.qs, mq, ms), pair_signed_sum(bs.rs, mr, ms),
        pair_signed_sum(bs.rt, mr, mt), pair_signed_sum(bs.qt, mq, mt)};
    for (std::size_t minus = 0; minus < 4; ++minus) {
      Best cand{combine(e, minus), mask, minus};
      if (better(cand, best)) best = cand;
    }
  }
  return finish(bs, m, best);
}

MaxChshResult max_chsh(const BellSquare& bs) {
  const MaskSplit m = split_for(bs);
  const std::uint64_t nmq = 1ull << m.nq, nmr = 1ull << m.nr;
  const std::uint64_t nms = 1ull << m.ns, nmt = 1ull << m.nt;
  Best best{-5.0, 0, 0};
#ifdef _OPENMP
#pragma omp parallel
  {
    Best local{-5.0, 0, 0};
#pragma omp for collapse(2) schedule(static)
    for (std::uint64_t mq = 0; mq < nmq; ++mq) {
      for (std::uint64_t mr = 0; mr < nmr; ++mr) {
        for (std::uint64_t ms = 0; ms < nms; ++ms) {
          for (std::uint64_t mt = 0; mt < nmt; ++mt) {
            const std::array<double, 4> e{
                pair_signed_sum(bs.qs, mq, ms), pair_signed_sum(bs.rs, mr, ms),
                pair_signed_sum(bs.rt, mr, mt), pair_signed_sum(bs.qt, mq, mt)};
            const std::uint64_t mask = m.join(mq, mr, ms, mt);
            for (std::size_t minus = 0; minus < 4; ++minus) {
              Best cand{combine(e, minus), mask, minus};
              if (better(cand, local)) local = cand;
            }
          }
        }
      }
    }
#pragma omp critical(bellsq_max_chsh_merge)
    {
      if (better(local, best)) best = local;
    }
  }
#else
  for (std::uint64_t mq = 0; mq < nmq; ++mq)
    for (std::uint64_t mr = 0; mr < nmr; ++mr)
      for (std::uint64_t ms = 0; ms < nms; ++ms)
        for (std::uint64_t mt = 0; mt < nmt; ++mt) {
          const std::array<double, 4> e{
              pair_signed_sum(bs.qs, mq, ms), pair_signed_sum(bs.rs, mr, ms),
              pair_signed_sum(bs.rt, mr, mt), pair_signed_sum(bs.qt, mq, mt)};
          const std::uint64_t mask = m.join(mq, mr, ms, mt);
          for (std::size_t minus = 0; minus < 4; ++minus) {
            Best cand{combine(e, minus), mask, minus};
            if (better(cand, best)) best = cand;
          }
        }
#endif
  return finish(bs, m, best);
}

}  // namespace bellsq
