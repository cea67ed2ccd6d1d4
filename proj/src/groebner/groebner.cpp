#include "idspec/groebner/groebner.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "kernel.hpp"

namespace idspec::groebner {
namespace {

using namespace detail;

template <class Ring>
IPoly<Ring> to_internal(const Polynomial& input, const OrderCtx& ctx, const std::set<VarId>& params);

template <>
IPoly<IntRing> to_internal<IntRing>(const Polynomial& input, const OrderCtx& ctx, const std::set<VarId>&) {
  Polynomial p = algebra::primitive_part(input);
  IPoly<IntRing> out;
  for (const auto& t : p.terms()) {
    IMono m;
    m.e.assign(ctx.size(), 0);
    for (const auto& vp : t.mono.powers()) {
      auto pos = ctx.position(vp.var);
      if (!pos) throw std::invalid_argument("variable " + algebra::variable_name(vp.var) + " not in monomial order");
      if (vp.exp > 0xFFFF) throw std::overflow_error("exponent too large");
      m.e[*pos] = static_cast<std::uint16_t>(vp.exp);
    }
    ctx.finish(m);
    out.t.emplace_back(std::move(m), t.coeff.get_num());
  }
  std::sort(out.t.begin(), out.t.end(), [&](const auto& a, const auto& b) { return ctx.compare(a.first, b.first) > 0; });
  for (const auto& [m, c] : out.t) out.sugar = std::max(out.sugar, m.deg);
  return out;
}

template <>
IPoly<PolyRing> to_internal<PolyRing>(const Polynomial& input, const OrderCtx& ctx, const std::set<VarId>& params) {
  Polynomial p = algebra::primitive_part(input);
  std::map<std::vector<std::uint16_t>, std::vector<algebra::Term>> groups;
  for (const auto& t : p.terms()) {
    std::vector<std::uint16_t> e(ctx.size(), 0);
    std::vector<algebra::VarPower> coeff_powers;
    for (const auto& vp : t.mono.powers()) {
      if (params.count(vp.var)) {
        coeff_powers.push_back(vp);
        continue;
      }
      auto pos = ctx.position(vp.var);
      if (!pos) throw std::invalid_argument("variable " + algebra::variable_name(vp.var) + " not in monomial order");
      if (vp.exp > 0xFFFF) throw std::overflow_error("exponent too large");
      e[*pos] = static_cast<std::uint16_t>(vp.exp);
    }
    groups[e].push_back({Monomial::from_powers(std::move(coeff_powers)), t.coeff});
  }
  IPoly<PolyRing> out;
  for (auto& [e, terms] : groups) {
    IMono m;
    m.e.assign(e.begin(), e.end());
    ctx.finish(m);
    out.t.emplace_back(std::move(m), Polynomial::from_terms(std::move(terms)));
  }
  std::sort(out.t.begin(), out.t.end(), [&](const auto& a, const auto& b) { return ctx.compare(a.first, b.first) > 0; });
  for (const auto& [m, c] : out.t) out.sugar = std::max(out.sugar, m.deg);
  make_primitive(out);
  return out;
}

template <class Ring>
Polynomial to_global(const IPoly<Ring>& p, const OrderCtx& ctx) {
  Polynomial out;
  std::vector<algebra::Term> terms;
  for (const auto& [m, c] : p.t) {
    Monomial mono = ctx.to_monomial(m);
    Polynomial cp = Ring::to_poly(c);
    for (const auto& t : cp.terms()) terms.push_back({t.mono * mono, t.coeff});
  }
  return Polynomial::from_terms(std::move(terms));
}

struct Pair {
  std::size_t i, j;
  IMono lcm;
  std::uint32_t sugar;
};

template <class Ring>
class Buchberger {
 public:
  using P = IPoly<Ring>;

  Buchberger(OrderCtx ctx, const Budget& budget) : kernel_(std::move(ctx)), budget_(budget) {}

  std::vector<P> run(std::vector<P> input) {
    const OrderCtx& ctx = kernel_.ctx();
    std::sort(input.begin(), input.end(), [&](const P& a, const P& b) {
      if (a.empty() || b.empty()) return !a.empty() && b.empty();
      return ctx.compare(a.lm(), b.lm()) < 0;
    });
    for (auto& f : input) {
      if (f.empty()) continue;
      P h = kernel_.reduce(std::move(f), reducers(), nullptr, &clock_, budget_.max_seconds);
      if (h.empty()) continue;
      make_primitive(h);
      if (h.lm().deg == 0) return unit();
      insert(std::move(h));
    }
    while (!pairs_.empty()) {
      check_budget();
      Pair pr = take_pair();
      ++processed_;
      P s = kernel_.spoly(polys_[pr.i], polys_[pr.j]);
      P h = kernel_.reduce(std::move(s), reducers(), nullptr, &clock_, budget_.max_seconds);
      if (h.empty()) continue;
      make_primitive(h);
      if (h.lm().deg == 0) return unit();
      insert(std::move(h));
      if (budget_.trace && processed_ % 50 == 0) {
        *budget_.trace << "groebner: pairs=" << processed_ << " basis=" << active_count() << " queue=" << pairs_.size()
                       << " t=" << clock_.seconds() << "s\n";
      }
    }
    return finalize();
  }

  std::size_t processed() const { return processed_; }

 private:
  std::vector<P> unit() {
    P one;
    one.t.emplace_back(kernel_.ctx().one(), Ring::one());
    return {one};
  }

  void check_budget() {
    if (processed_ >= budget_.max_pairs) {
      throw BudgetExceeded("pair budget of " + std::to_string(budget_.max_pairs) + " exhausted");
    }
    algebra::check_deadline("Groebner basis");
    if (budget_.max_seconds > 0 && clock_.seconds() > budget_.max_seconds) {
      throw BudgetExceeded("time budget of " + std::to_string(budget_.max_seconds) + " s exhausted");
    }
  }

  std::size_t active_count() const { return std::count(active_.begin(), active_.end(), true); }

  const std::vector<const P*>& reducers() {
    if (reducers_dirty_) {
      reducers_.clear();
      for (std::size_t k = 0; k < polys_.size(); ++k)
        if (active_[k]) reducers_.push_back(&polys_[k]);
      reducers_dirty_ = false;
    }
    return reducers_;
  }

  Pair take_pair() {
    const OrderCtx& ctx = kernel_.ctx();
    std::size_t best = 0;
    for (std::size_t k = 1; k < pairs_.size(); ++k) {
      const Pair& a = pairs_[k];
      const Pair& b = pairs_[best];
      bool better;
      if (budget_.selection == Selection::Sugar && a.sugar != b.sugar) {
        better = a.sugar < b.sugar;
      } else {
        int c = ctx.compare(a.lcm, b.lcm);
        better = c < 0 || (c == 0 && (a.j < b.j || (a.j == b.j && a.i < b.i)));
      }
      if (better) best = k;
    }
    Pair out = std::move(pairs_[best]);
    pairs_[best] = std::move(pairs_.back());
    pairs_.pop_back();
    return out;
  }

  // Gebauer-Moeller update.
  void insert(P h) {
    const OrderCtx& ctx = kernel_.ctx();
    const std::size_t hi = polys_.size();
    polys_.push_back(std::move(h));
    active_.push_back(true);
    reducers_dirty_ = true;
    const P& hp = polys_[hi];

    std::vector<Pair> c;
    for (std::size_t g = 0; g < hi; ++g) {
      if (!active_[g]) continue;
      IMono l = ctx.lcm(hp.lm(), polys_[g].lm());
      std::uint32_t sugar = std::max(hp.sugar + l.deg - hp.lm().deg, polys_[g].sugar + l.deg - polys_[g].lm().deg);
      c.push_back({g, hi, std::move(l), sugar});
    }
    std::vector<Pair> d;
    for (std::size_t k = 0; k < c.size(); ++k) {
      const Pair& p1 = c[k];
      bool keep = ctx.coprime(hp.lm(), polys_[p1.i].lm());
      if (!keep) {
        keep = true;
        for (std::size_t m = k + 1; m < c.size() && keep; ++m)
          if (ctx.divides(c[m].lcm, p1.lcm)) keep = false;
        for (std::size_t m = 0; m < d.size() && keep; ++m)
          if (ctx.divides(d[m].lcm, p1.lcm)) keep = false;
      }
      if (keep) d.push_back(p1);
    }
    std::vector<Pair> kept;
    kept.reserve(pairs_.size() + d.size());
    for (auto& pr : pairs_) {
      bool drop = false;
      if (ctx.divides(hp.lm(), pr.lcm)) {
        IMono l1 = ctx.lcm(polys_[pr.i].lm(), hp.lm());
        IMono l2 = ctx.lcm(polys_[pr.j].lm(), hp.lm());
        drop = !ctx.equal(l1, pr.lcm) && !ctx.equal(l2, pr.lcm);
      }
      if (!drop) kept.push_back(std::move(pr));
    }
    for (auto& pr : d)
      if (!ctx.coprime(hp.lm(), polys_[pr.i].lm())) kept.push_back(std::move(pr));
    pairs_ = std::move(kept);
    for (std::size_t g = 0; g < hi; ++g)
      if (active_[g] && ctx.divides(hp.lm(), polys_[g].lm())) active_[g] = false;
  }

  std::vector<P> finalize() {
    const OrderCtx& ctx = kernel_.ctx();
    std::vector<P> basis;
    for (std::size_t k = 0; k < polys_.size(); ++k)
      if (active_[k]) basis.push_back(polys_[k]);
    std::sort(basis.begin(), basis.end(), [&](const P& a, const P& b) { return ctx.compare(a.lm(), b.lm()) < 0; });
    // interreduce: each element by all others (leading terms are irreducible)
    for (std::size_t k = 0; k < basis.size(); ++k) {
      std::vector<const P*> others;
      for (std::size_t m = 0; m < basis.size(); ++m)
        if (m != k) others.push_back(&basis[m]);
      P r = kernel_.reduce(basis[k], others, nullptr, &clock_, budget_.max_seconds);
      make_primitive(r);
      basis[k] = std::move(r);
    }
    return basis;
  }

  Kernel<Ring> kernel_;
  Budget budget_;
  Clock clock_;
  std::vector<P> polys_;
  std::vector<bool> active_;
  std::vector<Pair> pairs_;
  std::vector<const P*> reducers_;
  bool reducers_dirty_ = true;
  std::size_t processed_ = 0;
};

template <class Ring>
std::vector<const IPoly<Ring>*> pointers(const std::vector<IPoly<Ring>>& v) {
  std::vector<const IPoly<Ring>*> out;
  for (const auto& p : v) out.push_back(&p);
  return out;
}

template <class Ring>
RationalFunction normal_form_impl(const Polynomial& p, const BasisImpl<Ring>& b, const std::set<VarId>& params) {
  if (p.is_zero()) return {};
  Kernel<Ring> kernel(b.ctx);
  // to_internal makes the input primitive; keep the factor
  auto [cp, pp] = algebra::content_and_primitive(p);
  IPoly<Ring> ip = to_internal<Ring>(pp, b.ctx, params);
  // to_internal for PolyRing may remove a further content
  Polynomial back = to_global(ip, b.ctx);
  auto ratio = algebra::divide_exact(pp, back);
  Multiplier<Ring> mult;
  IPoly<Ring> r = kernel.reduce(std::move(ip), pointers(b.polys), &mult);
  // mult.num / mult.den * ip == r
  Polynomial rg = to_global(r, b.ctx);
  Polynomial num = rg * Ring::to_poly(mult.den) * *ratio;
  Polynomial den = Ring::to_poly(mult.num);
  return RationalFunction::make(num.scaled(cp), den);
}

}  // namespace

GroebnerBasis make_basis(std::shared_ptr<const BasisData> data, const MonomialOrder& order, std::size_t processed) {
  GroebnerBasis g;
  g.data_ = data;
  g.order_ = order;
  g.parameters_ = data->parameters;
  g.reduced_ = true;
  g.pairs_processed_ = processed;
  std::visit(
      [&](const auto& impl) {
        using Impl = std::decay_t<decltype(impl)>;
        for (const auto& p : impl.polys) {
          g.elements_.push_back(to_global(p, impl.ctx));
          g.leads_.push_back(impl.ctx.to_monomial(p.lm()));
          if constexpr (std::is_same_v<Impl, BasisImpl<IntRing>>) {
            g.lead_coeffs_.push_back(Polynomial(p.lc()));
          } else {
            g.lead_coeffs_.push_back(p.lc());
          }
        }
      },
      data->impl);
  return g;
}

namespace {

BasisObserver basis_observer;

std::set<VarId> check_variables(const Ideal& ideal, const MonomialOrder& order) {
  std::set<VarId> params(ideal.parameters.begin(), ideal.parameters.end());
  for (VarId v : order.variables()) {
    if (params.count(v)) throw std::invalid_argument("parameter " + algebra::variable_name(v) + " appears in the monomial order");
  }
  return params;
}

}  // namespace

void set_basis_observer(BasisObserver f) { basis_observer = std::move(f); }

GroebnerBasis buchberger(const Ideal& ideal, const MonomialOrder& order, const Budget& budget) {
  auto params = check_variables(ideal, order);
  OrderCtx ctx(order);
  std::shared_ptr<BasisData> data;
  std::size_t processed = 0;
  if (params.empty()) {
    std::vector<IPoly<IntRing>> input;
    for (const auto& f : ideal.generators)
      if (!f.is_zero()) input.push_back(to_internal<IntRing>(f, ctx, params));
    Buchberger<IntRing> bb(ctx, budget);
    auto polys = bb.run(std::move(input));
    processed = bb.processed();
    data = std::make_shared<BasisData>(BasisData{BasisImpl<IntRing>{ctx, std::move(polys)}, ideal.parameters});
  } else {
    std::vector<IPoly<PolyRing>> input;
    for (const auto& f : ideal.generators)
      if (!f.is_zero()) input.push_back(to_internal<PolyRing>(f, ctx, params));
    Buchberger<PolyRing> bb(ctx, budget);
    auto polys = bb.run(std::move(input));
    processed = bb.processed();
    data = std::make_shared<BasisData>(BasisData{BasisImpl<PolyRing>{ctx, std::move(polys)}, ideal.parameters});
  }
  auto g = make_basis(data, order, processed);
  if (basis_observer) basis_observer(g);
  return g;
}

bool GroebnerBasis::is_unit() const { return elements_.size() == 1 && leads_[0].is_one(); }

std::vector<std::pair<Monomial, RationalFunction>> GroebnerBasis::monic(std::size_t i) const {
  std::vector<std::pair<Monomial, RationalFunction>> out;
  std::set<VarId> params(parameters_.begin(), parameters_.end());
  auto vars = order_.variables();
  std::vector<VarId> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [mono, coeff] : elements_[i].collect(sorted)) {
    out.emplace_back(mono, RationalFunction::make(coeff, lead_coeffs_[i]));
  }
  return out;
}

RationalFunction normal_form(const Polynomial& p, const GroebnerBasis& g) {
  std::set<VarId> params(g.parameters().begin(), g.parameters().end());
  return std::visit([&](const auto& impl) { return normal_form_impl(p, impl, params); }, g.data()->impl);
}

bool reduces_to_zero(const Polynomial& p, const GroebnerBasis& g) { return normal_form(p, g).is_zero(); }

bool s_polynomials_reduce_to_zero(const GroebnerBasis& g) {
  return std::visit(
      [&](const auto& impl) {
        using Impl = std::decay_t<decltype(impl)>;
        using Ring = std::conditional_t<std::is_same_v<Impl, BasisImpl<IntRing>>, IntRing, PolyRing>;
        Kernel<Ring> kernel(impl.ctx);
        auto ptrs = pointers(impl.polys);
        for (std::size_t i = 0; i < impl.polys.size(); ++i) {
          for (std::size_t j = i + 1; j < impl.polys.size(); ++j) {
            auto s = kernel.spoly(impl.polys[i], impl.polys[j]);
            if (!kernel.reduce(std::move(s), ptrs, nullptr).empty()) return false;
          }
        }
        return true;
      },
      g.data()->impl);
}

std::vector<VarId> ring_variables(const Ideal& ideal) {
  std::set<VarId> params(ideal.parameters.begin(), ideal.parameters.end());
  std::set<VarId> vars;
  for (const auto& f : ideal.generators)
    for (VarId v : f.variables())
      if (!params.count(v)) vars.insert(v);
  return {vars.begin(), vars.end()};
}

std::pair<GroebnerBasis, Ideal> eliminate_with(const Ideal& ideal, std::span<const VarId> vars,
                                               const MonomialOrder& order, const Budget& budget) {
  GroebnerBasis g = buchberger(ideal, order, budget);
  Ideal out;
  out.parameters = ideal.parameters;
  for (const auto& e : g.elements())
    if (!e.depends_on_any(vars)) out.generators.push_back(e);
  return {std::move(g), std::move(out)};
}

Ideal eliminate(const Ideal& ideal, std::span<const VarId> vars, const Budget& budget) {
  std::set<VarId> elim(vars.begin(), vars.end());
  std::vector<VarId> rest;
  for (VarId v : ring_variables(ideal))
    if (!elim.count(v)) rest.push_back(v);
  std::vector<VarId> first(elim.begin(), elim.end());
  return eliminate_with(ideal, vars, MonomialOrder::block(first, rest), budget).second;
}

Ideal saturate(const Ideal& ideal, const Polynomial& f, const Budget& budget) {
  if (f.is_zero()) throw std::invalid_argument("saturate: f must be nonzero");
  VarId t = algebra::fresh_variable("sat");
  Ideal ext = ideal;
  ext.generators.push_back(Polynomial::variable(t) * f - Polynomial(1));
  std::vector<VarId> elim{t};
  return eliminate(ext, elim, budget);
}

}  // namespace idspec::groebner
