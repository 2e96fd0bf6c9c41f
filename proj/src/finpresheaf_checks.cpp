#include <sstream>

#include "scopekit/finpresheaf.hpp"

namespace scopekit {

namespace {

const char* kSuite = "presheaf-laws";

void record_eq(Report& r, const std::string& suite, const std::string& axiom, const FinMorphism& f,
               const FinMorphism& g, const FinStructure& domain) {
  auto w = difference_witness(f, g, domain);
  r.add(suite, axiom, !w, static_cast<long long>(domain.total_size()), w.value_or(""));
}

void record_natural(Report& r, const std::string& suite, const std::string& axiom, const Mediator& m,
                    const FinStructure& x, const FinStructure& y) {
  if (m.defect) {
    r.add(suite, axiom, false, 1, *m.defect);
    return;
  }
  auto w = naturality_witness(m.map, x, y);
  r.add(suite, axiom, !w, static_cast<long long>(x.total_size()), w.value_or(""));
}

void record_tensor(Report& r, const std::string& suite, const Tensor& t) {
  auto w = t.action_defect();
  if (!w) w = t.structure().check_functor_laws();
  r.add(suite, "tensor action well defined and functorial", !w, 1, w.value_or(""));
}

Mediator plain(FinMorphism f) { return Mediator{std::move(f), std::nullopt}; }

FinMorphism nu_identity_env_point(const Tensor& xy, const FinMorphism& var_x, const FinMorphism& var_y,
                                  const FinStructure& nu) {
  const auto& u = nu.universe();
  FinMorphism f = identity_morphism(nu);
  for (std::size_t s = 0; s < nu.sorts().size(); ++s)
    for (std::size_t c = 0; c < u->contexts().size(); ++c) {
      const Context& g = u->contexts()[c];
      std::vector<std::size_t> env(g.size());
      for (std::size_t y = 0; y < g.size(); ++y) {
        auto vs = vars_of_sort(g, g[y]);
        std::size_t ys = std::find(u->sorts().begin(), u->sorts().end(), g[y]) - u->sorts().begin();
        env[y] = var_y(ys, c, std::find(vs.begin(), vs.end(), y) - vs.begin());
      }
      for (std::size_t e = 0; e < nu.size(s, c); ++e)
        f.map[s][c][e] = xy.class_of(s, c, Triple{c, var_x(s, c, e), env});
    }
  return f;
}

}  // namespace

Report check_action_axioms(const FinStructure& p, const FinStructure& q, const FinStructure& l,
                           const FinStructure& m, const ActionCheckOptions& opt) {
  Report r;
  const auto& u = p.universe();
  FinStructure nu = variables(u);

  Tensor pq = tensor(p, q), ql = tensor(q, l);
  Tensor pq_l = tensor(pq.structure(), l), p_ql = tensor(p, ql.structure());
  for (auto* t : {&pq, &ql, &pq_l, &p_ql}) record_tensor(r, kSuite, *t);

  Mediator a1 = associator(pq_l, pq, ql, p_ql);
  if (opt.corrupt_associator) opt.corrupt_associator(a1.map);
  record_natural(r, kSuite, "associator naturality", a1, pq_l.structure(), p_ql.structure());
  {
    bool bij = !a1.defect && is_bijection(a1.map, pq_l.structure(), p_ql.structure());
    r.add(kSuite, "associator bijective", bij, static_cast<long long>(pq_l.structure().total_size()),
          bij ? "" : "associator is not a bijection on classes");
    if (auto inv = inverse(a1.map, pq_l.structure(), p_ql.structure()))
      record_eq(r, kSuite, "associator inverse round trip", compose(*inv, a1.map), identity_morphism(pq_l.structure()),
                pq_l.structure());
  }

  // pentagon
  Tensor a = tensor(pq_l.structure(), m);
  Tensor lm = tensor(l, m);
  Tensor q_lm = tensor(q, lm.structure());
  Tensor p_q_lm = tensor(p, q_lm.structure());
  Tensor pq_lm = tensor(pq.structure(), lm.structure());
  Tensor b = tensor(p_ql.structure(), m);
  Tensor ql_m = tensor(ql.structure(), m);
  Tensor p_qlm = tensor(p, ql_m.structure());
  for (auto* t : {&a, &lm, &q_lm, &p_q_lm, &pq_lm, &b, &ql_m, &p_qlm}) record_tensor(r, kSuite, *t);

  Mediator a_pq_l_m = associator(a, pq_l, lm, pq_lm);
  Mediator a_p_q_lm = associator(pq_lm, pq, q_lm, p_q_lm);
  Mediator a1_m = tensor_map(a1.map, identity_morphism(m), a, b);
  Mediator a_p_ql_m = associator(b, p_ql, ql_m, p_qlm);
  Mediator a_q_l_m = associator(ql_m, ql, lm, q_lm);
  Mediator p_aqlm = tensor_map(identity_morphism(p), a_q_l_m.map, p_qlm, p_q_lm);
  record_natural(r, kSuite, "associator naturality", a_pq_l_m, a.structure(), pq_lm.structure());
  record_natural(r, kSuite, "associator naturality", a_p_q_lm, pq_lm.structure(), p_q_lm.structure());
  record_natural(r, kSuite, "associator naturality", a_q_l_m, ql_m.structure(), q_lm.structure());
  {
    std::optional<std::string> defect;
    for (auto* med : {&a_pq_l_m, &a_p_q_lm, &a1_m, &a_p_ql_m, &p_aqlm})
      if (med->defect && !defect) defect = med->defect;
    if (defect) {
      r.add(kSuite, "action pentagon", false, 1, *defect);
    } else {
      FinMorphism lhs = compose(a_p_q_lm.map, a_pq_l_m.map);
      FinMorphism rhs = compose(p_aqlm.map, compose(a_p_ql_m.map, a1_m.map));
      record_eq(r, kSuite, "action pentagon", lhs, rhs, a.structure());
    }
  }

  // triangle and unitors
  Tensor p_nu = tensor(p, nu), nu_q = tensor(nu, q);
  Tensor pnu_q = tensor(p_nu.structure(), q), p_nuq = tensor(p, nu_q.structure());
  for (auto* t : {&p_nu, &nu_q, &pnu_q, &p_nuq}) record_tensor(r, kSuite, *t);
  Mediator alpha = associator(pnu_q, p_nu, nu_q, p_nuq);
  Mediator lq = left_unitor(nu_q, q);
  Mediator rp = right_unitor(p_nu, p);
  Mediator rp_inv = right_unitor_inverse(p, p_nu);
  record_natural(r, kSuite, "left unitor naturality", lq, nu_q.structure(), q);
  record_natural(r, kSuite, "right unitor naturality", rp, p_nu.structure(), p);
  record_natural(r, kSuite, "right unitor inverse naturality", rp_inv, p, p_nu.structure());
  record_natural(r, kSuite, "associator naturality", alpha, pnu_q.structure(), p_nuq.structure());
  {
    bool bij = !rp.defect && is_bijection(rp.map, p_nu.structure(), p);
    r.add(kSuite, "right unitor bijective", bij, static_cast<long long>(p_nu.structure().total_size()),
          bij ? "" : "right unitor is not a bijection");
    record_eq(r, kSuite, "right unitor inverse round trip", compose(rp.map, rp_inv.map), identity_morphism(p), p);
    if (bij)
      record_eq(r, kSuite, "right unitor inverse round trip", compose(rp_inv.map, rp.map),
                identity_morphism(p_nu.structure()), p_nu.structure());
    bool lbij = !lq.defect && is_bijection(lq.map, nu_q.structure(), q);
    r.add(kSuite, "left unitor bijective (homogeneous)", lbij, static_cast<long long>(nu_q.structure().total_size()),
          lbij ? "" : "left unitor on nu (x) Q is not a bijection");
  }
  {
    Mediator lhs_m = tensor_map(identity_morphism(p), lq.map, p_nuq, pq);
    Mediator rhs_m = tensor_map(rp.map, identity_morphism(q), pnu_q, pq);
    if (lhs_m.defect || rhs_m.defect || alpha.defect)
      r.add(kSuite, "action triangle", false, 1, lhs_m.defect.value_or(rhs_m.defect.value_or(alpha.defect.value_or(""))));
    else
      record_eq(r, kSuite, "action triangle", compose(lhs_m.map, alpha.map), rhs_m.map, pnu_q.structure());
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

struct SkewMorph {
  Mediator mon;
  Mediator act;
};

struct Star {
  Tensor mon;
  Tensor act;
  SkewObject obj() const { return SkewObject{mon.structure(), act.structure()}; }
};

Star star(const SkewObject& p, const SkewObject& q) { return Star{tensor(p.mon, q.mon), tensor(p.act, q.mon)}; }

SkewMorph skew_map(const SkewMorph& f, const SkewMorph& g, const Star& pq, const Star& pq2) {
  return SkewMorph{tensor_map(f.mon.map, g.mon.map, pq.mon, pq2.mon), tensor_map(f.act.map, g.mon.map, pq.act, pq2.act)};
}

SkewMorph skew_id(const SkewObject& p) { return SkewMorph{plain(identity_morphism(p.mon)), plain(identity_morphism(p.act))}; }

SkewMorph skew_compose(const SkewMorph& g, const SkewMorph& f) {
  SkewMorph h{plain(compose(g.mon.map, f.mon.map)), plain(compose(g.act.map, f.act.map))};
  h.mon.defect = f.mon.defect ? f.mon.defect : g.mon.defect;
  h.act.defect = f.act.defect ? f.act.defect : g.act.defect;
  return h;
}

// (p*q)*r -> p*(q*r)
SkewMorph skew_assoc(const Star& pq_r, const Star& pq, const Star& qr, const Star& p_qr) {
  return SkewMorph{associator(pq_r.mon, pq.mon, qr.mon, p_qr.mon), associator(pq_r.act, pq.act, qr.mon, p_qr.act)};
}

SkewMorph skew_rho_inv(const SkewObject& p, const Star& p_i) {
  return SkewMorph{right_unitor_inverse(p.mon, p_i.mon), right_unitor_inverse(p.act, p_i.act)};
}

SkewMorph skew_lambda(const Star& i_p, const SkewObject& p) {
  // the second component has an empty domain
  Mediator act{identity_morphism(i_p.act.structure()), std::nullopt};
  if (i_p.act.structure().total_size() != 0) act.defect = "kNeut * P has a non-empty second-class part";
  return SkewMorph{left_unitor(i_p.mon, p.mon), act};
}

void record_skew_eq(Report& r, const std::string& axiom, const SkewMorph& f, const SkewMorph& g, const SkewObject& dom) {
  for (auto* m : {&f.mon, &f.act, &g.mon, &g.act})
    if (m->defect) {
      r.add("skew", axiom, false, 1, *m->defect);
      return;
    }
  auto w = difference_witness(f.mon.map, g.mon.map, dom.mon);
  if (!w) w = difference_witness(f.act.map, g.act.map, dom.act);
  r.add("skew", axiom, !w, static_cast<long long>(dom.mon.total_size() + dom.act.total_size()), w.value_or(""));
}

}  // namespace

Report check_skew(const std::vector<SkewObject>& objects, const UniverseRef& u, const Sort& second_sort) {
  Report r;
  if (objects.empty()) return r;
  FinStructure nu = variables(u);
  SkewObject unit{nu, empty_structure(u, {second_sort})};
  auto obj = [&](std::size_t i) -> const SkewObject& { return objects[i % objects.size()]; };

  for (std::size_t i = 0; i < objects.size(); ++i) {
    const SkewObject &A = obj(i), &B = obj(i + 1), &C = obj(i + 2), &D = obj(i + 3);

    // pentagon
    Star ab = star(A, B), bc = star(B, C), cd = star(C, D);
    Star ab_c = star(ab.obj(), C), a_bc = star(A, bc.obj());
    Star abc_d = star(ab_c.obj(), D);
    Star ab_cd = star(ab.obj(), cd.obj());
    Star b_cd = star(B, cd.obj());
    Star a_bcd = star(A, b_cd.obj());
    Star a_bc_d = star(a_bc.obj(), D);
    Star bc_d = star(bc.obj(), D);
    Star a_bc_d2 = star(A, bc_d.obj());
    SkewMorph lhs = skew_compose(skew_assoc(ab_cd, ab, b_cd, a_bcd), skew_assoc(abc_d, ab_c, cd, ab_cd));
    SkewMorph alpha_abc = skew_assoc(ab_c, ab, bc, a_bc);
    SkewMorph step1 = skew_map(alpha_abc, skew_id(D), abc_d, a_bc_d);
    SkewMorph step2 = skew_assoc(a_bc_d, a_bc, bc_d, a_bc_d2);
    SkewMorph step3 = skew_map(skew_id(A), skew_assoc(bc_d, bc, cd, b_cd), a_bc_d2, a_bcd);
    record_skew_eq(r, "pentagon", lhs, skew_compose(step3, skew_compose(step2, step1)), abc_d.obj());

    bool abij = !alpha_abc.mon.defect && !alpha_abc.act.defect &&
                is_bijection(alpha_abc.mon.map, ab_c.mon.structure(), a_bc.mon.structure()) &&
                is_bijection(alpha_abc.act.map, ab_c.act.structure(), a_bc.act.structure());
    r.add("skew", "associator bijective", abij, 1, abij ? "" : "skew associator not invertible");
    {
      auto w = alpha_abc.mon.defect ? alpha_abc.mon.defect : alpha_abc.act.defect;
      if (!w) w = naturality_witness(alpha_abc.mon.map, ab_c.mon.structure(), a_bc.mon.structure());
      if (!w) w = naturality_witness(alpha_abc.act.map, ab_c.act.structure(), a_bc.act.structure());
      r.add("skew", "associator naturality", !w, 1, w.value_or(""));
    }

    // right unitor is invertible
    Star a_i = star(A, unit);
    SkewMorph rho = skew_rho_inv(A, a_i);
    bool rbij = !rho.mon.defect && !rho.act.defect && is_bijection(rho.mon.map, A.mon, a_i.mon.structure()) &&
                is_bijection(rho.act.map, A.act, a_i.act.structure());
    r.add("skew", "right unitor bijective", rbij, 1, rbij ? "" : "skew right unitor not invertible");

    // rectangle: (A * lambda_B) . alpha_{A,I,B} . (rho_A * B) = id
    Star ai_b = star(a_i.obj(), B), i_b = star(unit, B), a_ib = star(A, i_b.obj());
    SkewMorph r1 = skew_map(rho, skew_id(B), ab, ai_b);
    SkewMorph r2 = skew_assoc(ai_b, a_i, i_b, a_ib);
    SkewMorph r3 = skew_map(skew_id(A), skew_lambda(i_b, B), a_ib, ab);
    record_skew_eq(r, "rectangle (unit middle)", skew_compose(r3, skew_compose(r2, r1)), skew_id(ab.obj()), ab.obj());

    // left: lambda_{A*B} . alpha_{I,A,B} = lambda_A * B
    Star i_a = star(unit, A), ia_b = star(i_a.obj(), B), i_ab = star(unit, ab.obj());
    SkewMorph l_lhs = skew_compose(skew_lambda(i_ab, ab.obj()), skew_assoc(ia_b, i_a, ab, i_ab));
    SkewMorph l_rhs = skew_map(skew_lambda(i_a, A), skew_id(B), ia_b, ab);
    record_skew_eq(r, "left unitor compatibility", l_lhs, l_rhs, ia_b.obj());

    // right: alpha_{A,B,I} . rho_{A*B} = A * rho_B
    Star ab_i = star(ab.obj(), unit), b_i = star(B, unit), a_bi = star(A, b_i.obj());
    SkewMorph rr_lhs = skew_compose(skew_assoc(ab_i, ab, b_i, a_bi), skew_rho_inv(ab.obj(), ab_i));
    SkewMorph rr_rhs = skew_map(skew_id(A), skew_rho_inv(B, b_i), ab, a_bi);
    record_skew_eq(r, "right unitor compatibility", rr_lhs, rr_rhs, ab.obj());

    // homogeneous restriction: the monoid part of lambda is invertible
    SkewMorph lam = skew_lambda(i_a, A);
    bool lbij = !lam.mon.defect && is_bijection(lam.mon.map, i_a.mon.structure(), A.mon);
    r.add("skew", "left unitor bijective on homogeneous part", lbij, 1, lbij ? "" : "nu (x) M -> M not invertible");
  }

  // triangle: lambda_I . rho_I = id_I
  Star i_i = star(unit, unit);
  record_skew_eq(r, "triangle (unit)", skew_compose(skew_lambda(i_i, unit), skew_rho_inv(unit, i_i)), skew_id(unit), unit);

  // non-invertibility witness
  FinStructure top_m = terminal(u, nu.sorts());
  FinStructure top_a = terminal(u, {second_sort});
  SkewObject top{top_m, top_a};
  Star i_top = star(unit, top);
  bool witness = true;
  std::ostringstream os;
  for (std::size_t c = 0; c < u->contexts().size(); ++c) {
    witness = witness && i_top.act.structure().size(0, c) == 0 && top_a.size(0, c) == 1;
    if (c == 0)
      os << "(kNeut * T)_{" << to_string(second_sort) << "} " << to_string(u->contexts()[c])
         << " = {} while T_{" << to_string(second_sort) << "} " << to_string(u->contexts()[c]) << " = {*}";
  }
  os << " (checked at all " << u->contexts().size() << " contexts)";
  r.add("skew", "left unitor not invertible", witness, static_cast<long long>(u->contexts().size()), os.str());
  return r;
}

// ---------------------------------------------------------------------------

Report check_pointed_tensor(const FinStructure& a, const FinMorphism& var_a, const FinStructure& b,
                            const FinMorphism& var_b, const FinStructure& c, const FinMorphism& var_c) {
  Report r;
  const char* suite = "pointed";
  const auto& u = a.universe();
  FinStructure nu = variables(u);
  for (auto* pt : {&var_a, &var_b, &var_c}) {
    const FinStructure& tgt = pt == &var_a ? a : pt == &var_b ? b : c;
    auto w = naturality_witness(*pt, nu, tgt);
    r.add(suite, "point naturality", !w, static_cast<long long>(nu.total_size()), w.value_or(""));
  }
  Tensor ab = tensor(a, b);
  FinMorphism var_ab = nu_identity_env_point(ab, var_a, var_b, nu);
  {
    auto w = naturality_witness(var_ab, nu, ab.structure());
    r.add(suite, "tensored point naturality", !w, static_cast<long long>(nu.total_size()), w.value_or(""));
  }
  // nu with the identity point: the tensored point is the inverse left unitor of B's point
  {
    FinMorphism id_nu = identity_morphism(nu);
    Tensor nu_b = tensor(nu, b);
    FinMorphism pt = nu_identity_env_point(nu_b, id_nu, var_b, nu);
    Mediator l = left_unitor(nu_b, b);
    auto inv = l.defect ? std::nullopt : inverse(l.map, nu_b.structure(), b);
    if (!inv) {
      r.add(suite, "nu (x) B point is inverse left unitor of B's point", false, 1, "left unitor not invertible");
    } else {
      record_eq(r, suite, "nu (x) B point is inverse left unitor of B's point", pt, compose(*inv, var_b), nu);
    }
  }
  // right unitor preserves points
  {
    FinMorphism id_nu = identity_morphism(nu);
    Tensor a_nu = tensor(a, nu);
    FinMorphism pt = nu_identity_env_point(a_nu, var_a, id_nu, nu);
    Mediator rho = right_unitor(a_nu, a);
    record_eq(r, suite, "right unitor preserves points", compose(rho.map, pt), var_a, nu);
    Mediator rinv = right_unitor_inverse(a, a_nu);
    record_eq(r, suite, "right unitor inverse preserves points", compose(rinv.map, var_a), pt, nu);
    Tensor nu_a = tensor(nu, a);
    FinMorphism lpt = nu_identity_env_point(nu_a, id_nu, var_a, nu);
    Mediator l = left_unitor(nu_a, a);
    record_eq(r, suite, "left unitor preserves points", compose(l.map, lpt), var_a, nu);
  }
  // associator preserves points
  {
    Tensor ab_c = tensor(ab.structure(), c), bc = tensor(b, c), a_bc = tensor(a, bc.structure());
    FinMorphism var_bc = nu_identity_env_point(bc, var_b, var_c, nu);
    FinMorphism lhs_pt = nu_identity_env_point(ab_c, var_ab, var_c, nu);
    FinMorphism rhs_pt = nu_identity_env_point(a_bc, var_a, var_bc, nu);
    Mediator alpha = associator(ab_c, ab, bc, a_bc);
    if (alpha.defect)
      r.add(suite, "associator preserves points", false, 1, *alpha.defect);
    else
      record_eq(r, suite, "associator preserves points", compose(alpha.map, lhs_pt), rhs_pt, nu);
  }
  // nu with the identity point is initial among pointed structures
  {
    auto maps = natural_maps(nu, a);
    std::size_t preserving = 0;
    bool is_point = false;
    for (auto& f : maps)
      if (equal(f, var_a)) {
        ++preserving;
        is_point = true;
      }
    r.add(suite, "unique point-preserving map from nu is the point", preserving == 1 && is_point,
          static_cast<long long>(maps.size()),
          preserving == 1 ? "" : std::to_string(preserving) + " point-preserving maps found");
  }
  return r;
}

// ---------------------------------------------------------------------------

Report check_exponential(const FinStructure& p, const FinStructure& q, const FinStructure& rr, std::size_t max_maps) {
  Report r;
  const char* suite = "exponential";
  Exponential e = exponential(p, q);
  {
    auto w = e.structure.check_functor_laws();
    r.add(suite, "exponential is a presheaf", !w, static_cast<long long>(e.structure.total_size()), w.value_or(""));
  }
  Tensor e_q = tensor(e.structure, q);
  Mediator ev = exp_eval(e, e_q, p, q);
  record_natural(r, suite, "eval well defined and natural", ev, e_q.structure(), p);
  Tensor r_q = tensor(rr, q);
  auto fs = natural_maps(r_q.structure(), p, max_maps);
  auto gs = natural_maps(rr, e.structure, 4096);
  long long ok_count = 0, uniq_count = 0;
  std::optional<std::string> fail, ufail;
  for (auto& f : fs) {
    Mediator cur = exp_curry(f, r_q, rr, e, q);
    if (cur.defect) {
      if (!fail) fail = *cur.defect;
      continue;
    }
    if (auto w = naturality_witness(cur.map, rr, e.structure)) {
      if (!fail) fail = "curry not natural: " + *w;
      continue;
    }
    Mediator lifted = tensor_map(cur.map, identity_morphism(q), r_q, e_q);
    FinMorphism back = compose(ev.map, lifted.map);
    if (auto w = difference_witness(back, f, r_q.structure())) {
      if (!fail) fail = "eval . (curry f (x) id) differs from f: " + *w;
      continue;
    }
    ++ok_count;
    std::size_t factorings = 0;
    for (auto& g : gs) {
      Mediator lg = tensor_map(g, identity_morphism(q), r_q, e_q);
      if (!lg.defect && equal(compose(ev.map, lg.map), f)) ++factorings;
    }
    if (factorings == 1)
      ++uniq_count;
    else if (!ufail)
      ufail = std::to_string(factorings) + " factorings of a map through eval";
  }
  r.add(suite, "eval . (curry f (x) id) = f", !fail, static_cast<long long>(fs.size()), fail.value_or(""));
  r.add(suite, "curry is the unique factoring", !ufail, static_cast<long long>(fs.size()), ufail.value_or(""));
  (void)ok_count;
  (void)uniq_count;
  return r;
}

// ---------------------------------------------------------------------------

Report presheaf_law_suite(std::uint64_t seed, int structures) {
  Report r;
  std::mt19937_64 rng(seed);
  auto u = std::make_shared<const ContextUniverse>(std::vector<SortId>{"b"}, 2);
  Sort fb = Sort::first("b"), sc = Sort::second("c");
  FinStructure nu = variables(u);
  std::vector<SkewObject> skew_objects;
  for (int i = 0; i < structures; ++i) {
    FinStructure p = random_structure(u, {sc}, rng);
    FinStructure q = random_structure(u, {fb}, rng);
    FinStructure l = random_structure(u, {fb}, rng);
    FinStructure m = random_structure(u, {fb}, rng);
    for (auto* x : {&p, &q, &l, &m}) {
      auto w = x->check_functor_laws();
      r.add(kSuite, "random structure is a presheaf", !w, 1, w.value_or(""));
    }
    r.merge(check_action_axioms(p, q, l, m));
    skew_objects.push_back(SkewObject{q, p});

    RandomShape pointed;
    pointed.force_generator = true;
    FinStructure a = random_structure(u, {fb}, rng, pointed);
    FinStructure b = random_structure(u, {fb}, rng, pointed);
    FinStructure c = random_structure(u, {fb}, rng, pointed);
    r.merge(check_pointed_tensor(a, generator_point(a, nu), b, generator_point(b, nu), c, generator_point(c, nu)));

    if (i < std::max(1, structures / 4)) {
      RandomShape small;
      small.max_constants = 1;
      FinStructure pe = random_structure(u, {sc}, rng, small);
      FinStructure re = random_structure(u, {sc}, rng, small);
      r.merge(check_exponential(pe, q, re, 32));
    }
  }
  r.merge(check_skew(skew_objects, u, sc));
  return r.condensed();
}

}  // namespace scopekit
