#include <cstdio>
#include <limits>

#include "pipeline_internal.hpp"
#include "quatperiod/diffop.hpp"

namespace quatperiod {

using namespace detail;

namespace {

long eichler_level(const JobConfig& c) {
  if (c.disc == 0) throw ArgumentError("--disc is required");
  const long level = c.level > 0 ? c.level : c.disc;
  return level / c.disc;
}

Json class_set_json(const ClassSet& cs) {
  const auto& o = cs.order();
  Json norms = Json::array(), units = Json::array();
  for (const auto& n : cs.norms()) norms.push_back(rat(n));
  for (long e : cs.unit_counts()) units.push_back(e);
  return {{"algebra", {{"a", rat(cs.algebra().a())}, {"b", rat(cs.algebra().b())}, {"disc", o.n1}}},
          {"level", o.level()},
          {"n2", o.n2},
          {"size", cs.size()},
          {"unit_counts", units},
          {"ideal_norms", norms},
          {"mass", rat(cs.mass())},
          {"mass_formula", rat(eichler_mass(o.n1, o.n2))},
          {"order_basis", matrix_json(o.lattice.basis())}};
}

Json cmd_classset(const JobConfig& c) {
  const auto cs = class_set(c.disc, eichler_level(c));
  Json out = class_set_json(*cs);
  if (cs->mass() != eichler_mass(cs->order().n1, cs->order().n2))
    throw InvariantFailure("class set mass " + rat(cs->mass()) + " differs from the mass formula");
  return out;
}

Json cmd_brandt(const JobConfig& c) {
  const auto cs = class_set(c.disc, eichler_level(c));
  const long level = cs->order().level();
  Json hecke = Json::object(), al = Json::object();
  for (long p : primes_up_to(c.pmax))
    if (level % p != 0) hecke[std::to_string(p)] = matrix_json(brandt_matrix(*cs, p, c.nu1));
  for (long p : prime_factors(level)) al[std::to_string(p)] = matrix_json(atkin_lehner(*cs, p, c.nu1));
  return {{"disc", cs->order().n1},
          {"level", level},
          {"nu", c.nu1},
          {"convention", "T(p) = p^nu sum_j (1/e_j) sum_{q(x) = p} tau(x), column vectors"},
          {"hecke", hecke},
          {"atkin_lehner", al}};
}

Json cmd_eigen(const JobConfig& c) {
  const auto cs = class_set(c.disc, eichler_level(c));
  return {{"disc", cs->order().n1},
          {"level", cs->order().level()},
          {"nu", c.nu1},
          {"pmax", c.pmax},
          {"eigenforms", eigen_json(cs, c.nu1, c.pmax, Cache(c.cache_dir()))}};
}

Json cmd_theta(const JobConfig& c) {
  const auto cs = class_set(c.disc, eichler_level(c));
  Json lifts = Json::array();
  for (const auto& e : eigen_json(cs, c.nu1, c.pmax, Cache(c.cache_dir()))) {
    if (e["field"].get<long>() != 1 || !e["supported"].get<bool>()) continue;
    Json coeffs = Json::array();
    for (const auto& a : eichler_theta(form_from_json(cs, c.nu1, e), c.prec)) coeffs.push_back(rat(a));
    lifts.push_back({{"index", e["index"]}, {"essential", e["essential"]}, {"coefficients", coeffs}});
  }
  return {{"disc", cs->order().n1}, {"level", cs->order().level()}, {"nu", c.nu1}, {"lifts", lifts}};
}

QuatForm pick_form(const std::shared_ptr<ClassSet>& cs, int nu, int index, const Cache& cache, long pmax) {
  if (index < 0) {
    if (nu != 0) throw ArgumentError("the constant function has weight nu = 0");
    return QuatForm{cs, 0, QVector(cs->size(), Rational(1))};
  }
  const Json forms = eigen_json(cs, nu, pmax, cache);
  for (const auto& e : forms)
    if (e["index"].get<int>() == index) {
      if (e["field"].get<long>() != 1) throw ArgumentError("eigenform " + std::to_string(index) + " is not rational");
      return form_from_json(cs, nu, e);
    }
  throw ArgumentError("no eigenform with index " + std::to_string(index) + " at nu = " + std::to_string(nu));
}

FourierTable lift_for(const JobConfig& c) {
  if (c.nu1 < c.nu2 || (c.nu1 - c.nu2) % 2 != 0) throw ArgumentError("need nu1 >= nu2 with nu1 - nu2 even");
  const auto cs = class_set(c.disc, eichler_level(c));
  const Cache cache(c.cache_dir());
  return yoshida_lift(pick_form(cs, c.nu1, c.phi1, cache, c.pmax), pick_form(cs, c.nu2, c.phi2, cache, c.pmax),
                      c.prec);
}

Json cmd_yoshida(const JobConfig& c) {
  const FourierTable table = lift_for(c);
  Json coeffs = Json::array();
  for (const auto& [t, p] : table.coeffs)
    if (!p.is_zero()) coeffs.push_back({{"T", {t.n1, t.m2, t.n2}}, {"poly", poly_json(p)}});
  return {{"nu", {table.nu1, table.nu2}}, {"prec", table.prec}, {"coeffs", coeffs}};
}

Json restriction_json(const std::map<std::pair<long, long>, Rational>& m) {
  Json out = Json::array();
  for (const auto& [n, v] : m) out.push_back({{"n", {n.first, n.second}}, {"c", rat(v)}});
  return out;
}

Json cmd_restrict(const JobConfig& c) {
  const FourierTable table = lift_for(c);
  const int k = c.nu1 - c.nu2 + 2;
  Json out{{"nu", {c.nu1, c.nu2}},
           {"alpha", {c.alpha1, c.alpha2}},
           {"gamma", c.gamma},
           {"weights", {k + c.alpha1 + c.gamma, k + c.alpha2 + c.gamma}}};
  if (c.gamma == 0) {
    out["coeffs"] = restriction_json(diagonal_restriction(table, c.alpha1, c.alpha2));
  } else {
    const auto m = apply_to_table(projection_poly(k, c.alpha1, c.alpha2, c.gamma), table, c.alpha1, c.alpha2);
    for (const auto& [n, v] : m)
      if ((n.first == 0 || n.second == 0) && v != 0)
        throw InvariantFailure("operator image is not cuspidal at (" + std::to_string(n.first) + ", " +
                               std::to_string(n.second) + ")");
    out["coeffs"] = restriction_json(m);
  }
  return out;
}

Json cmd_diffop(const JobConfig& c) {
  const int k = c.nu1 - c.nu2 + 2;
  const DiffOperator& op = projection_poly(k, c.alpha1, c.alpha2, c.gamma);
  Json coeffs = Json::array();
  for (const auto& [kappa, v] : op.coeffs) coeffs.push_back({{"u", {kappa[0], kappa[1], kappa[2]}}, {"c", rat(v)}});
  Json out{{"k", k},
           {"a", op.a},
           {"b", op.b},
           {"r", op.r},
           {"monomials", "u1^i u12^j u2^m"},
           {"coeffs", coeffs},
           {"z12_test", rat(op.z12_test())}};
  if (!c.index.empty()) {
    if (c.index.size() != 3) throw ArgumentError("--T takes n1,m2,n2");
    const HalfIntMatrix t{c.index[0], c.index[1], c.index[2]};
    out["T"] = c.index;
    out["Q"] = poly_json(q_poly(op, t));
  }
  return out;
}

Json cmd_gate(const JobConfig& c) {
  const auto records = load_newforms(c);
  if (c.labels.size() < 3) throw ArgumentError("gate needs labels h,f1,f2");
  const auto& h = find_newform(records, c.labels.front());
  const auto& f1 = find_newform(records, c.labels[c.labels.size() - 2]);
  const auto& f2 = find_newform(records, c.labels.back());
  const long level = c.level > 0 ? c.level : h.level;
  for (const auto* f : {&h, &f1, &f2})
    if (f->level != level) throw ArgumentError("newform " + f->label + " is not of level " + std::to_string(level));
  SignData s;
  s.level = level;
  Json table = Json::array();
  for (long p : prime_factors(level)) {
    s.shared[p] = h.signs.at(p);
    s.first[p] = f1.signs.at(p);
    s.second[p] = f2.signs.at(p);
    table.push_back({{"p", p}, {"h", s.shared[p]}, {"f1", s.first[p]}, {"f2", s.second[p]}, {"product", s.product(p)}});
  }
  Json candidates = Json::array();
  for (long d : admissible_discriminants(level)) candidates.push_back({{"disc", d}, {"passes", sign_gate(s, d)}});
  const auto choice = select_algebra(s);
  return {{"level", level},
          {"signs", table},
          {"global_product", s.global_product()},
          {"candidates", candidates},
          {"selected_disc", choice.disc ? Json(*choice.disc) : Json(nullptr)},
          {"reason", choice.reason}};
}

Json factor_json(const EulerFactor& f) {
  return {{"p", f.p}, {"coeffs", vector_json(f.coeffs)}, {"shift", rat(f.shift)}, {"degree", f.degree()}};
}

Json cmd_euler(const JobConfig& c) {
  const auto records = load_newforms(c);
  std::vector<const NewformRecord*> fs;
  for (const auto& l : c.labels) fs.push_back(&find_newform(records, l));
  const long p = c.prime;
  if (!is_prime(p)) throw ArgumentError("--prime must be prime");
  auto need = [&](std::size_t n) {
    if (fs.size() != n) throw ArgumentError(c.kind + " factors need " + std::to_string(n) + " labels");
  };
  auto sat = [&](std::size_t i) { return SatakeParams::of(*fs[i], p); };
  EulerFactor f;
  Json checks = Json::object();
  if (c.kind == "gl2") {
    need(1);
    f = gl2_factor(sat(0), fs[0]->weight);
  } else if (c.kind == "sym2") {
    need(1);
    f = sym2_factor(sat(0), fs[0]->weight);
  } else if (c.kind == "tensor") {
    need(2);
    f = tensor_factor(sat(0), fs[0]->weight, sat(1), fs[1]->weight);
  } else if (c.kind == "triple") {
    need(3);
    f = triple_factor(*fs[0], *fs[1], *fs[2], p);
  } else if (c.kind == "spin" || c.kind == "standard") {
    need(2);
    if (fs[0]->level % p == 0 || fs[1]->level % p == 0) throw ArgumentError("spin factors need a good prime");
    if (fs[0]->weight < fs[1]->weight) throw ArgumentError("the first form must have the larger weight");
    f = c.kind == "spin" ? spin_factor(sat(0), fs[0]->weight, sat(1), fs[1]->weight)
                         : standard_factor(sat(0), fs[0]->weight, sat(1), fs[1]->weight);
    checks["spin_split"] = spin_split_check(sat(0), fs[0]->weight, sat(1), fs[1]->weight);
    checks["sym2_identities"] = sym2_identity_check(sat(0), fs[0]->weight, sat(1), fs[1]->weight);
    for (const auto& [name, ok] : checks.items())
      if (!ok.get<bool>()) throw InvariantFailure("Euler factor identity " + name + " fails at p = " + std::to_string(p));
  } else {
    throw ArgumentError("unknown factor kind '" + c.kind + "' (gl2, sym2, tensor, triple, spin, standard)");
  }
  Json out = factor_json(f);
  out["kind"] = c.kind;
  out["labels"] = c.labels;
  out["self_dual"] = is_self_dual(f);
  if (!checks.empty()) out["checks"] = checks;
  return out;
}

Json cmd_lvalue(const JobConfig& c) {
  const auto records = load_newforms(c);
  std::vector<const NewformRecord*> fs;
  for (const auto& l : c.labels) fs.push_back(&find_newform(records, l));
  long pm = c.lpmax;
  if (pm == 0) {
    pm = std::numeric_limits<long>::max();
    for (const auto* f : fs) pm = std::min(pm, f->max_prime());
  }
  std::function<LData()> data;
  if (c.kind == "gl2" && fs.size() == 1) {
    data = [&] { return gl2_data(*fs[0], pm); };
  } else if (c.kind == "sym2" && fs.size() == 1) {
    data = [&] { return sym2_data(*fs[0], pm); };
  } else if (c.kind == "triple" && fs.size() == 3) {
    data = [&] { return triple_data(*fs[0], *fs[1], *fs[2], pm); };
  } else {
    throw ArgumentError("lvalue kinds: gl2 or sym2 with one label, triple with three");
  }
  // The evaluator works in extended double precision.
  const double tol = std::max(c.tolerance, 1e-15);
  const double s = c.kind == "sym2" ? 1.0 : 0.5;
  char key[64];
  std::snprintf(key, sizeof key, "-p%ld-k%.10g-t%.3g", pm, c.kernel, tol);
  std::string name = "lvalue-" + c.kind;
  for (const auto* f : fs) name += "-" + f->label;
  Json v = central_value_json(data, {s, c.kernel, tol}, name + (s == 1.0 ? "-s1" : "") + key, Cache(c.cache_dir()));
  v["kind"] = c.kind;
  v["labels"] = c.labels;
  v["s"] = s;
  v["pmax"] = pm;
  return v;
}

Json cmd_verify(const JobConfig& c) {
  Json rows = Json::array();
  bool ok = true;
  for (const auto& ch : verify(c)) {
    ok = ok && ch.passed;
    rows.push_back(
        {{"module", ch.module}, {"check", ch.name}, {"passed", ch.passed}, {"kind", ch.kind}, {"detail", ch.detail}});
  }
  return {{"passed", ok}, {"checks", rows}};
}

}  // namespace

Json run_command(const JobConfig& config) {
  config.validate();
  const std::string& cmd = config.command;
  if (cmd == "classset") return cmd_classset(config);
  if (cmd == "brandt") return cmd_brandt(config);
  if (cmd == "eigen") return cmd_eigen(config);
  if (cmd == "theta") return cmd_theta(config);
  if (cmd == "yoshida") return cmd_yoshida(config);
  if (cmd == "restrict") return cmd_restrict(config);
  if (cmd == "diffop") return cmd_diffop(config);
  if (cmd == "gate") return cmd_gate(config);
  if (cmd == "period") return to_json(run_pipeline(config));
  if (cmd == "euler") return cmd_euler(config);
  if (cmd == "lvalue") return cmd_lvalue(config);
  if (cmd == "verify") return cmd_verify(config);
  throw ArgumentError("unknown command '" + cmd + "'");
}

}  // namespace quatperiod
