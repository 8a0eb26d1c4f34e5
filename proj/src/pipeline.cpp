#include "quatperiod/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "pipeline_internal.hpp"

#ifndef QUATPERIOD_DATA_DIR
#define QUATPERIOD_DATA_DIR "data"
#endif

namespace quatperiod {

namespace detail {

Json poly_json(const Poly& p) {
  Json out = Json::object();
  for (const auto& [m, c] : p.terms()) {
    std::string key;
    for (std::size_t i = 0; i < m.size(); ++i) key += (i ? "," : "") + std::to_string(m[i]);
    out[key] = rat(c);
  }
  return out;
}

Json vector_json(const QVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(rat(x));
  return out;
}

Json matrix_json(const QMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i)));
  return out;
}

std::shared_ptr<ClassSet> class_set(long disc, long n2) {
  return std::make_shared<ClassSet>(eichler_order(maximal_order(algebra_for_discriminant(disc)), n2));
}

Json eigen_json(const std::shared_ptr<ClassSet>& cs, int nu, long pmax, const Cache& cache) {
  const auto& order = cs->order();
  const std::string key = "eigen-d" + std::to_string(order.n1) + "-n" + std::to_string(order.n2) + "-nu" +
                          std::to_string(nu) + "-p" + std::to_string(pmax);
  if (auto hit = cache.get(key)) return *hit;
  Json out = Json::array();
  std::size_t index = 0;
  for (const auto& f : eigenforms(*cs, nu, pmax)) {
    Json e;
    e["index"] = index++;
    e["field"] = f.field;
    e["essential"] = f.essential;
    e["supported"] = f.supported;
    e["minimal_polynomial"] = vector_json(f.minimal_polynomial);
    Json values = Json::array();
    if (f.rational())
      values = vector_json(f.rational_values());
    else
      for (const auto& v : f.values) values.push_back(v.str());
    e["values"] = values;
    Json hecke = Json::object(), al = Json::object();
    for (const auto& [p, a] : f.hecke) hecke[std::to_string(p)] = a.str();
    for (const auto& [p, s] : f.atkin_lehner) al[std::to_string(p)] = s;
    e["hecke"] = hecke;
    e["atkin_lehner"] = al;
    out.push_back(e);
  }
  cache.put(key, out);
  return out;
}

QuatForm form_from_json(const std::shared_ptr<ClassSet>& cs, int nu, const Json& entry) {
  if (entry.at("field").get<long>() != 1) throw ArgumentError("eigenform has irrational values");
  QVector values;
  for (const auto& v : entry.at("values")) values.push_back(parse_rational(v.get<std::string>()));
  return QuatForm{cs, nu, values};
}

std::vector<NewformRecord> load_newforms(const JobConfig& config) { return ingest(config.newform_path()); }

Json central_value_json(const std::function<LData()>& data, const EvalOptions& options, const std::string& key,
                        const Cache& cache) {
  if (auto hit = cache.get(key)) return *hit;
  const LData d = data();
  const CentralValue v = central_value(d, options);
  Json out{{"value", static_cast<double>(v.value)},
           {"conductor", static_cast<double>(d.conductor)},
           {"sign", d.sign},
           {"completed", static_cast<double>(v.completed)},
           {"error", static_cast<double>(v.error)},
           {"terms", v.terms}};
  cache.put(key, out);
  // Round-trip so cold and warm runs report the same digits.
  return Json::parse(out.dump());
}

}  // namespace detail

using namespace detail;

void JobConfig::validate() const {
  if (level < 0 || (level > 0 && !is_squarefree(level))) throw ArgumentError("level must be a squarefree positive integer");
  if (disc < 0) throw ArgumentError("discriminant must be positive");
  if (disc > 0 && (!is_squarefree(disc) || prime_factors(disc).size() % 2 == 0))
    throw ArgumentError("discriminant must be squarefree with an odd number of prime factors");
  if (disc > 0 && level > 0 && level % disc != 0) throw ArgumentError("discriminant must divide the level");
  if (nu1 < 0 || nu2 < 0 || alpha1 < 0 || alpha2 < 0 || gamma < 0) throw ArgumentError("weights must be nonnegative");
  if (prec < 0) throw ArgumentError("precision must be nonnegative");
  if (bits < 1) throw ArgumentError("bit precision must be positive");
  if (pmax < 2) throw ArgumentError("pmax must be at least 2");
  if (lpmax < 0) throw ArgumentError("lpmax must be nonnegative");
  if (!(tolerance > 0)) throw ArgumentError("tolerance must be positive");
  if (!(kernel > 0)) throw ArgumentError("kernel must be positive");
}

Json JobConfig::conventions() const {
  return {{"version", kConventionVersion},
          {"period_weighting", weighting == PeriodWeighting::Units ? "units" : "plain"},
          {"fourier_off_diagonal", "B(x1,x2)/2"},
          {"hecke_normalization", "p^nu"},
          {"euler_factor", "det(1 - M X), analytic at s + shift"},
          {"l_center", "1/2"},
          {"smoothing_kernel", kernel},
          {"petersson_proxy", "L(Sym^2 f, 1)"},
          {"working_bits", std::min(bits, 64)}};
}

std::string JobConfig::newform_path() const {
  return newforms.empty() ? std::string(QUATPERIOD_DATA_DIR) + "/newforms.txt" : newforms;
}

std::string JobConfig::cache_dir() const {
  if (!cache.empty()) return cache;
  if (const char* env = std::getenv(kCacheEnv)) return env;
  return {};
}

Cache::Cache(std::string dir) : dir_(std::move(dir)) {
  if (enabled()) std::filesystem::create_directories(dir_);
}

std::filesystem::path Cache::file(const std::string& key) const {
  std::string name = key;
  for (char& c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  return std::filesystem::path(dir_) / (name + ".json");
}

std::optional<Json> Cache::get(const std::string& key) const {
  if (!enabled()) return std::nullopt;
  std::ifstream in(file(key));
  if (!in) return std::nullopt;
  const Json doc = Json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || doc.value("convention", "") != kConventionVersion ||
      doc.value("key", "") != key || !doc.contains("data"))
    return std::nullopt;
  return doc["data"];
}

void Cache::put(const std::string& key, const Json& data) const {
  if (!enabled()) return;
  const auto path = file(key);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    out << Json{{"convention", kConventionVersion}, {"key", key}, {"data", data}}.dump() << '\n';
    if (!out) throw ArgumentError("cannot write cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

struct Resolved {
  const NewformRecord* h1;
  const NewformRecord* h2;
  const NewformRecord* f1;
  const NewformRecord* f2;
};

Resolved resolve(const JobConfig& config, const std::vector<NewformRecord>& records) {
  const auto& l = config.labels;
  if (l.size() != 3 && l.size() != 4) throw ArgumentError("expected labels h1,h2,f1,f2 (or h,f1,f2)");
  const auto& h1 = find_newform(records, l[0]);
  const auto& h2 = find_newform(records, l.size() == 4 ? l[1] : l[0]);
  const auto& f1 = find_newform(records, l[l.size() - 2]);
  const auto& f2 = find_newform(records, l[l.size() - 1]);
  const long level = config.level > 0 ? config.level : h1.level;
  for (const auto* f : {&h1, &h2, &f1, &f2})
    if (f->level != level)
      throw ArgumentError("newform " + f->label + " has level " + std::to_string(f->level) + ", expected " +
                          std::to_string(level));
  if (!is_squarefree(level)) throw ArgumentError("level must be squarefree");
  if (h1.weight < h2.weight) throw ArgumentError("h1 must have weight at least that of h2");
  for (long p : prime_factors(level))
    if (h1.signs.at(p) != h2.signs.at(p)) throw ArgumentError("h1 and h2 must share their Atkin-Lehner signs");
  return {&h1, &h2, &f1, &f2};
}

SignData sign_table(const Resolved& r) {
  SignData s;
  s.level = r.h1->level;
  for (long p : prime_factors(s.level)) {
    s.shared[p] = r.h1->signs.at(p);
    s.first[p] = r.f1->signs.at(p);
    s.second[p] = r.f2->signs.at(p);
  }
  return s;
}

QuatForm match(const std::shared_ptr<ClassSet>& cs, int nu, const NewformRecord& f, long pmax, const Cache& cache) {
  const Json forms = eigen_json(cs, nu, pmax, cache);
  const long level = cs->order().level();
  std::vector<const Json*> hits;
  std::vector<std::string> rational;
  for (const auto& e : forms) {
    if (e["field"].get<long>() != 1 || !e["supported"].get<bool>()) continue;
    rational.push_back(std::to_string(e["index"].get<long>()));
    bool ok = true;
    for (const auto& [p, a] : e["hecke"].items()) {
      const long prime = std::stol(p);
      if (level % prime == 0 || prime > 50) continue;
      if (a.get<std::string>() != std::to_string(f.a(prime))) ok = false;
    }
    if (ok) hits.push_back(&e);
  }
  auto list = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s.empty() ? std::string("none") : s;
  };
  if (hits.size() != 1) {
    std::vector<std::string> ids;
    for (const auto* e : hits) ids.push_back(std::to_string((*e)["index"].get<long>()));
    throw InvariantFailure((hits.empty() ? "no eigenform matches " : "ambiguous eigenform match for ") + f.label +
                           " on disc " + std::to_string(cs->order().n1) + " level " + std::to_string(level) +
                           "; candidates: " + list(hits.empty() ? rational : ids));
  }
  return form_from_json(cs, nu, *hits.front());
}

// period_sums with the psi weights raised by the differential-operator order gamma.
PeriodReport shifted_period(const QuatForm& phi1, const QuatForm& phi2, const QuatForm& psi1, const QuatForm& psi2,
                            int alpha1, int alpha2, int gamma, bool weighted) {
  if (gamma == 0) return period_sums(phi1, phi2, psi1, psi2, alpha1, alpha2, {weighted, true});
  PeriodReport r;
  r.disc = phi1.classes->order().n1;
  r.n2 = phi1.classes->order().n2;
  r.nu1 = phi1.nu;
  r.nu2 = phi2.nu;
  r.alpha1 = alpha1;
  r.alpha2 = alpha2;
  r.weighted = weighted;
  r.k1 = alpha1 + r.nu1 - r.nu2 + 2 + gamma;
  r.k2 = alpha2 + r.nu1 - r.nu2 + 2 + gamma;
  if (!balanced(r.nu1, psi1.nu, psi2.nu) || !balanced(r.nu2, psi1.nu, psi2.nu)) {
    r.vanishing = Vanishing::Unbalanced;
    return r;
  }
  const auto s1 = involution_signs(phi1), s2 = involution_signs(phi2), t1 = involution_signs(psi1),
             t2 = involution_signs(psi2);
  for (const auto& [p, e] : s1) {
    const int prod1 = e * t1.at(p) * t2.at(p), prod2 = s2.at(p) * t1.at(p) * t2.at(p);
    if (prod1 == 0 || prod2 == 0) {
      r.gate_skipped = true;
    } else if (prod1 == -1 || prod2 == -1) {
      r.vanishing = Vanishing::SignGate;
      return r;
    }
  }
  r.s1 = trilinear_sum(phi1, psi1, psi2, weighted);
  r.s2 = trilinear_sum(phi2, psi1, psi2, weighted);
  r.product = r.s1 * r.s2;
  r.proxy = r.product * r.product;
  if (r.product == 0) r.vanishing = Vanishing::NumericZero;
  return r;
}

std::string number_key(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

long double sym2_norm(const NewformRecord& f, const JobConfig& config, const Cache& cache) {
  const long pm = std::min<long>(f.max_prime(), 20000);
  const EvalOptions opt{1.0, config.kernel, 1e-12};
  const Json v = central_value_json([&] { return sym2_data(f, pm); }, opt,
                                    "lvalue-sym2-" + f.label + "-s1-p" + std::to_string(pm) + "-k" +
                                        number_key(config.kernel),
                                    cache);
  return v["value"].get<double>();
}

}  // namespace

PipelineResult run_pipeline(const JobConfig& config) {
  config.validate();
  const auto records = load_newforms(config);
  const Resolved r = resolve(config, records);
  const Cache cache(config.cache_dir());

  PipelineResult out;
  out.labels = {r.h1->label, r.h2->label, r.f1->label, r.f2->label};
  out.signs = sign_table(r);
  PeriodReport& rep = out.report;
  rep.nu1 = (r.h1->weight - 2) / 2;
  rep.nu2 = (r.h2->weight - 2) / 2;
  rep.k1 = r.f1->weight;
  rep.k2 = r.f2->weight;
  const int shift = rep.nu1 - rep.nu2;
  rep.alpha1 = rep.k1 - 2 - shift - config.gamma;
  rep.alpha2 = rep.k2 - 2 - shift - config.gamma;
  rep.weighted = config.weighting == PeriodWeighting::Units;
  if (rep.alpha1 < 0 || rep.alpha2 < 0 || rep.alpha1 + rep.alpha2 != 2 * rep.nu2) {
    rep.vanishing = Vanishing::WeightGate;
    return out;
  }
  out.choice = select_algebra(out.signs);
  if (!out.choice.disc) {
    rep.vanishing = Vanishing::SignGate;
    return out;
  }
  const long n1 = *out.choice.disc, n2 = out.signs.level / n1;
  rep.disc = n1;
  rep.n2 = n2;
  const auto cs = class_set(n1, n2);
  const QuatForm phi1 = match(cs, rep.nu1, *r.h1, config.pmax, cache);
  const QuatForm phi2 = match(cs, rep.nu2, *r.h2, config.pmax, cache);
  const QuatForm psi1 = match(cs, (rep.k1 - 2) / 2, *r.f1, config.pmax, cache);
  const QuatForm psi2 = match(cs, (rep.k2 - 2) / 2, *r.f2, config.pmax, cache);
  rep = shifted_period(phi1, phi2, psi1, psi2, rep.alpha1, rep.alpha2, config.gamma, rep.weighted);

  if (!config.lvalues) return out;
  const bool weight_two = r.h1->weight == 2 && r.h2->weight == 2 && r.f1->weight == 2 && r.f2->weight == 2;
  if (!weight_two) {
    out.lvalue_note = "L-values are implemented for weight-2 quadruples only";
    return out;
  }
  const EvalOptions opt{0.5, config.kernel, config.tolerance};
  auto triple_for = [&](const NewformRecord* h) {
    long pm = config.lpmax;
    if (pm == 0) pm = std::min({h->max_prime(), r.f1->max_prime(), r.f2->max_prime()});
    return central_value_json([&] { return triple_data(*h, *r.f1, *r.f2, pm); }, opt,
                              "lvalue-triple-" + h->label + "-" + r.f1->label + "-" + r.f2->label + "-p" +
                                  std::to_string(pm) + "-k" + number_key(config.kernel) + "-t" +
                                  number_key(config.tolerance),
                              cache);
  };
  std::vector<const NewformRecord*> hs{r.h1};
  std::vector<const QuatForm*> phis{&phi1};
  if (r.h2 != r.h1) {
    hs.push_back(r.h2);
    phis.push_back(&phi2);
  }
  std::vector<std::future<Json>> jobs;
  for (const auto* h : hs) jobs.push_back(std::async(std::launch::async, triple_for, h));
  const long double nf = sym2_norm(*r.f1, config, cache) * sym2_norm(*r.f2, config, cache);
  const long double nq = inner_product(psi1, psi1).get_d() * inner_product(psi2, psi2).get_d();
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const Json v = jobs[i].get();
    RatioDiagnostic d;
    d.h = hs[i]->label;
    d.weighted_sum = trilinear_sum(*phis[i], psi1, psi2, true);
    d.triple.value = v["value"].get<double>();
    d.triple.completed = v["completed"].get<double>();
    d.triple.error = v["error"].get<double>();
    d.triple.terms = v["terms"].get<long>();
    const long double s = d.weighted_sum.get_d();
    const long double denom = d.triple.value * inner_product(*phis[i], *phis[i]).get_d() * nq;
    d.ratio = denom == 0 ? 0 : s * s * sym2_norm(*hs[i], config, cache) * nf / denom;
    out.ratios.push_back(d);
  }
  return out;
}

Json to_json(const PeriodReport& r) {
  return {{"disc", r.disc},
          {"n2", r.n2},
          {"weights",
           {{"nu1", r.nu1}, {"nu2", r.nu2}, {"alpha1", r.alpha1}, {"alpha2", r.alpha2}, {"k1", r.k1}, {"k2", r.k2}}},
          {"s1", rat(r.s1)},
          {"s2", rat(r.s2)},
          {"product", rat(r.product)},
          {"proxy", rat(r.proxy)},
          {"vanishing", to_string(r.vanishing)},
          {"weighted", r.weighted},
          {"gate_skipped", r.gate_skipped}};
}

Json to_json(const PipelineResult& r) {
  Json signs = Json::array();
  for (long p : prime_factors(r.signs.level))
    signs.push_back({{"p", p},
                     {"h", r.signs.shared.at(p)},
                     {"f1", r.signs.first.at(p)},
                     {"f2", r.signs.second.at(p)},
                     {"product", r.signs.product(p)}});
  Json out{{"labels", r.labels},
           {"level", r.signs.level},
           {"signs", signs},
           {"selected_disc", r.choice.disc ? Json(*r.choice.disc) : Json(nullptr)},
           {"selection", r.choice.reason},
           {"report", to_json(r.report)}};
  if (!r.ratios.empty()) {
    Json ratios = Json::array();
    for (const auto& d : r.ratios)
      ratios.push_back({{"h", d.h},
                        {"weighted_sum", rat(d.weighted_sum)},
                        {"central_value", static_cast<double>(d.triple.value)},
                        {"completed", static_cast<double>(d.triple.completed)},
                        {"error", static_cast<double>(d.triple.error)},
                        {"terms", d.triple.terms},
                        {"ratio", static_cast<double>(d.ratio)}});
    out["lvalues"] = ratios;
  }
  if (!r.lvalue_note.is_null()) out["lvalue_note"] = r.lvalue_note;
  return out;
}

Json envelope(const JobConfig& config, Json result) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return {{"schema", kSchemaVersion},
          {"command", config.command},
          {"conventions", config.conventions()},
          {"generated_at", stamp},
          {"result", std::move(result)}};
}

}  // namespace quatperiod
