#pragma once

// Exhaustive and seeded verification campaigns. Every check becomes one
// Record handed to a sink in a fixed order.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fqmenon/chars.hpp"
#include "fqmenon/errors.hpp"
#include "fqmenon/identity.hpp"
#include "fqmenon/multfunc.hpp"
#include "fqmenon/poly.hpp"
#include "fqmenon/report.hpp"

namespace fqmenon {

// Uniform draws from std::mt19937_64 by rejection sampling, so a seed gives
// the same sequence with every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    require(n > 0, "cannot draw from an empty range");
    // 2^64 mod n; draws below it would bias the residue.
    const std::uint64_t threshold = (0 - n) % n;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x < threshold);
    return x % n;
  }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[below(items.size())];
  }

 private:
  std::mt19937_64 gen_;
};

inline const std::vector<std::string>& builtin_function_names() {
  static const std::vector<std::string> names{"one", "abs", "abs_s:2", "tau",
                                              "mu",  "phi", "indicator_unit"};
  return names;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lemma21", "lemma22", "lemma23",
                                              "lemma24", "lemma41", "lemma42",
                                              "lemma43", "theorem1", "theorem2"};
  return names;
}

struct RunConfig {
  FieldPtr field = Field::make(2, 1);
  std::uint64_t seed = 1;
  Budget budget = Budget::from_env();
  double tol = kDefaultTolerance;
  int maxdeg = 2;
  int k = 3;
  std::optional<Poly> h;
  std::optional<int> l;
  std::optional<int> s;
  std::optional<std::size_t> chi;
  std::optional<std::vector<Poly>> lambdas;
  std::optional<Poly> shift;  // S
  std::optional<std::string> func;  // F
  int samples = 1;              // draws per theorem2 grid cell
  int lemma_samples = 200;      // seeded instances per l for lemma41/42
  int max_moduli = 32;          // per degree in theorem2 before sampling
  bool timing = true;
  EvalMode mode = EvalMode::kAuto;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["field"] = field->spec().to_string();
    j["seed"] = seed;
    j["budget"] = budget.limit();
    j["tol"] = tol;
    j["maxdeg"] = maxdeg;
    j["k"] = k;
    if (h) j["H"] = to_string(*h);
    if (l) j["l"] = *l;
    if (s) j["s"] = *s;
    if (chi) j["chi"] = *chi;
    if (lambdas) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& w : *lambdas) arr.push_back(to_string(w));
      j["lambdas"] = arr;
    }
    if (shift) j["S"] = to_string(*shift);
    if (func) j["F"] = *func;
    j["samples"] = samples;
    j["lemma_samples"] = lemma_samples;
    j["mode"] = to_string(mode);
    return j;
  }
};

namespace detail {

// Assigns ids and timings and forwards records to the sink.
class Emitter {
 public:
  Emitter(std::string suite, const RunConfig& cfg, const RecordSink& sink)
      : suite_(std::move(suite)), cfg_(cfg), sink_(sink) {}

  // Runs `check`, which fills lhs/rhs/pass/etc., converting budget and
  // precondition failures into records.
  template <typename Check>
  void run(const std::string& instance, Check&& check) {
    Record r;
    r.suite = suite_;
    r.id = next_id_++;
    r.instance = instance;
    const auto start = std::chrono::steady_clock::now();
    try {
      check(r);
    } catch (const BudgetExceeded& e) {
      r.status = RecordStatus::kBudgetExceeded;
      r.error = e.what();
      r.pass = false;
    } catch (const PreconditionError& e) {
      r.status = RecordStatus::kPreconditionError;
      r.error = e.what();
      r.pass = false;
    }
    if (cfg_.timing) {
      r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    }
    sink_(std::move(r));
  }

  const RunConfig& config() const { return cfg_; }

 private:
  std::string suite_;
  const RunConfig& cfg_;
  const RecordSink& sink_;
  std::uint64_t next_id_ = 0;
};

inline void set_integers(Record& r, const BigInt& lhs, const BigInt& rhs) {
  r.lhs = lhs.convert_to<double>();
  r.rhs = rhs.convert_to<double>();
  r.abs_diff = std::abs(r.lhs - r.rhs);
  r.lhs_exact = lhs.str();
  r.rhs_exact = rhs.str();
  r.mode = "exact";
  r.pass = lhs == rhs;
}

inline void set_cyclotomic(Record& r, const CyclotomicSum& lhs, const CyclotomicSum& rhs) {
  r.lhs = lhs.to_complex();
  r.rhs = rhs.to_complex();
  r.abs_diff = std::abs(r.lhs - r.rhs);
  r.lhs_exact = lhs.to_string();
  r.rhs_exact = rhs.to_string();
  r.mode = "exact";
  r.pass = exactly_equal(lhs, rhs);
}

inline std::string join_fields(std::initializer_list<std::pair<const char*, std::string>> kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    if (!out.empty()) out += ';';
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

// The moduli H a suite iterates over: --H when given, else all monic
// polynomials of degree 1..maxdeg in canonical order.
inline std::vector<Poly> moduli(const RunConfig& cfg) {
  if (cfg.h) return {cfg.h->monic()};
  return monic_polys_up_to(cfg.field, cfg.maxdeg);
}

inline std::vector<int> l_values(const RunConfig& cfg, std::vector<int> defaults) {
  if (cfg.l) return {*cfg.l};
  return defaults;
}

}  // namespace detail

// Units in a progression: brute count vs φ(H)/φ(D).
inline void run_lemma21(const RunConfig& cfg, const RecordSink& sink) {
  detail::Emitter emit("lemma21", cfg, sink);
  for (const auto& h : detail::moduli(cfg)) {
    const auto ring = ResidueRing::make(h);
    const auto& lat = ring->lattice();
    const BigInt phi_h = euler_phi(h);
    for (std::size_t d = 0; d < lat.size(); ++d) {
      const BigInt closed = phi_h / euler_phi(lat.divisor(d));
      for (auto q : ring->units()) {
        emit.run(detail::join_fields({{"H", to_string(h)},
                                      {"D", to_string(lat.divisor(d))},
                                      {"Q", to_string(ring->poly(q))}}),
                 [&](Record& r) {
                   r.terms = ring->units().size();
                   detail::set_integers(r, count_coprime_progression_brute(*ring, d, q), closed);
                 });
      }
    }
  }
}

// The global count g(H, D, M, Q, S) against the product of local counts.
inline void run_lemma22(const RunConfig& cfg, const RecordSink& sink) {
  detail::Emitter emit("lemma22", cfg, sink);
  for (const auto& h : detail::moduli(cfg)) {
    const auto ring = ResidueRing::make(h);
    const auto& lat = ring->lattice();
    const LocalRings local(*ring);
    for (std::size_t d = 0; d < lat.size(); ++d) {
      for (std::size_t m = 0; m < lat.size(); ++m) {
        for (std::uint32_t q = 0; q < ring->size(); ++q) {
          for (std::uint32_t s = 0; s < ring->size(); ++s) {
            emit.run(detail::join_fields({{"H", to_string(h)},
                                          {"D", to_string(lat.divisor(d))},
                                          {"M", to_string(lat.divisor(m))},
                                          {"Q", to_string(ring->poly(q))},
                                          {"S", to_string(ring->poly(s))}}),
                     [&](Record& r) {
                       r.terms = ring->units().size();
                       detail::set_integers(r, g_count_brute(*ring, d, m, q, s),
                                            local.g_count(d, m, q, s));
                     });
          }
        }
      }
    }
  }
}

// g(H, D, M, Q, S) brute vs the closed form, including incompatible cases.
inline void run_lemma23(const RunConfig& cfg, const RecordSink& sink) {
  detail::Emitter emit("lemma23", cfg, sink);
  for (const auto& h : detail::moduli(cfg)) {
    const auto ring = ResidueRing::make(h);
    const auto& lat = ring->lattice();
    for (std::size_t d = 0; d < lat.size(); ++d) {
      for (std::size_t m = 0; m < lat.size(); ++m) {
        for (std::uint32_t q = 0; q < ring->size(); ++q) {
          for (std::uint32_t s = 0; s < ring->size(); ++s) {
            emit.run(detail::join_fields({{"H", to_string(h)},
                                          {"D", to_string(lat.divisor(d))},
                                          {"M", to_string(lat.divisor(m))},
                                          {"Q", to_string(ring->poly(q))},
                                          {"S", to_string(ring->poly(s))}}),
                     [&](Record& r) {
                       r.terms = ring->units().size();
                       detail::set_integers(r, g_count_brute(*ring, d, m, q, s),
                                            g_count_closed(*ring, d, m, q, s));
                     });
          }
        }
      }
    }
  }
}

// Progression sums of the primitive characters lifted from every χ mod H.
inline void run_lemma24(const RunConfig& cfg, const RecordSink& sink) {
  detail::Emitter emit("lemma24", cfg, sink);
  for (const auto& h : detail::moduli(cfg)) {
    const auto chars = characters(h);
    for (std::size_t ci = 0; ci < chars.size(); ++ci) {
      const auto psi = primitive_lift(chars[ci]);
      const auto& ring = psi.group().ring();
      const auto& lat = ring.lattice();
      for (std::size_t q = 0; q < lat.size(); ++q) {
        for (auto s : ring.units()) {
          const Poly s_poly = ring.poly(s);
          emit.run(detail::join_fields({{"H", to_string(h)},
                                        {"chi", std::to_string(ci)},
                                        {"D", to_string(psi.modulus())},
                                        {"Q", to_string(lat.divisor(q))},
                                        {"S", to_string(s_poly)}}),
                   [&](Record& r) {
                     r.terms = ring.units().size();
                     detail::set_cyclotomic(
                         r, primitive_progression_sum_brute(psi, lat.divisor(q), s_poly),
                         primitive_progression_sum_closed(psi, lat.divisor(q), s_poly));
                   });
        }
      }
    }
  }
}

namespace detail {

inline std::vector<Poly> coprime_divisors(const std::vector<Poly>& divs, const Poly& m) {
  std::vector<Poly> out;
  for (const auto& d : divs) {
    if (gcd(d, m).is_one()) out.push_back(d);
  }
  return out;
}

}  // namespace detail

// Seeded N_l recursion checks.
inline void run_lemma41(const RunConfig& cfg, const RecordSink& sink) {
  detail::Emitter emit("lemma41", cfg, sink);
  Rng rng(cfg.seed);
  const auto hs = detail::moduli(cfg);
  for (int l : detail::l_values(cfg, {2, 3})) {
    for (int i = 0; i < cfg.lemma_samples; ++i) {
      const Poly& h = rng.pick(hs);
      const auto divs = divisors(h);
      const Poly& m = rng.pick(divs);
      const Poly n = rng.pick(detail::coprime_divisors(divs, m));
      const Poly& d = rng.pick(divs);
      const Poly s = cfg.shift ? *cfg.shift : rng.pick(units(h));
      const auto all = residues(h);
      const Poly& u = rng.pick(all);
      emit.run(detail::join_fields({{"H", to_string(h)},
                                    {"M", to_string(m)},
                                    {"N", to_string(n)},
                                    {"D", to_string(d)},
                                    {"S", to_string(s)},
                                    {"U", to_string(u)},
                                    {"l", std::to_string(l)}}),
               [&](Record& r) {
                 r.terms = saturating_pow(h.field()->order(),
                                          static_cast<std::uint64_t>(l) * h.degree());
                 const auto check = n_l_recursion_check(h, m, n, d, s, u, l, cfg.budget);
                 r.lhs = check.lhs.convert_to<double>();
                 r.rhs = check.rhs.convert_to<double>();
                 r.abs_diff = std::abs(r.lhs - r.rhs);
                 r.lhs_exact = check.lhs.str();
                 r.rhs_exact = check.rhs.str();
                 r.mode = "exact";
                 r.pass = check.holds;
               });
    }
  }
}

// Seeded character-weighted N_l sums against their closed form.
inline void run_lemma42(const RunConfig& cfg, const RecordSink& sink) {
  detail::Emitter emit("lemma42", cfg, sink);
  Rng rng(cfg.seed);
  const auto hs = detail::moduli(cfg);
  for (int l : detail::l_values(cfg, {2, 3})) {
    for (int i = 0; i < cfg.lemma_samples; ++i) {
      const Poly& h = rng.pick(hs);
      const auto chars = characters(h);
      const std::size_t ci = cfg.chi ? *cfg.chi : rng.below(chars.size());
      const auto divs = divisors(h);
      const Poly& m = rng.pick(divs);
      const Poly n = rng.pick(detail::coprime_divisors(divs, m));
      const Poly s = cfg.shift ? *cfg.shift : rng.pick(units(h));
      emit.run(detail::join_fields({{"H", to_string(h)},
                                    {"chi", std::to_string(ci)},
                                    {"M", to_string(m)},
                                    {"N", to_string(n)},
                                    {"S", to_string(s)},
                                    {"l", std::to_string(l)}}),
               [&](Record& r) {
                 r.terms = saturating_pow(h.field()->order(),
                                          static_cast<std::uint64_t>(l) * h.degree());
                 const auto& chi = select_character(chars, ci);
                 const auto check = weighted_sum_check(chi, m, n, s, l, cfg.budget);
                 r.lhs = check.brute.to_complex();
                 r.rhs = check.closed.to_complex();
                 r.abs_diff = check.abs_diff;
                 r.lhs_exact = check.brute.to_string();
                 r.rhs_exact = check.closed.to_string();
                 r.mode = "exact";
                 r.pass = check.holds;
               });
    }
  }
}

// Additive sums over multiples of M, for |H| <= 64.
inline void run_lemma43(const RunConfig& cfg, const RecordSink& sink) {
  detail::Emitter emit("lemma43", cfg, sink);
  for (const auto& h : detail::moduli(cfg)) {
    if (abs_value(h) > 64) continue;
    const auto divs = divisors(h);
    for (const auto& w : residues(h)) {
      const auto lambda = additive_character(h, w);
      for (const auto& m : divs) {
        emit.run(detail::join_fields({{"H", to_string(h)}, {"M", to_string(m)}, {"W", to_string(w)}}),
                 [&](Record& r) {
                   r.terms = static_cast<std::uint64_t>(abs_value(h));
                   CyclotomicSum closed(1);
                   closed.add(std::uint64_t{0}, additive_sum_over_multiples_closed(lambda, m));
                   detail::set_cyclotomic(r, additive_sum_over_multiples_brute(lambda, m), closed);
                 });
      }
    }
  }
}

// φ_k brute vs closed form, the two-argument variant, and its recursion.
inline void run_theorem1(const RunConfig& cfg, const RecordSink& sink) {
  detail::Emitter emit("theorem1", cfg, sink);
  for (const auto& h : detail::moduli(cfg)) {
    const auto divs = divisors(h);
    for (int k = 1; k <= cfg.k; ++k) {
      const std::uint64_t terms =
          saturating_pow(h.field()->order(), static_cast<std::uint64_t>(k) * h.degree());
      emit.run(detail::join_fields({{"check", "phi_k"}, {"H", to_string(h)}, {"k", std::to_string(k)}}),
               [&](Record& r) {
                 r.terms = terms;
                 detail::set_integers(r, phi_k_brute(h, k, cfg.budget), phi_k_formula(h, k));
               });
      for (const auto& m : divs) {
        emit.run(detail::join_fields({{"check", "phi_k_two_arg"},
                                      {"H", to_string(h)},
                                      {"M", to_string(m)},
                                      {"k", std::to_string(k)}}),
                 [&](Record& r) {
                   r.terms = terms;
                   detail::set_integers(r, phi_k_two_arg_brute(h, m, k, cfg.budget),
                                        phi_k_two_arg_formula(h, m, k));
                 });
        if (k < 2) continue;
        emit.run(detail::join_fields({{"check", "phi_k_recursion"},
                                      {"H", to_string(h)},
                                      {"M", to_string(m)},
                                      {"k", std::to_string(k)}}),
                 [&](Record& r) {
                   r.terms = terms;
                   const BigInt direct = phi_k_two_arg_brute(h, m, k, cfg.budget);
                   const Rational recursion = phi_k_two_arg_recursion(h, m, k, cfg.budget);
                   r.lhs = direct.convert_to<double>();
                   r.rhs = recursion.convert_to<double>();
                   r.abs_diff = std::abs(r.lhs - r.rhs);
                   r.lhs_exact = direct.str();
                   r.rhs_exact = recursion.str();
                   r.mode = "exact";
                   r.pass = Rational(direct) == recursion;
                 });
      }
    }
  }
}

inline Record record_from_report(const VerificationReport& v) {
  Record r;
  r.instance = v.description;
  r.lhs = v.lhs;
  r.rhs = v.rhs;
  r.abs_diff = v.abs_diff;
  r.pass = v.pass;
  r.terms = saturate(v.terms);
  r.mode = v.mode;
  r.lhs_exact = v.lhs_exact.to_string();
  r.rhs_exact = v.rhs_exact.to_string();
  return r;
}

// Identity grid over H, χ, l, s with seeded W_i, S and F.
inline void run_theorem2(const RunConfig& cfg, const RecordSink& sink) {
  detail::Emitter emit("theorem2", cfg, sink);
  Rng rng(cfg.seed);
  std::vector<Poly> hs;
  if (cfg.h) {
    hs.push_back(cfg.h->monic());
  } else {
    for (int d = 1; d <= cfg.maxdeg; ++d) {
      auto polys = monic_polys(cfg.field, d);
      if (polys.size() > static_cast<std::size_t>(cfg.max_moduli)) {
        std::vector<Poly> chosen;
        while (chosen.size() < static_cast<std::size_t>(cfg.max_moduli) / 2) {
          const std::size_t i = rng.below(polys.size());
          chosen.push_back(polys[i]);
          polys.erase(polys.begin() + static_cast<std::ptrdiff_t>(i));
        }
        std::sort(chosen.begin(), chosen.end(), canonical_less);
        polys = std::move(chosen);
      }
      hs.insert(hs.end(), polys.begin(), polys.end());
    }
  }
  const std::vector<int> ls = detail::l_values(cfg, {1, 2, 3});
  const std::vector<int> ss = cfg.s ? std::vector<int>{*cfg.s} : std::vector<int>{0, 1, 2};
  for (const auto& h : hs) {
    const auto chars = characters(h);
    const auto all = residues(h);
    const auto us = units(h);
    std::vector<std::size_t> indices;
    if (cfg.chi) {
      indices.push_back(*cfg.chi);
    } else {
      for (std::size_t i = 0; i < chars.size(); ++i) indices.push_back(i);
    }
    for (std::size_t ci : indices) {
      for (int l : ls) {
        for (int s : ss) {
          for (int sample = 0; sample < cfg.samples; ++sample) {
            TothInstance inst(cfg.field, h, Poly::one(cfg.field));
            inst.l = l;
            inst.s = s;
            inst.chi_index = ci;
            inst.mode = cfg.mode;
            if (cfg.lambdas) {
              inst.lambdas = *cfg.lambdas;
            } else {
              for (int i = 0; i < s; ++i) inst.lambdas.push_back(rng.pick(all));
            }
            inst.S = cfg.shift ? *cfg.shift : rng.pick(us);
            inst.F = cfg.func ? *cfg.func : rng.pick(builtin_function_names());
            emit.run(inst.describe(), [&](Record& r) {
              r.terms = saturate(estimate_cost(inst));
              const auto report = verify_toth(inst, select_character(chars, ci), cfg.tol, cfg.budget);
              Record filled = record_from_report(report);
              r.lhs = filled.lhs;
              r.rhs = filled.rhs;
              r.abs_diff = filled.abs_diff;
              r.pass = filled.pass;
              r.mode = filled.mode;
              r.lhs_exact = filled.lhs_exact;
              r.rhs_exact = filled.rhs_exact;
            });
          }
        }
      }
    }
  }
}

inline void run_suite(const std::string& name, const RunConfig& cfg, const RecordSink& sink) {
  if (name == "lemma21") return run_lemma21(cfg, sink);
  if (name == "lemma22") return run_lemma22(cfg, sink);
  if (name == "lemma23") return run_lemma23(cfg, sink);
  if (name == "lemma24") return run_lemma24(cfg, sink);
  if (name == "lemma41") return run_lemma41(cfg, sink);
  if (name == "lemma42") return run_lemma42(cfg, sink);
  if (name == "lemma43") return run_lemma43(cfg, sink);
  if (name == "theorem1") return run_theorem1(cfg, sink);
  if (name == "theorem2") return run_theorem2(cfg, sink);
  if (name == "all") {
    for (const auto& s : suite_names()) run_suite(s, cfg, sink);
    return;
  }
  throw ParseError("unknown suite '" + name + "'");
}

}  // namespace fqmenon
