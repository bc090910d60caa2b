#include "roughiso/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "roughiso/blocks.hpp"
#include "roughiso/errors.hpp"
#include "roughiso/oracle.hpp"
#include "roughiso/parallel.hpp"
#include "roughiso/processes.hpp"
#include "roughiso/verify.hpp"

namespace roughiso {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Report make_report(std::string name, const CommonOptions& opts) {
  Report r;
  r.experiment = std::move(name);
  r.seed = opts.seed;
  return r;
}

Json interval_json(const Interval& iv) { return Json::array({iv.lo, iv.hi}); }

Json chi_json(const ChiSquare& c) {
  return Json{{"statistic", c.statistic}, {"dof", c.dof}, {"p_value", c.p_value}, {"bins", c.bins}};
}

/// Later estimate may not fall significantly below the earlier one.
bool non_decreasing_3sigma(const Cell& earlier, const Cell& later) {
  const Interval a = clopper_pearson(earlier.successes, earlier.trials, kThreeSigma);
  const Interval b = clopper_pearson(later.successes, later.trials, kThreeSigma);
  return b.hi >= a.lo;
}

bool non_increasing_3sigma(const Cell& earlier, const Cell& later) {
  const Interval a = clopper_pearson(earlier.successes, earlier.trials, kThreeSigma);
  const Interval b = clopper_pearson(later.successes, later.trials, kThreeSigma);
  return b.lo <= a.hi;
}

double pow2(double e) { return std::exp2(e); }

}  // namespace

void Cell::finish() {
  estimate = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  if (trials) ci95 = clopper_pearson(successes, trials);
}

std::uint64_t Cell::failure_total() const {
  std::uint64_t t = 0;
  for (const auto& [k, v] : failures) t += v;
  return t;
}

std::string to_ndjson(const Report& report, bool include_wall_time) {
  std::ostringstream out;
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const Cell& c = report.cells[i];
    Json line{{"experiment", report.experiment},
              {"cell", i},
              {"params", c.params},
              {"trials", c.trials},
              {"successes", c.successes},
              {"estimate", c.estimate},
              {"ci95", interval_json(c.ci95)},
              {"failures", c.failures},
              {"extra", c.extra}};
    if (include_wall_time) line["wall_ms"] = c.wall_ms;
    out << line.dump() << '\n';
  }
  Json tail{{"experiment", report.experiment},
            {"seed", report.seed},
            {"summary", report.summary},
            {"pass", report.pass}};
  out << tail.dump() << '\n';
  return out.str();
}

std::string to_csv(const Report& report, bool include_wall_time) {
  std::ostringstream out;
  out << "experiment,cell,params,trials,successes,estimate,ci_low,ci_high" << (include_wall_time ? ",wall_ms" : "")
      << '\n';
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const Cell& c = report.cells[i];
    std::string params = c.params.dump();
    std::string quoted;
    for (char ch : params) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    out << report.experiment << ',' << i << ",\"" << quoted << "\"," << c.trials << ','
        << c.successes << ',' << Json(c.estimate).dump() << ',' << Json(c.ci95.lo).dump() << ','
        << Json(c.ci95.hi).dump();
    if (include_wall_time) out << ',' << Json(c.wall_ms).dump();
    out << '\n';
  }
  return out.str();
}

Seed trial_seed(std::uint64_t master, std::uint64_t index) {
  return Seed{hash64(master, index), {}};
}

// ---------------------------------------------------------------------------

Report run_success_curve(const SuccessCurveOptions& opts) {
  Report rep = make_report("success_curve", opts);
  for (std::uint64_t n : opts.n_list) {
    const auto start = Clock::now();
    Params p = default_params(n);
    if (opts.M) {
      p.M = p.F = p.R = *opts.M;
      p.overridden = true;
    }
    if (opts.K) {
      p.K = *opts.K;
      p.overridden = true;
    }
    struct Outcome {
      bool ok = false;
      std::string failure;
      std::size_t stages = 0;
    };
    std::vector<Outcome> slots(opts.trials);
    parallel_for(opts.trials, opts.jobs, [&](std::size_t t) {
      Outcome& o = slots[t];
      try {
        const BuildResult r = build_ri(p, trial_seed(opts.seed, t), opts.build);
        o.stages = r.stages.size();
        if (!r.success) {
          o.failure = std::string(to_string(r.failure)) + "@" + std::to_string(r.failed_stage);
          return;
        }
        const bool verified = verify_markov(r.T, p.markov()).ok() &&
                              verify_rooted(r.T, markov_to_increasing_constants(p.markov())).ok();
        o.ok = verified;
        if (!verified) o.failure = "VerifyFailed";
      } catch (const Error& e) {
        o.failure = std::string(to_string(e.kind()));
      }
    });
    Cell c;
    c.params = Json{{"n", n}, {"q", p.q}, {"M", p.M}, {"K", p.K}, {"small_n", p.small_n},
                    {"overridden", p.overridden}};
    c.trials = opts.trials;
    std::uint64_t stage_total = 0;
    for (const Outcome& o : slots) {
      stage_total += o.stages;
      if (o.ok) {
        ++c.successes;
      } else {
        ++c.failures[o.failure];
      }
    }
    c.finish();
    c.extra["mean_stages"] = opts.trials ? static_cast<double>(stage_total) / static_cast<double>(opts.trials) : 0.0;
    c.wall_ms = elapsed_ms(start);
    rep.cells.push_back(std::move(c));
  }
  Json checks = Json::array();
  for (std::size_t i = 1; i < rep.cells.size(); ++i) {
    const bool ok = non_decreasing_3sigma(rep.cells[i - 1], rep.cells[i]);
    checks.push_back({{"from", rep.cells[i - 1].params["n"]}, {"to", rep.cells[i].params["n"]}, {"ok", ok}});
    rep.pass = rep.pass && ok;
  }
  rep.summary["non_decreasing_3sigma"] = checks;
  return rep;
}

Report run_red_segment_tails(const RedTailOptions& opts) {
  Report rep = make_report("red_segment_tails", opts);
  const auto start = Clock::now();
  struct Draw {
    std::int64_t X = 0;
    std::int64_t sum_b = 0;
  };
  std::vector<Draw> slots(opts.trials);
  parallel_for(opts.trials, opts.jobs, [&](std::size_t t) {
    const PointSet red = sample_rooted_red(opts.M, opts.K, trial_seed(opts.seed, t).child("red"));
    Draw& d = slots[t];
    for (std::size_t i = 1; i < red.size(); ++i) {
      if (red.gap(i) > opts.M) {
        ++d.X;
        d.sum_b += red.gap(i);
      }
    }
  });
  const double log2n = opts.q * opts.q;
  std::uint64_t tail_x = 0, tail_sum = 0, min_x_ok = 0;
  std::map<std::int64_t, std::uint64_t> hist;
  for (const Draw& d : slots) {
    tail_x += static_cast<double>(d.X) > opts.q / 8;
    tail_sum += static_cast<double>(d.sum_b) >= 3 * log2n;
    min_x_ok += d.X >= 1;
    ++hist[d.X];
  }
  const double r = std::pow(1 - pow2(-static_cast<double>(opts.M)), static_cast<double>(opts.K));
  const ChiSquare chi = chi_square_discrete(
      hist, 1, [&](std::int64_t k) { return geometric_pmf(r, k); },
      [&](std::int64_t k) { return geometric_tail(r, k); });

  Cell c;
  c.params = Json{{"M", opts.M}, {"K", opts.K}, {"q", opts.q}};
  c.trials = opts.trials;
  c.successes = tail_x;
  if (opts.trials > tail_x) c.failures["X<=q/8"] = opts.trials - tail_x;
  c.finish();
  c.extra["tail_sum"] = {{"count", tail_sum},
                         {"estimate", opts.trials ? static_cast<double>(tail_sum) / static_cast<double>(opts.trials) : 0.0},
                         {"ci95", interval_json(clopper_pearson(tail_sum, std::max<std::uint64_t>(1, opts.trials)))}};
  c.extra["x_at_least_one"] = min_x_ok;
  c.extra["chi_square_X"] = chi_json(chi);
  c.extra["geometric_parameter"] = r;
  c.wall_ms = elapsed_ms(start);
  rep.cells.push_back(std::move(c));
  rep.pass = min_x_ok == opts.trials && chi.p_value > 0.01;
  rep.summary = Json{{"chi_square_p", chi.p_value}, {"x_at_least_one", min_x_ok == opts.trials}};
  return rep;
}

std::vector<std::int64_t> split_teeth(std::int64_t s, std::int64_t m) {
  if (m < 1 || s < m) throw Error(ErrorKind::PreconditionViolated, "need 1 <= m <= s");
  std::vector<std::int64_t> a(static_cast<std::size_t>(m), s / m);
  for (std::int64_t k = 0; k < s % m; ++k) ++a[static_cast<std::size_t>(k)];
  return a;
}

Report run_comb_tails(const CombTailOptions& opts) {
  Report rep = make_report("comb_tails", opts);
  const double a_max = *std::max_element(opts.a_values.begin(), opts.a_values.end());
  Json failing = Json::array();
  for (std::int64_t m : opts.m_values) {
    for (std::int64_t s : opts.s_values) {
      if (s < m) continue;
      const auto start = Clock::now();
      CombSpec spec{split_teeth(s, m), std::vector<std::int64_t>(static_cast<std::size_t>(m - 1), opts.d)};
      for (std::int64_t a : spec.a) {
        if (a >= opts.M) throw Error(ErrorKind::PreconditionViolated, "teeth must stay below M");
      }
      const std::int64_t span = (m - 1) * (1 + opts.d);
      const auto cap = static_cast<std::int64_t>(std::ceil(a_max * pow2(static_cast<double>(s))));
      std::vector<std::int64_t> Z(opts.trials);
      const std::string label = "comb-" + std::to_string(m) + "-" + std::to_string(s);
      parallel_for(opts.trials, opts.jobs, [&](std::size_t t) {
        Rng rng(trial_seed(opts.seed, t).child(label));
        std::vector<std::int64_t> G;
        std::size_t want = static_cast<std::size_t>(span + 64);
        for (;;) {
          while (G.size() < want) G.push_back(rng.geom_le(opts.M));
          const std::int64_t avail = static_cast<std::int64_t>(G.size()) - span;
          const std::int64_t limit = std::min(avail, cap + 1);
          const CombResult res = comb_search(G, spec, limit);
          if (res.position) {
            Z[t] = *res.position;
            return;
          }
          if (limit >= cap + 1) {
            Z[t] = cap + 1;
            return;
          }
          want *= 2;
        }
      });
      const double ms = elapsed_ms(start);
      for (double a : opts.a_values) {
        const auto N = static_cast<std::int64_t>(std::ceil(a * pow2(static_cast<double>(s))));
        Cell c;
        c.params = Json{{"m", m}, {"s", s}, {"a", a}, {"teeth", spec.a}, {"d", opts.d}, {"M", opts.M}, {"N", N}};
        c.trials = opts.trials;
        for (std::int64_t z : Z) c.successes += z > N;
        if (c.trials > c.successes) c.failures["Z<=N"] = c.trials - c.successes;
        c.finish();
        const double bound = std::exp(-a / static_cast<double>(m * m));
        const Interval iv3 = clopper_pearson(c.successes, c.trials, kThreeSigma);
        const bool ok = iv3.lo <= bound;
        c.extra["bound"] = bound;
        c.extra["ci_3sigma"] = interval_json(iv3);
        c.extra["within_bound"] = ok;
        if (m == 1) {
          const double Mm = static_cast<double>(opts.M);
          const double p = (pow2(-static_cast<double>(spec.a[0] - 1)) - pow2(-Mm)) / (1 - pow2(-Mm));
          c.extra["exact"] = std::exp(static_cast<double>(N) * std::log1p(-p));
        }
        c.wall_ms = ms;
        if (!ok) failing.push_back(c.params);
        rep.pass = rep.pass && ok;
        rep.cells.push_back(std::move(c));
      }
    }
  }
  rep.summary["cells_above_bound"] = failing;
  return rep;
}

Report run_e0_and_ew(const E0Options& opts) {
  Report rep = make_report("e0_and_ew", opts);
  {
    const auto start = Clock::now();
    std::vector<char> hit(opts.trials);
    parallel_for(opts.trials, opts.jobs, [&](std::size_t t) {
      Rng rng(trial_seed(opts.seed, t).child("e0"));
      bool ok = true;
      for (std::int64_t k = 0; k < opts.K; ++k) ok = (rng.geom_half() <= opts.M) && ok;
      hit[t] = ok;
    });
    Cell c;
    c.params = Json{{"event", "E0"}, {"M", opts.M}, {"K", opts.K}};
    c.trials = opts.trials;
    for (char h : hit) c.successes += h != 0;
    if (c.trials > c.successes) c.failures["not_E0"] = c.trials - c.successes;
    c.finish();
    const double exact = std::pow(1 - pow2(-static_cast<double>(opts.M)), static_cast<double>(opts.K));
    c.extra["exact"] = exact;
    c.extra["exact_in_ci95"] = c.ci95.contains(exact);
    rep.pass = c.ci95.contains(exact);
    c.wall_ms = elapsed_ms(start);
    rep.cells.push_back(std::move(c));
  }

  const auto start = Clock::now();
  const std::size_t nL = opts.L_values.size();
  std::vector<std::vector<char>> hits(opts.ew_trials, std::vector<char>(nL, 0));
  const Rational Mr(opts.ew_M);
  parallel_for(opts.ew_trials, opts.jobs, [&](std::size_t t) {
    Rng rng(trial_seed(opts.seed, t).child("ew"));
    std::vector<Coord> pts{0};
    while (pts.back() <= opts.ew_horizon) pts.push_back(pts.back() + rng.geom_half());
    const PointSet A = PointSet::from_points(std::move(pts));
    for (std::size_t k = 0; k < nL; ++k) {
      hits[t][k] = event_Ew(A, 0, Rational(opts.L_values[k]), Mr, opts.ew_horizon);
    }
  });
  const double ms = elapsed_ms(start);
  Json trend = Json::array();
  const std::size_t first_ew = rep.cells.size();
  for (std::size_t k = 0; k < nL; ++k) {
    Cell c;
    c.params = Json{{"event", "Ew"}, {"w", 0}, {"L", opts.L_values[k]}, {"M", opts.ew_M}, {"horizon", opts.ew_horizon}};
    c.trials = opts.ew_trials;
    for (const auto& h : hits) c.successes += h[k] != 0;
    if (c.trials > c.successes) c.failures["not_Ew"] = c.trials - c.successes;
    c.finish();
    c.wall_ms = ms;
    rep.cells.push_back(std::move(c));
    if (k > 0) {
      const bool ok = non_increasing_3sigma(rep.cells[first_ew + k - 1], rep.cells[first_ew + k]);
      trend.push_back({{"L", opts.L_values[k]}, {"ok", ok}});
      rep.pass = rep.pass && ok;
    }
  }
  rep.summary["e0_exact_in_ci95"] = rep.cells.front().extra["exact_in_ci95"];
  rep.summary["ew_non_increasing_3sigma"] = trend;
  return rep;
}

Report run_baseline_comparison(const BaselineOptions& opts) {
  Report rep = make_report("baseline_comparison", opts);
  std::vector<double> medians;
  for (std::uint64_t n : opts.n_list) {
    const auto start = Clock::now();
    struct Outcome {
      Rational M;
      Coord max_gap_A = 0;
      bool verified = false;
    };
    std::vector<Outcome> slots(opts.trials);
    parallel_for(opts.trials, opts.jobs, [&](std::size_t t) {
      const Seed s = trial_seed(opts.seed, t);
      const PointSet A = sample_bernoulli_rooted(n, Rational(1, 2), s.child("A"));
      const PointSet B = sample_bernoulli_rooted(n, Rational(1, 2), s.child("B"));
      const Baseline b = trivial_baseline(A, B, n);
      Outcome& o = slots[t];
      o.M = b.constants.M;
      for (std::size_t i = 1; i < n; ++i) o.max_gap_A = std::max(o.max_gap_A, A.gap(i));
      o.verified = verify_rooted(b.T, b.constants).ok();
    });
    std::vector<double> ms;
    Cell c;
    const Params p = default_params(n);
    c.params = Json{{"n", n}, {"construction_M", p.M}};
    c.trials = opts.trials;
    for (const Outcome& o : slots) {
      ms.push_back(o.M.to_double());
      if (o.verified) {
        ++c.successes;
      } else {
        ++c.failures["NotVerified"];
      }
    }
    c.finish();
    std::sort(ms.begin(), ms.end());
    auto quantile = [&](double f) {
      return ms.empty() ? 0.0 : ms[static_cast<std::size_t>(f * static_cast<double>(ms.size() - 1))];
    };
    c.extra["baseline_M"] = {{"q25", quantile(0.25)}, {"median", quantile(0.5)}, {"q75", quantile(0.75)},
                             {"max", ms.empty() ? 0.0 : ms.back()}};
    medians.push_back(quantile(0.5));
    c.wall_ms = elapsed_ms(start);
    rep.pass = rep.pass && c.successes == c.trials;
    rep.cells.push_back(std::move(c));
  }
  bool grows = true;
  for (std::size_t i = 1; i < medians.size(); ++i) grows = grows && medians[i] >= medians[i - 1];
  rep.summary["median_non_decreasing"] = grows;
  rep.summary["medians"] = medians;
  rep.pass = rep.pass && grows;
  return rep;
}

Report run_optimality_event(const OptimalityOptions& opts) {
  Report rep = make_report("optimality_event", opts);
  const std::int64_t q = opts.q;
  const std::int64_t prefix = opts.prefix_last.value_or(15 * q + 1);
  // B's first gap must exceed 30q + 1/2, i.e. be at least 30q + 1.
  const std::int64_t b_min = 30 * q + 1;

  {
    const auto start = Clock::now();
    std::vector<char> hit(opts.trials);
    parallel_for(opts.trials, opts.jobs, [&](std::size_t t) {
      Rng rng(trial_seed(opts.seed, t).child("optimality"));
      bool ok = true;
      for (std::int64_t k = 0; k < prefix && ok; ++k) ok = rng.geom_half() == 1;
      if (ok) ok = rng.geom_half() >= b_min;
      hit[t] = ok;
    });
    Cell c;
    c.params = Json{{"q", q}, {"prefix_last", prefix}, {"b_first_gap_min", b_min}, {"kind", "frequency"}};
    c.trials = opts.trials;
    for (char h : hit) c.successes += h != 0;
    if (c.trials > c.successes) c.failures["no_event"] = c.trials - c.successes;
    c.finish();
    const double log2_exact = -static_cast<double>(prefix + b_min - 1);
    const double log2_bound = -45.0 * static_cast<double>(q) - 3.0;
    c.extra["log2_exact_probability"] = log2_exact;
    c.extra["log2_bound"] = log2_bound;
    c.extra["exact_exceeds_bound"] = log2_exact >= log2_bound;
    c.wall_ms = elapsed_ms(start);
    rep.pass = log2_exact >= log2_bound;
    rep.cells.push_back(std::move(c));
  }

  const auto start = Clock::now();
  const RiConstants constants{Rational(30 * q), Rational(1, 2), Rational(10 * q)};
  SearchBudget budget;
  budget.max_domain_points = opts.window_A;
  budget.max_codomain_points = opts.window_B;
  enum class Outcome { None, Found, Budget };
  std::vector<Outcome> slots(opts.conditioned);
  parallel_for(opts.conditioned, opts.jobs, [&](std::size_t t) {
    Rng rng(trial_seed(opts.seed, t).child("conditioned"));
    std::vector<Coord> a;
    for (Coord x = 0; x <= prefix && a.size() < opts.window_A; ++x) a.push_back(x);
    while (a.size() < opts.window_A) a.push_back(a.back() + rng.geom_half());
    std::vector<Coord> b{0, b_min - 1 + rng.geom_half()};
    while (b.size() < opts.window_B) b.push_back(b.back() + rng.geom_half());
    b.resize(std::min(b.size(), opts.window_B));
    try {
      const auto w = exists_general_ri(PointSet::from_points(a), PointSet::from_points(b), constants, budget);
      slots[t] = w ? Outcome::Found : Outcome::None;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BudgetExceeded) throw;
      slots[t] = Outcome::Budget;
    }
  });
  Cell c;
  c.params = Json{{"q", q}, {"prefix_last", prefix}, {"window_A", opts.window_A}, {"window_B", opts.window_B},
                  {"constants", {constants.M.str(), constants.D.str(), constants.R.str()}}, {"kind", "certified"}};
  c.trials = opts.conditioned;
  for (Outcome v : slots) {
    if (v == Outcome::None) {
      ++c.successes;
    } else {
      ++c.failures[v == Outcome::Found ? "witness_found" : "BudgetExceeded"];
    }
  }
  c.finish();
  c.wall_ms = elapsed_ms(start);
  rep.pass = rep.pass && c.successes == c.trials;
  rep.summary = Json{{"certified", c.successes}, {"conditioned", c.trials},
                     {"exact_exceeds_bound", rep.cells.front().extra["exact_exceeds_bound"]}};
  rep.cells.push_back(std::move(c));
  return rep;
}

Report run_dominance(const DominanceOptions& opts) {
  Report rep = make_report("dominance", opts);
  const auto start = Clock::now();
  std::vector<std::pair<std::int64_t, std::int64_t>> slots(opts.trials);
  parallel_for(opts.trials, opts.jobs, [&](std::size_t t) {
    slots[t] = couple_dominance(opts.M, trial_seed(opts.seed, t).child("dominance"));
  });
  std::map<std::int64_t, std::uint64_t> hx, hy;
  Cell c;
  c.params = Json{{"M", opts.M}};
  c.trials = opts.trials;
  for (const auto& [x, y] : slots) {
    ++hx[x];
    ++hy[y];
    if (x <= y && x <= opts.M) {
      ++c.successes;
    } else {
      ++c.failures["order_violated"];
    }
  }
  c.finish();
  const double trunc = 1 - pow2(-static_cast<double>(opts.M));
  const ChiSquare cx = chi_square_discrete(
      hx, 1, [&](std::int64_t k) { return k <= opts.M ? geometric_pmf(0.5, k) / trunc : 0.0; },
      [&](std::int64_t k) {
        return k > opts.M ? 0.0 : (geometric_tail(0.5, k) - geometric_tail(0.5, opts.M + 1)) / trunc;
      });
  const ChiSquare cy = chi_square_discrete(
      hy, 1, [](std::int64_t k) { return geometric_pmf(0.5, k); },
      [](std::int64_t k) { return geometric_tail(0.5, k); });
  c.extra["chi_square_x"] = chi_json(cx);
  c.extra["chi_square_y"] = chi_json(cy);
  c.wall_ms = elapsed_ms(start);
  rep.pass = c.successes == c.trials && cx.p_value > 0.01 && cy.p_value > 0.01;
  rep.summary = Json{{"ordered", c.successes}, {"p_x", cx.p_value}, {"p_y", cy.p_value}};
  rep.cells.push_back(std::move(c));
  return rep;
}

Report run_block_laws(const BlockLawOptions& opts) {
  Report rep = make_report("block_laws", opts);
  const auto start = Clock::now();
  struct Draw {
    std::int64_t blue_gaps = 0;
    std::int64_t red_longs = 0;
    std::uint64_t rejected = 0;
  };
  std::vector<Draw> slots(opts.trials);
  const BlockParams bp{opts.M, opts.K};
  parallel_for(opts.trials, opts.jobs, [&](std::size_t t) {
    Rng rng(trial_seed(opts.seed, t).child("blocks"));
    Draw& d = slots[t];
    for (;;) {
      std::vector<Coord> pts{0};
      bool e0 = true;
      for (std::int64_t k = 0; k < opts.K; ++k) {
        const std::int64_t g = rng.geom_half();
        e0 = e0 && g <= opts.M;
        pts.push_back(pts.back() + g);
      }
      if (!e0) {
        ++d.rejected;
        continue;
      }
      // Grow until the first long gap is followed by a run of K short gaps.
      bool seen_long = false;
      std::int64_t run = 0;
      while (!(seen_long && run >= opts.K)) {
        const std::int64_t g = rng.geom_half();
        pts.push_back(pts.back() + g);
        if (g > opts.M) {
          seen_long = true;
          run = 0;
        } else {
          ++run;
        }
      }
      const BlockDecomposition dec = decompose(PointSet::from_points(std::move(pts)), bp);
      if (dec.blocks.empty()) throw Error(ErrorKind::PreconditionViolated, "first block did not close");
      const Block& b = dec.blocks.front();
      d.blue_gaps = static_cast<std::int64_t>(b.blue.size()) - 1;
      d.red_longs = count_long_gaps(b.red, opts.M);
      return;
    }
  });
  std::map<std::int64_t, std::uint64_t> hb, hx;
  std::uint64_t rejected = 0;
  for (const Draw& d : slots) {
    ++hb[d.blue_gaps];
    ++hx[d.red_longs];
    rejected += d.rejected;
  }
  const double p_long = pow2(-static_cast<double>(opts.M));
  const std::int64_t shift = opts.K - 1;
  const ChiSquare cb = chi_square_discrete(
      hb, opts.K, [&](std::int64_t v) { return geometric_pmf(p_long, v - shift); },
      [&](std::int64_t v) { return geometric_tail(p_long, v - shift); });
  const double r = std::pow(1 - p_long, static_cast<double>(opts.K));
  const ChiSquare cx = chi_square_discrete(
      hx, 1, [&](std::int64_t v) { return geometric_pmf(r, v); },
      [&](std::int64_t v) { return geometric_tail(r, v); });

  Cell c;
  c.params = Json{{"M", opts.M}, {"K", opts.K}};
  c.trials = opts.trials;
  c.successes = opts.trials;
  c.finish();
  c.extra["chi_square_blue"] = chi_json(cb);
  c.extra["chi_square_red_longs"] = chi_json(cx);
  c.extra["e0_rejections"] = rejected;
  c.wall_ms = elapsed_ms(start);
  rep.pass = cb.p_value > 0.01 && cx.p_value > 0.01;
  rep.summary = Json{{"p_blue", cb.p_value}, {"p_red_longs", cx.p_value}};
  rep.cells.push_back(std::move(c));
  return rep;
}

Report run_coupling_windows(const CouplingOptions& opts) {
  Report rep = make_report("coupling_windows", opts);
  const auto start = Clock::now();
  struct Outcome {
    std::string poisson;  // empty when verified
    std::string rescale;
  };
  std::vector<Outcome> slots(opts.trials);
  parallel_for(opts.trials, opts.jobs, [&](std::size_t t) {
    Outcome& o = slots[t];
    const Seed s = trial_seed(opts.seed, t).child("coupling");
    try {
      const PoissonCoupling pc = couple_poisson_percolation(opts.alpha, opts.p, opts.horizon, s);
      const Verdict v = verify_rough_isometry(pc.mapping, pc.constants);
      if (!v.ok()) o.poisson = std::string(to_string(v.violation->kind));
      const RescaleCoupling rc = rescale_coupling(opts.alpha, opts.gamma, pc.poisson);
      const Verdict w = verify_rough_isometry(rc.mapping, rc.constants);
      if (!w.ok()) o.rescale = std::string(to_string(w.violation->kind));
    } catch (const Error& e) {
      o.poisson = o.rescale = std::string(to_string(e.kind()));
    }
  });
  const double ms = elapsed_ms(start);
  for (const char* which : {"poisson_percolation", "rescale"}) {
    Cell c;
    c.params = Json{{"coupling", which}, {"alpha", opts.alpha.str()}, {"p", opts.p.str()},
                    {"horizon", opts.horizon.str()}, {"gamma", opts.gamma.str()}};
    c.trials = opts.trials;
    for (const Outcome& o : slots) {
      const std::string& f = std::string(which) == "rescale" ? o.rescale : o.poisson;
      if (f.empty()) {
        ++c.successes;
      } else {
        ++c.failures[f];
      }
    }
    c.finish();
    c.wall_ms = ms;
    rep.pass = rep.pass && c.successes == c.trials;
    rep.cells.push_back(std::move(c));
  }
  rep.summary = Json{{"all_verified", rep.pass}};
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

template <typename T>
void read(const Json& grid, const char* key, T& out) {
  if (grid.contains(key)) out = grid.at(key).get<T>();
}

void read_rational(const Json& grid, const char* key, Rational& out) {
  if (!grid.contains(key)) return;
  const Json& v = grid.at(key);
  out = v.is_string() ? Rational::parse(v.get<std::string>()) : Rational(v.get<std::int64_t>());
}

void read_common(const Json& spec, CommonOptions& o) {
  read(spec, "trials", o.trials);
  read(spec, "seed", o.seed);
  read(spec, "jobs", o.jobs);
  if (o.trials < 1) throw Error(ErrorKind::PreconditionViolated, "trials must be >= 1");
}

}  // namespace

Report run_experiment(const Json& spec) {
  const std::string name = spec.at("name").get<std::string>();
  const Json grid = spec.value("grid", Json::object());
  if (name == "success_curve") {
    SuccessCurveOptions o;
    read_common(spec, o);
    read(grid, "n_list", o.n_list);
    if (grid.contains("M")) o.M = grid.at("M").get<std::int64_t>();
    if (grid.contains("K")) o.K = grid.at("K").get<std::int64_t>();
    if (grid.contains("horizon")) o.build.horizon = grid.at("horizon").get<std::size_t>();
    return run_success_curve(o);
  }
  if (name == "red_segment_tails") {
    RedTailOptions o;
    read_common(spec, o);
    read(grid, "M", o.M);
    read(grid, "K", o.K);
    read(grid, "q", o.q);
    return run_red_segment_tails(o);
  }
  if (name == "comb_tails") {
    CombTailOptions o;
    read_common(spec, o);
    read(grid, "M", o.M);
    read(grid, "m_values", o.m_values);
    read(grid, "s_values", o.s_values);
    read(grid, "a_values", o.a_values);
    read(grid, "d", o.d);
    return run_comb_tails(o);
  }
  if (name == "e0_and_ew") {
    E0Options o;
    read_common(spec, o);
    read(grid, "M", o.M);
    read(grid, "K", o.K);
    read(grid, "ew_M", o.ew_M);
    read(grid, "L_values", o.L_values);
    read(grid, "ew_horizon", o.ew_horizon);
    read(grid, "ew_trials", o.ew_trials);
    return run_e0_and_ew(o);
  }
  if (name == "baseline_comparison") {
    BaselineOptions o;
    read_common(spec, o);
    read(grid, "n_list", o.n_list);
    return run_baseline_comparison(o);
  }
  if (name == "optimality_event") {
    OptimalityOptions o;
    read_common(spec, o);
    read(grid, "q", o.q);
    read(grid, "conditioned", o.conditioned);
    if (grid.contains("prefix_last")) o.prefix_last = grid.at("prefix_last").get<std::int64_t>();
    read(grid, "window_A", o.window_A);
    read(grid, "window_B", o.window_B);
    return run_optimality_event(o);
  }
  if (name == "dominance") {
    DominanceOptions o;
    read_common(spec, o);
    read(grid, "M", o.M);
    return run_dominance(o);
  }
  if (name == "block_laws") {
    BlockLawOptions o;
    read_common(spec, o);
    read(grid, "M", o.M);
    read(grid, "K", o.K);
    return run_block_laws(o);
  }
  if (name == "coupling_windows") {
    CouplingOptions o;
    read_common(spec, o);
    read_rational(grid, "alpha", o.alpha);
    read_rational(grid, "p", o.p);
    read_rational(grid, "horizon", o.horizon);
    read_rational(grid, "gamma", o.gamma);
    return run_coupling_windows(o);
  }
  throw Error(ErrorKind::PreconditionViolated, "unknown experiment: " + name);
}

}  // namespace roughiso
