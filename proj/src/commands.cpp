#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "vekua/bers.hpp"
#include "vekua/quatcalc.hpp"
#include "vekua/schrod.hpp"

namespace vekua::cli {

namespace {

Measurement from_sweep(const Sweep& s) {
  return {s.max, s.samples, "worst at " + format_point<2>(s.worst)};
}

Point3 lift(const Point2& p, double x3) { return {p[1], p[0], x3}; }

/// Largest relative deviation of f/g from its value at the first sample.
Sweep proportionality(const RealField2& f, const RealField2& g, const std::vector<Point2>& samples) {
  const double ref = f(samples.front()) / g(samples.front());
  return sweep(samples, [&](const Point2& p) { return std::abs(f(p) / g(p) / ref - 1.0); });
}

double max_diff(const ComplexField& a, const ComplexField& b, const Point2& p) {
  const Complex x = a(p), y = b(p);
  return std::abs(x - y) / (1.0 + std::abs(y));
}

void pair_checks(Report& report, const std::string& prefix, const GeneratingPair& pair,
                 const std::vector<Point2>& samples, const Tolerances& tol) {
  run_check(report, prefix + ".derivative_of_F_G", tol.identity, [&] {
    const auto c = coefficients(pair);
    return from_sweep(sweep(samples, [&](const Point2& p) {
      return std::max(std::abs(fg_derivative(pair.F(), c, p)), std::abs(fg_derivative(pair.G(), c, p)));
    }));
  });
  run_check(report, prefix + ".adjoint_involution", tol.identity, [&] {
    const auto [Fs, Gs] = adjoint_formula(pair);
    const auto [Fss, Gss] = adjoint_formula(GeneratingPair(Fs, Gs, samples));
    return from_sweep(sweep(samples, [&](const Point2& p) {
      return std::max(max_diff(Fss, pair.F(), p), max_diff(Gss, pair.G(), p));
    }));
  });
  run_check(report, prefix + ".adjoint_coefficients", tol.identity, [&] {
    const auto c = coefficients(pair);
    const auto [Fs, Gs] = adjoint_formula(pair);
    const auto cs = coefficients(GeneratingPair(Fs, Gs, samples));
    return from_sweep(sweep(samples, [&](const Point2& p) {
      EvalContext<2> ctx(p);
      const Complex a = c.a.jet(ctx).v, b = c.b.jet(ctx).v, A = c.A.jet(ctx).v, B = c.B.jet(ctx).v;
      const double scale = 1.0 + std::abs(a) + std::abs(b) + std::abs(A) + std::abs(B);
      return std::max({std::abs(cs.a(p) + a), std::abs(cs.A(p) + A), std::abs(cs.b(p) + std::conj(B)),
                       std::abs(cs.B(p) + std::conj(b))}) /
             scale;
    }));
  });
}

std::optional<GeneratingPair> checked_pair(Report& report, const std::string& name,
                                           const std::function<GeneratingPair()>& make) {
  std::optional<GeneratingPair> pair;
  run_check(report, name + ".validity", 0.0, [&] {
    pair.emplace(make());
    return Measurement{0.0, pair->samples().size(), {}};
  });
  return pair;
}

void rho_checks(Report& report, const RunConfig& cfg) {
  const auto& rs = cfg.rho->structure;
  const auto samples = cfg.problem.samples();
  run_check(report, "rho.condition", cfg.tol.identity, [&] {
    const RhoFields rf = rho_fields(rs, cfg.problem.box);
    return from_sweep(sweep(samples, [&](const Point2& p) {
      const auto j = rf.rho.jet(p);
      const double g2 = j.d[0] * j.d[0] + j.d[1] * j.d[1];
      if (!(g2 > 0)) throw DegeneratePair("grad rho vanishes at " + format_point<2>(p));
      const double s = rs.s_at(j.v);
      return std::abs(j.laplacian() / g2 - s) / (1.0 + std::abs(s));
    }));
  });
  run_check(report, "rho.f0_consistency", cfg.tol.identity, [&] {
    const RhoFields rf = rho_fields(rs, cfg.problem.box);
    return from_sweep(sweep(samples, [&](const Point2& p) {
      const double a = cfg.problem.f0(p);
      return std::abs(a - rf.f0(p)) / (1.0 + std::abs(a));
    }));
  });
}

}  // namespace

Report cmd_verify(const RunConfig& cfg) {
  Report report;
  report.command = "verify";
  report.config = cfg.name;
  const auto& prob = cfg.problem;
  const auto samples = prob.samples();
  const auto& tol = cfg.tol;

  run_check(report, "f0.nonvanishing", 0.0, [&] {
    Measurement m{0.0, samples.size(), {}};
    for (const auto& p : samples)
      if (!(std::abs(prob.f0(p)) > prob.zeta)) {
        m.max_residual += 1;
        m.detail = "f0 vanishes at " + format_point<2>(p);
      }
    return m;
  });
  run_check(report, "schrodinger.f0", tol.residual, [&] { return from_sweep(schrodinger_sweep(prob.f0, prob, samples)); });
  for (const auto& [name, e] : cfg.solutions) {
    if (name == "f0") continue;
    run_check(report, "schrodinger." + name, tol.residual,
              [&] { return from_sweep(schrodinger_sweep(expr_field<2>(e.expr), prob, samples)); });
  }

  // Quaternionic checks on the planar data lifted to space (x = x2, y = x1).
  const RealField3 f0_3 = expr_field<3>(cfg.f0.expr), u_3 = expr_field<3>(cfg.u.expr);
  run_check(report, "riccati", tol.residual, [&] {
    const QuatField h = log_derivative(f0_3);
    Measurement m;
    for (double x3 : {-0.5, 0.0, 0.5})
      for (const auto& p : samples) {
        const Point3 q = lift(p, x3);
        const double r = max_abs(riccati_residual(h, u_3, q)) / (1.0 + std::abs(u_3(q)));
        if (r > m.max_residual) m.detail = "worst at " + format_point<3>(q);
        m.max_residual = std::max(m.max_residual, r);
        ++m.samples;
      }
    return m;
  });
  const auto coarse = sample_grid(prob.box, 5);
  for (std::size_t k = 0; k < cfg.test_functions.size(); ++k) {
    run_check(report, "factorization." + std::to_string(k), tol.fd, [&] {
      const QuatField h = log_derivative(f0_3);
      const RealField3 f = expr_field<3>(cfg.test_functions[k].expr);
      Measurement m{0.0, 0, "f = " + cfg.test_functions[k].source};
      for (const auto& p : coarse) {
        m.max_residual = std::max(m.max_residual, factorization_residual(h, f, u_3, lift(p, 0.25)));
        ++m.samples;
      }
      return m;
    });
  }

  if (auto main = checked_pair(report, "pair.main", [&] { return main_pair(prob); })) {
    run_check(report, "pair.main.coefficients", tol.identity, [&] {
      const auto general = coefficients(*main);
      const auto closed = vek1_coefficients(prob);
      return from_sweep(sweep(samples, [&](const Point2& p) {
        return std::max({max_diff(general.a, closed.a, p), max_diff(general.b, closed.b, p),
                         max_diff(general.A, closed.A, p), max_diff(general.B, closed.B, p)});
      }));
    });
    pair_checks(report, "pair.main", *main, samples, tol);
    run_check(report, "successor.main_to_next", tol.identity, [&] {
      const PairCoefficients next{ComplexField{}, dz(prob.f0) / to_complex(prob.f0), ComplexField{}, ComplexField{}};
      return Measurement{successor_defect(vek1_coefficients(prob), next, samples), samples.size(), {}};
    });
  }

  if (cfg.rho) {
    rho_checks(report, cfg);
    const auto& rs = cfg.rho->structure;
    if (auto pair = checked_pair(report, "pair.rho", [&] { return rho_pair(prob, rs); })) {
      const RhoFields rf = rho_fields(rs, prob.box);
      run_check(report, "pair.rho.im_fg", tol.identity, [&] {
        return from_sweep(sweep(samples, [&](const Point2& p) {
          const auto j = rf.rho.jet(p);
          const double expected = std::exp(-2 * rf.S(p)) * (j.d[0] * j.d[0] + j.d[1] * j.d[1]);
          return std::abs(pair->im_fg()(p) - expected) / expected;
        }));
      });
      run_check(report, "pair.rho.vek2", tol.residual, [&] {
        const Sweep a = vek2_sweep(pair->F(), prob, samples), b = vek2_sweep(pair->G(), prob, samples);
        return from_sweep(a.max >= b.max ? a : b);
      });
      pair_checks(report, "pair.rho", *pair, samples, tol);
      run_check(report, "successor.rho_adjoint_to_main", tol.identity, [&] {
        return Measurement{successor_defect(coefficients(adjoint(*pair)), vek1_coefficients(prob), samples),
                           samples.size(), {}};
      });

      const auto [phi, psi] = profile_solutions(prob, rs, cfg.anchor);
      run_check(report, "profile.orthogonality", tol.identity, [&] {
        return Measurement{orthogonality_check(phi, psi, prob, samples, tol.residual), samples.size(), {}};
      });
      run_check(report, "profile.second_kind", tol.residual, [&] {
        const auto [phi1, psi1] = second_kind_swap(phi, psi, prob, samples, tol.residual);
        return from_sweep(sweep(samples, [&](const Point2& p) { return second_kind_residual(phi1, psi1, prob.f0, p); }));
      });

      for (const auto& g : cfg.generate) {
        const ComplexField v = g.from == "F_I" ? pair->F() : pair->G();
        const double psi_a = g.psi ? evaluate(g.psi->expr, Bindings<double>{}
                                                                .set(Var::X2, cfg.anchor[0])
                                                                .set(Var::X1, cfg.anchor[1]))
                                   : cfg.psi_anchor;
        std::optional<GeneratedSolution> sol;
        const std::string prefix = "generate." + g.name;
        run_check(report, prefix + ".schrodinger", tol.residual, [&] {
          sol = generate_solution_parts(v, prob, cfg.anchor, g.C, psi_a, tol.residual);
          return from_sweep(schrodinger_sweep(sol->f, prob, samples));
        });
        if (!sol) continue;
        run_check(report, prefix + ".fd_schrodinger", tol.fd, [&] {
          return from_sweep(sweep(coarse, [&](const Point2& p) { return fd::schrodinger_residual(sol->f, prob.u, p); }));
        });
        run_check(report, prefix + ".path_independence", tol.identity, [&] {
          const ComplexField psi_z = v / to_complex(prob.f0);
          return from_sweep(sweep(coarse, [&](const Point2& p) {
            const double bent = potential_from_gradient_2d(
                psi_z, cfg.anchor, p, Curve::polyline({cfg.anchor, {cfg.anchor[0], p[1]}, p}), tol.identity);
            return std::abs(sol->psi(p) - psi_a - bent) / (1.0 + std::abs(bent));
          }));
        });
        if (g.proportional_to) {
          run_check(report, prefix + ".proportional", tol.residual, [&] {
            return from_sweep(proportionality(sol->f, expr_field<2>(g.proportional_to->expr), samples));
          });
        }
        report.metadata["generated"][g.name] = {{"from", g.from},
                                                {"anchor", {cfg.anchor[0], cfg.anchor[1]}},
                                                {"psi_anchor", psi_a},
                                                {"C", g.C}};
      }
    }
  }
  return report;
}

Report cmd_cauchy(const RunConfig& cfg, const std::string& curve, const std::string& solution) {
  auto c = cfg.curves.find(curve);
  if (c == cfg.curves.end()) throw ConfigError("$.curves." + curve, "no curve with this name");
  if (!c->second.closed()) throw ConfigError("$.curves." + curve, "curve is not closed");
  auto s = cfg.solutions.find(solution);
  if (s == cfg.solutions.end() && solution != "f0")
    throw ConfigError("$.solutions." + solution, "no solution with this name");
  const RealField2 f1 = s == cfg.solutions.end() ? cfg.problem.f0 : expr_field<2>(s->second.expr);

  Report report;
  report.command = "cauchy";
  report.config = cfg.name;
  std::optional<CauchyIntegrals> result;
  auto integrals = [&] {
    if (!result) result = cauchy_check(cfg.problem, f1, c->second);
    return *result;
  };
  const std::size_t pieces = c->second.pieces().size();
  run_check(report, "cauchy.I1", cfg.tol.cauchy, [&] { return Measurement{std::abs(integrals().I1), pieces, {}}; });
  run_check(report, "cauchy.I2", cfg.tol.cauchy, [&] { return Measurement{std::abs(integrals().I2), pieces, {}}; });
  if (result) report.metadata = {{"curve", curve}, {"solution", solution}, {"I1", result->I1}, {"I2", result->I2}};
  return report;
}

SequenceOutput cmd_sequence(const RunConfig& cfg, int steps) {
  if (!cfg.rho) throw ConfigError("$.rho", "the sequence needs a rho block");
  if (steps < 0) throw ConfigError("--steps", "must be nonnegative");
  SequenceOutput out;
  Report& report = out.report;
  report.command = "sequence";
  report.config = cfg.name;
  const auto& prob = cfg.problem;
  const auto& tol = cfg.tol;
  const auto samples = prob.samples();

  std::optional<SequenceDriver> driver;
  run_check(report, "pairs.validity", 0.0, [&] {
    SequenceOptions opts;
    opts.anchor = cfg.anchor;
    opts.C = cfg.C;
    opts.psi_anchor = cfg.psi_anchor;
    opts.tol = tol.residual;
    driver.emplace(prob, cfg.rho->structure, opts);
    return Measurement{0.0, samples.size(), {}};
  });
  if (!driver) return out;
  run_check(report, "successor.rho_adjoint_to_main", tol.identity, [&] {
    return Measurement{successor_defect(coefficients(driver->explicit_adjoint()), vek1_coefficients(prob), samples),
                       samples.size(), {}};
  });

  const auto coarse = sample_grid(prob.box, 5);
  const auto vek2 = vek2_coefficients(prob);
  const auto vek1 = vek1_coefficients(prob);
  SequenceState state = SequenceState::start(driver->main().F());
  report.metadata["anchor"] = {cfg.anchor[0], cfg.anchor[1]};
  report.metadata["steps_requested"] = steps;
  for (int n = 1; n <= steps; ++n) {
    try {
      state = driver->step(state);
    } catch (const Error& e) {
      report.error = "step " + std::to_string(n) + ": " + e.what();
      break;
    }
    const StepRecord& rec = state.log.back();
    const std::string prefix = "step" + std::to_string(n);
    const std::size_t count = samples.size();
    auto record = [&](const std::string& name, double value, double t) {
      run_check(report, prefix + "." + name, t, [&] { return Measurement{value, count, {}}; });
    };
    record("integrability_w", rec.curl_star, tol.residual);
    record("vek2", rec.vek2, tol.residual);
    record("schrodinger", rec.schrodinger, tol.residual);
    record("integrability_iv", rec.curl_main, tol.residual);
    record("vek1", rec.vek1, tol.residual);
    run_check(report, prefix + ".fd_vek2", tol.fd, [&] {
      return from_sweep(sweep(coarse, [&](const Point2& p) { return fd::vekua_metric(state.v, vek2, p); }));
    });
    run_check(report, prefix + ".fd_vek1", tol.fd, [&] {
      return from_sweep(sweep(coarse, [&](const Point2& p) { return fd::vekua_metric(state.w, vek1, p); }));
    });
    run_check(report, prefix + ".fd_schrodinger", tol.fd, [&] {
      return from_sweep(sweep(coarse, [&](const Point2& p) { return fd::schrodinger_residual(state.f, prob.u, p); }));
    });
    if (n == 1 && cfg.sequence_v1) {
      run_check(report, "step1.v_closed_form", tol.identity, [&] {
        const ComplexField expected =
            make_complex(expr_field<2>(cfg.sequence_v1->first.expr), expr_field<2>(cfg.sequence_v1->second.expr));
        return from_sweep(sweep(samples, [&](const Point2& p) { return std::abs(state.v(p) - expected(p)); }));
      });
    }

    struct Row {
      Complex v;
      double f, vek, schrod;
    };
    const auto rows = parallel_map<Row>(samples.size(), [&](std::size_t k) {
      const Point2& p = samples[k];
      return Row{state.v(p), state.f(p), vekua_metric(state.v, vek2, p), schrodinger_residual(state.f, prob.u, p)};
    });
    std::ostringstream csv;
    csv << std::setprecision(17) << "x,y,re_v,im_v,f,vekua_residual,schrod_residual\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto& r = rows[k];
      csv << samples[k][0] << ',' << samples[k][1] << ',' << r.v.real() << ',' << r.v.imag() << ',' << r.f << ','
          << r.vek << ',' << r.schrod << '\n';
    }
    out.files["step" + std::to_string(n) + ".csv"] = csv.str();
  }
  report.metadata["steps_completed"] = state.n;
  return out;
}

void write_sequence_output(const SequenceOutput& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, contents] : out.files) {
    std::ofstream f(dir / name);
    if (!f) throw Error("cannot write " + (dir / name).string());
    f << contents;
  }
  std::ofstream r(dir / "report.json");
  if (!r) throw Error("cannot write " + (dir / "report.json").string());
  r << out.report.to_json().dump(2) << "\n";
}

}  // namespace vekua::cli
