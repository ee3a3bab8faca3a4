#include "verify_suites.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "entmom/entmom.hpp"

namespace entmom::cli {
namespace {

double rel_err(double value, double reference) {
  if (value == reference) return 0;
  const double scale = std::max(std::abs(value), std::abs(reference));
  return std::abs(value - reference) / scale;
}

CheckResult relative(std::string suite, std::string name, double value, double reference, double tol) {
  CheckResult r{std::move(suite), std::move(name), value, reference, rel_err(value, reference), tol, false, false};
  r.pass = r.error <= tol;
  return r;
}

CheckResult absolute(std::string suite, std::string name, double value, double reference, double tol) {
  CheckResult r{std::move(suite), std::move(name), value, reference, std::abs(value - reference), tol, true, false};
  r.pass = r.error <= tol;
  return r;
}

std::string label(int m, int n, double q) {
  std::ostringstream os;
  os << "(m=" << m << ",n=" << n << ",q=" << q << ")";
  return os.str();
}

const double kGridQ[] = {0.5, 1.5, 2.0, 2.5, 3.0};

}  // namespace

std::vector<CheckResult> suite_closed_forms() {
  std::vector<CheckResult> out;
  const MomentOptions general{EvalMode::floating, false};
  for (int m = 1; m <= 10; ++m) {
    for (int n = m; n <= 10; ++n) {
      const Dims d(m, n);
      const auto rep = tsallis_variance(d, 2.0, general);
      const double ref = to_real<double>(exact_q2_moments(d).var_T);
      if (ref == 0) {
        out.push_back(absolute("closed-forms", "q2 variance " + label(m, n, 2), rep.var_T, ref, 1e-15));
      } else {
        out.push_back(relative("closed-forms", "q2 variance " + label(m, n, 2), rep.var_T, ref, closed_form_tol));
      }
    }
  }
  for (int m = 2; m <= 3; ++m) {
    for (int n = m; n <= 8; ++n) {
      for (double q : kGridQ) {
        const Dims d(m, n);
        const auto [sm_L, sm_L2] = special_small_m<long double>(d, q);
        const double gen_L = static_cast<double>(induced_L_mean<long double>(d, q).value());
        const double gen_L2 = static_cast<double>(induced_L_second<long double>(d, q).value());
        out.push_back(relative("closed-forms", "small-m E[L] " + label(m, n, q), static_cast<double>(sm_L.value()),
                               gen_L, closed_form_tol));
        out.push_back(relative("closed-forms", "small-m E[L^2] " + label(m, n, q),
                               static_cast<double>(sm_L2.value()), gen_L2, closed_form_tol));
      }
    }
  }
  for (int q = 2; q <= 4; ++q) {
    for (int m = 2; m <= 5; ++m) {
      for (int n = m; n <= 6; ++n) {
        const Dims d(m, n);
        const auto rep = tsallis_variance(d, q, general);
        const auto ex = exact_tsallis_moments(d, q);
        out.push_back(relative("closed-forms", "float vs exact variance " + label(m, n, q), rep.var_T,
                               to_real<double>(ex.var_T), closed_form_tol));
      }
    }
  }
  return out;
}

std::vector<CheckResult> suite_quadrature() {
  std::vector<CheckResult> out;
  for (int m = 2; m <= 3; ++m) {
    for (int n = m; n <= 8; ++n) {
      for (double q : kGridQ) {
        const Dims d(m, n);
        const double el = quad_induced_moment<double>(d, q, default_induced_spec(d, q));
        const double i1 = quad_induced_moment<double>(d, 2 * q, default_induced_spec(d, 2 * q));
        const double i2 = quad_I2<double>(d, q, default_I2_spec(d, q));
        out.push_back(relative("quadrature", "E[L] " + label(m, n, q), induced_L_mean<double>(d, q).value(), el,
                               quadrature_tol));
        out.push_back(relative("quadrature", "E[L^2] " + label(m, n, q), induced_L_second<double>(d, q).value(),
                               el * el + i1 - i2, quadrature_tol));
      }
    }
  }
  return out;
}

std::vector<CheckResult> suite_appendix() {
  std::vector<CheckResult> out;
  for (int m = 1; m <= 8; ++m) {
    for (int n = m; n <= 12; ++n) {
      const Dims d(m, n);
      const double a = vn_variance_via_appendix(d);
      const double b = vn_variance(d);
      if (m == 1) {
        out.push_back(absolute("appendix", "V[S] " + label(m, n, 1), a, b, 1e-14));
      } else {
        out.push_back(relative("appendix", "V[S] " + label(m, n, 1), a, b, closed_form_tol));
      }
    }
  }
  return out;
}

std::vector<CheckResult> suite_limit() {
  std::vector<CheckResult> out;
  for (int m = 1; m <= 6; ++m) {
    for (int n = m; n <= 6; ++n) {
      const Dims d(m, n);
      out.push_back(
          absolute("limit", "q->1 V[T] " + label(m, n, 1), q1_limit_check(d, 1e-3), vn_variance(d), limit_tol));
    }
  }
  return out;
}

std::vector<CheckResult> suite_degeneracy() {
  std::vector<CheckResult> out;
  for (int m = 1; m <= 8; ++m) {
    for (int n = m; m * n <= 64; ++n) {
      const Dims d(m, n);
      const double mn = static_cast<double>(d.mn());
      out.push_back(relative("degeneracy", "q=1 E[L]=mn " + label(m, n, 1), induced_L_mean<double>(d, 1.0).value(),
                             mn, 1e-12));
      out.push_back(relative("degeneracy", "q=1 E[L^2]=mn(mn+1) " + label(m, n, 1),
                             induced_L_second<double>(d, 1.0).value(), mn * (mn + 1), 1e-12));
    }
  }
  for (int n = 1; n <= 6; ++n) {
    for (double q : {-0.4, 0.5, 1.5, 2.0, 3.7}) {
      const auto rep = tsallis_variance(Dims(1, n), q, {EvalMode::floating, false});
      out.push_back(absolute("degeneracy", "m=1 mean " + label(1, n, q), rep.e_T, 0, 0));
      out.push_back(absolute("degeneracy", "m=1 variance " + label(1, n, q), rep.var_T, 0, 0));
    }
  }
  for (int alpha = 0; alpha <= 2; ++alpha) {
    for (int s = 0; s <= 5; ++s) {
      for (int t = 0; t <= 5; ++t) {
        const auto v = schrodinger_A_rational(s, t, alpha, alpha, alpha);
        const RationalScalar expected = s == t ? RationalScalar(factorial(alpha + s), factorial(s)) : RationalScalar(0);
        CheckResult r{"degeneracy", "orthogonality exact (alpha=" + std::to_string(alpha) + ",s=" + std::to_string(s) +
                                        ",t=" + std::to_string(t) + ")",
                      to_real<double>(v), to_real<double>(expected), v == expected ? 0.0 : 1.0, 0, true, v == expected};
        out.push_back(r);
      }
    }
  }
  return out;
}

std::vector<CheckResult> suite_mc(const McSuiteConfig& cfg) {
  const Dims d(cfg.m, cfg.n);
  const auto est = mc::run_mc({d, cfg.q, cfg.samples, cfg.seed, cfg.workers});
  const auto rep = entropy_moments(d, cfg.q);
  const std::string tag = label(cfg.m, cfg.n, cfg.q);
  auto sigma_check = [&](std::string name, double value, double reference, double se) {
    CheckResult r{"mc", std::move(name), value, reference, 0, mc_sigmas, false, false};
    const double dev = std::abs(value - reference);
    r.error = se > 0 ? dev / se : (dev == 0 ? 0 : std::numeric_limits<double>::infinity());
    r.pass = r.error <= mc_sigmas;
    return r;
  };
  return {sigma_check("mean " + tag + " [sigmas]", est.mean, rep.e_T, est.se_mean),
          sigma_check("variance " + tag + " [sigmas]", est.variance, rep.var_T, est.se_variance)};
}

}  // namespace entmom::cli
