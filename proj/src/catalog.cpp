#include <cmath>
#include <complex>
#include <sstream>

#include "levilab/domain.hpp"

namespace levilab {

namespace {

using std::complex;

complex<double> z_of(std::span<const double> x, int j) {
  return {x[static_cast<std::size_t>(2 * j)], x[static_cast<std::size_t>(2 * j + 1)]};
}

double get(const std::map<std::string, double>& params, const std::string& key, double dflt) {
  auto it = params.find(key);
  return it == params.end() ? dflt : it->second;
}

// distance from p to the annulus closure {rin <= |z| <= rout}; 0 inside
double dist_to_annulus_closure(complex<double> p, double rin, double rout) {
  double r = std::abs(p);
  return std::max({0.0, rin - r, r - rout});
}

// distance from p to the closed disc of radius R
double dist_to_disc_closure(complex<double> p, double R) {
  return std::max(0.0, std::abs(p) - R);
}

// distance from p to {z in closed unit disc : Re z <= -c}
double dist_to_capped_halfplane(complex<double> p, double c, double R) {
  double x = p.real(), y = p.imag();
  if (x <= -c && std::hypot(x, y) <= R) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](double qx, double qy) {
    if (qx <= -c + 1e-15 && std::hypot(qx, qy) <= R + 1e-15)
      best = std::min(best, std::hypot(x - qx, y - qy));
  };
  // project to the halfplane, then if needed onto the disc
  double hx = std::min(x, -c), hy = y;
  consider(hx, hy);
  double hr = std::hypot(hx, hy);
  if (hr > 0) consider(hx * R / hr, hy * R / hr);
  // project to the disc, then clamp into the halfplane
  double pr = std::hypot(x, y);
  if (pr > 0) consider(x * R / pr, y * R / pr);
  // corners of the cap
  double yc = std::sqrt(std::max(0.0, R * R - c * c));
  consider(-c, yc);
  consider(-c, -yc);
  return best;
}

DomainSpec make_ball(int n) {
  Expr s = ipow(variable(0), 2);
  for (int i = 1; i < 2 * n; ++i) s = add(s, ipow(variable(i), 2));
  return DomainSpec::smooth_domain("ball", n, sub(s, constant(1.0)), Box::cube(2 * n, 1.5));
}

DomainSpec make_model_type_2k(int k) {
  Expr rho = add(mul(constant(2.0), variable(2)), ipow(abs_sq(0), k));
  return DomainSpec::smooth_domain("model_type_2k", 2, rho, Box::cube(4, 1.25));
}

DomainSpec make_infinite_type() {
  Expr rho = sub(add(abs_sq(0), mul(constant(2.0), exp_of(div(constant(-1.0), abs_sq(1))))),
                 constant(1.0));
  return DomainSpec::smooth_domain("infinite_type", 2, rho, Box::cube(4, 1.3));
}

DomainSpec make_annulus_times_disc(double rin, double rout, double rdisc) {
  auto member = [=](std::span<const double> x) {
    complex<double> z1 = z_of(x, 0), z2 = z_of(x, 1);
    double r1 = std::abs(z1);
    return r1 > rin && r1 < rout && std::abs(z2) < rdisc;
  };
  auto signed_dist = [=](std::span<const double> x) {
    complex<double> z1 = z_of(x, 0), z2 = z_of(x, 1);
    double r1 = std::abs(z1), r2 = std::abs(z2);
    bool inside = r1 > rin && r1 < rout && r2 < rdisc;
    if (inside) return std::min({r1 - rin, rout - r1, rdisc - r2});
    double d1 = dist_to_annulus_closure(z1, rin, rout);
    double d2 = dist_to_disc_closure(z2, rdisc);
    return -std::hypot(d1, d2);
  };
  Box box;
  box.ranges = {{-rout - 0.2, rout + 0.2},
                {-rout - 0.2, rout + 0.2},
                {-rdisc - 0.2, rdisc + 0.2},
                {-rdisc - 0.2, rdisc + 0.2}};
  return DomainSpec::membership_domain("annulus_times_disc", 2, box, member, signed_dist);
}

// (A x D) U (D(0,2) x {Re z2 < -3/4}) with A = {1/2 < |z1| < 2}
DomainSpec make_example2(double rin, double rout, double cap) {
  auto member = [=](std::span<const double> x) {
    complex<double> z1 = z_of(x, 0), z2 = z_of(x, 1);
    double r1 = std::abs(z1), r2 = std::abs(z2);
    bool in_u = r1 > rin && r1 < rout && r2 < 1.0;
    bool in_v = r1 < rout && r2 < 1.0 && z2.real() < -cap;
    return in_u || in_v;
  };
  auto signed_dist = [=](std::span<const double> x) {
    complex<double> z1 = z_of(x, 0), z2 = z_of(x, 1);
    double r1 = std::abs(z1), r2 = std::abs(z2);
    bool in_u = r1 > rin && r1 < rout && r2 < 1.0;
    bool in_v = r1 < rout && r2 < 1.0 && z2.real() < -cap;
    if (in_u || in_v) {
      // distance to the complement of the union: a point of the complement
      // fails clause-U and clause-V; minimize over how each clause fails
      double cost_a = rout - r1;                                     // |y1| >= rout
      double dA = std::max(0.0, std::min(r1 - rin, rout - r1));      // y1 leaves A
      double dH = std::max(0.0, std::min(1.0 - r2, -cap - z2.real())); // y2 leaves the cap
      double cost_b = std::hypot(dA, dH);
      double cost_d = 1.0 - r2; // y2 leaves the unit disc
      return std::min({cost_a, cost_b, cost_d});
    }
    double du = std::hypot(dist_to_annulus_closure(z1, rin, rout), dist_to_disc_closure(z2, 1.0));
    double dv = std::hypot(dist_to_disc_closure(z1, rout), dist_to_capped_halfplane(z2, cap, 1.0));
    return -std::min(du, dv);
  };
  Box box;
  box.ranges = {{-rout - 0.1, rout + 0.1},
                {-rout - 0.1, rout + 0.1},
                {-1.1, 1.1},
                {-1.1, 1.1}};
  return DomainSpec::membership_domain("example2_nonpseudoconvex", 2, box, member, signed_dist);
}

// D(0, rdisc) x A with A = {|Re|<outer, |Im|<outer} \ {|Re|<=inner, |Im|<=inner}
DomainSpec make_square_frame_times_disc(double rdisc, double inner, double outer) {
  auto frame_member = [=](complex<double> p) {
    double m = std::max(std::abs(p.real()), std::abs(p.imag()));
    return m < outer && m > inner;
  };
  auto member = [=](std::span<const double> x) {
    complex<double> z1 = z_of(x, 0), z2 = z_of(x, 1);
    return std::abs(z1) < rdisc && frame_member(z2);
  };
  auto signed_dist = [=](std::span<const double> x) {
    complex<double> z1 = z_of(x, 0), z2 = z_of(x, 1);
    double sup = std::max(std::abs(z2.real()), std::abs(z2.imag()));
    double d_inner = std::hypot(std::max(0.0, std::abs(z2.real()) - inner),
                                std::max(0.0, std::abs(z2.imag()) - inner));
    if (member(x)) return std::min({rdisc - std::abs(z1), outer - sup, d_inner});
    double d1 = dist_to_disc_closure(z1, rdisc);
    double d2;
    if (sup >= outer) {
      d2 = std::hypot(std::max(0.0, std::abs(z2.real()) - outer),
                      std::max(0.0, std::abs(z2.imag()) - outer));
    } else if (sup <= inner) {
      d2 = inner - sup;
    } else {
      d2 = 0.0;
    }
    return -std::hypot(d1, d2);
  };
  Box box;
  box.ranges = {{-rdisc - 0.2, rdisc + 0.2},
                {-rdisc - 0.2, rdisc + 0.2},
                {-outer - 0.2, outer + 0.2},
                {-outer - 0.2, outer + 0.2}};
  return DomainSpec::membership_domain("square_frame_times_disc", 2, box, member, signed_dist);
}

} // namespace

DomainSpec catalog_domain(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "ball") return make_ball(static_cast<int>(get(params, "n", 2)));
  if (name == "model_type_2k") return make_model_type_2k(static_cast<int>(get(params, "k", 1)));
  if (name == "infinite_type") return make_infinite_type();
  if (name == "annulus_times_disc")
    return make_annulus_times_disc(get(params, "inner", 0.5), get(params, "outer", 2.0),
                                   get(params, "rdisc", 1.0));
  if (name == "example2_nonpseudoconvex")
    return make_example2(get(params, "inner", 0.5), get(params, "outer", 2.0),
                         get(params, "cap", 0.75));
  if (name == "square_frame_times_disc")
    return make_square_frame_times_disc(get(params, "rdisc", 3.0), get(params, "inner", 1.0),
                                        get(params, "outer", 3.0));
  raise(ErrorKind::unknown_name, "unknown catalog domain '" + name + "'");
}

std::vector<std::string> catalog_names() {
  return {"ball",
          "model_type_2k",
          "infinite_type",
          "annulus_times_disc",
          "example2_nonpseudoconvex",
          "square_frame_times_disc"};
}

DomainSpec domain_from_uri(const std::string& uri) {
  const std::string prefix = "catalog:";
  if (uri.rfind(prefix, 0) != 0)
    raise(ErrorKind::unknown_name, "expected a catalog:<name> URI, got '" + uri + "'");
  std::string rest = uri.substr(prefix.size());
  std::string name = rest;
  std::map<std::string, double> params;
  auto qpos = rest.find('?');
  if (qpos != std::string::npos) {
    name = rest.substr(0, qpos);
    std::stringstream qs(rest.substr(qpos + 1));
    std::string kv;
    while (std::getline(qs, kv, '&')) {
      auto eq = kv.find('=');
      if (eq == std::string::npos)
        raise(ErrorKind::parse_error, "malformed catalog parameter '" + kv + "'");
      params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
  }
  return catalog_domain(name, params);
}

} // namespace levilab
