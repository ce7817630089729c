#include <cmath>
#include <exception>
#include <random>

#include "check_util.hpp"

namespace qbessel {

namespace {

class Draw {
 public:
  Draw(std::uint64_t seed, IdentityId id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(id)};
    rng_.seed(seq);
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  long long integer(long long lo, long long hi) { return std::uniform_int_distribution<long long>(lo, hi)(rng_); }

  // Uniform point in the disc |w| < radius, written as key and key_im.
  void disc(ParamMap& p, const std::string& key, double radius, double min_radius = 0) {
    const double r = radius * std::sqrt(uniform(min_radius * min_radius / (radius * radius), 1.0));
    const double th = uniform(0, 2 * M_PI);
    p[key] = r * std::cos(th);
    p[key + "_im"] = r * std::sin(th);
  }

 private:
  std::mt19937_64 rng_;
};

ParamMap draw_one(IdentityId id, Draw& d, double q) {
  ParamMap p{{"q", q}};
  const double t_hi = std::min(0.9, 0.95 / q);
  switch (id) {
    case IdentityId::Prop21:
      p["n"] = static_cast<double>(d.integer(-6, 6));
      d.disc(p, "a", 1.0);
      d.disc(p, "z", 1.0);
      break;
    case IdentityId::Transform27:
      d.disc(p, "a", 1.0);
      d.disc(p, "w", 1.0, 0.05);
      d.disc(p, "z", 1.0, 0.05);
      break;
    case IdentityId::JacobiOrth:
      p["m"] = static_cast<double>(d.integer(0, 5));
      p["n"] = static_cast<double>(d.integer(0, 5));
      p["alpha"] = d.uniform(-0.5, 2.0);
      p["beta"] = d.uniform(-0.5, 2.0);
      break;
    case IdentityId::KrawtchoukOrth: {
      const long long n_big = d.integer(0, 8);
      p["N"] = static_cast<double>(n_big);
      p["n"] = static_cast<double>(d.integer(0, n_big));
      p["m"] = static_cast<double>(d.integer(0, n_big));
      p["t"] = d.uniform(0.1, t_hi);
      break;
    }
    case IdentityId::LimitJacobiBessel:
      p["n"] = static_cast<double>(d.integer(20, 40));
      p["x"] = d.uniform(0.0, 2.0);
      p["alpha"] = d.uniform(0.0, 2.0);
      p["beta"] = d.uniform(0.0, 2.0);
      break;
    case IdentityId::LimitKrawtchoukBigBessel: {
      const long long n_big = d.integer(0, 6);
      p["N"] = static_cast<double>(n_big);
      p["z"] = static_cast<double>(d.integer(0, n_big));
      p["m"] = static_cast<double>(d.integer(20, 40));
      p["t"] = d.uniform(0.1, t_hi);
      p["x"] = static_cast<double>(d.integer(0, 4));
      break;
    }
    case IdentityId::FlorisKoelinkAddition:
    case IdentityId::JacobiAddition: {
      const long long l = d.integer(0, 3);
      const long long z = d.integer(0, 6 - l);
      p["l"] = static_cast<double>(l);
      p["z"] = static_cast<double>(z);
      p["N"] = static_cast<double>(d.integer(z + l, 6));
      p["nu"] = d.uniform(0.2, 3.0);
      p["t"] = d.uniform(0.1, t_hi);
      p["x"] = d.uniform(0.01, 1.0);
      break;
    }
    case IdentityId::Theorem41:
    case IdentityId::Corollary43: {
      const long long n_big = d.integer(1, 5);
      p["N"] = static_cast<double>(n_big);
      p["z"] = static_cast<double>(d.integer(0, std::min<long long>(n_big, 2)));
      p["x"] = static_cast<double>(d.integer(0, 3));
      p["nu"] = d.uniform(0.5, 2.5);
      p["t"] = d.uniform(0.3, t_hi);
      if (id == IdentityId::Theorem41) p["l"] = static_cast<double>(d.integer(-2, 1));
      break;
    }
    case IdentityId::AdditionNInfinity: {
      const double mu = d.uniform(0.0, 2.0);
      p["mu"] = mu;
      p["z"] = static_cast<double>(d.integer(1, 3));
      p["x"] = static_cast<double>(d.integer(0, 3));
      p["nu"] = d.uniform(0.5, 2.5);
      break;
    }
    case IdentityId::Prop51:
      p["m"] = static_cast<double>(d.integer(0, 2));
      p["z"] = static_cast<double>(d.integer(0, 2));
      p["k"] = static_cast<double>(d.integer(0, 2));
      p["y"] = static_cast<double>(d.integer(0, 3));
      p["t"] = d.uniform(0.2, t_hi);
      p["nu"] = d.uniform(0.5, 2.5);
      break;
    case IdentityId::ProductFormula52:
      p["nu"] = d.uniform(0.5, 3.0);
      p["x"] = static_cast<double>(d.integer(0, 3));
      p["y"] = static_cast<double>(d.integer(0, 3));
      p["z_lo"] = -8;
      p["z_hi"] = 14;
      break;
    case IdentityId::KernelSymmetry:
      p["nu"] = d.uniform(0.5, 3.0);
      p["x"] = static_cast<double>(d.integer(0, 4));
      p["y"] = static_cast<double>(d.integer(0, 4));
      p["z"] = static_cast<double>(d.integer(0, 4));
      p["swap"] = static_cast<double>(d.integer(0, 1));
      break;
    case IdentityId::KernelPositivity:
      p["nu"] = d.uniform(0.5, 3.0);
      p["x"] = static_cast<double>(d.integer(0, 4));
      p["y"] = static_cast<double>(d.integer(0, 4));
      p["z"] = static_cast<double>(d.integer(-4, 10));
      break;
    case IdentityId::Bound24:
      p["alpha"] = d.uniform(0.01, 5.0);
      p["n"] = static_cast<double>(d.integer(0, 30));
      break;
    case IdentityId::Bound25:
      p["m"] = static_cast<double>(d.integer(0, 20));
      p["n"] = static_cast<double>(d.integer(0, 20));
      break;
    case IdentityId::BoundLemma42: {
      const long long n_big = d.integer(0, 10);
      const long long s = d.integer(0, 6);
      p["N"] = static_cast<double>(n_big);
      p["z"] = static_cast<double>(d.integer(0, n_big));
      p["s"] = static_cast<double>(s);
      p["r"] = static_cast<double>(s + d.integer(0, 6));
      p["nu"] = d.uniform(0.2, 3.0);
      break;
    }
    case IdentityId::BoundProp32: {
      const long long n_big = d.integer(0, 8);
      p["N"] = static_cast<double>(n_big);
      p["z"] = static_cast<double>(d.integer(0, n_big));
      p["t"] = d.uniform(0.1, t_hi);
      p["x"] = d.uniform(-3.0, 10.0);
      break;
    }
  }
  return p;
}

}  // namespace

std::vector<ParamMap> sweep_parameters(IdentityId id, int n, std::uint64_t seed, double q) {
  if (n < 0) throw DomainError("sweep size must be non-negative");
  (void)QBase(q);
  Draw d(seed, id);
  std::vector<ParamMap> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(draw_one(id, d, q));
  return out;
}

std::vector<IdentityReport> run_sweep(IdentityId id, const std::vector<ParamMap>& params,
                                      const TruncationPolicy& policy, double tol) {
  const long long n = static_cast<long long>(params.size());
  std::vector<IdentityReport> out(params.size());
  std::vector<std::exception_ptr> errors(params.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = check_identity(id, params[k], policy, tol);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return out;
}

}  // namespace qbessel
