#pragma once

#include <random>
#include <vector>

#include "malseries/ardl.hpp"
#include "malseries/series.hpp"

namespace test_util {

struct ArdlProcess {
  double alpha = 0;
  std::vector<double> beta, gamma, phi, rho;  // beta lags 1.., others lags 0..
  double noise_sigma = 0.1;
};

/// Simulates a series bundle whose mal_share follows the given process with
/// integer eco/adv/art driver series. The response is left unclamped; the
/// bundle is a fitting harness, not an aggregation product.
inline malseries::SeriesBundle simulate_ardl(const ArdlProcess& p, long T,
                                             unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> eco_d(0, 6);
  std::poisson_distribution<long long> adv_d(3.0), art_d(2.0);
  std::normal_distribution<double> noise(0.0, p.noise_sigma);

  long burn = 50;
  std::vector<long long> eco, adv, art;
  std::vector<double> y;
  for (long t = 0; t < T + burn; ++t) {
    eco.push_back(eco_d(rng));
    adv.push_back(adv_d(rng));
    art.push_back(art_d(rng));
    double v = p.alpha + noise(rng);
    for (size_t j = 0; j < p.beta.size(); ++j) {
      long idx = t - 1 - static_cast<long>(j);
      if (idx >= 0) v += p.beta[j] * y[static_cast<size_t>(idx)];
    }
    auto add = [&](const std::vector<double>& c, const std::vector<long long>& x) {
      for (size_t j = 0; j < c.size(); ++j) {
        long idx = t - static_cast<long>(j);
        if (idx >= 0) v += c[j] * static_cast<double>(x[static_cast<size_t>(idx)]);
      }
    };
    add(p.gamma, eco);
    add(p.phi, adv);
    add(p.rho, art);
    y.push_back(v);
  }

  malseries::SeriesBundle b;
  b.granularity = malseries::Granularity::Weekly;
  for (long t = burn; t < T + burn; ++t) {
    size_t i = static_cast<size_t>(t);
    b.periods.push_back("p" + std::to_string(t - burn));
    b.mal_share.push_back(y[i]);
    b.mal_freq.push_back(0);
    b.eco.push_back(eco[i]);
    b.adv.push_back(adv[i]);
    b.art.push_back(art[i]);
  }
  return b;
}

inline std::vector<double> gaussian_series(size_t n, unsigned long long seed,
                                           double mu = 0.0, double sigma = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(mu, sigma);
  std::vector<double> out(n);
  for (auto& v : out) v = d(rng);
  return out;
}

}  // namespace test_util
