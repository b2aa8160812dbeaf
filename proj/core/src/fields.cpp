#include "osgood/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "osgood/errors.hpp"
#include "osgood/fft.hpp"
#include "osgood/numerics.hpp"

namespace osgood {

namespace {

using cplx = std::complex<double>;

double signed_norm2(const GridField& f, std::size_t flat) {
  double m2 = 0.0;
  for (int j : f.multi_index(flat)) {
    const double m = fft::signed_freq(j, f.n());
    m2 += m * m;
  }
  return m2;
}

double periodic_distance(const GridField& f, std::size_t a, std::size_t b) {
  const std::vector<int> ia = f.multi_index(a);
  const std::vector<int> ib = f.multi_index(b);
  double s = 0.0;
  for (std::size_t k = 0; k < ia.size(); ++k) {
    int m = (ia[k] - ib[k]) % f.n();
    if (m < 0) m += f.n();
    const double dm = fft::signed_freq(m, f.n());
    s += dm * dm;
  }
  return std::sqrt(s) * f.spacing();
}

// sum_m K(m) g(x + m) by FFT, K real and indexed like the field.
std::vector<double> correlate(const GridField& g, std::span<const cplx> kernel_hat) {
  const std::vector<cplx>& gh = g.spectrum();
  const double total = static_cast<double>(g.size());
  std::vector<cplx> c(gh.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = total * gh[i] * std::conj(kernel_hat[i]);
  return fft::inverse_real(c, g.d(), g.n());
}

using Pair = std::pair<std::size_t, std::size_t>;

std::vector<Pair> sample_pairs(std::size_t N, int pairs, std::uint64_t seed) {
  std::vector<Pair> out;
  const std::size_t all = N * (N - 1) / 2;
  if (pairs <= 0 || N < 2) return out;
  if (static_cast<std::size_t>(pairs) >= all) {
    out.reserve(all);
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = a + 1; b < N; ++b) out.emplace_back(a, b);
    return out;
  }
  CounterRng rng(seed, 0x77);
  out.reserve(static_cast<std::size_t>(pairs));
  while (out.size() < static_cast<std::size_t>(pairs)) {
    const std::size_t a = rng.next_u64() % N;
    const std::size_t b = rng.next_u64() % N;
    if (a != b) out.emplace_back(a, b);
  }
  return out;
}

}  // namespace

double spectral_norm(const GridField& f, double s) {
  if (s < 0.0 && !f.is_mean_zero())
    throw MeanNonzeroError("spectral_norm: negative order needs a mean-zero field");
  const std::vector<cplx>& fh = f.spectrum();
  const double unit = 2.0 * std::numbers::pi / f.L();
  std::vector<double> terms;
  terms.reserve(fh.size());
  for (std::size_t i = 0; i < fh.size(); ++i) {
    const double m2 = signed_norm2(f, i);
    if (m2 == 0.0) {
      if (s == 0.0) terms.push_back(std::norm(fh[i]));
      continue;
    }
    terms.push_back(std::pow(unit * unit * m2, s) * std::norm(fh[i]));
  }
  return std::sqrt(std::pow(f.L(), f.d()) * numerics::pairwise_sum(terms));
}

double offset_length(const GridField& f, std::span<const int> offset) {
  double s = 0.0;
  for (int m : offset) {
    int r = m % f.n();
    if (r < 0) r += f.n();
    const double dm = fft::signed_freq(r, f.n());
    s += dm * dm;
  }
  return std::sqrt(s) * f.spacing();
}

std::vector<std::vector<int>> offsets_within(const GridField& f, double h_max) {
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<int> m = f.multi_index(i);
    for (int& c : m) c = fft::signed_freq(c, f.n());
    const double len = offset_length(f, m);
    if (len > 0.0 && len <= h_max) out.push_back(std::move(m));
  }
  return out;
}

std::vector<double> shift_differences(const GridField& f) {
  const std::vector<cplx>& fh = f.spectrum();
  std::vector<cplx> power(fh.size());
  for (std::size_t i = 0; i < fh.size(); ++i) power[i] = std::norm(fh[i]);
  const std::vector<double> auto_corr = fft::inverse_real(power, f.d(), f.n());
  const double volume = std::pow(f.L(), f.d());
  std::vector<double> out(auto_corr.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::max(0.0, 2.0 * volume * (auto_corr[0] - auto_corr[i]));
  return out;
}

double besov_functional(const GridField& f, const RadialFn& weight, double h_max,
                        double h_min) {
  const std::vector<double> diff = shift_differences(f);
  const double vol = f.cell_volume();
  std::vector<double> terms;
  for (std::size_t i = 0; i < diff.size(); ++i) {
    const double len = std::sqrt(signed_norm2(f, i)) * f.spacing();
    if (len == 0.0 || len > h_max || len < h_min) continue;
    terms.push_back(vol * diff[i] / (std::pow(len, f.d()) * weight(len)));
  }
  return numerics::pairwise_sum(terms);
}

GridField lusin_Ds(const GridField& f, double s, double h_max) {
  if (!(s > 0.0 && s <= 1.0)) throw ParameterError("lusin_Ds: s in (0, 1]");
  const double vol = f.cell_volume();
  std::vector<double> kernel(f.size(), 0.0);
  std::vector<double> kernel_terms;
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    const double len = std::sqrt(signed_norm2(f, i)) * f.spacing();
    if (len == 0.0 || len > h_max) continue;
    kernel[i] = vol / std::pow(len, f.d() + 2.0 * s);
    kernel_terms.push_back(kernel[i]);
  }
  const double kernel_sum = numerics::pairwise_sum(kernel_terms);
  const std::vector<cplx> kh = fft::forward(kernel, f.d(), f.n());

  std::vector<double> sq(f.values());
  for (double& v : sq) v *= v;
  const GridField f2(f.d(), f.n(), f.L(), sq);
  const std::vector<double> kf = correlate(f, kh);
  const std::vector<double> kf2 = correlate(f2, kh);

  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = f[i];
    out[i] = std::sqrt(std::max(0.0, kf2[i] - 2.0 * v * kf[i] + v * v * kernel_sum));
  }
  return GridField(f.d(), f.n(), f.L(), std::move(out));
}

LusinAudit lusin_pointwise_audit(const GridField& f, const GridField& Ds, double s, int pairs,
                                 std::uint64_t seed) {
  LusinAudit rep;
  for (const auto& [a, b] : sample_pairs(f.size(), pairs, seed)) {
    const double r = periodic_distance(f, a, b);
    const double denom = std::pow(r, s) * (Ds[a] + Ds[b]);
    const double num = std::abs(f[a] - f[b]);
    ++rep.pairs;
    if (denom > 0.0) rep.fitted_C = std::max(rep.fitted_C, num / denom);
  }
  return rep;
}

WitnessReport empirical_modulus_witness(const GridField& f0, const GridField& ft,
                                        const RadialFn& mu0, const RadialFn& mu_t, int pairs,
                                        std::uint64_t seed) {
  if (f0.size() != ft.size()) throw ParameterError("empirical_modulus_witness: grid mismatch");
  const std::vector<Pair> sample = sample_pairs(f0.size(), pairs, seed);
  WitnessReport rep;
  rep.pairs = static_cast<int>(sample.size());
  std::vector<double> dist(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto [a, b] = sample[i];
    dist[i] = periodic_distance(f0, a, b);
    rep.max_ratio_0 = std::max(rep.max_ratio_0, std::abs(f0[a] - f0[b]) / (2.0 * mu0(dist[i])));
  }
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto [a, b] = sample[i];
    const double bound = mu0(mu_t(dist[i]));
    const double diff = std::abs(ft[a] - ft[b]);
    rep.max_ratio_t = std::max(rep.max_ratio_t, diff / (2.0 * bound));
    if (diff > 2.0 * rep.max_ratio_0 * bound * (1.0 + 1e-9) + 1e-14) ++rep.violations;
  }
  rep.witness_ok = rep.violations == 0;
  return rep;
}

AofUReport A_of_u(const RadialFn& mu, double tol) {
  const auto g = [&](double s) {
    const double r = std::exp(-s);
    return r > 0.0 ? mu(r) : 0.0;
  };
  numerics::QuadratureOptions opts;
  opts.rel_tol = tol;
  opts.abs_tol = tol * 1e-2;
  const double ln2 = std::numbers::ln2;
  std::vector<double> inc(41, 0.0);
  for (int k = 1; k <= 40; ++k)
    inc[k] = numerics::integrate(g, (k - 1) * ln2, k * ln2, opts).value;
  AofUReport rep;
  rep.partial_k40 = numerics::pairwise_sum(std::span<const double>(inc).subspan(1));
  const bool settled = inc[40] <= tol * std::max(1.0, rep.partial_k40);
  const bool decaying = inc[20] > 0.0 && (40.0 * inc[40]) / (20.0 * inc[20]) < 0.75;
  if (!settled && !decaying) {
    rep.divergent = true;
    rep.value = std::numeric_limits<double>::infinity();
    return rep;
  }
  // s = start / u maps [start, s_end] onto [start / s_end, 1]. Past s_end the radius underflows,
  // so the remainder is closed with the local power law of the integrand.
  const double start = 40.0 * ln2;
  const double s_end = 700.0;
  const auto mapped = [&](double u) { return g(start / u) * start / (u * u); };
  double tail = numerics::integrate(mapped, start / s_end, 1.0, opts).value;
  const double g_end = g(s_end);
  if (g_end > 0.0) {
    const double slope = std::log(g(0.5 * s_end) / g_end) / std::numbers::ln2;
    tail += slope > 1.0 ? g_end * s_end / (slope - 1.0) : std::numeric_limits<double>::infinity();
  }
  rep.value = rep.partial_k40 + tail;
  rep.divergent = std::isinf(rep.value);
  return rep;
}

double layer_cake_l2_squared(const GridField& f, int levels) {
  if (levels < 1) throw ParameterError("layer_cake_l2_squared: levels must be >= 1");
  std::vector<double> a(f.values());
  for (double& v : a) v = std::abs(v);
  std::sort(a.begin(), a.end());
  const double top = a.empty() ? 0.0 : a.back();
  if (top == 0.0) return 0.0;
  const double dr = top / levels;
  const double vol = f.cell_volume();
  std::vector<double> terms(static_cast<std::size_t>(levels));
  for (int j = 0; j < levels; ++j) {
    const double r = (j + 0.5) * dr;
    const auto above = static_cast<double>(a.end() - std::upper_bound(a.begin(), a.end(), r));
    terms[static_cast<std::size_t>(j)] = 2.0 * r * vol * above * dr;
  }
  return numerics::pairwise_sum(terms);
}

GridField random_band_limited(int d, int n, double L, int kmax, CounterRng& rng) {
  if (kmax < 1 || 2 * kmax >= n) throw ParameterError("random_band_limited: need 1 <= kmax < n/2");
  GridField shape = GridField::zeros(d, n, L);
  std::vector<cplx> coeffs(shape.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    int linf = 0;
    for (int j : shape.multi_index(i)) linf = std::max(linf, std::abs(fft::signed_freq(j, n)));
    if (linf == 0 || linf > kmax) continue;
    const double re = rng.normal();
    const double im = rng.normal();
    coeffs[i] = cplx(re, im);
  }
  GridField f = GridField::from_spectrum(d, n, L, coeffs);
  const double norm = f.l2_norm();
  return norm > 0.0 ? f.scaled(1.0 / norm) : f;
}

}  // namespace osgood
