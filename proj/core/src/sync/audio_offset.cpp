// SPDX-License-Identifier: Apache-2.0
#include "volcap/sync/sync.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace volcap::sync {
namespace {

std::vector<double> zero_mean(std::span<const std::int16_t> s) {
  double mean = 0;
  for (auto v : s) mean += v;
  mean /= static_cast<double>(s.size());
  std::vector<double> out(s.size());
  double var = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    out[i] = s[i] - mean;
    var += out[i] * out[i];
  }
  if (var <= 0) throw std::runtime_error("audio_offset: flat signal, no correlation peak");
  return out;
}

}  // namespace

double audio_offset_ms(std::span<const std::int16_t> a, std::span<const std::int16_t> ref,
                       int sample_rate) {
  if (a.size() < static_cast<std::size_t>(sample_rate) ||
      ref.size() < static_cast<std::size_t>(sample_rate))
    throw std::invalid_argument("audio_offset: signals must be at least one second long");

  const auto sa = zero_mean(a);
  const auto sb = zero_mean(ref);

  std::size_t m = 1;
  while (m < sa.size() + sb.size()) m <<= 1;
  const std::size_t mc = m / 2 + 1;

  std::vector<double> buf(m, 0.0);
  std::vector<std::complex<double>> fa(mc), fb(mc);
  fftw_plan fwd = fftw_plan_dft_r2c_1d(static_cast<int>(m), buf.data(),
                                       reinterpret_cast<fftw_complex*>(fa.data()), FFTW_ESTIMATE);
  std::copy(sa.begin(), sa.end(), buf.begin());
  fftw_execute(fwd);
  std::fill(buf.begin(), buf.end(), 0.0);
  std::copy(sb.begin(), sb.end(), buf.begin());
  fftw_execute_dft_r2c(fwd, buf.data(), reinterpret_cast<fftw_complex*>(fb.data()));
  fftw_destroy_plan(fwd);

  for (std::size_t i = 0; i < mc; ++i) fa[i] *= std::conj(fb[i]);

  std::vector<double> corr(m);
  fftw_plan inv = fftw_plan_dft_c2r_1d(static_cast<int>(m),
                                       reinterpret_cast<fftw_complex*>(fa.data()), corr.data(),
                                       FFTW_ESTIMATE);
  fftw_execute(inv);
  fftw_destroy_plan(inv);

  // circular index d holds sum_n a[n]*ref[n-d]; wrap the upper half to
  // negative lags and prefer the smaller |lag| on exact ties
  long best_lag = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < m; ++d) {
    const long lag = d <= m / 2 ? static_cast<long>(d) : static_cast<long>(d) - static_cast<long>(m);
    const double v = corr[d];
    if (v > best_val || (v == best_val && std::abs(lag) < std::abs(best_lag))) {
      best_val = v;
      best_lag = lag;
    }
  }
  return 1000.0 * static_cast<double>(best_lag) / sample_rate;
}

}  // namespace volcap::sync
