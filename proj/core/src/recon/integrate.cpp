// SPDX-License-Identifier: Apache-2.0
#include "volcap/recon/volume_recon.hpp"

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <numbers>
#include <vector>

namespace volcap::recon {
namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex g_plan_mutex;

}  // namespace

VolumeGrid<double> integrate_fft(const GradientField& field) {
  const int nx = field.field.nx(), ny = field.field.ny(), nz = field.field.nz();
  const std::size_t n_real = field.field.size();
  const std::size_t n_cplx = static_cast<std::size_t>(nz) * ny * (nx / 2 + 1);

  // storage is x-fastest, which is FFTW's last (contiguous) dimension
  std::vector<double> real_buf(n_real);
  std::vector<std::complex<double>> spectrum(n_cplx), accum(n_cplx, {0.0, 0.0});

  fftw_plan fwd, inv;
  {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    fwd = fftw_plan_dft_r2c_3d(nz, ny, nx, real_buf.data(),
                               reinterpret_cast<fftw_complex*>(spectrum.data()), FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_3d(nz, ny, nx, reinterpret_cast<fftw_complex*>(accum.data()),
                               real_buf.data(), FFTW_ESTIMATE);
  }

  auto signed_freq = [](int i, int n) {
    const int m = i <= n / 2 ? i : i - n;
    return 2.0 * std::numbers::pi * m / n;
  };

  for (int comp = 0; comp < 3; ++comp) {
    for (std::size_t i = 0; i < n_real; ++i) real_buf[i] = field.field.data()[i](comp);
    fftw_execute(fwd);

    std::size_t idx = 0;
    for (int z = 0; z < nz; ++z) {
      const double wz = signed_freq(z, nz);
      for (int y = 0; y < ny; ++y) {
        const double wy = signed_freq(y, ny);
        for (int x = 0; x <= nx / 2; ++x, ++idx) {
          const double wx = signed_freq(x, nx);
          const double w2 = wx * wx + wy * wy + wz * wz;
          if (w2 == 0.0) continue;  // DC: the volume is defined up to a constant
          const double wc = comp == 0 ? wx : (comp == 1 ? wy : wz);
          // -j*w/|w|^2 inverts the spectral gradient under the e^{-jwn} DFT
          accum[idx] += std::complex<double>(0.0, -wc / w2) * spectrum[idx];
        }
      }
    }
  }

  fftw_execute(inv);
  {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }

  VolumeGrid<double> out(nx, ny, nz, field.field.origin(), field.field.edge(), 0.0);
  const double scale = 1.0 / static_cast<double>(n_real);
  for (std::size_t i = 0; i < n_real; ++i) out.data()[i] = real_buf[i] * scale;
  return out;
}

}  // namespace volcap::recon
