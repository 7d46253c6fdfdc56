#include "halnum/dirichlet.hpp"

#include <algorithm>
#include <cmath>

namespace halnum {

namespace {

constexpr std::size_t kJBlock = 2048;  // grid nodes per parallel block
constexpr std::size_t kTile = 512;     // terms per cache tile
constexpr std::size_t kLanes = 4;      // fixed accumulation lanes

}  // namespace

std::complex<double> osc_sum_point(const std::vector<OscTerm>& terms, double t) {
  std::complex<double> acc{0.0, 0.0};
  for (const OscTerm& tm : terms)
    acc += tm.amp * std::polar(1.0, -t * tm.omega);
  return acc;
}

void osc_sum_grid(const std::vector<OscTerm>& terms, const UniformGrid& grid,
                  std::complex<double>* out, unsigned threads) {
  const std::size_t npt = grid.count;
  if (npt == 0) return;
  const std::size_t nterm = terms.size();
  if (nterm == 0) {
    std::fill(out, out + npt, std::complex<double>{0.0, 0.0});
    return;
  }

  // Per-term one-step rotation exp(-i * step * omega), shared by all blocks.
  std::vector<double> rot_re(nterm), rot_im(nterm);
  std::vector<double> amp_re(nterm), amp_im(nterm), omega(nterm);
  for (std::size_t i = 0; i < nterm; ++i) {
    const double th = -grid.step * terms[i].omega;
    rot_re[i] = std::cos(th);
    rot_im[i] = std::sin(th);
    amp_re[i] = terms[i].amp.real();
    amp_im[i] = terms[i].amp.imag();
    omega[i] = terms[i].omega;
  }

  const std::size_t nblocks = (npt + kJBlock - 1) / kJBlock;
  run_blocks(nblocks, threads, [&](std::size_t b) {
    const std::size_t j0 = b * kJBlock;
    const std::size_t j1 = std::min(npt, j0 + kJBlock);
    const std::size_t bl = j1 - j0;
    const double t_start = grid.t0 + static_cast<double>(j0) * grid.step;

    alignas(64) double acc_re[kJBlock];
    alignas(64) double acc_im[kJBlock];
    std::fill(acc_re, acc_re + bl, 0.0);
    std::fill(acc_im, acc_im + bl, 0.0);

    alignas(64) double w_re[kTile], w_im[kTile], r_re[kTile], r_im[kTile];

    for (std::size_t ti = 0; ti < nterm; ti += kTile) {
      const std::size_t tl = std::min(kTile, nterm - ti);
      const std::size_t tlp = (tl + kLanes - 1) / kLanes * kLanes;
      for (std::size_t i = 0; i < tl; ++i) {
        const double th = -t_start * omega[ti + i];
        const double c = std::cos(th), s = std::sin(th);
        w_re[i] = amp_re[ti + i] * c - amp_im[ti + i] * s;
        w_im[i] = amp_re[ti + i] * s + amp_im[ti + i] * c;
        r_re[i] = rot_re[ti + i];
        r_im[i] = rot_im[ti + i];
      }
      for (std::size_t i = tl; i < tlp; ++i) {
        w_re[i] = 0.0;
        w_im[i] = 0.0;
        r_re[i] = 1.0;
        r_im[i] = 0.0;
      }
      for (std::size_t j = 0; j < bl; ++j) {
        double s_re0 = 0.0, s_re1 = 0.0, s_re2 = 0.0, s_re3 = 0.0;
        double s_im0 = 0.0, s_im1 = 0.0, s_im2 = 0.0, s_im3 = 0.0;
        for (std::size_t i = 0; i < tlp; i += kLanes) {
          s_re0 += w_re[i];
          s_re1 += w_re[i + 1];
          s_re2 += w_re[i + 2];
          s_re3 += w_re[i + 3];
          s_im0 += w_im[i];
          s_im1 += w_im[i + 1];
          s_im2 += w_im[i + 2];
          s_im3 += w_im[i + 3];
          const double a0 = w_re[i] * r_re[i] - w_im[i] * r_im[i];
          const double b0 = w_re[i] * r_im[i] + w_im[i] * r_re[i];
          const double a1 = w_re[i + 1] * r_re[i + 1] - w_im[i + 1] * r_im[i + 1];
          const double b1 = w_re[i + 1] * r_im[i + 1] + w_im[i + 1] * r_re[i + 1];
          const double a2 = w_re[i + 2] * r_re[i + 2] - w_im[i + 2] * r_im[i + 2];
          const double b2 = w_re[i + 2] * r_im[i + 2] + w_im[i + 2] * r_re[i + 2];
          const double a3 = w_re[i + 3] * r_re[i + 3] - w_im[i + 3] * r_im[i + 3];
          const double b3 = w_re[i + 3] * r_im[i + 3] + w_im[i + 3] * r_re[i + 3];
          w_re[i] = a0;
          w_im[i] = b0;
          w_re[i + 1] = a1;
          w_im[i + 1] = b1;
          w_re[i + 2] = a2;
          w_im[i + 2] = b2;
          w_re[i + 3] = a3;
          w_im[i + 3] = b3;
        }
        acc_re[j] += (s_re0 + s_re1) + (s_re2 + s_re3);
        acc_im[j] += (s_im0 + s_im1) + (s_im2 + s_im3);
      }
    }
    for (std::size_t j = 0; j < bl; ++j)
      out[j0 + j] = std::complex<double>{acc_re[j], acc_im[j]};
  });
}

}  // namespace halnum
