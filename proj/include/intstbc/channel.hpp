#pragma once

#include "intstbc/design.hpp"
#include "intstbc/rng.hpp"

namespace intstbc {

/// Quasi-static n x n Rayleigh channel, constant over one codeword.
struct ChannelRealization {
    CMatrix h;
    /// Noise variance per complex dimension.
    double noise_sigma2 = 0.0;
};

/// Fresh H with i.i.d. CN(0, 1) entries.
ChannelRealization sample_channel(int n, RngStream& rng, double noise_sigma2 = 0.0);

/// Y = sqrt(1/n) H X + Z, Z i.i.d. CN(0, sigma^2).
CMatrix transmit(const Codeword& x, const ChannelRealization& ch, RngStream& rng);

/// Noise variance for an operating point.
///
/// SNR = P_s / sigma^2 and PSNR = eta P_s / sigma^2, both in dB on input.
/// Throws std::invalid_argument on nonpositive power or eta < 1.
double operating_point(double signal_power, double snr_db, double eta, bool use_psnr);

}  // namespace intstbc
