#include "intstbc/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace intstbc {

ChannelRealization sample_channel(int n, RngStream& rng, double noise_sigma2)
{
    if (n < 1) {
        throw std::invalid_argument("channel dimension must be positive");
    }
    ChannelRealization ch;
    ch.h.resize(n, n);
    for (Eigen::Index i = 0; i < ch.h.size(); ++i) {
        ch.h(i) = rng.complex_normal(1.0);
    }
    ch.noise_sigma2 = noise_sigma2;
    return ch;
}

CMatrix transmit(const Codeword& x, const ChannelRealization& ch, RngStream& rng)
{
    const auto n = ch.h.rows();
    if (ch.h.cols() != n || x.entries.rows() != n || x.entries.cols() != n) {
        throw std::invalid_argument("codeword and channel dimensions differ");
    }
    CMatrix y = std::sqrt(1.0 / static_cast<double>(n)) * (ch.h * x.entries);
    if (ch.noise_sigma2 > 0.0) {
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            y(i) += rng.complex_normal(ch.noise_sigma2);
        }
    }
    return y;
}

double operating_point(double signal_power, double snr_db, double eta, bool use_psnr)
{
    if (!(signal_power > 0.0)) {
        throw std::invalid_argument("signal power must be positive");
    }
    if (!std::isfinite(snr_db)) {
        throw std::invalid_argument("SNR must be finite");
    }
    if (!(eta >= 1.0)) {
        throw std::invalid_argument("PAPR must be >= 1");
    }
    const double ratio = std::pow(10.0, snr_db / 10.0);
    return (use_psnr ? eta * signal_power : signal_power) / ratio;
}

}  // namespace intstbc
