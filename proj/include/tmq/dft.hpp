#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace tmq {

using cplx = std::complex<double>;

// e(k/n) = exp(2 pi i k / n), accurate to the last bit for any k.
cplx unit_root(std::int64_t k, std::int64_t n);

// e(x) = exp(2 pi i x).
cplx expi2pi(double x);

// Unnormalized DFT of arbitrary length:
//   out[k] = sum_j in[j] * e(sign * j * k / n),  sign = +1 or -1.
// Lengths whose prime factors are all small use a mixed-radix recursion;
// anything else goes through Bluestein's chirp transform.
class DftPlan {
public:
    explicit DftPlan(std::size_t n);

    std::size_t size() const { return n_; }
    bool uses_bluestein() const { return bluestein_; }

    void apply(std::vector<cplx>& data, int sign) const;

private:
    void mixed(const cplx* in, cplx* out, std::size_t m, std::size_t stride, std::size_t fi,
               const std::vector<cplx>& w) const;
    void run_bluestein(std::vector<cplx>& data, int sign) const;

    std::size_t n_;
    bool bluestein_ = false;
    std::vector<std::size_t> factors_;
    std::vector<cplx> w_pos_, w_neg_;

    // Bluestein state
    std::size_t m_ = 0;
    std::vector<cplx> chirp_pos_, chirp_neg_;
    std::vector<cplx> kernel_pos_, kernel_neg_;
    std::vector<cplx> w2_;
};

std::vector<cplx> dft(std::vector<cplx> x, int sign);

// In-place power-of-two FFT with precomputed e(-j/m) twiddles (size m/2).
void fft_pow2(std::vector<cplx>& a, const std::vector<cplx>& w_half, bool inverse);

}  // namespace tmq
