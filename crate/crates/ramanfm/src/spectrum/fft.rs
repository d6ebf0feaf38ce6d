//! Complex FFT: iterative radix-2 with a Bluestein fallback for arbitrary
//! lengths, so any grid size transforms in O(n log n).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

/// Unnormalized DFT: `X_k = Σ_n x_n e^(∓2πi·nk/N)` (minus for forward).
/// The inverse direction is also unnormalized; divide by `n` to invert.
pub(crate) fn dft(input: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = input.len();
    if n <= 1 {
        return input.to_vec();
    }
    if n.is_power_of_two() {
        let mut buf = input.to_vec();
        radix2_in_place(&mut buf, inverse);
        buf
    } else {
        bluestein(input, inverse)
    }
}

fn radix2_in_place(buf: &mut [Complex64], inverse: bool) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());

    // bit-reversal permutation
    let mut j = 0usize;
    for i in 0..n - 1 {
        if i < j {
            buf.swap(i, j);
        }
        let mut mask = n >> 1;
        while j & mask != 0 {
            j &= !mask;
            mask >>= 1;
        }
        j |= mask;
    }

    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2usize;
    while len <= n {
        let ang = sign * core::f64::consts::TAU / len as f64;
        let (sin, cos) = libm::sincos(ang);
        let w_len = Complex64::new(cos, sin);
        for chunk in buf.chunks_mut(len) {
            let mut w = Complex64::new(1.0, 0.0);
            let (lo, hi) = chunk.split_at_mut(len / 2);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let t = *b * w;
                *b = *a - t;
                *a += t;
                w *= w_len;
            }
        }
        len <<= 1;
    }
}

/// Chirp-z reformulation: `nk = (n² + k² - (k-n)²)/2` turns the DFT into a
/// circular convolution of chirped sequences, evaluated with power-of-two
/// FFTs of length ≥ 2n-1.
fn bluestein(input: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = input.len();
    let m = (2 * n - 1).next_power_of_two();
    let sign = if inverse { 1.0 } else { -1.0 };

    // chirp[j] = exp(sign·iπ j²/n), with j² reduced mod 2n to keep the
    // sine argument small and exact
    let chirp: Vec<Complex64> = (0..n)
        .map(|j| {
            let j2 = (j as u64 * j as u64) % (2 * n as u64);
            let ang = sign * core::f64::consts::PI * j2 as f64 / n as f64;
            let (s, c) = libm::sincos(ang);
            Complex64::new(c, s)
        })
        .collect();

    let mut a = vec![Complex64::new(0.0, 0.0); m];
    for j in 0..n {
        a[j] = input[j] * chirp[j];
    }
    let mut b = vec![Complex64::new(0.0, 0.0); m];
    b[0] = chirp[0].conj();
    for j in 1..n {
        let c = chirp[j].conj();
        b[j] = c;
        b[m - j] = c;
    }

    radix2_in_place(&mut a, false);
    radix2_in_place(&mut b, false);
    for (x, y) in a.iter_mut().zip(b.iter()) {
        *x *= *y;
    }
    radix2_in_place(&mut a, true);

    let scale = 1.0 / m as f64;
    (0..n).map(|k| a[k] * scale * chirp[k]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_dft(input: &[Complex64], inverse: bool) -> Vec<Complex64> {
        let n = input.len();
        let sign = if inverse { 1.0 } else { -1.0 };
        (0..n)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, x) in input.iter().enumerate() {
                    let ang = sign * core::f64::consts::TAU * (j * k % n) as f64 / n as f64;
                    let (s, c) = libm::sincos(ang);
                    acc += x * Complex64::new(c, s);
                }
                acc
            })
            .collect()
    }

    fn pseudo_random(n: usize) -> Vec<Complex64> {
        let mut state = 0x9e3779b97f4a7c15u64;
        (0..n)
            .map(|_| {
                let mut next = || {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
                };
                Complex64::new(next(), next())
            })
            .collect()
    }

    #[test]
    fn matches_direct_dft() {
        for n in [2usize, 4, 8, 15, 27, 64, 100, 241] {
            let x = pseudo_random(n);
            let fast = dft(&x, false);
            let slow = direct_dft(&x, false);
            let scale = slow.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
            for (f, s) in fast.iter().zip(slow.iter()) {
                assert!((f - s).norm() < 1e-10 * scale, "n={n}");
            }
        }
    }

    #[test]
    fn round_trip() {
        for n in [8usize, 37, 128, 1000] {
            let x = pseudo_random(n);
            let y = dft(&dft(&x, false), true);
            for (orig, rec) in x.iter().zip(y.iter()) {
                assert!((orig - rec / n as f64).norm() < 1e-12);
            }
        }
    }
}
