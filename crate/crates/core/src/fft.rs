//! Complex FFT plans: iterative radix-2 for powers of two, Bluestein's
//! chirp-z convolution for every other length.
//!
//! Plans are immutable once built and can be shared between threads.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

#[derive(Debug, Clone)]
enum Algorithm {
    Radix2 { twiddles: Vec<Complex64>, reversed: Vec<u32> },
    Bluestein { chirp: Vec<Complex64>, kernel: Vec<Complex64>, inner: Box<Fft> },
}

/// A reusable transform of fixed length.
#[derive(Debug, Clone)]
pub struct Fft {
    len: usize,
    algorithm: Algorithm,
}

impl Fft {
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "FFT length must be positive");
        if len.is_power_of_two() {
            Self { len, algorithm: radix2(len) }
        } else {
            Self { len, algorithm: bluestein(len) }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `X_k = Σ_j x_j e^{−2πi jk/n}`, unnormalized.
    pub fn forward(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.len);
        match &self.algorithm {
            Algorithm::Radix2 { twiddles, reversed } => radix2_in_place(buf, twiddles, reversed),
            Algorithm::Bluestein { chirp, kernel, inner } => {
                let m = inner.len();
                let mut work = vec![Complex64::new(0.0, 0.0); m];
                for (j, (w, x)) in work.iter_mut().zip(buf.iter()).enumerate() {
                    *w = *x * chirp[j];
                }
                inner.forward(&mut work);
                for (w, k) in work.iter_mut().zip(kernel) {
                    *w *= k;
                }
                inner.inverse(&mut work);
                let scale = 1.0 / m as f64;
                for (k, x) in buf.iter_mut().enumerate() {
                    *x = work[k] * chirp[k] * scale;
                }
            }
        }
    }

    /// `x_j = Σ_k X_k e^{+2πi jk/n}`, unnormalized.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        for x in buf.iter_mut() {
            *x = x.conj();
        }
        self.forward(buf);
        for x in buf.iter_mut() {
            *x = x.conj();
        }
    }

    /// Origin-centred transform `Y_k = Σ_j e^{−2πi (k−n/2)(j−n/2)/n} x_j`.
    /// Requires an even length.
    pub fn centered_forward(&self, buf: &mut [Complex64]) {
        self.centered(buf, false);
    }

    /// Origin-centred transform with the conjugate kernel, unnormalized.
    pub fn centered_inverse(&self, buf: &mut [Complex64]) {
        self.centered(buf, true);
    }

    fn centered(&self, buf: &mut [Complex64], inverse: bool) {
        debug_assert!(self.len.is_multiple_of(2));
        alternate_signs(buf);
        if inverse {
            self.inverse(buf);
        } else {
            self.forward(buf);
        }
        alternate_signs(buf);
        if (self.len / 2) % 2 == 1 {
            for x in buf.iter_mut() {
                *x = -*x;
            }
        }
    }
}

fn alternate_signs(buf: &mut [Complex64]) {
    for x in buf.iter_mut().skip(1).step_by(2) {
        *x = -*x;
    }
}

fn radix2(len: usize) -> Algorithm {
    let bits = len.trailing_zeros();
    let reversed = (0..len as u32)
        .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (32 - bits) })
        .collect();
    let twiddles = (0..len / 2)
        .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / len as f64))
        .collect();
    Algorithm::Radix2 { twiddles, reversed }
}

fn radix2_in_place(buf: &mut [Complex64], twiddles: &[Complex64], reversed: &[u32]) {
    let n = buf.len();
    for i in 0..n {
        let j = reversed[i] as usize;
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut half = 1;
    while half < n {
        let stride = n / (2 * half);
        for start in (0..n).step_by(2 * half) {
            for k in 0..half {
                let t = twiddles[k * stride] * buf[start + k + half];
                let u = buf[start + k];
                buf[start + k] = u + t;
                buf[start + k + half] = u - t;
            }
        }
        half *= 2;
    }
}

fn bluestein(len: usize) -> Algorithm {
    let m = (2 * len - 1).next_power_of_two();
    // j² mod 2n keeps the chirp angle small for large j
    let modulus = 2 * len as u64;
    let chirp: Vec<Complex64> = (0..len as u64)
        .map(|j| {
            let q = (j * j) % modulus;
            Complex64::from_polar(1.0, -PI * q as f64 / len as f64)
        })
        .collect();
    let mut kernel = vec![Complex64::new(0.0, 0.0); m];
    kernel[0] = chirp[0].conj();
    for j in 1..len {
        kernel[j] = chirp[j].conj();
        kernel[m - j] = chirp[j].conj();
    }
    let inner = Fft::new(m);
    inner.forward(&mut kernel);
    Algorithm::Bluestein { chirp, kernel, inner: Box::new(inner) }
}
