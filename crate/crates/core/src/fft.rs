//! Complex FFT for arbitrary lengths: iterative radix-2 for powers of two and
//! Bluestein's chirp-z algorithm otherwise.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::math::sin_cos;

#[derive(Debug, Clone)]
pub(crate) struct Fft {
    len: usize,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Radix2(Radix2),
    Bluestein {
        inner: Radix2,
        chirp: Vec<Complex64>,
        kernel_hat: Vec<Complex64>,
    },
}

impl Fft {
    /// Forward transform `X_k = sum_n x_n exp(-2 pi i n k / len)`.
    pub(crate) fn new(len: usize) -> Self {
        assert!(len > 0, "FFT length must be positive");
        if len.is_power_of_two() {
            return Self {
                len,
                kind: Kind::Radix2(Radix2::new(len)),
            };
        }
        let m = (2 * len - 1).next_power_of_two();
        let inner = Radix2::new(m);
        // chirp_n = exp(-i pi n^2 / len); n^2 reduced mod 2 len keeps the angle small.
        let chirp: Vec<Complex64> = (0..len)
            .map(|n| {
                let q = (n as u128 * n as u128 % (2 * len as u128)) as f64;
                let (s, c) = sin_cos(-PI * q / len as f64);
                Complex64::new(c, s)
            })
            .collect();
        let mut kernel = vec![Complex64::new(0.0, 0.0); m];
        kernel[0] = chirp[0].conj();
        for n in 1..len {
            kernel[n] = chirp[n].conj();
            kernel[m - n] = chirp[n].conj();
        }
        inner.forward(&mut kernel);
        Self {
            len,
            kind: Kind::Bluestein {
                inner,
                chirp,
                kernel_hat: kernel,
            },
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    /// Scratch length required by [`Fft::forward`].
    pub(crate) fn scratch_len(&self) -> usize {
        match &self.kind {
            Kind::Radix2(_) => 0,
            Kind::Bluestein { inner, .. } => inner.len,
        }
    }

    pub(crate) fn forward(&self, data: &mut [Complex64], scratch: &mut [Complex64]) {
        debug_assert_eq!(data.len(), self.len);
        match &self.kind {
            Kind::Radix2(r) => r.forward(data),
            Kind::Bluestein {
                inner,
                chirp,
                kernel_hat,
            } => {
                let m = inner.len;
                let buf = &mut scratch[..m];
                for (b, (x, w)) in buf.iter_mut().zip(data.iter().zip(chirp)) {
                    *b = x * w;
                }
                for b in buf[self.len..].iter_mut() {
                    *b = Complex64::new(0.0, 0.0);
                }
                inner.forward(buf);
                for (b, k) in buf.iter_mut().zip(kernel_hat) {
                    *b *= k;
                }
                inner.inverse_unnormalized(buf);
                let scale = 1.0 / m as f64;
                for (x, (b, w)) in data.iter_mut().zip(buf.iter().zip(chirp)) {
                    *x = b * w * scale;
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Radix2 {
    len: usize,
    twiddles: Vec<Complex64>,
}

impl Radix2 {
    fn new(len: usize) -> Self {
        debug_assert!(len.is_power_of_two());
        let twiddles = (0..len / 2)
            .map(|k| {
                let (s, c) = sin_cos(-2.0 * PI * k as f64 / len as f64);
                Complex64::new(c, s)
            })
            .collect();
        Self { len, twiddles }
    }

    fn forward(&self, data: &mut [Complex64]) {
        self.run(data, false);
    }

    fn inverse_unnormalized(&self, data: &mut [Complex64]) {
        self.run(data, true);
    }

    fn run(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.len;
        if n == 1 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if j > i {
                data.swap(i, j);
            }
        }
        let mut size = 2;
        while size <= n {
            let half = size / 2;
            let step = n / size;
            for start in (0..n).step_by(size) {
                for k in 0..half {
                    let mut w = self.twiddles[k * step];
                    if inverse {
                        w = w.conj();
                    }
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            size *= 2;
        }
    }
}
