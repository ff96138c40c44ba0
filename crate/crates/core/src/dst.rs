//! Temporal eigenvector transform.
//!
//! The columns of `C` are the generalized eigenvectors of the temporal pencil,
//! `C[i][k] = sin((pi/2 + k pi) i / N)` for `i = 1..=N`, `k = 0..N`. Applying
//! `C` is the type-II discrete sine transform without the customary factor two.
//! Its inverse follows from the discrete orthogonality
//! `C^T W C = (N/2) I` with `W = diag(1, ..., 1, 1/2)`, i.e.
//! `C^{-1} = (2/N) C^T W`.
//!
//! Both directions are evaluated through one complex FFT of length `4N`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fft::Fft;

/// Precomputed FFT plan for transforms of one length.
#[derive(Debug, Clone)]
pub struct DstPlan {
    n: usize,
    fft: Fft,
}

/// Reusable buffers for [`DstPlan`] applications.
#[derive(Debug, Clone)]
pub struct DstScratch {
    buf: Vec<Complex64>,
    fft: Vec<Complex64>,
}

impl DstPlan {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "transform length must be positive");
        Self {
            n,
            fft: Fft::new(4 * n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn scratch(&self) -> DstScratch {
        DstScratch {
            buf: vec![Complex64::new(0.0, 0.0); self.fft.len()],
            fft: vec![Complex64::new(0.0, 0.0); self.fft.scratch_len()],
        }
    }

    /// In-place `x <- C x`.
    pub fn forward(&self, x: &mut [f64], s: &mut DstScratch) {
        let n = self.n;
        assert_eq!(x.len(), n);
        let z = &mut s.buf;
        z.fill(Complex64::new(0.0, 0.0));
        for (k, &v) in x.iter().enumerate() {
            z[2 * k + 1].re = v;
            z[4 * n - 2 * k - 1].re = -v;
        }
        self.fft.forward(z, &mut s.fft);
        for (i, out) in x.iter_mut().enumerate() {
            *out = -0.5 * z[i + 1].im;
        }
    }

    /// In-place `x <- C^{-1} x`.
    pub fn inverse(&self, x: &mut [f64], s: &mut DstScratch) {
        let n = self.n;
        assert_eq!(x.len(), n);
        let z = &mut s.buf;
        z.fill(Complex64::new(0.0, 0.0));
        for (i, &v) in x.iter().enumerate() {
            z[i + 1].re = v;
        }
        z[n].re *= 0.5;
        self.fft.forward(z, &mut s.fft);
        let scale = 2.0 / n as f64;
        for (l, out) in x.iter_mut().enumerate() {
            *out = -scale * z[2 * l + 1].im;
        }
    }
}

/// `w_i = sum_k sin((pi/2 + k pi) i / N) v_k` for `i = 1..=N` (returned 0-based).
pub fn dst2(v: &[f64]) -> Vec<f64> {
    let plan = DstPlan::new(v.len());
    let mut out = v.to_vec();
    plan.forward(&mut out, &mut plan.scratch());
    out
}

/// Inverse of [`dst2`].
pub fn idst2(w: &[f64]) -> Vec<f64> {
    let plan = DstPlan::new(w.len());
    let mut out = w.to_vec();
    plan.inverse(&mut out, &mut plan.scratch());
    out
}
