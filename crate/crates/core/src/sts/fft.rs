//! Power-of-two FFT and an arbitrary-length DFT built on it via the
//! chirp-z (Bluestein) identity `jk = (j^2 + k^2 - (k - j)^2) / 2`.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Iterative radix-2 decimation-in-time FFT of a fixed power-of-two size.
#[derive(Debug, Clone)]
pub struct Radix2 {
    size: usize,
    twiddles: Vec<Complex64>,
    reversed: Vec<u32>,
}

impl Radix2 {
    pub fn new(size: usize) -> Self {
        assert!(size.is_power_of_two(), "radix-2 size must be a power of two");
        let bits = size.trailing_zeros();
        let twiddles = (0..size / 2)
            .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / size as f64))
            .collect();
        let reversed = (0..size as u32)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (32 - bits) })
            .collect();
        Self {
            size,
            twiddles,
            reversed,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// In-place forward transform `X_k = sum_j x_j e^{-2 pi i jk / N}`.
    pub fn forward(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.size);
        for (i, &r) in self.reversed.iter().enumerate() {
            let r = r as usize;
            if i < r {
                buf.swap(i, r);
            }
        }
        let mut half = 1;
        while half < self.size {
            let stride = self.size / (2 * half);
            for chunk in buf.chunks_exact_mut(2 * half) {
                let (lo, hi) = chunk.split_at_mut(half);
                for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let t = *b * self.twiddles[k * stride];
                    *b = *a - t;
                    *a += t;
                }
            }
            half *= 2;
        }
    }

    /// In-place inverse transform, unscaled.
    pub fn inverse_unscaled(&self, buf: &mut [Complex64]) {
        for v in buf.iter_mut() {
            *v = v.conj();
        }
        self.forward(buf);
        for v in buf.iter_mut() {
            *v = v.conj();
        }
    }
}

/// Arbitrary-length DFT plan.
#[derive(Debug, Clone)]
pub struct Bluestein {
    len: usize,
    fft: Radix2,
    /// `e^{-i pi k^2 / len}` for `k < len`.
    chirp: Vec<Complex64>,
    /// Transform of the conjugate chirp filter, pre-scaled by `1 / N`.
    filter: Vec<Complex64>,
}

impl Bluestein {
    pub fn new(len: usize) -> Self {
        assert!(len > 0);
        let size = (2 * len - 1).next_power_of_two();
        let fft = Radix2::new(size);
        let modulus = 2 * len as u64;
        let chirp: Vec<Complex64> = (0..len as u64)
            .map(|k| {
                // k^2 mod 2L keeps the angle argument small and exact
                let q = (k as u128 * k as u128 % modulus as u128) as f64;
                Complex64::from_polar(1.0, -PI * q / len as f64)
            })
            .collect();
        let mut filter = vec![Complex64::new(0.0, 0.0); size];
        filter[0] = chirp[0].conj();
        for k in 1..len {
            filter[k] = chirp[k].conj();
            filter[size - k] = chirp[k].conj();
        }
        fft.forward(&mut filter);
        let scale = 1.0 / size as f64;
        for v in filter.iter_mut() {
            *v *= scale;
        }
        Self {
            len,
            fft,
            chirp,
            filter,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// First `outputs` coefficients of the DFT of the real signal `input`.
    pub fn transform_real(&self, input: impl ExactSizeIterator<Item = f64>, outputs: usize) -> Vec<Complex64> {
        assert_eq!(input.len(), self.len);
        assert!(outputs <= self.len);
        let mut work = vec![Complex64::new(0.0, 0.0); self.fft.size()];
        for ((slot, x), w) in work.iter_mut().zip(input).zip(&self.chirp) {
            *slot = w * x;
        }
        self.convolve(work, outputs)
    }

    pub fn transform(&self, input: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(input.len(), self.len);
        let mut work = vec![Complex64::new(0.0, 0.0); self.fft.size()];
        for ((slot, x), w) in work.iter_mut().zip(input).zip(&self.chirp) {
            *slot = x * w;
        }
        self.convolve(work, self.len)
    }

    fn convolve(&self, mut work: Vec<Complex64>, outputs: usize) -> Vec<Complex64> {
        self.fft.forward(&mut work);
        for (v, f) in work.iter_mut().zip(&self.filter) {
            *v *= f;
        }
        self.fft.inverse_unscaled(&mut work);
        work.truncate(outputs);
        for (v, w) in work.iter_mut().zip(&self.chirp) {
            *v *= w;
        }
        work
    }
}
