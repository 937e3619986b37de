//! Linear convolution and correlation of real sequences.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

const DIRECT_LIMIT: usize = 64;

/// Full linear convolution, `len = a.len() + b.len() − 1`.
pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) <= DIRECT_LIMIT {
        convolve_direct(a, b)
    } else {
        convolve_fft(a, b)
    }
}

pub fn convolve_direct(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn convolve_fft(a: &[f64], b: &[f64]) -> Vec<f64> {
    let len = a.len() + b.len() - 1;
    let size = len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let lift = |x: &[f64]| {
        let mut v: Vec<Complex<f64>> = x.iter().map(|&r| Complex::new(r, 0.0)).collect();
        v.resize(size, Complex::new(0.0, 0.0));
        v
    };
    let (mut fa, mut fb) = (lift(a), lift(b));
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inv.process(&mut fa);
    let scale = 1.0 / size as f64;
    fa[..len].iter().map(|c| c.re * scale).collect()
}

/// `out_i = Σ_j a_j b_{i+j+offset}` for `i in 0..len`, with `b` zero outside its range.
pub fn correlate(a: &[f64], b: &[f64], offset: isize, len: usize) -> Vec<f64> {
    let rev: Vec<f64> = a.iter().rev().cloned().collect();
    let c = convolve(&rev, b);
    let shift = offset + a.len() as isize - 1;
    (0..len)
        .map(|i| {
            let q = i as isize + shift;
            if q >= 0 && (q as usize) < c.len() {
                c[q as usize]
            } else {
                0.0
            }
        })
        .collect()
}

/// Direct evaluation of [`correlate`] at the listed output indices only.
pub fn correlate_at(a: &[f64], b: &[f64], offset: isize, indices: impl IntoIterator<Item = usize>) -> Vec<f64> {
    indices
        .into_iter()
        .map(|i| {
            let base = i as isize + offset;
            let lo = (-base).max(0) as usize;
            let hi = (b.len() as isize - base).clamp(0, a.len() as isize) as usize;
            (lo..hi).map(|j| a[j] * b[(j as isize + base) as usize]).sum()
        })
        .collect()
}
