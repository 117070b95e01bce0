//! Benchmark fixtures shared by the criterion targets.

use schurdist::quantum::Spectrum;

/// A fixed, non-degenerate spectrum of rank `d`.
pub fn geometric_spectrum(d: usize) -> Spectrum {
    let raw: Vec<f64> = (0..d).map(|i| 0.6f64.powi(i as i32)).collect();
    let total: f64 = raw.iter().sum();
    Spectrum::new(raw.iter().map(|x| x / total).collect()).expect("valid spectrum")
}
