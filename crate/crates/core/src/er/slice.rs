use rand::Rng;

/// Univariate slice sampler with stepping-out and shrinkage.
///
/// `log_f` may return `-inf` outside the support; `x0` must have finite density.
pub fn slice_sample<R: Rng + ?Sized>(
    x0: f64,
    log_f: impl Fn(f64) -> f64,
    width: f64,
    max_steps: usize,
    rng: &mut R,
) -> f64 {
    let f0 = log_f(x0);
    debug_assert!(f0.is_finite(), "slice sampler started at zero density");
    let level = f0 + rng.random::<f64>().ln();
    let mut lo = x0 - width * rng.random::<f64>();
    let mut hi = lo + width;
    let mut j = (max_steps as f64 * rng.random::<f64>()).floor() as usize;
    let mut k = max_steps.saturating_sub(1) - j.min(max_steps.saturating_sub(1));
    while j > 0 && log_f(lo) > level {
        lo -= width;
        j -= 1;
    }
    while k > 0 && log_f(hi) > level {
        hi += width;
        k -= 1;
    }
    loop {
        let x = lo + (hi - lo) * rng.random::<f64>();
        if log_f(x) > level {
            return x;
        }
        if x < x0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo < 1e-300 {
            return x0;
        }
    }
}
