//! Shared numeric helpers.

/// Relative tolerance used for all strict-inequality boundary bands.
pub const BAND_TOL: f64 = 1e-12;

/// Three-way comparison with a relative equality band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Below,
    Boundary,
    Above,
}

/// Compares `x` against `y`, treating |x - y| <= BAND_TOL * (1 + max(|x|,|y|))
/// as a boundary hit.
pub fn band_cmp(x: f64, y: f64) -> Band {
    let scale = 1.0 + libm::fabs(x).max(libm::fabs(y));
    if libm::fabs(x - y) <= BAND_TOL * scale {
        Band::Boundary
    } else if x < y {
        Band::Below
    } else {
        Band::Above
    }
}

/// Neumaier compensated summation.
pub fn compensated_sum(terms: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &t in terms {
        let s = sum + t;
        if libm::fabs(sum) >= libm::fabs(t) {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Ordinary least squares fit of y = a + b x; returns (intercept, slope, r_squared).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for i in 0..n {
        let dx = xs[i] - mx;
        let dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Some((intercept, slope, r2))
}
