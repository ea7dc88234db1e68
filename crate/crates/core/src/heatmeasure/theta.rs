//! Theta sums, heat-kernel masses on `Z` and Hellinger affinities.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;
const CUT: f64 = 1e-17;

pub(crate) fn check_b(b: f64) -> Result<()> {
    if b.is_finite() && b > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("parameter must be positive and finite, got {b}")))
    }
}

/// `Σ_{n≥1} q^{n²}` for `0 ≤ q < 1`, with `q` given by its logarithm.
fn theta_tail(log_q: f64) -> f64 {
    let mut sum = 0.0;
    let mut n = 1.0f64;
    loop {
        let term = (log_q * n * n).exp();
        if term == 0.0 || term < CUT * sum {
            return sum;
        }
        sum += term;
        n += 1.0;
    }
}

/// `ln Z_b` split as `leading + ln θ`, with `leading = ½ ln(2π/b)` on the
/// Poisson side and `0` on the direct side.
fn log_z_parts(b: f64) -> (f64, f64) {
    if b >= TWO_PI {
        (0.0, (2.0 * theta_tail(-b / 2.0)).ln_1p())
    } else {
        (0.5 * (TWO_PI / b).ln(), (2.0 * theta_tail(-2.0 * PI * PI / b)).ln_1p())
    }
}

/// `Z_b = Σ_n exp(−n²b/2)`.
pub fn partition_function(b: f64) -> Result<f64> {
    Ok(log_partition_function(b)?.exp())
}

pub fn log_partition_function(b: f64) -> Result<f64> {
    check_b(b)?;
    let (lead, corr) = log_z_parts(b);
    Ok(lead + corr)
}

/// `m_b({n}) = exp(−n²b/2) / Z_b`.
pub fn mass(b: f64, n: i64) -> Result<f64> {
    let ln_z = log_partition_function(b)?;
    let nf = n as f64;
    Ok((-nf * nf * b / 2.0 - ln_z).exp())
}

/// Mass of a finite set; repeated entries count once.
pub fn mass_set(b: f64, set: &[i64]) -> Result<f64> {
    let ln_z = log_partition_function(b)?;
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    Ok(s.iter()
        .map(|&n| {
            let nf = n as f64;
            (-nf * nf * b / 2.0 - ln_z).exp()
        })
        .sum())
}

/// Sum of `exp(−n²b/2)` for `n = start, start+1, …` (with `start ≥ 0`).
fn upper_tail(b: f64, start: i64) -> f64 {
    let mut n = start.max(0) as f64;
    if n * b < 0.01 && n > 0.0 {
        // Euler–Maclaurin through the third derivative
        let f = (-n * n * b / 2.0).exp();
        let integral = (PI / (2.0 * b)).sqrt() * libm::erfc(n * (b / 2.0).sqrt());
        let d1 = -n * b * f;
        let d3 = -(n * n * n * b * b * b - 3.0 * n * b * b) * f;
        return integral + f / 2.0 - d1 / 12.0 + d3 / 720.0;
    }
    let mut sum = 0.0;
    loop {
        let term = (-n * n * b / 2.0).exp();
        if term == 0.0 || term < CUT * sum {
            return sum;
        }
        sum += term;
        n += 1.0;
    }
}

/// Unnormalized mass of `{n > hi}`.
fn mass_above(b: f64, hi: i64) -> f64 {
    if hi >= 0 {
        upper_tail(b, hi + 1)
    } else {
        // everything from hi+1 up: negative part plus the nonnegative half
        let ln_z = log_partition_function(b).expect("checked");
        ln_z.exp() - upper_tail(b, -hi)
    }
}

/// `ln m_b([lo, hi] ∩ Z)`; `None` bounds are infinite. Computed through
/// the tail deficit so values near `0` keep full relative accuracy.
pub fn log_mass_interval(b: f64, lo: Option<i64>, hi: Option<i64>) -> Result<f64> {
    let ln_z = log_partition_function(b)?;
    if let (Some(l), Some(h)) = (lo, hi) {
        if l > h {
            return Ok(f64::NEG_INFINITY);
        }
    }
    let above = hi.map_or(0.0, |h| mass_above(b, h));
    let below = lo.map_or(0.0, |l| mass_above(b, -l));
    let deficit = (above + below) / ln_z.exp();
    if deficit < 0.5 {
        Ok((-deficit).ln_1p())
    } else {
        let inside = match (lo, hi) {
            (Some(l), Some(h)) => {
                // terms beyond this radius are below 1e-300 of the peak
                let reach = (1400.0 / b).sqrt() as i64 + 1;
                let (from, to) = (l.max(-reach), h.min(reach));
                if from > to {
                    let nearest = if l > 0 { l } else { h } as f64;
                    return Ok(-nearest * nearest * b / 2.0 - ln_z);
                }
                (from..=to)
                    .map(|n| {
                        let nf = n as f64;
                        (-nf * nf * b / 2.0).exp()
                    })
                    .sum()
            }
            (Some(l), None) => mass_above(b, l - 1),
            (None, Some(h)) => mass_above(b, -h - 1),
            (None, None) => unreachable!("no deficit without bounds"),
        };
        Ok(inside.ln() - ln_z)
    }
}

/// `−ln ρ(k_* m_b, m_b)`.
pub fn neg_log_hellinger_translate(b: f64, k: i64) -> Result<f64> {
    check_b(b)?;
    let kf = k as f64;
    let gaussian = kf * kf * b / 8.0;
    if k % 2 == 0 {
        return Ok(gaussian);
    }
    // ratio (Z_{b/4} − Z_b) / Z_b: the half-integer theta sum over Z_b
    let log_ratio = if b >= TWO_PI {
        let mut odd = 0.0;
        let mut j = 1.0f64;
        loop {
            let term = (-j * j * b / 8.0).exp();
            if term == 0.0 || term < CUT * odd {
                break;
            }
            odd += term;
            j += 2.0;
        }
        (2.0 * odd).ln() - log_partition_function(b)?
    } else {
        // 1 − ratio = 4(q + q⁹ + q²⁵ + …)/θ(q), q = exp(−2π²/b)
        let log_q = -2.0 * PI * PI / b;
        let mut odd = 0.0;
        let mut j = 1.0f64;
        loop {
            let term = (log_q * j * j).exp();
            if term == 0.0 || term < CUT * odd {
                break;
            }
            odd += term;
            j += 2.0;
        }
        let theta = 1.0 + 2.0 * theta_tail(log_q);
        (-4.0 * odd / theta).ln_1p()
    };
    Ok(gaussian - log_ratio)
}

/// `ρ(k_* m_b, m_b) = Σ_n √(m_b(n−k) m_b(n))`.
pub fn hellinger_translate(b: f64, k: i64) -> Result<f64> {
    Ok((-neg_log_hellinger_translate(b, k)?).exp())
}

/// `−ln ρ(m_a, m_b) = ½(ln Z_a + ln Z_b) − ln Z_{(a+b)/2}`.
pub fn neg_log_hellinger_pair(a: f64, b: f64) -> Result<f64> {
    check_b(a)?;
    check_b(b)?;
    if a == b {
        return Ok(0.0);
    }
    let c = (a + b) / 2.0;
    let (la, ca) = log_z_parts(a);
    let (lb, cb) = log_z_parts(b);
    let (lc, cc) = log_z_parts(c);
    let value = if a < TWO_PI && b < TWO_PI {
        // the leading parts combine to ½ ln cosh(½ ln(a/b))
        0.5 * (0.5 * (a / b).ln()).cosh().ln() + 0.5 * (ca + cb) - cc
    } else {
        0.5 * (la + ca + lb + cb) - (lc + cc)
    };
    Ok(value.max(0.0))
}

pub fn hellinger_pair(a: f64, b: f64) -> Result<f64> {
    Ok((-neg_log_hellinger_pair(a, b)?).exp())
}
