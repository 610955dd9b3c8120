//! Special functions needed by the constants and quadrature layers:
//! the gamma function and the regularized incomplete beta function.
//!
//! Both are self-contained double-precision implementations. Gamma uses the
//! Lanczos approximation (g = 7, 9 terms) with the reflection formula for
//! the left half-plane; the incomplete beta uses the standard continued
//! fraction evaluated by the modified Lentz method.

use crate::{Error, Result};

const LANCZOS_G: f64 = 7.0;
// the standard g=7, n=9 table; digits kept verbatim
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real x. Poles at 0, -1, -2, … return an error.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::param("x", "gamma argument must be finite"));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::param("x", format!("gamma pole at {x}")));
    }
    if x < 0.5 {
        // reflection: Γ(x) Γ(1-x) = π / sin(πx)
        return Ok(std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x)?));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    Ok((2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::param("x", "ln_gamma needs x > 0"));
    }
    if x < 0.5 {
        return Ok(gamma(x)?.ln());
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln())
}

/// Complete beta function B(p, q) = Γ(p)Γ(q)/Γ(p+q).
pub fn beta(p: f64, q: f64) -> Result<f64> {
    if p <= 0.0 || q <= 0.0 {
        return Err(Error::param("p,q", "beta needs positive arguments"));
    }
    Ok((ln_gamma(p)? + ln_gamma(q)? - ln_gamma(p + q)?).exp())
}

/// Regularized incomplete beta I_x(p, q) for p, q > 0 and x ∈ [0, 1].
pub fn incomplete_beta(x: f64, p: f64, q: f64) -> Result<f64> {
    if p <= 0.0 || q <= 0.0 {
        return Err(Error::param("p,q", "incomplete_beta needs positive p, q"));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::param("x", "incomplete_beta needs x in [0, 1]"));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(x);
    }
    // prefactor x^p (1-x)^q / (p B(p,q))
    let ln_front = p * x.ln() + q * (1.0 - x).ln() + ln_gamma(p + q)? - ln_gamma(p)? - ln_gamma(q)?;
    // the continued fraction converges fastest for x < (p+1)/(p+q+2);
    // otherwise use the symmetry I_x(p,q) = 1 - I_{1-x}(q,p)
    if x < (p + 1.0) / (p + q + 2.0) {
        Ok(ln_front.exp() * beta_cf(x, p, q) / p)
    } else {
        Ok(1.0 - ln_front.exp() * beta_cf(1.0 - x, q, p) / q)
    }
}

// Continued fraction for the incomplete beta, modified Lentz iteration.
fn beta_cf(x: f64, p: f64, q: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-15;
    let qab = p + q;
    let qap = p + 1.0;
    let qam = p - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..300 {
        let m = m as f64;
        let m2 = 2.0 * m;
        // even step
        let aa = m * (q - m) * x / ((qam + m2) * (p + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        // odd step
        let aa = -(p + m) * (qab + m) * x / ((p + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}
