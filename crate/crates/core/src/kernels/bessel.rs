//! Modified Bessel function of the second kind, order zero.
//!
//! Power series for `x <= 2`; Steed's continued fraction (the convergent
//! form of the large-argument expansion) above.

use std::f64::consts::PI;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const CROSSOVER: f64 = 2.0;
const MAX_TERMS: usize = 10_000;

/// `K0(x)` for `x > 0`. Returns `+∞` at 0 and NaN for negative input.
pub fn k0(x: f64) -> f64 {
    if x.is_nan() || x < 0.0 {
        f64::NAN
    } else if x == 0.0 {
        f64::INFINITY
    } else if x <= CROSSOVER {
        k0_series(x)
    } else {
        k0_continued_fraction(x)
    }
}

/// The constant part of `K0(a r) = −ln r + c(a) + o(1)` as `r → 0`,
/// i.e. `c(a) = −ln(a/2) − γ`.
pub fn k0_finite_part(a: f64) -> f64 {
    -(0.5 * a).ln() - EULER_GAMMA
}

fn k0_series(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = 1.0; // y^k / (k!)^2
    let mut harmonic = 0.0;
    let mut i0 = 1.0;
    let mut tail = 0.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= y / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += term * harmonic;
        if term * harmonic < 1e-17 * tail {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
}

fn k0_continued_fraction(x: f64) -> f64 {
    // Steed's algorithm for CF2 (Temme 1975) with mu = 0.
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_TERMS {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-16 {
            break;
        }
    }
    let _ = h;
    (PI / (2.0 * x)).sqrt() * (-x).exp() / s
}

#[cfg(test)]
mod tests {
    use super::*;

    /// K0(x) = ∫_0^∞ exp(−x cosh t) dt by the trapezoid rule, which is
    /// spectrally accurate for this doubly-exponentially decaying integrand.
    fn k0_integral_oracle(x: f64) -> f64 {
        let h = 1.0 / 64.0;
        let mut sum = 0.5 * (-x).exp();
        let mut k = 1;
        loop {
            let v = (-x * (k as f64 * h).cosh()).exp();
            sum += v;
            if v < 1e-300 || (v < 1e-20 * sum && k > 64) {
                break;
            }
            k += 1;
        }
        sum * h
    }

    #[test]
    fn matches_integral_representation() {
        for &x in &[1e-6, 0.01, 0.1, 0.5, 1.0, 1.5, 1.999, 2.0, 2.001, 3.0, 5.0, 10.0, 25.0, 60.0] {
            let (v, o) = (k0(x), k0_integral_oracle(x));
            assert!(((v - o) / o).abs() < 1e-10, "x={x}: {v} vs {o}");
        }
    }

    #[test]
    fn reference_values() {
        // 30-digit reference values (mpmath besselk)
        let cases = [
            (1.0, 0.42102443824070833),
            (0.1, 2.4270690247020164),
            (2.0, 0.11389387274953344),
            (5.0, 0.0036910983340425942),
        ];
        for (x, want) in cases {
            assert!(((k0(x) - want) / want).abs() < 1e-12, "x={x}: {} vs {want}", k0(x));
        }
    }

    #[test]
    fn continuous_across_crossover() {
        let below = k0_series(CROSSOVER);
        let above = k0_continued_fraction(CROSSOVER);
        assert!(((below - above) / below).abs() < 1e-13);
    }

    #[test]
    fn small_argument_matches_finite_part() {
        let (a, r) = (0.5, 1e-7);
        assert!((k0(a * r) - (-r.ln() + k0_finite_part(a))).abs() < 1e-12);
    }

    #[test]
    fn edge_inputs() {
        assert!(k0(0.0).is_infinite());
        assert!(k0(-1.0).is_nan());
        assert_eq!(k0(800.0), 0.0);
    }
}
