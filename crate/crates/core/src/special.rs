//! Special functions and cancellation-free series used by the closed forms.

/// coth(x) for x > 0. `x = +∞` (zero temperature) gives exactly 1.
pub fn coth(x: f64) -> f64 {
    if x > 20.0 {
        // tanh already rounds to 1 here; keep the leading correction
        1.0 + 2.0 * (-2.0 * x).exp()
    } else if x < 1e-5 {
        1.0 / x + x / 3.0
    } else {
        1.0 / x.tanh()
    }
}

/// Thermal occupation factor coth(ħω / 2k_BT); 1 at T = 0.
pub fn occupation(hbar_omega: f64, kt: f64) -> f64 {
    if kt <= 0.0 {
        1.0
    } else {
        coth(hbar_omega / (2.0 * kt))
    }
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// `[(1 + x/2)e^{−x} + (−1 + x/2)] / x³`, the homogeneous-sphere CSL
/// bracket divided by its leading power. Tends to 1/12 as x → 0.
pub fn csl_sphere_bracket(x: f64) -> f64 {
    if x < 1.0 {
        // Σ_{k≥3} (−1)^k (2−k) x^{k−3} / (2·k!)
        let mut sum = 0.0;
        let mut fact = 6.0; // 3!
        let mut pow = 1.0;
        for k in 3..40 {
            if k > 3 {
                fact *= k as f64;
                pow *= x;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let term = sign * (2.0 - k as f64) * pow / (2.0 * fact);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        ((1.0 + 0.5 * x) * (-x).exp() + (-1.0 + 0.5 * x)) / x.powi(3)
    }
}

/// `Σ_k (−1)^k (2k+1) y^{2k} / (k!(2k+3))`: the DP cross term for
/// d = 2yR_D in units of Għm²/(4√π R_D³). Equals 1/3 at y = 0.
pub fn dp_cross_series(y: f64) -> f64 {
    let y2 = y * y;
    let mut sum = 0.0;
    let mut pow_over_fact = 1.0; // y^{2k}/k!
    for k in 0..80 {
        if k > 0 {
            pow_over_fact *= y2 / k as f64;
        }
        let kf = k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * (2.0 * kf + 1.0) / (2.0 * kf + 3.0) * pow_over_fact;
        sum += term;
        if k > 2 && term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}
