//! Numerical evaluation of the continuum scaling functions.
//!
//! In the joint limit `n → ∞`, `i = r n^{1/4}`, the geodesic statistics are
//! governed by integrals of closed-form brackets in `ξ`, built from
//! `c = cosh(a)`, `c̃ = cos(a)`, `s = sinh(a)`, `s̃ = sin(a)` with
//! `a = r √(3ξ)` and damped by `e^{-ξ²}`:
//!
//! - `Φ(r)`: fraction of vertices within rescaled distance `r`;
//! - `ρ(r) = Φ'(r)`: density of vertices (and of rescaled geodesics);
//! - `σ(r)`: density of exceptional points (endpoints of two strongly
//!   avoiding geodesics);
//! - `λ(r)/σ(r)`: area correlation `⟨ω₁ω₂⟩` of the two domains such a pair
//!   bounds;
//! - `θ(r)`: the `n^{-1/4}` coefficient of the weak-pair area correlation.
//!
//! The brackets all degenerate at `a → 0` where `(cosh a - cos a)² ≈ a⁴`
//! cancels catastrophically; below a fixed threshold every bracket switches
//! to its Taylor expansion (exact rational coefficients, truncated far below
//! `f64` precision at the crossover).

use crate::error::{Error, Result};
use num_complex::Complex64;

const SQRT_PI: f64 = 1.772453850905516;

// --- Taylor fallbacks (coefficients of the small-a expansions) ---

const HPHI: [f64; 45] = [0.16666666666666666, 0.0, 0.0, 0.0, -0.0013227513227513227, 0.0, 0.0, 0.0, 6.012506012506012e-06, 0.0, 0.0, 0.0, -2.2268540787059307e-08, 0.0, 0.0, 0.0, 7.473308413784235e-11, 0.0, 0.0, 0.0, -2.3693119364211676e-13, 0.0, 0.0, 0.0, 7.23908001716115e-16, 0.0, 0.0, 0.0, -2.1551717127878347e-18, 0.0, 0.0, 0.0, 6.294168101885122e-21, 0.0, 0.0, 0.0, -1.8112009601680234e-23, 0.0, 0.0, 0.0, 5.150973199893502e-26, 0.0, 0.0, 0.0, -1.4509701072562504e-28];
const HRHO: [f64; 44] = [0.0, 0.0, 0.0, 0.005291005291005291, 0.0, 0.0, 0.0, -4.81000481000481e-05, 0.0, 0.0, 0.0, 2.672224894447117e-07, 0.0, 0.0, 0.0, -1.1957293462054776e-09, 0.0, 0.0, 0.0, 4.738623872842335e-12, 0.0, 0.0, 0.0, -1.7373792041186757e-14, 0.0, 0.0, 0.0, 6.034480795805938e-17, 0.0, 0.0, 0.0, -2.014133792603239e-19, 0.0, 0.0, 0.0, 6.520323456604884e-22, 0.0, 0.0, 0.0, -2.060389279957401e-24, 0.0, 0.0, 0.0, 6.384268471927501e-27];
const HSIGMA: [f64; 45] = [0.010582010582010581, 0.0, 0.0, 0.0, 8.01667468334135e-05, 0.0, 0.0, 0.0, -4.008337341670675e-06, 0.0, 0.0, 0.0, 5.2921115866545286e-08, 0.0, 0.0, 0.0, -4.5419044766923277e-10, 0.0, 0.0, 0.0, 3.0611031575847003e-12, 0.0, 0.0, 0.0, -1.7602595794284626e-14, 0.0, 0.0, 0.0, 9.039163586332973e-17, 0.0, 0.0, 0.0, -4.263355590279973e-19, 0.0, 0.0, 0.0, 1.88178229564629e-21, 0.0, 0.0, 0.0, -7.875391739072467e-24, 0.0, 0.0, 0.0, 3.1550599066764895e-26];
const LBIG: [f64; 45] = [0.0, 0.0, 0.0, 0.0, 0.11428571428571428, 0.0, 0.0, 0.0, -0.005541125541125541, 0.0, 0.0, 0.0, 0.00010945164686661285, 0.0, 0.0, 0.0, -1.3560825394330726e-06, 0.0, 0.0, 0.0, 1.2559527742466446e-08, 0.0, 0.0, 0.0, -9.526211107741398e-11, 0.0, 0.0, 0.0, 6.245430876706393e-13, 0.0, 0.0, 0.0, -3.663911676969739e-15, 0.0, 0.0, 0.0, 1.969295429807476e-17, 0.0, 0.0, 0.0, -9.861682572130511e-20, 0.0, 0.0, 0.0, 4.65844948881523e-22];
const GHAT0_RE: [f64; 45] = [0.03333333333333333, 0.0, 0.0, 0.0, -0.00015873015873015873, 0.0, 0.0, 0.0, 6.087387039767992e-07, 0.0, 0.0, 0.0, -2.082619574060595e-09, 0.0, 0.0, 0.0, 6.681196641970366e-12, 0.0, 0.0, 0.0, -2.0576695447111714e-14, 0.0, 0.0, 0.0, 6.161166040032493e-17, 0.0, 0.0, 0.0, -1.8071548861210015e-19, 0.0, 0.0, 0.0, 5.217811871719142e-22, 0.0, 0.0, 0.0, -1.4879434467394222e-24, 0.0, 0.0, 0.0, 4.2006802805516256e-27, 0.0, 0.0, 0.0, -1.176112069574812e-29];
const GHAT0_IM: [f64; 43] = [0.0, 0.0, 0.002380952380952381, 0.0, 0.0, 0.0, -1.0020843354176688e-05, 0.0, 0.0, 0.0, 3.5972258194480415e-08, 0.0, 0.0, 0.0, -1.1869372186598492e-10, 0.0, 0.0, 0.0, 3.7232044715189773e-13, 0.0, 0.0, 0.0, -1.1292964826771394e-15, 0.0, 0.0, 0.0, 3.344231968119054e-18, 0.0, 0.0, 0.0, -9.72735070291337e-21, 0.0, 0.0, 0.0, 2.7902285062047924e-23, 0.0, 0.0, 0.0, -7.914910038860748e-26, 0.0, 0.0, 0.0, 2.2248208311262504e-28];
const GHAT1_RE: [f64; 44] = [0.0, 0.0, 0.0, -0.0006349206349206349, 0.0, 0.0, 0.0, 4.869909631814394e-06, 0.0, 0.0, 0.0, -2.499143488872714e-08, 0.0, 0.0, 0.0, 1.0689914627152586e-10, 0.0, 0.0, 0.0, -4.115339089422343e-13, 0.0, 0.0, 0.0, 1.4786798496077983e-15, 0.0, 0.0, 0.0, -5.060033681138804e-18, 0.0, 0.0, 0.0, 1.6696997989501256e-20, 0.0, 0.0, 0.0, -5.35659640826192e-23, 0.0, 0.0, 0.0, 1.6802721122206504e-25, 0.0, 0.0, 0.0, -5.174893106129173e-28];
const GHAT1_IM: [f64; 42] = [0.0, 0.004761904761904762, 0.0, 0.0, 0.0, -6.012506012506013e-05, 0.0, 0.0, 0.0, 3.5972258194480415e-07, 0.0, 0.0, 0.0, -1.661712106123789e-09, 0.0, 0.0, 0.0, 6.70176804873416e-12, 0.0, 0.0, 0.0, -2.4844522618897063e-14, 0.0, 0.0, 0.0, 8.69500311710954e-17, 0.0, 0.0, 0.0, -2.918205210874011e-19, 0.0, 0.0, 0.0, 9.486776921096294e-22, 0.0, 0.0, 0.0, -3.007665814767084e-24, 0.0, 0.0, 0.0, 9.344247490730252e-27];
const GHAT2_RE: [f64; 43] = [0.0, 0.0, -0.0019047619047619048, 0.0, 0.0, 0.0, 3.4089367422700756e-05, 0.0, 0.0, 0.0, -2.749057837759985e-07, 0.0, 0.0, 0.0, 1.603487194072888e-09, 0.0, 0.0, 0.0, -7.81914426990245e-12, 0.0, 0.0, 0.0, 3.400963654097936e-14, 0.0, 0.0, 0.0, -1.366209093907477e-16, 0.0, 0.0, 0.0, 5.176069376745389e-19, 0.0, 0.0, 0.0, -1.874808742891672e-21, 0.0, 0.0, 0.0, 6.553061237660536e-24, 0.0, 0.0, 0.0, -2.2252040356355443e-26];
const GHAT2_IM: [f64; 45] = [0.004761904761904762, 0.0, 0.0, 0.0, -0.00030062530062530064, 0.0, 0.0, 0.0, 3.2375032375032376e-06, 0.0, 0.0, 0.0, -2.1602257379609257e-08, 0.0, 0.0, 0.0, 1.1393005682848072e-10, 0.0, 0.0, 0.0, -5.217349749968384e-13, 0.0, 0.0, 0.0, 2.173750779277385e-15, 0.0, 0.0, 0.0, -8.462795111534632e-18, 0.0, 0.0, 0.0, 3.1306363839617773e-20, 0.0, 0.0, 0.0, -1.112836351463821e-22, 0.0, 0.0, 0.0, 3.8311414711994034e-25, 0.0, 0.0, 0.0, -1.2847483784359034e-27];
const GHAT3_RE: [f64; 42] = [0.0, -0.0038095238095238095, 0.0, 0.0, 0.0, 0.00020453620453620452, 0.0, 0.0, 0.0, -2.7490578377599854e-06, 0.0, 0.0, 0.0, 2.244882071702043e-08, 0.0, 0.0, 0.0, -1.4074459685824413e-10, 0.0, 0.0, 0.0, 7.482120039015459e-13, 0.0, 0.0, 0.0, -3.5521436441594406e-15, 0.0, 0.0, 0.0, 1.5528208130236168e-17, 0.0, 0.0, 0.0, -6.374349725831685e-20, 0.0, 0.0, 0.0, 2.490163270311004e-22, 0.0, 0.0, 0.0, -9.345856949669287e-25];
const GHAT3_IM: [f64; 44] = [0.0, 0.0, 0.0, -0.0012025012025012026, 0.0, 0.0, 0.0, 2.59000259000259e-05, 0.0, 0.0, 0.0, -2.592270885553111e-07, 0.0, 0.0, 0.0, 1.8228809092556914e-09, 0.0, 0.0, 0.0, -1.0434699499936768e-11, 0.0, 0.0, 0.0, 5.217001870265724e-14, 0.0, 0.0, 0.0, -2.369582631229697e-16, 0.0, 0.0, 0.0, 1.0018036428677687e-18, 0.0, 0.0, 0.0, -4.0062108652697565e-21, 0.0, 0.0, 0.0, 1.5324565884797612e-23, 0.0, 0.0, 0.0, -5.652892865117974e-26];
const V2_RE: [f64; 45] = [4.0, 0.0, 0.0, 0.0, 0.06666666666666667, 0.0, 0.0, 0.0, -0.0011111111111111111, 0.0, 0.0, 0.0, 7.44013971527199e-06, 0.0, 0.0, 0.0, -3.644584254606041e-08, 0.0, 0.0, 0.0, 1.5233128343692435e-10, 0.0, 0.0, 0.0, -5.784337720132515e-13, 0.0, 0.0, 0.0, 2.0595897905251475e-15, 0.0, 0.0, 0.0, -7.002725183718881e-18, 0.0, 0.0, 0.0, 2.2997022693873257e-20, 0.0, 0.0, 0.0, -7.350440626892746e-23, 0.0, 0.0, 0.0, 2.2989177535382536e-25];
const V2_IM: [f64; 43] = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.010582010582010581, 0.0, 0.0, 0.0, -9.62000962000962e-05, 0.0, 0.0, 0.0, 5.344449788894234e-07, 0.0, 0.0, 0.0, -2.3914586924109553e-09, 0.0, 0.0, 0.0, 9.47724774568467e-12, 0.0, 0.0, 0.0, -3.4747584082373515e-14, 0.0, 0.0, 0.0, 1.2068961591611875e-16, 0.0, 0.0, 0.0, -4.028267585206478e-19, 0.0, 0.0, 0.0, 1.3040646913209768e-21, 0.0, 0.0, 0.0, -4.120778559914802e-24];

/// Crossover below which the real brackets use their expansions.
const A_SWITCH: f64 = 1.0;
/// Crossover for the complex family (stronger cancellations there).
const A_SWITCH_G: f64 = 1.5;

fn horner(c: &[f64], a: f64) -> f64 {
    let mut acc = 0.0;
    for &x in c.iter().rev() {
        acc = acc * a + x;
    }
    acc
}

/// `(1 - c c̃) / (c - c̃)²`, the ball-volume bracket.
fn hphi(a: f64) -> f64 {
    if a < A_SWITCH {
        return horner(&HPHI, a);
    }
    let (c, ct) = (a.cosh(), a.cos());
    (1.0 - c * ct) / ((c - ct) * (c - ct))
}

/// The density bracket, the `r`-derivative of the `Φ` bracket divided by
/// `-6 √(3ξ)`.
fn hrho(a: f64) -> f64 {
    if a < A_SWITCH {
        return horner(&HRHO, a);
    }
    let (c, ct, s, st) = (a.cosh(), a.cos(), a.sinh(), a.sin());
    let u = c - ct;
    (2.0 * (1.0 - c * ct) * (s + st) - (c * st - s * ct) * u) / (u * u * u)
}

/// The exceptional-point bracket.
fn hsigma(a: f64) -> f64 {
    if a < A_SWITCH {
        return horner(&HSIGMA, a);
    }
    let (c, ct) = (a.cosh(), a.cos());
    let p = c * ct - 1.0;
    let u = c - ct;
    let u2 = u * u;
    8.0 * p * p * p / (u2 * u2 * u2) + 2.0 * p * (p - 3.0) / (u2 * u2) - 1.0 / u2
}

/// The combined bracket of the strong-pair area integrand
/// (`81 (3 + a d/da)` of the `σ` bracket plus the `s s̃` block).
fn lbig(a: f64) -> f64 {
    if a < A_SWITCH {
        return horner(&LBIG, a);
    }
    let (c, ct, s, st) = (a.cosh(), a.cos(), a.sinh(), a.sin());
    let p = c * ct - 1.0;
    let u = c - ct;
    let pp = s * ct - c * st;
    let up = s + st;
    let u2 = u * u;
    let u4 = u2 * u2;
    let u6 = u4 * u2;
    let hs = 8.0 * p * p * p / u6 + 2.0 * p * (p - 3.0) / u4 - 1.0 / u2;
    let hsp = 8.0 * (3.0 * p * p * pp / u6 - 6.0 * p * p * p * up / (u6 * u))
        + 2.0 * ((2.0 * p - 3.0) * pp / u4 - 4.0 * p * (p - 3.0) * up / (u4 * u))
        + 2.0 * up / (u2 * u);
    let hl2 = 36.0 * p * p * p / (u4 * u4) + 6.0 * p * (2.0 * p - 3.0) / u6 + (p - 3.0) / u4;
    81.0 * (3.0 * hs + a * hsp) + 108.0 * a * a * s * st * hl2
}

/// The rescaled second `ξ`-derivative block: `Ĝ(a)` and its first three
/// `a`-derivatives, where `G(r, ξ) = r³ Ĝ(r √(3ξ))` is the area-marking
/// kernel `(1/2ξ) ∂F/∂ξ`.
fn ghat(a: f64) -> [Complex64; 4] {
    if a < A_SWITCH_G {
        return [
            Complex64::new(horner(&GHAT0_RE, a), horner(&GHAT0_IM, a)),
            Complex64::new(horner(&GHAT1_RE, a), horner(&GHAT1_IM, a)),
            Complex64::new(horner(&GHAT2_RE, a), horner(&GHAT2_IM, a)),
            Complex64::new(horner(&GHAT3_RE, a), horner(&GHAT3_IM, a)),
        ];
    }
    let w = w_derivs(a);
    let t0 = w[0] + a * w[1];
    let t1 = 2.0 * w[1] + a * w[2];
    let t2 = 3.0 * w[2] + a * w[3];
    let t3 = 4.0 * w[3] + a * w[4];
    let omi = Complex64::new(0.75, -0.75); // (3/4)(1 - i)
    let (a2, a3) = (a * a, a * a * a);
    let (a4, a5, a6) = (a * a * a * a, a.powi(5), a.powi(6));
    [
        omi * t0 / a3 + Complex64::new(0.0, 0.5 / a2),
        omi * (t1 / a3 - 3.0 * t0 / a4) + Complex64::new(0.0, -1.0 / a3),
        omi * (t2 / a3 - 6.0 * t1 / a4 + 12.0 * t0 / a5) + Complex64::new(0.0, 3.0 / a4),
        omi * (t3 / a3 - 9.0 * t2 / a4 + 36.0 * t1 / a5 - 60.0 * t0 / a6)
            + Complex64::new(0.0, -12.0 / a5),
    ]
}

/// Derivatives of `W(a) = (sinh a + i sin a)/(cosh a - cos a)` up to order
/// four, via the Leibniz recurrence on `W u = sinh a + i sin a`.
fn w_derivs(a: f64) -> [Complex64; 5] {
    let (c, ct, s, st) = (a.cosh(), a.cos(), a.sinh(), a.sin());
    let u = [c - ct, s + st, c + ct, s - st, c - ct];
    let nn = [
        Complex64::new(s, st),
        Complex64::new(c, ct),
        Complex64::new(s, -st),
        Complex64::new(c, -ct),
        Complex64::new(s, st),
    ];
    const BINOM: [[f64; 5]; 5] = [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0, 0.0],
        [1.0, 3.0, 3.0, 1.0, 0.0],
        [1.0, 4.0, 6.0, 4.0, 1.0],
    ];
    let mut w = [Complex64::new(0.0, 0.0); 5];
    w[0] = nn[0] / u[0];
    for k in 1..5 {
        let mut acc = nn[k];
        for j in 0..k {
            acc -= BINOM[k][j] * w[j] * u[k - j];
        }
        w[k] = acc / u[0];
    }
    w
}

/// `(1 - i) a³ W''(a)`: the rescaled second derivative of the two-point
/// kernel, `F''(r, ξ) = V₂(r √(3ξ)) / (3 r³)`.
fn v2(a: f64) -> Complex64 {
    if a < A_SWITCH_G {
        return Complex64::new(horner(&V2_RE, a), horner(&V2_IM, a));
    }
    let w = w_derivs(a);
    Complex64::new(1.0, -1.0) * a * a * a * w[2]
}

/// `∂^k G / ∂r^k` at fixed `ξ`, assembled from `Ĝ` and its derivatives.
fn g_deriv(r: f64, xi: f64, k: usize) -> Complex64 {
    let a = r * (3.0 * xi).sqrt();
    let g = ghat(a);
    match k {
        0 => r * r * r * g[0],
        1 => r * r * (3.0 * g[0] + a * g[1]),
        2 => r * (6.0 * g[0] + 6.0 * a * g[1] + a * a * g[2]),
        3 => 6.0 * g[0] + 18.0 * a * g[1] + 9.0 * a * a * g[2] + a * a * a * g[3],
        _ => unreachable!(),
    }
}

fn fpp(r: f64, xi: f64) -> Complex64 {
    v2(r * (3.0 * xi).sqrt()) / (3.0 * r * r * r)
}

// --- adaptive Gauss–Kronrod quadrature ---

const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469];

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let err = (200.0 * (kronrod - gauss).abs() * half.abs()).powf(1.5).min(
        (kronrod - gauss).abs() * half.abs(),
    );
    (value, err)
}

/// Adaptive integration on `[a, b]` to absolute tolerance `tol`.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    struct Seg {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }
    let (v0, e0) = gk15(&mut f, a, b);
    let mut segs = vec![Seg { a, b, value: v0, err: e0 }];
    for _ in 0..4000 {
        let total_err: f64 = segs.iter().map(|s| s.err).sum();
        if total_err <= tol {
            break;
        }
        // split the worst segment
        let (wi, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .unwrap();
        let s = segs.swap_remove(wi);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            segs.push(s);
            break; // interval at floating-point resolution
        }
        let (v1, e1) = gk15(&mut f, s.a, mid);
        let (v2, e2) = gk15(&mut f, mid, s.b);
        segs.push(Seg { a: s.a, b: mid, value: v1, err: e1 });
        segs.push(Seg { a: mid, b: s.b, value: v2, err: e2 });
    }
    let value: f64 = segs.iter().map(|s| s.value).sum();
    let err: f64 = segs.iter().map(|s| s.err).sum();
    if err > tol {
        return Err(Error::ToleranceNotReached { achieved: err, requested: tol });
    }
    Ok((value, err))
}

/// Upper integration limit in `ξ`; beyond it `e^{-ξ²}` times any of the
/// bounded brackets is below `1e-26`.
const XI_MAX: f64 = 8.0;

/// `Φ(r)`: limiting fraction of vertices within rescaled distance `r`.
pub fn phi(r: f64, tol: f64) -> Result<f64> {
    assert!(r >= 0.0 && tol > 0.0);
    if r == 0.0 {
        return Ok(0.0);
    }
    let s3 = 3.0f64.sqrt();
    let f = |xi: f64| {
        let a = r * s3 * xi.sqrt();
        xi * xi * (-xi * xi).exp() * (1.0 - 6.0 * hphi(a))
    };
    let (v, _) = integrate(f, 0.0, XI_MAX, tol / 4.0 * SQRT_PI / 4.0)?;
    Ok(4.0 / SQRT_PI * v)
}

/// `ρ(r) = Φ'(r)`: density of vertices at rescaled distance `r`, evaluated
/// from the analytically differentiated integrand.
pub fn rho(r: f64, tol: f64) -> Result<f64> {
    assert!(r > 0.0 && tol > 0.0);
    let s3 = 3.0f64.sqrt();
    let scale = 24.0 * s3 / SQRT_PI;
    let f = |xi: f64| {
        let a = r * s3 * xi.sqrt();
        xi.powf(2.5) * (-xi * xi).exp() * hrho(a)
    };
    let (v, _) = integrate(f, 0.0, XI_MAX, tol / scale)?;
    Ok(scale * v)
}

/// `σ(r)`: density of exceptional points at rescaled distance `r`.
pub fn sigma(r: f64, tol: f64) -> Result<f64> {
    assert!(r > 0.0 && tol > 0.0);
    let s3 = 3.0f64.sqrt();
    let scale = 432.0 / SQRT_PI;
    let f = |xi: f64| {
        let a = r * s3 * xi.sqrt();
        xi.powi(4) * (-xi * xi).exp() * hsigma(a)
    };
    let (v, _) = integrate(f, 0.0, XI_MAX, tol / scale)?;
    Ok(scale * v)
}

/// `λ(r)` and the area correlation `⟨ω₁ω₂⟩ = λ(r)/σ(r)` for the two domains
/// bounded by a strongly avoiding pair reaching distance `r`.
pub fn lambda_ratio(r: f64, tol: f64) -> Result<(f64, f64)> {
    assert!(r > 0.0 && tol > 0.0);
    let s3 = 3.0f64.sqrt();
    let f = |xi: f64| {
        let a = r * s3 * xi.sqrt();
        (-xi * xi).exp() * lbig(a)
    };
    let (v, _) = integrate(f, 0.0, XI_MAX, tol * SQRT_PI)?;
    let lam = v / SQRT_PI;
    let sig = sigma(r, tol)?;
    Ok((lam, lam / sig))
}

/// Mean number of contacts between two weakly avoiding geodesics of
/// rescaled length `r` in maps of `n` faces: `n^{1/4} r / 3`.
pub fn contact_scaling(r: f64, n: usize) -> f64 {
    assert!(r >= 0.0);
    (n as f64).powf(0.25) * r / 3.0
}

/// `θ(r)`: the coefficient of `n^{-1/4}` in the weak-pair area correlation
/// `⟨ω₁ω₂⟩_r`, a double quadrature (an `r'`-convolution inside the
/// `ξ`-integral).
pub fn weak_area_correction(r: f64, tol: f64) -> Result<f64> {
    assert!(r > 0.0 && tol > 0.0);
    let rho_r = rho(r, (tol * 1e-3).min(1e-10))?;
    let scale = 18.0 / (SQRT_PI * rho_r);
    let inner_tol = tol / scale / 50.0;
    let mut f = |xi: f64| {
        let g0 = g_deriv(r, xi, 0);
        let g1 = g_deriv(r, xi, 1);
        let g2 = g_deriv(r, xi, 2);
        let square_term = 2.0 * (g1 * g1 + g0 * g2);
        let conv = integrate(
            |rp| (g_deriv(rp, xi, 0) * g_deriv(r - rp, xi, 3)).im,
            0.0,
            r,
            inner_tol,
        )
        .map(|(v, _)| v)
        .unwrap_or(f64::NAN);
        xi * (-xi * xi).exp() * (square_term.im - 2.0 * conv)
    };
    let (v, _) = integrate(&mut f, 0.0, XI_MAX, tol / scale)?;
    if v.is_nan() {
        return Err(Error::ToleranceNotReached { achieved: f64::NAN, requested: tol });
    }
    Ok(scale * v)
}

/// The first-moment symmetry ratio `⟨ω₁⟩` for strongly avoiding pairs: a
/// ratio of two quadratures that must equal `1/2`.
pub fn omega_first_moment(r: f64, tol: f64) -> Result<f64> {
    let (num, _) = integrate(
        |xi| xi * (-xi * xi).exp() * g_deriv(r, xi, 2).im,
        0.0,
        XI_MAX,
        tol,
    )?;
    let (den, _) = integrate(
        |xi| xi * (-xi * xi).exp() * fpp(r, xi).im,
        0.0,
        XI_MAX,
        tol,
    )?;
    Ok(num / (2.0 * den))
}

/// `σ(r)` recomputed from the squared two-point kernel; an independent
/// route used for verification.
pub fn sigma_second_route(r: f64, tol: f64) -> Result<f64> {
    let scale = 18.0 / SQRT_PI;
    let f = |xi: f64| {
        let v = fpp(r, xi);
        xi * (-xi * xi).exp() * (v * v).im
    };
    let (v, _) = integrate(f, 0.0, XI_MAX, tol / scale)?;
    Ok(scale * v)
}

/// `λ(r)` recomputed from the squared area-marking kernel; an independent
/// route used for verification.
pub fn lambda_second_route(r: f64, tol: f64) -> Result<f64> {
    let scale = 18.0 / SQRT_PI;
    let f = |xi: f64| {
        let g = g_deriv(r, xi, 2);
        xi * (-xi * xi).exp() * (g * g).im
    };
    let (v, _) = integrate(f, 0.0, XI_MAX, tol / scale)?;
    Ok(scale * v)
}

/// Which scaling function a curve holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveTag {
    Phi,
    Rho,
    Sigma,
    Lambda,
    LambdaOverSigma,
    WeakAreaCorrection,
}

/// A numerically evaluated scaling function on an `r`-grid.
#[derive(Clone, Debug)]
pub struct ScalingCurve {
    pub tag: CurveTag,
    pub r: Vec<f64>,
    pub value: Vec<f64>,
    pub error: Vec<f64>,
}

/// Evaluates one scaling function on a uniform grid. Grid points are
/// independent and evaluated in parallel.
pub fn evaluate_curve(
    tag: CurveTag,
    r_min: f64,
    r_max: f64,
    step: f64,
    tol: f64,
) -> Result<ScalingCurve> {
    if !(step > 0.0 && r_max >= r_min && tol > 0.0) {
        return Err(Error::ConfigInvalid("need step > 0, r_max >= r_min, tol > 0".into()));
    }
    let n = ((r_max - r_min) / step).round() as usize + 1;
    let rs: Vec<f64> = (0..n).map(|k| r_min + step * k as f64).collect();
    use rayon::prelude::*;
    let results: Vec<Result<(f64, f64)>> = rs
        .par_iter()
        .map(|&r| {
            let v = match tag {
                CurveTag::Phi => phi(r, tol)?,
                CurveTag::Rho => rho(r, tol)?,
                CurveTag::Sigma => sigma(r, tol)?,
                CurveTag::Lambda => lambda_ratio(r, tol)?.0,
                CurveTag::LambdaOverSigma => lambda_ratio(r, tol)?.1,
                CurveTag::WeakAreaCorrection => weak_area_correction(r, tol)?,
            };
            Ok((v, tol))
        })
        .collect();
    let mut value = Vec::with_capacity(n);
    let mut error = Vec::with_capacity(n);
    for res in results {
        let (v, e) = res?;
        value.push(v);
        error.push(e);
    }
    Ok(ScalingCurve { tag, r: rs, value, error })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-10;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn phi_reference_values() {
        assert!(close(phi(0.5, TOL).unwrap(), 0.006653934181585602, 1e-9));
        assert!(close(phi(1.0, TOL).unwrap(), 0.09731291329838427, 1e-9));
        assert!(close(phi(2.0, TOL).unwrap(), 0.6738171800940213, 1e-9));
        assert!((phi(8.0, TOL).unwrap() - 1.0).abs() < 1e-6);
        assert_eq!(phi(0.0, TOL).unwrap(), 0.0);
    }

    #[test]
    fn rho_reference_values() {
        assert!(close(rho(0.1, TOL).unwrap(), 4.285626624910686e-4, 1e-9));
        assert!(close(rho(1.0, TOL).unwrap(), 0.3539201797594637, 1e-9));
        assert!(close(rho(2.0, TOL).unwrap(), 0.5342702427392026, 1e-9));
    }

    #[test]
    fn rho_is_derivative_of_phi() {
        // Φ(0.3) - Φ(0.1) = ∫ ρ over [0.1, 0.3]
        let lhs = phi(0.3, 1e-12).unwrap() - phi(0.1, 1e-12).unwrap();
        let (rhs, _) = integrate(|r| rho(r, 1e-12).unwrap(), 0.1, 0.3, 1e-11).unwrap();
        assert!((lhs - rhs).abs() < 1e-8, "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn sigma_reference_values() {
        assert!(close(sigma(0.02, TOL).unwrap(), 1.714285761038949, 1e-9));
        assert!(close(sigma(1.0, TOL).unwrap(), 1.717520361405362, 1e-9));
        assert!(close(sigma(2.0, TOL).unwrap(), 0.1453905929171746, 1e-9));
    }

    #[test]
    fn lambda_reference_values() {
        assert!(close(lambda_ratio(0.05, 1e-12).unwrap().0, 1.607136282485795e-6, 1e-7));
        assert!(close(lambda_ratio(1.0, TOL).unwrap().0, 0.142412461841007, 1e-9));
        assert!(close(lambda_ratio(2.0, TOL).unwrap().0, 0.02728823037057329, 1e-9));
    }

    #[test]
    fn ratio_approaches_one_quarter() {
        let grid = [1.0, 2.0, 3.0, 4.0];
        let mut last = 0.0;
        for &r in &grid {
            let (_, ratio) = lambda_ratio(r, 1e-12).unwrap();
            assert!(ratio <= 0.25 + 1e-9, "bound violated at {r}: {ratio}");
            assert!(ratio > last, "monotone approach violated at {r}");
            last = ratio;
        }
        assert!(close(last, 0.226567184525, 1e-6));
        assert!((last - 0.25).abs() / 0.25 < 0.10);
    }

    #[test]
    fn second_routes_agree() {
        for r in [0.5, 1.0, 2.0] {
            let s1 = sigma(r, 1e-11).unwrap();
            let s2 = sigma_second_route(r, 1e-11).unwrap();
            assert!(close(s1, s2, 1e-9), "sigma routes at {r}: {s1} vs {s2}");
            let l1 = lambda_ratio(r, 1e-11).unwrap().0;
            let l2 = lambda_second_route(r, 1e-11).unwrap();
            assert!(close(l1, l2, 1e-9), "lambda routes at {r}: {l1} vs {l2}");
        }
    }

    #[test]
    fn omega_symmetry_is_half() {
        for r in [0.5, 1.0, 2.0] {
            let w = omega_first_moment(r, 1e-12).unwrap();
            assert!((w - 0.5).abs() < 1e-9, "omega at {r}: {w}");
        }
    }

    #[test]
    fn contact_scaling_values() {
        assert!(close(contact_scaling(1.0, 10_000), 10.0 / 3.0, 1e-15));
        assert_eq!(contact_scaling(0.0, 500), 0.0);
    }

    #[test]
    fn theta_reference_values() {
        let t = weak_area_correction(0.05, 1e-12).unwrap();
        assert!(close(t / (0.27 * 0.05f64.powi(3)), 1.0, 1e-4), "theta(0.05): {t}");
        let t1 = weak_area_correction(1.0, 1e-9).unwrap();
        assert!(close(t1, 0.24966239307580468, 1e-6), "theta(1): {t1}");
        assert!(t1 >= 0.0);
    }

    #[test]
    fn fallback_matches_direct_at_crossover() {
        // both evaluation paths agree to 12 digits at the thresholds
        for eps in [0.0, 1e-6] {
            let a = A_SWITCH + eps;
            assert!(close(horner(&HPHI, a), hphi(a + 0.0), 1e-12));
            let direct = {
                let (c, ct) = (a.cosh(), a.cos());
                (1.0 - c * ct) / ((c - ct) * (c - ct))
            };
            assert!(close(horner(&HPHI, a), direct, 1e-12));
            let direct_rho = {
                let (c, ct, s, st) = (a.cosh(), a.cos(), a.sinh(), a.sin());
                let u = c - ct;
                (2.0 * (1.0 - c * ct) * (s + st) - (c * st - s * ct) * u) / (u * u * u)
            };
            assert!(close(horner(&HRHO, a), direct_rho, 1e-12));
        }
        let a = A_SWITCH_G;
        let w = w_derivs(a);
        let t0 = w[0] + a * w[1];
        let omi = Complex64::new(0.75, -0.75);
        let direct_g0 = omi * t0 / (a * a * a) + Complex64::new(0.0, 0.5 / (a * a));
        let fb = Complex64::new(horner(&GHAT0_RE, a), horner(&GHAT0_IM, a));
        assert!((direct_g0 - fb).norm() <= 1e-12 * fb.norm());
        let fb_v2 = Complex64::new(horner(&V2_RE, a), horner(&V2_IM, a));
        let direct_v2 = Complex64::new(1.0, -1.0) * a * a * a * w[2];
        assert!((direct_v2 - fb_v2).norm() <= 1e-12 * fb_v2.norm());
    }

    #[test]
    fn curve_level_checks() {
        let c = evaluate_curve(CurveTag::Phi, 0.2, 3.0, 0.2, 1e-9).unwrap();
        for w in c.value.windows(2) {
            assert!(w[1] >= w[0], "phi must be nondecreasing");
        }
        for tag in [CurveTag::Rho, CurveTag::Sigma, CurveTag::Lambda] {
            let c = evaluate_curve(tag, 0.5, 4.0, 0.5, 1e-9).unwrap();
            assert!(c.value.iter().all(|&v| v >= 0.0), "{tag:?} must be nonnegative");
        }
        // decay at r = 8: 1 - Φ, ρ, σ, λ all below 1e-8
        assert!((1.0 - phi(8.0, 1e-10).unwrap()).abs() < 1e-8);
        assert!(rho(8.0, 1e-10).unwrap() < 1e-8);
        assert!(sigma(8.0, 1e-12).unwrap().abs() < 1e-8);
        assert!(lambda_ratio(8.0, 1e-12).unwrap().0.abs() < 1e-8);
    }

    #[test]
    fn tolerance_is_enforced() {
        // an oscillatory integrand with a hopeless tolerance must report
        // failure rather than a silent bad value
        let r = integrate(|x| (1e6 * x).sin(), 0.0, 1.0, 1e-308);
        assert!(matches!(r, Err(Error::ToleranceNotReached { .. })));
    }
}
