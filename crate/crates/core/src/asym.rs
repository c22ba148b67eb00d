//! Exact coefficient tables of the large-`n` expansions and the asymptotic
//! laws built from them.
//!
//! Under the saddle-point substitution `g = (1 + ξ²/n)/12`, every counting
//! series `X` expands as `A + C ξ²/n + (2/3) i D ξ³/n^{3/2} + ...`, and
//! `[g^n] X ~ 12^n D / (2 √π n^{5/2})`. The tables hold the exact rational
//! `A`, `C`, `D` components for the boundary series and the irreducible
//! families derived from them; the `D`-components are the large-`n` ensemble
//! averages.

use crate::error::{Error, Result};
use crate::series::{rat, ratio, Rat, Series};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Closed forms of the boundary-series expansion components at index `i`.
pub fn acd(i: usize) -> (Rat, Rat, Rat) {
    assert!(i >= 1);
    let i = i as i64;
    let p2 = Rat::from_integer(BigInt::from(2).pow(i as u32));
    let a = &p2 * ratio(i + 3, 3 * (i + 1));
    let c = &p2 * ratio(i * (i + 3) * (i * i + 6 * i + 3), 30 * (i + 1));
    let d = &p2
        * Rat::new(
            BigInt::from(i * (i + 2) * (i + 3) * (i + 4)) * BigInt::from(3 * i * i + 12 * i + 13),
            BigInt::from(420 * (i + 1)),
        );
    (a, c, d)
}

/// An `(A, C, D)` expansion triple; products compose by the Leibniz rule on
/// the first two orders in `1/√n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Triple {
    pub a: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl Triple {
    pub fn zero() -> Self {
        Triple { a: Rat::zero(), c: Rat::zero(), d: Rat::zero() }
    }

    pub fn mul(&self, other: &Triple) -> Triple {
        Triple {
            a: &self.a * &other.a,
            c: &self.a * &other.c + &self.c * &other.a,
            d: &self.a * &other.d + &self.d * &other.a,
        }
    }

    fn sub_assign(&mut self, other: &Triple) {
        self.a -= &other.a;
        self.c -= &other.c;
        self.d -= &other.d;
    }

    fn add_assign(&mut self, other: &Triple) {
        self.a += &other.a;
        self.c += &other.c;
        self.d += &other.d;
    }

    pub fn scale(&self, s: i64) -> Triple {
        Triple { a: &self.a * rat(s), c: &self.c * rat(s), d: &self.d * rat(s) }
    }
}

/// Tables indexed `1..=imax` (index 0 unused).
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub imax: usize,
    /// boundary series components `A_i, C_i, D_i` (for `k = 1`) or their
    /// `k`-th power composition
    pub z: Vec<Triple>,
    /// irreducible components `α_i, γ_i, δ_i` (geodesic-count averages)
    pub u: Vec<Triple>,
}

impl CoefficientTable {
    pub fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.imax {
            return Err(Error::IndexBeyondTable { index: i, max: self.imax });
        }
        Ok(())
    }
}

/// The irreducible-part recursion applied to expansion triples:
/// `u_i = z_i − Σ_{j<i} u_j · z_{i−j}`.
fn irreducible_triples(z: &[Triple]) -> Vec<Triple> {
    let mut u = vec![Triple::zero()];
    for i in 1..z.len() {
        let mut t = z[i].clone();
        for j in 1..i {
            t.sub_assign(&u[j].mul(&z[i - j]));
        }
        u.push(t);
    }
    u
}

/// Tables for `k`-tuples of weakly avoiding geodesics: `z[i]` holds
/// `(A_i^k, k A_i^{k-1} C_i, k A_i^{k-1} D_i)` and `u[i]` its irreducible
/// part `(α^(k)_i, γ^(k)_i, δ^(k)_i)`. With `k = 1` these are the plain
/// `α, γ, δ` tables.
pub fn k_tables(imax: usize, k: usize) -> CoefficientTable {
    assert!(k >= 1 && imax >= 1);
    let mut z = vec![Triple::zero()];
    for i in 1..=imax {
        let (a, c, d) = acd(i);
        let ak1 = pow_rat(&a, k - 1);
        let ak = &ak1 * &a;
        let kk = rat(k as i64);
        z.push(Triple { a: ak, c: &kk * &ak1 * &c, d: &kk * &ak1 * &d });
    }
    let u = irreducible_triples(&z);
    CoefficientTable { imax, z, u }
}

/// The `α, γ, δ` tables (`k = 1`).
pub fn agd(imax: usize) -> CoefficientTable {
    k_tables(imax, 1)
}

fn pow_rat(x: &Rat, mut k: usize) -> Rat {
    let mut acc = Rat::one();
    let mut base = x.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Strongly avoiding `k`-tuples: `(α_i^k, k α_i^{k-1} γ_i, k α_i^{k-1} δ_i)`.
pub fn tilde_tables(imax: usize, k: usize) -> Vec<Triple> {
    let base = agd(imax);
    let mut out = vec![Triple::zero()];
    for i in 1..=imax {
        let t = &base.u[i];
        let ak1 = pow_rat(&t.a, k - 1);
        let kk = rat(k as i64);
        out.push(Triple {
            a: &ak1 * &t.a,
            c: &kk * &ak1 * &t.c,
            d: &kk * &ak1 * &t.d,
        });
    }
    out
}

/// Tables around the marked-contact series: for each `i`, the critical
/// value `W^{(2)pp}_i` (`a`-component) and the full expansion triple, built
/// by running the pinch-point subtraction recursion on expansion triples.
pub struct ContactTable {
    pub imax: usize,
    /// triple of the weak-pair marked-contact series `U^{(2)pp}_i`
    pub u2pp: Vec<Triple>,
    /// triple of the weak-pair series `U^{(2)}_i`
    pub u2: Vec<Triple>,
}

impl ContactTable {
    /// Critical value `W^{(2)pp}_i` of the marked-contact series.
    pub fn w2pp(&self, i: usize) -> &Rat {
        &self.u2pp[i].a
    }

    /// Large-`n` average number of contacts between two weakly avoiding
    /// geodesics of length `i`: the ratio of the `D`-components.
    pub fn mean_contacts(&self, i: usize) -> Rat {
        &self.u2pp[i].d / &self.u2[i].d
    }
}

pub fn contact_table(imax: usize) -> ContactTable {
    let mut z = vec![Triple::zero()];
    for i in 1..=imax {
        let (a, c, d) = acd(i);
        z.push(Triple { a, c, d });
    }
    let z2: Vec<Triple> = z.iter().map(|t| t.mul(t)).collect();
    let u2 = irreducible_triples(&z2);
    let mut zpp = vec![Triple::zero()];
    for i in 1..=imax {
        let mut s = Triple::zero();
        for j in 1..i {
            s.add_assign(&z[j].mul(&z[i - j]));
        }
        zpp.push(s);
    }
    let mut u2pp: Vec<Triple> = vec![Triple::zero()];
    for i in 1..=imax {
        let mut t = z[i].mul(&zpp[i]).scale(2);
        for j in 1..i {
            t.sub_assign(&u2[j].mul(&z[i - j].mul(&zpp[i - j]).scale(2)));
            t.sub_assign(&u2[j].mul(&z2[i - j].scale(2)));
            t.sub_assign(&u2pp[j].mul(&z2[i - j]));
        }
        u2pp.push(t);
    }
    ContactTable { imax, u2pp, u2 }
}

/// `W^{(2)pp}` table by its generating-function form
/// `(Â^{(2)pp} − 2 (Â^{(2)})²) / (1 + Â^{(2)})²` expanded as a `t`-series;
/// verification path for [`contact_table`].
pub fn w2pp_by_generating_function(imax: usize) -> Vec<Rat> {
    let a: Vec<Rat> = (0..=imax)
        .map(|i| if i == 0 { Rat::zero() } else { acd(i).0 })
        .collect();
    let mut a2 = vec![Rat::zero(); imax + 1];
    let mut app = vec![Rat::zero(); imax + 1];
    for i in 1..=imax {
        a2[i] = &a[i] * &a[i];
        for j in 1..i {
            app[i] += &a[j] * &a[i - j];
        }
    }
    let a2pp: Vec<Rat> = (0..=imax).map(|i| rat(2) * &a[i] * &app[i]).collect();
    let a2s = Series::from_coeffs(a2);
    let one = Series::one(imax);
    let num = Series::from_coeffs(a2pp).sub(&a2s.mul(&a2s).scale(&rat(2)));
    let den = one.add(&a2s).mul(&one.add(&a2s));
    let w = num.div(&den);
    w.coeffs().to_vec()
}

/// Natural logarithm of a positive rational of arbitrary size.
pub fn rat_ln(r: &Rat) -> f64 {
    assert!(r.is_positive());
    big_ln(r.numer()) - big_ln(r.denom())
}

fn big_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return (x.to_f64().unwrap()).ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}

/// The leading saddle-point estimate `12^n D / (2 √π n^{5/2})`, reported in
/// logarithmic and scientific form to dodge overflow.
#[derive(Clone, Copy, Debug)]
pub struct SaddleEstimate {
    pub ln_value: f64,
}

impl SaddleEstimate {
    pub fn mantissa_exp10(&self) -> (f64, i64) {
        let log10 = self.ln_value / std::f64::consts::LN_10;
        let e = log10.floor();
        (10f64.powf(log10 - e), e as i64)
    }
}

pub fn saddle_count(n: usize, d: &Rat) -> SaddleEstimate {
    assert!(n >= 1 && d.is_positive());
    let ln = (n as f64) * 12f64.ln()
        - (2.0 * std::f64::consts::PI.sqrt()).ln()
        - 2.5 * (n as f64).ln()
        + rat_ln(d);
    SaddleEstimate { ln_value: ln }
}

/// Ratio of an exact coefficient to its saddle-point estimate.
pub fn saddle_ratio(coeff: &Rat, n: usize, d: &Rat) -> f64 {
    (rat_ln(coeff) - saddle_count(n, d).ln_value).exp()
}

/// Finite-`i` exact averages beside their closed-form large-`i` limits.
#[derive(Clone, Debug)]
pub struct AverageLaws {
    /// mean geodesic count per origin at distance `i` (δ-type, exact)
    pub geodesics_per_origin: Rat,
    /// natural log of the large-`i` law for the per-pair count
    /// (`k (3·2^i)^k` for `k`-tuples)
    pub per_pair_limit_ln: f64,
    /// strong-pair area correlation `⟨n1 n2⟩ / n = γ_i / α_i` (exact)
    pub strong_pair_area_ratio: Rat,
    /// its large-`i` law `(3/20) i^4`
    pub strong_pair_area_limit: f64,
    /// large-`i` mean contacts `i/3` between two weakly avoiding geodesics
    pub contacts_limit: f64,
}

/// Assembles the named averages of the geodesic ensembles at distance `i`
/// for `k`-tuples in the given mode.
pub fn average_laws(
    table: &CoefficientTable,
    i: usize,
    k: usize,
    mode: crate::series::TupleMode,
) -> Result<AverageLaws> {
    table.check_index(i)?;
    let base = agd(i);
    let per_origin = match mode {
        crate::series::TupleMode::Weak => table.u[i].d.clone(),
        crate::series::TupleMode::Strong => {
            let t = tilde_tables(i, k);
            t[i].d.clone()
        }
    };
    let per_pair_limit_ln =
        (k as f64).ln() + (k as f64) * (3f64.ln() + (i as f64) * 2f64.ln());
    Ok(AverageLaws {
        geodesics_per_origin: per_origin,
        per_pair_limit_ln,
        strong_pair_area_ratio: &base.u[i].c / &base.u[i].a,
        strong_pair_area_limit: 0.15 * (i as f64).powi(4),
        contacts_limit: i as f64 / 3.0,
    })
}

/// Ratios of the table entries to their large-`i` laws, computed with the
/// recursion scaled by `2^{-i}` in floating point. A convergence diagnostic:
/// the laws carry `log(i)/i`-type corrections and approach 1 slowly.
#[derive(Clone, Copy, Debug)]
pub struct LawRatios {
    /// `α_i i³ / (12 · 2^i)`
    pub alpha: f64,
    /// `γ_i / ((9/5) 2^i i)`
    pub gamma: f64,
    /// `δ_i / ((9/7) 2^i i³)`
    pub delta: f64,
}

pub fn scaled_law_ratios(imax: usize) -> Vec<LawRatios> {
    let mut a = vec![0.0f64; imax + 1];
    let mut c = vec![0.0f64; imax + 1];
    let mut d = vec![0.0f64; imax + 1];
    for i in 1..=imax {
        let x = i as f64;
        a[i] = (x + 3.0) / (3.0 * (x + 1.0));
        c[i] = x * (x + 3.0) * (x * x + 6.0 * x + 3.0) / (30.0 * (x + 1.0));
        d[i] = x * (x + 2.0) * (x + 3.0) * (x + 4.0) * (3.0 * x * x + 12.0 * x + 13.0)
            / (420.0 * (x + 1.0));
    }
    let mut al = vec![0.0f64; imax + 1];
    let mut ga = vec![0.0f64; imax + 1];
    let mut de = vec![0.0f64; imax + 1];
    let mut out = vec![LawRatios { alpha: 0.0, gamma: 0.0, delta: 0.0 }];
    for i in 1..=imax {
        let (mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0);
        for j in 1..i {
            s1 += al[j] * a[i - j];
            s2 += al[j] * c[i - j] + ga[j] * a[i - j];
            s3 += al[j] * d[i - j] + de[j] * a[i - j];
        }
        al[i] = a[i] - s1;
        ga[i] = c[i] - s2;
        de[i] = d[i] - s3;
        let x = i as f64;
        out.push(LawRatios {
            alpha: al[i] * x * x * x / 12.0,
            gamma: ga[i] / (1.8 * x),
            delta: de[i] / (9.0 / 7.0 * x * x * x),
        });
    }
    out
}
