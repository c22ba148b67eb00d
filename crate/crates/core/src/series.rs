//! Truncated formal power series in `g` with exact rational coefficients.
//!
//! Every generating function in this crate lives here: the planted-tree
//! series `R_i`, the geodesic-boundary series `Z_i`, their irreducible
//! parts `U_i`, the confluent `k`-tuple families, the pinch-point series
//! and the two-point function. Arithmetic is exact modulo `g^{N+1}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// Exact rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact rational `p/q`.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// `f64` value of a rational whose numerator/denominator may far exceed
/// the `f64` range (e.g. ratios of coefficients at order 300).
pub fn rat_to_f64(r: &Rat) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let num = r.numer().abs();
    let den = r.denom().abs();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // keep ~80 significant bits on each side, track the dropped exponent
    let ns = (nb - 80).max(0);
    let ds = (db - 80).max(0);
    let n = (num >> ns).to_f64().unwrap();
    let d = (den >> ds).to_f64().unwrap();
    sign * (n / d) * 2f64.powi((ns - ds) as i32)
}

/// Power series truncated at a fixed order: coefficients of `g^0 .. g^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Rat>,
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![Rat::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = Rat::one();
        s
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty());
        Series { coeffs }
    }

    /// `c * g^k` truncated at `order`.
    pub fn monomial(c: Rat, k: usize, order: usize) -> Self {
        let mut s = Series::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &Rat {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Series) -> Series {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Series, f: impl Fn(&Rat, &Rat) -> Rat) -> Series {
        assert_eq!(self.order(), other.order(), "series order mismatch");
        Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Series {
        Series { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Series) -> Series {
        assert_eq!(self.order(), other.order(), "series order mismatch");
        let n = self.order();
        let mut out = vec![Rat::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Series { coeffs: out }
    }

    /// Division; the divisor must have an invertible (nonzero) constant term.
    pub fn div(&self, other: &Series) -> Series {
        assert_eq!(self.order(), other.order(), "series order mismatch");
        assert!(!other.coeffs[0].is_zero(), "division by series with zero constant term");
        let n = self.order();
        let mut out = vec![Rat::zero(); n + 1];
        for i in 0..=n {
            let mut acc = self.coeffs[i].clone();
            for j in 0..i {
                if !out[j].is_zero() && !other.coeffs[i - j].is_zero() {
                    acc -= &out[j] * &other.coeffs[i - j];
                }
            }
            out[i] = acc / &other.coeffs[0];
        }
        Series { coeffs: out }
    }

    /// Series logarithm; requires constant term 1. Computed as `∫ f'/f`.
    pub fn log(&self) -> Series {
        assert!(self.coeffs[0].is_one(), "log requires constant term 1");
        let n = self.order();
        let mut deriv = Series::zero(n);
        for i in 0..n {
            deriv.coeffs[i] = &self.coeffs[i + 1] * rat((i + 1) as i64);
        }
        let q = deriv.div(self);
        let mut out = Series::zero(n);
        for i in 1..=n {
            out.coeffs[i] = &q.coeffs[i - 1] / rat(i as i64);
        }
        out
    }

    /// Substitute a series with zero constant term for the variable.
    pub fn substitute(&self, inner: &Series) -> Series {
        assert!(inner.coeffs[0].is_zero(), "substitution requires zero constant term");
        let n = self.order();
        let mut acc = Series::monomial(self.coeffs[n].clone(), 0, n);
        for i in (0..n).rev() {
            acc = acc.mul(inner);
            acc.coeffs[0] += &self.coeffs[i];
        }
        acc
    }

    pub fn pow(&self, mut k: usize) -> Series {
        let mut base = self.clone();
        let mut acc = Series::one(self.order());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Solves the base system: `R = 1 + 3 g R^2` and the root of
/// `x + 1/x + 1 = 1/(g R^2)` that vanishes at `g = 0`, both order by order.
///
/// `x` is produced by iterating `x = g R^2 (1 + x + x^2)`, the pole-cleared
/// form of the quadratic; the coefficient of `g^m` only involves lower
/// coefficients, so a single sweep suffices.
pub fn solve_base(order: usize) -> (Series, Series) {
    let n = order;
    let mut r = vec![Rat::zero(); n + 1];
    r[0] = Rat::one();
    for m in 1..=n {
        let mut acc = Rat::zero();
        for a in 0..m {
            if !r[a].is_zero() && !r[m - 1 - a].is_zero() {
                acc += &r[a] * &r[m - 1 - a];
            }
        }
        r[m] = acc * rat(3);
    }
    let r = Series::from_coeffs(r);
    let r2 = r.mul(&r);

    let mut x = vec![Rat::zero(); n + 1];
    let mut x2 = vec![Rat::zero(); n + 1];
    for m in 1..=n {
        // [g^m] of g R^2 (1 + x + x^2) uses x, x^2 only below order m
        let mut acc = Rat::zero();
        for a in 0..m {
            let k = m - 1 - a;
            let mut t = x[k].clone() + &x2[k];
            if k == 0 {
                t += Rat::one();
            }
            if !t.is_zero() {
                acc += r2.coeff(a) * t;
            }
        }
        x[m] = acc;
        let mut sq = Rat::zero();
        for a in 0..=m {
            if !x[a].is_zero() && !x[m - a].is_zero() {
                sq += &x[a] * &x[m - a];
            }
        }
        x2[m] = sq;
    }
    (r, Series::from_coeffs(x))
}

/// Shared base data for building the series families at one truncation order.
pub struct SeriesEngine {
    order: usize,
    pub r: Series,
    pub x: Series,
    x_powers: std::cell::RefCell<Vec<Series>>,
}

impl SeriesEngine {
    pub fn new(order: usize) -> Self {
        let (r, x) = solve_base(order);
        let one = Series::one(order);
        SeriesEngine { order, r, x, x_powers: std::cell::RefCell::new(vec![one]) }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn x_pow(&self, k: usize) -> Series {
        // powers above the truncation order vanish identically (x = g + ...)
        if k > self.order {
            return Series::zero(self.order);
        }
        let mut cache = self.x_powers.borrow_mut();
        while cache.len() <= k {
            let next = cache.last().unwrap().mul(&self.x);
            cache.push(next);
        }
        cache[k].clone()
    }

    /// `R_i`: well-labeled trees planted at a corner labeled `i`, weight `g`
    /// per edge. Closed form `R (1-x^i)(1-x^{i+3}) / ((1-x^{i+1})(1-x^{i+2}))`,
    /// with `R_0 = 0`.
    pub fn r_series(&self, i: usize) -> Series {
        if i == 0 {
            return Series::zero(self.order);
        }
        let one = Series::one(self.order);
        let num = one.sub(&self.x_pow(i)).mul(&one.sub(&self.x_pow(i + 3)));
        let den = one.sub(&self.x_pow(i + 1)).mul(&one.sub(&self.x_pow(i + 2)));
        self.r.mul(&num.div(&den))
    }

    /// `R_i` by iterating the defining recursion
    /// `R_i = 1/(1 - g(R_{i-1} + R_i + R_{i+1}))` on the truncated system
    /// with tail value `R`. Verification path for [`Self::r_series`]; the
    /// tail is exact because `R_j - R = O(x^j)` only feeds orders above the
    /// truncation.
    pub fn r_series_by_recursion(&self, i: usize) -> Series {
        if i == 0 {
            return Series::zero(self.order);
        }
        let n = self.order;
        let top = i + n + 2;
        let mut v: Vec<Series> = (0..=top + 1).map(|_| self.r.clone()).collect();
        v[0] = Series::zero(n);
        let one = Series::one(n);
        let g = Series::monomial(Rat::one(), 1, n);
        // each sweep fixes at least one more coefficient; n+2 sweeps settle all
        for _ in 0..=n + 1 {
            for j in 1..=top {
                let s = v[j - 1].add(&v[j]).add(&v[j + 1]);
                v[j] = one.div(&one.sub(&g.mul(&s)));
            }
        }
        v[i].clone()
    }

    /// `Z_i = R_1 R_2 ... R_i`: spine trees with spine labels `1..i`, weight
    /// `g` per non-spine edge; equivalently geodesic-boundary quadrangulations
    /// of boundary length `2i`.
    pub fn z_series(&self, i: usize) -> Series {
        assert!(i >= 1);
        let mut z = Series::one(self.order);
        for j in 1..=i {
            z = z.mul(&self.r_series(j));
        }
        z
    }

    /// All of `Z_1 .. Z_imax` in one pass.
    pub fn z_family(&self, imax: usize) -> Vec<Series> {
        let mut out = Vec::with_capacity(imax + 1);
        out.push(Series::zero(self.order)); // unused index 0
        let mut z = Series::one(self.order);
        for j in 1..=imax {
            z = z.mul(&self.r_series(j));
            out.push(z.clone());
        }
        out
    }

    /// `U_i`: the irreducible part of `Z_i`; marked-geodesic quadrangulations.
    pub fn u_family(&self, imax: usize) -> Vec<Series> {
        irreducible_part(&self.z_family(imax))
    }

    /// Weak (`irreducible part of Z_i^k`) or strong (`U_i^k`) confluent
    /// `k`-tuple series.
    pub fn u_k_series(&self, i: usize, k: usize, mode: TupleMode) -> Series {
        assert!(i >= 1 && k >= 1);
        match mode {
            TupleMode::Weak => {
                let zk: Vec<Series> = self.z_family(i).iter().map(|z| z.pow(k)).collect();
                irreducible_part(&zk)[i].clone()
            }
            TupleMode::Strong => self.u_family(i)[i].pow(k),
        }
    }

    /// Pinch-point series at index `i`: `Z_i^pp`, `2 Z_i Z_i^pp`, and the
    /// marked-contact series `U_i^{(2)pp}` obtained from the three-term
    /// subtraction recursion.
    pub fn pinch_series(&self, i: usize) -> PinchSeries {
        assert!(i >= 1);
        let z = self.z_family(i);
        let z2: Vec<Series> = z.iter().map(|s| s.mul(s)).collect();
        let u2 = irreducible_part(&z2);
        let two = rat(2);

        let mut zpp = vec![Series::zero(self.order)];
        for m in 1..=i {
            let mut s = Series::zero(self.order);
            for j in 1..m {
                s = s.add(&z[j].mul(&z[m - j]));
            }
            zpp.push(s);
        }
        let mut u2pp: Vec<Series> = vec![Series::zero(self.order)];
        for m in 1..=i {
            let mut t = z[m].mul(&zpp[m]).scale(&two);
            for j in 1..m {
                let tail_pp = z[m - j].mul(&zpp[m - j]).scale(&two);
                let tail_sq2 = z2[m - j].scale(&two);
                t = t.sub(&u2[j].mul(&tail_pp));
                t = t.sub(&u2[j].mul(&tail_sq2));
                t = t.sub(&u2pp[j].mul(&z2[m - j]));
            }
            u2pp.push(t);
        }
        PinchSeries {
            zpp: zpp[i].clone(),
            zzpp: z[i].mul(&zpp[i]).scale(&two),
            u2pp: u2pp[i].clone(),
        }
    }

    /// Two-point function at distance `i`: `log(R_i / R_{i-1})` (plain
    /// `log R_1` at `i = 1`), counting quadrangulations with two marked
    /// distinguished vertices at distance `i`, weighted by inverse symmetry
    /// factors.
    pub fn two_point_series(&self, i: usize) -> Series {
        assert!(i >= 1);
        if i == 1 {
            self.r_series(1).log()
        } else {
            self.r_series(i).div(&self.r_series(i - 1)).log()
        }
    }
}

/// Kinds of confluent-geodesic tuples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TupleMode {
    /// Non-crossing; shared vertices and edges allowed.
    Weak,
    /// Vertex-disjoint except at the two endpoints.
    Strong,
}

/// Result bundle of [`SeriesEngine::pinch_series`].
pub struct PinchSeries {
    /// Boundary quadrangulations with a marked pinch point.
    pub zpp: Series,
    /// `2 Z_i Z_i^pp`: a middle geodesic plus a marked contact on either side.
    pub zzpp: Series,
    /// Weak pairs with a marked contact (irreducible part of the above).
    pub u2pp: Series,
}

/// Generic irreducible-part transform: `u_1 = z_1`,
/// `u_i = z_i - Σ_{j<i} u_j z_{i-j}`. Index 0 of the input is ignored.
pub fn irreducible_part(z: &[Series]) -> Vec<Series> {
    assert!(z.len() >= 2);
    let order = z[1].order();
    let mut u = vec![Series::zero(order)];
    for i in 1..z.len() {
        let mut s = z[i].clone();
        for j in 1..i {
            s = s.sub(&u[j].mul(&z[i - j]));
        }
        u.push(s);
    }
    u
}

/// Partition function of pointed quadrangulations with `n` faces:
/// `(3^n / 2n) · C(2n, n) / (n+1)`, an exact rational.
pub fn pointed_partition(n: usize) -> Rat {
    assert!(n >= 1);
    let mut binom = BigInt::from(1);
    for k in 0..n {
        binom = binom * BigInt::from((2 * n - k) as u64) / BigInt::from((k + 1) as u64);
    }
    let num = BigInt::from(3).pow(n as u32) * binom;
    let den = BigInt::from(2 * n as u64) * BigInt::from((n + 1) as u64);
    Rat::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &Series, upto: usize) -> Vec<i64> {
        (0..=upto)
            .map(|n| {
                let c = s.coeff(n);
                assert!(c.is_integer(), "coefficient {n} not integral: {c}");
                c.to_integer().to_f64().unwrap() as i64
            })
            .collect()
    }

    #[test]
    fn base_series_match_counts() {
        let (r, x) = solve_base(8);
        assert_eq!(ints(&r, 4), vec![1, 3, 18, 135, 1134]);
        // defining identity for x: (x^2 + x + 1) g R^2 - x = 0
        let g_r2 = Series::monomial(Rat::one(), 1, 8).mul(&r.mul(&r));
        let lhs = x
            .mul(&x)
            .add(&x)
            .add(&Series::one(8))
            .mul(&g_r2)
            .sub(&x);
        assert!(lhs.is_zero());
    }

    #[test]
    fn r1_counts_rooted_quadrangulations() {
        let eng = SeriesEngine::new(8);
        // 2·3^n·Cat(n)/(n+2)
        assert_eq!(ints(&eng.r_series(1), 5), vec![1, 2, 9, 54, 378, 2916]);
        assert!(eng.r_series(0).is_zero());
    }

    #[test]
    fn closed_form_equals_recursion_fixed_point() {
        let eng = SeriesEngine::new(12);
        for i in 1..=6 {
            assert_eq!(eng.r_series(i), eng.r_series_by_recursion(i), "R_{i}");
        }
    }

    #[test]
    fn z_and_u_fixtures() {
        let eng = SeriesEngine::new(6);
        assert_eq!(ints(&eng.z_series(2), 3), vec![1, 5, 32, 234]);
        let u = eng.u_family(3);
        assert_eq!(ints(&u[1], 3), vec![1, 2, 9, 54]);
        assert_eq!(ints(&u[2], 4), vec![0, 1, 10, 90, 810]);
    }

    #[test]
    fn z1_equals_r1_and_u1_equals_z1() {
        let eng = SeriesEngine::new(10);
        assert_eq!(eng.z_series(1), eng.r_series(1));
        assert_eq!(eng.u_family(1)[1], eng.z_series(1));
    }

    #[test]
    fn irreducible_reconstruction() {
        // Σ over compositions of i of products of u's equals z_i.
        let eng = SeriesEngine::new(12);
        let imax = 6;
        let z = eng.z_family(imax);
        let u = irreducible_part(&z);
        for i in 1..=imax {
            // rebuild z_i = Σ_{j} u_j z_{i-j} + u_i  (z_0 := 1)
            let mut acc = u[i].clone();
            for j in 1..i {
                acc = acc.add(&u[j].mul(&z[i - j]));
            }
            assert_eq!(acc, z[i], "reconstruction at i={i}");
        }
    }

    #[test]
    fn confluent_tuple_series() {
        let eng = SeriesEngine::new(6);
        // k = 1 reduces to U_i in both modes
        let u2 = eng.u_family(2)[2].clone();
        assert_eq!(eng.u_k_series(2, 1, TupleMode::Weak), u2);
        assert_eq!(eng.u_k_series(2, 1, TupleMode::Strong), u2);
        // strong, k=2, i=2: square of U_2
        assert_eq!(
            ints(&eng.u_k_series(2, 2, TupleMode::Strong), 4),
            vec![0, 0, 1, 20, 280]
        );
        // weak, k=2: frozen low-order values of the irreducible part of Z_i^2
        assert_eq!(ints(&eng.u_k_series(2, 2, TupleMode::Weak), 3), vec![0, 2, 29, 324]);
        assert_eq!(ints(&eng.u_k_series(3, 2, TupleMode::Weak), 3), vec![0, 0, 6, 156]);
    }

    #[test]
    fn pinch_fixtures() {
        let eng = SeriesEngine::new(6);
        let p1 = eng.pinch_series(1);
        assert!(p1.zpp.is_zero());
        let p2 = eng.pinch_series(2);
        let r1 = eng.r_series(1);
        assert_eq!(p2.zpp, r1.mul(&r1));
        assert_eq!(ints(&p2.u2pp, 3), vec![0, 2, 28, 304]);
    }

    #[test]
    fn two_point_fixtures() {
        let eng = SeriesEngine::new(6);
        let t1 = eng.two_point_series(1);
        assert_eq!(t1.coeff(0), &rat(0));
        assert_eq!(t1.coeff(1), &rat(2));
        assert_eq!(t1.coeff(2), &rat(7));
        assert_eq!(t1.coeff(3), &ratio(116, 3));
        // telescoping: Σ_{j<=i} two_point(j) = log R_i
        let mut acc = Series::zero(6);
        for j in 1..=3 {
            acc = acc.add(&eng.two_point_series(j));
        }
        assert_eq!(acc, eng.r_series(3).log());
    }

    #[test]
    fn pointed_partition_fixtures() {
        assert_eq!(pointed_partition(1), ratio(3, 2));
        assert_eq!(pointed_partition(2), ratio(9, 2));
        assert_eq!(pointed_partition(3), ratio(45, 2));
        // normalized averages from U_2
        let eng = SeriesEngine::new(4);
        let u2 = eng.u_family(2)[2].clone();
        assert_eq!(u2.coeff(1) / pointed_partition(1), ratio(2, 3));
        assert_eq!(u2.coeff(2) / pointed_partition(2), ratio(20, 9));
    }

    #[test]
    fn extension_is_stable() {
        // recomputation at higher order extends, never changes, coefficients
        let a = SeriesEngine::new(8);
        let b = SeriesEngine::new(16);
        for i in 1..=3 {
            let za = a.z_series(i);
            let zb = b.z_series(i);
            for n in 0..=8 {
                assert_eq!(za.coeff(n), zb.coeff(n));
            }
        }
    }

    #[test]
    fn substitution_composes() {
        // log(1/(1-g)) via substitute on log(1+u) with u = g/(1-g)
        let n = 10;
        let one = Series::one(n);
        let g = Series::monomial(Rat::one(), 1, n);
        let inv = one.div(&one.sub(&g));
        let u = g.div(&one.sub(&g));
        let log1p: Series = one.add(&g).log();
        assert_eq!(log1p.substitute(&u), inv.log());
    }
}
