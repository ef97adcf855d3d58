//! Truncated power series over 2-adic coefficients: ℤ₂[[T]] mod (T^N, 2^M).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{curly_l, v2_factorial, PAdic, PAdicGaussian, EXACT};

/// Coefficient rings usable in [`TruncSeries`].
pub trait Coeff: Clone + fmt::Debug + PartialEq + Send + Sync {
    fn zero_p(prec: i64) -> Self;
    fn from_padic(x: PAdic) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn scale(&self, x: &PAdic) -> Self;
    fn div_scalar(&self, x: &PAdic) -> Result<Self>;
    fn invert(&self) -> Result<Self>;
    fn is_unit_c(&self) -> bool;
    fn prec(&self) -> i64;
    fn vbound(&self) -> i64;
    fn is_zero_c(&self) -> bool;
    fn cap_prec(&self, p: i64) -> Self;
    fn conjugate(&self) -> Self;
    fn agrees_c(&self, o: &Self, bits: i64) -> bool;

    fn one_p(prec: i64) -> Self {
        Self::from_padic(PAdic::one(prec))
    }
}

impl Coeff for PAdic {
    fn zero_p(prec: i64) -> Self {
        PAdic::zero(prec)
    }
    fn from_padic(x: PAdic) -> Self {
        x
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn scale(&self, x: &PAdic) -> Self {
        self.mul(x)
    }
    fn div_scalar(&self, x: &PAdic) -> Result<Self> {
        self.div(x)
    }
    fn invert(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        self.inverse()
    }
    fn is_unit_c(&self) -> bool {
        self.is_unit()
    }
    fn prec(&self) -> i64 {
        self.precision()
    }
    fn vbound(&self) -> i64 {
        self.val_bound()
    }
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn cap_prec(&self, p: i64) -> Self {
        self.with_precision(p)
    }
    fn conjugate(&self) -> Self {
        self.clone()
    }
    fn agrees_c(&self, o: &Self, bits: i64) -> bool {
        self.agrees_mod(o, bits)
    }
}

impl Coeff for PAdicGaussian {
    fn zero_p(prec: i64) -> Self {
        PAdicGaussian::zero(prec)
    }
    fn from_padic(x: PAdic) -> Self {
        PAdicGaussian::real(x)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn scale(&self, x: &PAdic) -> Self {
        PAdicGaussian::scale(self, x)
    }
    fn div_scalar(&self, x: &PAdic) -> Result<Self> {
        self.div_padic(x)
    }
    fn invert(&self) -> Result<Self> {
        if !self.is_unit_c() {
            return Err(Error::NotUnit);
        }
        PAdicGaussian::one(self.precision()).div(self)
    }
    fn is_unit_c(&self) -> bool {
        self.norm().is_unit()
    }
    fn prec(&self) -> i64 {
        self.precision()
    }
    fn vbound(&self) -> i64 {
        self.val_bound()
    }
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn cap_prec(&self, p: i64) -> Self {
        self.with_precision(p)
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
    fn agrees_c(&self, o: &Self, bits: i64) -> bool {
        self.agrees_mod(o, bits)
    }
}

/// Σ c_j T^j mod T^N; each coefficient carries its own certified precision.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<C: Coeff = PAdic> {
    coeffs: Vec<C>,
}

impl<C: Coeff> TruncSeries<C> {
    pub fn new(coeffs: Vec<C>) -> Self {
        TruncSeries { coeffs }
    }

    pub fn zero(n: usize, prec: i64) -> Self {
        TruncSeries { coeffs: vec![C::zero_p(prec); n] }
    }

    pub fn one(n: usize, prec: i64) -> Self {
        Self::constant(C::one_p(prec), n)
    }

    pub fn constant(c: C, n: usize) -> Self {
        let mut coeffs = vec![C::zero_p(EXACT); n];
        if n > 0 {
            coeffs[0] = c;
        }
        TruncSeries { coeffs }
    }

    /// a + bT.
    pub fn linear(a: C, b: C, n: usize) -> Self {
        let mut s = Self::constant(a, n);
        if n > 1 {
            s.coeffs[1] = b;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, j: usize) -> &C {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Minimum coefficient precision (the certified precision of the whole series).
    pub fn certified_precision(&self) -> i64 {
        self.coeffs.iter().map(|c| c.prec()).min().unwrap_or(EXACT)
    }

    pub fn precisions(&self) -> Vec<i64> {
        self.coeffs.iter().map(|c| c.prec()).collect()
    }

    pub fn truncate(&self, n: usize) -> Self {
        TruncSeries { coeffs: self.coeffs[..n.min(self.len())].to_vec() }
    }

    pub fn cap_precision(&self, p: i64) -> Self {
        self.map(|c| c.cap_prec(p))
    }

    /// Caps coefficient j at 2(n_nodes − j): the uncertainty left by fitting
    /// an integral series at n_nodes nodes of valuation ≥ 2.
    pub fn with_tail_bound(&self, n_nodes: usize) -> Self {
        TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| c.cap_prec(2 * (n_nodes as i64 - j as i64)))
                .collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        TruncSeries { coeffs: (0..n).map(|j| self.coeffs[j].plus(&o.coeffs[j])).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        TruncSeries { coeffs: (0..n).map(|j| self.coeffs[j].minus(&o.coeffs[j])).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.negate())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        let coeffs = (0..n)
            .map(|j| {
                let mut acc = C::zero_p(EXACT);
                for k in 0..=j {
                    if self.coeffs[k].is_zero_c() && self.coeffs[k].prec() >= EXACT {
                        continue;
                    }
                    acc = acc.plus(&self.coeffs[k].times(&o.coeffs[j - k]));
                }
                acc
            })
            .collect();
        TruncSeries { coeffs }
    }

    pub fn scale(&self, x: &PAdic) -> Self {
        self.map(|c| c.scale(x))
    }

    pub fn scale_c(&self, x: &C) -> Self {
        self.map(|c| c.times(x))
    }

    pub fn conj(&self) -> Self {
        self.map(|c| c.conjugate())
    }

    /// a / b for b with unit constant term.
    pub fn div_by_unit(&self, b: &Self) -> Result<Self> {
        let n = self.len().min(b.len());
        if n == 0 {
            return Ok(self.clone());
        }
        let inv0 = b.coeffs[0].invert().map_err(|_| Error::Divisibility("even constant term".into()))?;
        let mut q: Vec<C> = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = self.coeffs[j].clone();
            for k in 1..=j {
                acc = acc.minus(&b.coeffs[k].times(&q[j - k]));
            }
            q.push(acc.times(&inv0));
        }
        Ok(TruncSeries { coeffs: q })
    }

    /// Multiplication by T (length preserved).
    pub fn shift_up(&self) -> Self {
        let n = self.len();
        let mut coeffs = vec![C::zero_p(EXACT)];
        coeffs.extend(self.coeffs.iter().take(n.saturating_sub(1)).cloned());
        coeffs.truncate(n);
        TruncSeries { coeffs }
    }

    /// Division by T; the constant term must vanish to its precision.
    pub fn shift_down(&self) -> Result<Self> {
        if let Some(c0) = self.coeffs.first() {
            if !c0.is_zero_c() {
                return Err(Error::Divisibility("constant term is not zero".into()));
            }
        }
        Ok(TruncSeries { coeffs: self.coeffs.iter().skip(1).cloned().collect() })
    }

    /// Division by T + 2 in ℤ₂[[T]], solved from the bottom:
    /// q₀ = a₀/2, q_j = (a_j − q_{j−1})/2, each numerator required even.
    pub fn div_by_t_plus_two(&self) -> Result<Self> {
        let two = PAdic::from_i64(2, EXACT - 1);
        let mut q: Vec<C> = Vec::with_capacity(self.len());
        for j in 0..self.len() {
            let num = if j == 0 { self.coeffs[0].clone() } else { self.coeffs[j].minus(&q[j - 1]) };
            if !num.is_zero_c() && num.vbound() < 1 {
                return Err(Error::Divisibility(format!("(T+2) does not divide: coefficient {j} is odd")));
            }
            q.push(num.div_scalar(&two)?);
        }
        Ok(TruncSeries { coeffs: q })
    }

    /// Division of every coefficient by 2^k, asserting divisibility.
    pub fn div_pow2(&self, k: i64) -> Result<Self> {
        let mut out = Vec::with_capacity(self.len());
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero_c() && c.vbound() < k {
                return Err(Error::Divisibility(format!("2^{k} does not divide coefficient {j}")));
            }
            out.push(c.div_scalar(&PAdic::from_i64(1 << k.min(62), EXACT - 1))?);
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// Horner evaluation of the polynomial part (no tail accounting).
    pub fn eval_poly(&self, t: &PAdic) -> C {
        let mut acc = C::zero_p(EXACT);
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(t).plus(c);
        }
        acc
    }

    /// Evaluation as a series: requires v(t) ≥ 2 and folds the T^N tail
    /// (valuation ≥ N·v(t)) into the reported precision.
    pub fn eval_at(&self, t: &PAdic) -> Result<C> {
        let vt = t.val_bound();
        if vt < 2 {
            return Err(Error::Convergence(vt));
        }
        let tail = (self.len() as i64).saturating_mul(vt);
        Ok(self.eval_poly(t).cap_prec(tail))
    }

    /// Coefficientwise agreement mod 2^bits.
    pub fn agrees_mod(&self, o: &Self, bits: i64) -> bool {
        self.len() == o.len() && self.coeffs.iter().zip(&o.coeffs).all(|(a, b)| a.agrees_c(b, bits))
    }
}

impl TruncSeries<PAdic> {
    pub fn from_i64s(cs: &[i64], prec: i64) -> Self {
        TruncSeries { coeffs: cs.iter().map(|&c| PAdic::from_i64(c, prec)).collect() }
    }

    pub fn to_gaussian(&self) -> TruncSeries<PAdicGaussian> {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| PAdicGaussian::real(c.clone())).collect() }
    }

    /// Residues mod 2^bits (coefficients must be integral).
    pub fn residues(&self, bits: i64) -> Vec<Option<num_bigint::BigUint>> {
        self.coeffs.iter().map(|c| if c.prec() >= bits { c.residue_mod(bits) } else { None }).collect()
    }
}

impl TruncSeries<PAdicGaussian> {
    pub fn re(&self) -> TruncSeries<PAdic> {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| c.re.clone()).collect() }
    }

    pub fn im(&self) -> TruncSeries<PAdic> {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| c.im.clone()).collect() }
    }
}

/// Interpolation nodes t_n = u^n − 1, n = 1..N.
#[derive(Clone, Debug)]
pub struct NodeGrid {
    pub u: i64,
    exact: Vec<BigInt>,
    nodes: Vec<PAdic>,
}

impl NodeGrid {
    pub fn new(u: i64, n_nodes: usize, prec: i64) -> Result<Self> {
        if u.rem_euclid(8) != 5 {
            return Err(Error::BadBase);
        }
        let ub = BigInt::from(u);
        let mut pw = BigInt::one();
        let mut exact = Vec::with_capacity(n_nodes);
        for _ in 0..n_nodes {
            pw *= &ub;
            exact.push(&pw - BigInt::one());
        }
        let nodes = exact.iter().map(|t| PAdic::from_bigint(t, prec)).collect();
        Ok(NodeGrid { u, exact, nodes })
    }

    pub fn u_padic(&self, prec: i64) -> PAdic {
        PAdic::from_i64(self.u, prec)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// t_n for n ≥ 1.
    pub fn node(&self, n: usize) -> &PAdic {
        &self.nodes[n - 1]
    }

    pub fn node_exact(&self, n: usize) -> &BigInt {
        &self.exact[n - 1]
    }

    pub fn nodes(&self) -> &[PAdic] {
        &self.nodes
    }
}

/// Σ C(𝓛(x), k) T^k; the zero series for even x.
pub fn binom_l_series(x: &PAdic, u: &PAdic, n: usize) -> Result<TruncSeries<PAdic>> {
    if x.is_integral() && !x.is_unit() {
        return Ok(TruncSeries::zero(n, EXACT));
    }
    let l = curly_l(x, u)?;
    let p = l.precision();
    let r = BigInt::from(l.residue().ok_or_else(|| Error::Precision("𝓛(x) not integral".into()))?);
    let mut c = BigInt::one();
    let mut coeffs = Vec::with_capacity(n);
    for k in 0..n {
        if k > 0 {
            c = c * (&r - BigInt::from(k - 1)) / BigInt::from(k);
        }
        let pk = p - v2_factorial(k as u64);
        if pk <= 0 {
            return Err(Error::Precision(format!("binomial coefficient {k} exhausts {p} bits")));
        }
        coeffs.push(PAdic::from_bigint(&c, pk));
    }
    Ok(TruncSeries::new(coeffs))
}

/// L(x;T) for an integer x and base u, with 𝓛 computed to `prec` bits.
pub fn binom_l_series_int(x: &BigInt, u: i64, n: usize, prec: i64) -> Result<TruncSeries<PAdic>> {
    if x.is_zero() || (x.magnitude() % 2u32).is_zero() {
        return Ok(TruncSeries::zero(n, EXACT));
    }
    binom_l_series(&PAdic::from_bigint(x, prec + 4), &PAdic::from_i64(u, prec + 4), n)
}

/// How the fitted values extend beyond the nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    /// Values come from a polynomial of degree < number of nodes.
    Polynomial,
    /// Values come from an arbitrary series in ℤ₂[[T]] (coefficients capped
    /// by the interpolation tail bound).
    Series,
}

/// Precision lost by Newton interpolation at N nodes: 2(N−1) + v₂((N−1)!).
pub fn newton_loss(n: usize) -> i64 {
    if n == 0 {
        return 0;
    }
    2 * (n as i64 - 1) + v2_factorial(n as u64 - 1)
}

/// Newton divided-difference interpolation at t_1..t_N (N = values.len()),
/// returning the first `n_coeffs` monomial coefficients.
pub fn newton_fit<C: Coeff>(
    grid: &NodeGrid,
    values: &[C],
    n_coeffs: usize,
    m_work: i64,
    tail: Tail,
) -> Result<TruncSeries<C>> {
    let n = values.len();
    if n > grid.len() {
        return Err(Error::Length(n, grid.len()));
    }
    if n < n_coeffs {
        return Err(Error::Length(n, n_coeffs));
    }
    if n == 0 {
        return Ok(TruncSeries::new(vec![]));
    }
    let t = &grid.nodes()[..n];
    let mut c: Vec<C> = values.iter().map(|v| v.cap_prec(m_work)).collect();
    for k in 1..n {
        for i in (k..n).rev() {
            let num = c[i].minus(&c[i - 1]);
            let den = t[i].sub(&t[i - k]);
            let q = num.div_scalar(&den)?;
            if q.prec() <= 0 {
                return Err(Error::Precision(format!(
                    "divided difference of order {k} exhausted the {m_work}-bit working precision"
                )));
            }
            if !q.is_zero_c() && q.vbound() < 0 {
                return Err(Error::Witness { level: k, node: i + 1, valuation: q.vbound() });
            }
            c[i] = q;
        }
    }
    let mut poly: Vec<C> = vec![c[n - 1].clone()];
    for k in (0..n - 1).rev() {
        let mut np: Vec<C> = vec![C::zero_p(EXACT); poly.len() + 1];
        for (j, a) in poly.iter().enumerate() {
            np[j + 1] = np[j + 1].plus(a);
            np[j] = np[j].minus(&a.scale(&t[k]));
        }
        np[0] = np[0].plus(&c[k]);
        poly = np;
    }
    poly.truncate(n_coeffs);
    let s = TruncSeries::new(poly);
    Ok(match tail {
        Tail::Polynomial => s,
        Tail::Series => s.with_tail_bound(n),
    })
}

/// Is every coefficient of valuation ≥ k (undecidable coefficients → None)?
pub fn all_divisible(s: &TruncSeries<PAdic>, k: i64) -> Vec<Option<bool>> {
    s.coeffs()
        .iter()
        .map(|c| {
            if c.precision() < k {
                if !c.is_zero() && c.val_bound() < k {
                    Some(false)
                } else {
                    None
                }
            } else {
                Some(c.is_zero() || c.val_bound() >= k)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(cs: &[i64]) -> TruncSeries {
        TruncSeries::from_i64s(cs, 64)
    }

    #[test]
    fn ring_examples() {
        let a = s(&[1, 1, 0, 0, 0]);
        let b = s(&[1, -1, 0, 0, 0]);
        assert!(a.mul(&b).agrees_mod(&s(&[1, 0, -1, 0, 0]), 60));
        let t2 = s(&[2, 1, 0, 0]);
        assert!(t2.div_by_unit(&s(&[1, 0, 0, 0])).unwrap().agrees_mod(&t2, 60));
        assert!(s(&[2, 1, 0]).div_by_unit(&s(&[2, 1, 0])).is_err());
    }

    #[test]
    fn eval_examples() {
        let a = s(&[1, 1, 0, 0]);
        let v = a.eval_at(&PAdic::from_i64(4, 64)).unwrap();
        assert!(v.agrees_mod(&PAdic::from_i64(5, 8), 8));
        assert!(a.eval_at(&PAdic::from_i64(2, 64)).is_err());
    }

    #[test]
    fn binom_examples() {
        let u = PAdic::from_i64(-3, 128);
        let one = binom_l_series(&PAdic::from_i64(1, 128), &u, 6).unwrap();
        assert!(one.agrees_mod(&s(&[1, 0, 0, 0, 0, 0]), 60));
        let lu = binom_l_series(&u, &u, 6).unwrap();
        assert!(lu.agrees_mod(&s(&[1, 1, 0, 0, 0, 0]), 60));
        let zero = binom_l_series(&PAdic::from_i64(6, 128), &u, 6).unwrap();
        assert!(zero.coeffs().iter().all(|c| c.is_exact_zero()));
        // L(7; u²−1) = ⟨7⟩² = 49 (the tail is what limits precision)
        let l7 = binom_l_series(&PAdic::from_i64(7, 128), &u, 40).unwrap();
        let t = u.pow(2).sub(&PAdic::one(128));
        assert!(l7.eval_at(&t).unwrap().agrees_mod(&PAdic::from_i64(49, 64), 60));
    }

    #[test]
    fn loss_formula() {
        assert_eq!(newton_loss(30), 83);
    }

    #[test]
    fn fit_constant_and_binomial() {
        let grid = NodeGrid::new(-3, 12, 200).unwrap();
        let c = PAdic::from_i64(17, 100);
        let f = newton_fit(&grid, &vec![c.clone(); 12], 12, 100, Tail::Polynomial).unwrap();
        assert!(f.coeff(0).agrees(&c));
        assert!(f.coeffs()[1..].iter().all(|x| x.is_zero()));

        let x = PAdic::from_i64(7, 200);
        let ax = crate::padic::angle(&x).unwrap();
        let vals: Vec<PAdic> = (1..=12u64).map(|n| ax.pow(n)).collect();
        let fit = newton_fit(&grid, &vals, 8, 150, Tail::Series).unwrap();
        let l = binom_l_series(&x, &grid.u_padic(200), 8).unwrap();
        for j in 0..8 {
            let p = fit.coeff(j).precision();
            assert!(p >= 8);
            assert!(fit.coeff(j).agrees_mod(l.coeff(j), p));
        }
    }

    #[test]
    fn witness_failure_detected() {
        let grid = NodeGrid::new(5, 4, 100).unwrap();
        // 1/4-valued jump cannot come from an integral series
        let vals = vec![PAdic::from_i64(0, 60), PAdic::from_i64(1, 60), PAdic::from_i64(0, 60), PAdic::from_i64(0, 60)];
        match newton_fit(&grid, &vals, 4, 60, Tail::Series) {
            Err(Error::Witness { .. }) => {}
            other => panic!("expected witness failure, got {other:?}"),
        }
    }

    #[test]
    fn t_plus_two_division() {
        let q = s(&[3, -1, 4, 1, 5, 0, 0, 0]);
        let t2 = s(&[2, 1, 0, 0, 0, 0, 0, 0]);
        let back = q.mul(&t2).div_by_t_plus_two().unwrap();
        for j in 0..8 {
            assert!(back.coeff(j).agrees(q.coeff(j)));
        }
        assert!(s(&[1, 0, 0]).div_by_t_plus_two().is_err());
    }
}
