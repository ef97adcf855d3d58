//! Fixed-precision 2-adic numbers: ℚ₂, ℚ₂(i) and ℚ₂(√d).
//!
//! A [`PAdic`] is `2^val · unit` with `unit` odd, known modulo `2^prec`
//! (absolute precision). Operations never extend precision: sums keep the
//! smaller absolute precision, products and quotients keep the smaller
//! relative precision.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Precision used for exact zeros (e.g. ⟨x⟩ for even x).
pub const EXACT: i64 = 1 << 60;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PAdic {
    val: i64,
    unit: BigUint,
    prec: i64,
}

fn mask(x: &BigUint, bits: i64) -> BigUint {
    if bits <= 0 {
        return BigUint::zero();
    }
    if x.bits() <= bits as u64 {
        return x.clone();
    }
    x & ((BigUint::one() << bits as usize) - 1u32)
}

fn neg_mod(x: &BigUint, bits: i64) -> BigUint {
    debug_assert!(bits < 1 << 24, "negating an exact value");
    if x.is_zero() {
        x.clone()
    } else {
        (BigUint::one() << bits as usize) - x
    }
}

/// Inverse of an odd residue modulo 2^bits.
pub(crate) fn inv_odd(x: &BigUint, bits: i64) -> BigUint {
    debug_assert!(x.bit(0));
    let mut y = mask(x, 3);
    let mut k = 3i64;
    while k < bits {
        k = (2 * k).min(bits);
        let t = mask(&(x * &y), k);
        let two = BigUint::from(2u32) + (BigUint::one() << k as usize);
        y = mask(&(&y * mask(&(two - t), k)), k);
    }
    mask(&y, bits)
}

fn tz(x: &BigUint) -> i64 {
    x.trailing_zeros().map(|t| t as i64).unwrap_or(0)
}

fn cap(p: i64) -> i64 {
    p.min(EXACT)
}

impl PAdic {
    pub fn zero(prec: i64) -> Self {
        PAdic { val: prec, unit: BigUint::zero(), prec }
    }

    /// The exact zero, used for ⟨x⟩ = 0 when x is even.
    pub fn exact_zero() -> Self {
        Self::zero(EXACT)
    }

    pub fn one(prec: i64) -> Self {
        Self::from_i64(1, prec)
    }

    fn normalized(x: BigUint, vbase: i64, prec: i64) -> Self {
        if x.is_zero() {
            return Self::zero(prec);
        }
        let t = tz(&x);
        PAdic { val: vbase + t, unit: x >> t as usize, prec }
    }

    pub fn from_i64(x: i64, prec: i64) -> Self {
        Self::from_bigint(&BigInt::from(x), prec)
    }

    pub fn from_bigint(x: &BigInt, prec: i64) -> Self {
        if x.is_zero() {
            return Self::zero(prec);
        }
        let mag = x.magnitude();
        let v = tz(mag);
        if v >= prec {
            return Self::zero(prec);
        }
        let r = prec - v;
        let mut u = mask(&(mag >> v as usize), r);
        if x.sign() == Sign::Minus {
            u = neg_mod(&u, r);
        }
        PAdic { val: v, unit: u, prec }
    }

    pub fn from_biguint(x: &BigUint, prec: i64) -> Self {
        Self::from_bigint(&BigInt::from(x.clone()), prec)
    }

    /// Reduction of a rational number; `prec` is the absolute precision.
    pub fn from_rational(q: &BigRational, prec: i64) -> Self {
        if q.is_zero() {
            return Self::zero(prec);
        }
        let (n, d) = (q.numer(), q.denom());
        let vn = tz(n.magnitude());
        let vd = tz(d.magnitude());
        let v = vn - vd;
        if v >= prec {
            return Self::zero(prec);
        }
        let r = prec - v;
        let nu = mask(&(n.magnitude() >> vn as usize), r);
        let du = mask(&(d.magnitude() >> vd as usize), r);
        let mut u = mask(&(nu * inv_odd(&du, r)), r);
        if (n.sign() == Sign::Minus) != (d.sign() == Sign::Minus) {
            u = neg_mod(&u, r);
        }
        PAdic { val: v, unit: u, prec }
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn relative_precision(&self) -> i64 {
        self.prec - self.val
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_zero() && self.prec >= EXACT
    }

    /// `None` when the value is zero to the known precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Lower bound for the valuation (the precision for zeros).
    pub fn val_bound(&self) -> i64 {
        self.val
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.val == 0
    }

    pub fn is_integral(&self) -> bool {
        self.val >= 0
    }

    /// Residue modulo 2^bits of an integral value (bits ≤ precision).
    pub fn residue_mod(&self, bits: i64) -> Option<BigUint> {
        if self.val < 0 && !self.is_zero() {
            return None;
        }
        let bits = bits.min(self.prec);
        if self.is_zero() || self.val >= bits {
            return Some(BigUint::zero());
        }
        Some(mask(&(&self.unit << self.val as usize), bits))
    }

    /// Residue modulo 2^precision; `None` for non-integral values.
    pub fn residue(&self) -> Option<BigUint> {
        if self.prec >= EXACT {
            return Some(BigUint::zero());
        }
        self.residue_mod(self.prec)
    }

    /// Small residue modulo 2^bits as u64 (bits ≤ 64).
    pub fn low_u64(&self, bits: i64) -> Option<u64> {
        self.residue_mod(bits.min(64)).and_then(|r| r.to_u64())
    }

    pub fn with_precision(&self, p: i64) -> Self {
        if p >= self.prec {
            return self.clone();
        }
        if self.val >= p {
            return Self::zero(p);
        }
        PAdic { val: self.val, unit: mask(&self.unit, p - self.val), prec: p }
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec.min(o.prec);
        if self.is_zero() {
            return o.with_precision(p);
        }
        if o.is_zero() {
            return self.with_precision(p);
        }
        let vmin = self.val.min(o.val);
        if vmin >= p {
            return Self::zero(p);
        }
        let r = p - vmin;
        let a = mask(&(&self.unit << (self.val - vmin) as usize), r);
        let b = mask(&(&o.unit << (o.val - vmin) as usize), r);
        Self::normalized(mask(&(a + b), r), vmin, p)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        PAdic { val: self.val, unit: neg_mod(&self.unit, self.prec - self.val), prec: self.prec }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = cap((self.val.saturating_add(o.prec)).min(o.val.saturating_add(self.prec)));
        if self.is_zero() || o.is_zero() {
            return Self::zero(prec);
        }
        let val = self.val + o.val;
        let r = prec - val;
        PAdic { val, unit: mask(&(&self.unit * &o.unit), r), prec }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            let p = if self.prec >= EXACT { EXACT } else { self.prec - o.val };
            return Ok(Self::zero(p));
        }
        let val = self.val - o.val;
        let rel = (self.prec - self.val).min(o.prec - o.val);
        let unit = mask(&(&self.unit * inv_odd(&o.unit, rel)), rel);
        Ok(PAdic { val, unit, prec: val + rel })
    }

    pub fn inverse(&self) -> Result<Self> {
        PAdic::one(EXACT).div(self)
    }

    /// Multiplication by 2^k (k may be negative); exact.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero(if self.prec >= EXACT { EXACT } else { self.prec + k });
        }
        PAdic { val: self.val + k, unit: self.unit.clone(), prec: self.prec + k }
    }

    /// Multiplication by an exact integer.
    pub fn mul_int(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::exact_zero();
        }
        let v = tz(k.magnitude());
        if self.is_zero() {
            return self.shl(v);
        }
        let r = self.prec - self.val;
        let odd = k.magnitude() >> v as usize;
        let mut u = mask(&(&self.unit * odd), r);
        if k.sign() == Sign::Minus {
            u = neg_mod(&u, r);
        }
        PAdic { val: self.val + v, unit: u, prec: self.prec + v }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul_int(&BigInt::from(k))
    }

    /// Exact division by an integer (its valuation is deducted from precision).
    pub fn div_int(&self, k: &BigInt) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let v = tz(k.magnitude());
        if self.is_zero() {
            return Ok(self.shl(-v));
        }
        let r = self.prec - self.val;
        let odd = mask(&(k.magnitude() >> v as usize), r);
        let mut u = mask(&(&self.unit * inv_odd(&odd, r)), r);
        if k.sign() == Sign::Minus {
            u = neg_mod(&u, r);
        }
        Ok(PAdic { val: self.val - v, unit: u, prec: self.prec - v })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = PAdic::one(EXACT);
        if e == 0 {
            return PAdic::one(self.prec.max(1));
        }
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                acc = if first { base.clone() } else { acc.mul(&base) };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Agreement modulo 2^bits; false when either operand is not known that far.
    pub fn agrees_mod(&self, o: &Self, bits: i64) -> bool {
        if self.prec < bits || o.prec < bits {
            return false;
        }
        let d = self.with_precision(bits).sub(&o.with_precision(bits));
        d.is_zero()
    }

    /// Agreement modulo the smaller of the two precisions.
    pub fn agrees(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    /// Residue of a unit modulo 8.
    pub fn unit_mod8(&self) -> Option<u64> {
        if !self.is_unit() {
            return None;
        }
        mask(&self.unit, 3).to_u64()
    }

    /// Signed decimal representative of an integral value, for display.
    pub fn to_bigint_rep(&self) -> Option<BigInt> {
        self.residue().map(BigInt::from)
    }
}

impl fmt::Debug for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            if self.prec >= EXACT {
                write!(f, "0")
            } else {
                write!(f, "O(2^{})", self.prec)
            }
        } else {
            write!(f, "2^{}*{} + O(2^{})", self.val, self.unit, self.prec)
        }
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

macro_rules! forward_ops {
    ($t:ty) => {
        impl Add<&$t> for &$t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                <$t>::add(self, o)
            }
        }
        impl Sub<&$t> for &$t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                <$t>::sub(self, o)
            }
        }
        impl Mul<&$t> for &$t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                <$t>::mul(self, o)
            }
        }
        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                <$t>::neg(self)
            }
        }
    };
}

forward_ops!(PAdic);

/// x = sign · ⟨x⟩ with ⟨x⟩ ≡ 1 mod 4.
pub fn decompose(x: &PAdic) -> Result<(PAdic, i8)> {
    if !x.is_unit() {
        return Err(Error::NotUnit);
    }
    if x.relative_precision() < 2 {
        return Err(Error::Precision("need at least 2 bits to split off the sign".into()));
    }
    if mask(&x.unit, 2) == BigUint::one() {
        Ok((x.clone(), 1))
    } else {
        Ok((x.neg(), -1))
    }
}

/// ⟨x⟩, extended by ⟨x⟩ = 0 for even x.
pub fn angle(x: &PAdic) -> Result<PAdic> {
    if x.is_integral() && !x.is_unit() {
        return Ok(PAdic::exact_zero());
    }
    decompose(x).map(|(a, _)| a)
}

/// ⟨n⟩ for an odd rational integer, as an exact integer.
pub fn angle_int(n: i64) -> i64 {
    debug_assert!(n % 2 != 0);
    if n.rem_euclid(4) == 1 {
        n
    } else {
        -n
    }
}

fn log_series_terms(vz: i64, prec: i64) -> u64 {
    let mut k: u64 = 1;
    loop {
        let next = k + 1;
        let lower = next as i64 * vz - (63 - next.leading_zeros() as i64);
        if lower >= prec {
            return k;
        }
        k = next;
    }
}

/// log(1+z) for v(z) ≥ 2, with the tail cut once every remaining term is O(2^prec).
fn log1p(z: &PAdic, prec: i64) -> Result<PAdic> {
    let vz = z.val_bound();
    if vz < 2 {
        return Err(Error::Convergence(vz));
    }
    if z.is_zero() {
        return Ok(PAdic::zero(prec));
    }
    let k_max = log_series_terms(vz, prec);
    let mut acc = PAdic::zero(EXACT);
    let mut zk = z.clone();
    for k in 1..=k_max {
        let term = zk.div_int(&BigInt::from(k))?;
        acc = if k % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        zk = zk.mul(z);
    }
    Ok(acc.with_precision(prec))
}

/// The Iwasawa logarithm on ℤ₂^×: log(-1) = 0, series on 1 + 4ℤ₂.
pub fn iwasawa_log(x: &PAdic) -> Result<PAdic> {
    let (a, _) = decompose(x)?;
    let z = a.sub(&PAdic::one(a.precision()));
    log1p(&z, x.precision())
}

/// 𝓛(x) = log⟨x⟩ / log u.
pub fn curly_l(x: &PAdic, u: &PAdic) -> Result<PAdic> {
    if u.unit_mod8() != Some(5) {
        return Err(Error::BadBase);
    }
    let lx = iwasawa_log(x)?;
    let lu = iwasawa_log(u)?;
    lx.div(&lu)
}

/// exp(z) for v(z) ≥ 2 (used to test log).
pub fn exp(z: &PAdic) -> Result<PAdic> {
    let vz = z.val_bound();
    if vz < 2 {
        return Err(Error::Convergence(vz));
    }
    let prec = z.precision();
    let mut acc = PAdic::one(prec);
    let mut term = PAdic::one(prec);
    let mut k: u64 = 1;
    loop {
        // v(z^k/k!) ≥ k·vz − (k − 1)
        if (k as i64) * vz - (k as i64 - 1) >= prec {
            break;
        }
        term = term.mul(z).div_int(&BigInt::from(k))?;
        acc = acc.add(&term);
        k += 1;
    }
    Ok(acc.with_precision(prec))
}

/// Square root in ℚ₂, normalized so the unit part is ≡ 1 mod 4.
pub fn hensel_sqrt(d: &PAdic) -> Result<PAdic> {
    if d.is_zero() {
        return Ok(PAdic::zero(d.precision().div_euclid(2)));
    }
    if d.val % 2 != 0 {
        return Err(Error::NotSquare);
    }
    let r = d.relative_precision();
    if r < 3 {
        return Err(Error::Precision("need 3 bits to test squareness".into()));
    }
    if mask(&d.unit, 3) != BigUint::one() {
        return Err(Error::NotSquare);
    }
    // inverse square root by y ← y(3 − u y²)/2, carried at extra width
    let w = r + 24;
    let u = &d.unit;
    let mut y = BigUint::one();
    for _ in 0..64 {
        let t = mask(&(u * &y * &y), w);
        if mask(&t, r + 2) == BigUint::one() {
            break;
        }
        let three = BigUint::from(3u32) + (BigUint::one() << w as usize);
        let h = mask(&(three - t), w) >> 1usize;
        y = mask(&(&y * h), w - 1);
    }
    let mut s = mask(&(u * &y), r - 1);
    if mask(&s, 2) != BigUint::one() {
        s = neg_mod(&s, r - 1);
    }
    let half = d.val / 2;
    Ok(PAdic { val: half, unit: s, prec: half + r - 1 })
}

/// Element re + im·i of ℚ₂(i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicGaussian {
    pub re: PAdic,
    pub im: PAdic,
}

impl PAdicGaussian {
    pub fn new(re: PAdic, im: PAdic) -> Self {
        PAdicGaussian { re, im }
    }

    pub fn real(re: PAdic) -> Self {
        PAdicGaussian { re, im: PAdic::exact_zero() }
    }

    pub fn zero(prec: i64) -> Self {
        PAdicGaussian { re: PAdic::zero(prec), im: PAdic::zero(prec) }
    }

    pub fn one(prec: i64) -> Self {
        PAdicGaussian { re: PAdic::one(prec), im: PAdic::zero(prec) }
    }

    /// i^k at the given precision.
    pub fn i_pow(k: i64, prec: i64) -> Self {
        let one = PAdic::one(prec);
        let z = PAdic::zero(prec);
        match k.rem_euclid(4) {
            0 => Self::new(one, z),
            1 => Self::new(z, one),
            2 => Self::new(one.neg(), z),
            _ => Self::new(z, one.neg()),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        Self::new(re, im)
    }

    pub fn scale(&self, x: &PAdic) -> Self {
        Self::new(self.re.mul(x), self.im.mul(x))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg())
    }

    pub fn norm(&self) -> PAdic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn div_padic(&self, x: &PAdic) -> Result<Self> {
        Ok(Self::new(self.re.div(x)?, self.im.div(x)?))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.conj()).div_padic(&o.norm())
    }

    pub fn precision(&self) -> i64 {
        self.re.precision().min(self.im.precision())
    }

    pub fn val_bound(&self) -> i64 {
        self.re.val_bound().min(self.im.val_bound())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn with_precision(&self, p: i64) -> Self {
        Self::new(self.re.with_precision(p), self.im.with_precision(p))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn agrees_mod(&self, o: &Self, bits: i64) -> bool {
        self.re.agrees_mod(&o.re, bits) && self.im.agrees_mod(&o.im, bits)
    }
}

forward_ops!(PAdicGaussian);

/// Element x + y√d of ℚ₂(√d) (or ℚ₂ × ℚ₂ when d is a 2-adic square).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicQuad {
    pub x: PAdic,
    pub y: PAdic,
    pub d: i64,
}

impl PAdicQuad {
    pub fn new(x: PAdic, y: PAdic, d: i64) -> Self {
        PAdicQuad { x, y, d }
    }

    /// (a + b√d)/den with exact integers.
    pub fn from_surd(a: &BigInt, b: &BigInt, den: &BigInt, d: i64, prec: i64) -> Result<Self> {
        let q = |n: &BigInt| BigRational::new(n.clone(), den.clone());
        Ok(PAdicQuad {
            x: PAdic::from_rational(&q(a), prec),
            y: PAdic::from_rational(&q(b), prec),
            d,
        })
    }

    pub fn one(prec: i64, d: i64) -> Self {
        PAdicQuad { x: PAdic::one(prec), y: PAdic::exact_zero(), d }
    }

    pub fn add(&self, o: &Self) -> Self {
        PAdicQuad { x: self.x.add(&o.x), y: self.y.add(&o.y), d: self.d }
    }

    pub fn sub(&self, o: &Self) -> Self {
        PAdicQuad { x: self.x.sub(&o.x), y: self.y.sub(&o.y), d: self.d }
    }

    pub fn neg(&self) -> Self {
        PAdicQuad { x: self.x.neg(), y: self.y.neg(), d: self.d }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let x = self.x.mul(&o.x).add(&self.y.mul(&o.y).mul_i64(self.d));
        let y = self.x.mul(&o.y).add(&self.y.mul(&o.x));
        PAdicQuad { x, y, d: self.d }
    }

    pub fn conj(&self) -> Self {
        PAdicQuad { x: self.x.clone(), y: self.y.neg(), d: self.d }
    }

    pub fn norm(&self) -> PAdic {
        self.x.mul(&self.x).sub(&self.y.mul(&self.y).mul_i64(self.d))
    }

    pub fn div_padic(&self, s: &PAdic) -> Result<Self> {
        Ok(PAdicQuad { x: self.x.div(s)?, y: self.y.div(s)?, d: self.d })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = PAdicQuad::one(self.precision().max(1), self.d);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn weight(&self) -> i64 {
        self.x.val_bound().min(self.y.val_bound())
    }

    pub fn precision(&self) -> i64 {
        self.x.precision().min(self.y.precision())
    }

    /// Image under √d ↦ root (root² = d in ℚ₂).
    pub fn embed(&self, root: &PAdic) -> PAdic {
        self.x.add(&self.y.mul(root))
    }

    /// log by the power trick: log(x) = log(x^m)/m with x^m ≡ 1 mod 4.
    pub fn log(&self) -> Result<PAdicQuad> {
        if !self.norm().is_unit() {
            return Err(Error::NotUnit);
        }
        let one = PAdicQuad::one(self.precision(), self.d);
        let mut p = self.clone();
        let mut m: u64 = 1;
        loop {
            let z = p.sub(&one);
            if z.weight() >= 2 {
                let prec = z.precision();
                let k_max = log_series_terms(z.weight().max(2), prec);
                let mut acc = PAdicQuad { x: PAdic::zero(EXACT), y: PAdic::zero(EXACT), d: self.d };
                let mut zk = z.clone();
                for k in 1..=k_max {
                    let kk = BigInt::from(k);
                    let term = PAdicQuad { x: zk.x.div_int(&kk)?, y: zk.y.div_int(&kk)?, d: self.d };
                    acc = if k % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
                    zk = zk.mul(&z);
                }
                let acc = PAdicQuad {
                    x: acc.x.with_precision(prec),
                    y: acc.y.with_precision(prec),
                    d: self.d,
                };
                let mm = BigInt::from(m);
                return Ok(PAdicQuad { x: acc.x.div_int(&mm)?, y: acc.y.div_int(&mm)?, d: self.d });
            }
            m += 1;
            if m > 512 {
                return Err(Error::Precision("no principal power found".into()));
            }
            p = p.mul(self);
        }
    }
}

forward_ops!(PAdicQuad);

/// Exact 2-adic valuation of a nonzero integer.
pub fn v2(x: &BigInt) -> i64 {
    tz(x.magnitude())
}

/// v₂(n!).
pub fn v2_factorial(n: u64) -> i64 {
    let mut v = 0;
    let mut k = n;
    while k > 0 {
        k /= 2;
        v += k as i64;
    }
    v
}

/// Integer square root of a non-negative BigInt.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative());
    n.sqrt()
}

#[allow(dead_code)]
pub(crate) fn is_odd(x: &BigInt) -> bool {
    x.is_odd()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64) -> PAdic {
        PAdic::from_i64(x, 64)
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose(&p(5)).unwrap(), (p(5), 1));
        assert_eq!(decompose(&p(3)).unwrap(), (p(-3), -1));
        assert_eq!(decompose(&p(145)).unwrap(), (p(145), 1));
        assert_eq!(decompose(&p(6)), Err(Error::NotUnit));
    }

    #[test]
    fn division_by_power_of_two_costs_precision() {
        let x = PAdic::from_i64(48, 40);
        let q = x.div(&PAdic::from_i64(8, 100)).unwrap();
        assert_eq!(q.precision(), 37);
        assert!(q.agrees(&PAdic::from_i64(6, 37)));
    }

    #[test]
    fn rational_reduction() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(3));
        let x = PAdic::from_rational(&q, 50);
        assert!(x.mul(&p(3)).agrees_mod(&p(1), 50));
        let h = BigRational::new(BigInt::from(-5), BigInt::from(12));
        let y = PAdic::from_rational(&h, 50);
        assert_eq!(y.valuation(), Some(-2));
        assert!(y.mul(&p(12)).agrees_mod(&p(-5), 48));
    }

    #[test]
    fn log_basics() {
        let one = p(1);
        assert!(iwasawa_log(&one).unwrap().is_zero());
        let u = PAdic::from_i64(5, 80);
        let l1 = iwasawa_log(&u).unwrap();
        let l2 = iwasawa_log(&u.mul(&u)).unwrap();
        assert!(l2.agrees_mod(&l1.mul_i64(2), 20));
        assert_eq!(l1.valuation(), Some(2));
        // log(-x) = log(x)
        assert!(iwasawa_log(&p(-7)).unwrap().agrees(&iwasawa_log(&p(7)).unwrap()));
    }

    #[test]
    fn exp_log_inverse() {
        let z = PAdic::from_i64(8 * 13, 60);
        let e = exp(&z).unwrap();
        let back = iwasawa_log(&e).unwrap();
        assert!(back.agrees_mod(&z, 50));
    }

    #[test]
    fn curly_l_examples() {
        let u = PAdic::from_i64(-3, 100);
        assert!(curly_l(&u, &u).unwrap().agrees_mod(&p(1), 60));
        assert!(curly_l(&p(1), &u).unwrap().is_zero());
        let u3 = u.pow(3);
        assert!(curly_l(&u3, &u).unwrap().agrees_mod(&p(3), 60));
        assert_eq!(curly_l(&p(7), &p(3)), Err(Error::BadBase));
    }

    #[test]
    fn hensel_examples() {
        assert!(hensel_sqrt(&p(1)).unwrap().agrees_mod(&p(1), 60));
        assert!(hensel_sqrt(&p(9)).unwrap().agrees_mod(&p(-3), 60));
        let r = hensel_sqrt(&PAdic::from_i64(145, 128)).unwrap();
        assert!(r.mul(&r).agrees_mod(&p(145), 64));
        assert_eq!(r.unit_mod8().unwrap() % 4, 1);
        let r4 = hensel_sqrt(&PAdic::from_i64(4 * 17, 64)).unwrap();
        assert!(r4.mul(&r4).agrees_mod(&PAdic::from_i64(68, 64), 60));
        assert_eq!(hensel_sqrt(&p(5)), Err(Error::NotSquare));
        assert_eq!(hensel_sqrt(&p(2)), Err(Error::NotSquare));
    }

    #[test]
    fn gaussian_conjugation() {
        let a = PAdicGaussian::new(p(3), p(7));
        let b = PAdicGaussian::new(p(-2), p(5));
        assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
        assert!(a.norm().agrees(&p(58)));
        assert!(PAdicGaussian::i_pow(1, 40).mul(&PAdicGaussian::i_pow(1, 40)).agrees_mod(&PAdicGaussian::i_pow(2, 40), 40));
        let r = PAdicGaussian::real(p(11));
        assert_eq!(r.conj(), r);
    }

    #[test]
    fn quad_log_is_pure_surd_for_norm_one_units() {
        // ε = 10 + 3√11, norm 1
        let e = PAdicQuad::from_surd(&BigInt::from(10), &BigInt::from(3), &BigInt::from(1), 11, 96).unwrap();
        let l = e.log().unwrap();
        assert!(l.x.is_zero());
        // ε = (1 + √5)/2, norm -1
        let g = PAdicQuad::from_surd(&BigInt::from(1), &BigInt::from(1), &BigInt::from(2), 5, 96).unwrap();
        let lg = g.log().unwrap();
        assert!(lg.x.is_zero());
        let lg2 = g.mul(&g).log().unwrap();
        assert!(lg2.y.agrees_mod(&lg.y.mul_i64(2), 40));
    }

    #[test]
    fn split_quad_embedding() {
        let d = 145;
        let r = hensel_sqrt(&PAdic::from_i64(d, 128)).unwrap();
        let a = PAdicQuad::new(p(3), p(2), d);
        let b = PAdicQuad::new(p(-1), p(5), d);
        let ab = a.mul(&b);
        assert!(ab.embed(&r).agrees_mod(&a.embed(&r).mul(&b.embed(&r)), 50));
        let rn = r.neg();
        assert!(ab.embed(&rn).agrees_mod(&a.embed(&rn).mul(&b.embed(&rn)), 50));
        assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn valuation_of_u_powers_minus_one() {
        let u = PAdic::from_i64(-3, 200);
        let one = PAdic::one(200);
        for k in 1..=64u64 {
            let t = u.pow(k).sub(&one);
            assert_eq!(t.valuation(), Some(2 + v2_factorial(k) - v2_factorial(k - 1)));
        }
    }
}
