//! Real quadratic fields F = ℚ(√d): integers x + yγ, ideals in Hermite
//! normal form over (1, γ), prime decomposition, units, class numbers and
//! reduced representatives via the Klein sail.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::isqrt;
use crate::rationals::{is_squarefree, kronecker, primes_up_to};

/// x + yγ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadInt {
    pub x: BigInt,
    pub y: BigInt,
}

impl QuadInt {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        QuadInt { x: x.into(), y: y.into() }
    }

    pub fn int(x: impl Into<BigInt>) -> Self {
        QuadInt { x: x.into(), y: BigInt::zero() }
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadInt { x: &self.x + &o.x, y: &self.y + &o.y }
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadInt { x: &self.x - &o.x, y: &self.y - &o.y }
    }

    pub fn neg(&self) -> Self {
        QuadInt { x: -&self.x, y: -&self.y }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        QuadInt { x: &self.x * k, y: &self.y * k }
    }

    pub fn div_int_exact(&self, k: &BigInt) -> Option<Self> {
        let (qx, rx) = self.x.div_rem(k);
        let (qy, ry) = self.y.div_rem(k);
        (rx.is_zero() && ry.is_zero()).then_some(QuadInt { x: qx, y: qy })
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            write!(f, "{}", self.x)
        } else if self.y.is_negative() {
            write!(f, "{} - {}γ", self.x, -&self.y)
        } else {
            write!(f, "{} + {}γ", self.x, self.y)
        }
    }
}

/// floor((P + Q√d)/R) for R ≠ 0 and d not a square.
pub fn floor_surd(p: &BigInt, q: &BigInt, r: &BigInt, d: i64) -> BigInt {
    let (p, q, r) = if r.is_negative() { (-p, -q, -r) } else { (p.clone(), q.clone(), r.clone()) };
    let q2d = &q * &q * BigInt::from(d);
    let s = isqrt(&q2d);
    // floor(q√d)
    let fl = if q.is_negative() {
        let c = if &s * &s == q2d { s } else { s + 1 };
        -c
    } else {
        s
    };
    (p + fl).div_floor(&r)
}

/// Sign of P + Q√d.
pub fn sign_surd(p: &BigInt, q: &BigInt, d: i64) -> Ordering {
    let zero = BigInt::zero();
    match (p.cmp(&zero), q.cmp(&zero)) {
        (Ordering::Equal, c) | (c, Ordering::Equal) => c,
        (a, b) if a == b => a,
        (a, _) => {
            // opposite signs: compare P² with Q²d
            let lhs = p * p;
            let rhs = q * q * BigInt::from(d);
            match lhs.cmp(&rhs) {
                Ordering::Greater => a,
                Ordering::Less => a.reverse(),
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

/// Integral ideal aℤ + (b + cγ)ℤ in Hermite normal form (c | a, c | b, 0 ≤ b < a).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl Ideal {
    pub fn unit() -> Self {
        Ideal { a: 1, b: 0, c: 1 }
    }

    pub fn norm(&self) -> i128 {
        self.a * self.c
    }

    /// Largest rational integer dividing the ideal.
    pub fn content(&self) -> i128 {
        self.c
    }

    pub fn basis(&self) -> (QuadInt, QuadInt) {
        (QuadInt::int(self.a), QuadInt::new(self.b, self.c))
    }

    /// Coprime to (m) for a rational integer m.
    pub fn coprime_to_int(&self, m: u64) -> bool {
        (self.norm() as u128).gcd(&(m as u128)) == 1
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {} + {}γ]", self.a, self.b, self.c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

impl Splitting {
    pub fn name(&self) -> &'static str {
        match self {
            Splitting::Split => "split",
            Splitting::Inert => "inert",
            Splitting::Ramified => "ramified",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    pub p: u64,
    pub ideal: Ideal,
    pub kind: Splitting,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.ideal.norm() as u64
    }
}

/// F = ℚ(√d), 𝒪_F = ℤ + γℤ with γ² = tγ + n0.
#[derive(Clone, Debug)]
pub struct RealQuadField {
    pub d: i64,
    pub disc: i64,
    pub t: i64,
    pub n0: i64,
    /// Fundamental unit, ε > 1.
    pub eps: QuadInt,
    pub norm_eps: i64,
    /// Totally positive generator of the totally positive units.
    pub eps_plus: QuadInt,
    pub h: u64,
    pub h_plus: u64,
}

impl RealQuadField {
    pub fn new(d: i64) -> Result<Self> {
        if d <= 1 || !is_squarefree(d as u64) {
            return Err(Error::NotSquarefree(d));
        }
        let (t, n0, disc) = if d % 4 == 1 { (1, (d - 1) / 4, d) } else { (0, d, 4 * d) };
        let mut f = RealQuadField {
            d,
            disc,
            t,
            n0,
            eps: QuadInt::one(),
            norm_eps: 1,
            eps_plus: QuadInt::one(),
            h: 1,
            h_plus: 1,
        };
        let (eps, n) = f.fundamental_unit_cf();
        f.eps_plus = if n == 1 { eps.clone() } else { f.mul(&eps, &eps) };
        f.eps = eps;
        f.norm_eps = n;
        f.h_plus = class_number_plus(disc);
        f.h = if n == -1 { f.h_plus } else { f.h_plus / 2 };
        Ok(f)
    }

    /// The field with discriminant `disc`.
    pub fn from_disc(disc: i64) -> Result<Self> {
        let d = if disc % 4 == 0 { disc / 4 } else { disc };
        let f = Self::new(d)?;
        if f.disc != disc {
            return Err(Error::Invalid(format!("{disc} is not a fundamental discriminant")));
        }
        Ok(f)
    }

    pub fn gamma(&self) -> QuadInt {
        QuadInt::new(0, 1)
    }

    /// √d as an element of 𝒪_F.
    pub fn sqrt_d(&self) -> QuadInt {
        if self.t == 1 {
            QuadInt::new(-1, 2)
        } else {
            QuadInt::new(0, 1)
        }
    }

    pub fn mul(&self, u: &QuadInt, v: &QuadInt) -> QuadInt {
        let yy = &u.y * &v.y;
        QuadInt {
            x: &u.x * &v.x + &yy * self.n0,
            y: &u.x * &v.y + &v.x * &u.y + yy * self.t,
        }
    }

    pub fn pow(&self, u: &QuadInt, mut e: u64) -> QuadInt {
        let mut r = QuadInt::one();
        let mut b = u.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    pub fn conj(&self, u: &QuadInt) -> QuadInt {
        QuadInt { x: &u.x + &u.y * self.t, y: -&u.y }
    }

    pub fn norm(&self, u: &QuadInt) -> BigInt {
        &u.x * &u.x + &u.x * &u.y * self.t - &u.y * &u.y * self.n0
    }

    pub fn trace(&self, u: &QuadInt) -> BigInt {
        BigInt::from(2) * &u.x + &u.y * self.t
    }

    /// (P, Q, R) with u = (P + Q√d)/R.
    pub fn surd(&self, u: &QuadInt) -> (BigInt, BigInt, BigInt) {
        if self.t == 1 {
            (BigInt::from(2) * &u.x + &u.y, u.y.clone(), BigInt::from(2))
        } else {
            (u.x.clone(), u.y.clone(), BigInt::one())
        }
    }

    /// Sign under the embedding with √d > 0.
    pub fn sign(&self, u: &QuadInt) -> Ordering {
        let (p, q, _) = self.surd(u);
        sign_surd(&p, &q, self.d)
    }

    pub fn sign_conj(&self, u: &QuadInt) -> Ordering {
        self.sign(&self.conj(u))
    }

    pub fn is_totally_positive(&self, u: &QuadInt) -> bool {
        self.sign(u) == Ordering::Greater && self.sign_conj(u) == Ordering::Greater
    }

    /// floor(u/v) under the embedding √d > 0.
    pub fn floor_div(&self, u: &QuadInt, v: &QuadInt) -> BigInt {
        let z = self.mul(u, &self.conj(v));
        let n = self.norm(v);
        let (p, q, r) = self.surd(&z);
        floor_surd(&p, &q, &(r * n), self.d)
    }

    pub fn floor_div_conj(&self, u: &QuadInt, v: &QuadInt) -> BigInt {
        self.floor_div(&self.conj(u), &self.conj(v))
    }

    pub fn to_f64(&self, u: &QuadInt) -> (f64, f64) {
        let s = (self.d as f64).sqrt();
        let (p, q, r) = self.surd(u);
        let (p, q, r) = (p.to_f64().unwrap(), q.to_f64().unwrap(), r.to_f64().unwrap());
        ((p + q * s) / r, (p - q * s) / r)
    }

    /// u/v if it lies in 𝒪_F.
    pub fn div_exact(&self, u: &QuadInt, v: &QuadInt) -> Option<QuadInt> {
        let z = self.mul(u, &self.conj(v));
        z.div_int_exact(&self.norm(v))
    }

    /// Fundamental unit ε > 1 and its norm, from the continued fraction of γ.
    fn fundamental_unit_cf(&self) -> (QuadInt, i64) {
        let d = BigInt::from(self.d);
        let s = isqrt(&d);
        let (mut p, mut q) = if self.t == 1 { (BigInt::one(), BigInt::from(2)) } else { (BigInt::zero(), BigInt::one()) };
        let (mut h1, mut h2) = (BigInt::one(), BigInt::zero());
        let (mut k1, mut k2) = (BigInt::zero(), BigInt::one());
        loop {
            let a = (&p + &s).div_floor(&q);
            let h = &a * &h1 + &h2;
            let k = &a * &k1 + &k2;
            // p_k − q_k γ' = (p_k − t q_k) + q_k γ
            let u = QuadInt { x: &h - &k * self.t, y: k.clone() };
            let n = self.norm(&u);
            if n.abs().is_one() && self.sign(&u) == Ordering::Greater && u != QuadInt::one() {
                return (u, n.to_i64().unwrap());
            }
            h2 = std::mem::replace(&mut h1, h);
            k2 = std::mem::replace(&mut k1, k);
            p = &a * &q - &p;
            q = (&d - &p * &p) / &q;
        }
    }

    pub fn is_unit(&self, u: &QuadInt) -> bool {
        self.norm(u).abs().is_one()
    }

    // ---- ideals ----

    /// HNF of the ℤ-span of the given vectors (must have full rank).
    fn hnf(vecs: &[QuadInt]) -> Ideal {
        let mut piv: Option<(BigInt, BigInt)> = None;
        let mut g = BigInt::zero();
        for v in vecs {
            let mut v = (v.x.clone(), v.y.clone());
            match piv.take() {
                None => {
                    if v.1.is_zero() {
                        g = g.gcd(&v.0);
                    } else {
                        piv = Some(v);
                    }
                }
                Some(mut p) => {
                    while !v.1.is_zero() {
                        let q = &p.1 / &v.1;
                        p = (&p.0 - &q * &v.0, &p.1 - &q * &v.1);
                        std::mem::swap(&mut p, &mut v);
                    }
                    g = g.gcd(&v.0);
                    piv = Some(p);
                }
            }
        }
        let (mut b, mut c) = piv.expect("lattice of rank < 2");
        if c.is_negative() {
            b = -b;
            c = -c;
        }
        assert!(!g.is_zero(), "lattice of rank < 2");
        let b = b.mod_floor(&g);
        Ideal { a: g.to_i128().expect("ideal overflow"), b: b.to_i128().unwrap(), c: c.to_i128().unwrap() }
    }

    /// The ideal generated by `gens` over 𝒪_F.
    pub fn ideal(&self, gens: &[QuadInt]) -> Ideal {
        let g = self.gamma();
        let mut v = Vec::with_capacity(2 * gens.len());
        for x in gens {
            v.push(x.clone());
            v.push(self.mul(x, &g));
        }
        Self::hnf(&v)
    }

    pub fn principal(&self, x: &QuadInt) -> Ideal {
        self.ideal(std::slice::from_ref(x))
    }

    pub fn int_ideal(&self, n: i64) -> Ideal {
        let n = n.abs() as i128;
        Ideal { a: n, b: 0, c: n }
    }

    pub fn ideal_mul(&self, i: &Ideal, j: &Ideal) -> Ideal {
        let (a1, b1) = i.basis();
        let (a2, b2) = j.basis();
        Self::hnf(&[self.mul(&a1, &a2), self.mul(&a1, &b2), self.mul(&b1, &a2), self.mul(&b1, &b2)])
    }

    pub fn ideal_pow(&self, i: &Ideal, e: u32) -> Ideal {
        (0..e).fold(Ideal::unit(), |acc, _| self.ideal_mul(&acc, i))
    }

    pub fn ideal_add(&self, i: &Ideal, j: &Ideal) -> Ideal {
        let (a1, b1) = i.basis();
        let (a2, b2) = j.basis();
        Self::hnf(&[a1, b1, a2, b2])
    }

    pub fn ideal_conj(&self, i: &Ideal) -> Ideal {
        let (a, b) = i.basis();
        self.ideal(&[a, self.conj(&b)])
    }

    pub fn contains(&self, i: &Ideal, x: &QuadInt) -> bool {
        let c = BigInt::from(i.c);
        if !(&x.y % &c).is_zero() {
            return false;
        }
        let k = &x.y / &c;
        ((&x.x - k * BigInt::from(i.b)) % BigInt::from(i.a)).is_zero()
    }

    /// 𝔭 ∤ I for a prime ideal 𝔭.
    pub fn coprime_to_prime(&self, i: &Ideal, p: &Ideal) -> bool {
        let (a, b) = i.basis();
        !(self.contains(p, &a) && self.contains(p, &b))
    }

    /// Divide by the rational content.
    pub fn primitive_part(&self, i: &Ideal) -> Ideal {
        let c = i.c;
        Ideal { a: i.a / c, b: i.b / c, c: 1 }
    }

    /// Exact quotient I/J when J | I (checked).
    pub fn ideal_div(&self, i: &Ideal, j: &Ideal) -> Option<Ideal> {
        // I·J' = N(J)·(I/J)
        let p = self.ideal_mul(i, &self.ideal_conj(j));
        let n = j.norm();
        if p.c % n != 0 || p.a % n != 0 || p.b % n != 0 {
            return None;
        }
        Some(Ideal { a: p.a / n, b: p.b / n, c: p.c / n })
    }

    pub fn splitting(&self, p: u64) -> Splitting {
        match kronecker(self.disc, p as i64) {
            1 => Splitting::Split,
            -1 => Splitting::Inert,
            _ => Splitting::Ramified,
        }
    }

    /// Primes above p, split primes ordered by HNF b-entry.
    pub fn prime_decompose(&self, p: u64) -> Vec<PrimeIdeal> {
        let kind = self.splitting(p);
        if kind == Splitting::Inert {
            let pi = p as i128;
            return vec![PrimeIdeal { p, ideal: Ideal { a: pi, b: 0, c: pi }, kind }];
        }
        // roots r of x² − t x − n0 mod p give 𝔭 = (p, γ − r)
        let pi = p as i128;
        let mut out = Vec::new();
        for r in 0..pi {
            if (r * r - self.t as i128 * r - self.n0 as i128).rem_euclid(pi) == 0 {
                let ideal = Ideal { a: pi, b: (-r).rem_euclid(pi), c: 1 };
                out.push(PrimeIdeal { p, ideal, kind });
            }
        }
        out.sort();
        out.dedup();
        debug_assert_eq!(out.len(), if kind == Splitting::Split { 2 } else { 1 });
        out
    }

    /// Prime ideals of norm ≤ bound, sorted by (norm, HNF).
    pub fn primes_by_norm(&self, bound: u64) -> Vec<PrimeIdeal> {
        let mut out: Vec<PrimeIdeal> = primes_up_to(bound)
            .into_iter()
            .flat_map(|p| self.prime_decompose(p))
            .filter(|q| q.norm() <= bound)
            .collect();
        out.sort_by_key(|q| (q.norm(), q.ideal));
        out
    }

    /// All integral ideals of norm n, in HNF order.
    pub fn ideals_of_norm(&self, n: u64) -> Vec<Ideal> {
        let n = n as i128;
        let mut out = Vec::new();
        let mut c = 1i128;
        while c * c <= n {
            if n % (c * c) == 0 {
                let a1 = n / (c * c);
                for b1 in 0..a1 {
                    if (b1 * b1 + self.t as i128 * b1 - self.n0 as i128).rem_euclid(a1) == 0 {
                        out.push(Ideal { a: a1 * c, b: b1 * c, c });
                    }
                }
            }
            c += 1;
        }
        out.sort();
        out
    }

    // ---- Klein sail ----

    /// One period of boundary points w_i, …, w_j of the convex hull of the
    /// totally positive points of I, with w_j = ε₊·w_i. Consecutive pairs
    /// span unimodular cones tiling a fundamental domain for ⟨ε₊⟩.
    pub fn sail(&self, i: &Ideal) -> Vec<QuadInt> {
        let (a, bc) = i.basis();
        let mut prev = bc.neg();
        let mut cur = a;
        let mut seq = vec![cur.clone()];
        let mut index: HashMap<QuadInt, usize> = HashMap::from([(cur.clone(), 0)]);
        let eps_inv = self.conj(&self.eps_plus);
        for _ in 0..1_000_000 {
            let k = self.floor_div(&prev, &cur).max(self.floor_div_conj(&prev, &cur)) + 1;
            let next = cur.scale(&k).sub(&prev);
            let back = self.mul(&eps_inv, &next);
            seq.push(next.clone());
            if let Some(&s) = index.get(&back) {
                return seq.split_off(s);
            }
            index.insert(next.clone(), seq.len() - 1);
            prev = cur;
            cur = next;
        }
        panic!("sail walk did not close");
    }

    /// Canonical ideal of the narrow class of I.
    pub fn narrow_key(&self, i: &Ideal) -> Ideal {
        self.sail(i)
            .iter()
            .map(|w| self.primitive_part(&self.ideal_mul(i, &self.principal(&self.conj(w)))))
            .min()
            .unwrap()
    }

    /// Canonical ideal of the (wide) class of I.
    pub fn wide_key(&self, i: &Ideal) -> Ideal {
        let k = self.narrow_key(i);
        if self.norm_eps == -1 {
            return k;
        }
        k.min(self.narrow_key(&self.ideal_mul(i, &self.principal(&self.sqrt_d()))))
    }

    /// Totally positive generator of I, if I is narrowly principal.
    pub fn narrow_generator(&self, i: &Ideal) -> Option<QuadInt> {
        let n = BigInt::from(i.norm());
        self.sail(i).into_iter().find(|w| self.norm(w) == n)
    }

    /// A generator of I if I is principal.
    pub fn generator(&self, i: &Ideal) -> Option<QuadInt> {
        if let Some(w) = self.narrow_generator(i) {
            return Some(w);
        }
        let th = self.sqrt_d();
        let w = self.narrow_generator(&self.ideal_mul(i, &self.principal(&th)))?;
        self.mul(&w, &th).div_int_exact(&BigInt::from(self.d))
    }

    /// One least-norm ideal coprime to m in each narrow class, sorted by (norm, HNF).
    pub fn narrow_class_reps(&self, m: u64) -> Vec<Ideal> {
        self.class_reps(m, true)
    }

    pub fn wide_class_reps(&self, m: u64) -> Vec<Ideal> {
        self.class_reps(m, false)
    }

    fn class_reps(&self, m: u64, narrow: bool) -> Vec<Ideal> {
        let target = if narrow { self.h_plus } else { self.h } as usize;
        let mut seen = BTreeSet::new();
        let mut reps = Vec::new();
        let mut n = 1u64;
        while reps.len() < target {
            if n.gcd(&m) == 1 {
                for i in self.ideals_of_norm(n) {
                    let k = if narrow { self.narrow_key(&i) } else { self.wide_key(&i) };
                    if seen.insert(k) {
                        reps.push(i);
                    }
                }
            }
            n += 1;
        }
        reps
    }
}

/// Narrow class number of discriminant D > 0 (non-square): number of
/// cycles of reduced indefinite forms.
pub fn class_number_plus(disc: i64) -> u64 {
    let dd = disc as i128;
    let s = (disc as f64).sqrt() as i128;
    let s = (s - 2..=s + 2).filter(|x| x * x <= dd).max().unwrap();
    let mut reduced = BTreeSet::new();
    for b in 1..=s {
        if (b - dd).rem_euclid(2) != 0 {
            continue;
        }
        let ac = (b * b - dd) / 4; // = a·c < 0
        for a in 1..=ac.abs() {
            if ac % a != 0 {
                continue;
            }
            // √D − b < 2a < √D + b
            let lo = (2 * a + b) * (2 * a + b) > dd;
            let hi = 2 * a - b < 0 || (2 * a - b) * (2 * a - b) < dd;
            if lo && hi {
                for sa in [a, -a] {
                    let c = ac / sa;
                    if sa.gcd(&b).gcd(&c) == 1 {
                        reduced.insert((sa, b, c));
                    }
                }
            }
        }
    }
    let mut cycles = 0;
    let mut left = reduced.clone();
    while let Some(&start) = left.iter().next() {
        cycles += 1;
        let mut f = start;
        loop {
            left.remove(&f);
            let (_, b, c) = f;
            let m = 2 * c.abs();
            let b2 = s - (s + b).rem_euclid(m);
            let c2 = (b2 * b2 - dd) / (4 * c);
            f = (c, b2, c2);
            if f == start || !left.contains(&f) {
                break;
            }
        }
    }
    cycles
}
