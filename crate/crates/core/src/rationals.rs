//! Exact rationals, Bernoulli numbers, real Dirichlet characters and the
//! classical / 2-adic abelian L-values used as oracles.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::PAdic;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

static BERNOULLI: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();

/// B_n with B_1 = −1/2, from Σ_{k≤n} C(n+1,k) B_k = 0. Memoized.
pub fn bernoulli(n: usize) -> Rational {
    let cache = BERNOULLI.get_or_init(|| Mutex::new(vec![Rational::one()]));
    {
        let t = cache.lock().unwrap();
        if let Some(b) = t.get(n) {
            return b.clone();
        }
    }
    // compute outside the lock from a snapshot; concurrent duplicates agree
    let mut table = cache.lock().unwrap().clone();
    while table.len() <= n {
        let m = table.len();
        let mut s = Rational::zero();
        let mut c = BigInt::one(); // C(m+1, k)
        for (k, b) in table.iter().enumerate() {
            if !b.is_zero() {
                s += b * &c;
            }
            c = c * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        table.push(-s / int(m as i64 + 1));
    }
    let b = table[n].clone();
    let mut t = cache.lock().unwrap();
    if t.len() < table.len() {
        *t = table;
    }
    b
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// B_n(x) = Σ C(n,k) B_k x^{n−k}.
pub fn bernoulli_poly(n: usize, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for k in 0..=n {
        acc = acc * x + int(binomial(n as u64, k as u64)) * bernoulli(k);
    }
    // Horner above consumes coefficients in the order B_0..B_n, i.e. x^n..x^0
    acc
}

/// Kronecker symbol (d/n) for n ≥ 1.
pub fn kronecker(d: i64, n: i64) -> i32 {
    assert!(n >= 1, "kronecker symbol needs n >= 1");
    let mut n = n;
    let mut r = 1;
    while n % 2 == 0 {
        n /= 2;
        if d % 2 == 0 {
            return 0;
        }
        if matches!(d.rem_euclid(8), 3 | 5) {
            r = -r;
        }
    }
    r * jacobi(d.rem_euclid(n), n)
}

/// Jacobi symbol (a/n) for odd n ≥ 1.
pub fn jacobi(a: i64, n: i64) -> i32 {
    let (mut a, mut n) = (a.rem_euclid(n), n);
    let mut r = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                r = -r;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            r = -r;
        }
        a %= n;
    }
    if n == 1 {
        r
    } else {
        0
    }
}

pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factor(n) == vec![(n, 1)]
}

pub fn is_squarefree(n: u64) -> bool {
    factor(n).iter().all(|&(_, e)| e == 1)
}

pub fn primes_up_to(b: u64) -> Vec<u64> {
    let b = b as usize;
    let mut sieve = vec![true; b + 1];
    let mut out = Vec::new();
    for i in 2..=b {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= b {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

/// The fundamental discriminant of ℚ(√n) for a nonzero non-square n.
pub fn fundamental_discriminant(n: i64) -> i64 {
    let sign = n.signum();
    let mut core: i64 = sign;
    for (p, e) in factor(n.unsigned_abs()) {
        if e % 2 == 1 {
            core *= p as i64;
        }
    }
    if core.rem_euclid(4) == 1 {
        core
    } else {
        4 * core
    }
}

/// Prime discriminants attached to p: p* for odd p, and −4, 8, −8 for p = 2.
pub fn prime_discriminants(p: u64) -> Vec<i64> {
    if p == 2 {
        vec![-4, 8, -8]
    } else if p % 4 == 1 {
        vec![p as i64]
    } else {
        vec![-(p as i64)]
    }
}

/// Unordered pairs {D1, D2} of positive fundamental discriminants with
/// D1·D2 ∈ d·ℚ^{×2}, built from prime discriminants over `primes`.
pub fn genus_pair_candidates(d: i64, primes: &[u64]) -> Vec<(i64, i64)> {
    let mut opts: Vec<Vec<i64>> = Vec::new();
    for &p in primes {
        let mut o = vec![1];
        o.extend(prime_discriminants(p));
        opts.push(o);
    }
    let mut discs = vec![1i64];
    for o in &opts {
        discs = discs.iter().flat_map(|&x| o.iter().map(move |&y| x * y)).collect();
    }
    let mut out: Vec<(i64, i64)> = Vec::new();
    for &d1 in &discs {
        if d1 <= 1 {
            continue;
        }
        let d2 = fundamental_discriminant(d1 * d);
        if d2 <= 1 {
            continue;
        }
        let pair = (d1.min(d2), d1.max(d2));
        if !out.contains(&pair) {
            out.push(pair);
        }
    }
    out.sort();
    out
}

/// A real-valued Dirichlet character given by its value table mod `modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirichletChar {
    pub modulus: u64,
    values: Vec<i8>,
}

impl DirichletChar {
    pub fn from_fn(modulus: u64, f: impl Fn(u64) -> i8) -> Self {
        let values = (0..modulus)
            .map(|a| if a.gcd(&modulus) == 1 { f(a) } else { 0 })
            .collect();
        DirichletChar { modulus, values }
    }

    pub fn trivial(modulus: u64) -> Self {
        Self::from_fn(modulus, |_| 1)
    }

    /// n ↦ (D/n), modulus |D|.
    pub fn kronecker(disc: i64) -> Self {
        let m = disc.unsigned_abs();
        Self::from_fn(m, |a| if a == 0 && m == 1 { 1 } else { kronecker(disc, a.max(1) as i64) as i8 })
            .fixup_mod_one()
    }

    fn fixup_mod_one(mut self) -> Self {
        if self.modulus == 1 {
            self.values = vec![1];
        }
        self
    }

    /// The sign character of conductor 4 (ω on odd integers).
    pub fn omega() -> Self {
        Self::from_fn(4, |a| if a % 4 == 1 { 1 } else { -1 })
    }

    pub fn eval(&self, a: i64) -> i8 {
        self.values[a.rem_euclid(self.modulus as i64) as usize]
    }

    /// Same character viewed at modulus m (a multiple of the current modulus).
    pub fn lift(&self, m: u64) -> Self {
        assert!(m % self.modulus == 0);
        Self::from_fn(m, |a| self.values[(a % self.modulus) as usize])
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = self.modulus.lcm(&o.modulus);
        Self::from_fn(m, |a| self.values[(a % self.modulus) as usize] * o.values[(a % o.modulus) as usize])
    }

    pub fn pow(&self, n: u32) -> Self {
        Self::from_fn(self.modulus, |a| self.values[a as usize].pow(n))
    }

    pub fn is_even(&self) -> bool {
        self.modulus <= 2 || self.eval(-1) == 1
    }

    pub fn is_trivial(&self) -> bool {
        (0..self.modulus).all(|a| self.values[a as usize] != -1)
    }

    /// Smallest m | modulus through which the character factors.
    pub fn conductor(&self) -> u64 {
        let mut best = self.modulus;
        for (p, _) in factor(self.modulus) {
            while best % p == 0 && self.factors_through(best / p) {
                best /= p;
            }
        }
        best
    }

    fn factors_through(&self, m: u64) -> bool {
        // χ(a) = χ(b) whenever a ≡ b mod m and both are units mod the modulus
        (0..self.modulus).all(|a| {
            let va = self.values[a as usize];
            va == 0 || {
                let r = a % m;
                (0..self.modulus / m).all(|k| {
                    let vb = self.values[(r + k * m) as usize];
                    vb == 0 || vb == va
                })
            }
        })
    }

    pub fn primitive(&self) -> Self {
        let c = self.conductor();
        let mut table = vec![0i8; c as usize];
        for a in 0..self.modulus {
            let v = self.values[a as usize];
            if v != 0 {
                table[(a % c) as usize] = v;
            }
        }
        let t = table.clone();
        Self::from_fn(c, move |a| t[a as usize])
    }
}

/// B_{n,χ} = f^{n−1} Σ_{a=1}^{f} χ(a) B_n(a/f), f the modulus of χ.
pub fn gen_bernoulli(n: usize, chi: &DirichletChar) -> Rational {
    let f = chi.modulus;
    // Σ_a χ(a) B_n(a/f) f^{n−1} = Σ_k C(n,k) B_k f^{k−1} Σ_a χ(a) a^{n−k}
    let mut power_sums = vec![BigInt::zero(); n + 1];
    for a in 1..=f {
        let c = chi.eval(a as i64);
        if c == 0 {
            continue;
        }
        let ab = BigInt::from(a);
        let mut p = BigInt::one();
        for s in power_sums.iter_mut() {
            if c > 0 {
                *s += &p;
            } else {
                *s -= &p;
            }
            p *= &ab;
        }
    }
    let fb = int(f as i64);
    let mut acc = Rational::zero();
    for k in 0..=n {
        let b = bernoulli(k);
        if b.is_zero() {
            continue;
        }
        let fk = if k == 0 { fb.recip() } else { int(BigInt::from(f).pow(k as u32 - 1)) };
        acc += int(binomial(n as u64, k as u64)) * b * fk * int(power_sums[n - k].clone());
    }
    acc
}

/// L(1−n, χ) = −B_{n,χ}/n (for the modulus-f, possibly imprimitive, character).
pub fn abelian_l_exact(n: usize, chi: &DirichletChar) -> Rational {
    -gen_bernoulli(n, chi) / int(n as i64)
}

/// ζ(1−n) = −B_n/n.
pub fn riemann_zeta_neg(n: usize) -> Rational {
    if n == 1 {
        return rat(-1, 2);
    }
    -bernoulli(n) / int(n as i64)
}

/// The rational whose 2-adic image is L_{ℚ,S}(1−n, χ) for an even real χ:
/// L(1−n, χω^n) computed at modulus lcm(f,4) (removing the Euler factor at 2)
/// times (1 − χω^n(p) p^{n−1}) for each odd p ∈ S not dividing the modulus.
pub fn abelian_l_2adic_exact(n: usize, chi: &DirichletChar, s: &[u64]) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Invalid("n must be >= 1".into()));
    }
    if !chi.is_even() {
        return Err(Error::Invalid("odd character".into()));
    }
    let m = chi.modulus.lcm(&4);
    let psi = chi.lift(m).mul(&DirichletChar::omega().pow(n as u32).lift(m));
    let mut v = abelian_l_exact(n, &psi);
    for &p in s {
        if p == 2 || m % p == 0 {
            continue;
        }
        let pn = int(BigInt::from(p).pow(n as u32 - 1));
        v *= Rational::one() - int(psi.eval(p as i64) as i64) * pn;
    }
    Ok(v)
}

pub fn abelian_l_2adic(n: usize, chi: &DirichletChar, s: &[u64], prec: i64) -> Result<PAdic> {
    Ok(PAdic::from_rational(&abelian_l_2adic_exact(n, chi, s)?, prec))
}

/// Denominator of x is odd.
pub fn is_two_integral(x: &Rational) -> bool {
    x.denom().is_odd()
}

pub fn v2_rational(x: &Rational) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let tz = |n: &BigInt| n.abs().trailing_zeros().unwrap_or(0) as i64;
    Some(tz(x.numer()) - tz(x.denom()))
}
