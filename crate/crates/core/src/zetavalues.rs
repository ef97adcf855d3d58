//! Exact values of partial zeta functions of F at s = 1 − n via Shintani
//! cone decompositions, and the 𝔠-smoothed twisted values feeding the 2-adic
//! interpolation.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadfield::{Ideal, QuadInt, RealQuadField};
use crate::rationals::{abelian_l_exact, bernoulli, binomial, riemann_zeta_neg, DirichletChar, Rational};
use crate::rayclass::{QuarticCharacter, RayClassGroup};

/// Half-open simplicial cones {t₁w₁ + t₂w₂ : t₁ > 0, t₂ ≥ 0} tiling the
/// totally positive elements of an ideal modulo ⟨ε₊⟩.
#[derive(Clone, Debug)]
pub struct ConeDecomposition {
    pub ideal: Ideal,
    pub eps_plus: QuadInt,
    pub cones: Vec<(QuadInt, QuadInt)>,
}

pub fn shintani_decompose(field: &RealQuadField, ideal: &Ideal) -> ConeDecomposition {
    let sail = field.sail(ideal);
    let cones = sail.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    ConeDecomposition { ideal: *ideal, eps_plus: field.eps_plus.clone(), cones }
}

impl ConeDecomposition {
    /// Integer coordinates (t₁, t₂) of α in the basis of cone `i`.
    pub fn coordinates(&self, i: usize, a: &QuadInt) -> (BigInt, BigInt) {
        let (w1, w2) = &self.cones[i];
        let det = &w1.x * &w2.y - &w1.y * &w2.x;
        let t1 = (&a.x * &w2.y - &a.y * &w2.x) / &det;
        let t2 = (&w1.x * &a.y - &w1.y * &a.x) / &det;
        (t1, t2)
    }

    pub fn in_cone(&self, i: usize, a: &QuadInt) -> bool {
        let (t1, t2) = self.coordinates(i, a);
        t1.is_positive() && !t2.is_negative()
    }

    /// All (cone, k) with ε₊^k·α in the cone, for k in −range..=range.
    pub fn locate(&self, field: &RealQuadField, a: &QuadInt, range: i64) -> Vec<(usize, i64)> {
        let inv = field.conj(&self.eps_plus);
        let mut out = Vec::new();
        let mut x = a.clone();
        for _ in 0..range {
            x = field.mul(&x, &inv);
        }
        for k in -range..=range {
            for i in 0..self.cones.len() {
                if self.in_cone(i, &x) {
                    out.push((i, k));
                }
            }
            x = field.mul(&x, &self.eps_plus);
        }
        out
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |a, k| a * k)
}

/// Rows A[a][j] = C(a, j)·w^{a−j}·w'^j for a = 0..a_max, j = 0..j_max
/// (coefficients of (w + w'u)^a).
fn binomial_rows(field: &RealQuadField, w: &QuadInt, a_max: usize, j_max: usize) -> Vec<Vec<QuadInt>> {
    let wc = field.conj(w);
    let mut rows = vec![vec![QuadInt::zero(); j_max + 1]];
    rows[0][0] = QuadInt::one();
    for a in 1..=a_max {
        let prev = &rows[a - 1];
        let row: Vec<QuadInt> = (0..=j_max)
            .map(|j| {
                let mut v = field.mul(w, &prev[j]);
                if j > 0 {
                    v = v.add(&field.mul(&wc, &prev[j - 1]));
                }
                v
            })
            .collect();
        rows.push(row);
    }
    rows
}

/// c[n][l₁] with ζ(1−n; cone, x) = Σ_{l₁+l₂=2n} c[n][l₁]·B_{l₁}(x₁)B_{l₂}(x₂),
/// the sum running over N(z)^{n−1}, z = (x₁+k₁)w₁ + (x₂+k₂)w₂.
///
/// c[n][l₁] = ((n−1)!)²/(l₁!l₂!) · Re [u^{n−1}] (w₁ + w₁'u)^{l₁−1}(w₂ + w₂'u)^{l₂−1},
/// with (w + w'u)^{−1} expanded as a power series in u.
pub fn cone_coefficients(field: &RealQuadField, w1: &QuadInt, w2: &QuadInt, n_max: usize) -> Vec<Vec<Rational>> {
    let a_max = 2 * n_max;
    let r1 = binomial_rows(field, w1, a_max, n_max);
    let r2 = binomial_rows(field, w2, a_max, n_max);
    // N^{j+1}·[u^j](w + w'u)^{−1} = (−1)^j w'^{2j+1}
    let inverse_row = |w: &QuadInt| -> (Vec<QuadInt>, BigInt) {
        let wc = field.conj(w);
        let wc2 = field.mul(&wc, &wc);
        let mut out = Vec::with_capacity(n_max);
        let mut p = wc.clone();
        for j in 0..n_max {
            out.push(if j % 2 == 0 { p.clone() } else { p.neg() });
            p = field.mul(&p, &wc2);
        }
        (out, field.norm(w))
    };
    let (inv1, nw1) = inverse_row(w1);
    let (inv2, nw2) = inverse_row(w2);
    let facts: Vec<BigInt> = (0..=a_max).map(factorial).collect();
    let t = BigInt::from(field.t);
    let two = BigInt::from(2);
    (1..=n_max)
        .map(|n| {
            let pre = &facts[n - 1] * &facts[n - 1];
            (0..=2 * n)
                .map(|l1| {
                    let l2 = 2 * n - l1;
                    // Σ_j P[j]·Q[n−1−j] as (numerator, denominator)
                    let (num, den) = if l1 == 0 {
                        let mut s = QuadInt::zero();
                        let mut np = BigInt::one();
                        for j in (0..n).rev() {
                            // inv1[j]/N^{j+1} times row of w2; common denominator N^n
                            s = s.add(&field.mul(&inv1[j], &r2[l2 - 1][n - 1 - j]).scale(&np));
                            np *= &nw1;
                        }
                        (s, np)
                    } else if l2 == 0 {
                        let mut s = QuadInt::zero();
                        let mut np = BigInt::one();
                        for jj in (0..n).rev() {
                            s = s.add(&field.mul(&inv2[jj], &r1[l1 - 1][n - 1 - jj]).scale(&np));
                            np *= &nw2;
                        }
                        (s, np)
                    } else {
                        let mut s = QuadInt::zero();
                        for j in 0..n.min(l1) {
                            let jj = n - 1 - j;
                            if jj > l2 - 1 {
                                continue;
                            }
                            s = s.add(&field.mul(&r1[l1 - 1][j], &r2[l2 - 1][jj]));
                        }
                        (s, BigInt::one())
                    };
                    // rational part x + y·t/2
                    let re = &num.x * &two + &num.y * &t;
                    Rational::new(re * &pre, den * &two * &facts[l1] * &facts[l2])
                })
                .collect()
        })
        .collect()
}

/// ζ(1−n) summed over z = (x₁+k₁)w₁ + (x₂+k₂)w₂, k ≥ 0: Σ N(z)^{n−1}.
pub fn shintani_cone_value(field: &RealQuadField, w1: &QuadInt, w2: &QuadInt, x1: &Rational, x2: &Rational, n: usize) -> Rational {
    let c = cone_coefficients(field, w1, w2, n);
    (0..=2 * n)
        .map(|l1| &c[n - 1][l1] * crate::rationals::bernoulli_poly(l1, x1) * crate::rationals::bernoulli_poly(2 * n - l1, x2))
        .fold(Rational::zero(), |a, b| a + b)
}

/// lcm of the denominators of B_0..B_l.
fn bernoulli_denominators(l_max: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(l_max + 1);
    let mut acc = BigInt::one();
    for l in 0..=l_max {
        acc = acc.lcm(bernoulli(l).denom());
        out.push(acc.clone());
    }
    out
}

/// Ḃ_l(a) = D_l·m^l·B_l(a/m) as exact integers, a = 0..=m.
fn scaled_bernoulli(m: u64, l_max: usize, dens: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mb = BigInt::from(m);
    (0..=l_max)
        .map(|l| {
            let coeffs: Vec<BigInt> = (0..=l)
                .map(|k| {
                    let bk = bernoulli(k) * Rational::from_integer(dens[l].clone());
                    debug_assert!(bk.is_integer());
                    bk.to_integer() * binomial(l as u64, k as u64) * mb.pow(k as u32)
                })
                .collect();
            (0..=m)
                .map(|a| {
                    let ab = BigInt::from(a);
                    // Σ_k coeffs[k]·a^{l−k}, Horner from k = 0
                    coeffs.iter().fold(BigInt::zero(), |acc, c| acc * &ab + c)
                })
                .collect()
        })
        .collect()
}

/// Sums S[b][n−1] = Σ N(𝔟)^{n−1} over integral ideals 𝔟 coprime to m,
/// bucketed by `classify(rep index, α mod m)` where 𝔟 = (α)𝔡^{-1}, α ≫ 0,
/// 𝔡 running over `reps` (one per narrow class, coprime to m).
pub fn partial_zeta_sums<F>(field: &RealQuadField, reps: &[Ideal], m: u64, n_max: usize, n_buckets: usize, classify: F) -> Vec<Vec<Rational>>
where
    F: Fn(usize, (u64, u64)) -> Option<usize> + Sync,
{
    let l_max = 2 * n_max;
    let dens = bernoulli_denominators(l_max);
    let bdot = scaled_bernoulli(m, l_max, &dens);
    let work: Vec<(usize, QuadInt, QuadInt)> = reps
        .iter()
        .enumerate()
        .flat_map(|(i, d)| shintani_decompose(field, d).cones.into_iter().map(move |(a, b)| (i, a, b)))
        .collect();
    let mb = BigInt::from(m);
    let partials: Vec<Vec<Vec<Rational>>> = work
        .par_iter()
        .map(|(ri, w1, w2)| {
            let red = |z: &BigInt| z.mod_floor(&mb).to_u64().unwrap();
            let (r1, r2) = ((red(&w1.x), red(&w1.y)), (red(&w2.x), red(&w2.y)));
            // H[b][a][l] = Σ_{b' in bucket} Ḃ_l(b'), a = 1..=m
            let mut h = vec![vec![vec![BigInt::zero(); l_max + 1]; m as usize + 1]; n_buckets];
            let mut any = vec![vec![false; m as usize + 1]; n_buckets];
            for a in 1..=m {
                for b in 0..m {
                    let res = ((a * r1.0 + b * r2.0) % m, (a * r1.1 + b * r2.1) % m);
                    if let Some(k) = classify(*ri, res) {
                        any[k][a as usize] = true;
                        for (l, slot) in h[k][a as usize].iter_mut().enumerate() {
                            *slot += &bdot[l][b as usize];
                        }
                    }
                }
            }
            let c = cone_coefficients(field, w1, w2, n_max);
            let mut out = vec![vec![Rational::zero(); n_max]; n_buckets];
            for k in 0..n_buckets {
                for n in 1..=n_max {
                    let mut acc = Rational::zero();
                    for l1 in 0..=2 * n {
                        let l2 = 2 * n - l1;
                        if c[n - 1][l1].is_zero() {
                            continue;
                        }
                        let mut g = BigInt::zero();
                        for a in 1..=m as usize {
                            if any[k][a] {
                                g += &bdot[l1][a] * &h[k][a][l2];
                            }
                        }
                        if g.is_zero() {
                            continue;
                        }
                        acc += &c[n - 1][l1] * Rational::new(g, &dens[l1] * &dens[l2]);
                    }
                    out[k][n - 1] = acc;
                }
            }
            out
        })
        .collect();
    let m2 = Rational::from_integer(&mb * &mb);
    let mut total = vec![vec![Rational::zero(); n_max]; n_buckets];
    for ((ri, _, _), part) in work.iter().zip(partials) {
        let nd = Rational::from_integer(reps[*ri].norm().into());
        for k in 0..n_buckets {
            let mut nd_pow = Rational::one();
            for n in 1..=n_max {
                // m^{2(n−1)}/N𝔡^{n−1} times the B-scaling m^{−2n}
                total[k][n - 1] += &part[k][n - 1] / (&m2 * &nd_pow);
                nd_pow *= &nd;
            }
        }
    }
    total
}

/// ζ_F(1−n) through the cone decomposition.
pub fn dedekind_zeta_shintani(field: &RealQuadField, n: usize) -> Rational {
    let reps = field.narrow_class_reps(1);
    let s = partial_zeta_sums(field, &reps, 1, n, 1, |_, _| Some(0));
    s[0][n - 1].clone()
}

/// ζ_F(1−n) = ζ(1−n)·L(1−n, χ_{d_F}) from Bernoulli numbers.
pub fn dedekind_zeta_oracle(field: &RealQuadField, n: usize) -> Rational {
    riemann_zeta_neg(n) * abelian_l_exact(n, &DirichletChar::kronecker(field.disc))
}

/// ζ₂(τ_k; 1−n) for k = 0..3: sums over ideals 𝔟 coprime to m = lcm(f, 4)
/// with β(𝔟) = i^k, weighted by ω^n(N𝔟)·N𝔟^{n−1}.
#[derive(Clone, Debug)]
pub struct Zeta2Table {
    pub disc: i64,
    pub f: u64,
    pub beta: QuarticCharacter,
    pub values: [Vec<Rational>; 4],
}

impl Zeta2Table {
    pub fn n_max(&self) -> usize {
        self.values[0].len()
    }

    /// Σ over all classes with weights i^{jk}: the χ = β^j aggregate
    /// (Gaussian rationals returned as (re, im)).
    pub fn character_sum(&self, j: u8, n: usize) -> (Rational, Rational) {
        let mut re = Rational::zero();
        let mut im = Rational::zero();
        for k in 0..4u8 {
            let v = &self.values[k as usize][n - 1];
            match (j * k) % 4 {
                0 => re += v,
                1 => im += v,
                2 => re -= v,
                _ => im -= v,
            }
        }
        (re, im)
    }
}

type TableKey = (i64, u64, Vec<u8>);

fn table_cache() -> &'static Mutex<HashMap<TableKey, Arc<Zeta2Table>>> {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, Arc<Zeta2Table>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoized ζ₂ table (write-once per (d_F, f, β); larger n_max replaces).
pub fn zeta2_table(rcg: &RayClassGroup, beta: &QuarticCharacter, n_max: usize) -> Result<Arc<Zeta2Table>> {
    let key = (rcg.field.disc, rcg.f, beta.exps.clone());
    if let Some(t) = table_cache().lock().unwrap().get(&key) {
        if t.n_max() >= n_max {
            return Ok(t.clone());
        }
    }
    let t = Arc::new(compute_zeta2_table(rcg, beta, n_max)?);
    let mut cache = table_cache().lock().unwrap();
    let entry = cache.entry(key).or_insert_with(|| t.clone());
    if entry.n_max() < n_max {
        *entry = t.clone();
    }
    Ok(entry.clone())
}

pub fn compute_zeta2_table(rcg: &RayClassGroup, beta: &QuarticCharacter, n_max: usize) -> Result<Zeta2Table> {
    let field = &rcg.field;
    let f = rcg.f;
    let m = f.lcm(&4);
    let reps = field.narrow_class_reps(m);
    let info: Vec<(u8, bool)> = reps
        .iter()
        .map(|d| Ok((rcg.eval(beta, d)?, d.norm() % 4 == 3)))
        .collect::<Result<_>>()?;
    let (t, n0) = (field.t as i128, field.n0 as i128);
    let mi = m as i128;
    let classify = |ri: usize, (x, y): (u64, u64)| -> Option<usize> {
        let (xi, yi) = (x as i128, y as i128);
        let nm = (xi * xi + t * xi * yi - n0 * yi * yi).rem_euclid(mi) as u64;
        if nm.gcd(&m) != 1 {
            return None;
        }
        let ka = rcg.eval_residue(beta, (x % f, y % f))?;
        let (kd, sd) = info[ri];
        let k = (ka + 4 - kd) % 4;
        let neg = (nm % 4 == 3) != sd;
        Some(2 * k as usize + neg as usize)
    };
    let sums = partial_zeta_sums(field, &reps, m, n_max, 8, classify);
    let values: [Vec<Rational>; 4] = std::array::from_fn(|k| {
        (1..=n_max)
            .map(|n| {
                let pos = &sums[2 * k][n - 1];
                let neg = &sums[2 * k + 1][n - 1];
                if n % 2 == 0 {
                    pos + neg
                } else {
                    pos - neg
                }
            })
            .collect()
    });
    Ok(Zeta2Table { disc: field.disc, f, beta: beta.clone(), values })
}

/// Z(τ_k, 𝔠; 1−n) = ⟨N𝔠⟩^n·ζ₂(τ_{k−1}; 1−n) − ζ₂(τ_k; 1−n), with β(𝔠) = i.
#[derive(Clone, Debug)]
pub struct TwistedZetaTable {
    pub k: u8,
    pub u: i64,
    pub values: Vec<Rational>,
}

pub fn twisted_partial_zeta(t: &Zeta2Table, k: u8, u: i64, n: usize) -> Result<Rational> {
    if n == 0 || n > t.n_max() {
        return Err(Error::Invalid(format!("node {n} outside table")));
    }
    let km1 = ((k + 3) % 4) as usize;
    let un = Rational::from_integer(BigInt::from(u).pow(n as u32));
    Ok(un * &t.values[km1][n - 1] - &t.values[k as usize][n - 1])
}

pub fn twisted_zeta_table(t: &Zeta2Table, k: u8, u: i64, n_nodes: usize) -> Result<TwistedZetaTable> {
    let values = (1..=n_nodes).map(|n| twisted_partial_zeta(t, k, u, n)).collect::<Result<Vec<_>>>()?;
    for (n, v) in values.iter().enumerate() {
        if !crate::rationals::is_two_integral(v) {
            return Err(Error::NotIntegral(format!("Z(τ_{k}; {}) = {v}", -(n as i64))));
        }
    }
    Ok(TwistedZetaTable { k, u, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rationals::rat;

    #[test]
    fn sqrt5_zeta_at_minus_one() {
        let f = RealQuadField::new(5).unwrap();
        assert_eq!(dedekind_zeta_shintani(&f, 2), rat(1, 30));
        assert_eq!(dedekind_zeta_oracle(&f, 2), rat(1, 30));
    }

    #[test]
    fn shintani_matches_bernoulli_oracle() {
        for d in [2, 3, 5, 6, 7, 10, 13, 15, 145] {
            let f = RealQuadField::new(d).unwrap();
            for n in [2, 4] {
                assert_eq!(dedekind_zeta_shintani(&f, n), dedekind_zeta_oracle(&f, n), "d = {d}, n = {n}");
            }
        }
    }

    #[test]
    fn cone_tiling_sqrt5() {
        let f = RealQuadField::new(5).unwrap();
        let cd = shintani_decompose(&f, &Ideal::unit());
        for x in 1..30i64 {
            for y in -20..20i64 {
                let a = QuadInt::new(x, y);
                if f.is_totally_positive(&a) {
                    assert_eq!(cd.locate(&f, &a, 12).len(), 1, "{a}");
                }
            }
        }
    }
}
