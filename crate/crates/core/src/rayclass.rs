//! Ray class groups of F modulo a rational integer f (optionally with both
//! real places), quartic characters, the dihedral test and the auxiliary
//! choices (𝔠, u, 𝔞_σ).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::angle_int;
use crate::quadfield::{Ideal, PrimeIdeal, QuadInt, RealQuadField};
use crate::rationals::kronecker;

/// (𝒪/f)^× with a discrete-log table over greedily chosen generators.
#[derive(Clone, Debug)]
pub struct UnitsModF {
    pub f: u64,
    pub gens: Vec<(u64, u64)>,
    /// Rows k·e_g − dlog(g^k) of the presentation.
    pub relations: Vec<Vec<i64>>,
    table: HashMap<(u64, u64), Vec<i64>>,
}

impl UnitsModF {
    pub fn new(field: &RealQuadField, f: u64) -> Self {
        let fi = f as i64;
        let red = |x: &QuadInt| -> (u64, u64) {
            let m = BigInt::from(fi);
            (x.x.mod_floor(&m).to_u64().unwrap(), x.y.mod_floor(&m).to_u64().unwrap())
        };
        let mul = |a: (u64, u64), b: (u64, u64)| red(&field.mul(&QuadInt::new(a.0, a.1), &QuadInt::new(b.0, b.1)));
        let one = red(&QuadInt::one());
        let mut table: HashMap<(u64, u64), Vec<i64>> = HashMap::from([(one, vec![])]);
        let mut order: Vec<(u64, u64)> = vec![one];
        let mut gens = Vec::new();
        let mut relations: Vec<Vec<i64>> = Vec::new();
        let size = Self::group_order(field, f);
        'outer: for s in 0..2 * f {
            for x in 0..f.min(s + 1) {
                if table.len() as u64 == size {
                    break 'outer;
                }
                let y = s - x;
                if y >= f {
                    continue;
                }
                let g = (x, y);
                let n = field.norm(&QuadInt::new(x, y));
                if table.contains_key(&g) || !n.gcd(&BigInt::from(f)).to_u64().is_some_and(|v| v == 1) {
                    continue;
                }
                let j = gens.len();
                gens.push(g);
                for v in table.values_mut() {
                    v.push(0);
                }
                for r in relations.iter_mut() {
                    r.push(0);
                }
                // smallest k with g^k in the current subgroup
                let mut pw = g;
                let mut k = 1i64;
                while !table.contains_key(&pw) {
                    pw = mul(pw, g);
                    k += 1;
                }
                let mut rel: Vec<i64> = table[&pw].iter().map(|&c| -c).collect();
                rel[j] += k;
                relations.push(rel);
                let base = order.clone();
                let mut gp = one;
                for e in 1..k {
                    gp = mul(gp, g);
                    for t in &base {
                        let el = mul(*t, gp);
                        let mut v = table[t].clone();
                        v[j] = e;
                        table.insert(el, v);
                        order.push(el);
                    }
                }
            }
        }
        debug_assert_eq!(table.len() as u64, size);
        UnitsModF { f, gens, relations, table }
    }

    /// |(𝒪/f)^×| = ∏ over 𝔭^e ∥ f of N𝔭^{e−1}(N𝔭 − 1).
    pub fn group_order(field: &RealQuadField, f: u64) -> u64 {
        let mut n = 1u64;
        for (p, e) in crate::rationals::factor(f) {
            for q in field.prime_decompose(p) {
                let np = q.norm();
                let ee = if q.kind == crate::quadfield::Splitting::Ramified { 2 * e } else { e };
                n *= np.pow(ee - 1) * (np - 1);
            }
        }
        n
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn reduce(&self, x: &QuadInt) -> (u64, u64) {
        let m = BigInt::from(self.f);
        (x.x.mod_floor(&m).to_u64().unwrap(), x.y.mod_floor(&m).to_u64().unwrap())
    }

    pub fn dlog_residue(&self, r: (u64, u64)) -> Option<&[i64]> {
        self.table.get(&r).map(|v| v.as_slice())
    }

    pub fn dlog(&self, x: &QuadInt) -> Option<&[i64]> {
        self.dlog_residue(self.reduce(x))
    }

    pub fn elements(&self) -> impl Iterator<Item = (&(u64, u64), &Vec<i64>)> {
        self.table.iter()
    }
}

/// Ray class group Cl_f (with both real places when `with_infinity`).
///
/// Coordinates: [H generators | sign generators | class generators].
#[derive(Clone, Debug)]
pub struct RayClassGroup {
    pub field: RealQuadField,
    pub f: u64,
    pub with_infinity: bool,
    pub units: UnitsModF,
    pub class_gens: Vec<PrimeIdeal>,
    class_table: HashMap<Ideal, (Vec<i64>, Ideal)>,
    pub relations: Vec<Vec<i64>>,
    /// Diagonal invariants d_t (group ≅ ⊕ ℤ/d_t).
    pub invariants: Vec<i64>,
    /// Column transform (mod `bound`) taking coordinates to the diagonal basis.
    transform: Vec<Vec<i64>>,
    bound: i64,
}

/// β as exponents of i on the generator coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuarticCharacter {
    pub exps: Vec<u8>,
}

impl QuarticCharacter {
    pub fn pow(&self, k: u8) -> Self {
        QuarticCharacter { exps: self.exps.iter().map(|&a| (a * k) % 4).collect() }
    }

    pub fn conj(&self) -> Self {
        self.pow(3)
    }

    pub fn eval_coords(&self, v: &[i64]) -> u8 {
        let s: i64 = self.exps.iter().zip(v).map(|(&a, &x)| a as i64 * x).sum();
        s.rem_euclid(4) as u8
    }

    pub fn order(&self) -> u8 {
        if self.exps.iter().all(|&a| a == 0) {
            1
        } else if self.exps.iter().all(|&a| a % 2 == 0) {
            2
        } else {
            4
        }
    }
}

impl RayClassGroup {
    pub fn new(field: &RealQuadField, f: u64, with_infinity: bool) -> Result<Self> {
        if f == 0 {
            return Err(Error::Invalid("modulus must be positive".into()));
        }
        let units = UnitsModF::new(field, f);
        let nh = units.ngens();
        let ns = if with_infinity { 2 } else { 0 };
        let mut rcg = RayClassGroup {
            field: field.clone(),
            f,
            with_infinity,
            units,
            class_gens: vec![],
            class_table: HashMap::new(),
            relations: vec![],
            invariants: vec![],
            transform: vec![],
            bound: 1,
        };
        let mut rels: Vec<Vec<i64>> = rcg.units.relations.iter().map(|r| {
            let mut r = r.clone();
            r.resize(nh + ns, 0);
            r
        }).collect();
        for s in 0..ns {
            let mut r = vec![0; nh + ns];
            r[nh + s] = 2;
            rels.push(r);
        }
        rels.push(rcg.elem_coords(&QuadInt::int(-1))?);
        rels.push(rcg.elem_coords(&field.eps)?);

        // class generators: primes coprime to 2f, added while they enlarge the class table
        let unit_key = field.wide_key(&Ideal::unit());
        rcg.class_table.insert(unit_key, (vec![], Ideal::unit()));
        let mut bound = 50;
        while (rcg.class_table.len() as u64) < field.h {
            for p in field.primes_by_norm(bound) {
                if (rcg.class_table.len() as u64) == field.h {
                    break;
                }
                if p.p == 2 || f % p.p == 0 {
                    continue;
                }
                let key = field.wide_key(&p.ideal);
                if rcg.class_table.contains_key(&key) {
                    continue;
                }
                let j = rcg.class_gens.len();
                rcg.class_gens.push(p);
                for (v, _) in rcg.class_table.values_mut() {
                    v.push(0);
                }
                for r in rels.iter_mut() {
                    r.push(0);
                }
                // smallest k with p^k in the old table
                let mut pw = p.ideal;
                let mut k = 1i64;
                loop {
                    let key = field.wide_key(&pw);
                    if let Some((v, iv)) = rcg.class_table.get(&key).cloned() {
                        // p^k = (α0/N(I_v))·I_v
                        let j_ideal = field.ideal_mul(&pw, &field.ideal_conj(&iv));
                        let a0 = field.generator(&j_ideal).ok_or_else(|| Error::Invalid("class table inconsistent".into()))?;
                        let mut rel = vec![0i64; nh + ns + j + 1];
                        rel[nh + ns + j] = k;
                        for (t, c) in v.iter().enumerate() {
                            rel[nh + ns + t] -= c;
                        }
                        let ia = rcg.elem_coords(&a0)?;
                        let inv = rcg.elem_coords(&QuadInt::int(iv.norm()))?;
                        for t in 0..nh + ns {
                            rel[t] -= ia[t] - inv[t];
                        }
                        rels.push(rel);
                        break;
                    }
                    pw = field.ideal_mul(&pw, &p.ideal);
                    k += 1;
                }
                let base: Vec<(Ideal, (Vec<i64>, Ideal))> = rcg.class_table.iter().map(|(a, b)| (*a, b.clone())).collect();
                let mut gp = Ideal::unit();
                for e in 1..k {
                    gp = field.ideal_mul(&gp, &p.ideal);
                    for (_, (v, iv)) in &base {
                        let prod = field.ideal_mul(iv, &gp);
                        let mut w = v.clone();
                        w[j] = e;
                        rcg.class_table.insert(field.wide_key(&prod), (w, prod));
                    }
                }
            }
            bound *= 2;
        }
        let n = nh + ns + rcg.class_gens.len();
        let m = 4 * field.h as i64 * rcg.units.size() as i64 * if with_infinity { 4 } else { 1 };
        let (diag, v) = diagonalize(&rels, n, m);
        rcg.relations = rels;
        rcg.invariants = diag;
        rcg.transform = v;
        rcg.bound = m;
        Ok(rcg)
    }

    pub fn ngens(&self) -> usize {
        self.units.ngens() + self.nsigns() + self.class_gens.len()
    }

    fn nsigns(&self) -> usize {
        if self.with_infinity {
            2
        } else {
            0
        }
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().map(|&d| d as u64).product()
    }

    /// Nontrivial invariants (the group structure).
    pub fn structure(&self) -> Vec<i64> {
        let mut s: Vec<i64> = self.invariants.iter().copied().filter(|&d| d > 1).collect();
        s.sort();
        s
    }

    /// Coordinates of the class of (α) for α ∈ 𝒪 coprime to f.
    pub fn elem_coords(&self, a: &QuadInt) -> Result<Vec<i64>> {
        let mut v = self.units.dlog(a).ok_or(Error::NotCoprime)?.to_vec();
        if self.with_infinity {
            v.push((self.field.sign(a) == std::cmp::Ordering::Less) as i64);
            v.push((self.field.sign_conj(a) == std::cmp::Ordering::Less) as i64);
        }
        v.resize(self.ngens(), 0);
        Ok(v)
    }

    /// Coordinates of the ray class of an integral ideal coprime to f.
    pub fn ideal_coords(&self, i: &Ideal) -> Result<Vec<i64>> {
        if !i.coprime_to_int(self.f) {
            return Err(Error::NotCoprime);
        }
        let key = self.field.wide_key(i);
        let (v, iv) = self.class_table.get(&key).ok_or_else(|| Error::Invalid("class not in table".into()))?;
        let j = self.field.ideal_mul(i, &self.field.ideal_conj(iv));
        let a0 = self.field.generator(&j).ok_or_else(|| Error::Invalid("expected principal ideal".into()))?;
        let ia = self.elem_coords(&a0)?;
        let inv = self.elem_coords(&QuadInt::int(iv.norm()))?;
        let base = self.units.ngens() + self.nsigns();
        let mut out: Vec<i64> = (0..self.ngens()).map(|t| ia[t] - inv[t]).collect();
        for (t, c) in v.iter().enumerate() {
            out[base + t] += c;
        }
        Ok(out)
    }

    /// Coordinates in ⊕ ℤ/d_t.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        (0..self.invariants.len())
            .map(|t| {
                let s: i128 = v.iter().enumerate().map(|(i, &x)| x as i128 * self.transform[i][t] as i128).sum();
                (s.rem_euclid(self.invariants[t] as i128)) as i64
            })
            .collect()
    }

    pub fn same_class(&self, a: &Ideal, b: &Ideal) -> Result<bool> {
        Ok(self.reduce(&self.ideal_coords(a)?) == self.reduce(&self.ideal_coords(b)?))
    }

    /// All characters with values in ℤ/4 (as exponent vectors on coordinates).
    pub fn characters_mod4(&self) -> Vec<QuarticCharacter> {
        let gs: Vec<i64> = self.invariants.iter().map(|&d| d.gcd(&4)).collect();
        let mut out = vec![vec![0i64; self.ngens()]];
        for (t, &g) in gs.iter().enumerate() {
            if g == 1 {
                continue;
            }
            let step = 4 / g;
            let mut next = Vec::new();
            for a in &out {
                for k in 0..g {
                    let mut b = a.clone();
                    for (i, bi) in b.iter_mut().enumerate() {
                        *bi = (*bi + k * step * self.transform[i][t]).rem_euclid(4);
                    }
                    next.push(b);
                }
            }
            out = next;
        }
        let mut chars: Vec<QuarticCharacter> =
            out.into_iter().map(|a| QuarticCharacter { exps: a.into_iter().map(|x| x as u8).collect() }).collect();
        chars.sort();
        chars.dedup();
        chars
    }

    pub fn eval(&self, beta: &QuarticCharacter, i: &Ideal) -> Result<u8> {
        Ok(beta.eval_coords(&self.ideal_coords(i)?))
    }

    pub fn eval_elem(&self, beta: &QuarticCharacter, a: &QuadInt) -> Result<u8> {
        Ok(beta.eval_coords(&self.elem_coords(a)?))
    }

    /// β on the class of a residue x mod f (totally positive lift).
    pub fn eval_residue(&self, beta: &QuarticCharacter, r: (u64, u64)) -> Option<u8> {
        let v = self.units.dlog_residue(r)?;
        Some(beta.eval_coords(v))
    }

    fn trivial_on_signs(&self, beta: &QuarticCharacter) -> bool {
        let nh = self.units.ngens();
        (0..self.nsigns()).all(|s| beta.exps[nh + s] == 0)
    }

    /// β does not factor through f𝔭^{-1} for any prime 𝔭 | f.
    pub fn is_primitive(&self, beta: &QuarticCharacter) -> bool {
        let field = &self.field;
        for (p, _) in crate::rationals::factor(self.f) {
            for q in field.prime_decompose(p) {
                let j = field.ideal_div(&field.int_ideal(self.f as i64), &q.ideal).expect("𝔭 | f");
                let trivial = self.units.elements().all(|(&(x, y), v)| {
                    let xm1 = QuadInt::new(x as i64 - 1, y as i64);
                    !field.contains(&j, &xm1) || beta.eval_coords(v) == 0
                });
                if trivial {
                    return false;
                }
            }
        }
        true
    }

    /// Finite part of the conductor of a character (a divisor of f𝒪).
    pub fn conductor(&self, chi: &QuarticCharacter) -> Ideal {
        let field = &self.field;
        let mut parts: Vec<(Ideal, u32)> = Vec::new();
        for (p, e) in crate::rationals::factor(self.f) {
            for q in field.prime_decompose(p) {
                let ee = if q.kind == crate::quadfield::Splitting::Ramified { 2 * e } else { e };
                parts.push((q.ideal, ee));
            }
        }
        let build = |exps: &[u32]| {
            parts.iter().zip(exps).fold(Ideal::unit(), |acc, ((q, _), &k)| field.ideal_mul(&acc, &field.ideal_pow(q, k)))
        };
        let trivial_mod = |j: &Ideal| {
            self.units.elements().all(|(&(x, y), v)| {
                !field.contains(j, &QuadInt::new(x as i64 - 1, y as i64)) || chi.eval_coords(v) == 0
            })
        };
        let mut exps: Vec<u32> = parts.iter().map(|(_, e)| *e).collect();
        for t in 0..parts.len() {
            while exps[t] > 0 {
                let mut trial = exps.clone();
                trial[t] -= 1;
                if !trivial_mod(&build(&trial)) {
                    break;
                }
                exps = trial;
            }
        }
        build(&exps)
    }

    /// d_K for the cyclic quartic K/F cut out by β (conductor–discriminant):
    /// d_F⁴ · N(𝔣_β) · N(𝔣_{β²}) · N(𝔣_{β³}).
    pub fn discriminant(&self, beta: &QuarticCharacter) -> u128 {
        let d = self.field.disc.unsigned_abs() as u128;
        let nf = self.conductor(beta).norm() as u128;
        let nf2 = self.conductor(&beta.pow(2)).norm() as u128;
        d.pow(4) * nf * nf * nf2
    }

    /// Primitive characters of exact order 4, trivial on sign classes,
    /// as (β, β³) pairs with β the smaller exponent vector.
    pub fn quartic_characters(&self) -> Vec<(QuarticCharacter, QuarticCharacter)> {
        let mut out = Vec::new();
        for b in self.characters_mod4() {
            if b.order() != 4 || !self.trivial_on_signs(&b) {
                continue;
            }
            let c = b.conj();
            if c < b {
                continue;
            }
            if self.is_primitive(&b) {
                out.push((b, c));
            }
        }
        out
    }

    /// β∘conj as a character.
    fn conj_values_ok(&self, beta: &QuarticCharacter, expect: u8) -> Result<bool> {
        // check on H generators and class generators (signs are swapped and killed)
        for &(x, y) in &self.units.gens {
            let g = QuadInt::new(x, y);
            let a = self.eval_residue(beta, self.units.reduce(&g)).unwrap();
            let b = self.eval_residue(beta, self.units.reduce(&self.field.conj(&g))).unwrap();
            if b != (a * expect) % 4 {
                return Ok(false);
            }
        }
        for p in &self.class_gens {
            let a = self.eval(beta, &p.ideal)?;
            let b = self.eval(beta, &self.field.ideal_conj(&p.ideal))?;
            if b != (a * expect) % 4 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// β² equals χ_8∘N on primes of norm ≤ 500, i.e. F(√2) ⊂ K.
    pub fn contains_sqrt2(&self, beta: &QuarticCharacter) -> Result<bool> {
        for p in self.field.primes_by_norm(500) {
            if p.p == 2 || self.f % p.p == 0 {
                continue;
            }
            let b2 = (2 * self.eval(beta, &p.ideal)?) % 4;
            let c8 = if kronecker(8, p.norm() as i64) == 1 { 0 } else { 2 };
            if b2 != c8 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// K/ℚ dihedral of order 8 with √2 ∉ K.
    pub fn is_dihedral(&self, beta: &QuarticCharacter) -> Result<bool> {
        Ok(self.conj_values_ok(beta, 3)? && !self.conj_values_ok(beta, 1)? && !self.contains_sqrt2(beta)?)
    }

    /// β∘conj = β: K/ℚ abelian (or at least not dihedral).
    pub fn is_conj_invariant(&self, beta: &QuarticCharacter) -> Result<bool> {
        self.conj_values_ok(beta, 1)
    }
}

/// Auxiliary data: 𝔠 with β(𝔠) = i, u = ⟨N𝔠⟩ ≡ 5 mod 8, and one
/// least-norm integral ideal coprime to 2f𝔠 in each coset of ker β.
#[derive(Clone, Debug)]
pub struct Auxiliary {
    pub c: PrimeIdeal,
    pub u: i64,
    /// β normalized so that β(𝔠) = i.
    pub beta: QuarticCharacter,
    pub reps: [Ideal; 4],
}

/// Candidate auxiliary primes 𝔠 in order: N𝔠 ≡ ±3 mod 8, 𝔭 ∤ 2f, β(𝔠) = ±i.
pub fn auxiliary_candidates(rcg: &RayClassGroup, beta: &QuarticCharacter, bound: u64) -> Result<Vec<PrimeIdeal>> {
    let mut out = Vec::new();
    for p in rcg.field.primes_by_norm(bound) {
        let n = p.norm();
        if p.p == 2 || rcg.f % p.p == 0 || !matches!(n % 8, 3 | 5) {
            continue;
        }
        if rcg.eval(beta, &p.ideal)? % 2 == 1 {
            out.push(p);
        }
    }
    Ok(out)
}

pub fn choose_auxiliary(rcg: &RayClassGroup, beta: &QuarticCharacter, bound: u64, index: usize) -> Result<Auxiliary> {
    let cands = auxiliary_candidates(rcg, beta, bound)?;
    let c = *cands.get(index).ok_or(Error::SearchExhausted(bound))?;
    let beta = if rcg.eval(beta, &c.ideal)? == 1 { beta.clone() } else { beta.conj() };
    let u = angle_int(c.norm() as i64);
    debug_assert_eq!(u.rem_euclid(8), 5);
    let field = &rcg.field;
    let mut reps: [Option<Ideal>; 4] = [None; 4];
    let mut n = 1u64;
    while reps.iter().any(|r| r.is_none()) {
        if n % 2 == 1 && n.gcd(&rcg.f) == 1 {
            for i in field.ideals_of_norm(n) {
                if !field.coprime_to_prime(&i, &c.ideal) {
                    continue;
                }
                let k = rcg.eval(&beta, &i)? as usize;
                if reps[k].is_none() {
                    reps[k] = Some(i);
                }
            }
        }
        n += 1;
        if n > 1_000_000 {
            return Err(Error::SearchExhausted(n));
        }
    }
    Ok(Auxiliary { c, u, beta, reps: reps.map(|r| r.unwrap()) })
}

/// Diagonal form of ℤ^n / ⟨rows, m·ℤ^n⟩: returns invariants d_t and the
/// column transform V (mod m) with coordinates y = x·V.
fn diagonalize(rows: &[Vec<i64>], n: usize, m: i64) -> (Vec<i64>, Vec<Vec<i64>>) {
    let m = m as i128;
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| (x as i128).rem_euclid(m)).collect()).collect();
    for i in 0..n {
        let mut r = vec![0i128; n];
        r[i] = m;
        a.push(r);
    }
    let mut v: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    let rows_n = a.len();
    let mut diag = vec![0i64; n];
    for t in 0..n {
        loop {
            // pivot: least nonzero residue in the remaining block
            let mut best: Option<(i128, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    let x = x.rem_euclid(m);
                    if x != 0 && best.is_none_or(|(bx, _, _)| x < bx) {
                        best = Some((x, i, j));
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                break;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t].rem_euclid(m);
            let mut clean = true;
            for i in t + 1..rows_n {
                let q = a[i][t].rem_euclid(m) / p;
                if q != 0 {
                    for j in t..n {
                        a[i][j] = (a[i][j] - q * a[t][j]).rem_euclid(m);
                    }
                }
                if a[i][t].rem_euclid(m) != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = a[t][j].rem_euclid(m) / p;
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] = (row[j] - q * row[t]).rem_euclid(m);
                    }
                    for row in v.iter_mut() {
                        row[j] = (row[j] - q * row[t]).rem_euclid(m);
                    }
                }
                if a[t][j].rem_euclid(m) != 0 {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        let p = a[t][t].rem_euclid(m);
        diag[t] = if p == 0 { m as i64 } else { p.gcd(&m) as i64 };
    }
    (diag, v.into_iter().map(|r| r.into_iter().map(|x| x as i64).collect()).collect())
}

/// Is x ≡ 1 (mod f) for an element of 𝒪?
pub fn is_one_mod(x: &QuadInt, f: u64) -> bool {
    let m = BigInt::from(f);
    (&x.x - BigInt::from(1)).mod_floor(&m).is_zero() && x.y.mod_floor(&m).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_mod_f_orders() {
        let f = RealQuadField::new(5).unwrap();
        for m in [1u64, 2, 3, 4, 7, 21, 16] {
            let h = UnitsModF::new(&f, m);
            assert_eq!(h.size() as u64, UnitsModF::group_order(&f, m), "f = {m}");
        }
    }

    #[test]
    fn hilbert_class_field_of_145() {
        let f = RealQuadField::new(145).unwrap();
        let g = RayClassGroup::new(&f, 1, true).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.structure(), vec![4]);
        let ch = g.quartic_characters();
        assert_eq!(ch.len(), 1);
        assert!(g.is_dihedral(&ch[0].0).unwrap());
        let wide = RayClassGroup::new(&f, 1, false).unwrap();
        assert_eq!(wide.order(), f.h);
    }

    #[test]
    fn narrow_order_for_norm_plus_one_units() {
        let f = RealQuadField::new(3).unwrap();
        assert_eq!(RayClassGroup::new(&f, 1, true).unwrap().order(), f.h_plus);
    }

    #[test]
    fn conductor_21_over_sqrt5() {
        let f = RealQuadField::new(5).unwrap();
        let g = RayClassGroup::new(&f, 21, true).unwrap();
        assert_eq!(g.order() % 4, 0);
        let ch = g.quartic_characters();
        assert!(ch.iter().any(|(b, _)| g.is_dihedral(b).unwrap()));
    }
}
