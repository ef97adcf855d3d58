//! The dihedral group ring over the truncated Iwasawa algebra, the crossed
//! product order 𝔄 = Λ(ζ₄) * ⟨s̃⟩, its reduced norm, and the pullback square
//!
//! ```text
//!   Λ[H]  ──────▶  𝔄
//!    │             │
//!    ▼             ▼
//!  Λ[H^ab] ──▶ Λ[H^ab]/2
//! ```
//!
//! H = ⟨t, s | t⁴ = s² = 1, sts = t⁻¹⟩.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::padic::PAdic;
use crate::series::TruncSeries;

type S = TruncSeries<PAdic>;

fn all_even(s: &S) -> bool {
    s.coeffs().iter().all(|c| c.precision() < 1 || c.val_bound() >= 1)
}

fn agree_mod2(x: &S, y: &S) -> bool {
    all_even(&x.sub(y))
}

/// a + bζ₄ + cs̃ + dζ₄s̃ with ζ₄² = −1, s̃² = 1, s̃ζ₄ = −ζ₄s̃.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossedElem {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

impl CrossedElem {
    pub fn new(a: S, b: S, c: S, d: S) -> Self {
        CrossedElem { a, b, c, d }
    }

    pub fn one(n: usize, prec: i64) -> Self {
        let z = S::zero(n, prec);
        CrossedElem { a: S::one(n, prec), b: z.clone(), c: z.clone(), d: z }
    }

    pub fn zeta(n: usize, prec: i64) -> Self {
        let z = S::zero(n, prec);
        CrossedElem { a: z.clone(), b: S::one(n, prec), c: z.clone(), d: z }
    }

    pub fn s_tilde(n: usize, prec: i64) -> Self {
        let z = S::zero(n, prec);
        CrossedElem { a: z.clone(), b: z.clone(), c: S::one(n, prec), d: z }
    }

    pub fn add(&self, o: &Self) -> Self {
        CrossedElem { a: self.a.add(&o.a), b: self.b.add(&o.b), c: self.c.add(&o.c), d: self.d.add(&o.d) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CrossedElem { a: self.a.sub(&o.a), b: self.b.sub(&o.b), c: self.c.sub(&o.c), d: self.d.sub(&o.d) }
    }

    pub fn scale(&self, k: &S) -> Self {
        CrossedElem { a: self.a.mul(k), b: self.b.mul(k), c: self.c.mul(k), d: self.d.mul(k) }
    }

    pub fn agrees_mod(&self, o: &Self, bits: i64) -> bool {
        self.a.agrees_mod(&o.a, bits) && self.b.agrees_mod(&o.b, bits) && self.c.agrees_mod(&o.c, bits) && self.d.agrees_mod(&o.d, bits)
    }
}

/// Product in 𝔄 (coefficients are central).
pub fn crossed_mul(x: &CrossedElem, y: &CrossedElem) -> CrossedElem {
    let (a, b, c, d) = (&x.a, &x.b, &x.c, &x.d);
    let (e, f, g, h) = (&y.a, &y.b, &y.c, &y.d);
    CrossedElem {
        a: a.mul(e).sub(&b.mul(f)).add(&c.mul(g)).add(&d.mul(h)),
        b: a.mul(f).add(&b.mul(e)).sub(&c.mul(h)).add(&d.mul(g)),
        c: a.mul(g).add(&c.mul(e)).sub(&b.mul(h)).add(&d.mul(f)),
        d: a.mul(h).add(&d.mul(e)).add(&b.mul(g)).sub(&c.mul(f)),
    }
}

/// nr(x) = (a² + b²) − (c² + d²).
pub fn nr(x: &CrossedElem) -> S {
    x.a.mul(&x.a).add(&x.b.mul(&x.b)).sub(&x.c.mul(&x.c)).sub(&x.d.mul(&x.d))
}

/// a + b·t + c·s + d·st in Λ[H^ab], H^ab = ⟨t, s⟩/(t², s²).
#[derive(Clone, Debug, PartialEq)]
pub struct AbelianRingElem {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

impl AbelianRingElem {
    pub fn new(a: S, b: S, c: S, d: S) -> Self {
        AbelianRingElem { a, b, c, d }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (e, f, g, h) = (&o.a, &o.b, &o.c, &o.d);
        AbelianRingElem {
            a: a.mul(e).add(&b.mul(f)).add(&c.mul(g)).add(&d.mul(h)),
            b: a.mul(f).add(&b.mul(e)).add(&c.mul(h)).add(&d.mul(g)),
            c: a.mul(g).add(&c.mul(e)).add(&b.mul(h)).add(&d.mul(f)),
            d: a.mul(h).add(&d.mul(e)).add(&b.mul(g)).add(&c.mul(f)),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        AbelianRingElem { a: self.a.add(&o.a), b: self.b.add(&o.b), c: self.c.add(&o.c), d: self.d.add(&o.d) }
    }

    pub fn agrees_mod2(&self, o: &Self) -> bool {
        agree_mod2(&self.a, &o.a) && agree_mod2(&self.b, &o.b) && agree_mod2(&self.c, &o.c) && agree_mod2(&self.d, &o.d)
    }
}

/// Values at the characters (1, η, ν, ην): t ↦ (1, 1, −1, −1), s ↦ (1, −1, 1, −1).
pub fn char_values(theta: &AbelianRingElem) -> [S; 4] {
    let (a, b, c, d) = (&theta.a, &theta.b, &theta.c, &theta.d);
    [
        a.add(b).add(c).add(d),
        a.add(b).sub(c).sub(d),
        a.sub(b).add(c).sub(d),
        a.sub(b).sub(c).add(d),
    ]
}

/// Inverse of [`char_values`]; each coordinate is a quarter of a signed sum,
/// and the division by 4 must be exact.
pub fn from_char_values(v: &[S; 4]) -> Result<AbelianRingElem> {
    let [l1, le, ln, len] = v;
    let q = |x: S| x.div_pow2(2);
    Ok(AbelianRingElem {
        a: q(l1.add(le).add(ln).add(len))?,
        b: q(l1.add(le).sub(ln).sub(len))?,
        c: q(l1.sub(le).add(ln).sub(len))?,
        d: q(l1.sub(le).sub(ln).add(len))?,
    })
}

/// Σ_{i<4, j<2} x_{ij} tⁱsʲ in Λ[H].
#[derive(Clone, Debug, PartialEq)]
pub struct DihedralElem {
    /// Index i + 4j.
    pub coeffs: Vec<S>,
}

impl DihedralElem {
    pub fn basis(i: usize, j: usize, n: usize, prec: i64) -> Self {
        let mut coeffs = vec![S::zero(n, prec); 8];
        coeffs[(i % 4) + 4 * (j % 2)] = S::one(n, prec);
        DihedralElem { coeffs }
    }

    /// (tⁱsʲ)(tᵏsˡ) = t^{i + (−1)ʲk} s^{j+l}.
    pub fn mul(&self, o: &Self) -> Self {
        let n = self.coeffs[0].len();
        let mut out = vec![S::zero(n, crate::padic::EXACT); 8];
        for (x, y) in itertools::iproduct!(0..8usize, 0..8usize) {
            let (i, j) = (x % 4, x / 4);
            let (k, l) = (y % 4, y / 4);
            let e = if j == 0 { (i + k) % 4 } else { (i + 4 - k) % 4 };
            let idx = e + 4 * ((j + l) % 2);
            out[idx] = out[idx].add(&self.coeffs[x].mul(&o.coeffs[y]));
        }
        DihedralElem { coeffs: out }
    }

    /// Top map: t ↦ ζ₄, s ↦ s̃.
    pub fn to_crossed(&self) -> CrossedElem {
        let n = self.coeffs[0].len();
        let mut parts = [S::zero(n, crate::padic::EXACT), S::zero(n, crate::padic::EXACT), S::zero(n, crate::padic::EXACT), S::zero(n, crate::padic::EXACT)];
        for (x, v) in self.coeffs.iter().enumerate() {
            let (i, j) = (x % 4, x / 4);
            // ζ⁰ = 1, ζ¹ = ζ, ζ² = −1, ζ³ = −ζ
            let slot = (i % 2) + 2 * j;
            parts[slot] = if i >= 2 { parts[slot].sub(v) } else { parts[slot].add(v) };
        }
        let [a, b, c, d] = parts;
        CrossedElem { a, b, c, d }
    }

    /// Left map: deflation to Λ[H^ab], t ↦ t^ab, s ↦ s^ab.
    pub fn to_abelian(&self) -> AbelianRingElem {
        let c = self.abelian_parts();
        AbelianRingElem { a: c[0].clone(), b: c[1].clone(), c: c[2].clone(), d: c[3].clone() }
    }

    fn abelian_parts(&self) -> [S; 4] {
        let n = self.coeffs[0].len();
        let mut parts = [S::zero(n, crate::padic::EXACT), S::zero(n, crate::padic::EXACT), S::zero(n, crate::padic::EXACT), S::zero(n, crate::padic::EXACT)];
        for (x, v) in self.coeffs.iter().enumerate() {
            let slot = (x % 4 % 2) + 2 * (x / 4);
            parts[slot] = parts[slot].add(v);
        }
        parts
    }
}

/// Right map reduced mod 2: ζ₄ ↦ t^ab, s̃ ↦ s^ab.
pub fn crossed_to_abelian_mod2(x: &CrossedElem) -> AbelianRingElem {
    AbelianRingElem { a: x.a.clone(), b: x.b.clone(), c: x.c.clone(), d: x.d.clone() }
}

/// Both routes around the square agree in Λ[H^ab]/2.
pub fn pullback_check(y: &DihedralElem) -> bool {
    crossed_to_abelian_mod2(&y.to_crossed()).agrees_mod2(&y.to_abelian())
}

pub fn random_series<R: Rng>(rng: &mut R, n: usize, prec: i64) -> S {
    let cs: Vec<PAdic> = (0..n).map(|_| PAdic::from_i64(rng.gen_range(0..(1i64 << prec.min(62))), prec)).collect();
    TruncSeries::new(cs)
}

pub fn random_crossed<R: Rng>(rng: &mut R, n: usize, prec: i64) -> CrossedElem {
    CrossedElem::new(random_series(rng, n, prec), random_series(rng, n, prec), random_series(rng, n, prec), random_series(rng, n, prec))
}

/// nr(1 + 2𝔄) = 1 + 4Λ: inclusion on random x, and (1+2a) + 2a·s̃ realizing
/// 1 + 4a for random a.  Series of length 10 at 16 bits.
pub fn claim_check(sample_count: usize, seed: u64) -> bool {
    let (n, prec) = (10, 16);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = CrossedElem::one(n, prec);
    let two = S::constant(PAdic::from_i64(2, prec), n);
    for _ in 0..sample_count {
        let x = random_crossed(&mut rng, n, prec);
        let v = nr(&one.add(&x.scale(&two))).sub(&S::one(n, prec));
        if !v.div_pow2(2).is_ok() {
            return false;
        }
        let a = random_series(&mut rng, n, prec);
        let two_a = a.mul(&two);
        let pre = CrossedElem::new(S::one(n, prec).add(&two_a), S::zero(n, prec), two_a, S::zero(n, prec));
        let want = S::one(n, prec).add(&a.mul(&S::constant(PAdic::from_i64(4, prec), n)));
        if !nr(&pre).agrees_mod(&want, prec) {
            return false;
        }
    }
    true
}

/// With L(1), L(η), L(ν), L(ην) the character values of a + bt + cs + dst
/// and y = a + bζ₄ + cs̃ + dζ₄s̃:
///   nr(y) = (a+c)(a−c) + (b+d)(b−d),
///   4·nr(y) = (L(1)+L(ν))(L(η)+L(ην)) + (L(1)−L(ν))(L(η)−L(ην)),
///   2·nr(y) = L(1)L(η) + L(ν)L(ην),
/// so that nr(y) − L(α) = (L_F(1) + L_F(β²))/2 − L_F(β) = F₀.
/// Returns whether all hold and 2·(nr(y) − L(α)) matches the half-sum form.
pub fn f0_identity_check(a: &S, b: &S, c: &S, d: &S, l_alpha: &S) -> bool {
    let bits = [a, b, c, d, l_alpha].iter().map(|s| s.certified_precision()).min().unwrap_or(0);
    let y = CrossedElem::new(a.clone(), b.clone(), c.clone(), d.clone());
    let n = nr(&y);
    let first = a.add(c).mul(&a.sub(c)).add(&b.add(d).mul(&b.sub(d)));
    let [l1, le, ln, len] = char_values(&AbelianRingElem::new(a.clone(), b.clone(), c.clone(), d.clone()));
    let four = n.map(|x| x.mul_i64(4));
    let two = n.map(|x| x.mul_i64(2));
    let second = l1.add(&ln).mul(&le.add(&len)).add(&l1.sub(&ln).mul(&le.sub(&len)));
    let third = l1.mul(&le).add(&ln.mul(&len));
    let f0_twice = two.sub(&l_alpha.map(|x| x.mul_i64(2)));
    let half_sum_twice = third.sub(&l_alpha.map(|x| x.mul_i64(2)));
    n.agrees_mod(&first, bits) && four.agrees_mod(&second, bits) && two.agrees_mod(&third, bits) && f0_twice.agrees_mod(&half_sum_twice, bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        let (n, p) = (4, 16);
        let z = CrossedElem::zeta(n, p);
        let s = CrossedElem::s_tilde(n, p);
        let one = CrossedElem::one(n, p);
        let minus_one = CrossedElem::new(S::one(n, p).neg(), S::zero(n, p), S::zero(n, p), S::zero(n, p));
        assert!(crossed_mul(&z, &z).agrees_mod(&minus_one, p));
        assert!(crossed_mul(&s, &s).agrees_mod(&one, p));
        let anti = crossed_mul(&s, &z).add(&crossed_mul(&z, &s));
        assert!(anti.agrees_mod(&CrossedElem::new(S::zero(n, p), S::zero(n, p), S::zero(n, p), S::zero(n, p)), p));
        assert!(nr(&one).agrees_mod(&S::one(n, p), p));
    }

    #[test]
    fn claim_holds() {
        assert!(claim_check(50, 1));
    }

    #[test]
    fn sign_table() {
        let (n, p) = (2, 16);
        let t = AbelianRingElem::new(S::zero(n, p), S::one(n, p), S::zero(n, p), S::zero(n, p));
        let v = char_values(&t);
        let signs: Vec<i64> = v.iter().map(|s| if s.coeff(0).agrees_mod(&PAdic::one(p), p) { 1 } else { -1 }).collect();
        assert_eq!(signs, vec![1, 1, -1, -1]);
    }

    #[test]
    fn pullback_on_generators() {
        assert!(pullback_check(&DihedralElem::basis(0, 0, 3, 16)));
        assert!(pullback_check(&DihedralElem::basis(1, 0, 3, 16)));
        assert!(pullback_check(&DihedralElem::basis(3, 1, 3, 16)));
    }
}
