//! Mahler expansions on ℤ₂², moment tables of measures, and integration
//! Σ f_{n₁,n₂} m_{n₁,n₂}.  Moments are ingested from files; the measure
//! itself is not constructed here.

use std::fmt;
use std::path::Path;

use itertools::iproduct;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::padic::{PAdic, EXACT};
use crate::quadfield::{Ideal, QuadInt, RealQuadField};
use crate::series::{binom_l_series_int, TruncSeries};

pub const DEFAULT_CUTOFF: usize = 64;
const MAX_CUTOFF: usize = 512;

/// How γ generates 𝒪_F = ℤ + γℤ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaCode {
    /// γ = √d.
    Sqrt,
    /// γ = (1+√d)/2.
    Half,
}

impl GammaCode {
    pub fn of(field: &RealQuadField) -> Self {
        if field.t == 1 {
            GammaCode::Half
        } else {
            GammaCode::Sqrt
        }
    }
}

impl fmt::Display for GammaCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GammaCode::Sqrt => "sqrt",
            GammaCode::Half => "half",
        })
    }
}

impl std::str::FromStr for GammaCode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqrt" => Ok(GammaCode::Sqrt),
            "half" => Ok(GammaCode::Half),
            _ => Err(Error::Parse(format!("unknown gamma code {s:?}"))),
        }
    }
}

fn parse_hnf(s: &str) -> Result<Ideal> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("ideal {s:?} is not a,b,c")));
    }
    let v: Vec<i128> = parts
        .iter()
        .map(|p| p.parse::<i128>().map_err(|_| Error::Parse(format!("bad integer {p:?} in ideal"))))
        .collect::<Result<_>>()?;
    let (a, b, c) = (v[0], v[1], v[2]);
    if a <= 0 || c <= 0 || a % c != 0 || b % c != 0 || b < 0 || b >= a {
        return Err(Error::Parse(format!("ideal {s:?} is not in Hermite normal form")));
    }
    Ok(Ideal { a, b, c })
}

fn hnf_token(i: &Ideal) -> String {
    format!("{},{},{}", i.a, i.b, i.c)
}

/// Identifiers carried by a moment file: μ_𝔞 depends on 𝔣, 𝔞, 𝔠 and γ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentHeader {
    pub d_f: i64,
    pub f: u64,
    pub a: Ideal,
    pub c: Ideal,
    pub gamma: GammaCode,
    pub cutoff: usize,
    pub precision: i64,
}

impl fmt::Display for MomentHeader {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "moments {} {} {} {} {} {} {}",
            self.d_f,
            self.f,
            hnf_token(&self.a),
            hnf_token(&self.c),
            self.gamma,
            self.cutoff,
            self.precision
        )
    }
}

impl MomentHeader {
    fn parse(line: &str) -> Result<Self> {
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() != 8 || tok[0] != "moments" {
            return Err(Error::Parse(format!("bad moment header {line:?}")));
        }
        let int = |s: &str, what: &str| s.parse::<i64>().map_err(|_| Error::Parse(format!("bad {what} {s:?}")));
        let d_f = int(tok[1], "discriminant")?;
        let f = tok[2].parse::<u64>().map_err(|_| Error::Parse(format!("bad conductor {:?}", tok[2])))?;
        let cutoff = tok[6].parse::<usize>().map_err(|_| Error::Parse(format!("bad cutoff {:?}", tok[6])))?;
        let precision = int(tok[7], "precision")?;
        if cutoff > MAX_CUTOFF {
            return Err(Error::Parse(format!("cutoff {cutoff} exceeds {MAX_CUTOFF}")));
        }
        if !(1..=4096).contains(&precision) {
            return Err(Error::Parse(format!("precision {precision} out of range")));
        }
        Ok(MomentHeader { d_f, f, a: parse_hnf(tok[3])?, c: parse_hnf(tok[4])?, gamma: tok[5].parse()?, cutoff, precision })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    File(String),
    None,
}

/// Moments m_{n₁,n₂} = ∫ C(x₁,n₁) C(x₂,n₂) dμ for n₁, n₂ ≤ cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable {
    pub header: Option<MomentHeader>,
    pub cutoff: usize,
    pub precision: i64,
    entries: Vec<PAdic>,
    pub provenance: Provenance,
}

fn binomial_row(x: u64, n: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            c = c * BigInt::from(x as i64 - k as i64 + 1) / BigInt::from(k);
        }
        row.push(c.clone());
    }
    row
}

impl MomentTable {
    pub fn new(cutoff: usize, precision: i64, entries: Vec<PAdic>) -> Result<Self> {
        if entries.len() != (cutoff + 1) * (cutoff + 1) {
            return Err(Error::Length(entries.len(), (cutoff + 1) * (cutoff + 1)));
        }
        if entries.iter().any(|e| !e.is_integral()) {
            return Err(Error::NotIntegral("moment table entry".into()));
        }
        Ok(MomentTable { header: None, cutoff, precision, entries, provenance: Provenance::None })
    }

    /// Moments of Σ w·δ_{(x₁,x₂)} over the given weighted points.
    pub fn dirac(points: &[(i64, u64, u64)], cutoff: usize, precision: i64) -> Self {
        let mut acc = vec![BigInt::zero(); (cutoff + 1) * (cutoff + 1)];
        for &(w, x1, x2) in points {
            let r1 = binomial_row(x1, cutoff);
            let r2 = binomial_row(x2, cutoff);
            for (n1, n2) in iproduct!(0..=cutoff, 0..=cutoff) {
                acc[n1 * (cutoff + 1) + n2] += &r1[n1] * &r2[n2] * w;
            }
        }
        let entries = acc.iter().map(|v| PAdic::from_bigint(v, precision)).collect();
        MomentTable { header: None, cutoff, precision, entries, provenance: Provenance::None }
    }

    pub fn with_header(mut self, header: MomentHeader) -> Self {
        self.header = Some(header);
        self
    }

    pub fn get(&self, n1: usize, n2: usize) -> &PAdic {
        &self.entries[n1 * (self.cutoff + 1) + n2]
    }

    /// Parse one or more header-led blocks.
    pub fn parse_all(text: &str) -> Result<Vec<MomentTable>> {
        let mut out = Vec::new();
        let mut lines = text.lines().enumerate().peekable();
        while let Some((ln, line)) = lines.next() {
            if line.trim().is_empty() {
                continue;
            }
            let h = MomentHeader::parse(line).map_err(|e| Error::Parse(format!("line {}: {e}", ln + 1)))?;
            let side = h.cutoff + 1;
            let modulus = BigUint::one() << h.precision as usize;
            let mut seen = vec![false; side * side];
            let mut entries = vec![PAdic::zero(h.precision); side * side];
            let mut count = 0;
            while count < side * side {
                let Some((ln, line)) = lines.next() else {
                    return Err(Error::Parse(format!("moment block ends after {count} of {} rows", side * side)));
                };
                let tok: Vec<&str> = line.split_whitespace().collect();
                let bad = || Error::Parse(format!("line {}: expected `n1 n2 value`, got {line:?}", ln + 1));
                if tok.len() != 3 {
                    return Err(bad());
                }
                let n1: usize = tok[0].parse().map_err(|_| bad())?;
                let n2: usize = tok[1].parse().map_err(|_| bad())?;
                let v: BigUint = tok[2].parse().map_err(|_| bad())?;
                if n1 > h.cutoff || n2 > h.cutoff {
                    return Err(Error::Parse(format!("line {}: index beyond cutoff {}", ln + 1, h.cutoff)));
                }
                if v >= modulus {
                    return Err(Error::Parse(format!("line {}: value is not reduced mod 2^{}", ln + 1, h.precision)));
                }
                let idx = n1 * side + n2;
                if seen[idx] {
                    return Err(Error::Parse(format!("line {}: duplicate entry ({n1},{n2})", ln + 1)));
                }
                seen[idx] = true;
                entries[idx] = PAdic::from_biguint(&v, h.precision);
                count += 1;
            }
            out.push(MomentTable { cutoff: h.cutoff, precision: h.precision, entries, header: Some(h), provenance: Provenance::None });
        }
        if out.is_empty() {
            return Err(Error::Parse("no moment block found".into()));
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<MomentTable> {
        let mut all = Self::parse_all(text)?;
        if all.len() != 1 {
            return Err(Error::Parse(format!("expected one moment block, found {}", all.len())));
        }
        Ok(all.pop().unwrap())
    }

    pub fn read_all(path: &Path) -> Result<Vec<MomentTable>> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let mut tabs = Self::parse_all(&text)?;
        for t in &mut tabs {
            t.provenance = Provenance::File(path.display().to_string());
        }
        Ok(tabs)
    }

    /// File form; requires a header.
    pub fn to_text(&self) -> Result<String> {
        let h = self.header.as_ref().ok_or_else(|| Error::Invalid("moment table has no header".into()))?;
        let mut s = format!("{h}\n");
        for (n1, n2) in iproduct!(0..=self.cutoff, 0..=self.cutoff) {
            let v = self.get(n1, n2).residue_mod(self.precision).unwrap_or_default();
            s.push_str(&format!("{n1} {n2} {v}\n"));
        }
        Ok(s)
    }
}

/// Mahler coefficients f_{n₁,n₂} = (Δ₁^{n₁} Δ₂^{n₂} f)(0,0) of a series-valued
/// function on ℤ₂².
#[derive(Clone, Debug, PartialEq)]
pub struct MahlerTable {
    pub cutoff: usize,
    coeffs: Vec<TruncSeries<PAdic>>,
    /// Per T-coefficient: least valuation on the last row and column.
    pub decay: Vec<i64>,
}

/// In-place forward differences: v[k] becomes Δ^k v(0).
fn differences(v: &mut [TruncSeries<PAdic>]) {
    for level in 1..v.len() {
        for k in (level..v.len()).rev() {
            v[k] = v[k].sub(&v[k - 1]);
        }
    }
}

fn series_binomial(c: &BigInt, s: &TruncSeries<PAdic>) -> TruncSeries<PAdic> {
    s.map(|x| x.mul_int(c))
}

/// Mahler expansion of f from its values on {0..cutoff}².
pub fn mahler_expand<F>(f: F, cutoff: usize) -> Result<MahlerTable>
where
    F: Fn(u64, u64) -> Result<TruncSeries<PAdic>> + Sync,
{
    if cutoff > MAX_CUTOFF {
        return Err(Error::Cutoff(format!("cutoff {cutoff} exceeds {MAX_CUTOFF}")));
    }
    let side = cutoff + 1;
    let mut rows: Vec<Vec<TruncSeries<PAdic>>> = (0..side)
        .into_par_iter()
        .map(|x1| {
            let mut row = (0..side)
                .map(|x2| {
                    f(x1 as u64, x2 as u64).map_err(|e| match e {
                        Error::Precision(m) => Error::Cutoff(format!("integrand precision exhausted at ({x1},{x2}): {m}")),
                        other => other,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            differences(&mut row);
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let len = rows[0][0].len();
    if rows.iter().flatten().any(|s| s.len() != len) {
        return Err(Error::Invalid("integrand series lengths differ".into()));
    }
    // columns
    let cols: Vec<Vec<TruncSeries<PAdic>>> = (0..side)
        .into_par_iter()
        .map(|x2| {
            let mut col: Vec<_> = rows.iter().map(|r| r[x2].clone()).collect();
            differences(&mut col);
            col
        })
        .collect();
    for (x2, col) in cols.into_iter().enumerate() {
        for (x1, s) in col.into_iter().enumerate() {
            rows[x1][x2] = s;
        }
    }
    let coeffs: Vec<TruncSeries<PAdic>> = rows.into_iter().flatten().collect();
    let decay = (0..len)
        .map(|k| {
            (0..side)
                .flat_map(|i| [i * side + cutoff, cutoff * side + i])
                .map(|idx| coeffs[idx].coeff(k).val_bound())
                .min()
                .unwrap_or(EXACT)
        })
        .collect();
    Ok(MahlerTable { cutoff, coeffs, decay })
}

impl MahlerTable {
    pub fn get(&self, n1: usize, n2: usize) -> &TruncSeries<PAdic> {
        &self.coeffs[n1 * (self.cutoff + 1) + n2]
    }

    pub fn series_len(&self) -> usize {
        self.coeffs[0].len()
    }

    /// Σ f_{n₁,n₂} C(x₁,n₁) C(x₂,n₂) over the table.
    pub fn reconstruct(&self, x1: u64, x2: u64) -> TruncSeries<PAdic> {
        let r1 = binomial_row(x1, self.cutoff);
        let r2 = binomial_row(x2, self.cutoff);
        let mut acc = TruncSeries::zero(self.series_len(), EXACT);
        for (n1, n2) in iproduct!(0..=self.cutoff, 0..=self.cutoff) {
            let c = &r1[n1] * &r2[n2];
            if !c.is_zero() {
                acc = acc.add(&series_binomial(&c, self.get(n1, n2)));
            }
        }
        acc
    }

    /// Precision certified for T-coefficient k after truncation at the cutoff.
    pub fn certified(&self, k: usize) -> i64 {
        let p = (0..self.coeffs.len()).map(|i| self.coeffs[i].coeff(k).precision()).min().unwrap_or(EXACT);
        p.min(self.decay[k])
    }
}

/// Agreement of the reconstruction with f at the given points, modulo the
/// certified precision of each coefficient.
pub fn reconstruction_check<F>(table: &MahlerTable, f: F, points: &[(u64, u64)]) -> Result<bool>
where
    F: Fn(u64, u64) -> Result<TruncSeries<PAdic>>,
{
    for &(x1, x2) in points {
        let want = f(x1, x2)?;
        let got = table.reconstruct(x1, x2);
        for k in 0..table.series_len() {
            let bits = table.certified(k).min(want.coeff(k).precision());
            if bits > 0 && !got.coeff(k).agrees_mod(want.coeff(k), bits) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// ∫ f dμ = Σ f_{n₁,n₂} m_{n₁,n₂}, with per-coefficient precision capped by
/// the moment precision and f's decay; fails if that falls below `target`.
pub fn integrate(m: &MomentTable, f: &MahlerTable, target: i64) -> Result<TruncSeries<PAdic>> {
    if m.cutoff != f.cutoff {
        return Err(Error::Length(m.cutoff, f.cutoff));
    }
    let n = f.series_len();
    let mut acc = TruncSeries::zero(n, EXACT);
    for (n1, n2) in iproduct!(0..=f.cutoff, 0..=f.cutoff) {
        let w = m.get(n1, n2);
        if !w.is_exact_zero() {
            acc = acc.add(&f.get(n1, n2).scale(w));
        }
    }
    let capped: Vec<PAdic> = (0..n)
        .map(|k| {
            let p = f.certified(k).min(m.precision);
            if p < target {
                Err(Error::Cutoff(format!(
                    "coefficient T^{k} certified to {p} bits at cutoff {}, {target} required",
                    f.cutoff
                )))
            } else {
                Ok(acc.coeff(k).with_precision(p.min(acc.coeff(k).precision())))
            }
        })
        .collect::<Result<_>>()?;
    Ok(TruncSeries::new(capped))
}

/// The integrand L(N𝔞·N(x₁+x₂γ); T)/(N𝔞·N(x₁+x₂γ)), zero where the norm is even.
pub fn r_integrand<'a>(field: &'a RealQuadField, a: &Ideal, u: i64, n: usize, prec: i64) -> impl Fn(u64, u64) -> Result<TruncSeries<PAdic>> + Sync + 'a {
    let na = BigInt::from(a.norm());
    move |x1, x2| {
        let v = &na * field.norm(&QuadInt::new(x1, x2));
        if v.is_zero() || (v.magnitude() % 2u32).is_zero() {
            return Ok(TruncSeries::zero(n, EXACT));
        }
        let l = binom_l_series_int(&v, u, n, prec)?;
        let inv = PAdic::from_bigint(&v, prec).inverse()?;
        Ok(l.scale(&inv))
    }
}

/// R(𝔞, 𝔠; T) = ∫ L(N𝔞 N(x₁+x₂γ); T)/(N𝔞 N(x₁+x₂γ)) dμ_𝔞.
pub fn r_from_moments(m: &MomentTable, field: &RealQuadField, a: &Ideal, u: i64, n: usize, prec: i64, target: i64) -> Result<TruncSeries<PAdic>> {
    let f = mahler_expand(r_integrand(field, a, u, n, prec), m.cutoff)?;
    integrate(m, &f, target)
}

/// Difference between integrating at `cutoff` and `cutoff + 4` (same measure
/// family), as the least valuation over coefficients.
pub fn tail_gap<F, M>(f: F, moments: M, cutoff: usize) -> Result<i64>
where
    F: Fn(u64, u64) -> Result<TruncSeries<PAdic>> + Sync,
    M: Fn(usize) -> MomentTable,
{
    let lo = mahler_expand(&f, cutoff)?;
    let hi = mahler_expand(&f, cutoff + 4)?;
    let a = integrate(&moments(cutoff), &lo, 0)?;
    let b = integrate(&moments(cutoff + 4), &hi, 0)?;
    Ok(a.sub(&b).coeffs().iter().map(|c| c.val_bound()).min().unwrap_or(EXACT))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(v: i64, prec: i64) -> TruncSeries<PAdic> {
        TruncSeries::new(vec![PAdic::from_i64(v, prec)])
    }

    #[test]
    fn constant_and_linear_expansions() {
        let t = mahler_expand(|_, _| Ok(scalar(1, 40)), 6).unwrap();
        assert!(t.get(0, 0).coeff(0).agrees_mod(&PAdic::one(40), 40));
        assert!(t.get(1, 0).coeff(0).is_zero() && t.get(3, 2).coeff(0).is_zero());
        let t = mahler_expand(|x1, _| Ok(scalar(x1 as i64, 40)), 6).unwrap();
        assert!(t.get(0, 0).coeff(0).is_zero());
        assert!(t.get(1, 0).coeff(0).agrees_mod(&PAdic::one(40), 40));
        assert!((2..=6).all(|k| t.get(k, 0).coeff(0).is_zero()));
    }

    #[test]
    fn geometric_function_has_power_coefficients() {
        // (1+t)^{x₁}, t = 4 → f_{n,0} = 4^n
        let t = mahler_expand(|x1, _| Ok(scalar(5i64.pow(x1 as u32), 60)), 8).unwrap();
        for n in 0..=8 {
            assert!(t.get(n, 0).coeff(0).agrees_mod(&PAdic::from_i64(4i64.pow(n as u32), 60), 60));
        }
    }

    #[test]
    fn dirac_integration_evaluates() {
        let f = |x1: u64, x2: u64| Ok(scalar((3 * x1 * x1 + x2 + 7) as i64, 32));
        let t = mahler_expand(f, 10).unwrap();
        let m = MomentTable::dirac(&[(1, 0, 0)], 10, 32);
        assert!(integrate(&m, &t, 8).unwrap().coeff(0).agrees_mod(&PAdic::from_i64(7, 32), 32));
        let m = MomentTable::dirac(&[(2, 3, 1), (-1, 5, 4)], 10, 32);
        let want = 2 * (27 + 1 + 7) - (75 + 4 + 7);
        assert!(integrate(&m, &t, 8).unwrap().coeff(0).agrees_mod(&PAdic::from_i64(want, 32), 32));
    }

    #[test]
    fn moment_file_roundtrip_and_strictness() {
        let h = MomentHeader { d_f: 5, f: 7, a: Ideal::unit(), c: Ideal { a: 11, b: 3, c: 1 }, gamma: GammaCode::Half, cutoff: 2, precision: 16 };
        let m = MomentTable::dirac(&[(1, 1, 2)], 2, 16).with_header(h);
        let text = m.to_text().unwrap();
        let back = MomentTable::parse(&text).unwrap();
        assert_eq!(back.entries, m.entries);
        assert_eq!(back.header, m.header);
        assert!(MomentTable::parse(&text.replace("moments", "moment")).is_err());
        assert!(MomentTable::parse(&text.replace("\n0 0 1\n", "\n0 0 1 extra\n")).is_err());
        assert!(MomentTable::parse(&text.replace("\n0 0 1\n", "\n0 0 65536\n")).is_err());
        assert!(MomentTable::parse(&text.replace("\n0 0 1\n", "\n0 1 1\n")).is_err());
        assert!(MomentTable::parse(&text.replace(" half ", " other ")).is_err());
        let lines: Vec<&str> = text.lines().collect();
        assert!(MomentTable::parse(&lines[..lines.len() - 1].join("\n")).is_err());
    }

    #[test]
    fn cutoff_insufficient_is_reported() {
        // x ↦ (−1)^x has Mahler coefficients (−2)^n: at cutoff 4 only 4 bits certified
        let f = |x1: u64, _| Ok(scalar(if x1 % 2 == 0 { 1 } else { -1 }, 40));
        let t = mahler_expand(f, 4).unwrap();
        let m = MomentTable::dirac(&[(1, 1, 0)], 4, 40);
        assert!(matches!(integrate(&m, &t, 8), Err(Error::Cutoff(_))));
        assert!(integrate(&m, &t, 4).is_ok());
    }
}
