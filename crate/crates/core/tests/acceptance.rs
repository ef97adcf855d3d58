//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any fail.

use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dihedral_iwasawa::corpus::{negative_controls, reference_corpus};
use dihedral_iwasawa::dihedralalgebra::{claim_check, crossed_mul, nr, random_crossed};
use dihedral_iwasawa::lseries::*;
use dihedral_iwasawa::measures::{mahler_expand, r_integrand, reconstruction_check};
use dihedral_iwasawa::quadfield::{Ideal, RealQuadField};
use dihedral_iwasawa::series::{newton_fit, newton_loss, NodeGrid, Tail, TruncSeries};
use dihedral_iwasawa::zetavalues::{dedekind_zeta_oracle, dedekind_zeta_shintani};
use dihedral_iwasawa::{PAdic, PAdicGaussian};

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn context_for(d_f: i64, f: u64) -> LContext {
    let row = reference_corpus().into_iter().find(|r| r.d_f == d_f && r.f == f).expect("row in corpus");
    let opts = ContextOptions { selector: CharacterSelector::Discriminant(row.d_k), ..Default::default() };
    build_context(d_f, f, &opts).expect("context")
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let ctx = context_for(145, 1);
    let rho = rho_colmez(&ctx).unwrap();
    let r = rho.residue_mod(8).unwrap();
    let el = t.elapsed();
    ok(r == 128u32.into() && el < Duration::from_secs(60), format!("rho mod 2^8 = {r}, {}", secs(el)))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let ctx = context_for(145, 1);
    let rep = check_conjecture(&ctx).unwrap();
    let el = t.elapsed();
    let all = rep.d.in_32z2.len() == 30 && rep.d.in_32z2.iter().all(|f| *f == Some(true));
    let prec = rep.d.precision_bits.iter().all(|&p| p >= 8);
    ok(all && prec && rep.verdict && el < Duration::from_secs(600), format!("30/30 coefficients in 32Z_2 = {all}, precision >= 2^8 = {prec}, {}", secs(el)))
}

const A1: [i64; 30] = [0, 16, 0, 57, 44, 8, 40, 21, 40, 30, 16, 49, 56, 29, 32, 50, 62, 47, 48, 60, 32, 16, 8, 21, 30, 26, 2, 9, 56, 34];
const A2: [i64; 30] = [32, 32, 22, 39, 36, 20, 62, 27, 16, 62, 46, 23, 30, 51, 4, 2, 56, 33, 44, 12, 40, 8, 54, 11, 34, 42, 0, 43, 56, 46];
const AB_RE: [i64; 30] = [28, 36, 47, 56, 46, 56, 55, 54, 40, 48, 63, 48, 63, 20, 38, 56, 37, 6, 20, 40, 0, 56, 61, 40, 34, 48, 9, 6, 40, 44];
const AB_IM: [i64; 30] = [
    1124, 1728, 45, 153, 154, 282, 433, 435, 386, 392, 65, 257, 161, 477, 182, 66, 35, 341, 446, 412, 368, 336, 291, 427, 38, 94, 47, 497, 42, 52,
];
const D_OVER_32: [i64; 30] = [0, 6, 7, 4, 5, 0, 0, 4, 2, 4, 2, 4, 1, 6, 7, 0, 3, 5, 2, 3, 7, 5, 7, 4, 4, 1, 7, 3, 7, 6];

fn criterion_3() -> Outcome {
    let p = 8;
    let four = |v: &[i64; 30]| TruncSeries::new(v.iter().map(|&x| PAdic::from_i64(4 * x, p)).collect());
    let a1 = four(&A1);
    let a2 = four(&A2);
    let ab = TruncSeries::new(AB_RE.iter().zip(AB_IM.iter()).map(|(&re, &im)| PAdicGaussian::new(PAdic::from_i64(4 * re, p), PAdic::from_i64(4 * im, p))).collect());
    // ρ ≡ 2⁷ and v₂(log u) ≥ 2, so ρ log u ≡ 0 mod 2⁸
    let d = d_from_parts(&PAdic::zero(p), &a1, &a2, &ab);
    let got: Vec<u64> = d.coeffs().iter().map(|c| c.low_u64(p).unwrap()).collect();
    let want: Vec<u64> = D_OVER_32.iter().map(|&x| (32 * x) as u64).collect();
    let bad: Vec<usize> = (0..30).filter(|&k| got[k] != want[k]).collect();
    ok(bad.is_empty(), format!("30 coefficients compared, mismatches at {bad:?}; T-coefficient = {}", got[1]))
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let mut lines = Vec::new();
    let mut pass = true;
    for (d, f) in [(44, 3), (12, 14), (445, 1), (5, 21), (145, 1), (41, 5)] {
        let ctx = context_for(d, f);
        let rep = check_conjecture(&ctx).unwrap();
        pass &= rep.verdict && rep.d.in_32z2.len() == 30;
        lines.push(format!("({d},{f}) {}", if rep.verdict { "pass" } else { "FAIL" }));
    }
    let el = t.elapsed();
    ok(pass && el < Duration::from_secs(3600), format!("{}; {}", lines.join(", "), secs(el)))
}

fn criterion_5() -> Outcome {
    let ctx = context_for(145, 1);
    let asm = assemble(&ctx).unwrap();
    let mut res = interpolation_check(&ctx, &asm, 0, 5, 20).unwrap();
    res.extend(interpolation_check(&ctx, &asm, 2, 5, 20).unwrap());
    let good = res.iter().filter(|r| r.exact && r.series && r.bits == 20).count();
    ok(good == 10 && res.len() == 10, format!("{good}/10 agreements (chi in {{1, beta^2}}, n = 1..5, mod 2^20)"))
}

fn criterion_6() -> Outcome {
    let rows = negative_controls();
    let mut failed = 0;
    let mut via_rho = 0;
    for row in &rows {
        let opts = ContextOptions { selector: CharacterSelector::Discriminant(row.d_k), negative_control: true, ..Default::default() };
        let ctx = build_context(row.d_f, row.f, &opts).unwrap();
        assert!(!ctx.dihedral);
        let rep = check_conjecture(&ctx).unwrap();
        if !rep.verdict {
            failed += 1;
            if !rep.rho.in_8z2 {
                via_rho += 1;
            }
        }
    }
    ok(failed >= 3, format!("{failed}/{} non-dihedral configurations fail ({via_rho} already via rho)", rows.len()))
}

fn criterion_7() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let mut check = |name: &str, b: bool| {
        pass &= b;
        notes.push(format!("{name}={}", if b { "ok" } else { "FAIL" }));
    };

    // nr multiplicativity and the Claim, 1000 cases each
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mult = (0..1000).all(|_| {
        let x = random_crossed(&mut rng, 10, 16);
        let y = random_crossed(&mut rng, 10, 16);
        nr(&crossed_mul(&x, &y)).agrees_mod(&nr(&x).mul(&nr(&y)), 16)
    });
    check("nr-multiplicative", mult);
    check("claim", claim_check(1000, 2025));

    // Newton fit roundtrip, N = 30, loss 83 bits
    let n = 30;
    let m = 83 + 24;
    let grid = NodeGrid::new(-3, n, m).unwrap();
    let fit_ok = newton_loss(n) == 83
        && (0..5).all(|_| {
            let coeffs: Vec<i64> = (0..n).map(|_| rng.gen_range(-1_000_000..1_000_000)).collect();
            let poly = TruncSeries::from_i64s(&coeffs, m);
            let vals: Vec<PAdic> = (1..=n).map(|k| poly.eval_poly(grid.node(k))).collect();
            let fit = newton_fit(&grid, &vals, n, m, Tail::Polynomial).unwrap();
            fit.agrees_mod(&poly, m - 83)
        });
    check("newton-roundtrip", fit_ok);

    // Mahler reconstruction at 25 points
    let field = RealQuadField::from_disc(145).unwrap();
    let a = Ideal { a: 5, b: 2, c: 1 };
    let table = mahler_expand(r_integrand(&field, &a, -3, 8, 64), 40).unwrap();
    let pts: Vec<(u64, u64)> = (0..25).map(|_| (rng.gen_range(0..200), rng.gen_range(0..200))).collect();
    check("mahler", reconstruction_check(&table, r_integrand(&field, &a, -3, 8, 64), &pts).unwrap());

    // analytic invariants on the worked example
    let ctx = context_for(145, 1);
    let asm = assemble(&ctx).unwrap();
    let oracle = oracle_checks(&ctx, &asm, false).unwrap();
    check("A(b^3)=conj A(b)", oracle.conjugation == Some(true));
    check("D(0)=0", oracle.d_zero_constant == Some(true) && asm.d.coeff(0).is_zero());
    check("rho-two-routes", oracle.rho_two_routes == Some(true));

    // verdict invariance: orientation switch and a second auxiliary prime
    let base = check_conjecture(&ctx).unwrap().verdict;
    let row = reference_corpus().into_iter().find(|r| r.d_f == 145).unwrap();
    let sel = CharacterSelector::Discriminant(row.d_k);
    let noinv = build_context(145, 1, &ContextOptions { convention: Convention::NoInv, selector: sel.clone(), ..Default::default() }).unwrap();
    let second = build_context(145, 1, &ContextOptions { c_index: 1, selector: sel, ..Default::default() }).unwrap();
    let v1 = check_conjecture(&noinv).unwrap().verdict;
    let v2 = check_conjecture(&second).unwrap().verdict;
    check("orientation-invariance", base && v1);
    check("second-c-invariance", base && v2 && second.aux.c != ctx.aux.c);
    ok(pass, notes.join(", "))
}

fn criterion_8() -> Outcome {
    let mut fields: Vec<i64> = reference_corpus().iter().map(|r| r.d_f).collect();
    fields.sort();
    fields.dedup();
    let chosen: Vec<i64> = fields.into_iter().take(10).collect();
    let mut good = 0;
    for &d in &chosen {
        let field = RealQuadField::from_disc(d).unwrap();
        let e1 = dedekind_zeta_shintani(&field, 2) == dedekind_zeta_oracle(&field, 2);
        let e3 = dedekind_zeta_shintani(&field, 4) == dedekind_zeta_oracle(&field, 4);
        if e1 && e3 && !dedekind_zeta_oracle(&field, 2).is_zero() {
            good += 1;
        }
    }
    ok(good == 10 && chosen.len() == 10, format!("{good}/10 fields exact at s = -1 and s = -3: {chosen:?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 rho reproduction for Q(sqrt 145)", criterion_1),
        ("2 verdict on Q(sqrt 145), 30 coefficients", criterion_2),
        ("3 D assembly from the published A-tables", criterion_3),
        ("4 corpus subset, two rows per splitting class", criterion_4),
        ("5 interpolation against the abelian oracle", criterion_5),
        ("6 negative controls fail", criterion_6),
        ("7 property suites", criterion_7),
        ("8 exact zeta_F(-1), zeta_F(-3) by Shintani cones", criterion_8),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        let out = f();
        if !out.pass {
            failures += 1;
        }
        println!("[{}] {name}: {}", if out.pass { "PASS" } else { "FAIL" }, out.detail);
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
