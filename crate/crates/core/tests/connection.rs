//! End-to-end checks tying the assembled D(T) to exact L-values, and the
//! moment-table backend to the integrand it is supposed to integrate.

use num_traits::Zero;

use dihedral_iwasawa::corpus::{negative_controls, reference_corpus};
use dihedral_iwasawa::lseries::*;
use dihedral_iwasawa::measures::{r_integrand, GammaCode, MomentHeader};
use dihedral_iwasawa::{MomentTable, PAdic};

fn ctx_145(opts: ContextOptions) -> LContext {
    build_context(145, 1, &opts).unwrap()
}

/// At the interpolation nodes, D(T)/(T(T+2)) − ρ log u / T equals
/// L(1) + L(β²) − 2 L(β) computed exactly from the cone decomposition.
#[test]
fn f0_matches_exact_l_values() {
    let ctx = ctx_145(ContextOptions::default());
    let asm = assemble(&ctx).unwrap();
    let grid = ctx.grid().unwrap();
    let p = ctx.m_work;
    for n in 1..=4 {
        let t = grid.node(n).clone();
        let tt2 = t.mul(&t.add(&PAdic::from_i64(2, p)));
        let x = asm.d.eval_at(&t).unwrap().div(&tt2).unwrap().sub(&asm.rho.mul(&asm.log_u).div(&t).unwrap());
        let (l1, l1i) = shintani_l_exact(&ctx, 0, n).unwrap();
        let (l2, l2i) = shintani_l_exact(&ctx, 2, n).unwrap();
        let (lb, lbi) = shintani_l_exact(&ctx, 1, n).unwrap();
        assert!(l1i.is_zero() && l2i.is_zero() && lbi.is_zero(), "dihedral L-values are real");
        let want = PAdic::from_rational(&l1, p).add(&PAdic::from_rational(&l2, p)).sub(&PAdic::from_rational(&lb, p).mul_i64(2));
        assert!(x.agrees_mod(&want, ctx.m_target + 4), "node {n}");
    }
}

/// Point masses at the origin turn each R into the integrand's value there.
#[test]
fn moments_backend_wiring() {
    let opts = ContextOptions { n_coeffs: 4, ..Default::default() };
    let ctx = ctx_145(opts);
    let header = |a| MomentHeader {
        d_f: 145,
        f: 1,
        a,
        c: ctx.aux.c.ideal,
        gamma: GammaCode::of(&ctx.field),
        cutoff: 64,
        precision: ctx.m_work,
    };
    let tables: Vec<MomentTable> =
        ctx.aux.reps.iter().map(|a| MomentTable::dirac(&[(1, 0, 0)], 64, ctx.m_work).with_header(header(*a))).collect();
    let r = r_series_from_moments(&ctx, &tables).unwrap();
    for a in &ctx.aux.reps {
        let k = ctx.rcg.eval(&ctx.aux.beta, a).unwrap() as usize;
        let want = r_integrand(&ctx.field, a, ctx.u(), ctx.n_coeffs, ctx.m_work)(0, 0).unwrap();
        assert!(r[k].agrees_mod(&want, ctx.m_target), "class {k}");
    }
    assert!(assemble_with(&ctx, &Backend::Moments(tables.clone())).is_ok());

    // a missing class, a duplicated class, and a foreign header all fail
    assert!(r_series_from_moments(&ctx, &tables[..3]).is_err());
    let mut dup = tables.clone();
    dup[3] = dup[0].clone();
    assert!(r_series_from_moments(&ctx, &dup).is_err());
    let mut foreign = tables.clone();
    foreign[0] = MomentTable::dirac(&[(1, 0, 0)], 64, ctx.m_work).with_header(MomentHeader { d_f: 5, ..header(ctx.aux.reps[0]) });
    assert!(r_series_from_moments(&ctx, &foreign).is_err());
    let other_c = ctx_145(ContextOptions { n_coeffs: 4, c_index: 1, ..Default::default() });
    assert!(r_series_from_moments(&other_c, &tables).is_err());
}

#[test]
fn text_roundtrip_of_a_backend_file() {
    let ctx = ctx_145(ContextOptions { n_coeffs: 4, ..Default::default() });
    let text: String = ctx
        .aux
        .reps
        .iter()
        .map(|a| {
            let h = MomentHeader { d_f: 145, f: 1, a: *a, c: ctx.aux.c.ideal, gamma: GammaCode::of(&ctx.field), cutoff: 64, precision: ctx.m_work };
            MomentTable::dirac(&[(3, 1, 2), (-1, 0, 3)], 64, ctx.m_work).with_header(h).to_text().unwrap()
        })
        .collect();
    let tables = MomentTable::parse_all(&text).unwrap();
    assert_eq!(tables.len(), 4);
    assert!(r_series_from_moments(&ctx, &tables).is_ok());
}

/// Every bundled corpus row, about seven minutes on one core.
#[test]
#[ignore]
fn full_reference_corpus() {
    for row in reference_corpus() {
        let opts = ContextOptions { selector: CharacterSelector::Discriminant(row.d_k), ..Default::default() };
        let ctx = build_context(row.d_f, row.f, &opts).unwrap();
        assert!(check_conjecture(&ctx).unwrap().verdict, "({}, {})", row.d_f, row.f);
    }
}

#[test]
#[ignore]
fn all_negative_controls_fail() {
    for row in negative_controls() {
        let opts = ContextOptions { selector: CharacterSelector::Discriminant(row.d_k), negative_control: true, ..Default::default() };
        let ctx = build_context(row.d_f, row.f, &opts).unwrap();
        assert!(!check_conjecture(&ctx).unwrap().verdict, "({}, {})", row.d_f, row.f);
    }
}
