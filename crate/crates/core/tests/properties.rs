use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dihedral_iwasawa::dihedralalgebra::*;
use dihedral_iwasawa::padic::iwasawa_log;
use dihedral_iwasawa::quadfield::{Ideal, RealQuadField};
use dihedral_iwasawa::rayclass::RayClassGroup;
use dihedral_iwasawa::series::{newton_fit, NodeGrid, Tail, TruncSeries};
use dihedral_iwasawa::PAdic;

const N: usize = 10;
const M: i64 = 16;

fn series() -> impl Strategy<Value = TruncSeries<PAdic>> {
    prop::collection::vec(0i64..(1 << M), N).prop_map(|cs| TruncSeries::from_i64s(&cs, M))
}

fn crossed() -> impl Strategy<Value = CrossedElem> {
    (series(), series(), series(), series()).prop_map(|(a, b, c, d)| CrossedElem::new(a, b, c, d))
}

fn dihedral() -> impl Strategy<Value = DihedralElem> {
    prop::collection::vec(series(), 8).prop_map(|coeffs| DihedralElem { coeffs })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn crossed_mul_is_associative(x in crossed(), y in crossed(), z in crossed()) {
        let l = crossed_mul(&crossed_mul(&x, &y), &z);
        let r = crossed_mul(&x, &crossed_mul(&y, &z));
        prop_assert!(l.agrees_mod(&r, M));
    }

    #[test]
    fn reduced_norm_is_multiplicative(x in crossed(), y in crossed()) {
        prop_assert!(nr(&crossed_mul(&x, &y)).agrees_mod(&nr(&x).mul(&nr(&y)), M));
    }

    #[test]
    fn f0_identity(a in series(), b in series(), c in series(), d in series(), l in series()) {
        prop_assert!(f0_identity_check(&a, &b, &c, &d, &l));
    }

    #[test]
    fn character_values_sum_to_four_a(a in series(), b in series(), c in series(), d in series()) {
        let theta = AbelianRingElem::new(a.clone(), b, c, d);
        let v = char_values(&theta);
        let sum = v[0].add(&v[1]).add(&v[2]).add(&v[3]);
        prop_assert!(sum.agrees_mod(&a.map(|x| x.mul_i64(4)), M));
        prop_assert!(from_char_values(&v).unwrap().a.agrees_mod(&a, M - 2));
    }

    #[test]
    fn top_map_is_multiplicative(x in dihedral(), y in dihedral()) {
        let l = x.mul(&y).to_crossed();
        let r = crossed_mul(&x.to_crossed(), &y.to_crossed());
        prop_assert!(l.agrees_mod(&r, M));
    }

    #[test]
    fn abelian_reduction_mod_2_is_a_ring_map(x in dihedral(), y in dihedral()) {
        let l = x.mul(&y).to_abelian();
        let r = x.to_abelian().mul(&y.to_abelian());
        prop_assert!(l.agrees_mod2(&r));
    }

    #[test]
    fn log_is_a_homomorphism(a in 0i64..1 << 20, b in 0i64..1 << 20) {
        let x = PAdic::from_i64(4 * a + 1, 64);
        let y = PAdic::from_i64(4 * b + 1, 64);
        let l = iwasawa_log(&x.mul(&y)).unwrap();
        let r = iwasawa_log(&x).unwrap().add(&iwasawa_log(&y).unwrap());
        prop_assert!(l.agrees_mod(&r, 60));
    }

    #[test]
    fn newton_fit_recovers_short_polynomials(cs in prop::collection::vec(-1000i64..1000, 1..12)) {
        let n = cs.len();
        let m = 96;
        let grid = NodeGrid::new(-3, n, m).unwrap();
        let poly = TruncSeries::from_i64s(&cs, m);
        let vals: Vec<PAdic> = (1..=n).map(|k| poly.eval_poly(grid.node(k))).collect();
        let fit = newton_fit(&grid, &vals, n, m, Tail::Polynomial).unwrap();
        prop_assert!(fit.agrees_mod(&poly, 16));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pullback_square_commutes(y in dihedral()) {
        prop_assert!(pullback_check(&y));
    }

    #[test]
    fn claim_inclusion(x in crossed()) {
        let n = nr(&CrossedElem::one(N, M).add(&x.scale(&TruncSeries::constant(PAdic::from_i64(2, M), N))));
        prop_assert!(n.sub(&TruncSeries::one(N, M)).div_pow2(2).is_ok());
    }
}

/// The Artin map on ideals respects products: 1000 random pairs over three ray class groups.
#[test]
fn ray_class_map_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let groups = [(145, 1u64), (5, 21), (44, 3), (12, 14), (17, 13)];
    let mut cases = 0;
    for &(d, f) in &groups {
        let field = RealQuadField::from_disc(d).unwrap();
        let rcg = RayClassGroup::new(&field, f, true).unwrap();
        let primes: Vec<Ideal> = field
            .primes_by_norm(600)
            .into_iter()
            .filter(|p| (f * 2) % p.p != 0 || p.p == 2 && f % 2 == 1)
            .filter(|p| f % p.p != 0)
            .map(|p| p.ideal)
            .collect();
        for _ in 0..200 {
            let pick = |rng: &mut ChaCha8Rng| {
                let k = rng.gen_range(1..=3);
                (0..k).fold(Ideal::unit(), |acc, _| field.ideal_mul(&acc, &primes[rng.gen_range(0..primes.len())]))
            };
            let i = pick(&mut rng);
            let j = pick(&mut rng);
            let ci = rcg.ideal_coords(&i).unwrap();
            let cj = rcg.ideal_coords(&j).unwrap();
            let cij = rcg.ideal_coords(&field.ideal_mul(&i, &j)).unwrap();
            let sum: Vec<i64> = ci.iter().zip(&cj).map(|(a, b)| a + b).collect();
            assert_eq!(rcg.reduce(&cij), rcg.reduce(&sum), "d={d} f={f} I={i} J={j}");
            cases += 1;
        }
    }
    assert_eq!(cases, 1000);
}

/// Every character's values multiply along ideal products.
#[test]
fn quartic_characters_are_multiplicative() {
    let field = RealQuadField::from_disc(145).unwrap();
    let rcg = RayClassGroup::new(&field, 8, true).unwrap();
    let primes: Vec<Ideal> = field.primes_by_norm(300).into_iter().filter(|p| p.p != 2).map(|p| p.ideal).collect();
    for (beta, _) in rcg.quartic_characters() {
        for w in primes.windows(2) {
            let prod = field.ideal_mul(&w[0], &w[1]);
            let l = rcg.eval(&beta, &prod).unwrap();
            let r = (rcg.eval(&beta, &w[0]).unwrap() + rcg.eval(&beta, &w[1]).unwrap()) % 4;
            assert_eq!(l, r);
        }
    }
}
