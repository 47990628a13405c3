use fuzzyloop_core::harmonics::table::table_bracket;
use fuzzyloop_core::harmonics::{kappa, kks_bracket, omega_bracket, reduce, HarmonicBasis, Poly3};
use fuzzyloop_core::scalar::gi;
use fuzzyloop_core::{HarmonicIndex, PoissonTable, SpherePoly};
use proptest::prelude::*;

fn poly_from(coeffs: &[i64], lmax: u32) -> SpherePoly {
    let basis = HarmonicBasis::get(lmax);
    HarmonicIndex::all(lmax)
        .zip(coeffs)
        .fold(SpherePoly::zero(), |acc, (i, &c)| &acc + &basis.harmonic(i).scale(&gi(c, 0)))
}

fn real_poly(lmax: u32) -> impl Strategy<Value = SpherePoly> {
    let n = ((lmax + 1) * (lmax + 1)) as usize;
    prop::collection::vec(-3i64..=3, n).prop_map(move |c| poly_from(&c, lmax))
}

/// r · (∇p × ∇q) on raw R³ polynomials, reduced afterwards.
fn kks_r3(p: &Poly3, q: &Poly3) -> SpherePoly {
    let dp: Vec<Poly3> = (0..3).map(|a| p.partial(a)).collect();
    let dq: Vec<Poly3> = (0..3).map(|a| q.partial(a)).collect();
    let mut out = Poly3::zero();
    for a in 0..3 {
        let (i, j) = ((a + 1) % 3, (a + 2) % 3);
        let cross = &(&dp[i] * &dq[j]) - &(&dp[j] * &dq[i]);
        out = &out + &(&Poly3::coord(a) * &cross);
    }
    reduce(&out)
}

fn r2_minus_one() -> Poly3 {
    let r2 = (0..3).fold(Poly3::zero(), |acc, a| &acc + &(&Poly3::coord(a) * &Poly3::coord(a)));
    &r2 - &Poly3::constant(gi(1, 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn antisymmetric(f in real_poly(3), g in real_poly(3)) {
        prop_assert!((&omega_bracket(&f, &g) + &omega_bracket(&g, &f)).is_zero());
    }

    #[test]
    fn jacobi(f in real_poly(2), g in real_poly(2), h in real_poly(2)) {
        let s = &(&omega_bracket(&f, &omega_bracket(&g, &h)) + &omega_bracket(&g, &omega_bracket(&h, &f)))
            + &omega_bracket(&h, &omega_bracket(&f, &g));
        prop_assert!(s.is_zero());
    }

    #[test]
    fn leibniz(f in real_poly(2), g in real_poly(2), h in real_poly(2)) {
        let lhs = omega_bracket(&f, &(&g * &h));
        let rhs = &(&omega_bracket(&f, &g) * &h) + &(&g * &omega_bracket(&f, &h));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn independent_of_representative(f in real_poly(3), g in real_poly(2), q in real_poly(2)) {
        let shifted = &f.poly().clone() + &(&r2_minus_one() * q.poly());
        prop_assert_eq!(reduce(&shifted), f.clone());
        prop_assert_eq!(kks_r3(&shifted, g.poly()), kks_bracket(&f, &g));
        prop_assert_eq!(kks_r3(f.poly(), g.poly()), kks_bracket(&f, &g));
    }

    #[test]
    fn brackets_integrate_to_zero(f in real_poly(3), g in real_poly(3)) {
        let b = omega_bracket(&f, &g);
        prop_assert!(b.is_real());
        prop_assert!(b.integrate().is_zero());
    }

    #[test]
    fn kappa_is_invariant(f in real_poly(2), g in real_poly(2), h in real_poly(2)) {
        let a = kappa(&omega_bracket(&h, &f), &g);
        let b = kappa(&f, &omega_bracket(&h, &g));
        prop_assert!(a.try_add(&b).unwrap().is_zero());
    }

    #[test]
    fn table_matches_direct_bracket(f in real_poly(2), g in real_poly(2)) {
        let table = PoissonTable::build(4);
        prop_assert_eq!(table_bracket(&table, &f, &g).unwrap(), omega_bracket(&f, &g));
    }
}

#[test]
fn bracket_of_coordinates() {
    // {x, y}_KKS = z and cyclic.
    let (x, y, z) = (SpherePoly::x(), SpherePoly::y(), SpherePoly::z());
    assert_eq!(kks_bracket(&x, &y), z);
    assert_eq!(kks_bracket(&y, &z), x);
    assert_eq!(kks_bracket(&z, &x), y);
}
