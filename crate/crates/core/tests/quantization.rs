use fuzzyloop_core::harmonics::{omega_bracket, HarmonicBasis};
use fuzzyloop_core::quantize::{iota_su2, spectrum, spin_rep, toeplitz};
use fuzzyloop_core::scalar::{gi, Gaussian};
use fuzzyloop_core::{ExactOperator, FloatOperator, HarmonicIndex, SpherePoly, Su2Element, SymbolicScalar};
use num_rational::BigRational;
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

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn exact_and_float_agree(f in real_poly(4), k in prop::sample::select(vec![1u32, 5, 13, 27, 40])) {
        let e: ExactOperator = toeplitz(k, &f).unwrap();
        let x: FloatOperator = toeplitz(k, &f).unwrap();
        let scale = e.to_float().max_abs().max(1.0);
        prop_assert!(e.to_float().max_abs_diff(&x) <= 1e-12 * scale);
    }

    #[test]
    fn nonnegative_symbols_give_nonnegative_operators(p in real_poly(2), k in 1u32..=24) {
        let f = &p * &p;
        let t: FloatOperator = toeplitz(k, &f).unwrap();
        let scale = t.max_abs().max(1.0);
        prop_assert!(spectrum(&t).unwrap()[0] >= -1e-10 * scale);
    }

    #[test]
    fn real_symbols_are_hermitian(f in real_poly(3), k in 1u32..=8) {
        let t: ExactOperator = toeplitz(k, &f).unwrap();
        prop_assert!(t.is_gram_hermitian());
    }

    #[test]
    fn normalized_trace_is_the_mean(f in real_poly(4), k in 1u32..=10) {
        // tr T_k(f) = (k+1)/2π · ∫ f ω at every level.
        let t: ExactOperator = toeplitz(k, &f).unwrap();
        let tr: Gaussian = t.trace();
        let lhs = SymbolicScalar::new(tr * gi(2, 0), 1);
        prop_assert_eq!(lhs, f.integrate().scale(&gi(k as i64 + 1, 0)));
    }

    #[test]
    fn equivariant_under_su2(f in real_poly(3), k in 1u32..=6, axis in 0usize..3) {
        let xi = &Su2Element::basis()[axis];
        let pk: ExactOperator = spin_rep::<BigRational>(k, xi.matrix()).unwrap();
        let tf: ExactOperator = toeplitz(k, &f).unwrap();
        let lhs = pk.commutator(&tf).unwrap();
        let rhs: ExactOperator = toeplitz(k, &omega_bracket(&iota_su2(xi), &f)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn spin_half_example() {
    // (k+2)·T_k(x) has spectrum {k − 2j}, so T_1(x) has ±1/3.
    let t: ExactOperator = toeplitz(1, &SpherePoly::x()).unwrap();
    let s = spectrum(&t.to_float()).unwrap();
    assert!((s[0] + 1.0 / 3.0).abs() < 1e-15 && (s[1] - 1.0 / 3.0).abs() < 1e-15);
}
