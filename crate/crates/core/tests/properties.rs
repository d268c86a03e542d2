//! Property tests over random exact spinors, generators and flux data.

use hetspin::bilinears::form_bilinear;
use hetspin::clifford::{gamma, is_majorana, majorana_real, reality_map, ExactSpinor, SpinorIndex};
use hetspin::form::ExactForm;
use hetspin::kse::{dilatino_apply, gaugino_apply, ExactFluxData};
use hetspin::scalar::{q, ComplexRational};
use hetspin::stabilizer::{isotropy_algebra, spin_action, SpinAlgebraElement};
use num_traits::Zero;
use proptest::prelude::*;

const ETA: [i64; 10] = [-1, 1, 1, 1, 1, 1, 1, 1, 1, 1];

fn c(re: i64, im: i64) -> ComplexRational {
    ComplexRational::from_integers(re, im)
}

/// Small Gaussian-integer amplitudes on the chosen indices.
fn arb_spinor_on(even_only: bool) -> impl Strategy<Value = ExactSpinor> {
    let slots: Vec<SpinorIndex> = SpinorIndex::all().filter(|s| !even_only || s.is_even()).collect();
    let n = slots.len();
    proptest::collection::vec((-3i64..=3, -3i64..=3, proptest::bool::weighted(0.4)), n).prop_map(move |coeffs| {
        let mut s = ExactSpinor::zero();
        for (slot, (re, im, keep)) in slots.iter().zip(coeffs) {
            if keep {
                s.set(*slot, c(re, im));
            }
        }
        s
    })
}

fn arb_weyl() -> impl Strategy<Value = ExactSpinor> {
    arb_spinor_on(true)
}

fn arb_majorana_weyl() -> impl Strategy<Value = ExactSpinor> {
    arb_weyl().prop_map(|s| majorana_real(&s)).prop_filter("nonzero", |s| !s.is_zero())
}

fn arb_generator() -> impl Strategy<Value = SpinAlgebraElement> {
    proptest::collection::vec(-2i64..=2, 45)
        .prop_map(|p| SpinAlgebraElement::from_params(&p.iter().map(|&x| q(x, 1)).collect::<Vec<_>>()))
}

fn arb_form(degree: usize) -> impl Strategy<Value = ExactForm> {
    let n = ExactForm::zero(10, degree).components().len();
    proptest::collection::vec((-2i64..=2, proptest::bool::weighted(0.3)), n).prop_map(move |v| {
        let comps = v.into_iter().map(|(x, keep)| if keep { c(x, 0) } else { c(0, 0) }).collect();
        ExactForm::from_components(10, degree, comps)
    })
}

fn arb_flux() -> impl Strategy<Value = ExactFluxData> {
    (proptest::collection::vec(-2i64..=2, 10), arb_form(3), arb_form(2)).prop_map(|(dphi, h, f)| ExactFluxData {
        dphi: dphi.into_iter().map(|x| c(x, 0)).collect(),
        h,
        f: vec![f],
    })
}

fn g(indices: &[usize], psi: &ExactSpinor) -> ExactSpinor {
    gamma(indices, psi).unwrap()
}

/// Rotate 1-form components `v_A` as a degree-1 form.
fn rotate_one_form(l: &SpinAlgebraElement, v: &[ComplexRational]) -> Vec<ComplexRational> {
    let form = ExactForm::from_components(10, 1, v.to_vec());
    l.act_on_form(&form).components().to_vec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn clifford_relations(psi in arb_spinor_on(false), a in 0usize..10, b in 0usize..10) {
        let lhs = g(&[a], &g(&[b], &psi)) + g(&[b], &g(&[a], &psi));
        let expect = if a == b { psi.scale(&c(2 * ETA[a], 0)) } else { ExactSpinor::zero() };
        prop_assert_eq!(lhs, expect);
    }

    #[test]
    fn reality_map_is_an_involution(psi in arb_spinor_on(false)) {
        prop_assert_eq!(reality_map(&reality_map(&psi)), psi.clone());
        prop_assert!(is_majorana(&majorana_real(&psi)));
    }

    #[test]
    fn reality_map_commutes_with_rotations(psi in arb_weyl(), l in arb_generator()) {
        prop_assert_eq!(reality_map(&spin_action(&l, &psi)), spin_action(&l, &reality_map(&psi)));
    }

    #[test]
    fn rotations_preserve_majorana_weyl(eps in arb_majorana_weyl(), l in arb_generator()) {
        let out = spin_action(&l, &eps);
        prop_assert!(is_majorana(&out));
        prop_assert!(out.support().all(|s| s.is_even()));
    }

    #[test]
    fn bilinears_are_invariant(
        psi in arb_weyl(),
        theta in arb_weyl(),
        l in arb_generator(),
        k in 1usize..=5,
    ) {
        let lhs = form_bilinear(&spin_action(&l, &psi), &theta, k) + form_bilinear(&psi, &spin_action(&l, &theta), k);
        prop_assert_eq!(lhs, l.act_on_form(&form_bilinear(&psi, &theta, k)));
    }

    #[test]
    fn self_bilinear_of_majorana_weyl_is_real(eps in arb_majorana_weyl()) {
        let kappa = form_bilinear(&eps, &eps, 1);
        prop_assert!(kappa.components().iter().all(ComplexRational::is_real));
    }

    #[test]
    fn dilatino_operator_is_linear(
        data in arb_flux(),
        psi in arb_weyl(),
        theta in arb_weyl(),
        a in -3i64..=3,
        b in -3i64..=3,
    ) {
        let (a, b) = (c(a, 1), c(b, 0));
        let lhs = dilatino_apply(&data, &(psi.scale(&a) + theta.scale(&b)));
        let rhs = dilatino_apply(&data, &psi).scale(&a) + dilatino_apply(&data, &theta).scale(&b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gaugino_operator_is_linear(f in arb_form(2), psi in arb_weyl(), theta in arb_weyl(), a in -3i64..=3) {
        let a = c(a, -2);
        let lhs = gaugino_apply(&f, &(psi.scale(&a) + theta.clone()));
        prop_assert_eq!(lhs, gaugino_apply(&f, &psi).scale(&a) + gaugino_apply(&f, &theta));
    }

    /// `Λ(Aψ) = A(Λψ) + A_{Λ·data} ψ` for the infinitesimal rotation `Λ`.
    #[test]
    fn dilatino_operator_is_equivariant(data in arb_flux(), psi in arb_weyl(), l in arb_generator()) {
        let rotated = ExactFluxData {
            dphi: rotate_one_form(&l, &data.dphi),
            h: l.act_on_form(&data.h),
            f: Vec::new(),
        };
        let lhs = spin_action(&l, &dilatino_apply(&data, &psi));
        let rhs = dilatino_apply(&data, &spin_action(&l, &psi)) + dilatino_apply(&rotated, &psi);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gaugino_operator_is_equivariant(f in arb_form(2), psi in arb_weyl(), l in arb_generator()) {
        let lhs = spin_action(&l, &gaugino_apply(&f, &psi));
        let rhs = gaugino_apply(&f, &spin_action(&l, &psi)) + gaugino_apply(&l.act_on_form(&f), &psi);
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The null vector of a Majorana-Weyl spinor annihilates it and its
    /// stabilizer is always the 29-dimensional one.
    #[test]
    fn fierz_nullness(eps in arb_majorana_weyl()) {
        let kappa = form_bilinear(&eps, &eps, 1);
        let norm = (0..10).fold(ComplexRational::zero(), |acc, a| {
            let k = kappa.get(&[a]);
            acc + k.clone() * k * c(ETA[a], 0)
        });
        prop_assert!(norm.is_zero());
        let slash = (0..10).fold(ExactSpinor::zero(), |acc, a| acc + g(&[a], &eps).scale(&(kappa.get(&[a]) * c(ETA[a], 0))));
        prop_assert!(slash.is_zero());
        prop_assert!(!kappa.is_zero());
        prop_assert_eq!(isotropy_algebra(&[eps]).dim, 29);
    }
}
