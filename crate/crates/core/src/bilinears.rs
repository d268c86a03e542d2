//! Majorana inner product and the spacetime form bilinears of spinors.
//!
//! `B(ψ, θ) = <Γ_{06789} ψ*, θ>`. Since `Γ_{06789}` has real entries in the
//! form basis, `B` is complex bilinear. The degree-`k` bilinear has
//! components `B(ψ, Γ_{A1…Ak} θ)` on increasing tuples `A1 < … < Ak`.

use crate::clifford::{gamma_product_raw, ExactSpinor, Spinor};
use crate::exact::{independent_subset, realify};
use crate::form::{mask_to_tuple, subsets, ExactForm};
use crate::scalar::{ComplexRational, Scalar};

/// `B(ψ, θ)`.
pub fn majorana_inner<T: Scalar>(psi: &Spinor<T>, theta: &Spinor<T>) -> T {
    let b = gamma_product_raw([0usize, 6, 7, 8, 9].into_iter(), &psi.conj());
    b.hermitian(theta)
}

/// Degree-`k` form bilinear of `ψ` and `θ` in the 10-dimensional frame.
pub fn form_bilinear(psi: &ExactSpinor, theta: &ExactSpinor, k: usize) -> ExactForm {
    assert!(k <= 10, "form degree {k} exceeds 10");
    let mut out = ExactForm::zero(10, k);
    if psi.is_zero() || theta.is_zero() {
        return out;
    }
    let bpsi = gamma_product_raw([0usize, 6, 7, 8, 9].into_iter(), &psi.conj()).conj();
    for (slot, &mask) in subsets(10, k).masks.iter().enumerate() {
        let idx = mask_to_tuple(mask);
        let g = gamma_product_raw(idx.into_iter(), theta);
        out.components_mut()[slot] = bpsi
            .amplitudes()
            .iter()
            .zip(g.amplitudes())
            .fold(ComplexRational::default(), |acc, (a, b)| acc + a * b);
    }
    out
}

/// One independent bilinear together with the pair that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearCatalogEntry {
    /// Indices into the input list, `i <= j`.
    pub pair: (usize, usize),
    pub degree: usize,
    pub form: ExactForm,
}

impl BilinearCatalogEntry {
    pub fn label(&self) -> String {
        format!("({},{})", self.pair.0 + 1, self.pair.1 + 1)
    }
}

/// Linearly independent bilinears of degrees 1 to 5 over all pairs `i <= j`.
///
/// Degrees come out in increasing order; within a degree, pairs are taken
/// lexicographically and a form is kept only if it is independent (over
/// the reals) of those already kept.
pub fn fundamental_forms(spinors: &[ExactSpinor]) -> Vec<BilinearCatalogEntry> {
    let mut out = Vec::new();
    for degree in 1..=5 {
        let mut candidates = Vec::new();
        for i in 0..spinors.len() {
            for j in i..spinors.len() {
                let form = form_bilinear(&spinors[i], &spinors[j], degree);
                candidates.push(BilinearCatalogEntry { pair: (i, j), degree, form });
            }
        }
        let width = 2 * candidates.first().map_or(0, |c| c.form.components().len());
        let vectors: Vec<_> = candidates.iter().map(|c| realify(c.form.components())).collect();
        for k in independent_subset(width, &vectors) {
            out.push(candidates[k].clone());
        }
    }
    out
}

/// Number of independent 1-form bilinears.
pub fn count_one_forms(spinors: &[ExactSpinor]) -> usize {
    let forms: Vec<_> = (0..spinors.len())
        .flat_map(|i| (i..spinors.len()).map(move |j| (i, j)))
        .map(|(i, j)| realify(form_bilinear(&spinors[i], &spinors[j], 1).components()))
        .collect();
    independent_subset(20, &forms).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{gamma, majorana_imag, majorana_real};
    use crate::spinor_text::parse_spinor;
    use num_traits::Zero;

    fn sp(s: &str) -> ExactSpinor {
        parse_spinor(s).unwrap()
    }

    #[test]
    fn zero_spinor_gives_zero() {
        assert!(majorana_inner(&ExactSpinor::zero(), &sp("1+e_{15}")).is_zero());
        assert!(form_bilinear(&ExactSpinor::zero(), &sp("1"), 3).is_zero());
    }

    #[test]
    fn inner_matches_gamma_matrix_element() {
        // Γ_{06789} 1 = Γ_0 e_{1234} = -e_{12345}, so B(1, e_{12345}) = -1.
        let v = majorana_inner(&sp("1"), &sp("e_{12345}"));
        assert_eq!(v, -ComplexRational::from_integers(1, 0));
        assert_eq!(gamma(&[0, 6, 7, 8, 9], &sp("1")).unwrap(), -sp("e_{12345}"));
    }

    #[test]
    fn null_vector_of_spin7_spinor() {
        let eps = sp("1+e_{1234}");
        let k = form_bilinear(&eps, &eps, 1);
        let nonzero: Vec<_> = k.iter().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i[0]).collect();
        assert_eq!(nonzero, vec![0, 5]);
        assert_eq!(k.get(&[0]), -k.get(&[5]));
        assert!(k.get(&[0]).is_real());
    }

    #[test]
    fn one_form_counts_of_compact_rows() {
        let expand = |reps: &[&str]| -> Vec<ExactSpinor> {
            reps.iter()
                .flat_map(|r| {
                    let s = sp(r);
                    [majorana_real(&s), majorana_imag(&s)]
                })
                .collect()
        };
        assert_eq!(count_one_forms(&expand(&["1", "e_{15}"])), 4);
        assert_eq!(count_one_forms(&expand(&["1", "e_{12}", "e_{15}", "e_{25}"])), 6);
        assert_eq!(count_one_forms(&[sp("1+e_{1234}")]), 1);
    }
}
