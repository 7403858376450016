//! The exact sequence `(π₁G♯)_Γ → (π₁G)_Γ → C → 0`, the group
//! `K = Hom(C, Z/N)`, and the obstruction equation `γ(β) = −χ`.
//!
//! Obstruction characters are elements of `C` (additively), so the
//! multiplicative inverse `Ω(σ)⁻¹` becomes `−χ`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use thiserror::Error;

use crate::form::{sharpen, FormError, FormViolation, MetaplecticForm, SharpData};
use crate::lattice::{
    self, pontryagin_dual, reduce_mod_lattice, AbHom, FgAbGroup, IntMatrix, LatticeError, Presentation,
    PontryaginDual, Quotient,
};
use crate::root_datum::{pi1_coinvariants, BasedRootDatum, GaloisAction, RootDatumError, ValidationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObstructionError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("Galois generator {generator} does not preserve Λ♯ (Q is not Galois-equivariant)")]
    ActionDoesNotPreserveSharp { generator: usize },
    #[error("form is not Galois-invariant: {0}")]
    FormNotGaloisInvariant(ValidationReport<FormViolation>),
    #[error("sequence invariant failed: {0}")]
    Invariant(String),
    #[error("bad chi: {0}")]
    BadChi(String),
}

#[derive(Clone, Debug)]
pub struct GammaSequence {
    pub modulus: BigInt,
    pub sharp: SharpData,
    /// Galois generators transported to the `Λ♯` basis.
    pub sharp_action: Vec<IntMatrix>,
    /// `(π₁G♯)_Γ`, presented on `Λ♯` coordinates.
    pub source: Quotient,
    /// `(π₁G)_Γ`, presented on `Λ` coordinates.
    pub middle: Quotient,
    pub induced: AbHom,
    /// `C = middle / image(induced)`, presented on middle coordinates.
    pub c: Quotient,
    pub gamma: AbHom,
    pub k: PontryaginDual,
    pub warnings: Vec<String>,
}

pub fn build_gamma(
    datum: &BasedRootDatum,
    action: &GaloisAction,
    form: &MetaplecticForm,
) -> Result<GammaSequence, ObstructionError> {
    let sharp = sharpen(datum, form)?;
    let n = datum.rank();
    let mut warnings = Vec::new();
    if form.cyclotomic_trivial {
        let v = form.galois_violations(action.generators());
        if !v.is_empty() {
            return Err(ObstructionError::FormNotGaloisInvariant(ValidationReport { violations: v }));
        }
    } else if !action.generators().is_empty() {
        warnings.push(
            "Galois-equivariance of Q was not checked: the cyclotomic action on Z/N is not declared trivial"
                .to_string(),
        );
    }
    if datum.components().len() > 1 && action.permutes_components(datum) {
        warnings.push("Galois action permutes simple factors".to_string());
    }

    let mut sharp_action = Vec::with_capacity(action.generators().len());
    for (k, g) in action.generators().iter().enumerate() {
        let h = sharp
            .transport(g)
            .ok_or(ObstructionError::ActionDoesNotPreserveSharp { generator: k })?;
        sharp_action.push(h);
    }

    let middle = pi1_coinvariants(datum, action)?;
    let source = Presentation::new(n, sharp.coroots_in_basis.clone())
        .coinvariants(&sharp_action)?
        .quotient();

    let induced_cols: Vec<Vec<BigInt>> = (0..source.group.ngens())
        .map(|j| middle.project(&sharp.basis.mul_vec(&source.lifts.col(j))))
        .collect();
    let induced = AbHom::new(
        source.group.clone(),
        middle.group.clone(),
        IntMatrix::from_cols(&induced_cols, middle.group.ngens()),
    )?;
    let c = induced.cokernel();
    let gamma = c.projection_from(&middle.group)?;
    let nm = form.modulus().clone();
    if !c.group.is_torsion_of(&nm) {
        return Err(ObstructionError::Invariant(format!("C = {} is not {nm}-torsion", c.group)));
    }

    // C also equals Λ / (Λ_sc + Λ♯ + Σ(g−1)Λ).
    let mut rel = vec![datum.coroots().clone(), sharp.basis.clone()];
    rel.extend(action.generators().iter().map(|g| g.sub(&IntMatrix::identity(n))));
    let direct = lattice::cokernel(&IntMatrix::hstack_all(n, &rel));
    if direct.group != c.group {
        return Err(ObstructionError::Invariant(format!(
            "C computed as {} but Λ/(Λ_sc + Λ♯ + I_Γ Λ) is {}",
            c.group, direct.group
        )));
    }

    let k = pontryagin_dual(&c.group, &nm)?;
    Ok(GammaSequence {
        modulus: nm,
        sharp,
        sharp_action,
        source,
        middle,
        induced,
        c,
        gamma,
        k,
        warnings,
    })
}

impl GammaSequence {
    pub fn c_group(&self) -> &FgAbGroup {
        &self.c.group
    }

    pub fn k_group(&self) -> &FgAbGroup {
        &self.k.group
    }

    /// Hermite basis of `image(induced) + relations(middle)`.
    pub fn kernel_lattice(&self) -> Vec<Vec<BigInt>> {
        self.induced.image_lattice()
    }

    /// Canonical representative of `x + ker(γ)`.
    pub fn canonical_representative(&self, x: &[BigInt]) -> Vec<BigInt> {
        let r = reduce_mod_lattice(x, &self.kernel_lattice());
        self.middle.group.reduce(&r)
    }

    fn check_chi(&self, chi: &[BigInt]) -> Result<Vec<BigInt>, ObstructionError> {
        if chi.len() != self.c.group.ngens() {
            return Err(ObstructionError::BadChi(format!(
                "chi has {} coordinates but C = {} has {}",
                chi.len(),
                self.c.group,
                self.c.group.ngens()
            )));
        }
        Ok(self.c.group.reduce(chi))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CosetSize {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for CosetSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetSize::Finite(n) => write!(f, "{n}"),
            CosetSize::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub chi: Vec<BigInt>,
    pub solution_representative: Vec<BigInt>,
    pub kernel_generators: Vec<Vec<BigInt>>,
    pub solvable: bool,
    pub coset_size: CosetSize,
}

pub fn solve_obstruction(seq: &GammaSequence, chi: &[BigInt]) -> Result<ObstructionReport, ObstructionError> {
    let chi = seq.check_chi(chi)?;
    let target = seq.c.group.neg(&chi);
    let rep = seq.canonical_representative(&seq.c.lift(&target));
    if seq.gamma.apply(&rep) != target {
        return Err(ObstructionError::Invariant("γ(representative) ≠ −χ".into()));
    }
    let mut seen = BTreeSet::new();
    let kernel_generators: Vec<Vec<BigInt>> = seq
        .induced
        .matrix
        .col_vectors()
        .into_iter()
        .map(|c| seq.middle.group.reduce(&c))
        .filter(|c| !seq.middle.group.is_zero_element(c) && seen.insert(c.clone()))
        .collect();
    let (_, image) = seq.induced.kernel_image();
    let coset_size = match image.group.order() {
        Some(n) => CosetSize::Finite(n),
        None => CosetSize::Infinite,
    };
    Ok(ObstructionReport {
        chi,
        solution_representative: rep,
        kernel_generators,
        solvable: true,
        coset_size,
    })
}

/// `γ(β) = −χ`.
pub fn verify_vanishing(seq: &GammaSequence, beta: &[BigInt], chi: &[BigInt]) -> bool {
    match seq.check_chi(chi) {
        Ok(chi) => seq.gamma.apply(beta) == seq.c.group.neg(&chi),
        Err(_) => false,
    }
}

/// Kottwitz classes `β` in the window with `γ(β) = −χ`.
pub fn solutions_in_window(seq: &GammaSequence, chi: &[BigInt], window: i64) -> Vec<Vec<BigInt>> {
    seq.middle
        .group
        .elements_in_window(window)
        .into_iter()
        .filter(|b| verify_vanishing(seq, b, chi))
        .collect()
}

/// Human-readable coset: `r + dZ` when the middle group is `Z`, otherwise
/// `rep + span{…}`.
pub fn format_coset(seq: &GammaSequence, report: &ObstructionReport) -> String {
    let g = &seq.middle.group;
    if g.torsion().is_empty() && g.free_rank() == 1 {
        let r = &report.solution_representative[0];
        let lat = seq.kernel_lattice();
        return match lat.first() {
            Some(v) => format!("{r} + {}Z", v[0]),
            None => format!("{r}"),
        };
    }
    let fmt_vec = |v: &[BigInt]| {
        format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
    };
    if report.kernel_generators.is_empty() {
        return fmt_vec(&report.solution_representative);
    }
    format!(
        "{} + span{{{}}}",
        fmt_vec(&report.solution_representative),
        report.kernel_generators.iter().map(|k| fmt_vec(k)).collect::<Vec<_>>().join(", ")
    )
}

/// Element-wise exactness on the window: `γ(x) = 0` iff `x ∈ image`.
pub fn exactness_violations(seq: &GammaSequence, window: i64) -> Vec<String> {
    let mut out = Vec::new();
    for s in seq.source.group.elements_in_window(window) {
        let x = seq.induced.apply(&s);
        if !seq.c.group.is_zero_element(&seq.gamma.apply(&x)) {
            out.push(format!("γ ∘ induced ≠ 0 on {s:?}"));
        }
    }
    for x in seq.middle.group.elements_in_window(window) {
        let in_ker = seq.c.group.is_zero_element(&seq.gamma.apply(&x));
        if in_ker != seq.induced.in_image(&x) {
            out.push(format!("kernel/image mismatch at {x:?}"));
        }
    }
    out
}

/// Every `χ ∈ C` admits a verified solution.
pub fn surjectivity_violations(seq: &GammaSequence) -> Vec<String> {
    let mut out = Vec::new();
    for chi in seq.c.group.elements() {
        match solve_obstruction(seq, &chi) {
            Ok(r) if verify_vanishing(seq, &r.solution_representative, &chi) => {}
            Ok(_) => out.push(format!("representative for {chi:?} does not verify")),
            Err(e) => out.push(format!("{chi:?}: {e}")),
        }
    }
    out
}

/// For each `χ`, the solutions in the window are exactly the window part of
/// `representative + ker(γ)`.
pub fn torsor_violations(seq: &GammaSequence, window: i64) -> Vec<String> {
    let mut out = Vec::new();
    let elems = seq.middle.group.elements_in_window(window);
    for chi in seq.c.group.elements() {
        let rep = match solve_obstruction(seq, &chi) {
            Ok(r) => r.solution_representative,
            Err(e) => {
                out.push(format!("{chi:?}: {e}"));
                continue;
            }
        };
        let solved: BTreeSet<Vec<BigInt>> =
            elems.iter().filter(|b| verify_vanishing(seq, b, &chi)).cloned().collect();
        let coset: BTreeSet<Vec<BigInt>> = elems
            .iter()
            .filter(|b| seq.induced.in_image(&seq.middle.group.sub(b, &rep)))
            .cloned()
            .collect();
        if solved != coset {
            out.push(format!("solution set for {chi:?} is not rep + ker(γ)"));
        }
    }
    out
}

/// Witness for the pairing lemma: `Λ₁/Λ₁♯ → Hom(Λ₂/Λ₂♯, Z/N)`.
#[derive(Clone, Debug)]
pub struct AdjointWitness {
    pub left_kernel: IntMatrix,
    pub right_kernel: IntMatrix,
    pub left_quotient: FgAbGroup,
    pub right_quotient: FgAbGroup,
    pub map: AbHom,
    pub injective: bool,
    pub orders_match: bool,
}

impl AdjointWitness {
    pub fn is_isomorphism(&self) -> bool {
        self.injective && self.orders_match
    }
}

/// `c` is the `r₁ × r₂` Gram table of a bilinear pairing
/// `Z^r₁ × Z^r₂ → Z/N`.
pub fn check_adjoint_pairing(c: &IntMatrix, modulus: &BigInt) -> Result<(bool, AdjointWitness), ObstructionError> {
    let left_kernel = lattice::kernel_mod(&c.transpose(), modulus);
    let right_kernel = lattice::kernel_mod(c, modulus);
    let q1 = lattice::cokernel(&left_kernel);
    let q2 = lattice::cokernel(&right_kernel);
    let dual = pontryagin_dual(&q2.group, modulus)?;
    let mut m = IntMatrix::zeros(dual.group.ngens(), q1.group.ngens());
    for i in 0..q1.group.ngens() {
        let x = q1.lifts.col(i);
        let cx = c.transpose().mul_vec(&x);
        for (j, d) in q2.group.torsion().iter().enumerate() {
            let y = q2.lifts.col(j);
            let v = cx.iter().zip(&y).map(|(a, b)| a * b).sum::<BigInt>().mod_floor(modulus);
            let step = modulus / d;
            if !v.is_multiple_of(&step) {
                return Err(ObstructionError::Invariant(format!(
                    "pairing value {v} is not of order dividing {d}"
                )));
            }
            m[(j, i)] = v / step;
        }
    }
    let map = AbHom::new(q1.group.clone(), dual.group.clone(), m)?;
    let injective = map.is_injective();
    let orders_match = q1.group.order().is_some() && q1.group.order() == dual.group.order();
    let witness = AdjointWitness {
        left_kernel,
        right_kernel,
        left_quotient: q1.group,
        right_quotient: q2.group,
        map,
        injective,
        orders_match,
    };
    Ok((witness.is_isomorphism(), witness))
}

impl fmt::Display for ObstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "chi = {:?}, representative = {:?}, coset size = {}",
            self.chi, self.solution_representative, self.coset_size
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int_vec;
    use crate::root_datum::{catalog, catalog_spec, CatalogSpec};
    use proptest::prelude::*;

    fn kp() -> GammaSequence {
        let (d, a) = catalog("GL", 2).unwrap();
        build_gamma(&d, &a, &MetaplecticForm::new(2, &[0, 0], &[vec![1]]).unwrap()).unwrap()
    }

    #[test]
    fn gl2_kp_sequence() {
        let s = kp();
        assert_eq!(s.source.group, FgAbGroup::free(1));
        assert_eq!(s.middle.group, FgAbGroup::free(1));
        assert_eq!(s.induced.matrix.to_i64_rows().unwrap(), vec![vec![2]]);
        assert_eq!(s.c.group, FgAbGroup::cyclic(2));
        assert_eq!(s.k.group, FgAbGroup::cyclic(2));
        assert!(exactness_violations(&s, 4).is_empty());
        assert!(surjectivity_violations(&s).is_empty());
        assert!(torsor_violations(&s, 4).is_empty());
    }

    #[test]
    fn sl2_sequence_trivial() {
        let (d, a) = catalog("SL", 2).unwrap();
        let s = build_gamma(&d, &a, &MetaplecticForm::new(2, &[1], &[]).unwrap()).unwrap();
        assert!(s.middle.group.is_trivial());
        assert!(s.c.group.is_trivial());
        assert!(s.k.group.is_trivial());
        let r = solve_obstruction(&s, &[]).unwrap();
        assert!(r.solution_representative.is_empty());
        assert_eq!(r.coset_size, CosetSize::Finite(BigInt::from(1)));
    }

    #[test]
    fn torus_inversion_mod_three() {
        let spec = CatalogSpec::simple("Torus", 1).with_action(vec![vec![vec![-1]]]);
        let (d, a) = catalog_spec(&spec).unwrap();
        let s = build_gamma(&d, &a, &MetaplecticForm::new(3, &[1], &[]).unwrap()).unwrap();
        assert_eq!(s.middle.group, FgAbGroup::cyclic(2));
        assert_eq!(s.source.group, FgAbGroup::cyclic(2));
        assert_eq!(s.induced.matrix.to_i64_rows().unwrap(), vec![vec![1]]);
        assert!(s.c.group.is_trivial());
    }

    #[test]
    fn obstruction_examples() {
        let s = kp();
        let r1 = solve_obstruction(&s, &int_vec(&[1])).unwrap();
        assert_eq!(r1.solution_representative, int_vec(&[1]));
        assert_eq!(r1.kernel_generators, vec![int_vec(&[2])]);
        assert_eq!(r1.coset_size, CosetSize::Infinite);
        assert_eq!(format_coset(&s, &r1), "1 + 2Z");
        let r0 = solve_obstruction(&s, &int_vec(&[0])).unwrap();
        assert_eq!(r0.solution_representative, int_vec(&[0]));
        assert_eq!(format_coset(&s, &r0), "0 + 2Z");
        // out-of-range coordinates reduce; wrong length is rejected
        assert_eq!(solve_obstruction(&s, &int_vec(&[5])).unwrap().chi, int_vec(&[1]));
        assert!(matches!(solve_obstruction(&s, &int_vec(&[1, 0])), Err(ObstructionError::BadChi(_))));

        assert!(verify_vanishing(&s, &int_vec(&[1]), &int_vec(&[1])));
        assert!(!verify_vanishing(&s, &int_vec(&[0]), &int_vec(&[1])));
        assert!(verify_vanishing(&s, &int_vec(&[0]), &int_vec(&[0])));
        assert_eq!(
            solutions_in_window(&s, &int_vec(&[1]), 3),
            vec![int_vec(&[-3]), int_vec(&[-1]), int_vec(&[1]), int_vec(&[3])]
        );
    }

    #[test]
    fn sharp_not_preserved_is_an_error() {
        let spec = CatalogSpec::simple("Torus", 2).with_action(vec![vec![vec![0, 1], vec![1, 0]]]);
        let (d, a) = catalog_spec(&spec).unwrap();
        // b = [[0, 2], [2, 0]] mod 4: Λ♯ = 2Z², swap-stable.
        let f = MetaplecticForm::new(4, &[0, 2], &[vec![2]]).unwrap();
        // b = diag(0, 2) mod 4: Λ♯ = Z ⊕ 2Z, not swap-stable.
        let g = MetaplecticForm::new(4, &[0, 1], &[vec![0]]).unwrap();
        assert!(build_gamma(&d, &a, &f).is_ok());
        assert!(matches!(
            build_gamma(&d, &a, &g),
            Err(ObstructionError::ActionDoesNotPreserveSharp { generator: 0 })
        ));
        let checked = g.with_cyclotomic_trivial(true);
        assert!(matches!(
            build_gamma(&d, &a, &checked),
            Err(ObstructionError::FormNotGaloisInvariant(_))
        ));
    }

    #[test]
    fn adjoint_examples() {
        let n4 = BigInt::from(4);
        let (ok, w) = check_adjoint_pairing(&IntMatrix::zeros(2, 3), &n4).unwrap();
        assert!(ok);
        assert!(w.left_quotient.is_trivial() && w.right_quotient.is_trivial());

        let (ok, w) = check_adjoint_pairing(&IntMatrix::from_rows(&[vec![1]], 1), &n4).unwrap();
        assert!(ok);
        assert_eq!(w.left_quotient, FgAbGroup::cyclic(4));

        let (ok, w) = check_adjoint_pairing(&IntMatrix::from_rows(&[vec![2], vec![0]], 1), &n4).unwrap();
        assert!(ok);
        assert_eq!(w.left_quotient, FgAbGroup::cyclic(2));
        assert_eq!(w.right_quotient, FgAbGroup::cyclic(2));
    }

    proptest! {
        #[test]
        fn adjoint_pairing_is_iso(
            r1 in 1usize..=4,
            r2 in 1usize..=4,
            n in 1u64..=12,
            seed in proptest::collection::vec(0i64..12, 16),
        ) {
            let rows: Vec<Vec<i64>> = (0..r1).map(|i| (0..r2).map(|j| seed[i * 4 + j] % n as i64).collect()).collect();
            let (ok, _) = check_adjoint_pairing(&IntMatrix::from_rows(&rows, r2), &BigInt::from(n)).unwrap();
            prop_assert!(ok);
        }
    }
}
