//! Quadratic forms `Q : Λ → Z/N`, their derived pairings `b`, `b₁`, `b₂`,
//! the sharp lattice `Λ♯ = ker(b)` and the sharp root datum.
//!
//! The Tate twists `A(-1)`, `A(1)` are identified with `Z/N` throughout.
//! Galois-equivariance of `Q` is only meaningful when the cyclotomic action
//! on `Z/N` is trivial, which the form records as a user declaration.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{self, hermite_basis, kernel_mod, IntMatrix, Presentation, Quotient};
use crate::root_datum::{BasedRootDatum, RootDatumError, ValidationReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("modulus must be at least 1")]
    BadModulus,
    #[error("form has rank {form}, datum has rank {datum}")]
    RankMismatch { form: usize, datum: usize },
    #[error("malformed form data: {0}")]
    Malformed(String),
    #[error("form is not strictly Weyl-invariant: {0}")]
    NotStrict(ValidationReport<FormViolation>),
    #[error("b₂ is not well defined: {0}")]
    WellDefinednessFailure(String),
    #[error("sharp-lattice invariant failed: {0}")]
    SharpInvariant(String),
    #[error("sharp root datum failed validation: {0}")]
    SharpDatumInvalid(ValidationReport),
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormViolation {
    RankMismatch { form: usize, datum: usize },
    /// `b(α_i, e_j) ≠ Q(α_i)⟨α̌_i, e_j⟩`.
    StrictInvariance { coroot: usize, basis: usize, lhs: BigInt, rhs: BigInt },
    NotGaloisInvariant { generator: usize },
}

impl fmt::Display for FormViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormViolation::RankMismatch { form, datum } => {
                write!(f, "form rank {form} does not match datum rank {datum}")
            }
            FormViolation::StrictInvariance { coroot, basis, lhs, rhs } => write!(
                f,
                "b(α{coroot}, e{basis}) = {lhs} but Q(α{coroot})·⟨α̌{coroot}, e{basis}⟩ = {rhs}"
            ),
            FormViolation::NotGaloisInvariant { generator } => {
                write!(f, "Q is not invariant under Galois generator {generator}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetaplecticForm {
    modulus: BigInt,
    q: Vec<BigInt>,
    /// Symmetric, diagonal `2·Q(e_i)`, entries reduced mod `N`.
    b: IntMatrix,
    /// The user declares that the cyclotomic character acts trivially on
    /// `Z/N` (e.g. `μ_N ⊂ F`), so `Q` must be Galois-invariant.
    pub cyclotomic_trivial: bool,
}

impl MetaplecticForm {
    /// `q_basis[i] = Q(e_i)`; `b_offdiag[i][k] = b(e_i, e_{i+1+k})`.
    pub fn new(modulus: u64, q_basis: &[i64], b_offdiag: &[Vec<i64>]) -> Result<Self, FormError> {
        if modulus == 0 {
            return Err(FormError::BadModulus);
        }
        let n = q_basis.len();
        let rows: Vec<&Vec<i64>> = b_offdiag.iter().filter(|r| !r.is_empty()).collect();
        if rows.len() != n.saturating_sub(1) {
            return Err(FormError::Malformed(format!(
                "b_offdiag needs {} nonempty rows for rank {n}, got {}",
                n.saturating_sub(1),
                rows.len()
            )));
        }
        let nm = BigInt::from(modulus);
        let mut b = IntMatrix::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n - 1 - i {
                return Err(FormError::Malformed(format!(
                    "b_offdiag row {i} has {} entries, expected {}",
                    row.len(),
                    n - 1 - i
                )));
            }
            for (k, &x) in row.iter().enumerate() {
                let v = BigInt::from(x).mod_floor(&nm);
                b[(i, i + 1 + k)] = v.clone();
                b[(i + 1 + k, i)] = v;
            }
        }
        let q: Vec<BigInt> = q_basis.iter().map(|&x| BigInt::from(x).mod_floor(&nm)).collect();
        for (i, qi) in q.iter().enumerate() {
            b[(i, i)] = (qi * BigInt::from(2)).mod_floor(&nm);
        }
        Ok(Self {
            modulus: nm,
            q,
            b,
            cyclotomic_trivial: false,
        })
    }

    /// The zero form on `Z^rank`.
    pub fn zero(modulus: u64, rank: usize) -> Self {
        let rows: Vec<Vec<i64>> = (0..rank.saturating_sub(1)).map(|i| vec![0; rank - 1 - i]).collect();
        Self::new(modulus, &vec![0; rank], &rows).expect("zero form is well formed")
    }

    pub fn with_cyclotomic_trivial(mut self, yes: bool) -> Self {
        self.cyclotomic_trivial = yes;
        self
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn rank(&self) -> usize {
        self.q.len()
    }

    pub fn q_basis(&self) -> &[BigInt] {
        &self.q
    }

    pub fn b_matrix(&self) -> &IntMatrix {
        &self.b
    }

    /// Upper-triangular off-diagonal rows, the inverse of [`Self::new`].
    pub fn b_offdiag(&self) -> Vec<Vec<BigInt>> {
        let n = self.rank();
        (0..n.saturating_sub(1))
            .map(|i| (i + 1..n).map(|j| self.b[(i, j)].clone()).collect())
            .collect()
    }

    pub fn reduce(&self, x: BigInt) -> BigInt {
        x.mod_floor(&self.modulus)
    }

    /// `Q(Σ c_i e_i) = Σ c_i² Q(e_i) + Σ_{i<j} c_i c_j b(e_i, e_j)`.
    pub fn q(&self, v: &[BigInt]) -> BigInt {
        let n = self.rank();
        let mut acc = BigInt::zero();
        for i in 0..n {
            if v[i].is_zero() {
                continue;
            }
            acc += &v[i] * &v[i] * &self.q[i];
            for j in i + 1..n {
                acc += &v[i] * &v[j] * &self.b[(i, j)];
            }
        }
        self.reduce(acc)
    }

    pub fn b(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        let bv = self.b.mul_vec(v);
        self.reduce(u.iter().zip(&bv).map(|(x, y)| x * y).sum())
    }

    /// Additive order of `x` in `Z/N`: `N / gcd(N, x)`.
    pub fn additive_order(&self, x: &BigInt) -> BigInt {
        &self.modulus / x.gcd(&self.modulus)
    }

    /// The form pulled back along the columns of `basis` (a sublattice).
    pub fn restrict(&self, basis: &IntMatrix) -> MetaplecticForm {
        let k = basis.cols();
        let cols = basis.col_vectors();
        let mut b = IntMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                b[(i, j)] = self.b(&cols[i], &cols[j]);
            }
        }
        MetaplecticForm {
            modulus: self.modulus.clone(),
            q: cols.iter().map(|c| self.q(c)).collect(),
            b,
            cyclotomic_trivial: self.cyclotomic_trivial,
        }
    }

    /// `Q ∘ g = Q` for each generator, checked on the basis and on `b`.
    pub fn galois_violations(&self, action: &[IntMatrix]) -> Vec<FormViolation> {
        let n = self.rank();
        let basis: Vec<Vec<BigInt>> = IntMatrix::identity(n).col_vectors();
        action
            .iter()
            .enumerate()
            .filter(|(_, g)| {
                let images: Vec<Vec<BigInt>> = g.col_vectors();
                (0..n).any(|i| {
                    self.q(&images[i]) != self.q(&basis[i])
                        || (i + 1..n).any(|j| self.b(&images[i], &images[j]) != self.b(&basis[i], &basis[j]))
                })
            })
            .map(|(k, _)| FormViolation::NotGaloisInvariant { generator: k })
            .collect()
    }
}

/// Checks `b(α, e_j) = Q(α)⟨α̌, e_j⟩` for every simple coroot and basis
/// vector.
pub fn check_strict_weyl_invariance(
    datum: &BasedRootDatum,
    form: &MetaplecticForm,
) -> ValidationReport<FormViolation> {
    if form.rank() != datum.rank() {
        return ValidationReport {
            violations: vec![FormViolation::RankMismatch {
                form: form.rank(),
                datum: datum.rank(),
            }],
        };
    }
    let n = datum.rank();
    let mut violations = Vec::new();
    for i in 0..datum.semisimple_rank() {
        let alpha = datum.coroot(i);
        let q_alpha = form.q(&alpha);
        let check = datum.root(i);
        let b_alpha = form.b_matrix().transpose().mul_vec(&alpha);
        for j in 0..n {
            let lhs = form.reduce(b_alpha[j].clone());
            let rhs = form.reduce(&q_alpha * &check[j]);
            if lhs != rhs {
                violations.push(FormViolation::StrictInvariance {
                    coroot: i,
                    basis: j,
                    lhs,
                    rhs,
                });
            }
        }
    }
    ValidationReport { violations }
}

fn ensure_strict(datum: &BasedRootDatum, form: &MetaplecticForm) -> Result<(), FormError> {
    datum.ensure_valid()?;
    if form.rank() != datum.rank() {
        return Err(FormError::RankMismatch {
            form: form.rank(),
            datum: datum.rank(),
        });
    }
    let report = check_strict_weyl_invariance(datum, form);
    if report.is_valid() {
        Ok(())
    } else {
        Err(FormError::NotStrict(report))
    }
}

/// `b₁ : Λ_sc ⊗ Λ_ad → Z/N` in the bases `Δ` and fundamental coweights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct B1Table {
    pub modulus: BigInt,
    /// `table[(i, j)] = b₁(α_i, ω_j)`.
    pub table: IntMatrix,
}

impl B1Table {
    /// `b₁(Σ c_i α_i, Σ w_j ω_j)`.
    pub fn eval(&self, c: &[BigInt], w: &[BigInt]) -> BigInt {
        let tw = self.table.mul_vec(w);
        c.iter().zip(&tw).map(|(x, y)| x * y).sum::<BigInt>().mod_floor(&self.modulus)
    }
}

pub fn derive_b1(datum: &BasedRootDatum, form: &MetaplecticForm) -> Result<B1Table, FormError> {
    ensure_strict(datum, form)?;
    let l = datum.semisimple_rank();
    // ⟨α̌_i, ω_j⟩ = δ_ij, so b₁(α_i, ω_j) = Q(α_i) δ_ij.
    let mut table = IntMatrix::zeros(l, l);
    for i in 0..l {
        table[(i, i)] = form.q(&datum.coroot(i));
    }
    Ok(B1Table {
        modulus: form.modulus().clone(),
        table,
    })
}

/// `b₂ : π₁G ⊗ Ker(Λ → Λ_ad) → Z/N`, `b₂(λ̄, z) = b(λ, z)`.
#[derive(Clone, Debug)]
pub struct B2Pairing {
    pub pi1: Quotient,
    /// Hermite basis of `Ker(Λ → Λ_ad)` as columns in `Λ`.
    pub kernel_basis: IntMatrix,
    /// `table[i][k] = b₂(generator i of π₁, kernel basis vector k)`.
    pub table: Vec<Vec<BigInt>>,
    form: MetaplecticForm,
    ad_map: IntMatrix,
}

impl B2Pairing {
    /// Value on a class of `π₁G` (canonical coordinates) and an element of
    /// `Ker(Λ → Λ_ad)` given in `Λ`. Returns `None` if `z` is not in the
    /// kernel.
    pub fn eval(&self, class: &[BigInt], z: &[BigInt]) -> Option<BigInt> {
        if self.ad_map.mul_vec(z).iter().any(|x| !x.is_zero()) {
            return None;
        }
        let lift = self.pi1.lift(class);
        Some(self.form.b(&lift, z))
    }

    /// `b(λ, z)` for an explicit lift `λ ∈ Λ`.
    pub fn eval_lift(&self, lambda: &[BigInt], z: &[BigInt]) -> BigInt {
        self.form.b(lambda, z)
    }
}

pub fn derive_b2(datum: &BasedRootDatum, form: &MetaplecticForm) -> Result<B2Pairing, FormError> {
    ensure_strict(datum, form)?;
    let kernel_basis = lattice::integer_kernel(datum.roots());
    for i in 0..datum.semisimple_rank() {
        for k in 0..kernel_basis.cols() {
            let v = form.b(&datum.coroot(i), &kernel_basis.col(k));
            if !v.is_zero() {
                return Err(FormError::WellDefinednessFailure(format!(
                    "b(α{i}, z{k}) = {v} ≠ 0, so b₂ depends on the lift"
                )));
            }
        }
    }
    let pi1 = lattice::cokernel(datum.coroots());
    let table = (0..pi1.group.ngens())
        .map(|i| {
            let lift = pi1.lifts.col(i);
            (0..kernel_basis.cols()).map(|k| form.b(&lift, &kernel_basis.col(k))).collect()
        })
        .collect();
    Ok(B2Pairing {
        pi1,
        kernel_basis,
        table,
        form: form.clone(),
        ad_map: datum.roots().clone(),
    })
}

/// Sharp lattice and sharp root data of `(G, Q)`.
#[derive(Clone, Debug)]
pub struct SharpData {
    pub modulus: BigInt,
    /// Hermite basis of `Λ♯ = ker(b)` as the columns of an `n × n` matrix.
    pub basis: IntMatrix,
    /// `ord(Q(α_i))` for each simple coroot.
    pub orders: Vec<BigInt>,
    /// `α♯_i = ord(Q(α_i))·α_i` in `Λ` coordinates (columns).
    pub coroots: IntMatrix,
    /// `α♯_i` in the `Λ♯` basis (columns).
    pub coroots_in_basis: IntMatrix,
    /// `α̌♯_i = ord(Q(α_i))⁻¹·α̌_i` as covectors on the `Λ♯` basis (rows).
    pub roots_in_basis: IntMatrix,
    /// Hermite basis of `Λ♯_sc = span(Δ♯)` in `Λ` coordinates.
    pub sc_basis: IntMatrix,
    /// `π₁G♯ = Λ♯/Λ♯_sc`, presented on `Λ♯` coordinates.
    pub pi1: Quotient,
    /// `ε : π₁G♯ → Z/2` on the canonical generators of `pi1`.
    pub epsilon: Vec<u8>,
    /// `Λ♯_ad = ker(b₁) ⊂ Λ_ad` in the fundamental-coweight basis. Reported
    /// only; nothing downstream consumes it.
    pub ad_basis: IntMatrix,
    /// `Q` restricted to `Λ♯`, in the `Λ♯` basis.
    pub restricted_form: MetaplecticForm,
    pub source_name: Option<String>,
}

impl SharpData {
    /// Transports a lattice automorphism of `Λ` to `Λ♯` coordinates, or
    /// `None` if it does not preserve `Λ♯`.
    pub fn transport(&self, g: &IntMatrix) -> Option<IntMatrix> {
        let gs = g.mul(&self.basis);
        let cols = gs
            .col_vectors()
            .iter()
            .map(|c| lattice::solve(&self.basis, c))
            .collect::<Option<Vec<_>>>()?;
        Some(IntMatrix::from_cols(&cols, self.basis.rows()))
    }

    /// `ε` evaluated on an element of `π₁G♯` (canonical coordinates).
    pub fn epsilon_of(&self, class: &[BigInt]) -> u8 {
        let class = self.pi1.group.reduce(class);
        let s: u32 = class
            .iter()
            .zip(&self.epsilon)
            .map(|(c, &e)| (c.mod_floor(&BigInt::from(2)).to_u32().unwrap()) * e as u32)
            .sum();
        (s % 2) as u8
    }
}

pub fn sharpen(datum: &BasedRootDatum, form: &MetaplecticForm) -> Result<SharpData, FormError> {
    ensure_strict(datum, form)?;
    let n = datum.rank();
    let l = datum.semisimple_rank();
    let nm = form.modulus().clone();
    let basis = kernel_mod(form.b_matrix(), &nm);
    if basis.cols() != n {
        return Err(FormError::SharpInvariant(format!(
            "Λ♯ has rank {} < {n}",
            basis.cols()
        )));
    }
    let orders: Vec<BigInt> = (0..l).map(|i| form.additive_order(&form.q(&datum.coroot(i)))).collect();
    let sharp_coroots: Vec<Vec<BigInt>> = (0..l)
        .map(|i| datum.coroot(i).iter().map(|x| x * &orders[i]).collect())
        .collect();
    let coroots = IntMatrix::from_cols(&sharp_coroots, n);
    let mut in_basis = Vec::with_capacity(l);
    for (i, c) in sharp_coroots.iter().enumerate() {
        let coords = lattice::solve(&basis, c)
            .ok_or_else(|| FormError::SharpInvariant(format!("α♯{i} does not lie in Λ♯")))?;
        in_basis.push(coords);
    }
    let coroots_in_basis = IntMatrix::from_cols(&in_basis, n);
    let pulled = datum.roots().mul(&basis);
    let mut roots_in_basis = IntMatrix::zeros(l, n);
    for i in 0..l {
        for j in 0..n {
            let x = &pulled[(i, j)];
            if !x.is_multiple_of(&orders[i]) {
                return Err(FormError::SharpInvariant(format!(
                    "⟨α̌{i}, Λ♯⟩ is not divisible by ord(Q(α{i})) = {}",
                    orders[i]
                )));
            }
            roots_in_basis[(i, j)] = x / &orders[i];
        }
    }

    // N·Λ ⊆ Λ♯
    for j in 0..n {
        let mut v = vec![BigInt::zero(); n];
        v[j] = nm.clone();
        if !lattice::in_column_span(&basis, &v) {
            return Err(FormError::SharpInvariant(format!("N·e{j} is not in Λ♯")));
        }
    }

    // Λ♯_sc = span(Δ♯) agrees with ker(b₁) ∩ Λ_sc (in coroot coordinates).
    let b1 = derive_b1(datum, form)?;
    let ker_b1 = kernel_mod(&b1.table.transpose(), &nm);
    let span_sharp = hermite_basis(
        &(0..l)
            .map(|i| {
                let mut v = vec![BigInt::zero(); l];
                v[i] = orders[i].clone();
                v
            })
            .collect::<Vec<_>>(),
        l,
    );
    if hermite_basis(&ker_b1.col_vectors(), l) != span_sharp {
        return Err(FormError::SharpInvariant("span(Δ♯) differs from ker(b₁) on Λ_sc".into()));
    }

    // Q on Λ♯: additive, 2-torsion, vanishing on Λ♯_sc.
    let restricted_form = form.restrict(&basis);
    if !restricted_form.b_matrix().is_zero() {
        return Err(FormError::SharpInvariant("b does not vanish on Λ♯".into()));
    }
    for (i, v) in restricted_form.q_basis().iter().enumerate() {
        if !form.reduce(v * 2).is_zero() {
            return Err(FormError::SharpInvariant(format!("Q(Λ♯ basis {i}) = {v} is not 2-torsion")));
        }
    }
    for (i, c) in sharp_coroots.iter().enumerate() {
        if !form.q(c).is_zero() {
            return Err(FormError::SharpInvariant(format!("Q(α♯{i}) ≠ 0")));
        }
    }

    let pi1 = Presentation::new(n, coroots_in_basis.clone()).quotient();
    let half = if nm.is_even() { Some(&nm / 2) } else { None };
    let mut epsilon = Vec::with_capacity(pi1.group.ngens());
    for i in 0..pi1.group.ngens() {
        let v = restricted_form.q(&pi1.lifts.col(i));
        let bit = match &half {
            _ if v.is_zero() => 0,
            Some(h) if &v == h => 1,
            _ => {
                return Err(FormError::SharpInvariant(format!(
                    "ε takes value {v} outside the 2-torsion of Z/{nm}"
                )))
            }
        };
        epsilon.push(bit);
    }

    let ad_basis = kernel_mod(&b1.table, &nm);
    let sc_basis = lattice::lattice_basis(&sharp_coroots, n);
    Ok(SharpData {
        modulus: nm,
        basis,
        orders,
        coroots,
        coroots_in_basis,
        roots_in_basis,
        sc_basis,
        pi1,
        epsilon,
        ad_basis,
        restricted_form,
        source_name: datum.name.clone(),
    })
}

/// The based root datum of `G♯`, re-expressed in the `Λ♯` basis.
pub fn sharp_root_datum(sharp: &SharpData) -> Result<BasedRootDatum, FormError> {
    let datum = BasedRootDatum::from_matrices(
        sharp.coroots_in_basis.clone(),
        sharp.roots_in_basis.clone(),
        sharp.source_name.as_ref().map(|n| format!("{n}♯")),
    );
    let report = datum.validate();
    if report.is_valid() {
        Ok(datum)
    } else {
        Err(FormError::SharpDatumInvalid(report))
    }
}

/// Langlands dual datum: swaps `Λ ↔ Λ̌` and `Δ ↔ Δ̌`.
pub fn dual_root_datum(datum: &BasedRootDatum) -> BasedRootDatum {
    datum.dual()
}

/// Every strictly Weyl-invariant form on the datum with values in `Z/N`,
/// by exhaustive search over `Q(e_i)` and `b(e_i, e_j)`. Only suitable for
/// small ranks and moduli.
pub fn strict_forms(datum: &BasedRootDatum, modulus: u64) -> Vec<MetaplecticForm> {
    let n = datum.rank();
    let slots = n + n * n.saturating_sub(1) / 2;
    let total = (modulus as usize).pow(slots as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut digits = Vec::with_capacity(slots);
        for _ in 0..slots {
            digits.push((c % modulus as usize) as i64);
            c /= modulus as usize;
        }
        let q = digits[..n].to_vec();
        let mut rest = digits[n..].iter();
        let rows: Vec<Vec<i64>> = (0..n.saturating_sub(1))
            .map(|i| (0..n - 1 - i).map(|_| *rest.next().unwrap()).collect())
            .collect();
        let form = MetaplecticForm::new(modulus, &q, &rows).expect("well-formed enumeration");
        if check_strict_weyl_invariance(datum, &form).is_valid() {
            out.push(form);
        }
    }
    out
}

impl From<ValidationReport> for FormError {
    fn from(r: ValidationReport) -> Self {
        FormError::SharpDatumInvalid(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{int_vec, FgAbGroup};
    use crate::root_datum::{catalog, catalog_spec, weyl_group, CatalogSpec, GROUP_CAP};

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn kp_form() -> MetaplecticForm {
        MetaplecticForm::new(2, &[0, 0], &[vec![1]]).unwrap()
    }

    #[test]
    fn sl2_strict_mod_two() {
        let (d, _) = catalog("SL", 2).unwrap();
        let f = MetaplecticForm::new(2, &[1], &[]).unwrap();
        assert!(check_strict_weyl_invariance(&d, &f).is_valid());
    }

    #[test]
    fn gl2_kp_form_is_strict_and_b12_zero_is_not() {
        let (d, _) = catalog("GL", 2).unwrap();
        assert!(check_strict_weyl_invariance(&d, &kp_form()).is_valid());
        // Q(α) = 1 but b(e1, e2) = 0: Q(e1) = 1, Q(e2) = 0.
        let bad = MetaplecticForm::new(2, &[1, 0], &[vec![0]]).unwrap();
        assert_eq!(bad.q(&int_vec(&[1, -1])), z(1));
        let r = check_strict_weyl_invariance(&d, &bad);
        assert!(!r.is_valid());
    }

    #[test]
    fn b1_examples() {
        let (sl2, _) = catalog("SL", 2).unwrap();
        let b1 = derive_b1(&sl2, &MetaplecticForm::new(2, &[1], &[]).unwrap()).unwrap();
        assert_eq!(b1.eval(&int_vec(&[1]), &int_vec(&[1])), z(1));

        let (sp4, _) = catalog("Sp", 4).unwrap();
        let zero = MetaplecticForm::zero(2, 2);
        assert!(derive_b1(&sp4, &zero).unwrap().table.is_zero());

        // The nonzero strict form on Sp4 mod 2 is Q(x) = x1² + x2².
        let f = MetaplecticForm::new(2, &[1, 1], &[vec![0]]).unwrap();
        let b1 = derive_b1(&sp4, &f).unwrap();
        // Q(e1 - e2) = 0, Q(e2) = 1.
        assert_eq!(b1.table, IntMatrix::from_rows(&[vec![0, 0], vec![0, 1]], 2));
        // Cross-check against b on Λ_sc ⊗ Λ through the adjoint map.
        for c in [[1, 0], [0, 1], [1, 1]] {
            for lam in [[1, 0], [0, 1], [3, -2]] {
                let c = int_vec(&c);
                let lam = int_vec(&lam);
                let sc = sp4.coroots().mul_vec(&c);
                let ad = sp4.roots().mul_vec(&lam);
                assert_eq!(b1.eval(&c, &ad), f.b(&sc, &lam));
            }
        }
    }

    #[test]
    fn b2_gl2_kp() {
        let (d, _) = catalog("GL", 2).unwrap();
        let b2 = derive_b2(&d, &kp_form()).unwrap();
        assert_eq!(b2.kernel_basis, IntMatrix::from_cols(&[int_vec(&[1, 1])], 2));
        assert_eq!(b2.eval(&int_vec(&[1]), &int_vec(&[1, 1])), Some(z(1)));
        assert_eq!(b2.eval(&int_vec(&[1]), &int_vec(&[1, 0])), None);
    }

    #[test]
    fn b2_sl2_and_torus() {
        let (sl2, _) = catalog("SL", 2).unwrap();
        let b2 = derive_b2(&sl2, &MetaplecticForm::new(2, &[1], &[]).unwrap()).unwrap();
        assert!(b2.table.is_empty());

        for n in [2u64, 3, 5, 7] {
            let (t, _) = catalog("Torus", 1).unwrap();
            let b2 = derive_b2(&t, &MetaplecticForm::new(n, &[1], &[]).unwrap()).unwrap();
            let v = b2.eval(&b2.pi1.project(&int_vec(&[1])), &int_vec(&[1])).unwrap();
            assert_eq!(v, z(2).mod_floor(&z(n as i64)));
        }
    }

    #[test]
    fn sharpen_sl2() {
        let (d, _) = catalog("SL", 2).unwrap();
        let s = sharpen(&d, &MetaplecticForm::new(2, &[1], &[]).unwrap()).unwrap();
        assert_eq!(s.basis, IntMatrix::identity(1));
        assert_eq!(s.coroots, IntMatrix::from_rows(&[vec![2]], 1));
        assert_eq!(s.pi1.group, FgAbGroup::cyclic(2));
        assert_eq!(s.epsilon, vec![1]);
        let sd = sharp_root_datum(&s).unwrap();
        let (pgl, _) = catalog("PGL", 2).unwrap();
        assert_eq!(sd.coroots(), pgl.coroots());
        assert_eq!(sd.roots(), pgl.roots());
    }

    #[test]
    fn sharpen_gl2_kp() {
        let (d, _) = catalog("GL", 2).unwrap();
        let s = sharpen(&d, &kp_form()).unwrap();
        assert_eq!(s.basis, IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]], 2));
        assert_eq!(s.coroots, IntMatrix::from_cols(&[int_vec(&[2, -2])], 2));
        assert_eq!(s.pi1.group, FgAbGroup::free(1));
        let sd = sharp_root_datum(&s).unwrap();
        assert_eq!(sd.coroots(), d.coroots());
        assert_eq!(sd.roots(), d.roots());
    }

    #[test]
    fn sharpen_torus_odd_modulus() {
        for n in [3u64, 5, 9] {
            let (t, _) = catalog("Torus", 1).unwrap();
            let s = sharpen(&t, &MetaplecticForm::new(n, &[1], &[]).unwrap()).unwrap();
            assert_eq!(s.basis, IntMatrix::from_rows(&[vec![n as i64]], 1));
            assert_eq!(s.epsilon, vec![0]);
        }
    }

    #[test]
    fn zero_form_returns_original_datum() {
        for (name, n) in [("GL", 3), ("Sp", 4), ("SO_odd", 5), ("PGL", 3)] {
            let (d, _) = catalog(name, n).unwrap();
            let s = sharpen(&d, &MetaplecticForm::zero(4, d.rank())).unwrap();
            let sd = sharp_root_datum(&s).unwrap();
            assert_eq!(sd.coroots(), d.coroots());
            assert_eq!(sd.roots(), d.roots());
        }
    }

    #[test]
    fn trivial_modulus() {
        let (d, _) = catalog("GL", 2).unwrap();
        let s = sharpen(&d, &MetaplecticForm::zero(1, 2)).unwrap();
        assert_eq!(s.basis, IntMatrix::identity(2));
        assert!(s.epsilon.iter().all(|&e| e == 0));
    }

    #[test]
    fn weyl_invariance_of_strict_forms() {
        for (name, n, m) in [("GL", 3, 3), ("Sp", 4, 4), ("SO_odd", 5, 2), ("SL", 3, 6)] {
            let (d, _) = catalog(name, n).unwrap();
            let w = weyl_group(&d, GROUP_CAP).unwrap();
            for f in strict_forms(&d, m) {
                for g in &w {
                    for lam in IntMatrix::identity(d.rank()).col_vectors() {
                        let mixed: Vec<BigInt> = lam.iter().enumerate().map(|(k, x)| x + z(k as i64 + 1)).collect();
                        assert_eq!(f.q(&g.mul_vec(&mixed)), f.q(&mixed));
                    }
                }
            }
        }
    }

    #[test]
    fn dual_examples() {
        let (gl, _) = catalog("GL", 3).unwrap();
        let dual = dual_root_datum(&gl);
        assert_eq!(dual.coroots(), gl.coroots());
        let (t, _) = catalog("Torus", 2).unwrap();
        assert_eq!(dual_root_datum(&t).semisimple_rank(), 0);
    }

    #[test]
    fn galois_invariance() {
        let spec = CatalogSpec::simple("Torus", 2).with_action(vec![vec![vec![0, 1], vec![1, 0]]]);
        let (_, act) = catalog_spec(&spec).unwrap();
        let good = MetaplecticForm::new(3, &[1, 1], &[vec![2]]).unwrap();
        let bad = MetaplecticForm::new(3, &[1, 2], &[vec![2]]).unwrap();
        assert!(good.galois_violations(act.generators()).is_empty());
        assert_eq!(bad.galois_violations(act.generators()).len(), 1);
    }
}
