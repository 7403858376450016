//! Based root data `(Δ ⊂ Λ, Δ̌ ⊂ Λ̌)` with Galois actions.
//!
//! `Λ` is the cocharacter lattice `Z^n` in a fixed basis. Simple coroots are
//! stored as the columns of an `n × ℓ` matrix, simple roots as the rows of an
//! `ℓ × n` matrix of covectors, so that `roots * coroots` is the pairing
//! matrix `⟨α̌_i, α_j⟩`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{self, cokernel, IntMatrix, LatticeError, Presentation, Quotient, Subgroup};

/// Cap on the size of closed Galois and Weyl groups.
pub const GROUP_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDatumError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid root datum: {0}")]
    Invalid(ValidationReport),
    #[error("group closure exceeds cap of {0} elements")]
    CapExceeded(usize),
    #[error("unknown catalog entry {0:?}")]
    UnknownName(String),
    #[error("bad catalog parameters: {0}")]
    BadParams(String),
    #[error("invalid Galois action: {0}")]
    BadAction(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DiagonalNotTwo { index: usize, value: BigInt },
    OffDiagonalPositive { row: usize, col: usize, value: BigInt },
    ZeroPatternAsymmetric { row: usize, col: usize },
    NotSymmetrizable,
    NotPositiveDefinite,
    CorootsDependent,
    RootsDependent,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DiagonalNotTwo { index, value } => {
                write!(f, "diagonal entry {index} of the pairing matrix is {value}, not 2")
            }
            Violation::OffDiagonalPositive { row, col, value } => {
                write!(f, "off-diagonal positive: pairing entry ({row}, {col}) = {value}")
            }
            Violation::ZeroPatternAsymmetric { row, col } => {
                write!(f, "zero pattern not symmetric at ({row}, {col})")
            }
            Violation::NotSymmetrizable => write!(f, "pairing matrix is not symmetrizable"),
            Violation::NotPositiveDefinite => {
                write!(f, "symmetrized pairing matrix is not positive definite (not of finite type)")
            }
            Violation::CorootsDependent => write!(f, "simple coroots are linearly dependent"),
            Violation::RootsDependent => write!(f, "simple roots are linearly dependent"),
        }
    }
}

/// List of violated invariants; empty iff the checked object is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport<V = Violation> {
    pub violations: Vec<V>,
}

impl<V> ValidationReport<V> {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<V: fmt::Display> fmt::Display for ValidationReport<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let msgs: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", msgs.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedRootDatum {
    rank: usize,
    coroots: IntMatrix,
    roots: IntMatrix,
    pub name: Option<String>,
}

impl BasedRootDatum {
    /// `coroots` are vectors in `Λ = Z^rank`, `roots` covectors; both lists
    /// must have the same length.
    pub fn new(
        rank: usize,
        coroots: &[Vec<i64>],
        roots: &[Vec<i64>],
        name: Option<String>,
    ) -> Result<Self, RootDatumError> {
        let big = |vs: &[Vec<i64>]| -> Vec<Vec<BigInt>> { vs.iter().map(|v| lattice::int_vec(v)).collect() };
        Self::from_big(rank, &big(coroots), &big(roots), name)
    }

    pub fn from_big(
        rank: usize,
        coroots: &[Vec<BigInt>],
        roots: &[Vec<BigInt>],
        name: Option<String>,
    ) -> Result<Self, RootDatumError> {
        if coroots.len() != roots.len() {
            return Err(RootDatumError::Shape(format!(
                "{} simple coroots but {} simple roots",
                coroots.len(),
                roots.len()
            )));
        }
        for (i, v) in coroots.iter().chain(roots).enumerate() {
            if v.len() != rank {
                return Err(RootDatumError::Shape(format!(
                    "vector {i} has length {}, expected rank {rank}",
                    v.len()
                )));
            }
        }
        Ok(Self {
            rank,
            coroots: IntMatrix::from_cols(coroots, rank),
            roots: IntMatrix::from_rows(roots, rank),
            name,
        })
    }

    pub fn from_matrices(coroots: IntMatrix, roots: IntMatrix, name: Option<String>) -> Self {
        assert_eq!(coroots.cols(), roots.rows());
        assert_eq!(coroots.rows(), roots.cols());
        Self {
            rank: coroots.rows(),
            coroots,
            roots,
            name,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of simple roots `ℓ`.
    pub fn semisimple_rank(&self) -> usize {
        self.coroots.cols()
    }

    /// Simple coroots as the columns of an `n × ℓ` matrix.
    pub fn coroots(&self) -> &IntMatrix {
        &self.coroots
    }

    /// Simple roots as the rows of an `ℓ × n` matrix.
    pub fn roots(&self) -> &IntMatrix {
        &self.roots
    }

    pub fn coroot(&self, i: usize) -> Vec<BigInt> {
        self.coroots.col(i)
    }

    pub fn root(&self, i: usize) -> Vec<BigInt> {
        self.roots.row(i)
    }

    /// `⟨α̌_i, α_j⟩`.
    pub fn pairing_matrix(&self) -> IntMatrix {
        self.roots.mul(&self.coroots)
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("rank-{} datum", self.rank))
    }

    pub fn validate(&self) -> ValidationReport {
        let a = self.pairing_matrix();
        let l = self.semisimple_rank();
        let mut violations = Vec::new();
        for i in 0..l {
            if a[(i, i)] != BigInt::from(2) {
                violations.push(Violation::DiagonalNotTwo {
                    index: i,
                    value: a[(i, i)].clone(),
                });
            }
            for j in 0..l {
                if i == j {
                    continue;
                }
                if a[(i, j)].is_positive() {
                    violations.push(Violation::OffDiagonalPositive {
                        row: i,
                        col: j,
                        value: a[(i, j)].clone(),
                    });
                }
                if i < j && a[(i, j)].is_zero() != a[(j, i)].is_zero() {
                    violations.push(Violation::ZeroPatternAsymmetric { row: i, col: j });
                }
            }
        }
        if violations.is_empty() {
            match symmetrize(&a) {
                None => violations.push(Violation::NotSymmetrizable),
                Some(s) if !is_positive_definite(&s) => violations.push(Violation::NotPositiveDefinite),
                Some(_) => {}
            }
        }
        if lattice::rank(&self.coroots) != l {
            violations.push(Violation::CorootsDependent);
        }
        if lattice::rank(&self.roots) != l {
            violations.push(Violation::RootsDependent);
        }
        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<(), RootDatumError> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(RootDatumError::Invalid(report))
        }
    }

    /// Swaps `Λ ↔ Λ̌` and `Δ ↔ Δ̌`.
    pub fn dual(&self) -> BasedRootDatum {
        let name = self.name.as_ref().map(|n| match n.strip_prefix("dual(").and_then(|s| s.strip_suffix(')')) {
            Some(inner) => inner.to_string(),
            None => format!("dual({n})"),
        });
        BasedRootDatum {
            rank: self.rank,
            coroots: self.roots.transpose(),
            roots: self.coroots.transpose(),
            name,
        }
    }

    /// Simple reflection `s_i(λ) = λ - ⟨α̌_i, λ⟩ α_i` as a matrix on `Λ`.
    pub fn reflection(&self, i: usize) -> IntMatrix {
        let n = self.rank;
        let alpha = IntMatrix::from_cols(&[self.coroot(i)], n);
        let check = IntMatrix::from_rows(&[self.root(i)], n);
        IntMatrix::identity(n).sub(&alpha.mul(&check))
    }

    /// Connected components of the Dynkin diagram, as lists of simple-root
    /// indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let a = self.pairing_matrix();
        let l = self.semisimple_rank();
        let mut seen = vec![false; l];
        let mut out = Vec::new();
        for s in 0..l {
            if seen[s] {
                continue;
            }
            let mut comp = vec![];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(i) = stack.pop() {
                comp.push(i);
                for j in 0..l {
                    if !seen[j] && (!a[(i, j)].is_zero() || !a[(j, i)].is_zero()) {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Diagonal `D` with `D·A` symmetric, or `None`. Returns `D·A`.
fn symmetrize(a: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    let l = a.rows();
    let mut d: Vec<Option<BigRational>> = vec![None; l];
    for s in 0..l {
        if d[s].is_some() {
            continue;
        }
        d[s] = Some(BigRational::one());
        let mut queue = VecDeque::from([s]);
        while let Some(i) = queue.pop_front() {
            let di = d[i].clone().unwrap();
            for j in 0..l {
                if i == j || a[(i, j)].is_zero() {
                    continue;
                }
                // d_i a_ij = d_j a_ji
                let dj = &di * BigRational::new(a[(i, j)].clone(), a[(j, i)].clone());
                match &d[j] {
                    None => {
                        d[j] = Some(dj);
                        queue.push_back(j);
                    }
                    Some(existing) if *existing != dj => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(
        (0..l)
            .map(|i| {
                let di = d[i].clone().unwrap();
                (0..l).map(|j| &di * BigRational::from(a[(i, j)].clone())).collect()
            })
            .collect(),
    )
}

/// Exact `LDLᵀ` test: all pivots positive.
fn is_positive_definite(s: &[Vec<BigRational>]) -> bool {
    let n = s.len();
    let mut m: Vec<Vec<BigRational>> = s.to_vec();
    for k in 0..n {
        let pivot = m[k][k].clone();
        if !pivot.is_positive() {
            return false;
        }
        for i in k + 1..n {
            let factor = &m[i][k] / &pivot;
            for j in k..n {
                let v = &factor * &m[k][j];
                m[i][j] -= v;
            }
        }
    }
    true
}

/// Derived lattices of a valid datum.
#[derive(Clone, Debug)]
pub struct DerivedLattices {
    /// Basis of `Λ_sc = ZΔ` inside `Λ` (the coroot matrix).
    pub sc_inclusion: IntMatrix,
    /// `Λ → Λ_ad`, `λ ↦ (⟨α̌_i, λ⟩)_i` in the fundamental-coweight basis.
    pub ad_map: IntMatrix,
    /// `π₁G = Λ/Λ_sc` with projection from `Λ`.
    pub pi1: Quotient,
    /// Torsion subgroup `π₁ᵗG` with its inclusion into `π₁G`.
    pub pi1_torsion: Subgroup,
}

pub fn derive(datum: &BasedRootDatum) -> Result<DerivedLattices, RootDatumError> {
    datum.ensure_valid()?;
    let pi1 = cokernel(datum.coroots());
    let pi1_torsion = pi1.group.torsion_subgroup();
    Ok(DerivedLattices {
        sc_inclusion: datum.coroots().clone(),
        ad_map: datum.roots().clone(),
        pi1,
        pi1_torsion,
    })
}

/// Closes a set of invertible matrices under multiplication, breadth first.
pub fn close_group(generators: &[IntMatrix], n: usize, cap: usize) -> Result<Vec<IntMatrix>, RootDatumError> {
    let id = IntMatrix::identity(n);
    let mut seen: HashSet<IntMatrix> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = g.mul(&x);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Err(RootDatumError::CapExceeded(cap));
                }
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(order)
}

/// All elements of the Weyl group, enumerated by breadth-first closure of the
/// simple reflections.
pub fn weyl_group(datum: &BasedRootDatum, cap: usize) -> Result<Vec<IntMatrix>, RootDatumError> {
    datum.ensure_valid()?;
    let gens: Vec<IntMatrix> = (0..datum.semisimple_rank()).map(|i| datum.reflection(i)).collect();
    close_group(&gens, datum.rank(), cap)
}

/// Finite group acting on `Λ` by automorphisms of the based root datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisAction {
    generators: Vec<IntMatrix>,
    closed: Vec<IntMatrix>,
    permutations: Vec<Vec<usize>>,
}

impl GaloisAction {
    pub fn trivial(datum: &BasedRootDatum) -> Self {
        Self {
            generators: vec![],
            closed: vec![IntMatrix::identity(datum.rank())],
            permutations: vec![],
        }
    }

    /// Each generator must be invertible on `Λ`, permute `Δ`, and its
    /// contragredient must permute `Δ̌` by the same permutation.
    pub fn new(datum: &BasedRootDatum, generators: Vec<IntMatrix>) -> Result<Self, RootDatumError> {
        let n = datum.rank();
        let l = datum.semisimple_rank();
        let mut permutations = Vec::new();
        for (k, g) in generators.iter().enumerate() {
            if g.rows() != n || g.cols() != n {
                return Err(RootDatumError::BadAction(format!("generator {k} is not {n}x{n}")));
            }
            if !g.is_unimodular() {
                return Err(RootDatumError::BadAction(format!("generator {k} is not invertible over Z")));
            }
            let mut perm = Vec::with_capacity(l);
            for i in 0..l {
                let image = g.mul_vec(&datum.coroot(i));
                let Some(j) = (0..l).find(|&j| datum.coroot(j) == image) else {
                    return Err(RootDatumError::BadAction(format!(
                        "generator {k} sends simple coroot {i} outside Δ"
                    )));
                };
                // Contragredient: the root α̌_j composed with g must be α̌_i.
                let pulled = IntMatrix::from_rows(&[datum.root(j)], n).mul(g).row(0);
                if pulled != datum.root(i) {
                    return Err(RootDatumError::BadAction(format!(
                        "generator {k} does not permute Δ̌ compatibly at index {i}"
                    )));
                }
                perm.push(j);
            }
            let mut sorted = perm.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != l {
                return Err(RootDatumError::BadAction(format!("generator {k} does not permute Δ")));
            }
            permutations.push(perm);
        }
        let closed = close_group(&generators, n, GROUP_CAP)?;
        Ok(Self {
            generators,
            closed,
            permutations,
        })
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    /// Every element of the closed group.
    pub fn elements(&self) -> &[IntMatrix] {
        &self.closed
    }

    pub fn order(&self) -> usize {
        self.closed.len()
    }

    /// Index permutation of `Δ` induced by each generator.
    pub fn permutations(&self) -> &[Vec<usize>] {
        &self.permutations
    }

    /// Whether some generator moves a simple root into a different Dynkin
    /// component (e.g. swaps the factors of a product).
    pub fn permutes_components(&self, datum: &BasedRootDatum) -> bool {
        let comps = datum.components();
        let comp_of = |i: usize| comps.iter().position(|c| c.contains(&i)).unwrap();
        self.permutations
            .iter()
            .any(|p| p.iter().enumerate().any(|(i, &j)| comp_of(i) != comp_of(j)))
    }

    /// Contragredient action on `Λ̌`, as matrices acting on column
    /// covectors: `g ↦ (g⁻¹)ᵀ`.
    pub fn dual(&self, datum: &BasedRootDatum) -> Result<GaloisAction, RootDatumError> {
        let n = datum.rank();
        let inv_t: Vec<IntMatrix> = self
            .generators
            .iter()
            .map(|g| {
                let cols: Vec<Vec<BigInt>> = (0..n)
                    .map(|j| lattice::solve(g, &IntMatrix::identity(n).col(j)).expect("unimodular"))
                    .collect();
                IntMatrix::from_cols(&cols, n).transpose()
            })
            .collect();
        GaloisAction::new(&datum.dual(), inv_t)
    }
}

/// Coinvariants `Λ_Γ = Λ / Σ (g - 1)Λ` of a lattice, or of any presented
/// group with an action on its generators.
pub fn coinvariants(source: &Presentation, action: &[IntMatrix]) -> Result<Quotient, RootDatumError> {
    Ok(source.coinvariants(action)?.quotient())
}

/// `(π₁G)_Γ = Λ / (Λ_sc + Σ (g - 1)Λ)` with projection from `Λ`.
pub fn pi1_coinvariants(datum: &BasedRootDatum, action: &GaloisAction) -> Result<Quotient, RootDatumError> {
    let p = Presentation::new(datum.rank(), datum.coroots().clone());
    coinvariants(&p, action.generators())
}

/// Catalog request: `name` is one of `SL`, `GL`, `PGL`, `Sp`, `SO_odd`,
/// `Torus`, `Product`. For the matrix groups `n` is the matrix size
/// (`Sp` with `n = 4` is `Sp₄`); for `Torus` it is the rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Galois generators on the cocharacter lattice.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub action: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<CatalogSpec>,
}

impl CatalogSpec {
    pub fn simple(name: &str, n: usize) -> Self {
        Self {
            name: name.into(),
            n: Some(n),
            action: vec![],
            factors: vec![],
        }
    }

    pub fn with_action(mut self, action: Vec<Vec<Vec<i64>>>) -> Self {
        self.action = action;
        self
    }

    pub fn product(factors: Vec<CatalogSpec>) -> Self {
        Self {
            name: "Product".into(),
            n: None,
            action: vec![],
            factors,
        }
    }
}

/// Shorthand for `catalog_spec(&CatalogSpec::simple(name, n))`.
pub fn catalog(name: &str, n: usize) -> Result<(BasedRootDatum, GaloisAction), RootDatumError> {
    catalog_spec(&CatalogSpec::simple(name, n))
}

pub fn catalog_spec(spec: &CatalogSpec) -> Result<(BasedRootDatum, GaloisAction), RootDatumError> {
    let datum = catalog_datum(spec)?;
    let gens = catalog_action(spec, &datum)?;
    let action = GaloisAction::new(&datum, gens)?;
    datum.ensure_valid()?;
    Ok((datum, action))
}

fn need_n(spec: &CatalogSpec, min: usize) -> Result<usize, RootDatumError> {
    match spec.n {
        Some(n) if n >= min => Ok(n),
        Some(n) => Err(RootDatumError::BadParams(format!("{} needs n >= {min}, got {n}", spec.name))),
        None => Err(RootDatumError::BadParams(format!("{} needs a size parameter n", spec.name))),
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn diff(n: usize, i: usize) -> Vec<i64> {
    let mut v = unit(n, i);
    v[i + 1] = -1;
    v
}

fn cartan_a(l: usize) -> Vec<Vec<i64>> {
    (0..l)
        .map(|i| {
            (0..l)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect()
}

fn catalog_datum(spec: &CatalogSpec) -> Result<BasedRootDatum, RootDatumError> {
    let d = match spec.name.as_str() {
        "SL" => {
            let n = need_n(spec, 2)?;
            // Λ = coroot lattice; roots are the rows of the Cartan matrix.
            let l = n - 1;
            let coroots: Vec<Vec<i64>> = (0..l).map(|i| unit(l, i)).collect();
            BasedRootDatum::new(l, &coroots, &cartan_a(l), Some(format!("SL{n}")))?
        }
        "PGL" => {
            let n = need_n(spec, 2)?;
            // Λ = coweight lattice; coroots are the columns of the Cartan matrix.
            let l = n - 1;
            let a = cartan_a(l);
            let coroots: Vec<Vec<i64>> = (0..l).map(|j| (0..l).map(|i| a[i][j]).collect()).collect();
            let roots: Vec<Vec<i64>> = (0..l).map(|i| unit(l, i)).collect();
            BasedRootDatum::new(l, &coroots, &roots, Some(format!("PGL{n}")))?
        }
        "GL" => {
            let n = need_n(spec, 1)?;
            let simple: Vec<Vec<i64>> = (0..n - 1).map(|i| diff(n, i)).collect();
            BasedRootDatum::new(n, &simple, &simple, Some(format!("GL{n}")))?
        }
        "Sp" => {
            let n = need_n(spec, 2)?;
            if n % 2 != 0 {
                return Err(RootDatumError::BadParams(format!("Sp needs an even size, got {n}")));
            }
            let r = n / 2;
            let mut coroots: Vec<Vec<i64>> = (0..r - 1).map(|i| diff(r, i)).collect();
            let mut roots = coroots.clone();
            coroots.push(unit(r, r - 1));
            roots.push(unit(r, r - 1).iter().map(|x| 2 * x).collect());
            BasedRootDatum::new(r, &coroots, &roots, Some(format!("Sp{n}")))?
        }
        "SO_odd" => {
            let n = need_n(spec, 3)?;
            if n % 2 == 0 {
                return Err(RootDatumError::BadParams(format!("SO_odd needs an odd size, got {n}")));
            }
            let r = (n - 1) / 2;
            let mut coroots: Vec<Vec<i64>> = (0..r - 1).map(|i| diff(r, i)).collect();
            let mut roots = coroots.clone();
            coroots.push(unit(r, r - 1).iter().map(|x| 2 * x).collect());
            roots.push(unit(r, r - 1));
            BasedRootDatum::new(r, &coroots, &roots, Some(format!("SO{n}")))?
        }
        "Torus" => {
            let r = need_n(spec, 0)?;
            BasedRootDatum::new(r, &[], &[], Some(format!("T{r}")))?
        }
        "Product" => {
            if spec.factors.is_empty() {
                return Err(RootDatumError::BadParams("Product needs at least one factor".into()));
            }
            let parts = spec
                .factors
                .iter()
                .map(catalog_datum)
                .collect::<Result<Vec<_>, _>>()?;
            product_datum(&parts)
        }
        other => return Err(RootDatumError::UnknownName(other.to_string())),
    };
    Ok(d)
}

fn product_datum(parts: &[BasedRootDatum]) -> BasedRootDatum {
    let n: usize = parts.iter().map(|p| p.rank()).sum();
    let mut coroots = Vec::new();
    let mut roots = Vec::new();
    let mut offset = 0;
    for p in parts {
        for i in 0..p.semisimple_rank() {
            let mut c = vec![BigInt::zero(); n];
            let mut r = vec![BigInt::zero(); n];
            for (k, x) in p.coroot(i).into_iter().enumerate() {
                c[offset + k] = x;
            }
            for (k, x) in p.root(i).into_iter().enumerate() {
                r[offset + k] = x;
            }
            coroots.push(c);
            roots.push(r);
        }
        offset += p.rank();
    }
    let name = parts.iter().map(BasedRootDatum::label).collect::<Vec<_>>().join("×");
    BasedRootDatum::from_big(n, &coroots, &roots, Some(name)).expect("product shapes agree")
}

fn matrix_param(m: &[Vec<i64>], n: usize) -> Result<IntMatrix, RootDatumError> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(RootDatumError::BadParams(format!("action matrix must be {n}x{n}")));
    }
    Ok(IntMatrix::from_rows(m, n))
}

fn catalog_action(spec: &CatalogSpec, datum: &BasedRootDatum) -> Result<Vec<IntMatrix>, RootDatumError> {
    let n = datum.rank();
    let mut gens = Vec::new();
    if spec.name == "Product" {
        let mut offset = 0;
        for f in &spec.factors {
            let fd = catalog_datum(f)?;
            for g in catalog_action(f, &fd)? {
                let mut big = IntMatrix::identity(n);
                for i in 0..fd.rank() {
                    for j in 0..fd.rank() {
                        big[(offset + i, offset + j)] = g[(i, j)].clone();
                    }
                }
                gens.push(big);
            }
            offset += fd.rank();
        }
    }
    for m in &spec.action {
        gens.push(matrix_param(m, n)?);
    }
    Ok(gens)
}

/// Small integer entries of a matrix, for reports.
pub fn matrix_to_i64(m: &IntMatrix) -> Vec<Vec<i64>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.to_i64().expect("entry fits in i64")).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::FgAbGroup;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn sl2_is_valid_with_pairing_two() {
        let (d, _) = catalog("SL", 2).unwrap();
        assert_eq!(d.coroots(), &IntMatrix::from_rows(&[vec![1]], 1));
        assert_eq!(d.roots(), &IntMatrix::from_rows(&[vec![2]], 1));
        assert!(d.validate().is_valid());
    }

    #[test]
    fn positive_off_diagonal_is_reported() {
        let d = BasedRootDatum::new(2, &[vec![1, 0], vec![0, 1]], &[vec![2, 1], vec![1, 2]], None).unwrap();
        let r = d.validate();
        assert!(!r.is_valid());
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::OffDiagonalPositive { .. })));
        assert!(r.to_string().contains("off-diagonal positive"));
    }

    #[test]
    fn affine_type_is_rejected() {
        // Affine A1: Cartan matrix [[2,-2],[-2,2]] is not positive definite.
        let d = BasedRootDatum::new(2, &[vec![1, 0], vec![0, 1]], &[vec![2, -2], vec![-2, 2]], None).unwrap();
        assert_eq!(d.validate().violations, vec![Violation::NotPositiveDefinite, Violation::RootsDependent]);
    }

    #[test]
    fn gl2_valid_and_pi1_is_z() {
        let (d, _) = catalog("GL", 2).unwrap();
        assert!(d.validate().is_valid());
        let der = derive(&d).unwrap();
        assert_eq!(der.pi1.group, FgAbGroup::free(1));
        // e1 generates π₁.
        let e1 = der.pi1.project(&[z(1), z(0)]);
        assert!(e1 == vec![z(1)] || e1 == vec![z(-1)]);
        assert_eq!(der.ad_map.mul(&der.sc_inclusion).determinant(), z(2));
    }

    #[test]
    fn pi1_of_sl2_pgl2() {
        let (sl, _) = catalog("SL", 2).unwrap();
        assert!(derive(&sl).unwrap().pi1.group.is_trivial());
        let (pgl, _) = catalog("PGL", 2).unwrap();
        let der = derive(&pgl).unwrap();
        assert_eq!(der.pi1.group, FgAbGroup::cyclic(2));
        assert_eq!(der.pi1_torsion.group, FgAbGroup::cyclic(2));
    }

    #[test]
    fn weyl_group_orders() {
        let cases = [("SL", 2, 2), ("Sp", 4, 8), ("GL", 3, 6), ("SO_odd", 5, 8), ("SL", 4, 24), ("Sp", 6, 48)];
        for (name, n, order) in cases {
            let (d, _) = catalog(name, n).unwrap();
            assert_eq!(weyl_group(&d, GROUP_CAP).unwrap().len(), order, "{name}{n}");
        }
        let (d, _) = catalog("SL", 4).unwrap();
        assert!(matches!(weyl_group(&d, 10), Err(RootDatumError::CapExceeded(10))));
    }

    #[test]
    fn catalog_errors() {
        assert!(matches!(catalog("SL", 1), Err(RootDatumError::BadParams(_))));
        assert!(matches!(catalog("Sp", 3), Err(RootDatumError::BadParams(_))));
        assert!(matches!(catalog("E9", 3), Err(RootDatumError::UnknownName(_))));
    }

    #[test]
    fn torus_with_inversion() {
        let spec = CatalogSpec::simple("Torus", 1).with_action(vec![vec![vec![-1]]]);
        let (d, act) = catalog_spec(&spec).unwrap();
        assert_eq!(d.rank(), 1);
        assert_eq!(act.order(), 2);
        let q = pi1_coinvariants(&d, &act).unwrap();
        assert_eq!(q.group, FgAbGroup::cyclic(2));
    }

    #[test]
    fn action_must_permute_simple_coroots() {
        let (d, _) = catalog("GL", 2).unwrap();
        // λ ↦ -λ sends α to -α ∉ Δ.
        let minus = IntMatrix::from_rows(&[vec![-1, 0], vec![0, -1]], 2);
        assert!(matches!(GaloisAction::new(&d, vec![minus]), Err(RootDatumError::BadAction(_))));
        // λ ↦ -w₀λ is an automorphism of the based datum.
        let unitary = IntMatrix::from_rows(&[vec![0, -1], vec![-1, 0]], 2);
        let act = GaloisAction::new(&d, vec![unitary]).unwrap();
        assert_eq!(act.order(), 2);
        assert_eq!(pi1_coinvariants(&d, &act).unwrap().group, FgAbGroup::cyclic(2));
    }

    #[test]
    fn product_swap_is_flagged() {
        let spec = CatalogSpec::product(vec![CatalogSpec::simple("SL", 2), CatalogSpec::simple("SL", 2)])
            .with_action(vec![vec![vec![0, 1], vec![1, 0]]]);
        let (d, act) = catalog_spec(&spec).unwrap();
        assert_eq!(d.name.as_deref(), Some("SL2×SL2"));
        assert!(act.permutes_components(&d));
        let (d2, act2) = catalog("GL", 3).unwrap();
        assert!(!act2.permutes_components(&d2));
    }

    #[test]
    fn dual_is_involutive() {
        for (name, n) in [("SL", 3), ("GL", 3), ("Sp", 4), ("SO_odd", 5), ("PGL", 2), ("Torus", 2)] {
            let (d, _) = catalog(name, n).unwrap();
            let dd = d.dual().dual();
            assert_eq!(dd, d, "{name}{n}");
            assert!(d.dual().validate().is_valid());
        }
        let (sl, _) = catalog("SL", 2).unwrap();
        let (pgl, _) = catalog("PGL", 2).unwrap();
        assert_eq!(sl.dual().coroots(), pgl.coroots());
        assert_eq!(sl.dual().roots(), pgl.roots());
    }
}
