//! Finitely generated abelian groups in invariant-factor form.
//!
//! A group `Z/d_1 ⊕ ... ⊕ Z/d_k ⊕ Z^r` has elements stored as integer
//! vectors of length `k + r`: torsion coordinates first (reduced into
//! `[0, d_i)`), free coordinates after. Every constructor that produces a
//! group from a presentation also returns the projection from the presenting
//! lattice and lifts of the canonical generators, so elements can be moved
//! between presentations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::snf::{hermite_basis, integer_kernel, lattice_basis, smith_normal_form, solve};
use super::LatticeError;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FgAbGroup {
    torsion: Vec<BigInt>,
    free_rank: usize,
}

impl FgAbGroup {
    /// Checks the divisibility chain and `d_i ≥ 2`.
    pub fn new(torsion: Vec<BigInt>, free_rank: usize) -> Result<Self, LatticeError> {
        if torsion.iter().any(|d| d < &BigInt::from(2)) {
            return Err(LatticeError::BadInvariantFactors(
                "invariant factors must be at least 2".into(),
            ));
        }
        if torsion.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(LatticeError::BadInvariantFactors(
                "invariant factors must form a divisibility chain".into(),
            ));
        }
        Ok(Self { torsion, free_rank })
    }

    pub fn trivial() -> Self {
        Self {
            torsion: vec![],
            free_rank: 0,
        }
    }

    pub fn free(rank: usize) -> Self {
        Self {
            torsion: vec![],
            free_rank: rank,
        }
    }

    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => Self::free(1),
            1 => Self::trivial(),
            _ => Self {
                torsion: vec![BigInt::from(n)],
                free_rank: 0,
            },
        }
    }

    /// Builds `⊕ Z/n_i` from arbitrary cyclic orders (not necessarily a
    /// divisibility chain), returning the group in invariant-factor form.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let rel = IntMatrix::diagonal(&orders.iter().map(|&n| BigInt::from(n)).collect::<Vec<_>>());
        Presentation::new(orders.len(), rel).quotient().group
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// Number of canonical generators.
    pub fn ngens(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d))
    }

    /// Exponent of the torsion part (1 for a torsion-free group).
    pub fn exponent(&self) -> BigInt {
        self.torsion.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// Order of canonical generator `i`; zero stands for infinite order.
    pub fn generator_order(&self, i: usize) -> BigInt {
        self.torsion.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Diagonal relation matrix presenting this group on its generators.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.ngens();
        let mut m = IntMatrix::zeros(n, self.torsion.len());
        for (i, d) in self.torsion.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn presentation(&self) -> Presentation {
        Presentation::new(self.ngens(), self.relation_matrix())
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.ngens()]
    }

    pub fn generator(&self, i: usize) -> Vec<BigInt> {
        let mut v = self.zero();
        v[i] = BigInt::one();
        v
    }

    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ngens(), "element has wrong length");
        v.iter()
            .enumerate()
            .map(|(i, x)| match self.torsion.get(i) {
                Some(d) => x.mod_floor(d),
                None => x.clone(),
            })
            .collect()
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&s)
    }

    pub fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.reduce(&s)
    }

    pub fn neg(&self, a: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().map(|x| -x).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, k: &BigInt, a: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().map(|x| k * x).collect();
        self.reduce(&s)
    }

    /// Additive order of an element; `None` when infinite.
    pub fn element_order(&self, a: &[BigInt]) -> Option<BigInt> {
        let a = self.reduce(a);
        if a[self.torsion.len()..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(
            self.torsion
                .iter()
                .zip(&a)
                .fold(BigInt::one(), |acc, (d, x)| acc.lcm(&(d / x.gcd(d)))),
        )
    }

    /// All elements of the group, with free coordinates truncated to
    /// `[-window, window]`. For finite groups this is the whole group.
    pub fn elements_in_window(&self, window: i64) -> Vec<Vec<BigInt>> {
        let mut ranges: Vec<(BigInt, BigInt)> = self
            .torsion
            .iter()
            .map(|d| (BigInt::zero(), d - 1))
            .collect();
        ranges.extend((0..self.free_rank).map(|_| (BigInt::from(-window), BigInt::from(window))));
        let mut out = vec![vec![]];
        for (lo, hi) in ranges {
            let mut next = Vec::new();
            for prefix in &out {
                let mut x = lo.clone();
                while x <= hi {
                    let mut p = prefix.clone();
                    p.push(x.clone());
                    next.push(p);
                    x += 1;
                }
            }
            out = next;
        }
        out
    }

    /// All elements; panics on infinite groups.
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        assert!(self.is_finite(), "cannot enumerate an infinite group");
        self.elements_in_window(0)
    }

    /// Whether every invariant factor divides `n` and the group is finite.
    pub fn is_torsion_of(&self, n: &BigInt) -> bool {
        self.is_finite() && self.torsion.iter().all(|d| n.is_multiple_of(d))
    }

    /// Torsion subgroup, returned with its inclusion.
    pub fn torsion_subgroup(&self) -> Subgroup {
        let t = self.torsion.len();
        let group = FgAbGroup {
            torsion: self.torsion.clone(),
            free_rank: 0,
        };
        let mut m = IntMatrix::zeros(self.ngens(), t);
        for i in 0..t {
            m[(i, i)] = BigInt::one();
        }
        let inclusion = AbHom {
            source: group.clone(),
            target: self.clone(),
            matrix: m,
        };
        Subgroup { group, inclusion }
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// `Z^generators / column-span(relations)`.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub generators: usize,
    pub relations: IntMatrix,
}

/// A group computed from a presentation, with the projection from the
/// presenting lattice (rows indexed by group coordinates) and lifts of the
/// canonical generators (columns).
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FgAbGroup,
    pub proj: IntMatrix,
    pub lifts: IntMatrix,
}

impl Quotient {
    pub fn project(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.group.reduce(&self.proj.mul_vec(v))
    }

    pub fn lift(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.lifts.mul_vec(x)
    }

    /// Projection as a homomorphism from the given source group (typically a
    /// free lattice or the group the presentation came from).
    pub fn projection_from(&self, source: &FgAbGroup) -> Result<AbHom, LatticeError> {
        AbHom::new(source.clone(), self.group.clone(), self.proj.clone())
    }
}

impl Presentation {
    pub fn new(generators: usize, relations: IntMatrix) -> Self {
        assert_eq!(relations.rows(), generators, "relation vectors have wrong length");
        Self {
            generators,
            relations,
        }
    }

    pub fn free(generators: usize) -> Self {
        Self::new(generators, IntMatrix::zeros(generators, 0))
    }

    pub fn with_relations(&self, extra: &IntMatrix) -> Self {
        Self::new(self.generators, self.relations.hstack(extra))
    }

    pub fn quotient(&self) -> Quotient {
        let s = smith_normal_form(&self.relations);
        let n = self.generators;
        let mut torsion = Vec::new();
        let mut keep = Vec::new();
        for i in 0..n {
            if i < s.rank {
                let d = &s.d[(i, i)];
                if d.is_one() {
                    continue;
                }
                torsion.push(d.clone());
            }
            keep.push(i);
        }
        let free_rank = n - s.rank;
        let group = FgAbGroup { torsion, free_rank };
        let proj = IntMatrix::from_rows(&keep.iter().map(|&i| s.u.row(i)).collect::<Vec<_>>(), n);
        let lifts = IntMatrix::from_cols(&keep.iter().map(|&i| s.u_inv.col(i)).collect::<Vec<_>>(), n);
        Quotient { group, proj, lifts }
    }

    /// Coinvariants under the given automorphisms of the generating lattice:
    /// the quotient by `(g - 1)x` for each generator `g` and basis vector `x`.
    /// Each `g` must carry the relation lattice into itself.
    pub fn coinvariants(&self, actions: &[IntMatrix]) -> Result<Presentation, LatticeError> {
        let n = self.generators;
        let mut extra = Vec::new();
        for (k, g) in actions.iter().enumerate() {
            if g.rows() != n || g.cols() != n {
                return Err(LatticeError::IncompatibleAction(format!(
                    "action {k} is {}x{}, expected {n}x{n}",
                    g.rows(),
                    g.cols()
                )));
            }
            for j in 0..self.relations.cols() {
                let image = g.mul_vec(&self.relations.col(j));
                if solve(&self.relations, &image).is_none() {
                    return Err(LatticeError::IncompatibleAction(format!(
                        "action {k} does not preserve relation {j}"
                    )));
                }
            }
            extra.push(g.sub(&IntMatrix::identity(n)));
        }
        Ok(self.with_relations(&IntMatrix::hstack_all(n, &extra)))
    }
}

/// `Z^rows / column-span(M)`.
pub fn cokernel(m: &IntMatrix) -> Quotient {
    Presentation::new(m.rows(), m.clone()).quotient()
}

/// Coinvariants of a group under automorphisms given on its canonical
/// generators, with the projection from the group's coordinates.
pub fn coinvariants(group: &FgAbGroup, actions: &[IntMatrix]) -> Result<Quotient, LatticeError> {
    Ok(group.presentation().coinvariants(actions)?.quotient())
}

/// Homomorphism between groups in canonical form, given by its action on
/// canonical generators (column `j` is the image of generator `j`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbHom {
    pub source: FgAbGroup,
    pub target: FgAbGroup,
    pub matrix: IntMatrix,
}

#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: FgAbGroup,
    pub inclusion: AbHom,
}

impl AbHom {
    /// Rejects matrices that do not respect the torsion orders of the source.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self, LatticeError> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(LatticeError::IllDefinedHom(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ngens(),
                source.ngens()
            )));
        }
        for (i, d) in source.torsion.iter().enumerate() {
            let image: Vec<BigInt> = matrix.col(i).iter().map(|x| x * d).collect();
            if !target.is_zero_element(&image) {
                return Err(LatticeError::IllDefinedHom(format!(
                    "generator {i} has order {d} but its image does not"
                )));
            }
        }
        let matrix = {
            let mut m = matrix;
            for j in 0..m.cols() {
                let c = target.reduce(&m.col(j));
                m.set_col(j, &c);
            }
            m
        };
        Ok(Self {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        Self {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.ngens()),
        }
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.target.reduce(&self.matrix.mul_vec(x))
    }

    pub fn compose(&self, first: &AbHom) -> Result<AbHom, LatticeError> {
        AbHom::new(first.source.clone(), self.target.clone(), self.matrix.mul(&first.matrix))
    }

    /// Lattice `{x ∈ Z^ngens(source) : f(x) = 0 in target}`, Hermite basis
    /// in columns.
    fn kernel_lattice(&self) -> IntMatrix {
        let n_src = self.source.ngens();
        let combined = self.matrix.hstack(&self.target.relation_matrix());
        let k = integer_kernel(&combined);
        let gens: Vec<Vec<BigInt>> = (0..k.cols()).map(|j| k.col(j)[..n_src].to_vec()).collect();
        lattice_basis(&gens, n_src)
    }

    /// Kernel and image, each in invariant-factor form with its inclusion.
    pub fn kernel_image(&self) -> (Subgroup, Subgroup) {
        let kb = self.kernel_lattice();
        let rel = self.source.relation_matrix();
        // Express the source relations in the kernel basis.
        let coords: Vec<Vec<BigInt>> = rel
            .col_vectors()
            .iter()
            .map(|r| solve(&kb, r).expect("source relations lie in the kernel lattice"))
            .collect();
        let ker_q = Presentation::new(kb.cols(), IntMatrix::from_cols(&coords, kb.cols())).quotient();
        let ker_incl = self.source_hom(&ker_q.group, &kb.mul(&ker_q.lifts));

        let im_q = Presentation::new(self.source.ngens(), kb.clone()).quotient();
        let im_matrix = self.matrix.mul(&im_q.lifts);
        let im_incl = AbHom::new(im_q.group.clone(), self.target.clone(), im_matrix)
            .expect("image inclusion is well defined");
        (
            Subgroup {
                group: ker_q.group,
                inclusion: ker_incl,
            },
            Subgroup {
                group: im_q.group,
                inclusion: im_incl,
            },
        )
    }

    fn source_hom(&self, from: &FgAbGroup, matrix: &IntMatrix) -> AbHom {
        AbHom::new(from.clone(), self.source.clone(), matrix.clone())
            .expect("kernel inclusion is well defined")
    }

    /// `target / image`, with the projection from the target's coordinates.
    pub fn cokernel(&self) -> Quotient {
        self.target
            .presentation()
            .with_relations(&self.matrix)
            .quotient()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_image().0.group.is_trivial()
    }

    /// Membership of a target element in the image, by solving the lifting
    /// problem directly.
    pub fn in_image(&self, y: &[BigInt]) -> bool {
        let combined = self.matrix.hstack(&self.target.relation_matrix());
        solve(&combined, y).is_some()
    }

    /// Hermite basis of the lattice `image + relations(target)` inside
    /// `Z^ngens(target)`; coset representatives reduce against it.
    pub fn image_lattice(&self) -> Vec<Vec<BigInt>> {
        let combined = self.matrix.hstack(&self.target.relation_matrix());
        hermite_basis(&combined.col_vectors(), self.target.ngens())
    }
}

/// `Hom(G, Z/n)` for an `n`-torsion group `G`.
///
/// The dual of `⊕ Z/d_i` is again `⊕ Z/d_i`: the dual coordinate `c_i`
/// stands for the character sending generator `i` to `c_i · n/d_i`.
#[derive(Clone, Debug)]
pub struct PontryaginDual {
    pub group: FgAbGroup,
    pub modulus: BigInt,
    base: FgAbGroup,
}

impl PontryaginDual {
    /// Value in `Z/n` of the character `chi` on the element `x` of the
    /// original group.
    pub fn evaluate(&self, chi: &[BigInt], x: &[BigInt]) -> BigInt {
        let chi = self.group.reduce(chi);
        let x = self.base.reduce(x);
        let mut acc = BigInt::zero();
        for ((c, g), d) in chi.iter().zip(&x).zip(self.base.torsion()) {
            acc += c * g * (&self.modulus / d);
        }
        acc.mod_floor(&self.modulus)
    }

    /// The canonical evaluation map `G → Hom(Hom(G, Z/n), Z/n)`.
    pub fn double_dual_map(&self) -> Result<(PontryaginDual, AbHom), LatticeError> {
        let dd = pontryagin_dual(&self.group, &self.modulus)?;
        let n = self.base.ngens();
        let mut m = IntMatrix::zeros(dd.group.ngens(), n);
        for j in 0..n {
            let x = self.base.generator(j);
            for i in 0..self.group.ngens() {
                // ev_x(chi_i) = chi_i(x); as a dual coordinate divide by n/d_i.
                let v = self.evaluate(&self.group.generator(i), &x);
                let step = &self.modulus / &self.group.torsion()[i];
                m[(i, j)] = v / step;
            }
        }
        let map = AbHom::new(self.base.clone(), dd.group.clone(), m)?;
        Ok((dd, map))
    }
}

pub fn pontryagin_dual(g: &FgAbGroup, n: &BigInt) -> Result<PontryaginDual, LatticeError> {
    if !n.is_positive() {
        return Err(LatticeError::NotTorsion(format!("modulus {n} must be positive")));
    }
    if !g.is_finite() {
        return Err(LatticeError::NotTorsion(format!("{g} has a free part")));
    }
    if let Some(d) = g.torsion().iter().find(|d| !n.is_multiple_of(d)) {
        return Err(LatticeError::NotTorsion(format!(
            "invariant factor {d} does not divide {n}"
        )));
    }
    Ok(PontryaginDual {
        group: g.clone(),
        modulus: n.clone(),
        base: g.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::matrix::int_vec;

    fn z(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn cokernel_diagonal_two() {
        let q = cokernel(&IntMatrix::from_cols(&[vec![2, 0], vec![0, 2]], 2));
        assert_eq!(q.group, FgAbGroup::new(vec![z(2), z(2)], 0).unwrap());
    }

    #[test]
    fn cokernel_two_minus_two() {
        let q = cokernel(&IntMatrix::from_cols(&[vec![2, -2]], 2));
        assert_eq!(q.group, FgAbGroup::new(vec![z(2)], 1).unwrap());
        assert_eq!(q.project(&int_vec(&[0, 2])), q.project(&int_vec(&[2, 0])));
        assert!(q.group.is_zero_element(&q.project(&int_vec(&[2, -2]))));
        assert!(!q.group.is_zero_element(&q.project(&int_vec(&[1, -1]))));
        assert_eq!(q.group.to_string(), "Z/2 ⊕ Z");
    }

    #[test]
    fn cokernel_no_relations() {
        let q = cokernel(&IntMatrix::zeros(1, 0));
        assert_eq!(q.group, FgAbGroup::free(1));
    }

    #[test]
    fn lifts_project_to_generators() {
        let q = cokernel(&IntMatrix::from_cols(&[vec![2, 4, 6], vec![0, 3, 9]], 3));
        for i in 0..q.group.ngens() {
            let lift = q.lifts.col(i);
            assert_eq!(q.project(&lift), q.group.generator(i));
        }
    }

    #[test]
    fn times_two_on_z4() {
        let g = FgAbGroup::cyclic(4);
        let f = AbHom::new(g.clone(), g.clone(), IntMatrix::from_rows(&[vec![2]], 1)).unwrap();
        let (ker, im) = f.kernel_image();
        assert_eq!(ker.group, FgAbGroup::cyclic(2));
        assert_eq!(im.group, FgAbGroup::cyclic(2));
        // Oracle: enumerate the four elements.
        let kernel_count = (0..4).filter(|&x| (2 * x) % 4 == 0).count();
        let image_count = (0..4).map(|x| (2 * x) % 4).collect::<std::collections::BTreeSet<_>>().len();
        assert_eq!((kernel_count, image_count), (2, 2));
        // Inclusions land where they should.
        let kgen = ker.inclusion.apply(&ker.group.generator(0));
        assert_eq!(kgen, int_vec(&[2]));
        assert_eq!(im.inclusion.apply(&im.group.generator(0)), int_vec(&[2]));
    }

    #[test]
    fn identity_on_z6() {
        let g = FgAbGroup::cyclic(6);
        let (ker, im) = AbHom::identity(&g).kernel_image();
        assert!(ker.group.is_trivial());
        assert_eq!(im.group, g);
    }

    #[test]
    fn zero_map_z_to_z3() {
        let f = AbHom::new(FgAbGroup::free(1), FgAbGroup::cyclic(3), IntMatrix::zeros(1, 1)).unwrap();
        let (ker, im) = f.kernel_image();
        assert_eq!(ker.group, FgAbGroup::free(1));
        assert!(im.group.is_trivial());
    }

    #[test]
    fn ill_defined_hom_rejected() {
        // Z/2 -> Z/3 sending 1 to 1 is not a homomorphism.
        let r = AbHom::new(FgAbGroup::cyclic(2), FgAbGroup::cyclic(3), IntMatrix::identity(1));
        assert!(matches!(r, Err(LatticeError::IllDefinedHom(_))));
    }

    #[test]
    fn dual_of_z2() {
        let d = pontryagin_dual(&FgAbGroup::cyclic(2), &z(2)).unwrap();
        assert_eq!(d.group, FgAbGroup::cyclic(2));
    }

    #[test]
    fn dual_of_z2_z4_matches_enumeration() {
        let g = FgAbGroup::new(vec![z(2), z(4)], 0).unwrap();
        let d = pontryagin_dual(&g, &z(4)).unwrap();
        assert_eq!(d.group, g);
        // Oracle: homomorphisms Z/2 ⊕ Z/4 -> Z/4 are pairs (a, b) with
        // 2a ≡ 0 and 4b ≡ 0 mod 4.
        let homs: Vec<(i64, i64)> = (0..4)
            .flat_map(|a| (0..4).map(move |b| (a, b)))
            .filter(|&(a, b)| (2 * a) % 4 == 0 && (4 * b) % 4 == 0)
            .collect();
        assert_eq!(homs.len(), 8);
        // Every enumerated hom is realized by exactly one dual element.
        for (a, b) in homs {
            let hits = d
                .group
                .elements()
                .into_iter()
                .filter(|chi| {
                    d.evaluate(chi, &int_vec(&[1, 0])) == z(a) && d.evaluate(chi, &int_vec(&[0, 1])) == z(b)
                })
                .count();
            assert_eq!(hits, 1);
        }
    }

    #[test]
    fn dual_requires_torsion() {
        assert!(pontryagin_dual(&FgAbGroup::cyclic(3), &z(2)).is_err());
        assert!(pontryagin_dual(&FgAbGroup::free(1), &z(2)).is_err());
    }

    #[test]
    fn coinvariants_examples() {
        let minus = IntMatrix::from_rows(&[vec![-1]], 1);
        let q = coinvariants(&FgAbGroup::free(1), &[minus]).unwrap();
        assert_eq!(q.group, FgAbGroup::cyclic(2));

        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]], 2);
        let q = coinvariants(&FgAbGroup::free(2), &[swap]).unwrap();
        assert_eq!(q.group, FgAbGroup::free(1));
        assert_eq!(q.project(&int_vec(&[1, 0])), q.project(&int_vec(&[0, 1])));
        assert_ne!(q.project(&int_vec(&[1, 0])), q.project(&int_vec(&[0, 0])));

        let g = FgAbGroup::new(vec![z(2), z(6)], 1).unwrap();
        let q = coinvariants(&g, &[IntMatrix::identity(3)]).unwrap();
        assert_eq!(q.group, g);
    }

    #[test]
    fn coinvariants_rejects_incompatible_action() {
        // Swapping the factors of Z/2 ⊕ Z/4 does not respect the relations.
        let g = FgAbGroup::new(vec![z(2), z(4)], 0).unwrap();
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]], 2);
        assert!(matches!(
            coinvariants(&g, &[swap]),
            Err(LatticeError::IncompatibleAction(_))
        ));
    }

    #[test]
    fn element_orders() {
        let g = FgAbGroup::new(vec![z(2), z(6)], 1).unwrap();
        assert_eq!(g.element_order(&int_vec(&[1, 2, 0])), Some(z(6)));
        assert_eq!(g.element_order(&int_vec(&[0, 0, 1])), None);
        assert_eq!(g.to_string(), "Z/2 ⊕ Z/6 ⊕ Z");
        assert_eq!(FgAbGroup::from_cyclic_orders(&[4, 6]), FgAbGroup::new(vec![z(2), z(12)], 0).unwrap());
    }
}
