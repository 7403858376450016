//! Seeded property suites over the algebraic and arithmetic layers, and the
//! standard grid of `(datum, action, form)` cases they run on.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::form::{sharp_root_datum, sharpen, strict_forms, MetaplecticForm};
use crate::lattice::IntMatrix;
use crate::local_field::{
    cover_mul, hilbert2, tame_symbol, tau, CoverElement, FieldElement, FieldKind, LaurentPoly, LocalField, Sign,
};
use crate::obstruction::{build_gamma, exactness_violations, surjectivity_violations, torsor_violations};
use crate::root_datum::{catalog_spec, BasedRootDatum, CatalogSpec, GaloisAction};

pub const DEFAULT_SEED: u64 = 0x5eed;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random nonzero element with small valuation and a few digits of unit.
pub fn random_element<R: Rng>(field: &LocalField, rng: &mut R) -> FieldElement {
    match field.kind() {
        FieldKind::Padic => {
            let p = BigInt::from(field.p());
            let mut num = BigInt::zero();
            while num.is_zero() {
                num = BigInt::from(rng.gen_range(-400i64..=400));
            }
            let den = BigInt::from(rng.gen_range(1i64..=60));
            let v = rng.gen_range(-2i32..=2);
            let scale = num_traits::pow(p, v.unsigned_abs() as usize);
            let r = if v >= 0 {
                BigRational::new(num * scale, den)
            } else {
                BigRational::new(num, den * scale)
            };
            FieldElement::Rational(r)
        }
        FieldKind::Laurent => {
            let q = field.q();
            let low = rng.gen_range(-3i64..=3);
            let len = rng.gen_range(1usize..=4);
            let mut coeffs: Vec<u64> = (0..len).map(|_| rng.gen_range(0..q)).collect();
            coeffs[0] = rng.gen_range(1..q);
            FieldElement::Laurent(LaurentPoly::new(low, coeffs).expect("leading coefficient is nonzero"))
        }
    }
}

fn one_minus(field: &LocalField, a: &FieldElement) -> Option<FieldElement> {
    field.add(&field.one(), &field.neg(a))
}

/// Bimultiplicativity, symmetry, `{a, −a} = 1` and Steinberg
/// `{a, 1 − a} = 1`.
pub fn hilbert_violations<R: Rng>(field: &LocalField, rng: &mut R, trials: usize) -> Vec<String> {
    let mut out = Vec::new();
    let h = |a: &FieldElement, b: &FieldElement| hilbert2(field, a, b).expect("supported field");
    let show = |a: &FieldElement| field.format_element(a);
    for _ in 0..trials {
        let a = random_element(field, rng);
        let a2 = random_element(field, rng);
        let b = random_element(field, rng);
        if h(&field.mul(&a, &a2), &b) != h(&a, &b) * h(&a2, &b) {
            out.push(format!("{field}: not multiplicative at ({}, {}; {})", show(&a), show(&a2), show(&b)));
        }
        if h(&a, &b) != h(&b, &a) {
            out.push(format!("{field}: not symmetric at ({}, {})", show(&a), show(&b)));
        }
        if h(&a, &field.neg(&a)) != Sign::Plus {
            out.push(format!("{field}: {{a, −a}} ≠ 1 at {}", show(&a)));
        }
        if let Some(c) = one_minus(field, &a) {
            if h(&a, &c) != Sign::Plus {
                out.push(format!("{field}: Steinberg fails at {}", show(&a)));
            }
        }
    }
    out
}

/// Representatives of `F×/(F×)²`.
pub fn square_classes(field: &LocalField) -> Vec<FieldElement> {
    if field.kind() == FieldKind::Padic && field.p() == 2 {
        return [1, -1, 5, -5, 2, -2, 10, -10].iter().map(|&n| field.from_int(n)).collect();
    }
    let res = field.residue_field();
    let n = (1..field.q()).find(|&x| !res.is_square(x)).expect("q odd has nonsquares");
    let nonsquare = match field.kind() {
        FieldKind::Padic => field.from_int(n as i64),
        FieldKind::Laurent => FieldElement::Laurent(LaurentPoly::constant(n).expect("nonzero")),
    };
    let pi = field.uniformizer();
    vec![field.one(), nonsquare.clone(), pi.clone(), field.mul(&nonsquare, &pi)]
}

/// Each nontrivial square class pairs nontrivially with some class.
pub fn nondegeneracy_violations(field: &LocalField) -> Vec<String> {
    let classes = square_classes(field);
    classes[1..]
        .iter()
        .filter(|a| classes.iter().all(|b| hilbert2(field, a, b) == Ok(Sign::Plus)))
        .map(|a| format!("{field}: {} lies in the radical", field.format_element(a)))
        .collect()
}

/// Bimultiplicativity and the alternating property of the degree-`m` tame
/// symbol; for `m = 2`, agreement with the Hilbert symbol.
pub fn tame_violations<R: Rng>(field: &LocalField, m: u64, rng: &mut R, trials: usize) -> Vec<String> {
    let mut out = Vec::new();
    let t = |a: &FieldElement, b: &FieldElement| tame_symbol(field, m, a, b).expect("supported degree");
    for _ in 0..trials {
        let a = random_element(field, rng);
        let a2 = random_element(field, rng);
        let b = random_element(field, rng);
        if t(&field.mul(&a, &a2), &b) != (t(&a, &b) + t(&a2, &b)) % m {
            out.push(format!("{field}: tame_{m} not multiplicative"));
        }
        if t(&a, &field.neg(&a)) != 0 {
            out.push(format!("{field}: tame_{m}(a, −a) ≠ 0"));
        }
        if (t(&a, &b) + t(&b, &a)) % m != 0 {
            out.push(format!("{field}: tame_{m} not antisymmetric"));
        }
        if m == 2 && field.p() != 2 {
            let hs = hilbert2(field, &a, &b).expect("supported field");
            if (t(&a, &b) == 1) != hs.is_minus() {
                out.push(format!("{field}: tame_2 disagrees with the Hilbert symbol"));
            }
        }
    }
    out
}

/// Associativity of the Hilbert cover and the homomorphism property of `τ`.
pub fn cover_violations<R: Rng>(field: &LocalField, rng: &mut R, trials: usize) -> Vec<String> {
    let mut out = Vec::new();
    let random_cover = |rng: &mut R| CoverElement {
        a: random_element(field, rng),
        s: Sign::from_parity(rng.gen_bool(0.5)),
    };
    let mul = |x: &CoverElement, y: &CoverElement| cover_mul(field, x, y).expect("supported field");
    for _ in 0..trials {
        let (x, y, z) = (random_cover(rng), random_cover(rng), random_cover(rng));
        if mul(&mul(&x, &y), &z) != mul(&x, &mul(&y, &z)) {
            out.push(format!("{field}: cover not associative"));
        }
        let (a, b) = (random_element(field, rng), random_element(field, rng));
        let lhs = tau(field, &field.mul(&a, &b)).expect("supported field");
        let rhs = mul(&tau(field, &a).expect("supported"), &tau(field, &b).expect("supported"));
        if lhs != rhs {
            out.push(format!("{field}: τ is not a homomorphism"));
        }
        let ta = tau(field, &a).expect("supported field");
        if ta.a != field.mul(&a, &a) || ta.s != hilbert2(field, &a, &a).expect("supported") {
            out.push(format!("{field}: τ(a) ≠ (a², {{a, a}})"));
        }
    }
    out
}

/// `C(a+b, 2) − C(a, 2) − C(b, 2) = ab` and `C(2a, 2) ≡ a (mod 2)`.
pub fn binomial_violations(range: i64) -> Vec<String> {
    let c2 = |a: i64| a * (a - 1) / 2;
    let mut out = Vec::new();
    for a in -range..=range {
        if (c2(2 * a) - a).rem_euclid(2) != 0 {
            out.push(format!("C(2a, 2) ≢ a at a = {a}"));
        }
        for b in -range..=range {
            if c2(a + b) - c2(a) - c2(b) != a * b {
                out.push(format!("binomial cocycle fails at ({a}, {b})"));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct GridCase {
    pub label: String,
    pub datum: BasedRootDatum,
    pub action: GaloisAction,
    pub form: MetaplecticForm,
}

fn grid_specs() -> Vec<(CatalogSpec, &'static str, Vec<u64>)> {
    let unitary2 = vec![vec![vec![0, -1], vec![-1, 0]]];
    let unitary3 = vec![vec![vec![0, 0, -1], vec![0, -1, 0], vec![-1, 0, 0]]];
    let swap = vec![vec![vec![0, 1], vec![1, 0]]];
    vec![
        (CatalogSpec::simple("SL", 2), "trivial", vec![2, 3, 4]),
        (CatalogSpec::simple("GL", 2), "trivial", vec![2, 3, 4, 6]),
        (CatalogSpec::simple("GL", 2).with_action(unitary2), "unitary", vec![2, 4]),
        (CatalogSpec::simple("PGL", 2), "trivial", vec![2, 4]),
        (CatalogSpec::simple("Sp", 4), "trivial", vec![2, 4]),
        (CatalogSpec::simple("GL", 3), "trivial", vec![2, 3]),
        (CatalogSpec::simple("GL", 3).with_action(unitary3), "unitary", vec![2]),
        (CatalogSpec::simple("Torus", 1), "trivial", vec![6]),
        (CatalogSpec::simple("Torus", 1).with_action(vec![vec![vec![-1]]]), "inversion", vec![2, 3, 4, 6]),
        (CatalogSpec::simple("Torus", 2), "trivial", vec![2]),
        (CatalogSpec::simple("Torus", 2).with_action(swap), "swap", vec![2, 3]),
    ]
}

/// Every strictly Weyl-invariant, Galois-invariant form on each grid datum
/// and modulus.
pub fn standard_grid() -> Vec<GridCase> {
    let mut out = Vec::new();
    for (spec, action_label, moduli) in grid_specs() {
        let (datum, action) = catalog_spec(&spec).expect("grid data are valid");
        for n in moduli {
            for form in strict_forms(&datum, n) {
                if !form.galois_violations(action.generators()).is_empty() {
                    continue;
                }
                let form = form.with_cyclotomic_trivial(true);
                out.push(GridCase {
                    label: format!(
                        "{} / {action_label} / N={n} / Q={:?} b={:?}",
                        datum.label(),
                        form.q_basis(),
                        form.b_offdiag()
                    ),
                    datum: datum.clone(),
                    action: action.clone(),
                    form,
                });
            }
        }
    }
    out
}

/// Invariants of the sharp construction, including idempotence.
pub fn sharp_violations(datum: &BasedRootDatum, form: &MetaplecticForm) -> Vec<String> {
    let sharp = match sharpen(datum, form) {
        Ok(s) => s,
        Err(e) => return vec![e.to_string()],
    };
    let sd = match sharp_root_datum(&sharp) {
        Ok(d) => d,
        Err(e) => return vec![e.to_string()],
    };
    let mut out = Vec::new();
    match sharpen(&sd, &sharp.restricted_form) {
        Ok(again) => {
            if again.basis != IntMatrix::identity(sd.rank()) || &again.coroots != sd.coroots() {
                out.push("sharpen is not idempotent".to_string());
            }
        }
        Err(e) => out.push(format!("second sharpen failed: {e}")),
    }
    out
}

/// Exactness, surjectivity and the torsor property on `[−2N, 2N]`.
pub fn gamma_violations(case: &GridCase) -> Vec<String> {
    let seq = match build_gamma(&case.datum, &case.action, &case.form) {
        Ok(s) => s,
        Err(e) => return vec![e.to_string()],
    };
    let window = 2 * i64::try_from(case.form.modulus().clone()).expect("small modulus");
    let mut out = exactness_violations(&seq, window);
    out.extend(surjectivity_violations(&seq));
    out.extend(torsor_violations(&seq, window));
    out
}

pub fn property_fields() -> Vec<LocalField> {
    ["Qp:2", "Qp:3", "Qp:5", "Qp:7", "Fq((t)):3", "Fq((t)):5", "Fq((t)):9:x^2+x+2"]
        .iter()
        .map(|d| LocalField::parse(d).expect("known descriptor"))
        .collect()
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every suite with the given seed.
pub fn run_all(seed: u64, trials: usize) -> Vec<SuiteResult> {
    let mut rng = rng(seed);
    let mut results = Vec::new();
    let grid = standard_grid();
    results.push(SuiteResult {
        name: "sharp construction".into(),
        cases: grid.len(),
        failures: grid.iter().flat_map(|c| sharp_violations(&c.datum, &c.form)).collect(),
    });
    results.push(SuiteResult {
        name: "gamma sequence".into(),
        cases: grid.len(),
        failures: grid.iter().flat_map(gamma_violations).collect(),
    });
    let fields = property_fields();
    let mut push = |name: &str, failures: Vec<String>| {
        results.push(SuiteResult {
            name: name.into(),
            cases: fields.len(),
            failures,
        })
    };
    push("hilbert symbol", fields.iter().flat_map(|f| hilbert_violations(f, &mut rng, trials)).collect());
    push("nondegeneracy", fields.iter().flat_map(nondegeneracy_violations).collect());
    push(
        "tame symbol",
        fields
            .iter()
            .filter(|f| f.p() != 2)
            .flat_map(|f| {
                let m = f.q() - 1;
                let mut v = tame_violations(f, 2, &mut rng, trials);
                v.extend(tame_violations(f, m, &mut rng, trials));
                v
            })
            .collect(),
    );
    push("hilbert cover", fields.iter().flat_map(|f| cover_violations(f, &mut rng, trials)).collect());
    push("binomial cocycle", binomial_violations(100));
    results
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_large_enough() {
        let grid = standard_grid();
        assert!(grid.len() >= 12);
        let families: std::collections::BTreeSet<_> =
            grid.iter().map(|c| c.label.split(" / N=").next().unwrap().to_string()).collect();
        assert!(families.len() >= 10);
    }

    #[test]
    fn suites_pass_small() {
        for r in run_all(1, 20) {
            assert!(r.passed(), "{}: {:?}", r.name, &r.failures[..r.failures.len().min(3)]);
        }
    }
}
